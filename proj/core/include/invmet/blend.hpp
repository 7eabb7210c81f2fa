#pragma once

#include <memory>

#include "invmet/grid_graph.hpp"

namespace invmet {

// C-infinity step built from f(x) = exp(-1/x):
//   value 0 for x <= lo, 1 for x >= hi, strictly increasing between,
//   s(t) = f(t) / (f(t) + f(1-t)) on the unit interval.
class Cutoff {
public:
    Cutoff(double lo, double hi);
    double lo() const { return lo_; }
    double hi() const { return hi_; }
    double operator()(double x) const;

private:
    double lo_, hi_;
};

// Metric distance to the boundary on a grid: multi-source Dijkstra over the
// stencil graph with fractional first steps on boundary-crossing segments,
// central-difference gradients, and nearest-boundary-point estimates from the
// shortest-path tree.  Immutable after construction; queries are pure.
class DistanceGrid {
public:
    // Requires a field that is smooth on the closure (Averaged / Euclidean /
    // grid-interpolated provenance); throws InvalidInput otherwise and
    // GridTooCoarse when the grid disconnects the interior.
    DistanceGrid(const PlanarDomain& domain, const MetricField& h, const GridSpec& spec);

    const GridSpec& spec() const { return spec_; }
    const PlanarDomain& domain() const { return *domain_; }
    const MetricField& metric() const { return h_; }
    double cell() const { return std::max(spec_.dx(), spec_.dy()); }

    // Bilinear interpolants.  dist() is signed: a thin exterior ring carries
    // negative h-length extensions so boundary cells interpolate smoothly.
    double dist(Complex z) const;
    Vec2 grad(Complex z) const;

    // Metric projection to the boundary: descend the h-gradient flow of the
    // distance field, finish with Newton steps.  Accepts points in a thin
    // two-sided collar around the boundary as well.
    Complex project(Complex z) const;

    bool node_interior(int ix, int iy) const { return state_[spec_.index(ix, iy)] == 1; }
    double node_dist(int ix, int iy) const { return dist_[spec_.index(ix, iy)]; }
    Vec2 node_grad(int ix, int iy) const { return grad_[spec_.index(ix, iy)]; }
    Complex node_foot(int ix, int iy) const { return foot_[spec_.index(ix, iy)]; }

    double max_dist() const { return max_dist_; }

private:
    std::shared_ptr<const PlanarDomain> domain_;
    MetricField h_;
    GridSpec spec_;
    std::vector<double> dist_;        // interior: h-distance; ring: negative extension
    std::vector<Vec2> grad_;
    std::vector<Complex> foot_;
    std::vector<uint8_t> state_;      // 0 exterior, 1 interior, 2 extension ring
    double max_dist_ = 0.0;
};

// Equivalent free-function spelling of the constructor.
DistanceGrid h_distance_field(const PlanarDomain& domain, const MetricField& h,
                              const GridSpec& spec);

// H = (1 - eta(dist)) h + eta(dist) b with eta the (eps/3, 2 eps/3) cutoff:
// exactly h near the boundary, exactly b past 2 eps/3.
MetricField blend_H(const MetricField& h, const MetricField& b,
                    std::shared_ptr<const DistanceGrid> dist, double eps);

// Product metric on the boundary tube:
//   H*(v,w) = h(pi_* v, pi_* w) + (d dist)(v) (d dist)(w),
// with pi the metric projection and d dist the stored gradient.  SPD is
// enforced by symmetrization and an eigenvalue floor of 1e-10.
Sym2 product_metric_Hstar(const MetricField& h, const DistanceGrid& dist, Complex z,
                          double tube_width);

// Htilde = mu(dist) H + (1 - mu(dist)) H* with mu the (delta/3, 2 delta/3)
// cutoff; the H slot must come from blend_H with eps = 2 delta, so H equals h
// throughout the region where H* participates.
MetricField blend_Htilde(const MetricField& h, const MetricField& H,
                         std::shared_ptr<const DistanceGrid> dist, double delta);

// Layer decomposition with the eps = 2 delta convention:
//   P: dist < delta/3, A: delta/3 <= dist < 4 delta/3, B: otherwise.
enum class Layer { P, A, B };
Layer classify_layer(double dist_value, double delta);
char layer_char(Layer layer);

}  // namespace invmet
