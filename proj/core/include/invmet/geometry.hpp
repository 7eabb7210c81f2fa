#pragma once

#include <optional>
#include <string>

#include "invmet/grid_graph.hpp"

namespace invmet {

// Levi-Civita symbols Gamma^k_ij at z; metric derivatives are analytic when
// the field carries them, central differences otherwise (one-sided near the
// boundary, flagged `clipped`).
struct ChristoffelResult {
    double gamma[2][2][2];  // [k][i][j]
    bool clipped = false;
};
ChristoffelResult christoffel(const MetricField& field, Complex z, double fd_step);

// Classical 4th-order integration of gamma'' + Gamma(gamma', gamma') = 0,
// arclength-parameterized by h-normalizing the initial velocity.  Stops early
// (exited = true) if the path leaves the domain.
struct GeodesicPath {
    std::vector<double> t;
    std::vector<Complex> x;
    std::vector<Vec2> v;
    bool exited = false;

    double h_speed(const MetricField& field, size_t i) const;
};
GeodesicPath geodesic(const MetricField& field, Complex start, Vec2 velocity, double length,
                      int steps);

// Gauss curvature: conformal fields use K = -Lap(log lambda) / (2 lambda)
// with a 5-point Laplacian, general fields the Brioschi formula on
// finite-difference metric derivatives.
struct CurvatureResult {
    double value = 0.0;
    bool clipped = false;
};
CurvatureResult gauss_curvature(const MetricField& field, Complex z, double fd_step);

// Metric distance p -> q: grid Dijkstra seeds a polyline which is then locally
// shortened off-grid (removes the stencil anisotropy), Richardson-extrapolated
// over two grid levels.  Throws Unreachable across components.
double distance(const MetricField& field, Complex p, Complex q, const GridSpec& spec);

// Grid indicator of the metric ball B(center, radius).
struct BallIndicator {
    GridSpec spec;
    Complex center;
    double radius = 0.0;
    std::vector<uint8_t> inside;
    std::vector<double> node_dist;  // +inf where unreached/exterior

    bool contains(Complex z) const;  // bilinear on the distance field
    size_t count() const;
};
BallIndicator metric_ball(const MetricField& field, Complex center, double radius,
                          const GridSpec& spec);
// |A and B| / |A or B| over grid nodes.
double jaccard(const BallIndicator& a, const BallIndicator& b);
// Jaccard between the ball and its preimage under `aut` (equivariance probe).
double jaccard_under_map(const BallIndicator& ball, const Automorphism& aut);

// Karcher-style common fixed point: minimizes F(x) = sum w_k d(x, a_k x)^2 by
// multiscale descent on grid nodes plus a local quadratic refinement; returns
// the minimizer when F < 1e-4 diam^2, None otherwise (after 5 deterministic
// restarts).
std::optional<Complex> common_fixed_point(const CompactGroup& group, const MetricField& field,
                                          Complex seed);

struct RigidityEntry {
    std::string element;
    double fix_residual = 0.0;         // max |a(P_i) - P_i| over the pinned points
    double derivative_residual = 0.0;  // |a'(P) - 1| (boundary scan only)
    double max_deviation = 0.0;        // max |a(z) - z| over interior samples
};
struct RigidityReport {
    std::vector<RigidityEntry> entries;
    double tol = 0.0;
    double deviation_tol = 0.0;
    bool identity_only = false;  // every reported element is the identity
};

// Scans the group for elements fixing `boundary_point` with derivative 1 and
// reports how far each such element is from the identity on interior samples.
RigidityReport boundary_rigidity_check(const CompactGroup& group, Complex boundary_point,
                                       double tol);

// Scans for elements fixing every listed boundary point.  In one complex
// dimension the theorem wants 2n = 2 points in general position; passing
// fewer requires require_general_position = false (the annulus single-point
// demonstration), otherwise InsufficientPoints.
RigidityReport general_position_fix_check(const CompactGroup& group,
                                          std::span<const Complex> points, double tol,
                                          bool require_general_position = true);

}  // namespace invmet
