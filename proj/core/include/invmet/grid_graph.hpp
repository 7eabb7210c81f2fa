#pragma once

#include <cstdint>
#include <optional>

#include "invmet/metric.hpp"

namespace invmet {

// Shortest paths on a rectangular grid with metric edge weights.  Neighbors
// are all co-prime integer offsets with |dx|, |dy| <= stencil_radius; edge
// weights are h-lengths of the straight segments with the metric frozen at
// the midpoint.  Edges whose segment leaves the domain are dropped; on the
// boundary side they contribute fractional first steps instead.
//
// Instances are built, queried, and discarded within one call chain; nothing
// mutable escapes, so concurrent callers simply build their own.
class GridGraph {
public:
    GridGraph(const PlanarDomain& domain, const MetricField& field, const GridSpec& spec,
              int stencil_radius);

    const GridSpec& spec() const { return spec_; }
    bool interior_node(size_t idx) const { return interior_[idx] != 0; }
    Complex node_point(size_t idx) const {
        return spec_.node(static_cast<int>(idx % spec_.nx), static_cast<int>(idx / spec_.nx));
    }

    // Multi-source distance to the domain boundary.  pred < 0 marks a source
    // node whose first step is the fractional segment to `foot`.
    struct BoundaryField {
        std::vector<double> dist;   // +inf on exterior nodes
        std::vector<int32_t> pred;
        std::vector<Complex> foot;  // nearest-boundary estimate, propagated
    };
    // Throws GridTooCoarse if an interior node is unreachable.
    BoundaryField boundary_distances() const;

    // Single-source field from an arbitrary interior point (virtual source).
    struct PointField {
        Complex source;
        std::vector<double> dist;  // +inf where unreached
        std::vector<int32_t> pred; // -2 marks direct-from-source initialization
    };
    PointField point_distances(Complex source) const;

    // Final-hop completion; throws Unreachable when target cannot connect.
    double distance_to(const PointField& field, Complex target) const;
    // Node polyline source -> target (both endpoints included).
    std::vector<Complex> path(const PointField& field, Complex target) const;

    // h-length of a segment, midpoint rule, metric evaluated directly.
    double hlen(Complex a, Complex b) const;

    // First boundary crossing along a -> b, as a parameter in (0,1), if any.
    std::optional<double> first_exit(Complex a, Complex b) const;

private:
    double edge_weight(int ix, int iy, int jx, int jy) const;
    bool in_grid(int ix, int iy) const { return ix >= 0 && iy >= 0 && ix < spec_.nx && iy < spec_.ny; }

    const PlanarDomain& domain_;
    const MetricField& field_;
    GridSpec spec_;
    std::vector<std::pair<int, int>> offsets_;  // directed
    std::vector<uint8_t> interior_;
    // Metric cache on the half-step lattice (midpoints of all stencil edges).
    mutable std::vector<Sym2> mid_metric_;
    mutable std::vector<uint8_t> mid_state_;
};

}  // namespace invmet
