#include "invmet/grid_graph.hpp"

#include <algorithm>
#include <limits>
#include <numeric>
#include <queue>

namespace invmet {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

int gcd_int(int a, int b) { return std::gcd(a, b); }

using PQItem = std::pair<double, size_t>;
using MinQueue = std::priority_queue<PQItem, std::vector<PQItem>, std::greater<PQItem>>;

}  // namespace

GridGraph::GridGraph(const PlanarDomain& domain, const MetricField& field, const GridSpec& spec,
                     int stencil_radius)
    : domain_(domain), field_(field), spec_(spec) {
    spec_.validate();
    if (stencil_radius < 1 || stencil_radius > 6)
        throw InvalidInput("GridGraph: stencil radius must be in 1..6");
    for (int dx = -stencil_radius; dx <= stencil_radius; ++dx)
        for (int dy = -stencil_radius; dy <= stencil_radius; ++dy) {
            if (dx == 0 && dy == 0) continue;
            if (gcd_int(std::abs(dx), std::abs(dy)) != 1) continue;
            offsets_.emplace_back(dx, dy);
        }
    interior_.resize(spec_.count());
    for (int iy = 0; iy < spec_.ny; ++iy)
        for (int ix = 0; ix < spec_.nx; ++ix)
            interior_[spec_.index(ix, iy)] = domain_.rho(spec_.node(ix, iy)) < 0.0 ? 1 : 0;
    mid_metric_.resize(static_cast<size_t>(2 * spec_.nx - 1) * (2 * spec_.ny - 1));
    mid_state_.assign(mid_metric_.size(), 0);
}

std::optional<double> GridGraph::first_exit(Complex a, Complex b) const {
    const Complex v = b - a;
    double first = kInf;
    for (const auto& comp : domain_.components()) {
        const Complex d0 = a - comp.circle.center;
        const double qa = std::norm(v);
        const double qb = 2.0 * (d0.real() * v.real() + d0.imag() * v.imag());
        const double qc = std::norm(d0) - comp.circle.radius * comp.circle.radius;
        const double disc = qb * qb - 4.0 * qa * qc;
        if (disc <= 0.0 || qa == 0.0) continue;
        const double sd = std::sqrt(disc);
        for (const double t : {(-qb - sd) / (2.0 * qa), (-qb + sd) / (2.0 * qa)})
            if (t > 1e-12 && t < 1.0 - 1e-12) first = std::min(first, t);
    }
    if (first == kInf) return std::nullopt;
    return first;
}

double GridGraph::hlen(Complex a, Complex b) const {
    const Sym2 g = eval_metric(field_, 0.5 * (a + b));
    return std::sqrt(std::max(0.0, g.quad(Vec2(b - a))));
}

double GridGraph::edge_weight(int ix, int iy, int jx, int jy) const {
    const size_t hidx = static_cast<size_t>(iy + jy) * (2 * spec_.nx - 1) + (ix + jx);
    if (!mid_state_[hidx]) {
        const Complex mid{spec_.lo.real() + 0.5 * (ix + jx) * spec_.dx(),
                          spec_.lo.imag() + 0.5 * (iy + jy) * spec_.dy()};
        mid_metric_[hidx] = eval_metric(field_, mid);
        mid_state_[hidx] = 1;
    }
    const Vec2 v{(jx - ix) * spec_.dx(), (jy - iy) * spec_.dy()};
    return std::sqrt(std::max(0.0, mid_metric_[hidx].quad(v)));
}

GridGraph::BoundaryField GridGraph::boundary_distances() const {
    BoundaryField out;
    out.dist.assign(spec_.count(), kInf);
    out.pred.assign(spec_.count(), -1);
    out.foot.assign(spec_.count(), Complex{});
    MinQueue pq;

    // Seed: interior nodes with a stencil segment that exits the domain get
    // the fractional h-length to the crossing point.
    for (int iy = 0; iy < spec_.ny; ++iy)
        for (int ix = 0; ix < spec_.nx; ++ix) {
            const size_t u = spec_.index(ix, iy);
            if (!interior_[u]) continue;
            const Complex a = spec_.node(ix, iy);
            for (const auto& [dx, dy] : offsets_) {
                const int jx = ix + dx, jy = iy + dy;
                const Complex b{a.real() + dx * spec_.dx(), a.imag() + dy * spec_.dy()};
                const auto t = first_exit(a, b);
                const bool neighbor_inside =
                    in_grid(jx, jy) && interior_[spec_.index(jx, jy)] && !t;
                if (neighbor_inside) continue;
                if (!t) continue;  // neighbor exterior but segment clipped by the box only
                const Complex x = a + *t * (b - a);
                const double d0 = hlen(a, x);
                if (d0 < out.dist[u]) {
                    out.dist[u] = d0;
                    out.foot[u] = x;
                    out.pred[u] = -1;
                }
            }
            if (out.dist[u] < kInf) pq.push({out.dist[u], u});
        }

    while (!pq.empty()) {
        const auto [d, u] = pq.top();
        pq.pop();
        if (d > out.dist[u]) continue;
        const int ix = static_cast<int>(u % spec_.nx), iy = static_cast<int>(u / spec_.nx);
        const Complex a = spec_.node(ix, iy);
        for (const auto& [dx, dy] : offsets_) {
            const int jx = ix + dx, jy = iy + dy;
            if (!in_grid(jx, jy)) continue;
            const size_t v = spec_.index(jx, jy);
            if (!interior_[v]) continue;
            const Complex b = spec_.node(jx, jy);
            if (first_exit(a, b)) continue;
            const double nd = d + edge_weight(ix, iy, jx, jy);
            if (nd < out.dist[v]) {
                out.dist[v] = nd;
                out.pred[v] = static_cast<int32_t>(u);
                out.foot[v] = out.foot[u];
                pq.push({nd, v});
            }
        }
    }

    for (size_t u = 0; u < spec_.count(); ++u)
        if (interior_[u] && out.dist[u] == kInf)
            throw GridTooCoarse("boundary_distances: interior node unreachable; refine the grid");
    return out;
}

GridGraph::PointField GridGraph::point_distances(Complex source) const {
    if (!domain_.interior(source))
        throw OutsideDomain("point_distances: source must be interior");
    PointField out;
    out.source = source;
    out.dist.assign(spec_.count(), kInf);
    out.pred.assign(spec_.count(), -1);
    MinQueue pq;

    const int cx = static_cast<int>(std::floor((source.real() - spec_.lo.real()) / spec_.dx()));
    const int cy = static_cast<int>(std::floor((source.imag() - spec_.lo.imag()) / spec_.dy()));
    const int reach = 3;
    for (int jy = cy - reach; jy <= cy + reach + 1; ++jy)
        for (int jx = cx - reach; jx <= cx + reach + 1; ++jx) {
            if (!in_grid(jx, jy)) continue;
            const size_t v = spec_.index(jx, jy);
            if (!interior_[v]) continue;
            const Complex b = spec_.node(jx, jy);
            if (first_exit(source, b)) continue;
            const double d0 = hlen(source, b);
            if (d0 < out.dist[v]) {
                out.dist[v] = d0;
                out.pred[v] = -2;
                pq.push({d0, v});
            }
        }
    if (pq.empty()) throw GridTooCoarse("point_distances: source connects to no grid node");

    while (!pq.empty()) {
        const auto [d, u] = pq.top();
        pq.pop();
        if (d > out.dist[u]) continue;
        const int ix = static_cast<int>(u % spec_.nx), iy = static_cast<int>(u / spec_.nx);
        const Complex a = spec_.node(ix, iy);
        for (const auto& [dx, dy] : offsets_) {
            const int jx = ix + dx, jy = iy + dy;
            if (!in_grid(jx, jy)) continue;
            const size_t v = spec_.index(jx, jy);
            if (!interior_[v]) continue;
            if (first_exit(a, spec_.node(jx, jy))) continue;
            const double nd = d + edge_weight(ix, iy, jx, jy);
            if (nd < out.dist[v]) {
                out.dist[v] = nd;
                out.pred[v] = static_cast<int32_t>(u);
                pq.push({nd, v});
            }
        }
    }
    return out;
}

double GridGraph::distance_to(const PointField& field, Complex target) const {
    if (!domain_.interior(target))
        throw OutsideDomain("distance_to: target must be interior");
    double best = kInf;
    if (!first_exit(field.source, target)) best = hlen(field.source, target);
    const int cx = static_cast<int>(std::floor((target.real() - spec_.lo.real()) / spec_.dx()));
    const int cy = static_cast<int>(std::floor((target.imag() - spec_.lo.imag()) / spec_.dy()));
    const int reach = 3;
    for (int jy = cy - reach; jy <= cy + reach + 1; ++jy)
        for (int jx = cx - reach; jx <= cx + reach + 1; ++jx) {
            if (!in_grid(jx, jy)) continue;
            const size_t v = spec_.index(jx, jy);
            if (!interior_[v] || field.dist[v] == kInf) continue;
            const Complex b = spec_.node(jx, jy);
            if (first_exit(target, b)) continue;
            best = std::min(best, field.dist[v] + hlen(b, target));
        }
    if (best == kInf) throw Unreachable("distance_to: target not connected to the source");
    return best;
}

std::vector<Complex> GridGraph::path(const PointField& field, Complex target) const {
    if (!domain_.interior(target))
        throw OutsideDomain("path: target must be interior");
    // Repeat the final-hop minimization, keeping the argmin node.
    double best = kInf;
    int64_t best_node = -1;
    if (!first_exit(field.source, target)) best = hlen(field.source, target);
    const int cx = static_cast<int>(std::floor((target.real() - spec_.lo.real()) / spec_.dx()));
    const int cy = static_cast<int>(std::floor((target.imag() - spec_.lo.imag()) / spec_.dy()));
    const int reach = 3;
    for (int jy = cy - reach; jy <= cy + reach + 1; ++jy)
        for (int jx = cx - reach; jx <= cx + reach + 1; ++jx) {
            if (!in_grid(jx, jy)) continue;
            const size_t v = spec_.index(jx, jy);
            if (!interior_[v] || field.dist[v] == kInf) continue;
            const Complex b = spec_.node(jx, jy);
            if (first_exit(target, b)) continue;
            const double cand = field.dist[v] + hlen(b, target);
            if (cand < best) {
                best = cand;
                best_node = static_cast<int64_t>(v);
            }
        }
    if (best == kInf) throw Unreachable("path: target not connected to the source");
    std::vector<Complex> nodes{target};
    int64_t cur = best_node;
    while (cur >= 0) {
        nodes.push_back(node_point(static_cast<size_t>(cur)));
        cur = field.pred[static_cast<size_t>(cur)];
    }
    nodes.push_back(field.source);
    std::reverse(nodes.begin(), nodes.end());
    return nodes;
}

}  // namespace invmet
