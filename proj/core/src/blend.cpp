#include "invmet/blend.hpp"

#include <algorithm>
#include <limits>

namespace invmet {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

double bump(double x) { return x > 0.0 ? std::exp(-1.0 / x) : 0.0; }

}  // namespace

Cutoff::Cutoff(double lo, double hi) : lo_(lo), hi_(hi) {
    if (!(lo < hi)) throw InvalidInput("Cutoff: need lo < hi");
}

double Cutoff::operator()(double x) const {
    const double t = (x - lo_) / (hi_ - lo_);
    if (t <= 0.0) return 0.0;
    if (t >= 1.0) return 1.0;
    const double f = bump(t);
    return f / (f + bump(1.0 - t));
}

DistanceGrid::DistanceGrid(const PlanarDomain& domain, const MetricField& h, const GridSpec& spec)
    : domain_(std::make_shared<PlanarDomain>(domain)), h_(h), spec_(spec) {
    if (!h.smooth_to_boundary())
        throw InvalidInput("DistanceGrid: metric must be smooth on the closure");
    spec_.validate();

    GridGraph graph(domain, h_, spec_, 2);
    auto bf = graph.boundary_distances();
    dist_ = std::move(bf.dist);
    foot_ = std::move(bf.foot);
    state_.assign(spec_.count(), 0);
    for (int iy = 0; iy < spec_.ny; ++iy)
        for (int ix = 0; ix < spec_.nx; ++ix) {
            const size_t u = spec_.index(ix, iy);
            if (graph.interior_node(u)) {
                state_[u] = 1;
                max_dist_ = std::max(max_dist_, dist_[u]);
            }
        }

    // Signed extension ring: exterior nodes next to the interior get minus the
    // h-length to the nearest boundary crossing, so bilinear interpolation in
    // boundary cells behaves like a signed distance.
    for (int iy = 0; iy < spec_.ny; ++iy)
        for (int ix = 0; ix < spec_.nx; ++ix) {
            const size_t u = spec_.index(ix, iy);
            if (state_[u] == 1) continue;
            const Complex a = spec_.node(ix, iy);
            double ext = kInf;
            Complex ext_foot{};
            for (int dy = -1; dy <= 1; ++dy)
                for (int dx = -1; dx <= 1; ++dx) {
                    if (dx == 0 && dy == 0) continue;
                    const int jx = ix + dx, jy = iy + dy;
                    if (jx < 0 || jy < 0 || jx >= spec_.nx || jy >= spec_.ny) continue;
                    if (state_[spec_.index(jx, jy)] != 1) continue;
                    const Complex b = spec_.node(jx, jy);
                    const auto t = graph.first_exit(a, b);
                    if (!t) continue;
                    const Complex x = a + *t * (b - a);
                    // Metric frozen at the crossing point (the field may not
                    // extend past the closure).
                    const Sym2 g = eval_metric(h_, x);
                    const double len = std::sqrt(std::max(0.0, g.quad(Vec2(x - a))));
                    if (len < ext) {
                        ext = len;
                        ext_foot = x;
                    }
                }
            if (ext < kInf) {
                state_[u] = 2;
                dist_[u] = -ext;
                foot_[u] = ext_foot;
            }
        }

    // Central-difference gradients where both neighbors carry values,
    // one-sided otherwise.
    grad_.assign(spec_.count(), Vec2{});
    auto value_at = [&](int jx, int jy) -> std::optional<double> {
        if (jx < 0 || jy < 0 || jx >= spec_.nx || jy >= spec_.ny) return std::nullopt;
        const size_t u = spec_.index(jx, jy);
        if (state_[u] == 0) return std::nullopt;
        return dist_[u];
    };
    for (int iy = 0; iy < spec_.ny; ++iy)
        for (int ix = 0; ix < spec_.nx; ++ix) {
            const size_t u = spec_.index(ix, iy);
            if (state_[u] == 0) continue;
            const auto xm = value_at(ix - 1, iy), xp = value_at(ix + 1, iy);
            const auto ym = value_at(ix, iy - 1), yp = value_at(ix, iy + 1);
            Vec2 g{};
            if (xm && xp) g.x = (*xp - *xm) / (2.0 * spec_.dx());
            else if (xp) g.x = (*xp - dist_[u]) / spec_.dx();
            else if (xm) g.x = (dist_[u] - *xm) / spec_.dx();
            if (ym && yp) g.y = (*yp - *ym) / (2.0 * spec_.dy());
            else if (yp) g.y = (*yp - dist_[u]) / spec_.dy();
            else if (ym) g.y = (dist_[u] - *ym) / spec_.dy();
            grad_[u] = g;
        }
}

namespace {

struct CellFrame {
    int ix, iy;
    double tx, ty;
};

CellFrame locate(const GridSpec& s, Complex z) {
    const double fx = (z.real() - s.lo.real()) / s.dx();
    const double fy = (z.imag() - s.lo.imag()) / s.dy();
    const int ix = std::clamp(static_cast<int>(std::floor(fx)), 0, s.nx - 2);
    const int iy = std::clamp(static_cast<int>(std::floor(fy)), 0, s.ny - 2);
    return {ix, iy, std::clamp(fx - ix, 0.0, 1.0), std::clamp(fy - iy, 0.0, 1.0)};
}

}  // namespace

double DistanceGrid::dist(Complex z) const {
    const auto [ix, iy, tx, ty] = locate(spec_, z);
    double corner[2][2];
    for (int b = 0; b < 2; ++b)
        for (int a = 0; a < 2; ++a) {
            const size_t u = spec_.index(ix + a, iy + b);
            // Deep-exterior corners fall back to the opposite corner's value;
            // this only happens in sliver cells at the padded box edge.
            corner[b][a] = state_[u] != 0 ? dist_[u] : kInf;
        }
    for (int b = 0; b < 2; ++b)
        for (int a = 0; a < 2; ++a)
            if (corner[b][a] == kInf)
                corner[b][a] = corner[1 - b][1 - a] != kInf ? corner[1 - b][1 - a] : 0.0;
    const double lo = (1 - tx) * corner[0][0] + tx * corner[0][1];
    const double hi = (1 - tx) * corner[1][0] + tx * corner[1][1];
    return (1 - ty) * lo + ty * hi;
}

Vec2 DistanceGrid::grad(Complex z) const {
    const auto [ix, iy, tx, ty] = locate(spec_, z);
    Vec2 acc{};
    double wsum = 0.0;
    const double wts[2] = {1 - tx, tx};
    const double wtsy[2] = {1 - ty, ty};
    for (int b = 0; b < 2; ++b)
        for (int a = 0; a < 2; ++a) {
            const size_t u = spec_.index(ix + a, iy + b);
            if (state_[u] == 0) continue;
            const double w = wts[a] * wtsy[b];
            acc = acc + w * grad_[u];
            wsum += w;
        }
    if (wsum <= 0.0) throw OutsideDomain("DistanceGrid::grad: no support at this point");
    return (1.0 / wsum) * acc;
}

Complex DistanceGrid::project(Complex z) const {
    const double cell_len = cell();
    Complex x = z;
    double d = dist(x);
    // Gradient flow of the h-distance; the integral curves of the h-gradient
    // are the minimizing geodesics to the boundary.
    int iters = 0;
    const int max_iters = 4 * static_cast<int>(max_dist_ / cell_len + 10);
    while (std::abs(d) > 0.75 * cell_len) {
        if (++iters > max_iters)
            throw ProjectionBreakdown("project: descent failed to reach the boundary");
        auto hgrad = [&](Complex p) {
            const Vec2 g = grad(p);
            Complex pe = p;
            if (domain_->rho(pe) > 0.0) {
                // Clamp the metric evaluation point into the closure.
                const Vec2 n = domain_->grad_rho(pe);
                const double r = domain_->rho(pe);
                pe -= Complex{(r + 1e-12) * n.x, (r + 1e-12) * n.y};
            }
            const Sym2 ginv = eval_metric(h_, pe).inverse();
            return ginv.apply(g);
        };
        const Vec2 u0 = hgrad(x);
        const double step = std::copysign(std::min(std::abs(d), 0.75 * cell_len), d);
        const Complex xm = x - 0.5 * step * Complex{u0.x, u0.y};
        const Vec2 um = hgrad(xm);
        x -= step * Complex{um.x, um.y};
        const double dn = dist(x);
        if (std::abs(dn) > std::abs(d) + 1e-12)
            throw ProjectionBreakdown("project: h-distance increased along the descent");
        d = dn;
    }
    // Newton polish: d(x - t G^-1 g) ~ d - t by the eikonal property.
    for (int k = 0; k < 3; ++k) {
        const Vec2 g = grad(x);
        Complex pe = x;
        if (domain_->rho(pe) > 0.0) {
            const Vec2 n = domain_->grad_rho(pe);
            const double r = domain_->rho(pe);
            pe -= Complex{(r + 1e-12) * n.x, (r + 1e-12) * n.y};
        }
        const Sym2 ginv = eval_metric(h_, pe).inverse();
        const Vec2 u = ginv.apply(g);
        const double gu = g.dot(u);
        if (gu <= 1e-12) throw ProjectionBreakdown("project: degenerate gradient near boundary");
        d = dist(x);
        x -= (d / gu) * Complex{u.x, u.y};
    }
    return x;
}

DistanceGrid h_distance_field(const PlanarDomain& domain, const MetricField& h,
                              const GridSpec& spec) {
    return DistanceGrid(domain, h, spec);
}

MetricField blend_H(const MetricField& h, const MetricField& b,
                    std::shared_ptr<const DistanceGrid> dist, double eps) {
    if (!(eps > 0.0)) throw InvalidInput("blend_H: eps must be positive");
    const Cutoff eta(eps / 3.0, 2.0 * eps / 3.0);
    MetricField hc = h, bc = b;
    auto eval = [hc, bc, dist, eta](Complex z) {
        const double e = eta(dist->dist(z));
        if (e <= 0.0) return eval_metric(hc, z);
        if (e >= 1.0) return eval_metric(bc, z);
        return (1.0 - e) * eval_metric(hc, z) + e * eval_metric(bc, z);
    };
    return MetricField(h.domain(), Provenance::Blended, std::move(eval), h.smooth_to_boundary());
}

Sym2 product_metric_Hstar(const MetricField& h, const DistanceGrid& dist, Complex z,
                          double tube_width) {
    const double d = dist.dist(z);
    if (!(d < tube_width)) throw OutsideTube("product_metric_Hstar: point outside the tube");
    // Jacobian of the projection by central differences.
    const double s = 1.5 * dist.cell();
    const Complex px_p = dist.project(z + s);
    const Complex px_m = dist.project(z - s);
    const Complex py_p = dist.project(z + Complex{0.0, s});
    const Complex py_m = dist.project(z - Complex{0.0, s});
    const Mat2 jpi{(px_p.real() - px_m.real()) / (2 * s), (py_p.real() - py_m.real()) / (2 * s),
                   (px_p.imag() - px_m.imag()) / (2 * s), (py_p.imag() - py_m.imag()) / (2 * s)};
    const Sym2 hb = eval_metric(h, dist.project(z));
    const Vec2 g = dist.grad(z);
    const Sym2 grad_term{g.x * g.x, g.x * g.y, g.y * g.y};
    Sym2 out = congruence(jpi, hb) + grad_term;  // symmetric by construction
    out = floor_eigenvalues(out, 1e-10);
    const auto [lo, hi] = out.eigenvalues();
    if (hi / lo > 1e8)
        throw ProjectionBreakdown("product_metric_Hstar: assembled form is ill-conditioned");
    return out;
}

MetricField blend_Htilde(const MetricField& h, const MetricField& H,
                         std::shared_ptr<const DistanceGrid> dist, double delta) {
    if (!(delta > 0.0)) throw InvalidInput("blend_Htilde: delta must be positive");
    const double tube = 2.0 * delta;
    if (dist->max_dist() < delta)
        throw InvalidInput("blend_Htilde: tube width exceeds the domain's h-inradius");
    const Cutoff mu(delta / 3.0, 2.0 * delta / 3.0);
    MetricField hc = h, Hc = H;
    auto eval = [hc, Hc, dist, mu, tube](Complex z) {
        const double m = mu(dist->dist(z));
        if (m >= 1.0) return eval_metric(Hc, z);
        const Sym2 star = product_metric_Hstar(hc, *dist, z, tube);
        if (m <= 0.0) return star;
        return m * eval_metric(Hc, z) + (1.0 - m) * star;
    };
    return MetricField(h.domain(), Provenance::Blended, std::move(eval), true);
}

Layer classify_layer(double dist_value, double delta) {
    if (!(delta > 0.0)) throw InvalidInput("classify_layer: delta must be positive");
    if (dist_value < delta / 3.0) return Layer::P;
    if (dist_value < 4.0 * delta / 3.0) return Layer::A;
    return Layer::B;
}

char layer_char(Layer layer) {
    switch (layer) {
        case Layer::P: return 'P';
        case Layer::A: return 'A';
        case Layer::B: return 'B';
    }
    return '?';
}

}  // namespace invmet
