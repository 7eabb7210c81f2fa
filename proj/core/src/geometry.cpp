#include "invmet/geometry.hpp"

#include <algorithm>
#include <limits>

namespace invmet {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

double sym_at(const Sym2& g, int i, int j) {
    if (i == 0 && j == 0) return g.xx;
    if (i == 1 && j == 1) return g.yy;
    return g.xy;
}

// Metric x/y derivatives: analytic when available, else central differences
// with one-sided fallback at the boundary.
std::pair<std::array<Sym2, 2>, bool> metric_derivatives(const MetricField& field, Complex z,
                                                        double h) {
    if (field.has_analytic_derivative()) return {field.analytic_derivative(z), false};
    bool clipped = false;
    auto evaluable = [&](Complex p) { return field.domain().rho(p) < 0.0; };
    auto diff = [&](Complex dir) {
        const Complex zp = z + h * dir, zm = z - h * dir;
        const bool okp = evaluable(zp), okm = evaluable(zm);
        if (okp && okm) return (1.0 / (2.0 * h)) * (eval_metric(field, zp) - eval_metric(field, zm));
        clipped = true;
        if (okp) return (1.0 / h) * (eval_metric(field, zp) - eval_metric(field, z));
        if (okm) return (1.0 / h) * (eval_metric(field, z) - eval_metric(field, zm));
        throw OutsideDomain("metric_derivatives: stencil has no interior support");
    };
    std::array<Sym2, 2> d{diff({1.0, 0.0}), diff({0.0, 1.0})};
    return {d, clipped};
}

}  // namespace

ChristoffelResult christoffel(const MetricField& field, Complex z, double fd_step) {
    if (!(fd_step > 0.0)) throw InvalidInput("christoffel: fd_step must be positive");
    const Sym2 ginv = eval_metric(field, z).inverse();
    const auto [dg, clipped] = metric_derivatives(field, z, fd_step);
    ChristoffelResult out;
    out.clipped = clipped;
    for (int k = 0; k < 2; ++k)
        for (int i = 0; i < 2; ++i)
            for (int j = 0; j < 2; ++j) {
                double acc = 0.0;
                for (int l = 0; l < 2; ++l)
                    acc += sym_at(ginv, k, l) * (sym_at(dg[i], j, l) + sym_at(dg[j], i, l) -
                                                 sym_at(dg[l], i, j));
                out.gamma[k][i][j] = 0.5 * acc;
            }
    return out;
}

double GeodesicPath::h_speed(const MetricField& field, size_t i) const {
    return std::sqrt(eval_metric(field, x[i]).quad(v[i]));
}

GeodesicPath geodesic(const MetricField& field, Complex start, Vec2 velocity, double length,
                      int steps) {
    if (steps < 1) throw InvalidInput("geodesic: steps must be >= 1");
    if (!field.domain().interior(start)) throw OutsideDomain("geodesic: start must be interior");
    const double fd_step = 1e-4 * field.domain().diameter();
    const double v0n = std::sqrt(eval_metric(field, start).quad(velocity));
    if (!(v0n > 0.0)) throw InvalidInput("geodesic: zero initial velocity");
    Vec2 v{velocity.x / v0n, velocity.y / v0n};
    Complex x = start;

    struct State {
        Complex x;
        Vec2 v;
    };
    auto rhs = [&](const State& s) -> State {
        const auto ch = christoffel(field, s.x, fd_step);
        Vec2 a{};
        for (int i = 0; i < 2; ++i)
            for (int j = 0; j < 2; ++j) {
                const double vij = (i == 0 ? s.v.x : s.v.y) * (j == 0 ? s.v.x : s.v.y);
                a.x -= ch.gamma[0][i][j] * vij;
                a.y -= ch.gamma[1][i][j] * vij;
            }
        return {Complex{s.v.x, s.v.y}, a};
    };

    GeodesicPath path;
    path.t.push_back(0.0);
    path.x.push_back(x);
    path.v.push_back(v);
    const double ds = length / steps;
    for (int k = 0; k < steps; ++k) {
        const State s0{x, v};
        State k1, k2, k3, k4;
        try {
            k1 = rhs(s0);
            k2 = rhs({s0.x + 0.5 * ds * k1.x, s0.v + 0.5 * ds * k1.v});
            k3 = rhs({s0.x + 0.5 * ds * k2.x, s0.v + 0.5 * ds * k2.v});
            k4 = rhs({s0.x + ds * k3.x, s0.v + ds * k3.v});
        } catch (const OutsideDomain&) {
            path.exited = true;
            break;
        }
        x = s0.x + (ds / 6.0) * (k1.x + 2.0 * k2.x + 2.0 * k3.x + k4.x);
        v = s0.v + (ds / 6.0) * (k1.v + 2.0 * k2.v + 2.0 * k3.v + k4.v);
        if (!field.domain().interior(x)) {
            path.exited = true;
            break;
        }
        path.t.push_back((k + 1) * ds);
        path.x.push_back(x);
        path.v.push_back(v);
    }
    return path;
}

CurvatureResult gauss_curvature(const MetricField& field, Complex z, double fd_step) {
    if (!(fd_step > 0.0)) throw InvalidInput("gauss_curvature: fd_step must be positive");
    const PlanarDomain& dom = field.domain();
    auto fits = [&](double h) {
        for (const Complex dir : {Complex{1, 0}, Complex{-1, 0}, Complex{0, 1}, Complex{0, -1},
                                  Complex{1, 1}, Complex{1, -1}, Complex{-1, 1}, Complex{-1, -1}})
            if (dom.rho(z + h * dir) >= 0.0) return false;
        return true;
    };
    double h = fd_step;
    bool clipped = false;
    for (int k = 0; k < 8 && !fits(h); ++k) {
        h *= 0.5;
        clipped = true;
    }
    if (!fits(h)) throw OutsideDomain("gauss_curvature: no stencil clearance at this point");

    if (field.conformal()) {
        // K = -Lap(log lambda) / (2 lambda), 5-point Laplacian.
        auto ll = [&](Complex p) { return std::log(field.conformal_factor(p)); };
        const double lap = (ll(z + h) + ll(z - h) + ll(z + Complex{0, h}) + ll(z - Complex{0, h}) -
                            4.0 * ll(z)) /
                           (h * h);
        return {-lap / (2.0 * field.conformal_factor(z)), clipped};
    }

    // Brioschi formula on finite-difference derivatives of E, F, G.
    auto g = [&](double dx, double dy) { return eval_metric(field, z + Complex{dx * h, dy * h}); };
    const Sym2 g00 = g(0, 0), gxp = g(1, 0), gxm = g(-1, 0), gyp = g(0, 1), gym = g(0, -1);
    const Sym2 gpp = g(1, 1), gpm = g(1, -1), gmp = g(-1, 1), gmm = g(-1, -1);
    const double e = g00.xx, f = g00.xy, gg = g00.yy;
    const double e_u = (gxp.xx - gxm.xx) / (2 * h), e_v = (gyp.xx - gym.xx) / (2 * h);
    const double g_u = (gxp.yy - gxm.yy) / (2 * h), g_v = (gyp.yy - gym.yy) / (2 * h);
    const double f_u = (gxp.xy - gxm.xy) / (2 * h), f_v = (gyp.xy - gym.xy) / (2 * h);
    const double e_vv = (gyp.xx - 2 * g00.xx + gym.xx) / (h * h);
    const double g_uu = (gxp.yy - 2 * g00.yy + gxm.yy) / (h * h);
    const double f_uv = (gpp.xy - gpm.xy - gmp.xy + gmm.xy) / (4 * h * h);
    auto det3 = [](double a11, double a12, double a13, double a21, double a22, double a23,
                   double a31, double a32, double a33) {
        return a11 * (a22 * a33 - a23 * a32) - a12 * (a21 * a33 - a23 * a31) +
               a13 * (a21 * a32 - a22 * a31);
    };
    const double m1 = det3(-0.5 * e_vv + f_uv - 0.5 * g_uu, 0.5 * e_u, f_u - 0.5 * e_v,
                           f_v - 0.5 * g_u, e, f,
                           0.5 * g_v, f, gg);
    const double m2 = det3(0.0, 0.5 * e_v, 0.5 * g_u,
                           0.5 * e_v, e, f,
                           0.5 * g_u, f, gg);
    const double den = e * gg - f * f;
    return {(m1 - m2) / (den * den), clipped};
}

namespace {

double polyline_length(const GridGraph& graph, const std::vector<Complex>& pts) {
    double acc = 0.0;
    for (size_t i = 0; i + 1 < pts.size(); ++i) acc += graph.hlen(pts[i], pts[i + 1]);
    return acc;
}

std::vector<Complex> resample(const std::vector<Complex>& pts, double spacing) {
    std::vector<double> cum{0.0};
    for (size_t i = 0; i + 1 < pts.size(); ++i)
        cum.push_back(cum.back() + std::abs(pts[i + 1] - pts[i]));
    const double total = cum.back();
    if (total <= 0.0) return {pts.front(), pts.back()};
    const int n = std::max(2, static_cast<int>(std::round(total / spacing)));
    std::vector<Complex> out;
    out.reserve(n + 1);
    size_t seg = 0;
    for (int i = 0; i <= n; ++i) {
        const double s = total * i / n;
        while (seg + 2 < cum.size() && cum[seg + 1] < s) ++seg;
        const double t = (s - cum[seg]) / std::max(1e-300, cum[seg + 1] - cum[seg]);
        out.push_back(pts[seg] + t * (pts[seg + 1] - pts[seg]));
    }
    return out;
}

// Local curve shortening: each interior vertex moves along the perpendicular
// to minimize the length of its two adjacent segments (parabola fit).
void shorten(const GridGraph& graph, const PlanarDomain& dom, std::vector<Complex>& pts,
             int passes, double probe) {
    for (int pass = 0; pass < passes; ++pass) {
        for (size_t i = 1; i + 1 < pts.size(); ++i) {
            const Complex chord = pts[i + 1] - pts[i - 1];
            const double cn = std::abs(chord);
            if (cn < 1e-300) continue;
            const Complex n = Complex{-chord.imag(), chord.real()} / cn;
            auto len = [&](double t) {
                const Complex p = pts[i] + t * n;
                return graph.hlen(pts[i - 1], p) + graph.hlen(p, pts[i + 1]);
            };
            const double j0 = len(0.0), jp = len(probe), jm = len(-probe);
            const double denom = jp - 2.0 * j0 + jm;
            if (!(denom > 0.0)) continue;
            double t = 0.5 * probe * (jm - jp) / denom;
            t = std::clamp(t, -2.0 * probe, 2.0 * probe);
            const Complex cand = pts[i] + t * n;
            if (dom.rho(cand) < -1e-12) pts[i] = cand;
        }
    }
}

double one_level_distance(const MetricField& field, Complex p, Complex q, const GridSpec& spec) {
    GridGraph graph(field.domain(), field, spec, 2);
    const auto pf = graph.point_distances(p);
    auto poly = graph.path(pf, q);
    const double cell_len = std::max(spec.dx(), spec.dy());
    poly = resample(poly, cell_len);
    shorten(graph, field.domain(), poly, 12, 0.25 * cell_len);
    poly = resample(poly, cell_len);
    shorten(graph, field.domain(), poly, 18, 0.1 * cell_len);
    return polyline_length(graph, poly);
}

}  // namespace

double distance(const MetricField& field, Complex p, Complex q, const GridSpec& spec) {
    spec.validate();
    if (!field.domain().interior(p) || !field.domain().interior(q))
        throw OutsideDomain("distance: endpoints must be interior");
    // Fix the endpoint order so d(p,q) and d(q,p) are computed identically.
    Complex a = p, b = q;
    if (std::pair{b.real(), b.imag()} < std::pair{a.real(), a.imag()}) std::swap(a, b);
    if (std::abs(a - b) == 0.0) return 0.0;
    const double d1 = one_level_distance(field, a, b, spec);
    const double d2 = one_level_distance(field, a, b, spec.refined());
    // Richardson assuming the leading error is O(cell^2).
    return d2 + (d2 - d1) / 3.0;
}

bool BallIndicator::contains(Complex z) const {
    const double fx = (z.real() - spec.lo.real()) / spec.dx();
    const double fy = (z.imag() - spec.lo.imag()) / spec.dy();
    const int ix = std::clamp(static_cast<int>(std::floor(fx)), 0, spec.nx - 2);
    const int iy = std::clamp(static_cast<int>(std::floor(fy)), 0, spec.ny - 2);
    const double tx = std::clamp(fx - ix, 0.0, 1.0), ty = std::clamp(fy - iy, 0.0, 1.0);
    const double d00 = node_dist[spec.index(ix, iy)], d10 = node_dist[spec.index(ix + 1, iy)];
    const double d01 = node_dist[spec.index(ix, iy + 1)],
                 d11 = node_dist[spec.index(ix + 1, iy + 1)];
    if (d00 == kInf || d10 == kInf || d01 == kInf || d11 == kInf) {
        // Nearest node decides at the rim of the data.
        const int jx = tx < 0.5 ? ix : ix + 1, jy = ty < 0.5 ? iy : iy + 1;
        return node_dist[spec.index(jx, jy)] <= radius;
    }
    const double d = (1 - tx) * ((1 - ty) * d00 + ty * d01) + tx * ((1 - ty) * d10 + ty * d11);
    return d <= radius;
}

size_t BallIndicator::count() const {
    size_t n = 0;
    for (const auto b : inside) n += b;
    return n;
}

BallIndicator metric_ball(const MetricField& field, Complex center, double radius,
                          const GridSpec& spec) {
    spec.validate();
    if (!field.domain().interior(center)) throw OutsideDomain("metric_ball: center not interior");
    GridGraph graph(field.domain(), field, spec, 4);
    const auto pf = graph.point_distances(center);
    BallIndicator ball;
    ball.spec = spec;
    ball.center = center;
    ball.radius = radius;
    ball.node_dist = pf.dist;
    ball.inside.assign(spec.count(), 0);
    for (size_t u = 0; u < spec.count(); ++u)
        ball.inside[u] = (pf.dist[u] <= radius) ? 1 : 0;
    return ball;
}

double jaccard(const BallIndicator& a, const BallIndicator& b) {
    if (a.spec.count() != b.spec.count()) throw InvalidInput("jaccard: incompatible grids");
    size_t inter = 0, uni = 0;
    for (size_t u = 0; u < a.inside.size(); ++u) {
        inter += a.inside[u] & b.inside[u];
        uni += a.inside[u] | b.inside[u];
    }
    return uni == 0 ? 1.0 : static_cast<double>(inter) / static_cast<double>(uni);
}

double jaccard_under_map(const BallIndicator& ball, const Automorphism& aut) {
    const Automorphism inv = aut.inverse();
    size_t inter = 0, uni = 0;
    for (int iy = 0; iy < ball.spec.ny; ++iy)
        for (int ix = 0; ix < ball.spec.nx; ++ix) {
            const bool in_a = ball.inside[ball.spec.index(ix, iy)] != 0;
            const bool in_b = ball.contains(inv.apply(ball.spec.node(ix, iy)));
            inter += (in_a && in_b) ? 1 : 0;
            uni += (in_a || in_b) ? 1 : 0;
        }
    return uni == 0 ? 1.0 : static_cast<double>(inter) / static_cast<double>(uni);
}

namespace {

double karcher_objective(const GridGraph& graph, const std::vector<HaarNode>& nodes, Complex x) {
    const auto pf = graph.point_distances(x);
    double acc = 0.0;
    for (const auto& node : nodes) {
        if (node.aut.is_identity(1e-14)) continue;
        const Complex target = node.aut.apply(x);
        const double d = graph.distance_to(pf, target);
        acc += node.weight * d * d;
    }
    return acc;
}

}  // namespace

std::optional<Complex> common_fixed_point(const CompactGroup& group, const MetricField& field,
                                          Complex seed) {
    const PlanarDomain& dom = group.domain();
    const double diam = dom.diameter();
    const double tol = 1e-4 * diam * diam;
    const auto nodes = group.haar_nodes(group.structure() == CompactGroup::Structure::Finite ? 1 : 32);

    // Deterministic restart seeds: spread through the interior sample list.
    std::vector<Complex> seeds;
    if (dom.interior(seed)) seeds.push_back(seed);
    const auto pool = dom.sample_interior(dom.bounding_grid(16, 16), 0.05 * diam);
    for (int k = 0; k < 5; ++k) seeds.push_back(pool[(k * pool.size()) / 5 % pool.size()]);

    const GridSpec coarse_spec = dom.bounding_grid(129, 129);
    const GridSpec fine_spec = dom.bounding_grid(257, 257);
    GridGraph coarse(dom, field, coarse_spec, 3);
    GridGraph fine(dom, field, fine_spec, 3);

    auto descend = [&](const GridGraph& graph, const GridSpec& spec, Complex x0,
                       int max_iters) -> std::pair<Complex, double> {
        Complex x = x0;
        double fx = karcher_objective(graph, nodes, x);
        const double hx = spec.dx(), hy = spec.dy();
        for (int scale : {8, 4, 2, 1}) {
            bool moved = true;
            int iters = 0;
            while (moved && iters++ < max_iters) {
                moved = false;
                for (const Complex dir :
                     {Complex{1, 0}, Complex{-1, 0}, Complex{0, 1}, Complex{0, -1},
                      Complex{1, 1}, Complex{-1, 1}, Complex{1, -1}, Complex{-1, -1}}) {
                    const Complex cand = x + Complex{scale * hx * dir.real(),
                                                     scale * hy * dir.imag()};
                    if (!dom.interior(cand)) continue;
                    const double fc = karcher_objective(graph, nodes, cand);
                    if (fc < fx) {
                        fx = fc;
                        x = cand;
                        moved = true;
                        break;
                    }
                }
            }
        }
        return {x, fx};
    };

    for (const Complex s : seeds) {
        auto [xc, fc] = descend(coarse, coarse_spec, s, 64);
        auto [xf, ff] = descend(fine, fine_spec, xc, 32);
        // Local quadratic refinement, separable parabola per axis.
        const double hx = fine_spec.dx(), hy = fine_spec.dy();
        auto f_at = [&](Complex p) {
            return dom.interior(p) ? karcher_objective(fine, nodes, p) : kInf;
        };
        const double fxp = f_at(xf + hx), fxm = f_at(xf - hx);
        const double fyp = f_at(xf + Complex{0, hy}), fym = f_at(xf - Complex{0, hy});
        Complex refined = xf;
        if (fxp < kInf && fxm < kInf && fxp - 2 * ff + fxm > 0.0)
            refined += 0.5 * hx * (fxm - fxp) / (fxp - 2 * ff + fxm);
        if (fyp < kInf && fym < kInf && fyp - 2 * ff + fym > 0.0)
            refined += Complex{0.0, 0.5 * hy * (fym - fyp) / (fyp - 2 * ff + fym)};
        if (dom.interior(refined)) {
            const double fr = f_at(refined);
            if (fr < ff) {
                xf = refined;
                ff = fr;
            }
        }
        if (ff < tol) return xf;
    }
    return std::nullopt;
}

namespace {

std::vector<Complex> deviation_samples(const PlanarDomain& dom, size_t want) {
    const auto pool = dom.sample_interior(dom.bounding_grid(24, 24), 0.0);
    std::vector<Complex> out;
    const size_t stride = std::max<size_t>(1, pool.size() / want);
    for (size_t i = 0; i < pool.size() && out.size() < want; i += stride) out.push_back(pool[i]);
    return out;
}

void require_on_boundary(const PlanarDomain& dom, Complex p) {
    double d = kInf;
    for (const auto& c : dom.components()) d = std::min(d, std::abs(c.circle.signed_distance(p)));
    if (d > 1e-9) throw InvalidInput("rigidity: point is not on the boundary (within 1e-9)");
}

double max_deviation(const Automorphism& a, std::span<const Complex> samples) {
    double dev = 0.0;
    for (const Complex z : samples) dev = std::max(dev, std::abs(a.apply(z) - z));
    return dev;
}

RigidityReport scan_group(const CompactGroup& group,
                          const std::function<std::optional<RigidityEntry>(const Automorphism&)>&
                              probe) {
    RigidityReport report;
    if (group.structure() == CompactGroup::Structure::Finite) {
        for (const auto& e : group.finite_elements())
            if (auto entry = probe(e)) report.entries.push_back(*entry);
    } else {
        const int m = 2048;
        for (int k = 0; k < m; ++k) {
            const double theta = 2.0 * kPi * k / m;
            if (auto entry = probe(group.element_at(theta))) report.entries.push_back(*entry);
            if (group.structure() == CompactGroup::Structure::CircleWithInversion)
                if (auto entry = probe(group.element_at(theta, true)))
                    report.entries.push_back(*entry);
        }
    }
    return report;
}

}  // namespace

RigidityReport boundary_rigidity_check(const CompactGroup& group, Complex boundary_point,
                                       double tol) {
    require_on_boundary(group.domain(), boundary_point);
    const auto samples = deviation_samples(group.domain(), 100);
    const double dev_tol = 1e-8 * group.domain().diameter();
    auto probe = [&](const Automorphism& a) -> std::optional<RigidityEntry> {
        const double fr = std::abs(a.apply(boundary_point) - boundary_point);
        const double dr = std::abs(a.derivative(boundary_point) - 1.0);
        if (fr >= tol || dr >= tol) return std::nullopt;
        return RigidityEntry{a.describe(), fr, dr, max_deviation(a, samples)};
    };
    RigidityReport report = scan_group(group, probe);
    report.tol = tol;
    report.deviation_tol = dev_tol;
    report.identity_only = true;
    for (const auto& e : report.entries)
        if (e.max_deviation > dev_tol) report.identity_only = false;
    return report;
}

RigidityReport general_position_fix_check(const CompactGroup& group,
                                          std::span<const Complex> points, double tol,
                                          bool require_general_position) {
    if (points.empty()) throw InsufficientPoints("general_position_fix_check: no points");
    if (require_general_position && points.size() < 2)
        throw InsufficientPoints(
            "general_position_fix_check: need 2n = 2 boundary points in one complex dimension");
    for (const Complex p : points) require_on_boundary(group.domain(), p);
    const auto samples = deviation_samples(group.domain(), 100);
    const double dev_tol = 1e-8 * group.domain().diameter();
    auto probe = [&](const Automorphism& a) -> std::optional<RigidityEntry> {
        double fr = 0.0;
        for (const Complex p : points) fr = std::max(fr, std::abs(a.apply(p) - p));
        if (fr >= tol) return std::nullopt;
        return RigidityEntry{a.describe(), fr, 0.0, max_deviation(a, samples)};
    };
    RigidityReport report = scan_group(group, probe);
    report.tol = tol;
    report.deviation_tol = dev_tol;
    report.identity_only = true;
    for (const auto& e : report.entries)
        if (e.max_deviation > dev_tol) report.identity_only = false;
    return report;
}

}  // namespace invmet
