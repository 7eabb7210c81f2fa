#include "invmet/kernel.hpp"

#include <Eigen/Dense>
#include <algorithm>
#include <sstream>

namespace invmet {

namespace {

// Integer power by binary exponentiation; negative powers via the reciprocal.
Complex ipow(Complex z, int m) {
    if (m < 0) return 1.0 / ipow(z, -m);
    Complex r{1.0}, b = z;
    for (unsigned e = static_cast<unsigned>(m); e; e >>= 1) {
        if (e & 1u) r *= b;
        b *= b;
    }
    return r;
}

// Gauss-Legendre nodes/weights on [a, b] by Newton iteration on P_n.
std::vector<std::pair<double, double>> gauss_legendre(int n, double a, double b) {
    std::vector<std::pair<double, double>> out(n);
    for (int i = 0; i < n; ++i) {
        double x = std::cos(kPi * (i + 0.75) / (n + 0.5));
        double dp = 0.0;
        for (int it = 0; it < 100; ++it) {
            double p0 = 1.0, p1 = x;
            for (int k = 2; k <= n; ++k) {
                const double p2 = ((2.0 * k - 1.0) * x * p1 - (k - 1.0) * p0) / k;
                p0 = p1;
                p1 = p2;
            }
            dp = n * (x * p1 - p0) / (x * x - 1.0);
            const double dx = p1 / dp;
            x -= dx;
            if (std::abs(dx) < 1e-15) break;
        }
        const double w = 2.0 / ((1.0 - x * x) * dp * dp);
        out[n - 1 - i] = {0.5 * (b - a) * x + 0.5 * (a + b), 0.5 * (b - a) * w};
    }
    return out;
}

double factorial(int n) {
    double f = 1.0;
    for (int k = 2; k <= n; ++k) f *= k;
    return f;
}

struct QuadNode {
    Complex z;
    double w;
};

// Polar product rule: Gauss-Legendre radially, trapezoid in the angle.
std::vector<QuadNode> polar_quadrature(Complex center, double r0, double r1, int n_r, int n_t) {
    std::vector<QuadNode> nodes;
    nodes.reserve(static_cast<size_t>(n_r) * n_t);
    const auto radial = gauss_legendre(n_r, r0, r1);
    const double wt = 2.0 * kPi / n_t;
    for (const auto& [s, ws] : radial)
        for (int j = 0; j < n_t; ++j) {
            const double theta = wt * j;
            nodes.push_back({center + std::polar(s, theta), ws * s * wt});
        }
    return nodes;
}

// Adaptive cell rule for multi-hole domains (experimental oracle support).
void cell_quadrature(const PlanarDomain& dom, double x0, double y0, double x1, double y1,
                     int depth, std::vector<QuadNode>& out) {
    const Complex c{0.5 * (x0 + x1), 0.5 * (y0 + y1)};
    const double half_diag = 0.5 * std::hypot(x1 - x0, y1 - y0);
    bool fully_inside = true;
    for (const auto& comp : dom.components()) {
        const double d = comp.circle.signed_distance(c);
        if (comp.sign > 0) {
            if (d - half_diag > 0.0) return;  // entirely beyond the outer circle
            if (d + half_diag >= 0.0) fully_inside = false;
        } else {
            if (d + half_diag < 0.0) return;  // entirely inside a hole
            if (d - half_diag <= 0.0) fully_inside = false;
        }
    }
    if (fully_inside) {
        const auto gx = gauss_legendre(3, x0, x1);
        const auto gy = gauss_legendre(3, y0, y1);
        for (const auto& [x, wx] : gx)
            for (const auto& [y, wy] : gy) out.push_back({{x, y}, wx * wy});
        return;
    }
    if (depth == 0) {
        if (dom.rho(c) < 0.0) out.push_back({c, (x1 - x0) * (y1 - y0)});
        return;
    }
    const double xm = 0.5 * (x0 + x1), ym = 0.5 * (y0 + y1);
    cell_quadrature(dom, x0, y0, xm, ym, depth - 1, out);
    cell_quadrature(dom, xm, y0, x1, ym, depth - 1, out);
    cell_quadrature(dom, x0, ym, xm, y1, depth - 1, out);
    cell_quadrature(dom, xm, ym, x1, y1, depth - 1, out);
}

}  // namespace

struct KernelModel::Impl {
    Kind kind = Kind::DiscClosed;
    int dim = 1;

    // AnnulusSeries
    double inner = 0.0, outer = 0.0;
    int truncation = 0;
    std::vector<double> nu;  // index m + truncation

    // NumericBasis
    struct BasisFn {
        int power;       // >= 0 polynomial, < 0 pole
        Complex center;
        double scale;    // |((z-center)/scale)^power| <= 1 on the domain
    };
    std::vector<BasisFn> basis;
    Eigen::MatrixXcd ginv;
    double gram_cond = 0.0;
    std::shared_ptr<const PlanarDomain> dom;

    Complex basis_value(size_t j, Complex z) const {
        const auto& b = basis[j];
        return ipow((z - b.center) / b.scale, b.power);
    }
    Complex basis_derivative(size_t j, Complex z) const {
        const auto& b = basis[j];
        if (b.power == 0) return 0.0;
        return static_cast<double>(b.power) / b.scale * ipow((z - b.center) / b.scale, b.power - 1);
    }
    Eigen::VectorXcd basis_vector(Complex z) const {
        Eigen::VectorXcd v(basis.size());
        for (size_t j = 0; j < basis.size(); ++j) v(j) = basis_value(j, z);
        return v;
    }
    Eigen::VectorXcd basis_dvector(Complex z) const {
        Eigen::VectorXcd v(basis.size());
        for (size_t j = 0; j < basis.size(); ++j) v(j) = basis_derivative(j, z);
        return v;
    }

    double nu_at(int m) const { return nu[static_cast<size_t>(m + truncation)]; }

    Complex eval1(Complex z, Complex w) const {
        switch (kind) {
            case Kind::DiscClosed: {
                const Complex t = 1.0 - z * std::conj(w);
                return 1.0 / (kPi * t * t);
            }
            case Kind::BallClosed: {
                const Complex t = 1.0 - z * std::conj(w);
                return factorial(dim) / std::pow(kPi, dim) * std::pow(t, -(dim + 1));
            }
            case Kind::AnnulusSeries: {
                const Complex t = z * std::conj(w);
                Complex sum{0.0};
                for (int m = -truncation; m <= truncation; ++m) sum += ipow(t, m) / nu_at(m);
                return sum;
            }
            case Kind::NumericBasis: {
                const Eigen::VectorXcd bz = basis_vector(z);
                const Eigen::VectorXcd bw = basis_vector(w);
                return bz.transpose() * (ginv * bw.conjugate());
            }
        }
        throw InvalidInput("kernel: unknown kind");
    }
};

KernelModel KernelModel::disc_closed() {
    auto impl = std::make_shared<Impl>();
    impl->kind = Kind::DiscClosed;
    return KernelModel(impl);
}

KernelModel KernelModel::ball_closed(int dim) {
    if (dim < 1) throw InvalidInput("ball_closed: dimension must be >= 1");
    auto impl = std::make_shared<Impl>();
    impl->kind = Kind::BallClosed;
    impl->dim = dim;
    return KernelModel(impl);
}

KernelModel KernelModel::annulus_series(double inner, double outer, int truncation) {
    if (!(0.0 < inner && inner < outer)) throw InvalidInput("annulus_series: need 0 < r < R");
    if (truncation < 1) throw InvalidInput("annulus_series: truncation must be >= 1");
    auto impl = std::make_shared<Impl>();
    impl->kind = Kind::AnnulusSeries;
    impl->inner = inner;
    impl->outer = outer;
    impl->truncation = truncation;
    impl->nu.resize(2 * truncation + 1);
    for (int m = -truncation; m <= truncation; ++m) {
        double nu;
        if (m == -1) {
            nu = 2.0 * kPi * std::log(outer / inner);
        } else {
            nu = kPi * (std::pow(outer, 2 * m + 2) - std::pow(inner, 2 * m + 2)) / (m + 1);
        }
        impl->nu[static_cast<size_t>(m + truncation)] = nu;
    }
    return KernelModel(impl);
}

KernelModel KernelModel::numeric_basis(const PlanarDomain& domain, KernelNumericOptions opts) {
    if (opts.poly_degree < 1) throw InvalidInput("numeric_basis: poly_degree must be >= 1");
    const int pole_deg = opts.pole_degree < 0 ? opts.poly_degree : opts.pole_degree;
    auto impl = std::make_shared<Impl>();
    impl->kind = Kind::NumericBasis;
    impl->dom = std::make_shared<PlanarDomain>(domain);

    // Basis: polynomial powers about the outer center, plus pole powers at
    // each hole center (complete for circular-boundary domains of this kind).
    const BoundaryComponent* outer_comp = nullptr;
    for (const auto& c : domain.components())
        if (c.sign > 0) outer_comp = &c;
    if (!outer_comp) throw InvalidInput("numeric_basis: domain has no outer component");
    for (int m = 0; m < opts.poly_degree; ++m)
        impl->basis.push_back({m, outer_comp->circle.center, outer_comp->circle.radius});
    for (const auto& c : domain.components()) {
        if (c.sign > 0) continue;
        for (int m = 1; m <= pole_deg; ++m)
            impl->basis.push_back({-m, c.circle.center, c.circle.radius});
    }

    // Quadrature for this domain.
    std::vector<QuadNode> quad;
    switch (domain.kind()) {
        case PlanarDomain::Kind::Disc:
            quad = polar_quadrature(outer_comp->circle.center, 0.0, outer_comp->circle.radius,
                                    opts.radial_nodes, opts.angular_nodes);
            break;
        case PlanarDomain::Kind::Annulus:
            quad = polar_quadrature({0.0, 0.0}, domain.components()[1].circle.radius,
                                    domain.components()[0].circle.radius, opts.radial_nodes,
                                    opts.angular_nodes);
            break;
        case PlanarDomain::Kind::MoebiusImage: {
            // Pull the polar rule back through the map: dA_z = |phi'|^2 dA_zeta.
            const PlanarDomain* base = domain.moebius_base();
            const Automorphism* map = domain.moebius_map();
            if (base->kind() != PlanarDomain::Kind::Disc &&
                base->kind() != PlanarDomain::Kind::Annulus)
                throw InvalidInput("numeric_basis: Moebius image base must be a disc or annulus");
            const double r0 = base->kind() == PlanarDomain::Kind::Annulus
                                  ? base->components()[1].circle.radius
                                  : 0.0;
            const Circle outer = base->components()[0].circle;
            auto base_quad = polar_quadrature(outer.center, r0, outer.radius, opts.radial_nodes,
                                              opts.angular_nodes);
            quad.reserve(base_quad.size());
            for (const auto& q : base_quad)
                quad.push_back({map->apply(q.z), q.w * std::norm(map->derivative(q.z))});
            break;
        }
        case PlanarDomain::Kind::DiscMinusDiscs: {
            // Experimental: adaptive cells; accuracy limited near the boundary.
            const GridSpec box = domain.bounding_grid(8, 8, 0.01);
            cell_quadrature(domain, box.lo.real(), box.lo.imag(), box.hi.real(), box.hi.imag(),
                            opts.quadtree_depth, quad);
            break;
        }
    }
    if (quad.size() < 64 * 64)
        throw InvalidInput("numeric_basis: quadrature has fewer than 64^2 nodes");

    const size_t m = impl->basis.size();

    // Gram matrix.  For a common-center power basis on a polar rule the
    // product-quadrature sum factorizes into radial moments times exact
    // roots-of-unity angular sums; otherwise assemble the design matrix.
    Eigen::MatrixXcd gram(m, m);
    bool common_center = domain.kind() == PlanarDomain::Kind::Disc ||
                         domain.kind() == PlanarDomain::Kind::Annulus;
    if (common_center) {
        const Complex center = outer_comp->circle.center;
        const double r0 = domain.kind() == PlanarDomain::Kind::Annulus
                              ? domain.components()[1].circle.radius
                              : 0.0;
        const int n_t = opts.angular_nodes;
        const auto radial = gauss_legendre(opts.radial_nodes, r0, outer_comp->circle.radius);
        auto radial_moment = [&](int p) {
            double s = 0.0;
            for (const auto& [x, w] : radial) s += w * std::pow(x, p);
            return s;
        };
        for (size_t j = 0; j < m; ++j)
            for (size_t k = 0; k <= j; ++k) {
                const int pj = impl->basis[j].power, pk = impl->basis[k].power;
                Complex g{0.0};
                if ((pj - pk) % n_t == 0)
                    g = 2.0 * kPi * radial_moment(pj + pk + 1) /
                        (std::pow(impl->basis[j].scale, pj) * std::pow(impl->basis[k].scale, pk));
                gram(j, k) = g;
                gram(k, j) = std::conj(g);
            }
        (void)center;
    } else {
        Eigen::MatrixXcd design(quad.size(), m);
        for (size_t q = 0; q < quad.size(); ++q) {
            const double sw = std::sqrt(quad[q].w);
            for (size_t j = 0; j < m; ++j) design(q, j) = sw * impl->basis_value(j, quad[q].z);
        }
        gram = design.adjoint() * design;
    }

    // Pseudo-inverse through the eigendecomposition, clipping the tail.
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd> es(gram);
    if (es.info() != Eigen::Success)
        throw NumericalBreakdown("numeric_basis: Gram eigendecomposition failed");
    const Eigen::VectorXd ev = es.eigenvalues();
    const double clip = 1e-14 * ev(m - 1);
    Eigen::VectorXd inv(m);
    double min_used = ev(m - 1);
    for (size_t j = 0; j < m; ++j) {
        if (ev(j) > clip) {
            inv(j) = 1.0 / ev(j);
            min_used = std::min(min_used, ev(j));
        } else {
            inv(j) = 0.0;
        }
    }
    impl->ginv = es.eigenvectors() * inv.asDiagonal() * es.eigenvectors().adjoint();
    impl->ginv = 0.5 * (impl->ginv + Eigen::MatrixXcd(impl->ginv.adjoint()));
    impl->gram_cond = ev(m - 1) / min_used;
    return KernelModel(impl);
}

KernelModel::Kind KernelModel::kind() const { return impl_->kind; }

int KernelModel::dimension() const { return impl_->dim; }

const PlanarDomain* KernelModel::domain() const { return impl_->dom.get(); }

Complex KernelModel::operator()(Complex z, Complex w) const { return impl_->eval1(z, w); }

Complex KernelModel::eval(std::span<const Complex> z, std::span<const Complex> w) const {
    if (impl_->kind == Kind::BallClosed) {
        if (static_cast<int>(z.size()) != impl_->dim || static_cast<int>(w.size()) != impl_->dim)
            throw InvalidInput("kernel eval: dimension mismatch");
        Complex dot{0.0};
        for (int j = 0; j < impl_->dim; ++j) dot += z[j] * std::conj(w[j]);
        const Complex t = 1.0 - dot;
        return factorial(impl_->dim) / std::pow(kPi, impl_->dim) * std::pow(t, -(impl_->dim + 1));
    }
    if (z.size() != 1 || w.size() != 1)
        throw InvalidInput("kernel eval: this model is one-dimensional");
    return impl_->eval1(z[0], w[0]);
}

double KernelModel::diagonal(Complex z) const {
    const Complex k = impl_->eval1(z, z);
    if (!(k.real() > 0.0))
        throw NumericalBreakdown("kernel diagonal: K(z,z) is not positive");
    return k.real();
}

KernelModel::Checked KernelModel::eval_checked(Complex z, Complex w) const {
    Checked out{impl_->eval1(z, w), 0.0, false};
    if (impl_->kind != Kind::AnnulusSeries) return out;
    const int n = impl_->truncation;
    const double t = std::abs(z * std::conj(w));
    const double rp = t / (impl_->outer * impl_->outer);
    const double rm = (impl_->inner * impl_->inner) / t;
    double tail = 0.0;
    if (rp < 1.0) {
        tail += std::pow(t, n) / impl_->nu_at(n) * rp / (1.0 - rp);
    } else {
        tail = std::numeric_limits<double>::infinity();
    }
    if (rm < 1.0) {
        tail += std::pow(t, -n) / impl_->nu_at(-n) * rm / (1.0 - rm);
    } else {
        tail = std::numeric_limits<double>::infinity();
    }
    out.tail_relative = tail / std::sqrt(diagonal(z) * diagonal(w));
    out.truncation_warning = !(out.tail_relative <= 1e-12);
    return out;
}

size_t KernelModel::basis_size() const { return impl_->basis.size(); }

double KernelModel::gram_condition() const { return impl_->gram_cond; }

double KernelModel::log_diagonal_laplacian(Complex z) const {
    switch (impl_->kind) {
        case Kind::BallClosed:
            if (impl_->dim != 1)
                throw InvalidInput("log_diagonal_laplacian: one complex dimension only");
            [[fallthrough]];
        case Kind::DiscClosed: {
            const double den = 1.0 - std::norm(z);
            return 2.0 / (den * den);
        }
        case Kind::AnnulusSeries: {
            // K(z,z) = sum c_m t^m with t = |z|^2, c_m = 1/nu_m; then
            // B = (S0 S2 - t S1^2) / S0^2 with S1 = sum c_m m t^(m-1),
            // S2 = sum c_m m^2 t^(m-1).
            const double t = std::norm(z);
            double s0 = 0.0, s1 = 0.0, s2 = 0.0;
            for (int m = -impl_->truncation; m <= impl_->truncation; ++m) {
                const double c = 1.0 / impl_->nu_at(m);
                const double tm1 = std::pow(t, m - 1);
                s0 += c * tm1 * t;
                s1 += c * m * tm1;
                s2 += c * m * m * tm1;
            }
            return (s0 * s2 - t * s1 * s1) / (s0 * s0);
        }
        case Kind::NumericBasis: {
            const Eigen::VectorXcd b = impl_->basis_vector(z);
            const Eigen::VectorXcd db = impl_->basis_dvector(z);
            const Eigen::VectorXcd vb = impl_->ginv * b.conjugate();
            const Eigen::VectorXcd vdb = impl_->ginv * db.conjugate();
            const double k = (b.transpose() * vb).value().real();
            const Complex kz = (db.transpose() * vb).value();
            const double kzzb = (db.transpose() * vdb).value().real();
            return (k * kzzb - std::norm(kz)) / (k * k);
        }
    }
    throw InvalidInput("log_diagonal_laplacian: unknown kind");
}

MetricField bergman_metric_field(const KernelModel& model, const PlanarDomain& domain) {
    if (model.kind() == KernelModel::Kind::BallClosed && model.dimension() != 1)
        throw InvalidInput("bergman_metric_field: one complex dimension only");
    const KernelModel m = model;
    auto factor = [m](Complex z) { return m.log_diagonal_laplacian(z); };
    auto eval = [factor](Complex z) {
        const double b = factor(z);
        if (!(b > 0.0)) throw NumericalBreakdown("bergman_metric_field: factor <= 0");
        return Sym2::scale(b);
    };
    MetricField f(domain, Provenance::Bergman, std::move(eval), false);
    if (model.kind() == KernelModel::Kind::DiscClosed ||
        model.kind() == KernelModel::Kind::BallClosed) {
        auto deriv = [](Complex z) {
            const double den = 1.0 - std::norm(z);
            const double f3 = 8.0 / (den * den * den);
            return std::array<Sym2, 2>{Sym2::scale(f3 * z.real()), Sym2::scale(f3 * z.imag())};
        };
        return std::move(f).with_derivative(deriv).with_conformal_factor(factor);
    }
    return std::move(f).with_conformal_factor(factor);
}

double transformation_residual(const KernelModel& k1, const KernelModel& k2,
                               const Automorphism& phi,
                               std::span<const std::pair<Complex, Complex>> pairs) {
    double worst = 0.0;
    for (const auto& [z, w] : pairs) {
        const Complex rhs = k1(z, w);
        const Complex lhs =
            phi.derivative(z) * k2(phi.apply(z), phi.apply(w)) * std::conj(phi.derivative(w));
        worst = std::max(worst, std::abs(lhs - rhs) / std::abs(rhs));
    }
    return worst;
}

Complex representative_coords(const KernelModel& model, Complex p, Complex z, double step) {
    if (!(step > 0.0)) throw InvalidInput("representative_coords: step must be positive");
    const Complex kzp = model(z, p);
    const double scale = std::sqrt(model.diagonal(z) * model.diagonal(p));
    if (std::abs(kzp) < 1e-12 * scale)
        throw KernelZero("representative_coords: |K(z,p)| below the usable threshold");
    const double arg0 = std::arg(kzp);
    auto big_l = [&](Complex w) {
        const Complex kw = model(z, w);
        double a = std::arg(kw);
        while (a - arg0 > kPi) a -= 2.0 * kPi;
        while (a - arg0 < -kPi) a += 2.0 * kPi;
        return Complex{std::log(std::abs(kw)) - std::log(model.diagonal(w)), a};
    };
    const Complex du = (big_l(p + step) - big_l(p - step)) / (2.0 * step);
    const Complex dv = (big_l(p + Complex{0.0, step}) - big_l(p - Complex{0.0, step})) / (2.0 * step);
    return 0.5 * (du + Complex{0.0, 1.0} * dv);
}

Complex levi_polynomial(const LeviInput& input) {
    const size_t n = static_cast<size_t>(input.dim);
    if (input.z.size() != n || input.w.size() != n)
        throw InvalidInput("levi_polynomial: dimension mismatch");
    Complex x{input.rho(input.w), 0.0};
    for (size_t j = 0; j < n; ++j)
        x += (input.z[j] - input.w[j]) * input.d_rho(input.w, static_cast<int>(j));
    for (size_t j = 0; j < n; ++j)
        for (size_t k = 0; k < n; ++k)
            x += 0.5 * (input.z[j] - input.w[j]) * (input.z[k] - input.w[k]) *
                 input.d2_rho(input.w, static_cast<int>(j), static_cast<int>(k));
    return x;
}

double derivative_bound_probe(const CompactGroup& group, int order,
                              std::span<const Complex> samples, int circle_nodes) {
    if (order < 1 || order > 4)
        throw InvalidInput("derivative_bound_probe: order must be between 1 and 4");
    const auto nodes = group.haar_nodes(circle_nodes);
    double sup = 0.0;
    for (const auto& node : nodes) {
        // Hoist the combined Moebius matrix; the k-th derivative magnitude is
        // k! |c|^(k-1) |ad - bc| / |cz + d|^(k+1).
        const auto m = node.aut.coefficients();
        const double det = std::abs(m.det());
        const double cmag = std::abs(m.c);
        for (const Complex z : samples) {
            if (cmag < 1e-15) {
                sup = std::max(sup, std::abs(m.a / m.d));
                continue;
            }
            const double den = std::abs(m.c * z + m.d);
            double mag = det / (den * den);  // order 1
            double fact = 1.0;
            for (int k = 1; k <= order; ++k) {
                sup = std::max(sup, fact * mag);
                mag *= cmag / den;
                fact *= k + 1;
            }
        }
    }
    return sup;
}

}  // namespace invmet
