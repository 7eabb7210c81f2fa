#include "invmet/automorphism.hpp"

#include <limits>
#include <sstream>

#include "invmet/domain.hpp"

namespace invmet {

namespace {

// Largest-modulus entry, for scale-free normalization of coefficients.
double max_abs(const Automorphism::MoebiusCoeffs& m) {
    return std::max(std::max(std::abs(m.a), std::abs(m.b)),
                    std::max(std::abs(m.c), std::abs(m.d)));
}

Automorphism::MoebiusCoeffs normalized(Automorphism::MoebiusCoeffs m) {
    const double s = max_abs(m);
    if (s == 0.0) throw InvalidAutomorphism("zero Moebius matrix");
    m.a /= s;
    m.b /= s;
    m.c /= s;
    m.d /= s;
    return m;
}

// Matrix of g.f composed as "apply f first, then g".
Automorphism::MoebiusCoeffs compose(const Automorphism::MoebiusCoeffs& g,
                                    const Automorphism::MoebiusCoeffs& f) {
    return normalized({g.a * f.a + g.b * f.c, g.a * f.b + g.b * f.d,
                       g.c * f.a + g.d * f.c, g.c * f.b + g.d * f.d});
}

}  // namespace

Automorphism Automorphism::identity() { return moebius(1.0, 0.0, 0.0, 1.0); }

Automorphism Automorphism::rotation(double theta) { return Automorphism(RotationF{theta}); }

Automorphism Automorphism::moebius(Complex a, Complex b, Complex c, Complex d) {
    MoebiusCoeffs m{a, b, c, d};
    if (std::abs(m.det()) <= 1e-15 * max_abs(m) * max_abs(m))
        throw InvalidAutomorphism("moebius: ad - bc is (numerically) zero");
    return Automorphism(MoebiusF{m});
}

Automorphism Automorphism::inversion(double k) {
    if (k == 0.0) throw InvalidAutomorphism("inversion: k must be nonzero");
    return Automorphism(InversionF{k});
}

Automorphism Automorphism::composite(std::vector<Automorphism> parts) {
    if (parts.empty()) throw InvalidAutomorphism("composite: empty chain");
    return Automorphism(CompositeF{std::move(parts)});
}

Complex Automorphism::apply(Complex z) const {
    if (auto* r = std::get_if<RotationF>(form_.get())) return std::polar(1.0, r->theta) * z;
    if (auto* m = std::get_if<MoebiusF>(form_.get()))
        return (m->m.a * z + m->m.b) / (m->m.c * z + m->m.d);
    if (auto* i = std::get_if<InversionF>(form_.get())) return i->k / z;
    const auto& parts = std::get<CompositeF>(*form_).parts;
    for (const auto& p : parts) z = p.apply(z);
    return z;
}

Complex Automorphism::derivative(Complex z) const {
    if (auto* r = std::get_if<RotationF>(form_.get())) return std::polar(1.0, r->theta);
    if (auto* m = std::get_if<MoebiusF>(form_.get())) {
        const Complex den = m->m.c * z + m->m.d;
        return m->m.det() / (den * den);
    }
    if (auto* i = std::get_if<InversionF>(form_.get())) return -i->k / (z * z);
    // Chain rule along the application order.
    const auto& parts = std::get<CompositeF>(*form_).parts;
    Complex d{1.0};
    for (const auto& p : parts) {
        d *= p.derivative(z);
        z = p.apply(z);
    }
    return d;
}

Complex Automorphism::derivative_n(Complex z, int order) const {
    if (order < 1) throw InvalidInput("derivative_n: order must be >= 1");
    const MoebiusCoeffs m = coefficients();
    if (std::abs(m.c) < 1e-15) {
        // Affine map a/d z + b/d.
        return order == 1 ? m.a / m.d : Complex{0.0};
    }
    // d^k/dz^k (az+b)/(cz+d) = (-1)^(k-1) k! c^(k-1) (ad-bc) / (cz+d)^(k+1)
    Complex num = m.det();
    double fact = 1.0;
    for (int k = 2; k <= order; ++k) {
        num *= m.c;
        fact *= k;
    }
    const double sign = (order % 2 == 1) ? 1.0 : -1.0;
    return sign * fact * num / std::pow(m.c * z + m.d, order + 1);
}

Mat2 Automorphism::real_jacobian(Complex z) const {
    const Complex d = derivative(z);
    return {d.real(), -d.imag(), d.imag(), d.real()};
}

Automorphism Automorphism::inverse() const {
    if (auto* r = std::get_if<RotationF>(form_.get())) return rotation(-r->theta);
    if (auto* m = std::get_if<MoebiusF>(form_.get()))
        return moebius(m->m.d, -m->m.b, -m->m.c, m->m.a);
    if (auto* i = std::get_if<InversionF>(form_.get())) return inversion(i->k);
    const auto& parts = std::get<CompositeF>(*form_).parts;
    std::vector<Automorphism> inv;
    inv.reserve(parts.size());
    for (auto it = parts.rbegin(); it != parts.rend(); ++it) inv.push_back(it->inverse());
    return composite(std::move(inv));
}

Automorphism::MoebiusCoeffs Automorphism::coefficients() const {
    if (auto* r = std::get_if<RotationF>(form_.get()))
        return {std::polar(1.0, r->theta), 0.0, 0.0, 1.0};
    if (auto* m = std::get_if<MoebiusF>(form_.get())) return normalized(m->m);
    if (auto* i = std::get_if<InversionF>(form_.get())) return normalized({0.0, i->k, 1.0, 0.0});
    const auto& parts = std::get<CompositeF>(*form_).parts;
    MoebiusCoeffs acc = parts.front().coefficients();
    for (size_t i = 1; i < parts.size(); ++i) acc = compose(parts[i].coefficients(), acc);
    return acc;
}

std::optional<Complex> Automorphism::pole() const {
    const MoebiusCoeffs m = coefficients();
    if (std::abs(m.c) < 1e-14) return std::nullopt;
    return -m.d / m.c;
}

Circle Automorphism::map_circle(const Circle& circle) const {
    const MoebiusCoeffs m = coefficients();
    if (std::abs(m.c) < 1e-14) {
        const Complex s = m.a / m.d;
        return {s * circle.center + m.b / m.d, std::abs(s) * circle.radius};
    }
    // (az+b)/(cz+d) = a/c + ((bc-ad)/c) / (cz+d): affine, invert, affine.
    const Complex q1 = m.c * circle.center + m.d;
    const double s1 = std::abs(m.c) * circle.radius;
    const double denom = std::norm(q1) - s1 * s1;
    if (std::abs(denom) < 1e-14 * (std::norm(q1) + s1 * s1))
        throw InvalidAutomorphism("map_circle: circle passes through the pole");
    const Complex q2 = std::conj(q1) / denom;
    const double s2 = s1 / std::abs(denom);
    const Complex mul = (m.b * m.c - m.a * m.d) / m.c;
    return {mul * q2 + m.a / m.c, std::abs(mul) * s2};
}

bool Automorphism::is_identity(double tol) const {
    const MoebiusCoeffs m = coefficients();
    const double s = max_abs(m);
    return std::abs(m.b) <= tol * s && std::abs(m.c) <= tol * s && std::abs(m.a - m.d) <= tol * s;
}

std::string Automorphism::describe() const {
    std::ostringstream os;
    os.precision(12);
    if (auto* r = std::get_if<RotationF>(form_.get())) {
        os << "rotation(" << r->theta << ")";
    } else if (auto* m = std::get_if<MoebiusF>(form_.get())) {
        os << "moebius(" << m->m.a << ", " << m->m.b << ", " << m->m.c << ", " << m->m.d << ")";
    } else if (auto* i = std::get_if<InversionF>(form_.get())) {
        os << "inversion(" << i->k << ")";
    } else {
        const auto& parts = std::get<CompositeF>(*form_).parts;
        os << "composite[";
        for (size_t i = 0; i < parts.size(); ++i) os << (i ? ", " : "") << parts[i].describe();
        os << "]";
    }
    return os.str();
}

Automorphism::FormKind Automorphism::form_kind() const {
    if (std::holds_alternative<RotationF>(*form_)) return FormKind::Rotation;
    if (std::holds_alternative<MoebiusF>(*form_)) return FormKind::Moebius;
    if (std::holds_alternative<InversionF>(*form_)) return FormKind::Inversion;
    return FormKind::Composite;
}

double Automorphism::rotation_angle() const { return std::get<RotationF>(*form_).theta; }

double Automorphism::inversion_constant() const { return std::get<InversionF>(*form_).k; }

const std::vector<Automorphism>& Automorphism::parts() const {
    return std::get<CompositeF>(*form_).parts;
}

double self_map_residual(const Automorphism& aut, const PlanarDomain& domain, int m) {
    if (m < 16) throw InvalidInput("self_map_residual: need m >= 16 samples per component");
    double residual = 0.0;
    for (const auto& comp : domain.components()) {
        for (int i = 0; i < m; ++i) {
            const double theta = 2.0 * kPi * i / m;
            const Complex w = aut.apply(comp.circle.point(theta));
            // Distance from the image to the boundary set.
            double d = std::numeric_limits<double>::max();
            for (const auto& c : domain.components())
                d = std::min(d, std::abs(c.circle.signed_distance(w)));
            residual = std::max(residual, d);
        }
    }
    // One interior point must stay interior (rules out boundary-preserving
    // maps that swap inside and outside).
    const GridSpec box = domain.bounding_grid(32, 32);
    Complex probe{};
    double best = std::numeric_limits<double>::max();
    for (int iy = 0; iy < box.ny; ++iy)
        for (int ix = 0; ix < box.nx; ++ix) {
            const Complex z = box.node(ix, iy);
            const double r = domain.rho(z);
            if (r < best) {
                best = r;
                probe = z;
            }
        }
    const Complex image = aut.apply(probe);
    if (!domain.interior(image)) residual = std::max(residual, std::abs(domain.rho(image)));
    return residual;
}

}  // namespace invmet
