#include "invmet/group.hpp"

#include <algorithm>

namespace invmet {

namespace {

constexpr double kRegistrationGate = 1e-9;

Automorphism conjugate_element(const Automorphism& a, const Automorphism& phi) {
    return Automorphism::composite({phi.inverse(), a, phi});
}

// Pointwise comparison on a fixed circle of interior samples.
bool same_map(const Automorphism& a, const Automorphism& b, const PlanarDomain& domain,
              double tol) {
    const GridSpec box = domain.bounding_grid(16, 16);
    int used = 0;
    for (int iy = 0; iy < box.ny && used < 32; ++iy)
        for (int ix = 0; ix < box.nx && used < 32; ++ix) {
            const Complex z = box.node(ix, iy);
            if (domain.rho(z) > -1e-6) continue;
            ++used;
            if (std::abs(a.apply(z) - b.apply(z)) > tol) return false;
        }
    return used > 0;
}

void check_registration(const Automorphism& a, const PlanarDomain& domain) {
    if (auto p = a.pole()) {
        if (domain.rho(*p) <= 1e-12)
            throw InvalidAutomorphism("automorphism has a pole inside the domain closure: " +
                                      a.describe());
    }
    const double r = self_map_residual(a, domain, 64);
    if (r >= kRegistrationGate)
        throw InvalidGroup("element fails the self-map gate (residual " + std::to_string(r) +
                           "): " + a.describe());
}

}  // namespace

CompactGroup CompactGroup::finite(std::vector<Automorphism> elements, PlanarDomain domain) {
    if (elements.empty()) throw InvalidGroup("finite: empty element list");
    for (const auto& e : elements) check_registration(e, domain);
    // Closure under composition and inverse, verified exhaustively.
    auto find = [&](const Automorphism& a) {
        for (const auto& e : elements)
            if (same_map(a, e, domain, 1e-10)) return true;
        return false;
    };
    for (const auto& a : elements) {
        if (!find(a.inverse()))
            throw InvalidGroup("finite: inverse of " + a.describe() + " is not in the list");
        for (const auto& b : elements)
            if (!find(Automorphism::composite({a, b})))
                throw InvalidGroup("finite: composition " + b.describe() + " . " + a.describe() +
                                   " is not in the list");
    }
    CompactGroup g(std::move(domain));
    g.structure_ = Structure::Finite;
    g.elements_ = std::move(elements);
    return g;
}

CompactGroup CompactGroup::circle(PlanarDomain domain, std::optional<Automorphism> conjugator) {
    CompactGroup g(std::move(domain));
    g.structure_ = Structure::Circle;
    g.conjugator_ = std::move(conjugator);
    for (int k = 0; k < 8; ++k)
        check_registration(g.element_at(2.0 * kPi * (k + 0.37) / 8.0), g.domain_);
    return g;
}

CompactGroup CompactGroup::circle_with_inversion(PlanarDomain domain, Automorphism inversion,
                                                 std::optional<Automorphism> conjugator) {
    CompactGroup g(std::move(domain));
    g.structure_ = Structure::CircleWithInversion;
    g.conjugator_ = std::move(conjugator);
    g.inversion_ = std::move(inversion);
    for (int k = 0; k < 8; ++k) {
        check_registration(g.element_at(2.0 * kPi * (k + 0.37) / 8.0), g.domain_);
        check_registration(g.element_at(2.0 * kPi * (k + 0.37) / 8.0, true), g.domain_);
    }
    return g;
}

Automorphism CompactGroup::element_at(double theta, bool inverted) const {
    if (structure_ == Structure::Finite)
        throw InvalidInput("element_at: finite groups have no circle parameter");
    if (inverted && structure_ != Structure::CircleWithInversion)
        throw InvalidInput("element_at: group has no inversion coset");
    Automorphism core = inverted
                            ? Automorphism::composite({*inversion_, Automorphism::rotation(theta)})
                            : Automorphism::rotation(theta);
    if (!conjugator_) return core;
    return conjugate_element(core, *conjugator_);
}

std::vector<HaarNode> CompactGroup::haar_nodes(int n) const {
    if (n < 1) throw InvalidInput("haar_nodes: n must be >= 1");
    std::vector<HaarNode> nodes;
    switch (structure_) {
        case Structure::Finite: {
            const double w = 1.0 / static_cast<double>(elements_.size());
            for (const auto& e : elements_) nodes.push_back({e, w});
            break;
        }
        case Structure::Circle: {
            const double w = 1.0 / n;
            for (int k = 0; k < n; ++k) nodes.push_back({element_at(2.0 * kPi * k / n), w});
            break;
        }
        case Structure::CircleWithInversion: {
            const double w = 1.0 / (2.0 * n);
            for (int k = 0; k < n; ++k) nodes.push_back({element_at(2.0 * kPi * k / n), w});
            for (int k = 0; k < n; ++k) nodes.push_back({element_at(2.0 * kPi * k / n, true), w});
            break;
        }
    }
    return nodes;
}

CompactGroup CompactGroup::conjugated(const Automorphism& phi) const {
    PlanarDomain image = PlanarDomain::moebius_image(domain_, phi);
    switch (structure_) {
        case Structure::Finite: {
            std::vector<Automorphism> elems;
            elems.reserve(elements_.size());
            for (const auto& e : elements_) elems.push_back(conjugate_element(e, phi));
            return finite(std::move(elems), std::move(image));
        }
        case Structure::Circle: {
            const Automorphism conj =
                conjugator_ ? Automorphism::composite({*conjugator_, phi}) : phi;
            return circle(std::move(image), conj);
        }
        case Structure::CircleWithInversion: {
            const Automorphism conj =
                conjugator_ ? Automorphism::composite({*conjugator_, phi}) : phi;
            return circle_with_inversion(std::move(image), *inversion_, conj);
        }
    }
    throw InvalidGroup("conjugated: unknown structure");
}

double CompactGroup::registration_residual(int m) const {
    double r = 0.0;
    if (structure_ == Structure::Finite) {
        for (const auto& e : elements_) r = std::max(r, self_map_residual(e, domain_, m));
    } else {
        for (int k = 0; k < 8; ++k) {
            const double theta = 2.0 * kPi * (k + 0.13) / 8.0;
            r = std::max(r, self_map_residual(element_at(theta), domain_, m));
            if (structure_ == Structure::CircleWithInversion)
                r = std::max(r, self_map_residual(element_at(theta, true), domain_, m));
        }
    }
    return r;
}

}  // namespace invmet
