#pragma once

#include <optional>
#include <vector>

#include "invmet/automorphism.hpp"
#include "invmet/domain.hpp"

namespace invmet {

struct HaarNode {
    Automorphism aut;
    double weight;
};

// A compact group of automorphisms of a fixed domain, with Haar quadrature:
// either a finite list, the full circle of rotations (optionally conjugated by
// a biholomorphism), or the circle extended by one inversion coset.
class CompactGroup {
public:
    enum class Structure { Finite, Circle, CircleWithInversion };

    // Every element must pass the self-map residual gate (< 1e-9); finite
    // groups are additionally checked for closure under composition/inverse.
    static CompactGroup finite(std::vector<Automorphism> elements, PlanarDomain domain);
    static CompactGroup circle(PlanarDomain domain,
                               std::optional<Automorphism> conjugator = std::nullopt);
    static CompactGroup circle_with_inversion(PlanarDomain domain, Automorphism inversion,
                                              std::optional<Automorphism> conjugator = std::nullopt);

    Structure structure() const { return structure_; }
    const PlanarDomain& domain() const { return domain_; }
    size_t finite_size() const { return elements_.size(); }
    const std::vector<Automorphism>& finite_elements() const { return elements_; }
    const std::optional<Automorphism>& conjugator() const { return conjugator_; }
    const std::optional<Automorphism>& inversion_element() const { return inversion_; }

    // Finite: all elements with weight 1/|G| (n ignored).  Circle: n equally
    // spaced rotations, weight 1/n.  CircleWithInversion: 2n nodes, 1/(2n).
    std::vector<HaarNode> haar_nodes(int n) const;

    // Group element for a given circle parameter (conjugation applied);
    // `inverted` picks the inversion coset.  Finite groups reject this.
    Automorphism element_at(double theta, bool inverted = false) const;

    // The group {phi . a . phi^-1} acting on the image domain phi(domain).
    CompactGroup conjugated(const Automorphism& phi) const;

    // Max self-map residual over elements (sampled for circle structures).
    double registration_residual(int m = 64) const;

private:
    explicit CompactGroup(PlanarDomain domain) : domain_(std::move(domain)) {}

    Structure structure_ = Structure::Finite;
    PlanarDomain domain_;
    std::vector<Automorphism> elements_;     // Finite only
    std::optional<Automorphism> conjugator_; // Circle structures
    std::optional<Automorphism> inversion_;  // CircleWithInversion, unconjugated
};

}  // namespace invmet
