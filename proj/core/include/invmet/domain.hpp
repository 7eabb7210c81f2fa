#pragma once

#include <memory>
#include <optional>
#include <vector>

#include "invmet/types.hpp"

namespace invmet {

class Automorphism;

// Oriented boundary component: the defining-function piece is
//   sign * (|z - c| - r)        (signed-distance form), or
//   sign * (|z - c|^2 - r^2)    (quadratic form),
// with sign = +1 when the domain interior lies inside the circle.
struct BoundaryComponent {
    Circle circle;
    int sign = 1;

    double piece(Complex z) const { return sign * circle.signed_distance(z); }
    double piece_quadratic(Complex z) const {
        const double d2 = std::norm(z - circle.center);
        return sign * (d2 - circle.radius * circle.radius);
    }
};

enum class DefiningForm { SignedDistance, Quadratic };

struct GridSpec {
    Complex lo{-1.0, -1.0};
    Complex hi{1.0, 1.0};
    int nx = 64, ny = 64;

    double dx() const { return (hi.real() - lo.real()) / (nx - 1); }
    double dy() const { return (hi.imag() - lo.imag()) / (ny - 1); }
    Complex node(int ix, int iy) const { return {lo.real() + ix * dx(), lo.imag() + iy * dy()}; }
    size_t count() const { return static_cast<size_t>(nx) * ny; }
    size_t index(int ix, int iy) const { return static_cast<size_t>(iy) * nx + ix; }
    void validate() const;
    GridSpec refined() const { return {lo, hi, 2 * nx - 1, 2 * ny - 1}; }
};

// A bounded planar domain whose boundary is a finite union of circles.  The
// defining function is kept piecewise per component; rho() reports the max of
// the pieces, which classifies interior/exterior, while gradients and
// distances always come from a single analytic piece.
class PlanarDomain {
public:
    enum class Kind { Disc, Annulus, DiscMinusDiscs, MoebiusImage };

    static PlanarDomain disc(Complex center, double radius);
    static PlanarDomain annulus(double inner, double outer);
    static PlanarDomain disc_minus_discs(const Circle& outer, std::vector<Circle> holes);
    // Image of `base` under a Moebius-form map; the image boundary circles are
    // computed analytically.  Throws InvalidDomain if the map has a pole in
    // the closure of `base` (and hence is not injective there).
    static PlanarDomain moebius_image(const PlanarDomain& base, const Automorphism& map);

    Kind kind() const { return kind_; }
    const std::vector<BoundaryComponent>& components() const { return components_; }

    // Max over the per-component pieces; < 0 inside, > 0 outside.
    double rho(Complex z, DefiningForm form = DefiningForm::SignedDistance) const;
    bool interior(Complex z) const { return rho(z) < 0.0; }
    bool in_closure(Complex z, double tol = 1e-12) const { return rho(z) <= tol; }

    // Index of the boundary component nearest to z.
    int nearest_component(Complex z) const;

    // Euclidean gradient of the nearest component's piece; AmbiguousComponent
    // if two components are equidistant within 1e-12 (pass the index then).
    Vec2 grad_rho(Complex z, DefiningForm form = DefiningForm::SignedDistance) const;
    Vec2 grad_rho_component(Complex z, int component,
                            DefiningForm form = DefiningForm::SignedDistance) const;

    // Exact Euclidean distance to the boundary; requires z interior.
    double boundary_distance(Complex z) const;

    // Row-major grid samples with rho < 0 and boundary distance >= margin.
    std::vector<Complex> sample_interior(const GridSpec& spec, double margin) const;

    double diameter() const;
    // Radius of the largest inscribed metric-free disc; analytic for discs and
    // annuli, computed on a fine grid otherwise.
    double inradius() const;

    // Bounding box of the closure padded by `pad` (fraction of diameter).
    GridSpec bounding_grid(int nx, int ny, double pad = 0.04) const;

    // Construction data for MoebiusImage domains (empty otherwise).
    const PlanarDomain* moebius_base() const;
    const Automorphism* moebius_map() const;

private:
    PlanarDomain() = default;

    Kind kind_ = Kind::Disc;
    std::vector<BoundaryComponent> components_;
    std::shared_ptr<const PlanarDomain> base_;       // MoebiusImage only
    std::shared_ptr<const Automorphism> map_;        // MoebiusImage only
    mutable double inradius_cache_ = -1.0;
};

}  // namespace invmet
