#pragma once

#include <memory>
#include <optional>
#include <string>
#include <variant>
#include <vector>

#include "invmet/types.hpp"

namespace invmet {

// A holomorphic automorphism in Moebius form: a rotation about the origin, a
// general linear fractional map, an inversion z -> k/z, or a composite chain.
// Every form is a linear fractional transformation, so exact coefficients,
// derivatives of all orders, and circle images are available in closed form.
class Automorphism {
public:
    struct MoebiusCoeffs {
        Complex a{1.0}, b{0.0}, c{0.0}, d{1.0};  // z -> (az + b)/(cz + d)
        Complex det() const { return a * d - b * c; }
    };

    static Automorphism identity();
    static Automorphism rotation(double theta);
    static Automorphism moebius(Complex a, Complex b, Complex c, Complex d);
    static Automorphism inversion(double k);
    // Parts are applied first-to-last: composite({f, g}) maps z to g(f(z)).
    static Automorphism composite(std::vector<Automorphism> parts);

    Complex apply(Complex z) const;
    // First complex derivative, analytic (chain rule across composites).
    Complex derivative(Complex z) const;
    // n-th complex derivative, n >= 1, from the closed Moebius form.
    Complex derivative_n(Complex z, int order) const;
    // Real 2x2 Jacobian [[Re a', -Im a'], [Im a', Re a']].
    Mat2 real_jacobian(Complex z) const;

    Automorphism inverse() const;

    // Coefficients of the whole map as a single normalized Moebius matrix.
    MoebiusCoeffs coefficients() const;

    // Exact image of a circle (Moebius maps send circles to circles).  Throws
    // InvalidAutomorphism if the circle passes through the pole.
    Circle map_circle(const Circle& c) const;

    // Pole of the map (c != 0 in the combined coefficients), if any.
    std::optional<Complex> pole() const;

    bool is_identity(double tol = 1e-12) const;

    std::string describe() const;

    enum class FormKind { Rotation, Moebius, Inversion, Composite };
    FormKind form_kind() const;
    // Form parameters, for serialization.
    double rotation_angle() const;  // Rotation only
    double inversion_constant() const;  // Inversion only
    const std::vector<Automorphism>& parts() const;  // Composite only

private:
    struct RotationF { double theta; };
    struct MoebiusF { MoebiusCoeffs m; };
    struct InversionF { double k; };
    struct CompositeF { std::vector<Automorphism> parts; };
    using Form = std::variant<RotationF, MoebiusF, InversionF, CompositeF>;

    explicit Automorphism(Form f) : form_(std::make_shared<Form>(std::move(f))) {}

    std::shared_ptr<const Form> form_;
};

// Max over m boundary samples per component of the distance from the mapped
// point to the boundary set, plus an interior-stays-interior probe.  Callers
// threshold the result (registration gate is 1e-9).
class PlanarDomain;
double self_map_residual(const Automorphism& aut, const PlanarDomain& domain, int m);

}  // namespace invmet
