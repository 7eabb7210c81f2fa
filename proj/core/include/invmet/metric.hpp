#pragma once

#include <array>
#include <functional>
#include <memory>
#include <span>

#include "invmet/group.hpp"

namespace invmet {

enum class Provenance { Euclidean, Poincare, Bergman, Averaged, Blended, GridInterpolated, Custom };

// A Riemannian metric as a field of SPD 2x2 matrices over a planar domain.
// Immutable value type; evaluation is pure, so fields may be shared across
// threads freely.
class MetricField {
public:
    using Eval = std::function<Sym2(Complex)>;
    using Deriv = std::function<std::array<Sym2, 2>(Complex)>;  // d/dx, d/dy
    using Conformal = std::function<double(Complex)>;           // G = lambda * I

    MetricField(PlanarDomain domain, Provenance prov, Eval eval, bool smooth_to_boundary);

    static MetricField euclidean(PlanarDomain domain);
    // F(z; xi) = r |xi| / (r^2 - |z - c|^2) squared as a quadratic form; the
    // unit disc gives the familiar |xi| / (1 - |z|^2).
    static MetricField poincare_disc(PlanarDomain disc);

    const PlanarDomain& domain() const { return *domain_; }
    Provenance provenance() const { return provenance_; }
    bool smooth_to_boundary() const { return smooth_; }

    Sym2 operator()(Complex z) const;  // checked evaluation (eval_metric)

    bool has_analytic_derivative() const { return static_cast<bool>(deriv_); }
    std::array<Sym2, 2> analytic_derivative(Complex z) const { return deriv_(z); }
    bool conformal() const { return static_cast<bool>(conformal_); }
    double conformal_factor(Complex z) const { return conformal_(z); }

    MetricField&& with_derivative(Deriv d) &&;
    MetricField&& with_conformal_factor(Conformal c) &&;

private:
    std::shared_ptr<const PlanarDomain> domain_;
    Provenance provenance_;
    Eval eval_;
    Deriv deriv_;
    Conformal conformal_;
    bool smooth_ = false;
};

// Checked evaluation: OutsideDomain if z is outside the closure (fields not
// smooth to the boundary require strict interior); NumericalBreakdown with
// diagnostics if the result is not SPD.  Smooth fields tolerate a thin collar
// outside the closure so finite-difference stencils and projected boundary
// feet stay evaluable.
Sym2 eval_metric(const MetricField& field, Complex z);

// J^T G(a(z)) J with J the real Jacobian of `aut` at z.
Sym2 pullback(const MetricField& field, const Automorphism& aut, Complex z);

// Haar average of the pullbacks over the group: sum_k w_k J_k^T G(a_k z) J_k.
// Node sums use fixed-layout pairwise summation, so results are bitwise
// reproducible.  Throws InvalidGroup if any node fails the self-map gate.
MetricField average(const CompactGroup& group, const MetricField& base, int n);

// max over samples and Haar nodes of
//   |pullback(field, a, z) - field(z)|_F / max(1, |field(z)|_F).
double invariance_residual(const MetricField& field, const CompactGroup& group,
                           std::span<const Complex> samples, int n);

// Samples the field on the grid and returns a bilinear interpolant with SPD
// repair (symmetric by construction, eigenvalue floor 1e-10).
MetricField grid_interpolated(const MetricField& source, const GridSpec& spec);

}  // namespace invmet
