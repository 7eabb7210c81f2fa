#pragma once

#include <functional>
#include <memory>
#include <span>
#include <utility>

#include "invmet/metric.hpp"

namespace invmet {

struct KernelNumericOptions {
    int poly_degree = 48;     // powers 0 .. poly_degree-1 about the outer center
    int pole_degree = -1;     // negative powers per hole; -1 = same as poly_degree
    int radial_nodes = 96;    // Gauss-Legendre points per radial line
    int angular_nodes = 256;  // trapezoid points per circle
    int quadtree_depth = 8;   // only for DiscMinusDiscs cell quadrature
};

// Bergman kernel evaluators.  Closed forms for the unit disc, the unit ball
// in C^n, and the annulus (Laurent series); a numeric Gram-orthonormalization
// oracle for circular-boundary domains.  K(z, w) is holomorphic in z and
// antiholomorphic in w, and K(z, w) = conj(K(w, z)).
class KernelModel {
public:
    enum class Kind { DiscClosed, BallClosed, AnnulusSeries, NumericBasis };

    // K(z,w) = 1 / (pi (1 - z conj(w))^2) on the unit disc.
    static KernelModel disc_closed();
    // K(z,w) = n!/pi^n (1 - <z,w>)^-(n+1) on the unit ball of C^n.
    static KernelModel ball_closed(int dim);
    // K(z,w) = sum_{|m| <= N} (z conj(w))^m / nu_m on {r < |z| < R}, with
    // nu_m = pi (R^{2m+2} - r^{2m+2}) / (m+1), nu_{-1} = 2 pi ln(R/r).
    static KernelModel annulus_series(double inner, double outer, int truncation = 60);

    // Gram-inversion oracle: K(z,w) = b(z)^T Gram^-1 conj(b(w)) over monomial
    // and pole bases.  Disc and annulus use polar product quadrature; Moebius
    // images of them pull the quadrature back through the map.  Multi-hole
    // domains fall back to an adaptive cell rule and are experimental.
    static KernelModel numeric_basis(const PlanarDomain& domain,
                                     KernelNumericOptions opts = KernelNumericOptions());

    Kind kind() const;
    int dimension() const;
    const PlanarDomain* domain() const;  // null for closed forms on canonical domains

    Complex operator()(Complex z, Complex w) const;
    Complex eval(std::span<const Complex> z, std::span<const Complex> w) const;
    double diagonal(Complex z) const;  // K(z,z), real and positive

    struct Checked {
        Complex value;
        double tail_relative;  // series tail bound / sqrt(K(z,z) K(w,w))
        bool truncation_warning;
    };
    Checked eval_checked(Complex z, Complex w) const;

    // d^2/(dz dzbar) log K(z,z): the Bergman conformal factor, by analytic
    // differentiation (term-wise for the series, Gram-form for the oracle).
    double log_diagonal_laplacian(Complex z) const;

    size_t basis_size() const;        // NumericBasis only
    double gram_condition() const;    // NumericBasis only

    struct Impl;

private:
    explicit KernelModel(std::shared_ptr<const Impl> impl) : impl_(std::move(impl)) {}
    std::shared_ptr<const Impl> impl_;
};

// Conformal field B(z) I with B = d^2/dz dzbar log K(z,z), by analytic
// differentiation (term-wise for the series, Gram-form for the oracle).
MetricField bergman_metric_field(const KernelModel& model, const PlanarDomain& domain);

// max over pairs of |phi'(z) K2(phi z, phi w) conj(phi'(w)) - K1(z,w)| / |K1(z,w)|.
double transformation_residual(const KernelModel& k1, const KernelModel& k2,
                               const Automorphism& phi,
                               std::span<const std::pair<Complex, Complex>> pairs);

// Bergman representative coordinate b_p(z) = d/dwbar [log K(z,w) - log K(w,w)]
// at w = p, via central differences with branch-consistent logarithms.
// Throws KernelZero when |K(z,p)| < 1e-12 sqrt(K(z,z) K(p,p)).
Complex representative_coords(const KernelModel& model, Complex p, Complex z, double step);

// Levi polynomial data: analytic derivative closures, no finite differencing.
struct LeviInput {
    int dim = 1;
    std::function<double(std::span<const Complex>)> rho;
    std::function<Complex(std::span<const Complex>, int)> d_rho;        // d/dw_j
    std::function<Complex(std::span<const Complex>, int, int)> d2_rho;  // d2/dw_j dw_k
    std::vector<Complex> z, w;
};

// X(z,w) = rho(w) + sum (z_j - w_j) d_rho_j + 1/2 sum (z_j-w_j)(z_k-w_k) d2_rho_jk.
Complex levi_polynomial(const LeviInput& input);

// Empirical sup over Haar nodes, samples, and derivative orders 1..order of
// |d^k phi / dz^k|, from the closed Moebius forms.  A measurement, not a bound.
double derivative_bound_probe(const CompactGroup& group, int order,
                              std::span<const Complex> samples, int circle_nodes = 256);

}  // namespace invmet
