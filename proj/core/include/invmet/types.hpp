#pragma once

#include <cmath>
#include <complex>
#include <span>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

namespace invmet {

using Complex = std::complex<double>;

constexpr double kPi = 3.14159265358979323846;

// ---------------------------------------------------------------------------
// Errors

struct Error : std::runtime_error {
    using std::runtime_error::runtime_error;
};

#define INVMET_ERROR(Name)                    \
    struct Name : Error {                     \
        using Error::Error;                   \
    }

INVMET_ERROR(InvalidDomain);
INVMET_ERROR(OutsideDomain);
INVMET_ERROR(AmbiguousComponent);
INVMET_ERROR(EmptySample);
INVMET_ERROR(InvalidAutomorphism);
INVMET_ERROR(InvalidGroup);
INVMET_ERROR(NumericalBreakdown);
INVMET_ERROR(KernelZero);
INVMET_ERROR(InvalidInput);
INVMET_ERROR(GridTooCoarse);
INVMET_ERROR(OutsideTube);
INVMET_ERROR(ProjectionBreakdown);
INVMET_ERROR(Unreachable);
INVMET_ERROR(InsufficientPoints);
INVMET_ERROR(ConfigError);

#undef INVMET_ERROR

// ---------------------------------------------------------------------------
// Small real linear algebra (everything here is 2x2; closed forms throughout)

struct Vec2 {
    double x = 0.0, y = 0.0;

    Vec2() = default;
    Vec2(double x_, double y_) : x(x_), y(y_) {}
    explicit Vec2(Complex z) : x(z.real()), y(z.imag()) {}

    Complex to_complex() const { return {x, y}; }
    double dot(Vec2 o) const { return x * o.x + y * o.y; }
    double norm() const { return std::hypot(x, y); }
    Vec2 perp() const { return {-y, x}; }
};

inline Vec2 operator+(Vec2 a, Vec2 b) { return {a.x + b.x, a.y + b.y}; }
inline Vec2 operator-(Vec2 a, Vec2 b) { return {a.x - b.x, a.y - b.y}; }
inline Vec2 operator*(double s, Vec2 v) { return {s * v.x, s * v.y}; }

// General 2x2 real matrix, rows (a11 a12; a21 a22).
struct Mat2 {
    double a11 = 1.0, a12 = 0.0, a21 = 0.0, a22 = 1.0;

    static Mat2 identity() { return {}; }

    Vec2 apply(Vec2 v) const { return {a11 * v.x + a12 * v.y, a21 * v.x + a22 * v.y}; }
    double det() const { return a11 * a22 - a12 * a21; }
    Mat2 transpose() const { return {a11, a21, a12, a22}; }
};

inline Mat2 operator*(const Mat2& a, const Mat2& b) {
    return {a.a11 * b.a11 + a.a12 * b.a21, a.a11 * b.a12 + a.a12 * b.a22,
            a.a21 * b.a11 + a.a22 * b.a21, a.a21 * b.a12 + a.a22 * b.a22};
}

// Symmetric 2x2 matrix (xx xy; xy yy).  Used for metric tensors.
struct Sym2 {
    double xx = 1.0, xy = 0.0, yy = 1.0;

    static Sym2 identity() { return {1.0, 0.0, 1.0}; }
    static Sym2 scale(double s) { return {s, 0.0, s}; }

    double det() const { return xx * yy - xy * xy; }
    double trace() const { return xx + yy; }

    // (min, max); real for symmetric matrices.
    std::pair<double, double> eigenvalues() const {
        const double m = 0.5 * trace();
        const double d = std::sqrt(std::max(0.0, m * m - det()));
        return {m - d, m + d};
    }

    bool spd(double tol = 0.0) const { return eigenvalues().first > tol; }

    double quad(Vec2 v) const { return xx * v.x * v.x + 2.0 * xy * v.x * v.y + yy * v.y * v.y; }
    double bilinear(Vec2 u, Vec2 v) const {
        return xx * u.x * v.x + xy * (u.x * v.y + u.y * v.x) + yy * u.y * v.y;
    }

    Vec2 apply(Vec2 v) const { return {xx * v.x + xy * v.y, xy * v.x + yy * v.y}; }

    Sym2 inverse() const {
        const double d = det();
        if (d == 0.0) throw NumericalBreakdown("Sym2::inverse: singular matrix");
        return {yy / d, -xy / d, xx / d};
    }

    double frobenius() const { return std::sqrt(xx * xx + 2.0 * xy * xy + yy * yy); }
};

inline Sym2 operator+(Sym2 a, Sym2 b) { return {a.xx + b.xx, a.xy + b.xy, a.yy + b.yy}; }
inline Sym2 operator-(Sym2 a, Sym2 b) { return {a.xx - b.xx, a.xy - b.xy, a.yy - b.yy}; }
inline Sym2 operator*(double s, Sym2 a) { return {s * a.xx, s * a.xy, s * a.yy}; }

// J^T G J; SPD is preserved by congruence with invertible J.
inline Sym2 congruence(const Mat2& j, const Sym2& g) {
    const Vec2 c1{j.a11, j.a21};
    const Vec2 c2{j.a12, j.a22};
    return {g.quad(c1), g.bilinear(c1, c2), g.quad(c2)};
}

// Clamps eigenvalues from below, keeping eigenvectors.
inline Sym2 floor_eigenvalues(Sym2 g, double floor) {
    auto [lo, hi] = g.eigenvalues();
    if (lo >= floor) return g;
    // Rank-one correction along the eigenvector of the low eigenvalue.
    const double shift = floor - lo;
    Vec2 v{g.xy, lo - g.xx};
    if (v.norm() < 1e-300) v = {lo - g.yy, g.xy};
    if (v.norm() < 1e-300) v = {1.0, 0.0};
    const double n = v.norm();
    v = {v.x / n, v.y / n};
    return {g.xx + shift * v.x * v.x, g.xy + shift * v.x * v.y, g.yy + shift * v.y * v.y};
}

// ---------------------------------------------------------------------------
// Circles; every boundary in this toolkit is a finite union of circles.

struct Circle {
    Complex center;
    double radius = 1.0;

    // Signed distance to the circle line: negative inside.
    double signed_distance(Complex z) const { return std::abs(z - center) - radius; }
    Complex point(double theta) const { return center + std::polar(radius, theta); }
};

// ---------------------------------------------------------------------------
// Deterministic pairwise (tree) summation; layout fixed by index order so the
// result is independent of evaluation parallelism.

template <typename T>
T pairwise_sum(std::span<const T> terms) {
    if (terms.empty()) throw InvalidInput("pairwise_sum: empty range");
    if (terms.size() == 1) return terms[0];
    const size_t half = terms.size() / 2;
    return pairwise_sum(terms.subspan(0, half)) + pairwise_sum(terms.subspan(half));
}

template <typename T>
T pairwise_sum(const std::vector<T>& terms) {
    return pairwise_sum(std::span<const T>(terms));
}

}  // namespace invmet
