#include <doctest.h>

#include <random>

#include "invmet/kernel.hpp"

using namespace invmet;

namespace {

Automorphism paper_map() { return Automorphism::moebius(1.0, 0.5, 0.5, 1.0); }

// Disc automorphism (z - a)/(1 - conj(a) z) followed by a rotation.
Automorphism disc_aut(Complex a, double theta) {
    return Automorphism::composite({Automorphism::moebius(1.0, -a, -std::conj(a), 1.0),
                                    Automorphism::rotation(theta)});
}

LeviInput ball_input(int dim) {
    LeviInput in;
    in.dim = dim;
    in.rho = [](std::span<const Complex> w) {
        double s = -1.0;
        for (const Complex c : w) s += std::norm(c);
        return s;
    };
    in.d_rho = [](std::span<const Complex> w, int j) { return std::conj(w[j]); };
    in.d2_rho = [](std::span<const Complex>, int, int) { return Complex{0.0}; };
    return in;
}

}  // namespace

TEST_SUITE("kernel") {
    TEST_CASE("disc closed form against an independent Riemann sum") {
        // K(0,0) = 1/||1||^2 = 1/area(D); crude quadrature suffices as oracle.
        const int n = 2001;
        double area = 0.0;
        const double h = 2.0 / (n - 1);
        for (int i = 0; i < n; ++i)
            for (int j = 0; j < n; ++j) {
                const Complex z{-1.0 + i * h, -1.0 + j * h};
                if (std::norm(z) < 1.0) area += h * h;
            }
        const auto k = KernelModel::disc_closed();
        CHECK(k(Complex{0, 0}, Complex{0, 0}).real() == doctest::Approx(1.0 / area).epsilon(1e-3));
        CHECK(k(Complex{0, 0}, Complex{0, 0}).real() == doctest::Approx(1.0 / kPi).epsilon(1e-12));
    }

    TEST_CASE("closed forms match the numeric Gram oracle") {
        std::mt19937_64 rng(7);
        std::uniform_real_distribution<double> ang(0.0, 2.0 * kPi);
        SUBCASE("disc") {
            const auto closed = KernelModel::disc_closed();
            KernelNumericOptions opts;
            opts.poly_degree = 60;
            const auto oracle =
                KernelModel::numeric_basis(PlanarDomain::disc({0.0, 0.0}, 1.0), opts);
            CHECK(oracle.basis_size() >= 25);
            std::uniform_real_distribution<double> rad(0.0, 0.8);
            for (int i = 0; i < 20; ++i) {
                const Complex z = std::polar(rad(rng), ang(rng));
                const Complex w = std::polar(rad(rng), ang(rng));
                const Complex a = closed(z, w), b = oracle(z, w);
                CHECK(std::abs(a - b) / std::abs(a) < 1e-6);
            }
        }
        SUBCASE("annulus") {
            const auto series = KernelModel::annulus_series(1.0, 2.0, 120);
            KernelNumericOptions opts;
            opts.poly_degree = 120;
            opts.pole_degree = 60;
            opts.radial_nodes = 128;
            const auto oracle = KernelModel::numeric_basis(PlanarDomain::annulus(1.0, 2.0), opts);
            std::uniform_real_distribution<double> rad(1.2, 1.8);
            for (int i = 0; i < 20; ++i) {
                const Complex z = std::polar(rad(rng), ang(rng));
                const Complex w = std::polar(rad(rng), ang(rng));
                const Complex a = series(z, w), b = oracle(z, w);
                // The annulus kernel has zeros, so errors are measured against
                // sqrt(K(z,z) K(w,w)) >= |K(z,w)| rather than the raw ratio.
                const double scale = std::sqrt(series.diagonal(z) * series.diagonal(w));
                CHECK(std::abs(a - b) / scale < 1e-6);
            }
        }
    }

    TEST_CASE("hermitian symmetry and diagonal positivity") {
        std::mt19937_64 rng(11);
        std::uniform_real_distribution<double> rad(1.1, 1.9), ang(0.0, 2.0 * kPi);
        const auto series = KernelModel::annulus_series(1.0, 2.0, 80);
        KernelNumericOptions opts;
        opts.poly_degree = 40;
        opts.pole_degree = 24;
        const auto oracle = KernelModel::numeric_basis(PlanarDomain::annulus(1.0, 2.0), opts);
        for (int i = 0; i < 25; ++i) {
            const Complex z = std::polar(rad(rng), ang(rng));
            const Complex w = std::polar(rad(rng), ang(rng));
            CHECK(std::abs(series(z, w) - std::conj(series(w, z))) < 1e-10);
            CHECK(std::abs(oracle(z, w) - std::conj(oracle(w, z))) <
                  1e-10 * std::abs(oracle(z, w)) + 1e-12);
            CHECK(series.diagonal(z) > 0.0);
            CHECK(oracle.diagonal(z) > 0.0);
        }
    }

    TEST_CASE("truncation warnings") {
        const auto coarse = KernelModel::annulus_series(1.0, 2.0, 10);
        const auto near = coarse.eval_checked({1.95, 0.0}, {1.95, 0.0});
        CHECK(near.truncation_warning);
        const auto fine = KernelModel::annulus_series(1.0, 2.0, 150);
        const auto mid = fine.eval_checked({1.5, 0.0}, {1.5, 0.0});
        CHECK_FALSE(mid.truncation_warning);
        CHECK(mid.tail_relative < 1e-12);
    }

    TEST_CASE("ball kernel in higher dimension") {
        const auto ball2 = KernelModel::ball_closed(2);
        const Complex origin[2] = {{0, 0}, {0, 0}};
        CHECK(ball2.eval(std::span<const Complex>(origin, 2), std::span<const Complex>(origin, 2))
                  .real() == doctest::Approx(2.0 / (kPi * kPi)));
        const Complex one[1] = {{0, 0}};
        CHECK_THROWS_AS(
            (void)ball2.eval(std::span<const Complex>(one, 1), std::span<const Complex>(one, 1)),
            InvalidInput);
        // n = 1 reduces to the disc kernel.
        const auto ball1 = KernelModel::ball_closed(1);
        const auto disc = KernelModel::disc_closed();
        CHECK(std::abs(ball1(Complex{0.3, 0.1}, Complex{0.2, -0.4}) -
                       disc(Complex{0.3, 0.1}, Complex{0.2, -0.4})) < 1e-14);
    }

    TEST_CASE("transformation law") {
        const auto disc = KernelModel::disc_closed();
        std::mt19937_64 rng(23);
        std::uniform_real_distribution<double> rad(0.0, 0.7), ang(0.0, 2.0 * kPi);
        SUBCASE("identity map gives zero residual") {
            std::vector<std::pair<Complex, Complex>> pairs{{{0.3, 0.1}, {0.0, -0.4}}};
            CHECK(transformation_residual(disc, disc, Automorphism::identity(), pairs) == 0.0);
        }
        SUBCASE("random disc automorphisms") {
            for (int m = 0; m < 10; ++m) {
                const auto phi = disc_aut(std::polar(rad(rng), ang(rng)), ang(rng));
                std::vector<std::pair<Complex, Complex>> pairs;
                for (int i = 0; i < 10; ++i)
                    pairs.emplace_back(std::polar(rad(rng), ang(rng)),
                                       std::polar(rad(rng), ang(rng)));
                CHECK(transformation_residual(disc, disc, phi, pairs) < 1e-10);
            }
        }
        SUBCASE("annulus series to the Moebius-image oracle") {
            const auto series = KernelModel::annulus_series(0.25, 1.0, 120);
            const auto image =
                PlanarDomain::moebius_image(PlanarDomain::annulus(0.25, 1.0), paper_map());
            KernelNumericOptions opts;
            opts.poly_degree = 64;
            opts.pole_degree = 32;
            const auto oracle = KernelModel::numeric_basis(image, opts);
            // Base points whose images keep a 0.2 margin in the image domain,
            // away from kernel zeros so the residual's denominator is sane.
            std::vector<Complex> pool;
            for (int i = 0; i < 40 && pool.size() < 24; ++i)
                for (int k = 0; k < 16 && pool.size() < 24; ++k) {
                    const Complex zeta = std::polar(0.3 + 0.015 * i, 2.0 * kPi * k / 16.0);
                    if (image.interior(paper_map().apply(zeta)) &&
                        image.boundary_distance(paper_map().apply(zeta)) >= 0.2)
                        pool.push_back(zeta);
                }
            REQUIRE(pool.size() >= 8);
            std::vector<std::pair<Complex, Complex>> pairs;
            std::uniform_int_distribution<size_t> pick(0, pool.size() - 1);
            while (pairs.size() < 20) {
                const Complex z = pool[pick(rng)], w = pool[pick(rng)];
                const Complex k1 = series(z, w);
                const double scale = std::sqrt(series.diagonal(z) * series.diagonal(w));
                if (std::abs(k1) > 0.05 * scale) pairs.emplace_back(z, w);
            }
            CHECK(transformation_residual(series, oracle, paper_map(), pairs) < 1e-5);
        }
    }

    TEST_CASE("step-5 style lower bound near a boundary point (disc, brute force)") {
        const auto k = KernelModel::disc_closed();
        double min_abs = 1e300;
        const int n = 14;
        std::vector<Complex> pts;
        for (int i = 0; i < n; ++i)
            for (int j = 0; j < n; ++j) {
                const Complex z{1.0 - 0.1 * (i + 0.5) / n, -0.05 + 0.1 * (j + 0.5) / n};
                if (std::norm(z) < 1.0 && std::abs(z - Complex{1.0, 0.0}) < 0.1) pts.push_back(z);
            }
        for (const Complex z : pts)
            for (const Complex w : pts)
                if (std::abs(z - w) < 0.1) min_abs = std::min(min_abs, std::abs(k(z, w)));
        CHECK(min_abs >= 1.0 / (4.0 * kPi));
    }
}

TEST_SUITE("bergman_metric") {
    TEST_CASE("disc conformal factor") {
        const auto model = KernelModel::disc_closed();
        const auto dom = PlanarDomain::disc({0.0, 0.0}, 1.0);
        const auto field = bergman_metric_field(model, dom);
        CHECK(field({0.0, 0.0}).xx == doctest::Approx(2.0));
        // B(z) (1 - |z|^2)^2 = 2 everywhere.
        for (const Complex z : {Complex{0.3, 0.1}, Complex{-0.5, 0.4}, Complex{0.0, 0.8}}) {
            const double b = field(z).xx;
            CHECK(b * (1.0 - std::norm(z)) * (1.0 - std::norm(z)) == doctest::Approx(2.0));
        }
        // Central-difference confirmation of B = d^2 log K / dz dzbar.
        const Complex z{0.3, 0.2};
        const double h = 1e-4;
        auto lk = [&](Complex p) { return std::log(model.diagonal(p)); };
        const double lap = (lk(z + h) + lk(z - h) + lk(z + Complex{0, h}) + lk(z - Complex{0, h}) -
                            4.0 * lk(z)) /
                           (h * h);
        CHECK(field(z).xx == doctest::Approx(lap / 4.0).epsilon(1e-6));
    }

    TEST_CASE("annulus factor is rotation invariant and positive") {
        const auto model = KernelModel::annulus_series(1.0, 2.0, 80);
        const auto dom = PlanarDomain::annulus(1.0, 2.0);
        const auto field = bergman_metric_field(model, dom);
        const double b0 = field({std::sqrt(2.0), 0.0}).xx;
        CHECK(b0 > 0.0);
        for (const double theta : {0.4, 1.7, 3.0})
            CHECK(field(std::polar(std::sqrt(2.0), theta)).xx == doctest::Approx(b0));
        // Matches the numeric oracle's factor away from the boundary.
        KernelNumericOptions opts;
        opts.poly_degree = 60;
        opts.pole_degree = 40;
        const auto oracle = KernelModel::numeric_basis(dom, opts);
        CHECK(oracle.log_diagonal_laplacian({1.5, 0.0}) ==
              doctest::Approx(model.log_diagonal_laplacian({1.5, 0.0})).epsilon(1e-5));
    }

    TEST_CASE("higher-dimensional ball field is rejected") {
        CHECK_THROWS_AS((void)bergman_metric_field(KernelModel::ball_closed(2),
                                                   PlanarDomain::disc({0.0, 0.0}, 1.0)),
                        InvalidInput);
    }
}

TEST_SUITE("representative_coords") {
    TEST_CASE("disc values") {
        const auto model = KernelModel::disc_closed();
        const double step = 2e-5;
        CHECK(std::abs(representative_coords(model, {0.0, 0.0}, {0.0, 0.0}, step)) < 1e-9);
        // b_0(z) = 2z.
        CHECK(std::abs(representative_coords(model, {0.0, 0.0}, {0.3, 0.0}, step) -
                       Complex{0.6, 0.0}) < 1e-8);
        // b_p(p) = 0 away from the origin too.
        CHECK(std::abs(representative_coords(model, {0.4, 0.2}, {0.4, 0.2}, step)) < 1e-8);
        // Rotations fixing 0 act complex-linearly: b_0(e^{it} z) = e^{it} b_0(z).
        const Complex z{0.25, 0.15};
        const Complex b = representative_coords(model, {0.0, 0.0}, z, step);
        for (const double t : {0.7, 2.1}) {
            const Complex rotated =
                representative_coords(model, {0.0, 0.0}, std::polar(1.0, t) * z, step);
            CHECK(std::abs(rotated - std::polar(1.0, t) * b) < 1e-7);
        }
    }

    TEST_CASE("automorphisms are complex-linear in b-coordinates") {
        const auto model = KernelModel::disc_closed();
        std::mt19937_64 rng(31);
        std::uniform_real_distribution<double> rad(0.0, 0.5), ang(0.0, 2.0 * kPi);
        const double step = 2e-5;
        for (int trial = 0; trial < 3; ++trial) {
            const Complex p = std::polar(rad(rng), ang(rng));
            const auto phi = disc_aut(std::polar(rad(rng), ang(rng)), ang(rng));
            const Complex q = phi.apply(p);
            Complex num{0.0}, den{0.0};
            std::vector<std::pair<Complex, Complex>> uv;
            for (int i = 0; i < 50; ++i) {
                const Complex z = p + std::polar(0.02 + 0.08 * rad(rng), ang(rng));
                const Complex u = representative_coords(model, p, z, step);
                const Complex v = representative_coords(model, q, phi.apply(z), step);
                num += std::conj(u) * v;
                den += std::conj(u) * u;
                uv.emplace_back(u, v);
            }
            const Complex lambda = num / den;
            double res2 = 0.0, norm2 = 0.0;
            for (const auto& [u, v] : uv) {
                res2 += std::norm(v - lambda * u);
                norm2 += std::norm(v);
            }
            CHECK(std::sqrt(res2 / norm2) < 1e-3);
        }
    }

    TEST_CASE("kernel zero is reported") {
        // The annulus kernel has zeros; bracket one on the real section.
        const auto model = KernelModel::annulus_series(1.0, 2.0, 150);
        const Complex w{1.3, 0.0};
        auto f = [&](double t) { return model(Complex{-t, 0.0}, w).real(); };
        double t_zero = 0.0;
        double flo = f(1.01);
        for (double t = 1.02; t <= 1.99; t += 0.01) {
            const double ft = f(t);
            if (flo * ft < 0.0) {
                double a = t - 0.01, b = t;
                for (int it = 0; it < 200; ++it) {
                    const double m = 0.5 * (a + b);
                    (f(a) * f(m) <= 0.0 ? b : a) = m;
                }
                t_zero = 0.5 * (a + b);
                break;
            }
            flo = ft;
        }
        REQUIRE(t_zero > 0.0);
        CHECK_THROWS_AS((void)representative_coords(model, w, Complex{-t_zero, 0.0}, 1e-5),
                        KernelZero);
    }
}

TEST_SUITE("levi_polynomial") {
    TEST_CASE("z = w collapses to rho(w)") {
        auto in = ball_input(2);
        in.z = {{0.3, 0.1}, {0.2, -0.2}};
        in.w = in.z;
        const double rho = -1.0 + std::norm(in.w[0]) + std::norm(in.w[1]);
        CHECK(std::abs(levi_polynomial(in) - Complex{rho, 0.0}) < 1e-15);
    }

    TEST_CASE("ball: X(z, w) = <z, w> - 1") {
        auto in = ball_input(3);
        in.z = {{0.0, 0.0}, {0.0, 0.0}, {0.0, 0.0}};
        in.w = {{1.0, 0.0}, {0.0, 0.0}, {0.0, 0.0}};
        CHECK(std::abs(levi_polynomial(in) - Complex{-1.0, 0.0}) < 1e-15);
        // z = w on the boundary gives 0.
        in.z = in.w;
        CHECK(std::abs(levi_polynomial(in)) < 1e-15);
    }

    TEST_CASE("dimension mismatch") {
        auto in = ball_input(2);
        in.z = {{0.1, 0.0}};
        in.w = {{0.2, 0.0}, {0.0, 0.0}};
        CHECK_THROWS_AS((void)levi_polynomial(in), InvalidInput);
    }
}

TEST_SUITE("derivative_bound_probe") {
    TEST_CASE("rotations have unit first derivative and vanishing higher ones") {
        const auto ann = PlanarDomain::annulus(1.0, 2.0);
        const auto rot = CompactGroup::circle(ann);
        const std::vector<Complex> samples{{1.5, 0.0}, {0.0, 1.2}, {-1.8, 0.1}};
        for (const int order : {1, 2, 3, 4})
            CHECK(derivative_bound_probe(rot, order, samples) == doctest::Approx(1.0));
        const auto trivial = CompactGroup::finite({Automorphism::identity()}, ann);
        CHECK(derivative_bound_probe(trivial, 1, samples) == doctest::Approx(1.0));
        CHECK_THROWS_AS((void)derivative_bound_probe(rot, 5, samples), InvalidInput);
    }

    TEST_CASE("conjugated annulus group: finite and stable under refinement") {
        const auto base = CompactGroup::circle_with_inversion(PlanarDomain::annulus(0.25, 1.0),
                                                              Automorphism::inversion(0.25));
        const auto conj = base.conjugated(paper_map());
        auto samples_at = [&](int per_circle) {
            std::vector<Complex> s;
            for (const auto& comp : conj.domain().components())
                for (int k = 0; k < per_circle; ++k)
                    s.push_back(comp.circle.point(2.0 * kPi * k / per_circle));
            for (int k = 1; k < 8; ++k)
                s.push_back(paper_map().apply(std::polar(0.3 + 0.08 * k, 0.9 * k)));
            return s;
        };
        const double coarse = derivative_bound_probe(conj, 2, samples_at(8192), 512);
        const double fine = derivative_bound_probe(conj, 2, samples_at(16384), 512);
        CHECK(std::isfinite(coarse));
        CHECK(std::abs(fine - coarse) < 1e-6);
    }
}
