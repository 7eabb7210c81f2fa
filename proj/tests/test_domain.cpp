#include <doctest.h>

#include "invmet/automorphism.hpp"
#include "invmet/domain.hpp"

using namespace invmet;

namespace {

// The paper's map of the annulus 1/4 < |z| < 1 onto D(0,1) \ D(10/21, 4/21).
Automorphism paper_map() { return Automorphism::moebius(1.0, 0.5, 0.5, 1.0); }

}  // namespace

TEST_SUITE("domain") {
    TEST_CASE("defining function signs") {
        const auto ann = PlanarDomain::annulus(1.0, 2.0);
        CHECK(ann.rho({1.5, 0.0}) < 0.0);
        CHECK(ann.rho({0.5, 0.0}) > 0.0);
        CHECK(ann.rho({2.5, 0.0}) > 0.0);

        const auto disc = PlanarDomain::disc({0.0, 0.0}, 1.0);
        CHECK(disc.rho({1.0, 0.0}) == doctest::Approx(0.0));
        CHECK(disc.rho({0.0, 0.0}, DefiningForm::Quadratic) == doctest::Approx(-1.0));
    }

    TEST_CASE("gradients are analytic per component") {
        const auto disc = PlanarDomain::disc({0.0, 0.0}, 1.0);
        const Vec2 g = disc.grad_rho({0.5, 0.0});
        CHECK(g.x == doctest::Approx(1.0));
        CHECK(g.y == doctest::Approx(0.0));
        // Quadratic form |z|^2 - 1: gradient (2x, 2y).
        const Vec2 gq = disc.grad_rho({0.5, 0.0}, DefiningForm::Quadratic);
        CHECK(gq.x == doctest::Approx(1.0));
        CHECK(gq.y == doctest::Approx(0.0));

        const auto ann = PlanarDomain::annulus(1.0, 2.0);
        const Vec2 gi = ann.grad_rho({1.2, 0.0});
        CHECK(gi.x == doctest::Approx(-1.0));  // inner piece points toward smaller |z|

        // Equidistant between the two circles of the annulus.
        CHECK_THROWS_AS((void)ann.grad_rho({1.5, 0.0}), AmbiguousComponent);
        const Vec2 go = ann.grad_rho_component({1.5, 0.0}, 0);
        CHECK(go.x == doctest::Approx(1.0));
    }

    TEST_CASE("euclidean boundary distance") {
        const auto ann = PlanarDomain::annulus(1.0, 2.0);
        CHECK(ann.boundary_distance({1.5, 0.0}) == doctest::Approx(0.5));
        const auto disc = PlanarDomain::disc({0.0, 0.0}, 1.0);
        CHECK(disc.boundary_distance({0.0, 0.0}) == doctest::Approx(1.0));
        CHECK_THROWS_AS((void)disc.boundary_distance({2.0, 0.0}), OutsideDomain);
    }

    TEST_CASE("moebius image circles are exact") {
        const auto base = PlanarDomain::annulus(0.25, 1.0);
        const auto image = PlanarDomain::moebius_image(base, paper_map());
        REQUIRE(image.components().size() == 2);
        // Outer: the unit circle.  Inner: center 10/21, radius 4/21.
        const auto& outer = image.components()[0];
        const auto& hole = image.components()[1];
        CHECK(std::abs(outer.circle.center) < 1e-13);
        CHECK(outer.circle.radius == doctest::Approx(1.0).epsilon(1e-13));
        CHECK(outer.sign == 1);
        CHECK(std::abs(hole.circle.center - Complex{10.0 / 21.0, 0.0}) < 1e-13);
        CHECK(hole.circle.radius == doctest::Approx(4.0 / 21.0).epsilon(1e-13));
        CHECK(hole.sign == -1);

        // 64 pushed base boundary points land on the computed circles.
        for (int comp = 0; comp < 2; ++comp) {
            const Circle& src = base.components()[comp].circle;
            const Circle& dst = image.components()[comp].circle;
            for (int k = 0; k < 64; ++k) {
                const Complex w = paper_map().apply(src.point(2.0 * kPi * k / 64.0));
                CHECK(std::abs(std::abs(w - dst.center) - dst.radius) < 1e-12);
            }
        }

        // Interior point maps to a point at the right distance from the hole.
        const Complex inside = paper_map().apply({0.5, 0.0});
        CHECK(image.interior(inside));
        CHECK(image.boundary_distance(inside) ==
              doctest::Approx(std::min(1.0 - std::abs(inside),
                                       std::abs(inside - Complex{10.0 / 21.0, 0.0}) - 4.0 / 21.0)));
    }

    TEST_CASE("interior sampling honors margins") {
        const auto disc = PlanarDomain::disc({0.0, 0.0}, 1.0);
        GridSpec spec = disc.bounding_grid(16, 16);
        for (const Complex z : disc.sample_interior(spec, 0.0)) {
            CHECK(std::abs(z) < 1.0);
            CHECK(disc.rho(z) < 0.0);
            CHECK(disc.boundary_distance(z) > 0.0);
        }
        const GridSpec fine = disc.bounding_grid(64, 64);
        for (const Complex z : disc.sample_interior(fine, 0.9)) CHECK(std::abs(z) <= 0.1 + 1e-12);

        const auto ann = PlanarDomain::annulus(1.0, 2.0);
        const GridSpec aspec = ann.bounding_grid(128, 128);
        for (const Complex z : ann.sample_interior(aspec, 0.45)) {
            CHECK(std::abs(z) >= 1.45 - 1e-12);
            CHECK(std::abs(z) <= 1.55 + 1e-12);
            CHECK(ann.boundary_distance(z) >= 0.45);
        }
        CHECK_THROWS_AS((void)disc.sample_interior(spec, 10.0), EmptySample);
    }

    TEST_CASE("constructor validation") {
        CHECK_THROWS_AS((void)PlanarDomain::annulus(2.0, 1.0), InvalidDomain);
        CHECK_THROWS_AS((void)PlanarDomain::annulus(0.0, 1.0), InvalidDomain);
        // Overlapping holes.
        CHECK_THROWS_AS((void)PlanarDomain::disc_minus_discs(
                            {{0.0, 0.0}, 1.0}, {{{0.3, 0.0}, 0.2}, {{0.5, 0.0}, 0.2}}),
                        InvalidDomain);
        // Hole not inside the outer disc.
        CHECK_THROWS_AS(
            (void)PlanarDomain::disc_minus_discs({{0.0, 0.0}, 1.0}, {{{0.95, 0.0}, 0.2}}),
            InvalidDomain);
        // Map with a pole in the closure is not injective there.
        CHECK_THROWS_AS((void)PlanarDomain::moebius_image(PlanarDomain::disc({0.0, 0.0}, 1.0),
                                                          Automorphism::inversion(1.0)),
                        InvalidDomain);
    }

    TEST_CASE("inradius") {
        CHECK(PlanarDomain::disc({0.0, 0.0}, 1.0).inradius() == doctest::Approx(1.0));
        CHECK(PlanarDomain::annulus(1.0, 2.0).inradius() == doctest::Approx(0.5));
        const auto image = PlanarDomain::moebius_image(PlanarDomain::annulus(0.25, 1.0), paper_map());
        // Thickest point sits on the negative real axis between -1 and 6/21.
        CHECK(image.inradius() == doctest::Approx(0.5 * (1.0 + 6.0 / 21.0)).epsilon(0.02));
    }
}
