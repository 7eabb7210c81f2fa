#include <doctest.h>

#include "invmet/group.hpp"

using namespace invmet;

namespace {

Automorphism phi_j(int j) {
    const double c = 1.0 - 1.0 / j;
    return Automorphism::moebius(1.0, c, c, 1.0);
}

Automorphism paper_map() { return Automorphism::moebius(1.0, 0.5, 0.5, 1.0); }

std::vector<Automorphism> four_rotations() {
    return {Automorphism::rotation(0.0), Automorphism::rotation(kPi / 2.0),
            Automorphism::rotation(kPi), Automorphism::rotation(3.0 * kPi / 2.0)};
}

PlanarDomain four_holed_disc() {
    return PlanarDomain::disc_minus_discs({{0.0, 0.0}, 1.0}, {{{0.5, 0.0}, 0.1},
                                                              {{-0.5, 0.0}, 0.1},
                                                              {{0.0, 0.5}, 0.1},
                                                              {{0.0, -0.5}, 0.1}});
}

PlanarDomain rigid_three_holed_disc() {
    return PlanarDomain::disc_minus_discs({{0.0, 0.0}, 1.0}, {{{0.5, 0.0}, 0.1},
                                                              {{0.0, 0.5}, 0.05},
                                                              {{-0.5, 0.0}, 1.0 / 30.0}});
}

}  // namespace

TEST_SUITE("automorphism") {
    TEST_CASE("apply") {
        CHECK(phi_j(10).apply({0.0, 0.0}) == Complex{0.9, 0.0});  // exact: b/d
        const Complex r = Automorphism::rotation(kPi / 2.0).apply({1.0, 0.0});
        CHECK(std::abs(r - Complex{0.0, 1.0}) < 1e-15);
        CHECK(std::abs(Automorphism::inversion(2.0).apply({1.0, 0.0}) - Complex{2.0, 0.0}) <
              1e-15);
    }

    TEST_CASE("derivatives") {
        CHECK(std::abs(Automorphism::rotation(0.7).derivative({0.3, 0.2}) -
                       std::polar(1.0, 0.7)) < 1e-15);
        CHECK(std::abs(Automorphism::inversion(2.0).derivative({1.0, 0.0}) - Complex{-2.0, 0.0}) <
              1e-15);
        CHECK(std::abs(Automorphism::identity().derivative({0.5, 0.1}) - Complex{1.0, 0.0}) <
              1e-15);

        // Higher orders against a central-difference oracle.
        const auto comp = Automorphism::composite({phi_j(3), Automorphism::rotation(0.4),
                                                   Automorphism::moebius(2.0, 0.1, 0.05, 1.0)});
        const Complex z{0.2, 0.1};
        const double h = 1e-5;
        const Complex d2_fd = (comp.derivative(z + h) - comp.derivative(z - h)) / (2.0 * h);
        CHECK(std::abs(comp.derivative_n(z, 2) - d2_fd) < 1e-6);
        CHECK(std::abs(comp.derivative_n(z, 1) - comp.derivative(z)) < 1e-12);
        CHECK(Automorphism::rotation(0.9).derivative_n({0.1, 0.0}, 2) == Complex{0.0, 0.0});
    }

    TEST_CASE("inverse and coefficients") {
        const auto a = Automorphism::composite(
            {Automorphism::inversion(2.0), Automorphism::rotation(1.1)});
        const auto id = Automorphism::composite({a, a.inverse()});
        CHECK(id.is_identity(1e-12));
        for (const Complex z : {Complex{1.3, 0.2}, Complex{-1.1, 0.9}})
            CHECK(std::abs(id.apply(z) - z) < 1e-12);
    }

    TEST_CASE("self-map residual gates") {
        const auto ann = PlanarDomain::annulus(1.0, 2.0);
        CHECK(self_map_residual(Automorphism::rotation(0.3), ann, 64) < 1e-14);
        CHECK(self_map_residual(Automorphism::inversion(2.0), ann, 64) < 1e-14);
        // Rotating an asymmetric hole configuration misses the original.
        CHECK(self_map_residual(Automorphism::rotation(0.1), four_holed_disc(), 64) > 1e-3);
        CHECK_THROWS_AS((void)self_map_residual(Automorphism::rotation(0.1), ann, 8),
                        InvalidInput);
    }
}

TEST_SUITE("group") {
    TEST_CASE("haar nodes and weights") {
        const auto g4 = CompactGroup::finite(four_rotations(), four_holed_disc());
        const auto nodes4 = g4.haar_nodes(99);  // n ignored for finite groups
        REQUIRE(nodes4.size() == 4);
        for (const auto& n : nodes4) CHECK(n.weight == doctest::Approx(0.25));

        const auto circ = CompactGroup::circle(PlanarDomain::annulus(1.0, 2.0));
        const auto nodes8 = circ.haar_nodes(8);
        REQUIRE(nodes8.size() == 8);
        for (size_t k = 0; k < 8; ++k) {
            CHECK(nodes8[k].weight == doctest::Approx(1.0 / 8.0));
            const Complex img = nodes8[k].aut.apply({1.5, 0.0});
            CHECK(std::abs(img - 1.5 * std::polar(1.0, 2.0 * kPi * k / 8.0)) < 1e-14);
        }

        const auto full = CompactGroup::circle_with_inversion(PlanarDomain::annulus(1.0, 2.0),
                                                              Automorphism::inversion(2.0));
        const auto nodes32 = full.haar_nodes(16);
        REQUIRE(nodes32.size() == 32);
        double wsum = 0.0;
        for (const auto& n : nodes32) {
            CHECK(n.weight == doctest::Approx(1.0 / 32.0));
            wsum += n.weight;
        }
        CHECK(wsum == doctest::Approx(1.0));
    }

    TEST_CASE("finite groups must be closed") {
        // {id, R_pi/2} is not closed: the square R_pi is missing.
        CHECK_THROWS_AS((void)CompactGroup::finite(
                            {Automorphism::rotation(0.0), Automorphism::rotation(kPi / 2.0)},
                            four_holed_disc()),
                        InvalidGroup);
    }

    TEST_CASE("rigid domain admits only the identity") {
        const auto dom = rigid_three_holed_disc();
        CHECK_NOTHROW((void)CompactGroup::finite({Automorphism::identity()}, dom));
        CHECK_THROWS_AS((void)CompactGroup::finite(
                            {Automorphism::rotation(0.0), Automorphism::rotation(kPi)}, dom),
                        InvalidGroup);
    }

    TEST_CASE("registration rejects a pole in the closure") {
        CHECK_THROWS_AS((void)CompactGroup::circle_with_inversion(
                            PlanarDomain::disc({0.0, 0.0}, 1.0), Automorphism::inversion(1.0)),
                        InvalidAutomorphism);
    }

    TEST_CASE("conjugation") {
        const auto base = CompactGroup::circle(PlanarDomain::annulus(0.25, 1.0));
        SUBCASE("by the identity keeps the action") {
            const auto same = base.conjugated(Automorphism::moebius(1.0, 0.0, 0.0, 1.0));
            const auto n0 = base.haar_nodes(8);
            const auto n1 = same.haar_nodes(8);
            for (size_t k = 0; k < n0.size(); ++k)
                CHECK(std::abs(n0[k].aut.apply({0.5, 0.1}) - n1[k].aut.apply({0.5, 0.1})) < 1e-12);
        }
        SUBCASE("the paper map carries rotations to the image domain") {
            const auto conj = base.conjugated(paper_map());
            CHECK(conj.domain().kind() == PlanarDomain::Kind::MoebiusImage);
            CHECK(conj.registration_residual() < 1e-9);
            // Conjugate of a fixed point: phi.a.phi^-1 (phi(p)) = phi(a(p)).
            const Complex p{0.5, 0.2};
            const auto base_nodes = base.haar_nodes(8);
            const auto conj_nodes = conj.haar_nodes(8);
            for (size_t k = 0; k < base_nodes.size(); ++k) {
                const Complex lhs = conj_nodes[k].aut.apply(paper_map().apply(p));
                const Complex rhs = paper_map().apply(base_nodes[k].aut.apply(p));
                CHECK(std::abs(lhs - rhs) < 1e-12);
            }
        }
    }

    TEST_CASE("noncompactness witness: phi_j pushes 0 to the boundary") {
        const auto disc = PlanarDomain::disc({0.0, 0.0}, 1.0);
        for (const int j : {2, 10, 100}) {
            const Complex img = phi_j(j).apply({0.0, 0.0});
            CHECK(img == Complex{1.0 - 1.0 / j, 0.0});  // exact
            CHECK(disc.boundary_distance(img) == doctest::Approx(1.0 / j).epsilon(1e-14));
        }
    }
}
