#include <doctest.h>

#include "invmet/metric.hpp"
#include "invmet/runner.hpp"

using namespace invmet;

namespace {

Automorphism paper_map() { return Automorphism::moebius(1.0, 0.5, 0.5, 1.0); }

double frob_diff(const Sym2& a, const Sym2& b) { return (a - b).frobenius(); }

}  // namespace

TEST_SUITE("metric_field") {
    TEST_CASE("eval basics") {
        const auto disc = PlanarDomain::disc({0.0, 0.0}, 1.0);
        const auto euclid = MetricField::euclidean(disc);
        CHECK(frob_diff(euclid({0.3, 0.4}), Sym2::identity()) == 0.0);

        const auto poincare = MetricField::poincare_disc(disc);
        CHECK(frob_diff(poincare({0.0, 0.0}), Sym2::identity()) < 1e-15);
        const Sym2 g = poincare({0.5, 0.0});
        CHECK(g.xx == doctest::Approx(16.0 / 9.0));
        CHECK(g.yy == doctest::Approx(16.0 / 9.0));
        CHECK(g.xy == doctest::Approx(0.0));

        CHECK_THROWS_AS((void)poincare({2.0, 0.0}), OutsideDomain);
    }

    TEST_CASE("pullback") {
        const auto ann = PlanarDomain::annulus(1.0, 2.0);
        const auto euclid = MetricField::euclidean(ann);
        SUBCASE("identity and rotations act trivially on the euclidean field") {
            CHECK(frob_diff(pullback(euclid, Automorphism::identity(), {1.5, 0.0}),
                            Sym2::identity()) < 1e-15);
            CHECK(frob_diff(pullback(euclid, Automorphism::rotation(0.8), {1.5, 0.0}),
                            Sym2::identity()) < 1e-15);
        }
        SUBCASE("inversion scales by |a'|^2") {
            const Sym2 p = pullback(euclid, Automorphism::inversion(2.0), {1.0, 0.0});
            CHECK(frob_diff(p, Sym2::scale(4.0)) < 1e-12);
        }
    }

    TEST_CASE("average over a finite group") {
        // Annulus small enough that the base stays SPD on the closure.
        const auto ann = PlanarDomain::annulus(0.25, 0.75);
        const auto grp =
            CompactGroup::finite({Automorphism::rotation(0.0), Automorphism::rotation(kPi)}, ann);
        // Base diag(1 + Re z, 1): terms diag(1.5, 1) and diag(0.5, 1) at 0.5.
        MetricField base(ann, Provenance::Custom,
                         [](Complex z) {
                             return Sym2{1.0 + z.real(), 0.0, 1.0};
                         },
                         true);
        const auto avg = average(grp, base, 1);
        const Sym2 g = avg({0.5, 0.0});
        CHECK(g.xx == doctest::Approx(1.0));
        CHECK(g.xy == doctest::Approx(0.0));
        CHECK(g.yy == doctest::Approx(1.0));
    }

    TEST_CASE("averaging the euclidean metric over rotations is exact") {
        const auto ann = PlanarDomain::annulus(1.0, 2.0);
        const auto grp = CompactGroup::circle(ann);
        const auto avg = average(grp, MetricField::euclidean(ann), 16);
        for (const Complex z : {Complex{1.2, 0.3}, Complex{-1.7, 0.2}, Complex{0.0, 1.5}})
            CHECK(frob_diff(avg(z), Sym2::identity()) < 1e-15);
    }

    TEST_CASE("trivial group leaves the base unchanged") {
        const auto disc = PlanarDomain::disc({0.0, 0.0}, 1.0);
        const auto grp = CompactGroup::finite({Automorphism::identity()}, disc);
        const auto base = MetricField::poincare_disc(disc);
        const auto avg = average(grp, base, 1);
        for (const Complex z : {Complex{0.3, 0.1}, Complex{-0.2, 0.6}})
            CHECK(frob_diff(avg(z), base(z)) < 1e-15);
    }

    TEST_CASE("invariance residual") {
        const auto ann = PlanarDomain::annulus(1.0, 2.0);
        const auto rot = CompactGroup::circle(ann);
        const auto euclid = MetricField::euclidean(ann);
        const auto samples = invariance_samples(ann, 50, 0.1);
        CHECK(invariance_residual(euclid, rot, samples, 16) < 1e-14);

        // Euclidean is NOT invariant under the conjugated group on the image.
        const auto base_rot = CompactGroup::circle(PlanarDomain::annulus(0.25, 1.0));
        const auto conj = base_rot.conjugated(paper_map());
        const auto img_samples = invariance_samples(conj.domain(), 50, 0.15);
        const auto img_euclid = MetricField::euclidean(conj.domain());
        CHECK(invariance_residual(img_euclid, conj, img_samples, 16) > 1e-3);
    }

    TEST_CASE("averaging idempotence and exact invariance for finite groups") {
        const auto dom = PlanarDomain::disc_minus_discs({{0.0, 0.0}, 1.0}, {{{0.5, 0.0}, 0.1},
                                                                            {{-0.5, 0.0}, 0.1},
                                                                            {{0.0, 0.5}, 0.1},
                                                                            {{0.0, -0.5}, 0.1}});
        const auto grp = CompactGroup::finite({Automorphism::rotation(0.0),
                                               Automorphism::rotation(kPi / 2.0),
                                               Automorphism::rotation(kPi),
                                               Automorphism::rotation(3.0 * kPi / 2.0)},
                                              dom);
        // A deliberately lopsided but SPD base field.
        MetricField base(dom, Provenance::Custom,
                         [](Complex z) {
                             return Sym2{2.0 + z.real(), 0.3 * z.imag(), 1.5 - 0.4 * z.real()};
                         },
                         true);
        const auto avg1 = average(grp, base, 1);
        const auto avg2 = average(grp, avg1, 1);
        const auto samples = invariance_samples(dom, 200, 0.03);
        double worst = 0.0;
        for (const Complex z : samples) worst = std::max(worst, frob_diff(avg1(z), avg2(z)));
        CHECK(worst < 1e-12);
        CHECK(invariance_residual(avg1, grp, samples, 1) < 1e-12);
    }

    TEST_CASE("haar relabeling invariance") {
        // Left-composition with a fixed element permutes the finite node set;
        // the averaged field does not change beyond roundoff.
        const auto ann = PlanarDomain::annulus(1.0, 2.0);
        const auto grp = CompactGroup::finite({Automorphism::rotation(0.0),
                                               Automorphism::rotation(kPi / 2.0),
                                               Automorphism::rotation(kPi),
                                               Automorphism::rotation(3.0 * kPi / 2.0)},
                                              ann);
        MetricField base(ann, Provenance::Custom,
                         [](Complex z) {
                             return Sym2{1.0 + 0.2 * z.real(), 0.1 * z.imag(),
                                         1.0 - 0.1 * z.real()};
                         },
                         true);
        const auto avg = average(grp, base, 1);
        const auto nodes = grp.haar_nodes(1);
        const auto fixed = Automorphism::rotation(kPi / 2.0);
        for (const Complex z : {Complex{1.4, 0.2}, Complex{0.0, -1.6}}) {
            Sym2 relabeled{0.0, 0.0, 0.0};
            for (const auto& node : nodes) {
                const auto composed = Automorphism::composite({node.aut, fixed});
                relabeled = relabeled + node.weight * pullback(base, composed, z);
            }
            CHECK(frob_diff(relabeled, avg(z)) < 1e-12);
        }
    }

    TEST_CASE("quadrature convergence on the conjugated annulus") {
        const auto base_rot = CompactGroup::circle(PlanarDomain::annulus(0.25, 1.0));
        const auto conj = base_rot.conjugated(paper_map());
        const auto euclid = MetricField::euclidean(conj.domain());
        const auto samples = invariance_samples(conj.domain(), 60, 0.16);
        double prev = 0.0;
        std::vector<double> residuals;
        for (const int n : {16, 32, 64, 128}) {
            const auto avg = average(conj, euclid, n);
            residuals.push_back(invariance_residual(avg, conj, samples, 100));
        }
        // At least geometric until the machine floor takes over.
        for (size_t i = 1; i < residuals.size(); ++i)
            CHECK((residuals[i] < 0.5 * residuals[i - 1] || residuals[i] < 1e-12));
        CHECK(residuals.back() < 1e-8);
        (void)prev;
    }

    TEST_CASE("grid interpolation stays SPD") {
        const auto ann = PlanarDomain::annulus(1.0, 2.0);
        MetricField wavy(ann, Provenance::Custom,
                         [](Complex z) {
                             const double a = 1.0 + 0.4 * std::sin(3.0 * z.real());
                             return Sym2{a, 0.3 * std::cos(2.0 * z.imag()), 1.2 / a};
                         },
                         true);
        const auto interp = grid_interpolated(wavy, ann.bounding_grid(96, 96));
        // 1000 deterministic pseudo-random interior points.
        uint64_t state = 0x243f6a8885a308d3ull;
        auto next = [&state] {
            state = state * 6364136223846793005ull + 1442695040888963407ull;
            return (state >> 11) * (1.0 / 9007199254740992.0);
        };
        int checked = 0;
        while (checked < 1000) {
            const Complex z{4.2 * next() - 2.1, 4.2 * next() - 2.1};
            if (!ann.interior(z)) continue;
            ++checked;
            const Sym2 g = interp(z);
            CHECK(g.eigenvalues().first > 0.0);
            CHECK(frob_diff(g, wavy(z)) < 0.05 * wavy(z).frobenius());
        }
    }
}
