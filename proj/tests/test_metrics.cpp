#include <doctest.h>

#include <algorithm>
#include <cmath>

#include "coverplan/errors.hpp"
#include "coverplan/metrics.hpp"
#include "coverplan/rng.hpp"
#include "oracles.hpp"

using namespace coverplan;

namespace {

std::vector<FrontPoint> random_points(Rng& rng, int n, double cov_hi, double energy_hi) {
    std::vector<FrontPoint> out;
    for (int i = 0; i < n; ++i)
        out.push_back({rng.uniform(0.0, cov_hi), rng.uniform(0.0, energy_hi), ""});
    return out;
}

bool same_values(const std::vector<FrontPoint>& a, const std::vector<FrontPoint>& b) {
    if (a.size() != b.size()) return false;
    for (std::size_t i = 0; i < a.size(); ++i)
        if (a[i].coverage_score != b[i].coverage_score || a[i].energy != b[i].energy)
            return false;
    return true;
}

}  // namespace

TEST_SUITE("metrics") {

TEST_CASE("dominated duplicates and incomparable pairs") {
    const auto a = pareto_filter({{0.5, 10, ""}, {0.5, 12, ""}});
    REQUIRE(a.size() == 1);
    CHECK(a[0].energy == 10);

    const auto b = pareto_filter({{0.2, 20, ""}, {0.8, 5, ""}});
    CHECK(b.size() == 2);
    CHECK(b[0].coverage_score == 0.2);  // stable order by coverage
}

TEST_CASE("pareto filter matches the pairwise oracle on random sets") {
    Rng rng(7);
    for (int trial = 0; trial < 50; ++trial) {
        const auto pts = random_points(rng, 60, 1.0, 100.0);
        CHECK(same_values(pareto_filter(pts), oracle::pareto_pairwise(pts)));
    }
}

TEST_CASE("hypervolume analytic rectangle union") {
    const std::vector<FrontPoint> pts{{1, 2, ""}, {2, 1, ""}};
    CHECK(hypervolume_2d(pts, {3, 3}) == doctest::Approx(3.0).epsilon(1e-12));

    CHECK(hypervolume_2d({{3, 3, ""}}, {3, 3}) == 0.0);
    CHECK_THROWS_AS(hypervolume_2d({{4, 1, ""}}, {3, 3}), InvalidInputError);
}

TEST_CASE("hypervolume agrees with Monte-Carlo integration") {
    Rng rng(11);
    Rng mc_rng(13);
    for (int trial = 0; trial < 100; ++trial) {
        const auto pts = random_points(rng, 12, 1.0, 50.0);
        const auto ref = choose_reference_point(pts);
        const double exact = hypervolume_2d(pts, ref);
        const double estimate = oracle::hypervolume_mc(pts, ref, 1000000, mc_rng);
        CHECK(std::abs(exact - estimate) <= 0.005 * std::max(exact, 1e-9));
    }
}

TEST_CASE("hypervolume is monotone under point addition") {
    Rng rng(17);
    auto pts = random_points(rng, 10, 1.0, 50.0);
    const ReferencePoint ref{1.01, 51.0};
    double hv = hypervolume_2d(pts, ref);
    for (int i = 0; i < 30; ++i) {
        pts.push_back({rng.uniform(0.0, 1.0), rng.uniform(0.0, 50.0), ""});
        const double next = hypervolume_2d(pts, ref);
        CHECK(next >= hv - 1e-12);
        hv = next;
    }
}

TEST_CASE("hypervolume ignores dominated points") {
    Rng rng(21);
    const auto pts = random_points(rng, 40, 1.0, 50.0);
    const ReferencePoint ref{1.01, 51.0};
    CHECK(hypervolume_2d(pts, ref) ==
          doctest::Approx(hypervolume_2d(pareto_filter(pts), ref)).epsilon(1e-12));
}

TEST_CASE("hypervolume scales with the energy axis") {
    Rng rng(23);
    auto pts = random_points(rng, 15, 1.0, 50.0);
    ReferencePoint ref{1.01, 51.0};
    const double base = hypervolume_2d(pts, ref);
    const double c = 3.5;
    for (auto& p : pts) p.energy *= c;
    ref.energy_ref *= c;
    CHECK(hypervolume_2d(pts, ref) == doctest::Approx(base * c).epsilon(1e-12));
}

TEST_CASE("reference point rule") {
    const auto ref = choose_reference_point({{1.0, 100.0, ""}});
    CHECK(ref.coverage_ref == doctest::Approx(1.01).epsilon(1e-12));
    CHECK(ref.energy_ref == doctest::Approx(101.0).epsilon(1e-12));

    const auto zero = choose_reference_point({{0.0, 0.0, ""}});
    CHECK(zero.coverage_ref == doctest::Approx(1.01).epsilon(1e-12));
    CHECK(zero.energy_ref == doctest::Approx(0.01).epsilon(1e-12));

    Rng rng(29);
    const auto pts = random_points(rng, 25, 1.0, 80.0);
    const auto r = choose_reference_point(pts);
    for (const auto& p : pts) {
        CHECK(p.coverage_score <= r.coverage_ref);
        CHECK(p.energy <= r.energy_ref);
    }
}

TEST_CASE("attainment surfaces order statistics") {
    const std::vector<FrontPoint> run_a{{0.1, 10, ""}, {0.5, 5, ""}};
    const std::vector<FrontPoint> run_b{{0.1, 20, ""}, {0.5, 15, ""}};

    SUBCASE("single run: best == median == worst") {
        const auto s = attainment_surfaces({run_a}, 11);
        CHECK(s.best == s.median);
        CHECK(s.median == s.worst);
    }

    SUBCASE("dominating run defines best, dominated run defines worst") {
        const auto s = attainment_surfaces({run_a, run_b}, 11);
        for (std::size_t i = 0; i < s.thresholds.size(); ++i) {
            if (s.thresholds[i] >= 0.1) {
                CHECK(s.best[i] <= s.worst[i]);
            }
        }
        // At threshold 0.5 the best run attains energy 5, the worst 15.
        const std::size_t at = 5;  // threshold = 0.5 on an 11-point grid
        CHECK(s.thresholds[at] == doctest::Approx(0.5));
        CHECK(s.best[at] == doctest::Approx(5.0));
        CHECK(s.worst[at] == doctest::Approx(15.0));
    }

    SUBCASE("median lies between best and worst pointwise") {
        Rng rng(31);
        std::vector<std::vector<FrontPoint>> runs;
        for (int r = 0; r < 7; ++r) runs.push_back(random_points(rng, 10, 1.0, 30.0));
        const auto s = attainment_surfaces(runs, 101);
        for (std::size_t i = 0; i < s.thresholds.size(); ++i) {
            CHECK(s.best[i] <= s.median[i]);
            CHECK(s.median[i] <= s.worst[i]);
        }
        // Monotone non-increasing as the threshold loosens.
        for (std::size_t i = 1; i < s.thresholds.size(); ++i) {
            CHECK(s.best[i] <= s.best[i - 1]);
            CHECK(s.median[i] <= s.median[i - 1]);
            CHECK(s.worst[i] <= s.worst[i - 1]);
        }
    }
}

TEST_CASE("pareto archive keeps only non-dominated points") {
    ParetoArchive archive;
    CHECK(archive.insert({0.5, 10, "a"}));
    CHECK_FALSE(archive.insert({0.6, 11, "b"}));  // dominated
    CHECK(archive.insert({0.4, 12, "c"}));        // incomparable
    CHECK(archive.insert({0.4, 9, "d"}));         // evicts a and c
    CHECK(archive.points().size() == 1);
    CHECK(archive.points()[0].plan_ref == "d");

    Rng rng(37);
    ParetoArchive big;
    std::vector<FrontPoint> all;
    for (int i = 0; i < 200; ++i) {
        const FrontPoint p{rng.uniform(0.0, 1.0), rng.uniform(0.0, 50.0), ""};
        all.push_back(p);
        big.insert(p);
    }
    auto expect = pareto_filter(all);
    auto got = big.points();
    std::sort(got.begin(), got.end(), [](const FrontPoint& a, const FrontPoint& b) {
        return a.coverage_score < b.coverage_score;
    });
    CHECK(same_values(got, expect));
}

}  // TEST_SUITE
