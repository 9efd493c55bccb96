#include <catch2/catch_amalgamated.hpp>

#include <cmath>

#include "upqc/sequence.hpp"
#include "upqc/witnesses.hpp"

using namespace upqc;

TEST_CASE("eval_sequence basics") {
    CHECK(witness::alternating().at(3) == -1.0);
    CHECK(Sequence::sampled({5.0}).at(1) == 5.0);

    // x - x = 0 pointwise
    const Sequence lin = witness::linear(1, 0);
    const Sequence zero = Sequence::sum(lin, Sequence::scale(-1.0, lin));
    CHECK(zero.at(7) == 0.0);

    CHECK_THROWS_AS(lin.at(0), OutOfRange);
    CHECK_THROWS_AS(Sequence::sampled({1.0, 2.0}).at(3), OutOfRange);
    CHECK_THROWS_AS(Sequence::sampled({}), MalformedSpec);
}

TEST_CASE("p-step differences") {
    SECTION("alternating at step 2 vanishes") {
        const auto d = p_step_differences(witness::alternating(), 2, 10);
        REQUIRE(d.size() == 8);
        for (double v : d) CHECK(v == 0.0);
    }
    SECTION("linear at step 3") {
        const auto d = p_step_differences(witness::linear(1, 0), 3, 10);
        REQUIRE(d.size() == 7);
        for (double v : d) CHECK(v == -3.0);
    }
    SECTION("cos_rational(3) at step 2, direct-evaluation cross-check") {
        const Sequence s = witness::cos_rational(3);
        const auto d = p_step_differences(s, 2, 7);
        REQUIRE(d.size() == 5);
        for (std::size_t i = 0; i < d.size(); ++i) {
            const auto k = static_cast<std::int64_t>(i + 1);
            CHECK(d[i] == s.at(k) - s.at(k + 2));
        }
        // one full period of values: -3/2, 0, +3/2
        CHECK(d[0] == Catch::Approx(-1.5).margin(1e-12));
        CHECK(d[1] == Catch::Approx(0.0).margin(1e-12));
        CHECK(d[2] == Catch::Approx(1.5).margin(1e-12));
        CHECK(d[3] == d[0]);
        CHECK(d[4] == d[1]);
    }
    CHECK_THROWS_AS(p_step_differences(witness::alternating(), 10, 10), BadParams);
}

TEST_CASE("violation sets") {
    SECTION("alternating, p=1, eps=1: violations at even k in [1, N-1]") {
        const ViolationSet v =
            violation_set(witness::alternating(), StepParams(1, 1.0, 100), Mode::Upward);
        REQUIRE(v.count() == 49);
        for (const auto k : v.indices) CHECK(k % 2 == 0);
        CHECK(v.indices.front() == 2);
        CHECK(v.indices.back() == 98);
        CHECK(prefix_density(v) == 0.49);
    }
    SECTION("linear is violation-free upward") {
        const ViolationSet v =
            violation_set(witness::linear(1, 0), StepParams(1, 0.5, 100), Mode::Upward);
        CHECK(v.indices.empty());
        CHECK(prefix_density(v) == 0.0);
    }
    SECTION("decreasing_steps violates everywhere") {
        const ViolationSet v =
            violation_set(witness::decreasing_steps(), StepParams(2, 1.0, 50), Mode::Upward);
        REQUIRE(v.count() == 48);
        CHECK(v.indices.front() == 1);
        CHECK(v.indices.back() == 48);
        CHECK(prefix_density(v) == 0.96);
    }
    SECTION("closed comparison counts ties") {
        // d_k = 2 exactly for even k; eps = 2 must still count them.
        const ViolationSet v =
            violation_set(witness::alternating(), StepParams(1, 2.0, 10), Mode::Upward);
        CHECK(v.count() == 4);
    }
}

TEST_CASE("density curves") {
    SECTION("n_plus_p is flat zero") {
        const std::vector<std::int64_t> grid = {100, 1000, 10000};
        const DensityCurve c = density_curve(witness::n_plus_p(2), 2, 0.1, grid);
        REQUIRE(c.fractions.size() == 3);
        for (double f : c.fractions) CHECK(f == 0.0);
        CHECK(c.trend == Trend::Flat);
    }
    SECTION("alternating density approaches 1/2 from below") {
        const std::vector<std::int64_t> grid = {10, 100, 1000};
        const DensityCurve c = density_curve(witness::alternating(), 1, 1.0, grid);
        // count = floor((N-1)/2) even indices
        CHECK(c.fractions[0] == 0.4);
        CHECK(c.fractions[1] == 0.49);
        CHECK(c.fractions[2] == 0.499);
        CHECK(c.trend != Trend::Decreasing);
    }
    SECTION("matches violation_set + prefix_density at every grid point") {
        const Sequence s = witness::sin_integers();
        const std::vector<std::int64_t> grid = {50, 500, 5000};
        const DensityCurve c = density_curve(s, 2, 0.3, grid);
        for (std::size_t i = 0; i < grid.size(); ++i) {
            const ViolationSet v = violation_set(s, StepParams(2, 0.3, grid[i]), Mode::Upward);
            CHECK(c.fractions[i] == prefix_density(v));
        }
    }
    CHECK_THROWS_AS(
        density_curve(witness::alternating(), 1, 0.5, std::vector<std::int64_t>{10, 10}),
        BadParams);
}

TEST_CASE("trend labels") {
    const double tol = kFlatnessTol;
    CHECK(trend_of(std::vector<double>{0.1, 0.1, 0.1}) == Trend::Flat);
    CHECK(trend_of(std::vector<double>{0.1, 0.2, 0.3}) == Trend::Increasing);
    CHECK(trend_of(std::vector<double>{0.3, 0.2, 0.1}) == Trend::Decreasing);
    CHECK(trend_of(std::vector<double>{0.1, 0.3, 0.2}) == Trend::Mixed);
    // only the last three points matter
    CHECK(trend_of(std::vector<double>{0.9, 0.1, 0.1, 0.1}) == Trend::Flat);
    // differences within the tolerance are flat
    CHECK(trend_of(std::vector<double>{0.1, 0.1 + tol / 4, 0.1 - tol / 4}) == Trend::Flat);
}

TEST_CASE("exact period densities") {
    SECTION("cos_rational(3) at step 5") {
        CHECK(exact_period_density(witness::cos_rational(3), 5, 1.0) == Rational(1, 3));
    }
    SECTION("alternating at step 2 has none") {
        CHECK(exact_period_density(witness::alternating(), 2, 0.25) == Rational(0, 1));
    }
    SECTION("constant at step 1 has none") {
        CHECK(exact_period_density(witness::constant(4.2), 1, 0.5) == Rational(0, 1));
    }
    SECTION("agrees with prefix density when the tail is violation-free") {
        // cos_rational(5), p=1, eps=1: violations only at k = 1 mod 5, so the
        // final p residues contribute nothing and counts line up exactly.
        const Sequence s = witness::cos_rational(5);
        const Rational exact = exact_period_density(s, 1, 1.0);
        CHECK(exact == Rational(1, 5));
        const ViolationSet v = violation_set(s, StepParams(1, 1.0, 150), Mode::Upward);
        CHECK(prefix_density(v) == exact.value());
    }
    CHECK_THROWS_AS(exact_period_density(witness::sin_integers(), 1, 0.5), NotPeriodic);
}

TEST_CASE("periodicity is exact in floating point") {
    for (std::int64_t L : {2, 3, 5, 7}) {
        const Sequence s = witness::cos_rational(L);
        for (std::int64_t k = 1; k <= 3 * L; ++k) CHECK(s.at(k) == s.at(k + L));
    }
    CHECK(witness::cos_rational(3).at(3) == 1.0);
}
