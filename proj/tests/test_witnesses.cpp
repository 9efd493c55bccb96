#include <catch2/catch_amalgamated.hpp>

#include <cmath>

#include "upqc/witnesses.hpp"

using namespace upqc;

TEST_CASE("builtin catalog") {
    CHECK(make_builtin("n_plus_p", {3}).at(5) == 8.0);
    CHECK(make_builtin("decreasing_steps").at(4) == -6.0);
    CHECK(make_builtin("cos_rational", {3}).at(3) == 1.0);
    CHECK(make_builtin("rapid_increasing").at(1) == 1.0);
    CHECK(make_builtin("rapid_increasing").at(4) == 10.0);
    CHECK(make_builtin("square_spikes").at(9) == 1.0);
    CHECK(make_builtin("square_spikes").at(10) == 0.0);
    CHECK(make_builtin("constant", {2.5}).at(17) == 2.5);

    CHECK_THROWS_AS(make_builtin("no_such_witness"), UnknownWitness);
    CHECK_THROWS_AS(make_builtin("cos_rational", {0}), BadParams);
    CHECK_THROWS_AS(make_builtin("constant"), BadParams);

    // every catalog entry constructs with defaultable params
    CHECK(witness_catalog().size() == 9);
}

TEST_CASE("declared properties hold by construction") {
    auto probe_period = [](const Sequence& s) {
        REQUIRE(s.properties().period.has_value());
        const std::int64_t L = *s.properties().period;
        for (std::int64_t k = 1; k <= 4 * L + 3; ++k) CHECK(s.at(k) == s.at(k + L));
    };
    probe_period(witness::alternating());
    probe_period(witness::cos_rational(4));
    probe_period(witness::constant(-1.5));

    auto probe_nondecreasing = [](const Sequence& s) {
        REQUIRE(s.properties().nondecreasing);
        for (std::int64_t k = 1; k <= 200; ++k) CHECK(s.at(k + 1) >= s.at(k));
    };
    probe_nondecreasing(witness::linear(2, -3));
    probe_nondecreasing(witness::n_plus_p(2));
    probe_nondecreasing(witness::rapid_increasing());
    probe_nondecreasing(witness::constant(0));

    CHECK_FALSE(witness::linear(-1, 0).properties().nondecreasing);
    CHECK_FALSE(witness::decreasing_steps().properties().nondecreasing);
}

TEST_CASE("repeat_blocks") {
    SECTION("block arithmetic") {
        CHECK(Sequence::repeat_blocks(witness::alternating(), 3).at(4) == 1.0);
        const Sequence r = Sequence::repeat_blocks(witness::linear(1, 0), 2);
        const std::vector<double> expect = {1, 1, 2, 2, 3, 3};
        for (std::size_t i = 0; i < expect.size(); ++i)
            CHECK(r.at(static_cast<std::int64_t>(i + 1)) == expect[i]);
    }
    SECTION("boundary differences reproduce the base differences exactly") {
        const Sequence x = witness::sin_integers();
        for (std::int64_t p : {1, 2, 3}) {
            const Sequence y = Sequence::repeat_blocks(x, p);
            for (std::int64_t j = 1; j <= 40; ++j)
                for (std::int64_t i = 1; i <= p; ++i) {
                    const std::int64_t k = (j - 1) * p + i;
                    CHECK(y.at(k) - y.at(k + p) == x.at(j) - x.at(j + 1));
                }
        }
    }
}

TEST_CASE("interleave_with_constant") {
    SECTION("interleaving a constant with itself is constant") {
        const Sequence s = Sequence::interleave_const(witness::constant(2), 2.0, 1);
        for (std::int64_t k = 1; k <= 12; ++k) CHECK(s.at(k) == 2.0);
    }
    SECTION("xfirst layout") {
        const Sequence s = Sequence::interleave_const(witness::linear(1, 0), 0.0, 2);
        const std::vector<double> expect = {1, 1, 0, 0, 2, 2, 0, 0};
        for (std::size_t i = 0; i < expect.size(); ++i)
            CHECK(s.at(static_cast<std::int64_t>(i + 1)) == expect[i]);
    }
    SECTION("constfirst layout") {
        const Sequence s = Sequence::interleave_const(witness::linear(1, 0), 0.0, 2,
                                                      BlockOrder::ConstFirst);
        const std::vector<double> expect = {0, 0, 1, 1, 0, 0, 2, 2};
        for (std::size_t i = 0; i < expect.size(); ++i)
            CHECK(s.at(static_cast<std::int64_t>(i + 1)) == expect[i]);
    }
    SECTION("p-step differences alternate x_j - ell and ell - x_{j+1}") {
        const Sequence x = witness::sin_integers();
        const double ell = 0.25;
        for (std::int64_t p : {1, 3}) {
            const Sequence z = Sequence::interleave_const(x, ell, p);
            for (std::int64_t j = 1; j <= 25; ++j)
                for (std::int64_t i = 1; i <= p; ++i) {
                    const std::int64_t kx = (2 * j - 2) * p + i;  // inside x-block j
                    CHECK(z.at(kx) - z.at(kx + p) == x.at(j) - ell);
                    const std::int64_t kl = (2 * j - 1) * p + i;  // inside ell-block j
                    CHECK(z.at(kl) - z.at(kl + p) == ell - x.at(j + 1));
                }
        }
    }
}

TEST_CASE("shifted_interleave") {
    SECTION("layout for linear, p=1") {
        const Sequence s = Sequence::shifted_interleave(witness::linear(1, 0), 1);
        const std::vector<double> expect = {2, 1, 3, 2, 4, 3};
        for (std::size_t i = 0; i < expect.size(); ++i)
            CHECK(s.at(static_cast<std::int64_t>(i + 1)) == expect[i]);
    }
    SECTION("pair boundaries realize x_{j+1} - x_j") {
        const Sequence x = witness::sin_integers();
        for (std::int64_t p : {1, 2}) {
            const Sequence y = Sequence::shifted_interleave(x, p);
            for (std::int64_t j = 1; j <= 30; ++j)
                for (std::int64_t i = 1; i <= p; ++i) {
                    // position i of the first block of pair j holds x_{j+1};
                    // p steps later sits x_j.
                    const std::int64_t k = (2 * j - 2) * p + i;
                    CHECK(y.at(k) - y.at(k + p) == x.at(j + 1) - x.at(j));
                }
        }
    }
    SECTION("alternating with p=2 is periodic with period 8") {
        const Sequence y = Sequence::shifted_interleave(witness::alternating(), 2);
        REQUIRE(y.properties().period.has_value());
        CHECK(*y.properties().period == 8);
        for (std::int64_t k = 1; k <= 32; ++k) CHECK(y.at(k) == y.at(k + 8));
    }
}

TEST_CASE("combine") {
    SECTION("sum of n_plus_p(1) and alternating") {
        const Sequence s =
            combine(CombineOp::Sum, {witness::n_plus_p(1), witness::alternating()});
        // d_k at p=1 equals -1 - 2*(-1)^k: 1 for even k, -3 for odd k
        for (std::int64_t k = 1; k <= 20; ++k)
            CHECK(s.at(k) - s.at(k + 1) == (k % 2 == 0 ? 1.0 : -3.0));
    }
    SECTION("negated linear violates at density (N-p)/N") {
        const Sequence s = combine(CombineOp::Negate, {witness::linear(1, 0)});
        for (std::int64_t p : {1, 3}) {
            const ViolationSet v = violation_set(s, StepParams(p, static_cast<double>(p), 200));
            CHECK(v.count() == 200 - p);
        }
    }
    SECTION("scale by zero is the zero sequence") {
        const Sequence s = combine(CombineOp::Scale, {witness::rapid_increasing()}, 0.0);
        for (std::int64_t k = 1; k <= 10; ++k) CHECK(s.at(k) == 0.0);
    }
    SECTION("shift") {
        const Sequence s = combine(CombineOp::Shift, {witness::linear(1, 0)}, 5.0);
        CHECK(s.at(1) == 6.0);
        CHECK_THROWS_AS(combine(CombineOp::Shift, {witness::linear(1, 0)}, -1.0), BadParams);
    }
    CHECK_THROWS_AS(combine(CombineOp::Sum, {witness::alternating()}), MalformedSpec);
}

TEST_CASE("decreasing and rapid witnesses match their defining inequalities") {
    const Sequence dec = witness::decreasing_steps();
    for (std::int64_t p : {1, 2, 5})
        for (std::int64_t k = 1; k <= 100; ++k) {
            // x_k - x_{k+p} = sum_{i=0}^{p-1} (k+i) = pk + p(p-1)/2 >= pk
            const double expect = static_cast<double>(p * k + p * (p - 1) / 2);
            CHECK(dec.at(k) - dec.at(k + p) == expect);
            CHECK(dec.at(k) - dec.at(k + p) >= static_cast<double>(p * k));
        }
    const Sequence rapid = witness::rapid_increasing();
    for (std::int64_t p : {1, 2, 5})
        for (std::int64_t k = 1; k <= 100; ++k) CHECK(rapid.at(k) - rapid.at(k + p) < 0.0);
}

TEST_CASE("sequence expression parser") {
    CHECK(parse_sequence_expr("alternating").at(2) == 1.0);
    CHECK(parse_sequence_expr("linear(2,1)").at(3) == 7.0);
    CHECK(parse_sequence_expr("sum(linear(1,0), scale(-1, linear(1,0)))").at(9) == 0.0);
    CHECK(parse_sequence_expr("repeat(linear(1,0),2)").at(5) == 3.0);
    CHECK(parse_sequence_expr("interleave(linear(1,0),0,2)").at(5) == 2.0);
    CHECK(parse_sequence_expr("interleave(linear(1,0),0,2,constfirst)").at(3) == 1.0);
    CHECK(parse_sequence_expr("shifted_interleave(linear(1,0),1)").at(1) == 2.0);
    CHECK(parse_sequence_expr(" negate( constant( 1.5 ) ) ").at(1) == -1.5);
    CHECK(parse_sequence_expr("shift(3,linear(1,0))").at(1) == 4.0);

    CHECK_THROWS_AS(parse_sequence_expr("bogus"), UnknownWitness);
    CHECK_THROWS_AS(parse_sequence_expr("sum(alternating)"), MalformedSpec);
    CHECK_THROWS_AS(parse_sequence_expr("alternating junk"), MalformedSpec);
}
