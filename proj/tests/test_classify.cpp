#include <catch2/catch_amalgamated.hpp>

#include <cmath>

#include "upqc/classify.hpp"
#include "upqc/witnesses.hpp"

using namespace upqc;

namespace {

ClassifyParams quick_params() {
    ClassifyParams p;
    p.grid = {1000, 10000, 100000};
    return p;
}

}  // namespace

TEST_CASE("classify_upward certificates") {
    SECTION("alternating is an exact member at p=2") {
        const Verdict v = classify_upward(witness::alternating(), 2, quick_params());
        CHECK(v.status == Status::ExactMember);
        REQUIRE(v.certificate.has_value());
        CHECK(v.certificate->kind == Certificate::Kind::Periodic);
        CHECK(v.certificate->period == 2);
    }
    SECTION("linear is an exact member via the sign bound") {
        ClassifyParams params = quick_params();
        params.eps_list = {0.5};
        const Verdict v = classify_upward(witness::linear(1, 0), 1, params);
        CHECK(v.status == Status::ExactMember);
        REQUIRE(v.certificate.has_value());
        CHECK(v.certificate->kind == Certificate::Kind::SignBounded);
    }
    SECTION("alternating at p=1 is violated with exact density 1/2") {
        const Verdict v = classify_upward(witness::alternating(), 1, quick_params());
        CHECK(v.status == Status::Violated);
        REQUIRE(v.witness_eps.has_value());
        CHECK(*v.witness_eps == 2.0);  // the max step difference
        REQUIRE(v.exact_density.has_value());
        CHECK(*v.exact_density == Rational(1, 2));
    }
    SECTION("sin(k) is violated with evidence near 1/3 at eps = sin(0.5)") {
        ClassifyParams params = quick_params();
        params.eps_list = {std::sin(0.5)};
        const Verdict v = classify_upward(witness::sin_integers(), 1, params);
        CHECK(v.status == Status::Violated);
        REQUIRE(v.witness_eps.has_value());
        const DensityCurve& curve = *v.evidence[v.reported].curve;
        for (double f : curve.fractions) CHECK(std::fabs(f - 1.0 / 3.0) < 0.05);
    }
    SECTION("sin(k) is violated under the default eps ladder for p in 1..3") {
        for (std::int64_t p : {1, 2, 3})
            CHECK(classify_upward(witness::sin_integers(), p, quick_params()).status ==
                  Status::Violated);
    }
    SECTION("grid too short for the step") {
        ClassifyParams params;
        params.grid = {2};
        CHECK_THROWS_AS(classify_upward(witness::alternating(), 2, params), InsufficientData);
    }
}

TEST_CASE("classify_symmetric") {
    SECTION("n_plus_p is symmetric-violated with density ~1") {
        ClassifyParams params = quick_params();
        params.eps_list = {0.5};
        const Verdict v = classify_symmetric(witness::n_plus_p(1), 1, params);
        CHECK(v.status == Status::Violated);
        const DensityCurve& curve = *v.evidence[v.reported].curve;
        CHECK(curve.fractions.back() > 0.99);
    }
    SECTION("constant is an exact symmetric member at any step") {
        for (std::int64_t p : {1, 2, 7})
            CHECK(classify_symmetric(witness::constant(3), p, quick_params()).status ==
                  Status::ExactMember);
    }
    SECTION("alternating at p=2 is an exact symmetric member") {
        CHECK(classify_symmetric(witness::alternating(), 2, quick_params()).status ==
              Status::ExactMember);
    }
    SECTION("a nondecreasing but drifting sequence is not sign-bound certified") {
        // symmetric mode must not borrow the upward sign-bound certificate
        const Verdict v = classify_symmetric(witness::linear(1, 0), 1, quick_params());
        CHECK(v.status == Status::Violated);
    }
}

TEST_CASE("estimate_st_limit") {
    const std::vector<std::int64_t> grid = {1000, 10000};
    const std::vector<double> eps = {0.5, 0.1};

    SECTION("constant sequence") {
        const StLimitReport r = estimate_st_limit(witness::constant(3.0), grid, eps);
        REQUIRE(r.limit.has_value());
        CHECK(*r.limit == 3.0);
    }
    SECTION("square spikes converge statistically to zero") {
        const StLimitReport r = estimate_st_limit(witness::square_spikes(), grid, eps);
        REQUIRE(r.limit.has_value());
        CHECK(*r.limit == 0.0);
    }
    SECTION("alternating has no statistical limit") {
        const StLimitReport r = estimate_st_limit(witness::alternating(), grid, eps);
        CHECK_FALSE(r.limit.has_value());
    }
}

TEST_CASE("classification report consistency on the catalog") {
    // statistically quasi-Cauchy (symmetric, step 1) membership must never
    // coexist with an upward violation at any step.
    std::vector<Sequence> catalog = {
        witness::alternating(),      witness::linear(1, 0),  witness::n_plus_p(2),
        witness::cos_rational(3),    witness::sin_integers(), witness::decreasing_steps(),
        witness::rapid_increasing(), witness::constant(1.5), witness::square_spikes()};
    ClassifyParams params = quick_params();
    params.grid = {1000, 10000};  // keep the sweep fast
    for (const Sequence& s : catalog) {
        const Verdict sym = classify_symmetric(s, 1, params);
        for (std::int64_t p : {1, 2, 3}) {
            const Verdict up = classify_upward(s, p, params);
            if (sym.status == Status::ExactMember) CHECK(up.status != Status::Violated);
            // hierarchy: an exact member at p stays clean at mp
            if (up.status == Status::ExactMember) {
                for (std::int64_t m : {2, 3}) {
                    const Verdict vmp = classify_upward(s, m * p, params);
                    CHECK(vmp.status != Status::Violated);
                }
            }
        }
    }
}

TEST_CASE("determinism") {
    const Verdict a = classify_upward(witness::sin_integers(), 2, quick_params());
    const Verdict b = classify_upward(witness::sin_integers(), 2, quick_params());
    CHECK(a.status == b.status);
    REQUIRE(a.evidence.size() == b.evidence.size());
    for (std::size_t i = 0; i < a.evidence.size(); ++i) {
        REQUIRE(a.evidence[i].curve.has_value());
        CHECK(a.evidence[i].curve->fractions == b.evidence[i].curve->fractions);
    }
}

TEST_CASE("classify_all bundles the four classes") {
    const ClassificationReport r = classify_all(witness::alternating(), 2, quick_params());
    CHECK(r.upward_p.status == Status::ExactMember);
    CHECK(r.upward_1.status == Status::Violated);
    CHECK(r.symmetric_1.status == Status::Violated);
    CHECK_FALSE(r.st_limit.limit.has_value());
}
