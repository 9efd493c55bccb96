#pragma once

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "upqc/defaults.hpp"
#include "upqc/sequence.hpp"

namespace upqc {

// Three-valued membership outcome. Membership in the sequence classes is an
// asymptotic property, so ExactMember and Violated both require certificates;
// everything else is ConsistentWithMembership.
enum class Status { ExactMember, ConsistentWithMembership, Violated };

inline const char* to_string(Status s) {
    switch (s) {
        case Status::ExactMember: return "ExactMember";
        case Status::ConsistentWithMembership: return "ConsistentWithMembership";
        default: return "Violated";
    }
}

struct Certificate {
    enum class Kind { Periodic, SignBounded } kind = Kind::Periodic;
    std::optional<std::int64_t> period;
};

struct EpsEvidence {
    double eps = 0.0;
    std::optional<DensityCurve> curve;     // finite-prefix fractions
    std::optional<Rational> exact_density; // period-exact density, when available
};

struct Verdict {
    Status status = Status::ConsistentWithMembership;
    std::optional<Certificate> certificate;
    // The eps at which a violation persists (Violated only). For periodic
    // specs this is the exact max step difference, which violates at every
    // threshold up to itself.
    std::optional<double> witness_eps;
    std::optional<Rational> exact_density;  // density at witness_eps, periodic case
    std::vector<EpsEvidence> evidence;      // one entry per tested eps
    // Index into `evidence` of the headline curve reported downstream.
    std::size_t reported = 0;
};

struct ClassifyParams {
    std::vector<double> eps_list = default_eps_list();
    std::vector<std::int64_t> grid = default_grid();
    double floor = kDefaultFloor;

    void validate() const {
        if (eps_list.empty()) throw BadParams("eps list must be nonempty");
        for (double e : eps_list)
            if (!(e > 0.0)) throw BadParams("every eps must be > 0");
        if (grid.empty()) throw BadParams("grid must be nonempty");
        for (std::size_t i = 1; i < grid.size(); ++i)
            if (grid[i] <= grid[i - 1]) throw BadParams("grid must be strictly increasing");
        if (!(floor > 0.0) || floor >= 1.0) throw BadParams("floor must be in (0,1)");
    }
};

namespace detail {

// A violation is "persistent" at eps when every grid fraction sits at or
// above the floor and the trend label is not Decreasing.
inline bool persistent_violation(const DensityCurve& curve, double floor) {
    for (double f : curve.fractions)
        if (f < floor) return false;
    return curve.trend != Trend::Decreasing;
}

inline Verdict classify_impl(const Sequence& s, std::int64_t p, const ClassifyParams& params,
                             Mode mode) {
    if (p < 1) throw BadParams("step p must be >= 1");
    params.validate();
    const std::int64_t max_n = params.grid.back();
    if (max_n <= p) throw InsufficientData("largest grid N must exceed the step p");

    Verdict v;

    // Period certificate: membership of a periodic sequence is decidable
    // exactly. The class requires density zero at every eps, which for a
    // periodic sequence means no step difference is positive (Upward) or
    // nonzero (Symmetric) anywhere in the period.
    if (s.properties().period) {
        const double max_diff = period_max_difference(s, p, mode);
        for (double eps : params.eps_list) {
            EpsEvidence e;
            e.eps = eps;
            e.exact_density = exact_period_density(s, p, eps, mode);
            v.evidence.push_back(std::move(e));
        }
        Certificate cert;
        cert.kind = Certificate::Kind::Periodic;
        cert.period = s.properties().period;
        v.certificate = cert;
        if (max_diff <= 0.0) {
            v.status = Status::ExactMember;
        } else {
            v.status = Status::Violated;
            v.witness_eps = max_diff;
            v.exact_density = exact_period_density(s, p, max_diff, mode);
        }
        return v;
    }

    // Sign-bound certificate: a nondecreasing sequence has x_k - x_{k+p} <= 0
    // for every k and p, so the upward violation set is empty at every eps.
    if (mode == Mode::Upward && s.properties().nondecreasing) {
        const std::vector<double> d = p_step_differences(s, p, max_n);
        for (double dk : d)
            if (dk > 0.0)
                throw CrossCheckError("declared nondecreasing sequence '" + s.label() +
                                      "' has a positive step difference");
        for (double eps : params.eps_list) {
            EpsEvidence e;
            e.eps = eps;
            e.curve = density_curve(s, p, eps, params.grid, mode);
            v.evidence.push_back(std::move(e));
        }
        Certificate cert;
        cert.kind = Certificate::Kind::SignBounded;
        v.certificate = cert;
        v.status = Status::ExactMember;
        return v;
    }

    // Evidence path: finite-prefix density curves per eps.
    std::optional<std::size_t> violated_at;
    std::size_t smallest_eps = 0;
    for (std::size_t i = 0; i < params.eps_list.size(); ++i) {
        EpsEvidence e;
        e.eps = params.eps_list[i];
        e.curve = density_curve(s, p, e.eps, params.grid, mode);
        if (!violated_at && persistent_violation(*e.curve, params.floor)) violated_at = i;
        if (params.eps_list[i] < params.eps_list[smallest_eps]) smallest_eps = i;
        v.evidence.push_back(std::move(e));
    }
    if (violated_at) {
        v.status = Status::Violated;
        v.witness_eps = params.eps_list[*violated_at];
        v.reported = *violated_at;
    } else {
        v.status = Status::ConsistentWithMembership;
        v.reported = smallest_eps;  // most sensitive curve
    }
    return v;
}

}  // namespace detail

// Membership evidence for the statistically p-upward quasi-Cauchy class.
inline Verdict classify_upward(const Sequence& s, std::int64_t p,
                               const ClassifyParams& params = {}) {
    return detail::classify_impl(s, p, params, Mode::Upward);
}

// Symmetric (two-sided) variant at step p; p = 1 is the statistically
// quasi-Cauchy class.
inline Verdict classify_symmetric(const Sequence& s, std::int64_t p,
                                  const ClassifyParams& params = {}) {
    return detail::classify_impl(s, p, params, Mode::Symmetric);
}

// Statistical-limit estimate: candidate from the tail median, accepted when
// the fraction of |x_k - l| >= eps indices is below the floor at the largest
// prefix with a non-increasing trend, for every tested eps.
struct StLimitReport {
    std::optional<double> limit;
    double candidate = 0.0;
    std::vector<EpsEvidence> evidence;
};

inline StLimitReport estimate_st_limit(const Sequence& s,
                                       const std::vector<std::int64_t>& grid,
                                       const std::vector<double>& eps_list,
                                       double floor = kDefaultFloor) {
    if (grid.empty()) throw BadParams("grid must be nonempty");
    if (eps_list.empty()) throw BadParams("eps list must be nonempty");
    for (std::size_t i = 1; i < grid.size(); ++i)
        if (grid[i] <= grid[i - 1]) throw BadParams("grid must be strictly increasing");

    const std::int64_t max_n = grid.back();
    const std::vector<double> x = s.prefix(max_n);

    // Median of the last half of the longest prefix (robust to density-zero
    // spikes).
    std::vector<double> tail(x.begin() + static_cast<std::ptrdiff_t>(max_n / 2), x.end());
    std::sort(tail.begin(), tail.end());
    const std::size_t m = tail.size();
    const double candidate =
        (m % 2 == 1) ? tail[m / 2] : 0.5 * (tail[m / 2 - 1] + tail[m / 2]);

    StLimitReport report;
    report.candidate = candidate;
    bool ok = true;
    for (double eps : eps_list) {
        DensityCurve curve;
        curve.grid = grid;
        std::int64_t count = 0;
        std::size_t gi = 0;
        for (std::int64_t k = 1; k <= max_n && gi < grid.size(); ++k) {
            if (std::fabs(x[static_cast<std::size_t>(k - 1)] - candidate) >= eps) ++count;
            while (gi < grid.size() && k == grid[gi]) {
                curve.fractions.push_back(static_cast<double>(count) /
                                          static_cast<double>(grid[gi]));
                ++gi;
            }
        }
        curve.trend = trend_of(curve.fractions);
        const bool eps_ok = curve.fractions.back() < floor &&
                            (curve.trend == Trend::Flat || curve.trend == Trend::Decreasing);
        ok = ok && eps_ok;
        EpsEvidence e;
        e.eps = eps;
        e.curve = std::move(curve);
        report.evidence.push_back(std::move(e));
    }
    if (ok) report.limit = candidate;
    return report;
}

// Verdicts for the four classes tracked by reports: upward at p, upward at 1,
// symmetric at 1 (statistically quasi-Cauchy), and statistical convergence.
struct ClassificationReport {
    std::int64_t p = 1;
    Verdict upward_p;
    Verdict upward_1;
    Verdict symmetric_1;
    StLimitReport st_limit;
    ClassifyParams params;
};

inline ClassificationReport classify_all(const Sequence& s, std::int64_t p,
                                         const ClassifyParams& params = {}) {
    ClassificationReport r;
    r.p = p;
    r.params = params;
    r.upward_p = classify_upward(s, p, params);
    r.upward_1 = p == 1 ? r.upward_p : classify_upward(s, 1, params);
    r.symmetric_1 = classify_symmetric(s, 1, params);
    r.st_limit = estimate_st_limit(s, params.grid, params.eps_list, params.floor);
    return r;
}

}  // namespace upqc
