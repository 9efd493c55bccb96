#pragma once

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <span>
#include <string>
#include <vector>

#include "upqc/functions.hpp"

namespace upqc {

// Uniform sampling points t_k = k/N, k = 0..N (endpoints included).
struct SamplingGrid {
    std::int64_t n = 0;
    std::vector<double> points;

    static SamplingGrid uniform(std::int64_t n) {
        if (n < 1) throw BadParams("sampling grid needs N >= 1");
        SamplingGrid g;
        g.n = n;
        g.points.reserve(static_cast<std::size_t>(n) + 1);
        for (std::int64_t k = 0; k <= n; ++k)
            g.points.push_back(static_cast<double>(k) / static_cast<double>(n));
        return g;
    }
};

// B_n(f; t) = sum_k C(n,k) t^k (1-t)^(n-k) f(k/n), evaluated with the
// multiplicative weight recurrence w_{k+1} = w_k * ((n-k)/(k+1)) * (t/(1-t)).
// For t > 1/2 the symmetric form in u = 1-t is used so the recurrence never
// overflows; summation is compensated. Endpoints interpolate exactly.
inline double bernstein_eval(const RealFunction& f, std::int64_t n, double t) {
    if (n < 1) throw DomainError("Bernstein degree must be >= 1");
    if (!(t >= 0.0 && t <= 1.0)) throw DomainError("Bernstein evaluation needs t in [0,1]");

    const bool mirrored = t > 0.5;
    const double u = mirrored ? 1.0 - t : t;   // u <= 1/2
    const double ratio = u / (1.0 - u);
    double w = std::pow(1.0 - u, static_cast<double>(n));
    double sum = 0.0, comp = 0.0;
    for (std::int64_t k = 0; k <= n; ++k) {
        const std::int64_t sample = mirrored ? n - k : k;
        const double term =
            w * f(static_cast<double>(sample) / static_cast<double>(n));
        const double y = term - comp;
        const double next = sum + y;
        comp = (next - sum) - y;
        sum = next;
        w = w * (static_cast<double>(n - k) / static_cast<double>(k + 1)) * ratio;
    }
    return sum;
}

// Undershoot profile U_n(t_k) = f(t_k) - B_n(f; t_k) over a point list.
//
// For polynomials of degree <= 2 the operator satisfies
// B_n(f; t) = f(t) + c * t(1-t)/n exactly (c the quadratic coefficient), so
// the undershoot has the closed form (-c) * t(1-t)/n. That expression is the
// recorded value - its rounding at grid ties is the reference behavior - and
// it is cross-checked against the direct sum at every point.
struct UndershootProfile {
    std::int64_t degree = 0;
    std::vector<double> points;
    std::vector<double> values;  // f - B_n(f), positive where the operator undershoots
    double max_undershoot = 0.0;
    double sup_error = 0.0;      // max |f - B_n(f)| over the points
};

inline UndershootProfile undershoot_profile(const RealFunction& f, std::int64_t degree,
                                            std::span<const double> points) {
    if (points.empty()) throw BadParams("undershoot profile needs at least one point");
    UndershootProfile prof;
    prof.degree = degree;
    prof.points.assign(points.begin(), points.end());
    prof.values.reserve(points.size());

    const std::optional<double> quad = f.quadratic_coefficient();
    double max_u = -std::numeric_limits<double>::infinity();
    double sup = 0.0;
    for (const double t : points) {
        double u;
        if (quad) {
            const double arc = (-*quad) * t * (1.0 - t);
            u = arc / static_cast<double>(degree);
            const double direct = f(t) - bernstein_eval(f, degree, t);
            if (std::fabs(u - direct) > 1e-12)
                throw CrossCheckError("quadratic undershoot fast path disagrees with the direct "
                                      "sum at t=" + Sequence::format_number(t));
        } else {
            u = f(t) - bernstein_eval(f, degree, t);
        }
        prof.values.push_back(u);
        max_u = std::max(max_u, u);
        sup = std::max(sup, std::fabs(u));
    }
    prof.max_undershoot = max_u;
    prof.sup_error = sup;
    return prof;
}

inline UndershootProfile undershoot_profile(const RealFunction& f, std::int64_t degree,
                                            const SamplingGrid& grid) {
    return undershoot_profile(f, degree, std::span<const double>(grid.points));
}

// ---------------------------------------------------------------------------
// Safety tables.

enum class SafetyStatus { Unsafe, Marginal, Safe };

inline const char* to_string(SafetyStatus s) {
    switch (s) {
        case SafetyStatus::Unsafe: return "Unsafe";
        case SafetyStatus::Marginal: return "Marginal";
        default: return "Safe";
    }
}

struct SafetyRow {
    std::int64_t degree = 0;
    double max_undershoot = 0.0;
    std::int64_t violations = 0;  // |{k : U(t_k) >= eps}|, closed comparison
    double proportion = 0.0;      // violations / (number of points)
    double sup_error = 0.0;
    SafetyStatus status = SafetyStatus::Safe;
};

struct SafetyTable {
    double epsilon = 0.0;
    std::int64_t point_count = 0;
    double marginal_cut = kDefaultMarginalCut;
    std::vector<SafetyRow> rows;
};

namespace detail {

inline SafetyStatus status_of(double proportion, double marginal_cut) {
    if (proportion == 0.0) return SafetyStatus::Safe;
    return proportion <= marginal_cut ? SafetyStatus::Marginal : SafetyStatus::Unsafe;
}

inline SafetyRow row_from_values(std::int64_t degree, std::span<const double> undershoots,
                                 double eps, double marginal_cut) {
    SafetyRow row;
    row.degree = degree;
    double max_u = -std::numeric_limits<double>::infinity();
    double sup = 0.0;
    std::int64_t violations = 0;
    for (const double u : undershoots) {
        max_u = std::max(max_u, u);
        sup = std::max(sup, std::fabs(u));
        if (u >= eps) ++violations;
    }
    row.max_undershoot = max_u;
    row.sup_error = sup;
    row.violations = violations;
    row.proportion = static_cast<double>(violations) / static_cast<double>(undershoots.size());
    row.status = status_of(row.proportion, marginal_cut);
    return row;
}

}  // namespace detail

// Per-degree undershoot report: the comparison is U(t_k) >= eps with U
// computed first (see undershoot_profile); algebraic rearrangements of the
// threshold test do not reproduce boundary ties and are not used.
inline SafetyTable safety_table(const RealFunction& f, std::span<const std::int64_t> degrees,
                                double eps, std::span<const double> points,
                                double marginal_cut = kDefaultMarginalCut) {
    if (degrees.empty()) throw BadParams("safety table needs at least one degree");
    if (!(eps > 0.0)) throw BadParams("epsilon must be > 0");
    if (!(marginal_cut >= 0.0 && marginal_cut < 1.0))
        throw BadParams("marginal cut must be in [0,1)");
    SafetyTable table;
    table.epsilon = eps;
    table.point_count = static_cast<std::int64_t>(points.size());
    table.marginal_cut = marginal_cut;
    for (const std::int64_t n : degrees) {
        const UndershootProfile prof = undershoot_profile(f, n, points);
        table.rows.push_back(
            detail::row_from_values(n, std::span<const double>(prof.values), eps, marginal_cut));
    }
    return table;
}

inline SafetyTable safety_table(const RealFunction& f, std::span<const std::int64_t> degrees,
                                double eps, const SamplingGrid& grid,
                                double marginal_cut = kDefaultMarginalCut) {
    return safety_table(f, degrees, eps, std::span<const double>(grid.points), marginal_cut);
}

// Averaged operator (B_{n1} + B_{n2})/2: its undershoot is the pointwise mean
// of the two profiles. The union bound
//   |{U_avg >= eps}| <= |{U_{n1} >= eps}| + |{U_{n2} >= eps}|
// is checked on the grid and reported.
struct AveragedSafety {
    std::int64_t n1 = 0, n2 = 0;
    SafetyRow row;
    std::int64_t count_n1 = 0;
    std::int64_t count_n2 = 0;
};

inline AveragedSafety average_operator_safety(const RealFunction& f, std::int64_t n1,
                                              std::int64_t n2, double eps,
                                              std::span<const double> points,
                                              double marginal_cut = kDefaultMarginalCut) {
    if (!(eps > 0.0)) throw BadParams("epsilon must be > 0");
    const UndershootProfile p1 = undershoot_profile(f, n1, points);
    const UndershootProfile p2 = undershoot_profile(f, n2, points);
    std::vector<double> avg(points.size());
    for (std::size_t i = 0; i < points.size(); ++i)
        avg[i] = 0.5 * p1.values[i] + 0.5 * p2.values[i];

    AveragedSafety result;
    result.n1 = n1;
    result.n2 = n2;
    result.row = detail::row_from_values(0, std::span<const double>(avg), eps, marginal_cut);
    result.row.degree = 0;  // not a single-degree operator
    for (const double u : p1.values)
        if (u >= eps) ++result.count_n1;
    for (const double u : p2.values)
        if (u >= eps) ++result.count_n2;
    if (result.row.violations > result.count_n1 + result.count_n2)
        throw CrossCheckError("averaged undershoot violates the union bound");
    return result;
}

inline AveragedSafety average_operator_safety(const RealFunction& f, std::int64_t n1,
                                              std::int64_t n2, double eps,
                                              const SamplingGrid& grid,
                                              double marginal_cut = kDefaultMarginalCut) {
    return average_operator_safety(f, n1, n2, eps, std::span<const double>(grid.points),
                                   marginal_cut);
}

// One-sidedness report: proportions of points where the operator under- and
// overshoots by at least eps.
struct AsymmetryReport {
    double undershoot_proportion = 0.0;
    double overshoot_proportion = 0.0;
};

inline AsymmetryReport asymmetry_report(const RealFunction& f, std::int64_t degree, double eps,
                                        std::span<const double> points) {
    if (!(eps > 0.0)) throw BadParams("epsilon must be > 0");
    const UndershootProfile prof = undershoot_profile(f, degree, points);
    std::int64_t under = 0, over = 0;
    for (const double u : prof.values) {
        if (u >= eps) ++under;
        if (-u >= eps) ++over;
    }
    AsymmetryReport rep;
    rep.undershoot_proportion = static_cast<double>(under) / static_cast<double>(points.size());
    rep.overshoot_proportion = static_cast<double>(over) / static_cast<double>(points.size());
    return rep;
}

inline AsymmetryReport asymmetry_report(const RealFunction& f, std::int64_t degree, double eps,
                                        const SamplingGrid& grid) {
    return asymmetry_report(f, degree, eps, std::span<const double>(grid.points));
}

// Transformed sampling points g(t_0)..g(t_N) for a monotone reparametrization
// g mapping [0,1] into [0,1].
inline std::vector<double> reparametrize_grid(const RealFunction& g,
                                              std::span<const double> points) {
    if (!g.metadata().monotone_nondecreasing)
        throw MissingMetadata("reparametrization needs a monotone nondecreasing map");
    std::vector<double> out;
    out.reserve(points.size());
    double prev = -std::numeric_limits<double>::infinity();
    for (const double t : points) {
        const double v = g(t);
        if (!(v >= 0.0 && v <= 1.0))
            throw DomainError("reparametrized point " + Sequence::format_number(v) +
                              " falls outside [0,1]");
        if (v < prev) throw NotMonotone("reparametrized points decrease");
        out.push_back(v);
        prev = v;
    }
    return out;
}

inline std::vector<double> reparametrize_grid(const RealFunction& g, const SamplingGrid& grid) {
    return reparametrize_grid(g, std::span<const double>(grid.points));
}

}  // namespace upqc
