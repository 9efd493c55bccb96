#pragma once

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <functional>
#include <memory>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "upqc/classify.hpp"
#include "upqc/sequence.hpp"
#include "upqc/witnesses.hpp"

namespace upqc {

// Facts about a real function that downstream checks rely on. Only set when
// decidable from the construction.
struct FunctionMetadata {
    bool monotone_nondecreasing = false;
    std::optional<double> lipschitz;  // global constant on all of R
    std::optional<double> bound;      // |f| <= bound everywhere
    std::optional<bool> concave;
};

// Immutable real function from a small typed catalog, plus a perturbed
// composite kind (base + eps' * sin(alpha x)).
class RealFunction {
public:
    enum class Kind {
        Polynomial,
        SinWave,
        ArcTan,
        LogOnePlusExp,
        SqrtMaxZero,
        AffineMonotone,
        PiecewiseLinearMonotone,
        Perturbed,
    };

private:
    struct Impl {
        Kind kind;
        std::vector<double> coeffs;                 // Polynomial: ascending powers
        double a = 0.0, b = 0.0;                    // SinWave amp/freq, Affine a/b, Perturbed eps'/alpha
        std::vector<std::pair<double, double>> points;  // PiecewiseLinearMonotone
        std::shared_ptr<const Impl> base;           // Perturbed
        FunctionMetadata meta;
        std::string label;
    };
    std::shared_ptr<const Impl> impl_;

    explicit RealFunction(std::shared_ptr<const Impl> i) : impl_(std::move(i)) {}

    static double eval_impl(const Impl& f, double x) {
        switch (f.kind) {
            case Kind::Polynomial: {
                double acc = 0.0;
                for (std::size_t i = f.coeffs.size(); i-- > 0;) acc = acc * x + f.coeffs[i];
                return acc;
            }
            case Kind::SinWave:
                return f.a * std::sin(f.b * x);
            case Kind::ArcTan:
                return std::atan(x);
            case Kind::LogOnePlusExp:
                return x > 0.0 ? x + std::log1p(std::exp(-x)) : std::log1p(std::exp(x));
            case Kind::SqrtMaxZero:
                return std::sqrt(std::max(x, 0.0));
            case Kind::AffineMonotone:
                return f.a * x + f.b;
            case Kind::PiecewiseLinearMonotone: {
                const auto& pts = f.points;
                if (x <= pts.front().first) return pts.front().second;
                if (x >= pts.back().first) return pts.back().second;
                // pts is sorted by x; find the segment containing x.
                std::size_t hi = 1;
                while (pts[hi].first < x) ++hi;
                const auto& [x0, y0] = pts[hi - 1];
                const auto& [x1, y1] = pts[hi];
                return y0 + (y1 - y0) * ((x - x0) / (x1 - x0));
            }
            case Kind::Perturbed:
                return eval_impl(*f.base, x) + f.a * std::sin(f.b * x);
        }
        throw MalformedSpec("unknown function kind");
    }

public:
    double operator()(double x) const { return eval_impl(*impl_, x); }
    Kind kind() const { return impl_->kind; }
    const FunctionMetadata& metadata() const { return impl_->meta; }
    const std::string& label() const { return impl_->label; }
    const std::vector<double>& coefficients() const { return impl_->coeffs; }
    const std::vector<std::pair<double, double>>& breakpoints() const { return impl_->points; }
    double param_a() const { return impl_->a; }
    double param_b() const { return impl_->b; }
    std::optional<RealFunction> perturbed_base() const {
        if (impl_->kind != Kind::Perturbed) return std::nullopt;
        return RealFunction(impl_->base);
    }

    // Quadratic coefficient c of c*t^2 + b*t + a when the function is a
    // polynomial of degree <= 2; enables the exact undershoot fast path.
    std::optional<double> quadratic_coefficient() const {
        if (impl_->kind != Kind::Polynomial || impl_->coeffs.size() > 3) return std::nullopt;
        return impl_->coeffs.size() == 3 ? impl_->coeffs[2] : 0.0;
    }

    // --- factories -----------------------------------------------------------

    static RealFunction polynomial(std::vector<double> coeffs) {
        if (coeffs.empty()) coeffs.push_back(0.0);
        while (coeffs.size() > 1 && coeffs.back() == 0.0) coeffs.pop_back();
        auto impl = std::make_shared<Impl>();
        impl->kind = Kind::Polynomial;
        impl->coeffs = coeffs;
        const std::size_t deg = coeffs.size() - 1;
        if (deg == 0) {
            impl->meta.monotone_nondecreasing = true;
            impl->meta.lipschitz = 0.0;
            impl->meta.bound = std::fabs(coeffs[0]);
            impl->meta.concave = true;
        } else if (deg == 1) {
            impl->meta.monotone_nondecreasing = coeffs[1] >= 0.0;
            impl->meta.lipschitz = std::fabs(coeffs[1]);
            impl->meta.concave = true;
        } else if (deg == 2) {
            impl->meta.concave = coeffs[2] <= 0.0;
        }
        std::string lbl = "poly(";
        for (std::size_t i = 0; i < coeffs.size(); ++i)
            lbl += (i ? "," : "") + Sequence::format_number(coeffs[i]);
        impl->label = lbl + ")";
        return RealFunction(std::move(impl));
    }

    static RealFunction sin_wave(double amplitude, double frequency) {
        auto impl = std::make_shared<Impl>();
        impl->kind = Kind::SinWave;
        impl->a = amplitude;
        impl->b = frequency;
        impl->meta.monotone_nondecreasing = amplitude * frequency == 0.0;
        impl->meta.lipschitz = std::fabs(amplitude * frequency);
        impl->meta.bound = std::fabs(amplitude);
        impl->label = "sin_wave(" + Sequence::format_number(amplitude) + "," +
                      Sequence::format_number(frequency) + ")";
        return RealFunction(std::move(impl));
    }

    static RealFunction arctan() {
        auto impl = std::make_shared<Impl>();
        impl->kind = Kind::ArcTan;
        impl->meta.monotone_nondecreasing = true;
        impl->meta.lipschitz = 1.0;
        impl->meta.bound = M_PI / 2.0;
        impl->label = "arctan";
        return RealFunction(std::move(impl));
    }

    static RealFunction log_one_plus_exp() {
        auto impl = std::make_shared<Impl>();
        impl->kind = Kind::LogOnePlusExp;
        impl->meta.monotone_nondecreasing = true;
        impl->meta.lipschitz = 1.0;
        impl->label = "log_one_plus_exp";
        return RealFunction(std::move(impl));
    }

    // Monotone but with unbounded slope at 0+, so no global Lipschitz constant.
    static RealFunction sqrt_max_zero() {
        auto impl = std::make_shared<Impl>();
        impl->kind = Kind::SqrtMaxZero;
        impl->meta.monotone_nondecreasing = true;
        impl->label = "sqrt_max_zero";
        return RealFunction(std::move(impl));
    }

    static RealFunction affine_monotone(double a, double b) {
        if (a < 0.0) throw BadParams("affine_monotone needs slope a >= 0");
        auto impl = std::make_shared<Impl>();
        impl->kind = Kind::AffineMonotone;
        impl->a = a;
        impl->b = b;
        impl->meta.monotone_nondecreasing = true;
        impl->meta.lipschitz = a;
        if (a == 0.0) impl->meta.bound = std::fabs(b);
        impl->label = "affine_monotone(" + Sequence::format_number(a) + "," +
                      Sequence::format_number(b) + ")";
        return RealFunction(std::move(impl));
    }

    // Interpolates the given (x, y) breakpoints, constant beyond the ends.
    static RealFunction piecewise_linear_monotone(std::vector<std::pair<double, double>> points) {
        if (points.size() < 2) throw BadParams("piecewise linear needs >= 2 points");
        for (std::size_t i = 1; i < points.size(); ++i) {
            if (!(points[i].first > points[i - 1].first))
                throw BadParams("piecewise breakpoints must be strictly increasing in x");
            if (points[i].second < points[i - 1].second)
                throw NotMonotone("piecewise values must be nondecreasing");
        }
        auto impl = std::make_shared<Impl>();
        impl->kind = Kind::PiecewiseLinearMonotone;
        impl->points = std::move(points);
        impl->meta.monotone_nondecreasing = true;
        double max_slope = 0.0, max_abs = 0.0;
        for (std::size_t i = 1; i < impl->points.size(); ++i) {
            const double dx = impl->points[i].first - impl->points[i - 1].first;
            const double dy = impl->points[i].second - impl->points[i - 1].second;
            max_slope = std::max(max_slope, dy / dx);
        }
        for (const auto& [x, y] : impl->points) max_abs = std::max(max_abs, std::fabs(y));
        impl->meta.lipschitz = max_slope;
        impl->meta.bound = max_abs;  // constant extension beyond the ends
        std::string lbl = "pwl(";
        for (std::size_t i = 0; i < impl->points.size(); ++i)
            lbl += (i ? ";" : "") + Sequence::format_number(impl->points[i].first) + ":" +
                   Sequence::format_number(impl->points[i].second);
        impl->label = lbl + ")";
        return RealFunction(std::move(impl));
    }

    static RealFunction perturbed(const RealFunction& base, double eps_prime, double alpha) {
        auto impl = std::make_shared<Impl>();
        impl->kind = Kind::Perturbed;
        impl->base = base.impl_;
        impl->a = eps_prime;
        impl->b = alpha;
        if (base.metadata().bound)
            impl->meta.bound = *base.metadata().bound + std::fabs(eps_prime);
        if (base.metadata().lipschitz)
            impl->meta.lipschitz = *base.metadata().lipschitz + std::fabs(eps_prime * alpha);
        impl->label = "perturbed(" + base.label() + ",eps_prime=" +
                      Sequence::format_number(eps_prime) + ",alpha=" +
                      Sequence::format_number(alpha) + ")";
        return RealFunction(std::move(impl));
    }
};

inline double eval_function(const RealFunction& f, double x) { return f(x); }

// Lazy image sequence (f(x_k)). Period survives composition; monotone f on a
// nondecreasing sequence stays nondecreasing.
inline Sequence image_sequence(const RealFunction& f, const Sequence& s) {
    return Sequence::mapped([f](double x) { return f(x); }, f.metadata().monotone_nondecreasing,
                            f.label(), s);
}

// ---------------------------------------------------------------------------
// Monotone inclusion check: V_{f o x}(p, eps, N) subset of V_x(p, eps/L, N).

struct InclusionResult {
    bool holds = true;
    std::optional<std::int64_t> counterexample;  // smallest violating index
};

inline InclusionResult monotone_inclusion_check(const RealFunction& f, const Sequence& s,
                                                std::int64_t p, double eps, std::int64_t n) {
    if (!f.metadata().monotone_nondecreasing)
        throw MissingMetadata("inclusion check needs a monotone nondecreasing function");
    if (!f.metadata().lipschitz)
        throw MissingMetadata("inclusion check needs a Lipschitz constant for '" + f.label() +
                              "'");
    const double L = *f.metadata().lipschitz;
    const StepParams params(p, eps, n);

    const ViolationSet v_image = violation_set(image_sequence(f, s), params, Mode::Upward);
    InclusionResult result;
    if (L == 0.0) {
        // Constant function: the image violation set must be empty.
        if (!v_image.indices.empty()) {
            result.holds = false;
            result.counterexample = v_image.indices.front();
        }
        return result;
    }
    const ViolationSet v_base = violation_set(s, StepParams(p, eps / L, n), Mode::Upward);
    std::size_t bi = 0;
    for (const std::int64_t k : v_image.indices) {
        while (bi < v_base.indices.size() && v_base.indices[bi] < k) ++bi;
        if (bi == v_base.indices.size() || v_base.indices[bi] != k) {
            result.holds = false;
            result.counterexample = k;
            return result;
        }
    }
    return result;
}

// ---------------------------------------------------------------------------
// Perturbation g(x) = f(x) + eps' * sin(alpha x).

struct PerturbationParams {
    double eps_prime = 0.1;
    double alpha = 1.0;
    std::int64_t p = 1;
    double s_p_alpha = 0.0;  // 2|sin(alpha p / 2)|
    double c = 0.0;          // eps' * s_p_alpha / 4

    static PerturbationParams make(double eps_prime, double alpha, std::int64_t p) {
        if (!(eps_prime > 0.0)) throw BadParams("eps' must be > 0");
        if (p < 1) throw BadParams("step p must be >= 1");
        PerturbationParams params;
        params.eps_prime = eps_prime;
        params.alpha = alpha;
        params.p = p;
        const double s = std::sin(alpha * static_cast<double>(p) / 2.0);
        params.s_p_alpha = 2.0 * std::fabs(s);
        if (params.s_p_alpha < 1e-12)
            throw DegenerateFrequency("sin(alpha*p/2) vanishes for alpha=" +
                                      Sequence::format_number(alpha) +
                                      ", p=" + std::to_string(p));
        params.c = eps_prime * params.s_p_alpha / 4.0;
        return params;
    }
};

inline RealFunction perturb_function(const RealFunction& f, const PerturbationParams& params) {
    if (!f.metadata().bound)
        throw UnboundedFunction("perturbation needs a bounded base function, '" + f.label() +
                                "' has no declared bound");
    return RealFunction::perturbed(f, params.eps_prime, params.alpha);
}

// Empirical density of {k <= n-p : g(k) - g(k+p) >= c} for the perturbed
// function along the integers.
inline double perturbed_violation_density(const RealFunction& g, const PerturbationParams& params,
                                          std::int64_t n) {
    if (n <= params.p) throw BadParams("prefix must exceed the step");
    std::int64_t count = 0;
    for (std::int64_t k = 1; k <= n - params.p; ++k) {
        const double d =
            g(static_cast<double>(k)) - g(static_cast<double>(k + params.p));
        if (d >= params.c) ++count;
    }
    return static_cast<double>(count) / static_cast<double>(n);
}

// ---------------------------------------------------------------------------
// SUC_p membership evidence harness.

struct SucWitnessEntry {
    std::string witness;
    Verdict self;   // the witness's own membership verdict
    Verdict image;  // verdict of the image sequence under f
};

struct SucEvidenceReport {
    std::string function_label;
    std::int64_t p = 1;
    std::vector<SucWitnessEntry> entries;
    enum class Overall { NotMember, ConsistentWithMembership } overall =
        Overall::ConsistentWithMembership;
    std::optional<std::string> deciding_witness;
};

inline const char* to_string(SucEvidenceReport::Overall o) {
    return o == SucEvidenceReport::Overall::NotMember ? "NotMember" : "ConsistentWithMembership";
}

// Default witness suite. The interleaved entry uses square_spikes, which
// statistically converges to the interlaced constant 0, so the interleaving
// itself stays in the membership class while still exercising the
// f(x_j) - f(l) difference pattern.
inline std::vector<Sequence> default_suc_suite(std::int64_t p) {
    if (p < 1) throw BadParams("step p must be >= 1");
    std::vector<Sequence> suite;
    suite.push_back(witness::linear(1, 0));
    suite.push_back(witness::n_plus_p(p));
    if (p % 2 == 0) suite.push_back(witness::alternating());
    if (p >= 2) suite.push_back(witness::cos_rational(p));
    suite.push_back(witness::rapid_increasing());
    suite.push_back(Sequence::repeat_blocks(witness::linear(1, 0), p));
    suite.push_back(Sequence::interleave_const(witness::square_spikes(), 0.0, p));
    return suite;
}

// Runs classify_upward on every witness and its image. NotMember requires a
// witness that is certified ExactMember while its image is Violated. The
// harness can only falsify membership; it never certifies it.
inline SucEvidenceReport suc_evidence(const RealFunction& f, std::int64_t p,
                                      const std::vector<Sequence>& suite,
                                      const ClassifyParams& params = {}) {
    if (suite.empty()) throw SuiteInvalid("witness suite must be nonempty");
    SucEvidenceReport report;
    report.function_label = f.label();
    report.p = p;
    for (const Sequence& w : suite) {
        SucWitnessEntry entry;
        entry.witness = w.label();
        entry.self = classify_upward(w, p, params);
        if (entry.self.status == Status::Violated)
            throw SuiteInvalid("witness '" + w.label() +
                               "' is itself outside the membership class at p=" +
                               std::to_string(p));
        entry.image = classify_upward(image_sequence(f, w), p, params);
        const bool decisive =
            entry.self.status == Status::ExactMember && entry.image.status == Status::Violated;
        if (decisive && report.overall != SucEvidenceReport::Overall::NotMember) {
            report.overall = SucEvidenceReport::Overall::NotMember;
            report.deciding_witness = entry.witness;
        }
        report.entries.push_back(std::move(entry));
    }
    return report;
}

inline SucEvidenceReport suc_evidence(const RealFunction& f, std::int64_t p,
                                      const ClassifyParams& params = {}) {
    return suc_evidence(f, p, default_suc_suite(p), params);
}

}  // namespace upqc
