#pragma once

#include <algorithm>
#include <charconv>
#include <cmath>
#include <cstdint>
#include <functional>
#include <limits>
#include <map>
#include <memory>
#include <numeric>
#include <optional>
#include <span>
#include <string>
#include <utility>
#include <variant>
#include <vector>

#include "upqc/defaults.hpp"
#include "upqc/errors.hpp"
#include "upqc/rational.hpp"

namespace upqc {

enum class Mode { Upward, Symmetric };
enum class Trend { Decreasing, Increasing, Flat, Mixed };
enum class BlockOrder { XFirst, ConstFirst };

inline const char* to_string(Mode m) { return m == Mode::Upward ? "upward" : "symmetric"; }
inline const char* to_string(Trend t) {
    switch (t) {
        case Trend::Decreasing: return "decreasing";
        case Trend::Increasing: return "increasing";
        case Trend::Flat: return "flat";
        default: return "mixed";
    }
}

// Structural facts about a sequence that are true by construction, not
// inferred from samples. They propagate through combinators.
struct SequenceProperties {
    // Exact period L: x_k == x_{k+L} bit-for-bit for all k.
    std::optional<std::int64_t> period;
    // x_{k+1} >= x_k for all k; implies x_k - x_{k+p} <= 0 for every p.
    bool nondecreasing = false;
    bool unbounded = false;
};

// An immutable real sequence, indexed from 1. Leaves are either finite
// sampled data or a closed form; interior nodes are the combinators.
class Sequence {
    struct Node;
    using NodePtr = std::shared_ptr<const Node>;

    struct SampledData {
        std::vector<double> values;
    };
    struct ClosedData {
        std::function<double(std::int64_t)> eval;
        std::map<std::string, double> params;
    };
    struct SumData {
        NodePtr lhs, rhs;
    };
    struct ScaleData {
        double alpha;
        NodePtr child;
    };
    struct NegateData {
        NodePtr child;
    };
    struct ShiftData {
        std::int64_t offset;
        NodePtr child;
    };
    struct RepeatData {
        std::int64_t block;
        NodePtr child;
    };
    struct InterleaveData {
        double ell;
        std::int64_t block;
        BlockOrder order;
        NodePtr child;
    };
    struct ShiftedInterleaveData {
        std::int64_t block;
        NodePtr child;
    };
    struct MappedData {
        std::function<double(double)> fn;
        NodePtr child;
    };

    struct Node {
        std::variant<SampledData, ClosedData, SumData, ScaleData, NegateData, ShiftData,
                     RepeatData, InterleaveData, ShiftedInterleaveData, MappedData>
            data;
        SequenceProperties props;
        std::string label;
        std::optional<std::int64_t> length;  // finite when backed by sampled data
    };

    NodePtr node_;

    explicit Sequence(NodePtr n) : node_(std::move(n)) {}

    static double eval_node(const Node& n, std::int64_t k) {
        return std::visit(
            [&](const auto& d) -> double {
                using T = std::decay_t<decltype(d)>;
                if constexpr (std::is_same_v<T, SampledData>) {
                    if (k > static_cast<std::int64_t>(d.values.size()))
                        throw OutOfRange("sampled sequence of length " +
                                         std::to_string(d.values.size()) +
                                         " evaluated at k=" + std::to_string(k));
                    return d.values[static_cast<std::size_t>(k - 1)];
                } else if constexpr (std::is_same_v<T, ClosedData>) {
                    return d.eval(k);
                } else if constexpr (std::is_same_v<T, SumData>) {
                    return eval_node(*d.lhs, k) + eval_node(*d.rhs, k);
                } else if constexpr (std::is_same_v<T, ScaleData>) {
                    return d.alpha * eval_node(*d.child, k);
                } else if constexpr (std::is_same_v<T, NegateData>) {
                    return -eval_node(*d.child, k);
                } else if constexpr (std::is_same_v<T, ShiftData>) {
                    return eval_node(*d.child, k + d.offset);
                } else if constexpr (std::is_same_v<T, RepeatData>) {
                    return eval_node(*d.child, (k - 1) / d.block + 1);
                } else if constexpr (std::is_same_v<T, InterleaveData>) {
                    const std::int64_t b = (k - 1) / d.block + 1;  // 1-based block index
                    const bool x_block =
                        (d.order == BlockOrder::XFirst) ? (b % 2 == 1) : (b % 2 == 0);
                    if (!x_block) return d.ell;
                    const std::int64_t j = (d.order == BlockOrder::XFirst) ? (b + 1) / 2 : b / 2;
                    return eval_node(*d.child, j);
                } else if constexpr (std::is_same_v<T, ShiftedInterleaveData>) {
                    const std::int64_t b = (k - 1) / d.block + 1;
                    const std::int64_t j = (b + 1) / 2;  // pair index
                    return eval_node(*d.child, (b % 2 == 1) ? j + 1 : j);
                } else {
                    static_assert(std::is_same_v<T, MappedData>);
                    return d.fn(eval_node(*d.child, k));
                }
            },
            n.data);
    }

    static std::optional<std::int64_t> lcm_period(const std::optional<std::int64_t>& a,
                                                  const std::optional<std::int64_t>& b) {
        if (!a || !b) return std::nullopt;
        const std::int64_t l = std::lcm(*a, *b);
        // Give up on absurd combined periods rather than overflow.
        if (l <= 0 || l > (1LL << 40)) return std::nullopt;
        return l;
    }

public:
    double at(std::int64_t k) const {
        if (k < 1) throw OutOfRange("sequence index must be >= 1, got " + std::to_string(k));
        return eval_node(*node_, k);
    }
    double operator()(std::int64_t k) const { return at(k); }

    // x_1..x_n as a contiguous buffer.
    std::vector<double> prefix(std::int64_t n) const {
        if (n < 1) throw BadParams("prefix length must be >= 1");
        std::vector<double> out;
        out.reserve(static_cast<std::size_t>(n));
        for (std::int64_t k = 1; k <= n; ++k) out.push_back(at(k));
        return out;
    }

    const SequenceProperties& properties() const { return node_->props; }
    const std::string& label() const { return node_->label; }
    std::optional<std::int64_t> length() const { return node_->length; }

    // --- leaf factories -----------------------------------------------------

    static Sequence sampled(std::vector<double> values, std::string label = "sampled",
                            SequenceProperties props = {}) {
        if (values.empty()) throw MalformedSpec("sampled sequence must be nonempty");
        auto n = std::make_shared<Node>();
        const auto len = static_cast<std::int64_t>(values.size());
        n->data = SampledData{std::move(values)};
        n->props = props;
        n->label = std::move(label);
        n->length = len;
        return Sequence(std::move(n));
    }

    static Sequence closed_form(std::string label, std::function<double(std::int64_t)> eval,
                                SequenceProperties props = {},
                                std::map<std::string, double> params = {}) {
        if (!eval) throw MalformedSpec("closed-form sequence needs an evaluator");
        auto n = std::make_shared<Node>();
        n->data = ClosedData{std::move(eval), std::move(params)};
        n->props = props;
        n->label = std::move(label);
        n->length = std::nullopt;
        return Sequence(std::move(n));
    }

    // --- combinators ----------------------------------------------------------
    // Pointwise sum. Period: lcm of child periods; nondecreasing if both are.

    static Sequence sum(const Sequence& a, const Sequence& b) {
        auto n = std::make_shared<Node>();
        n->data = SumData{a.node_, b.node_};
        n->props.period = lcm_period(a.properties().period, b.properties().period);
        n->props.nondecreasing = a.properties().nondecreasing && b.properties().nondecreasing;
        n->props.unbounded = a.properties().unbounded || b.properties().unbounded;
        n->label = "sum(" + a.label() + "," + b.label() + ")";
        if (a.length() || b.length())
            n->length = std::min(a.length().value_or(INT64_MAX), b.length().value_or(INT64_MAX));
        return Sequence(std::move(n));
    }

    static Sequence scale(double alpha, const Sequence& s) {
        auto n = std::make_shared<Node>();
        n->data = ScaleData{alpha, s.node_};
        n->props.period = s.properties().period;
        n->props.nondecreasing = alpha >= 0.0 && s.properties().nondecreasing;
        n->props.unbounded = alpha != 0.0 && s.properties().unbounded;
        n->label = "scale(" + format_number(alpha) + "," + s.label() + ")";
        n->length = s.length();
        return Sequence(std::move(n));
    }

    static Sequence negate(const Sequence& s) {
        auto n = std::make_shared<Node>();
        n->data = NegateData{s.node_};
        n->props.period = s.properties().period;
        n->props.unbounded = s.properties().unbounded;
        n->label = "negate(" + s.label() + ")";
        n->length = s.length();
        return Sequence(std::move(n));
    }

    // y_k = x_{k+d}, d >= 0.
    static Sequence shift(std::int64_t d, const Sequence& s) {
        if (d < 0) throw BadParams("shift offset must be >= 0");
        auto n = std::make_shared<Node>();
        n->data = ShiftData{d, s.node_};
        n->props = s.properties();
        n->label = "shift(" + std::to_string(d) + "," + s.label() + ")";
        if (s.length()) {
            if (*s.length() <= d) throw MalformedSpec("shift exceeds sampled length");
            n->length = *s.length() - d;
        }
        return Sequence(std::move(n));
    }

    // y = (x_1^p, x_2^p, x_3^p, ...): each term repeated p times.
    static Sequence repeat_blocks(const Sequence& s, std::int64_t p) {
        if (p < 1) throw BadParams("block length must be >= 1");
        auto n = std::make_shared<Node>();
        n->data = RepeatData{p, s.node_};
        if (s.properties().period) n->props.period = *s.properties().period * p;
        n->props.nondecreasing = s.properties().nondecreasing;
        n->props.unbounded = s.properties().unbounded;
        n->label = "repeat(" + s.label() + "," + std::to_string(p) + ")";
        if (s.length()) n->length = *s.length() * p;
        return Sequence(std::move(n));
    }

    // XFirst: (x_1^p, ell^p, x_2^p, ell^p, ...); ConstFirst starts with ell^p.
    static Sequence interleave_const(const Sequence& s, double ell, std::int64_t p,
                                     BlockOrder order = BlockOrder::XFirst) {
        if (p < 1) throw BadParams("block length must be >= 1");
        auto n = std::make_shared<Node>();
        n->data = InterleaveData{ell, p, order, s.node_};
        if (s.properties().period) n->props.period = 2 * p * *s.properties().period;
        n->props.unbounded = s.properties().unbounded;
        n->label = "interleave(" + s.label() + "," + format_number(ell) + "," +
                   std::to_string(p) + "," +
                   (order == BlockOrder::XFirst ? "xfirst" : "constfirst") + ")";
        if (s.length())
            n->length = (order == BlockOrder::XFirst) ? 2 * p * *s.length()
                                                      : (2 * *s.length() + 1) * p;
        return Sequence(std::move(n));
    }

    // Block order (x_2^p, x_1^p, x_3^p, x_2^p, ...): pair j holds x_{j+1} then x_j.
    static Sequence shifted_interleave(const Sequence& s, std::int64_t p) {
        if (p < 1) throw BadParams("block length must be >= 1");
        auto n = std::make_shared<Node>();
        n->data = ShiftedInterleaveData{p, s.node_};
        if (s.properties().period) n->props.period = 2 * p * *s.properties().period;
        n->props.unbounded = s.properties().unbounded;
        n->label = "shifted_interleave(" + s.label() + "," + std::to_string(p) + ")";
        if (s.length()) {
            if (*s.length() < 2) throw MalformedSpec("shifted interleave needs length >= 2");
            n->length = 2 * p * (*s.length() - 1);
        }
        return Sequence(std::move(n));
    }

    // y_k = fn(x_k). Used for image sequences under a real function.
    static Sequence mapped(std::function<double(double)> fn, bool fn_nondecreasing,
                           std::string fn_label, const Sequence& s) {
        if (!fn) throw MalformedSpec("mapped sequence needs a function");
        auto n = std::make_shared<Node>();
        n->data = MappedData{std::move(fn), s.node_};
        n->props.period = s.properties().period;
        n->props.nondecreasing = fn_nondecreasing && s.properties().nondecreasing;
        n->label = "image(" + fn_label + "," + s.label() + ")";
        n->length = s.length();
        return Sequence(std::move(n));
    }

    static std::string format_number(double v);
};

// ---------------------------------------------------------------------------
// Step parameters and violation sets.

struct StepParams {
    std::int64_t p = 1;       // step
    double epsilon = 1.0;     // threshold
    std::int64_t n = 1000;    // prefix length

    StepParams() = default;
    StepParams(std::int64_t p_, double eps_, std::int64_t n_) : p(p_), epsilon(eps_), n(n_) {
        validate();
    }
    void validate() const {
        if (p < 1) throw BadParams("step p must be >= 1");
        if (!(epsilon > 0.0)) throw BadParams("epsilon must be > 0");
        if (n <= p) throw BadParams("prefix length must exceed the step");
    }
};

// Indices k in [1, N-p] where the step difference meets the threshold.
// The comparison is closed (>=): boundary ties count.
struct ViolationSet {
    std::vector<std::int64_t> indices;
    std::int64_t n = 0;
    std::int64_t p = 1;
    double epsilon = 0.0;
    Mode mode = Mode::Upward;

    std::int64_t count() const { return static_cast<std::int64_t>(indices.size()); }
};

struct DensityCurve {
    std::vector<std::int64_t> grid;
    std::vector<double> fractions;
    Trend trend = Trend::Flat;
};

// ---------------------------------------------------------------------------
// Operations.

inline double eval_sequence(const Sequence& s, std::int64_t k) { return s.at(k); }

// d_k = x_k - x_{k+p} for k = 1..n-p.
inline std::vector<double> p_step_differences(const Sequence& s, std::int64_t p, std::int64_t n) {
    if (p < 1) throw BadParams("step p must be >= 1");
    if (n <= p) throw BadParams("prefix length must exceed the step");
    const std::vector<double> x = s.prefix(n);
    std::vector<double> d;
    d.reserve(static_cast<std::size_t>(n - p));
    for (std::int64_t k = 1; k <= n - p; ++k)
        d.push_back(x[static_cast<std::size_t>(k - 1)] - x[static_cast<std::size_t>(k + p - 1)]);
    return d;
}

inline bool violates(double diff, double eps, Mode mode) {
    return mode == Mode::Upward ? diff >= eps : std::fabs(diff) >= eps;
}

inline ViolationSet violation_set(const Sequence& s, const StepParams& params,
                                  Mode mode = Mode::Upward) {
    params.validate();
    ViolationSet v;
    v.n = params.n;
    v.p = params.p;
    v.epsilon = params.epsilon;
    v.mode = mode;
    const std::vector<double> d = p_step_differences(s, params.p, params.n);
    for (std::int64_t k = 1; k <= params.n - params.p; ++k)
        if (violates(d[static_cast<std::size_t>(k - 1)], params.epsilon, mode))
            v.indices.push_back(k);
    return v;
}

// |V| / N. The denominator is the full prefix length N, not N-p, so densities
// stay comparable across steps; reports record this normalization.
inline double prefix_density(const ViolationSet& v) {
    return static_cast<double>(v.count()) / static_cast<double>(v.n);
}

// Trend label from the last (up to) three fractions with an absolute flatness
// tolerance.
inline Trend trend_of(std::span<const double> fractions, double tol = kFlatnessTol) {
    const std::size_t m = fractions.size();
    if (m < 2) return Trend::Flat;
    const std::size_t first = m >= 3 ? m - 3 : 0;
    bool has_up = false, has_down = false;
    for (std::size_t i = first + 1; i < m; ++i) {
        const double diff = fractions[i] - fractions[i - 1];
        if (diff > tol) has_up = true;
        if (diff < -tol) has_down = true;
    }
    if (!has_up && !has_down) return Trend::Flat;
    if (has_up && has_down) return Trend::Mixed;
    return has_up ? Trend::Increasing : Trend::Decreasing;
}

// Violation fractions along an increasing grid of prefix lengths. Evaluates
// the longest prefix once; equivalent to violation_set + prefix_density at
// each grid point.
inline DensityCurve density_curve(const Sequence& s, std::int64_t p, double eps,
                                  std::span<const std::int64_t> grid, Mode mode = Mode::Upward) {
    if (grid.empty()) throw BadParams("grid must be nonempty");
    for (std::size_t i = 0; i < grid.size(); ++i) {
        if (grid[i] <= p) throw BadParams("every grid N must exceed the step");
        if (i > 0 && grid[i] <= grid[i - 1]) throw BadParams("grid must be strictly increasing");
    }
    if (!(eps > 0.0)) throw BadParams("epsilon must be > 0");

    const std::int64_t max_n = grid.back();
    const std::vector<double> x = s.prefix(max_n);
    DensityCurve curve;
    curve.grid.assign(grid.begin(), grid.end());
    std::int64_t count = 0;
    std::size_t gi = 0;
    for (std::int64_t k = 1; k <= max_n && gi < grid.size(); ++k) {
        if (k + p <= max_n) {
            const double d =
                x[static_cast<std::size_t>(k - 1)] - x[static_cast<std::size_t>(k + p - 1)];
            if (violates(d, eps, mode)) ++count;
        }
        // k indexes the last difference position that contributes to grid[gi].
        while (gi < grid.size() && k == grid[gi] - p) {
            curve.fractions.push_back(static_cast<double>(count) /
                                      static_cast<double>(grid[gi]));
            ++gi;
        }
    }
    curve.trend = trend_of(curve.fractions);
    return curve;
}

// Exact density over one declared period: |{k in [1,L]: d_k meets eps}| / L.
// Requires a structurally known period (builtin or period-preserving
// combinators over one).
inline Rational exact_period_density(const Sequence& s, std::int64_t p, double eps,
                                     Mode mode = Mode::Upward) {
    if (p < 1) throw BadParams("step p must be >= 1");
    if (!(eps > 0.0)) throw BadParams("epsilon must be > 0");
    const auto period = s.properties().period;
    if (!period) throw NotPeriodic("sequence '" + s.label() + "' has no declared period");
    const std::int64_t L = *period;
    std::int64_t count = 0;
    for (std::int64_t k = 1; k <= L; ++k)
        if (violates(s.at(k) - s.at(k + p), eps, mode)) ++count;
    return Rational(count, L);
}

// Max step difference over one period (largest |d| in Symmetric mode).
// For a periodic sequence this decides true class membership: the upward
// violation density is zero for every eps iff the max difference is <= 0.
inline double period_max_difference(const Sequence& s, std::int64_t p, Mode mode = Mode::Upward) {
    const auto period = s.properties().period;
    if (!period) throw NotPeriodic("sequence '" + s.label() + "' has no declared period");
    double best = -std::numeric_limits<double>::infinity();
    for (std::int64_t k = 1; k <= *period; ++k) {
        const double d = s.at(k) - s.at(k + p);
        best = std::max(best, mode == Mode::Upward ? d : std::fabs(d));
    }
    return best;
}

inline std::string Sequence::format_number(double v) {
    // Shortest exact decimal form, reused by labels and CSV output.
    char buf[32];
    auto res = std::to_chars(buf, buf + sizeof(buf), v);
    return std::string(buf, res.ptr);
}

}  // namespace upqc
