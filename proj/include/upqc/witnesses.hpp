#pragma once

#include <cctype>
#include <cmath>
#include <cstdint>
#include <map>
#include <stdexcept>
#include <string>
#include <vector>

#include "upqc/sequence.hpp"

namespace upqc {

// Catalog entry: name, defining rule, parameters, and the properties the
// construction guarantees.
struct WitnessDescriptor {
    std::string name;
    std::vector<std::string> param_names;
    std::string description;
    SequenceProperties declared;
};

namespace witness {

inline Sequence alternating() {
    SequenceProperties props;
    props.period = 2;
    return Sequence::closed_form(
        "alternating", [](std::int64_t k) { return k % 2 == 0 ? 1.0 : -1.0; }, props);
}

inline Sequence linear(double slope, double offset) {
    SequenceProperties props;
    props.nondecreasing = slope >= 0.0;
    props.unbounded = slope != 0.0;
    return Sequence::closed_form(
        "linear(" + Sequence::format_number(slope) + "," + Sequence::format_number(offset) + ")",
        [slope, offset](std::int64_t k) { return slope * static_cast<double>(k) + offset; },
        props, {{"slope", slope}, {"offset", offset}});
}

inline Sequence n_plus_p(std::int64_t p) {
    if (p < 1) throw BadParams("n_plus_p needs p >= 1");
    SequenceProperties props;
    props.nondecreasing = true;
    props.unbounded = true;
    return Sequence::closed_form(
        "n_plus_p(" + std::to_string(p) + ")",
        [p](std::int64_t k) { return static_cast<double>(k + p); }, props,
        {{"p", static_cast<double>(p)}});
}

// x_k = cos(2*pi*k/L); the argument is reduced mod L first, so the period is
// exact in floating point.
inline Sequence cos_rational(std::int64_t L) {
    if (L < 1) throw BadParams("cos_rational needs period L >= 1");
    SequenceProperties props;
    props.period = L;
    return Sequence::closed_form(
        "cos_rational(" + std::to_string(L) + ")",
        [L](std::int64_t k) {
            const std::int64_t r = k % L;
            return std::cos(2.0 * M_PI * static_cast<double>(r) / static_cast<double>(L));
        },
        props, {{"L", static_cast<double>(L)}});
}

inline Sequence sin_integers() {
    return Sequence::closed_form(
        "sin_integers", [](std::int64_t k) { return std::sin(static_cast<double>(k)); }, {});
}

// x_1 = 0, x_{k+1} = x_k - k; closed form x_k = -k(k-1)/2.
inline Sequence decreasing_steps() {
    SequenceProperties props;
    props.unbounded = true;
    return Sequence::closed_form(
        "decreasing_steps",
        [](std::int64_t k) { return static_cast<double>(-(k * (k - 1) / 2)); }, props);
}

// x_1 = 1, x_{k+1} = x_k + k + 1; closed form x_k = k(k+1)/2.
inline Sequence rapid_increasing() {
    SequenceProperties props;
    props.nondecreasing = true;
    props.unbounded = true;
    return Sequence::closed_form(
        "rapid_increasing", [](std::int64_t k) { return static_cast<double>(k * (k + 1) / 2); },
        props);
}

inline Sequence constant(double c) {
    SequenceProperties props;
    props.period = 1;
    props.nondecreasing = true;
    return Sequence::closed_form(
        "constant(" + Sequence::format_number(c) + ")", [c](std::int64_t) { return c; }, props,
        {{"c", c}});
}

// x_k = 1 at perfect squares, 0 elsewhere. Statistically convergent to 0.
inline Sequence square_spikes() {
    return Sequence::closed_form(
        "square_spikes",
        [](std::int64_t k) {
            std::int64_t r = static_cast<std::int64_t>(std::llround(std::sqrt(static_cast<double>(k))));
            while (r * r > k) --r;
            while ((r + 1) * (r + 1) <= k) ++r;
            return r * r == k ? 1.0 : 0.0;
        },
        {});
}

}  // namespace witness

inline const std::vector<WitnessDescriptor>& witness_catalog() {
    static const std::vector<WitnessDescriptor> catalog = [] {
        std::vector<WitnessDescriptor> c;
        auto add = [&](std::string name, std::vector<std::string> params, std::string desc,
                       const Sequence& probe) {
            c.push_back({std::move(name), std::move(params), std::move(desc), probe.properties()});
        };
        add("alternating", {}, "x_k = (-1)^k", witness::alternating());
        add("linear", {"slope", "offset"}, "x_k = slope*k + offset", witness::linear(1, 0));
        add("n_plus_p", {"p"}, "x_k = k + p", witness::n_plus_p(1));
        add("cos_rational", {"L"}, "x_k = cos(2*pi*k/L)", witness::cos_rational(3));
        add("sin_integers", {}, "x_k = sin(k)", witness::sin_integers());
        add("decreasing_steps", {}, "x_1 = 0, x_{k+1} = x_k - k", witness::decreasing_steps());
        add("rapid_increasing", {}, "x_1 = 1, x_{k+1} = x_k + k + 1",
            witness::rapid_increasing());
        add("constant", {"c"}, "x_k = c", witness::constant(0));
        add("square_spikes", {}, "x_k = 1 if k is a perfect square else 0",
            witness::square_spikes());
        return c;
    }();
    return catalog;
}

// Positional-parameter builtin factory backing the CLI and the JSON surface.
inline Sequence make_builtin(const std::string& name, const std::vector<double>& params = {}) {
    auto need = [&](std::size_t n) {
        if (params.size() != n)
            throw BadParams("witness '" + name + "' takes " + std::to_string(n) +
                            " parameter(s), got " + std::to_string(params.size()));
    };
    auto integer_param = [&](double v, const char* what) {
        if (!(v >= 1.0) || v != std::floor(v) || v > 1e15)
            throw BadParams(std::string(what) + " must be a positive integer");
        return static_cast<std::int64_t>(v);
    };
    if (name == "alternating") {
        need(0);
        return witness::alternating();
    }
    if (name == "linear") {
        if (params.size() > 2) need(2);
        const double slope = params.size() > 0 ? params[0] : 1.0;
        const double offset = params.size() > 1 ? params[1] : 0.0;
        return witness::linear(slope, offset);
    }
    if (name == "n_plus_p") {
        need(1);
        return witness::n_plus_p(integer_param(params[0], "p"));
    }
    if (name == "cos_rational") {
        need(1);
        return witness::cos_rational(integer_param(params[0], "L"));
    }
    if (name == "sin_integers") {
        need(0);
        return witness::sin_integers();
    }
    if (name == "decreasing_steps") {
        need(0);
        return witness::decreasing_steps();
    }
    if (name == "rapid_increasing") {
        need(0);
        return witness::rapid_increasing();
    }
    if (name == "constant") {
        need(1);
        return witness::constant(params[0]);
    }
    if (name == "square_spikes") {
        need(0);
        return witness::square_spikes();
    }
    throw UnknownWitness("no builtin sequence named '" + name + "'");
}

// Combinator factory mirroring the spec surface of the sequence tree.
enum class CombineOp { Sum, Scale, Negate, Shift };

inline Sequence combine(CombineOp op, const std::vector<Sequence>& specs, double arg = 0.0) {
    switch (op) {
        case CombineOp::Sum: {
            if (specs.size() < 2) throw MalformedSpec("sum needs at least two sequences");
            Sequence acc = specs[0];
            for (std::size_t i = 1; i < specs.size(); ++i) acc = Sequence::sum(acc, specs[i]);
            return acc;
        }
        case CombineOp::Scale:
            if (specs.size() != 1) throw MalformedSpec("scale takes one sequence");
            return Sequence::scale(arg, specs[0]);
        case CombineOp::Negate:
            if (specs.size() != 1) throw MalformedSpec("negate takes one sequence");
            return Sequence::negate(specs[0]);
        case CombineOp::Shift: {
            if (specs.size() != 1) throw MalformedSpec("shift takes one sequence");
            const double d = arg;
            if (d < 0 || d != std::floor(d)) throw BadParams("shift offset must be an integer >= 0");
            return Sequence::shift(static_cast<std::int64_t>(d), specs[0]);
        }
    }
    throw MalformedSpec("unknown combinator");
}

inline Sequence repeat_blocks(const Sequence& s, std::int64_t p) {
    return Sequence::repeat_blocks(s, p);
}
inline Sequence interleave_with_constant(const Sequence& s, double ell, std::int64_t p,
                                         BlockOrder order = BlockOrder::XFirst) {
    return Sequence::interleave_const(s, ell, p, order);
}
inline Sequence shifted_interleave(const Sequence& s, std::int64_t p) {
    return Sequence::shifted_interleave(s, p);
}

// ---------------------------------------------------------------------------
// Tiny recursive-descent parser for sequence expressions, e.g.
//   "sum(linear(1,0),scale(-1,alternating))" or "repeat(linear(1,0),3)".
// Used by the CLI; whitespace is ignored.

namespace detail {

class SpecParser {
public:
    explicit SpecParser(const std::string& text) : text_(text) {}

    Sequence parse() {
        Sequence s = parse_expr();
        skip_ws();
        if (pos_ != text_.size())
            throw MalformedSpec("trailing input in sequence expression: '" +
                                text_.substr(pos_) + "'");
        return s;
    }

private:
    const std::string& text_;
    std::size_t pos_ = 0;

    void skip_ws() {
        while (pos_ < text_.size() && std::isspace(static_cast<unsigned char>(text_[pos_]))) ++pos_;
    }
    bool consume(char c) {
        skip_ws();
        if (pos_ < text_.size() && text_[pos_] == c) {
            ++pos_;
            return true;
        }
        return false;
    }
    void expect(char c) {
        if (!consume(c))
            throw MalformedSpec(std::string("expected '") + c + "' in sequence expression");
    }

    std::string parse_ident() {
        skip_ws();
        std::size_t start = pos_;
        while (pos_ < text_.size() &&
               (std::isalnum(static_cast<unsigned char>(text_[pos_])) || text_[pos_] == '_'))
            ++pos_;
        if (start == pos_) throw MalformedSpec("expected a name in sequence expression");
        return text_.substr(start, pos_ - start);
    }

    double parse_number() {
        skip_ws();
        std::size_t start = pos_;
        while (pos_ < text_.size() &&
               (std::isdigit(static_cast<unsigned char>(text_[pos_])) || text_[pos_] == '+' ||
                text_[pos_] == '-' || text_[pos_] == '.' || text_[pos_] == 'e' ||
                text_[pos_] == 'E'))
            ++pos_;
        if (start == pos_) throw MalformedSpec("expected a number in sequence expression");
        const std::string tok = text_.substr(start, pos_ - start);
        try {
            std::size_t used = 0;
            const double v = std::stod(tok, &used);
            if (used != tok.size()) throw std::invalid_argument(tok);
            return v;
        } catch (const std::exception&) {
            throw MalformedSpec("bad number '" + tok + "' in sequence expression");
        }
    }

    std::int64_t parse_int(const char* what) {
        const double v = parse_number();
        if (v != std::floor(v) || std::fabs(v) > 1e15)
            throw MalformedSpec(std::string(what) + " must be an integer");
        return static_cast<std::int64_t>(v);
    }

    Sequence parse_expr() {
        const std::string name = parse_ident();
        if (name == "sum") {
            expect('(');
            Sequence a = parse_expr();
            expect(',');
            Sequence b = parse_expr();
            Sequence acc = Sequence::sum(a, b);
            while (consume(',')) acc = Sequence::sum(acc, parse_expr());
            expect(')');
            return acc;
        }
        if (name == "scale") {
            expect('(');
            const double alpha = parse_number();
            expect(',');
            Sequence a = parse_expr();
            expect(')');
            return Sequence::scale(alpha, a);
        }
        if (name == "negate") {
            expect('(');
            Sequence a = parse_expr();
            expect(')');
            return Sequence::negate(a);
        }
        if (name == "shift") {
            expect('(');
            const std::int64_t d = parse_int("shift offset");
            expect(',');
            Sequence a = parse_expr();
            expect(')');
            return Sequence::shift(d, a);
        }
        if (name == "repeat") {
            expect('(');
            Sequence a = parse_expr();
            expect(',');
            const std::int64_t p = parse_int("block length");
            expect(')');
            return Sequence::repeat_blocks(a, p);
        }
        if (name == "interleave") {
            expect('(');
            Sequence a = parse_expr();
            expect(',');
            const double ell = parse_number();
            expect(',');
            const std::int64_t p = parse_int("block length");
            BlockOrder order = BlockOrder::XFirst;
            if (consume(',')) {
                const std::string o = parse_ident();
                if (o == "xfirst")
                    order = BlockOrder::XFirst;
                else if (o == "constfirst")
                    order = BlockOrder::ConstFirst;
                else
                    throw MalformedSpec("interleave order must be xfirst or constfirst");
            }
            expect(')');
            return Sequence::interleave_const(a, ell, p, order);
        }
        if (name == "shifted_interleave") {
            expect('(');
            Sequence a = parse_expr();
            expect(',');
            const std::int64_t p = parse_int("block length");
            expect(')');
            return Sequence::shifted_interleave(a, p);
        }
        // Builtin witness, optionally with positional numeric parameters.
        std::vector<double> params;
        if (consume('(')) {
            if (!consume(')')) {
                params.push_back(parse_number());
                while (consume(',')) params.push_back(parse_number());
                expect(')');
            }
        }
        return make_builtin(name, params);
    }
};

}  // namespace detail

inline Sequence parse_sequence_expr(const std::string& text) {
    return detail::SpecParser(text).parse();
}

}  // namespace upqc
