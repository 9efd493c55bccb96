#pragma once

#include <charconv>
#include <cstdint>
#include <istream>
#include <ostream>
#include <sstream>
#include <string>
#include <vector>

#include <json.hpp>

#include "upqc/bernstein.hpp"
#include "upqc/classify.hpp"
#include "upqc/equidist.hpp"
#include "upqc/functions.hpp"
#include "upqc/sequence.hpp"

namespace upqc {

inline constexpr const char* kSchemaVersion = "1";

// ---------------------------------------------------------------------------
// CSV. Doubles are written in shortest round-trip form, so emit + ingest is
// bit-exact.

namespace io_detail {

inline std::string fmt(double v) { return Sequence::format_number(v); }

inline double parse_double(const std::string& tok) {
    double v = 0.0;
    const char* begin = tok.data();
    const char* end = tok.data() + tok.size();
    auto res = std::from_chars(begin, end, v);
    if (res.ec != std::errc() || res.ptr != end)
        throw FileError("bad numeric field '" + tok + "'");
    return v;
}

inline std::string trim(const std::string& s) {
    std::size_t a = s.find_first_not_of(" \t\r\n");
    if (a == std::string::npos) return "";
    std::size_t b = s.find_last_not_of(" \t\r\n");
    return s.substr(a, b - a + 1);
}

}  // namespace io_detail

// Sequence CSV: optional "# key: value" metadata comments, then a header
// "n,x" and 1-based contiguous rows. The comments carry the properties the
// generator could declare, so a re-ingested file classifies identically.
inline void write_sequence_csv(std::ostream& os, const Sequence& s, std::int64_t n) {
    if (n < 1) throw BadParams("need at least one row");
    os << "# sequence: " << s.label() << "\n";
    if (s.properties().period) os << "# declared-period: " << *s.properties().period << "\n";
    if (s.properties().nondecreasing) os << "# declared-nondecreasing: true\n";
    os << "n,x\n";
    for (std::int64_t k = 1; k <= n; ++k)
        os << k << "," << io_detail::fmt(s.at(k)) << "\n";
    if (!os) throw FileError("failed writing sequence CSV");
}

inline Sequence read_sequence_csv(std::istream& is) {
    std::string line;
    std::string label = "sampled";
    SequenceProperties props;
    std::optional<std::int64_t> declared_period;
    bool declared_nondecreasing = false;
    bool header_seen = false;
    std::vector<double> values;
    std::int64_t expected = 1;

    while (std::getline(is, line)) {
        const std::string t = io_detail::trim(line);
        if (t.empty()) continue;
        if (t[0] == '#') {
            const std::size_t colon = t.find(':');
            if (colon == std::string::npos) continue;
            const std::string key = io_detail::trim(t.substr(1, colon - 1));
            const std::string val = io_detail::trim(t.substr(colon + 1));
            if (key == "sequence") label = val;
            else if (key == "declared-period") declared_period = std::stoll(val);
            else if (key == "declared-nondecreasing") declared_nondecreasing = (val == "true");
            continue;
        }
        if (!header_seen) {
            if (t != "n,x") throw FileError("sequence CSV must start with header 'n,x'");
            header_seen = true;
            continue;
        }
        const std::size_t comma = t.find(',');
        if (comma == std::string::npos) throw FileError("sequence CSV row missing comma: " + t);
        const std::int64_t k = std::stoll(t.substr(0, comma));
        if (k != expected)
            throw FileError("sequence CSV indices must be 1-based and contiguous, got " +
                            std::to_string(k) + " where " + std::to_string(expected) +
                            " was expected");
        values.push_back(io_detail::parse_double(io_detail::trim(t.substr(comma + 1))));
        ++expected;
    }
    if (!header_seen) throw FileError("sequence CSV has no 'n,x' header");
    if (values.empty()) throw FileError("sequence CSV has no data rows");

    // Declarations are only honored when the data actually exhibits them.
    if (declared_period) {
        const std::int64_t L = *declared_period;
        if (L < 1 || L >= static_cast<std::int64_t>(values.size()))
            throw FileError("declared period does not fit the data");
        for (std::size_t k = 0; k + static_cast<std::size_t>(L) < values.size(); ++k)
            if (values[k] != values[k + static_cast<std::size_t>(L)])
                throw FileError("data contradicts declared period " + std::to_string(L));
        props.period = L;
    }
    if (declared_nondecreasing) {
        for (std::size_t k = 0; k + 1 < values.size(); ++k)
            if (values[k + 1] < values[k])
                throw FileError("data contradicts declared-nondecreasing");
        props.nondecreasing = true;
    }
    return Sequence::sampled(std::move(values), std::move(label), props);
}

// Violation set CSV: "k,d_k" rows for the violating indices.
inline void write_violations_csv(std::ostream& os, const ViolationSet& v,
                                 const std::vector<double>& diffs) {
    os << "k,d_k\n";
    for (const std::int64_t k : v.indices)
        os << k << "," << io_detail::fmt(diffs[static_cast<std::size_t>(k - 1)]) << "\n";
    if (!os) throw FileError("failed writing violations CSV");
}

// Safety table CSV, columns: n,max_undershoot,P,sup_error,status.
inline void write_safety_csv(std::ostream& os, const SafetyTable& table) {
    os << "n,max_undershoot,P,sup_error,status\n";
    for (const SafetyRow& row : table.rows)
        os << row.degree << "," << io_detail::fmt(row.max_undershoot) << ","
           << io_detail::fmt(row.proportion) << "," << io_detail::fmt(row.sup_error) << ","
           << to_string(row.status) << "\n";
    if (!os) throw FileError("failed writing safety CSV");
}

// ---------------------------------------------------------------------------
// JSON reports. Payloads carry no timestamps, so identical runs emit
// identical bytes.

using json = nlohmann::json;

inline json defaults_ledger_json(const ClassifyParams& params) {
    return json{{"floor", params.floor},
                {"grid", params.grid},
                {"eps_list", params.eps_list},
                {"flatness_tol", kFlatnessTol},
                {"density_normalization", "count{k in [1, N-p]} / N, closed comparison"}};
}

inline json rational_json(const Rational& r) {
    return json{{"num", r.num}, {"den", r.den}, {"value", r.value()}};
}

inline json curve_json(const DensityCurve& c) {
    return json{{"grid", c.grid}, {"fractions", c.fractions}, {"trend", to_string(c.trend)}};
}

inline json evidence_json(const std::vector<EpsEvidence>& evidence) {
    json arr = json::array();
    for (const EpsEvidence& e : evidence) {
        json item{{"eps", e.eps}};
        if (e.curve) item["curve"] = curve_json(*e.curve);
        if (e.exact_density) item["exact_density"] = rational_json(*e.exact_density);
        arr.push_back(std::move(item));
    }
    return arr;
}

inline json verdict_json(const std::string& cls, std::int64_t p, const Verdict& v,
                         const ClassifyParams& params) {
    json j{{"class", cls},
           {"status", to_string(v.status)},
           {"p", p},
           {"eps", params.eps_list},
           {"grid", params.grid},
           {"evidence", evidence_json(v.evidence)}};
    // Headline fractions: the reported evidence curve when one exists.
    if (v.reported < v.evidence.size() && v.evidence[v.reported].curve)
        j["fractions"] = v.evidence[v.reported].curve->fractions;
    else
        j["fractions"] = json::array();
    if (v.certificate) {
        json cert{{"kind", v.certificate->kind == Certificate::Kind::Periodic ? "periodic"
                                                                              : "sign_bounded"}};
        if (v.certificate->period) cert["period"] = *v.certificate->period;
        j["certificate"] = std::move(cert);
    } else {
        j["certificate"] = nullptr;
    }
    if (v.witness_eps) j["witness_eps"] = *v.witness_eps;
    if (v.exact_density) j["exact_density"] = rational_json(*v.exact_density);
    return j;
}

inline json classification_report_json(const std::string& sequence_label,
                                       const ClassificationReport& r) {
    json st{{"candidate", r.st_limit.candidate},
            {"status", r.st_limit.limit ? "ConsistentWithMembership" : "Violated"},
            {"evidence", evidence_json(r.st_limit.evidence)},
            {"note", "tail-median candidate; heuristic, never a certificate"}};
    if (r.st_limit.limit) st["limit"] = *r.st_limit.limit;

    return json{{"schema_version", kSchemaVersion},
                {"sequence", sequence_label},
                {"p", r.p},
                {"classes",
                 json{{"upward_p", verdict_json("statistically-upward-quasi-cauchy", r.p,
                                                r.upward_p, r.params)},
                      {"upward_1", verdict_json("statistically-upward-quasi-cauchy", 1,
                                                r.upward_1, r.params)},
                      {"quasi_cauchy", verdict_json("statistically-quasi-cauchy", 1,
                                                    r.symmetric_1, r.params)},
                      {"st_convergent", std::move(st)}}},
                {"defaults", defaults_ledger_json(r.params)}};
}

inline json density_curve_report_json(const std::string& sequence_label, std::int64_t p,
                                      double eps, Mode mode, const DensityCurve& curve) {
    return json{{"schema_version", kSchemaVersion},
                {"sequence", sequence_label},
                {"p", p},
                {"eps", eps},
                {"mode", to_string(mode)},
                {"curve", curve_json(curve)},
                {"flatness_tol", kFlatnessTol},
                {"density_normalization", "count{k in [1, N-p]} / N, closed comparison"}};
}

inline json suc_report_json(const SucEvidenceReport& r, const ClassifyParams& params) {
    json entries = json::array();
    for (const SucWitnessEntry& e : r.entries) {
        entries.push_back(json{
            {"witness", e.witness},
            {"witness_status", to_string(e.self.status)},
            {"image_status", to_string(e.image.status)},
            {"image", verdict_json("statistically-upward-quasi-cauchy", r.p, e.image, params)}});
    }
    json j{{"schema_version", kSchemaVersion},
           {"function", r.function_label},
           {"p", r.p},
           {"overall", to_string(r.overall)},
           {"witnesses", std::move(entries)},
           {"defaults", defaults_ledger_json(params)}};
    if (r.deciding_witness) j["deciding_witness"] = *r.deciding_witness;
    return j;
}

inline json safety_table_json(const SafetyTable& table) {
    json rows = json::array();
    for (const SafetyRow& row : table.rows)
        rows.push_back(json{{"n", row.degree},
                            {"max_undershoot", row.max_undershoot},
                            {"violations", row.violations},
                            {"P", row.proportion},
                            {"sup_error", row.sup_error},
                            {"status", to_string(row.status)}});
    return json{{"schema_version", kSchemaVersion},
                {"epsilon", table.epsilon},
                {"points", table.point_count},
                {"marginal_cut", table.marginal_cut},
                {"rows", std::move(rows)}};
}

inline json arc_report_json(const ArcPrediction& a, double empirical, std::int64_t n) {
    return json{{"schema_version", kSchemaVersion},
                {"p", a.p},
                {"alpha", a.alpha},
                {"eps", a.epsilon},
                {"n", n},
                {"s_p", a.s_p},
                {"r", a.r},
                {"predicted", a.predicted_density},
                {"empirical", empirical},
                {"abs_gap", std::fabs(empirical - a.predicted_density)}};
}

inline json perturb_report_json(const RealFunction& base, const PerturbationParams& params,
                                double empirical, double predicted, std::int64_t n) {
    return json{{"schema_version", kSchemaVersion},
                {"base_function", base.label()},
                {"eps_prime", params.eps_prime},
                {"alpha", params.alpha},
                {"p", params.p},
                {"s_p_alpha", params.s_p_alpha},
                {"c", params.c},
                {"n", n},
                {"empirical", empirical},
                {"predicted", predicted},
                {"abs_gap", std::fabs(empirical - predicted)}};
}

// ---------------------------------------------------------------------------
// FunctionSpec JSON: {kind, params, metadata}. Metadata is recomputed by the
// factories; incoming metadata may only restate what the construction proves.

inline json function_to_json(const RealFunction& f) {
    json params = json::object();
    switch (f.kind()) {
        case RealFunction::Kind::Polynomial:
            params["coeffs"] = f.coefficients();
            break;
        case RealFunction::Kind::SinWave:
            params["amplitude"] = f.param_a();
            params["frequency"] = f.param_b();
            break;
        case RealFunction::Kind::AffineMonotone:
            params["a"] = f.param_a();
            params["b"] = f.param_b();
            break;
        case RealFunction::Kind::PiecewiseLinearMonotone: {
            json pts = json::array();
            for (const auto& [x, y] : f.breakpoints()) pts.push_back(json::array({x, y}));
            params["points"] = std::move(pts);
            break;
        }
        case RealFunction::Kind::Perturbed:
            params["eps_prime"] = f.param_a();
            params["alpha"] = f.param_b();
            params["base"] = function_to_json(*f.perturbed_base());
            break;
        default:
            break;
    }
    const char* kind = nullptr;
    switch (f.kind()) {
        case RealFunction::Kind::Polynomial: kind = "polynomial"; break;
        case RealFunction::Kind::SinWave: kind = "sin_wave"; break;
        case RealFunction::Kind::ArcTan: kind = "arctan"; break;
        case RealFunction::Kind::LogOnePlusExp: kind = "log_one_plus_exp"; break;
        case RealFunction::Kind::SqrtMaxZero: kind = "sqrt_max_zero"; break;
        case RealFunction::Kind::AffineMonotone: kind = "affine_monotone"; break;
        case RealFunction::Kind::PiecewiseLinearMonotone: kind = "piecewise_linear_monotone"; break;
        case RealFunction::Kind::Perturbed: kind = "perturbed"; break;
    }
    json meta = json::object();
    meta["monotone_nondecreasing"] = f.metadata().monotone_nondecreasing;
    if (f.metadata().lipschitz) meta["lipschitz_constant"] = *f.metadata().lipschitz;
    if (f.metadata().bound) meta["bound"] = *f.metadata().bound;
    if (f.metadata().concave) meta["concave"] = *f.metadata().concave;
    return json{{"kind", kind}, {"params", std::move(params)}, {"metadata", std::move(meta)}};
}

inline RealFunction function_from_json(const json& j) {
    if (!j.is_object() || !j.contains("kind"))
        throw MalformedSpec("function JSON needs a 'kind' field");
    const std::string kind = j.at("kind").get<std::string>();
    const json params = j.value("params", json::object());
    if (kind == "polynomial")
        return RealFunction::polynomial(params.at("coeffs").get<std::vector<double>>());
    if (kind == "sin_wave")
        return RealFunction::sin_wave(params.at("amplitude").get<double>(),
                                      params.at("frequency").get<double>());
    if (kind == "arctan") return RealFunction::arctan();
    if (kind == "log_one_plus_exp") return RealFunction::log_one_plus_exp();
    if (kind == "sqrt_max_zero") return RealFunction::sqrt_max_zero();
    if (kind == "affine_monotone")
        return RealFunction::affine_monotone(params.at("a").get<double>(),
                                             params.at("b").get<double>());
    if (kind == "piecewise_linear_monotone") {
        std::vector<std::pair<double, double>> pts;
        for (const auto& pt : params.at("points"))
            pts.emplace_back(pt.at(0).get<double>(), pt.at(1).get<double>());
        return RealFunction::piecewise_linear_monotone(std::move(pts));
    }
    if (kind == "perturbed") {
        const RealFunction base = function_from_json(params.at("base"));
        return RealFunction::perturbed(base, params.at("eps_prime").get<double>(),
                                       params.at("alpha").get<double>());
    }
    throw MalformedSpec("unknown function kind '" + kind + "'");
}

}  // namespace upqc
