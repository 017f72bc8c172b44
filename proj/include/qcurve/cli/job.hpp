#pragma once

#include <fstream>
#include <map>
#include <optional>
#include <sstream>
#include <stdexcept>
#include <string>
#include <utility>

#include <nlohmann/json.hpp>
#include <tomlplusplus/toml.hpp>

#include "qcurve/diffalg/operator.hpp"
#include "qcurve/diffalg/substitute.hpp"
#include "qcurve/errors.hpp"
#include "qcurve/exactnum/expr.hpp"
#include "qcurve/exactnum/json.hpp"
#include "qcurve/quantize/quantize.hpp"
#include "qcurve/spectral/spectral.hpp"
#include "qcurve/tds/tds.hpp"
#include "qcurve/toprec/dvv.hpp"
#include "qcurve/toprec/toprec.hpp"
#include "qcurve/wkb/wkb.hpp"

namespace qcurve {

struct CurveSpec {
    std::string builtin;
    std::string x;
    std::string y;

    bool is_airy() const { return builtin == "airy"; }
};

struct JobSpec {
    std::string command;
    std::optional<int> rank;
    std::map<int, std::string> q_assignments;
    std::optional<int> level;
    std::optional<int> order;
    std::optional<CurveSpec> curve;
    std::optional<std::string> q;
    std::optional<int> branch;
    std::optional<int> truncation;
    std::optional<DivisorData> divisor;
};

struct JobResult {
    nlohmann::json report;
    int exit_code = 0;
};

inline const std::vector<std::string> &job_commands()
{
    static const std::vector<std::string> names{"quantize", "scl", "geometry", "toprec", "wkb", "crosscheck"};
    return names;
}

namespace detail {

inline int parse_level_key(const std::string &key)
{
    std::string digits = key;
    if (!digits.empty() && digits.front() == 'q') {
        digits.erase(0, 1);
    }
    if (digits.empty() || digits.find_first_not_of("0123456789") != std::string::npos) {
        throw std::invalid_argument("q assignment key '" + key + "' is not a level");
    }
    return std::stoi(digits);
}

inline std::vector<DivisorPoint> points_from_json(const nlohmann::json &j)
{
    std::vector<DivisorPoint> out;
    for (const auto &p : j) {
        if (p.is_array()) {
            out.push_back({p.at(0).get<std::string>(), p.at(1).get<int>()});
        } else {
            out.push_back({p.at("label").get<std::string>(), p.at("multiplicity").get<int>()});
        }
    }
    return out;
}

template <typename T>
std::optional<T> optional_field(const nlohmann::json &j, const char *key)
{
    if (!j.contains(key) || j.at(key).is_null()) {
        return std::nullopt;
    }
    return j.at(key).get<T>();
}

// TOML tables and arrays as JSON values.
inline nlohmann::json toml_to_json(const toml::node &n)
{
    if (const auto *t = n.as_table()) {
        nlohmann::json out = nlohmann::json::object();
        for (const auto &[k, v] : *t) {
            out[std::string(k.str())] = toml_to_json(v);
        }
        return out;
    }
    if (const auto *a = n.as_array()) {
        nlohmann::json out = nlohmann::json::array();
        for (const auto &v : *a) {
            out.push_back(toml_to_json(v));
        }
        return out;
    }
    if (const auto *s = n.as_string()) {
        return s->get();
    }
    if (const auto *i = n.as_integer()) {
        return i->get();
    }
    if (const auto *b = n.as_boolean()) {
        return b->get();
    }
    if (const auto *f = n.as_floating_point()) {
        return f->get();
    }
    throw std::invalid_argument("unsupported TOML value");
}

} // namespace detail

inline JobSpec job_from_json(const nlohmann::json &j)
{
    if (!j.is_object()) {
        throw std::invalid_argument("job spec must be an object");
    }
    try {
        JobSpec spec;
        spec.command = j.value("command", std::string());
        spec.rank = detail::optional_field<int>(j, "rank");
        spec.level = detail::optional_field<int>(j, "level");
        spec.order = detail::optional_field<int>(j, "order");
        if (!spec.order) {
            spec.order = detail::optional_field<int>(j, "M");
        }
        spec.q = detail::optional_field<std::string>(j, "q");
        spec.branch = detail::optional_field<int>(j, "branch");
        spec.truncation = detail::optional_field<int>(j, "truncation");
        if (j.contains("q_assignments")) {
            for (const auto &[k, v] : j.at("q_assignments").items()) {
                spec.q_assignments[detail::parse_level_key(k)] = v.get<std::string>();
            }
        }
        if (j.contains("curve")) {
            const auto &c = j.at("curve");
            CurveSpec curve;
            if (c.is_string()) {
                curve.builtin = c.get<std::string>();
            } else if (c.contains("q")) {
                spec.q = c.at("q").get<std::string>();
            } else {
                curve.x = c.at("x").get<std::string>();
                curve.y = c.at("y").get<std::string>();
            }
            if (!c.is_object() || !c.contains("q")) {
                spec.curve = curve;
            }
        }
        if (j.contains("divisor")) {
            const auto &d = j.at("divisor");
            DivisorData div;
            div.base_genus = d.value("base_genus", 0);
            div.zeros = detail::points_from_json(d.value("zeros", nlohmann::json::array()));
            div.poles = detail::points_from_json(d.value("poles", nlohmann::json::array()));
            spec.divisor = div;
        }
        return spec;
    } catch (const nlohmann::json::exception &e) {
        throw std::invalid_argument(std::string("malformed job spec: ") + e.what());
    }
}

inline JobSpec job_from_text(const std::string &text, const std::string &format)
{
    if (format == "json") {
        try {
            return job_from_json(nlohmann::json::parse(text));
        } catch (const nlohmann::json::parse_error &e) {
            throw std::invalid_argument(std::string("malformed JSON job: ") + e.what());
        }
    }
    if (format == "toml") {
        try {
            return job_from_json(detail::toml_to_json(toml::parse(text)));
        } catch (const toml::parse_error &e) {
            std::ostringstream os;
            os << "malformed TOML job: " << e.description() << " at " << e.source().begin;
            throw std::invalid_argument(os.str());
        }
    }
    throw std::invalid_argument("unknown job format '" + format + "' (expected json or toml)");
}

inline JobSpec job_from_file(const std::string &path, std::string format = {})
{
    std::ifstream in(path);
    if (!in) {
        throw std::invalid_argument("cannot read job file " + path);
    }
    std::ostringstream buf;
    buf << in.rdbuf();
    if (format.empty()) {
        format = path.size() >= 5 && path.substr(path.size() - 5) == ".toml" ? "toml" : "json";
    }
    return job_from_text(buf.str(), format);
}

namespace detail {

inline int require(const std::optional<int> &v, const char *what)
{
    if (!v) {
        throw std::invalid_argument(std::string("missing required field '") + what + "'");
    }
    return *v;
}

// c * t^k numerator / monomial denominator -> Laurent polynomial
inline Laurent laurent_from_text(const std::string &text, const char *var)
{
    const auto f = parse_rational_function(text, var);
    const auto &den = f.denominator();
    if (den.valuation() != den.degree()) {
        throw DomainError("'" + text + "' is not a Laurent polynomial in " + var);
    }
    const Rational d = den.leading();
    Laurent out;
    for (int i = 0; i <= f.numerator().degree(); ++i) {
        out += Laurent::monomial(f.numerator().coeff(i) / d, Rational(i - den.degree()));
    }
    return out;
}

inline SpectralData spectral_from_curve(const CurveSpec &c)
{
    if (c.is_airy()) {
        return airy_spectral_data();
    }
    if (!c.builtin.empty()) {
        throw std::invalid_argument("unknown builtin curve '" + c.builtin + "'");
    }
    return make_spectral_data(laurent_from_text(c.x, "t"), laurent_from_text(c.y, "t"));
}

// q(x) = y(t(x))^2 and the branch with S_0' = y.
inline std::pair<Laurent, int> curve_potential(const SpectralData &s)
{
    const Laurent t = chart_t_of_x(s);
    if (t.terms().size() != 1) {
        throw DomainError("chart t(x) is not a monomial");
    }
    const auto &[beta, c] = *t.terms().begin();
    const Laurent y = s.y.compose_monomial(c, beta);
    const Laurent q = y * y;
    const Laurent root = q.sqrt();
    if (root == y) {
        return {q, 1};
    }
    if (-root == y) {
        return {q, -1};
    }
    throw DomainError("y(x) is not a single branch of sqrt(q)");
}

inline PuiseuxSeries<RadicalScalar> radical_series(const Laurent &s)
{
    PuiseuxSeries<RadicalScalar> out;
    for (const auto &[e, c] : s.terms()) {
        out += PuiseuxSeries<RadicalScalar>::monomial(RadicalScalar(c), e);
    }
    if (!is_zero(s.log_coefficient())) {
        out += PuiseuxSeries<RadicalScalar>::log_term(RadicalScalar(s.log_coefficient()));
    }
    return s.truncation() ? out.truncated(*s.truncation()) : out;
}

inline Laurent rational_series(const PuiseuxSeries<RadicalScalar> &s)
{
    Laurent out;
    for (const auto &[e, c] : s.terms()) {
        if (!c.is_rational()) {
            throw DomainError("series coefficient " + to_string(c) + " is not rational");
        }
        out += Laurent::monomial(c.rational_part(), e);
    }
    if (!is_zero(s.log_coefficient())) {
        out += Laurent::log_term(s.log_coefficient().rational_part());
    }
    return s.truncation() ? out.truncated(*s.truncation()) : out;
}

inline PuiseuxSeries<RadicalScalar> potential_from_text(const std::string &text, std::optional<int> truncation)
{
    const Laurent q = laurent_from_text(text, "x");
    PuiseuxSeries<RadicalScalar> out = radical_series(q);
    return truncation ? out.truncated(Rational(*truncation)) : out;
}

inline nlohmann::json rational_map(const std::map<std::string, Rational> &m)
{
    nlohmann::json out = nlohmann::json::object();
    for (const auto &[k, v] : m) {
        out[k] = to_wire(v);
    }
    return out;
}

inline JobResult run_quantize(const JobSpec &job)
{
    const int r = require(job.rank, "rank");
    const ScalarOperator op = quantum_curve(r);
    nlohmann::json coefficients = nlohmann::json::object();
    for (int j = 0; j <= op.order; ++j) {
        coefficients[std::to_string(j)] = render(op.coefficient(j));
    }
    nlohmann::json omegas = nlohmann::json::array();
    for (const auto &w : extract_omegas(op)) {
        omegas.push_back(render(w));
    }
    nlohmann::json report{{"command", "quantize"},
                          {"rank", r},
                          {"operator", render(op)},
                          {"coefficients", coefficients},
                          {"omegas", omegas},
                          {"semiclassical", render(semiclassical_limit(op))},
                          {"equivariant", is_equivariant(op)},
                          {"round_trip", parse_operator(render(op)) == op}};
    if (!job.q_assignments.empty()) {
        Assignment a;
        for (const auto &[level, text] : job.q_assignments) {
            a[level] = parse_rational_function<RadicalScalar>(text, "x");
        }
        nlohmann::json evaluated = nlohmann::json::object();
        for (int j = 0; j <= op.order; ++j) {
            evaluated[std::to_string(j)] = render(substitute(op.coefficient(j), a));
        }
        report["evaluated_coefficients"] = evaluated;
    }
    return {report, 0};
}

inline JobResult run_scl(const JobSpec &job)
{
    const int r = require(job.rank, "rank");
    const YPoly limit = semiclassical_limit(quantum_curve(r));
    const YPoly cp = char_poly(higgs_field(r));
    if (!(limit == cp)) {
        throw InternalInconsistency("semi-classical limit " + render(limit) + " differs from det(y + phi) = " +
                                    render(cp));
    }
    return {{{"command", "scl"}, {"rank", r}, {"semiclassical_limit", render(limit)}, {"char_poly", render(cp)},
             {"equal", true}},
            0};
}

inline JobResult run_geometry(const JobSpec &job)
{
    nlohmann::json report;
    if (job.divisor) {
        report = geometry_report(*job.divisor);
    } else if (job.q) {
        const auto q = parse_rational_function(*job.q, "x");
        report = geometry_report(discriminant_from_rational(q, true));
        const SingularityClass inf = singularity_class_at_infinity(q);
        report["kind_at_infinity"] = inf.irregular ? "irregular" : "regular";
        report["class_at_infinity"] = inf.irregular ? nlohmann::json(to_wire(inf.klass)) : nlohmann::json(nullptr);
        report["q"] = *job.q;
    } else {
        throw std::invalid_argument("geometry needs 'q' or 'divisor'");
    }
    report["command"] = "geometry";
    return {report, 0};
}

inline CurveSpec job_curve(const JobSpec &job)
{
    return job.curve ? *job.curve : CurveSpec{"airy", {}, {}};
}

inline Laurent curve_S2(const SpectralData &s, std::optional<int> truncation)
{
    auto [q, branch] = curve_potential(s);
    PuiseuxSeries<RadicalScalar> rq = radical_series(q);
    if (truncation) {
        rq = rq.truncated(Rational(*truncation));
    }
    return rational_series(wkb_expand(rq, branch, 2).S[2]);
}

inline nlohmann::json intersections_vs_oracle(const FreeEnergyTable &table, bool &all_match)
{
    nlohmann::json out = nlohmann::json::object();
    all_match = true;
    for (const auto &[key, F] : table.entries()) {
        for (const auto &[name, value] : intersection_numbers(F, key.first)) {
            std::vector<int> d;
            std::istringstream parts(name.substr(name.find("_d") + 2));
            for (std::string tok; std::getline(parts, tok, '_');) {
                d.push_back(std::stoi(tok));
            }
            all_match = all_match && value == dvv_oracle(key.first, d);
            out[name] = to_wire(value);
        }
    }
    return out;
}

inline JobResult run_toprec(const JobSpec &job)
{
    const int level = job.level.value_or(3);
    const CurveSpec curve = job_curve(job);
    const SpectralData s = spectral_from_curve(curve);
    const FreeEnergyTable table = build_free_energy_table(s, curve_S2(s, job.truncation), level);
    nlohmann::json report{{"command", "toprec"}, {"level", level}, {"free_energies", to_json_value(table)}};
    report["curve"] = curve.is_airy() ? nlohmann::json("airy") : nlohmann::json{{"x", curve.x}, {"y", curve.y}};
    if (curve.is_airy()) {
        bool match = false;
        report["intersection_numbers"] = intersections_vs_oracle(table, match);
        report["dvv_match"] = match;
        if (!match) {
            return {report, 2};
        }
    }
    return {report, 0};
}

inline JobResult run_wkb(const JobSpec &job)
{
    const int M = job.order.value_or(4);
    PuiseuxSeries<RadicalScalar> q;
    int branch = job.branch.value_or(1);
    std::string label;
    if (job.q) {
        q = potential_from_text(*job.q, job.truncation);
        label = *job.q;
    } else {
        const SpectralData s = spectral_from_curve(job_curve(job));
        auto [lq, b] = curve_potential(s);
        q = radical_series(lq);
        if (job.truncation) {
            q = q.truncated(Rational(*job.truncation));
        }
        branch = job.branch.value_or(b);
        label = render(lq, "x");
    }
    const auto w = wkb_expand(q, branch, M);
    bool plug_back = true;
    for (int k = 0; k <= M; ++k) {
        const auto r = plug_back_residual(w, q, k);
        plug_back = plug_back && r.terms().empty() && is_zero(r.log_coefficient());
    }
    nlohmann::json report = to_json_value(w);
    report["command"] = "wkb";
    report["q"] = label;
    report["plug_back_zero"] = plug_back;
    return {report, plug_back ? 0 : 2};
}

inline JobResult run_crosscheck(const JobSpec &job)
{
    const int M = job.order.value_or(4);
    if (M < 2) {
        throw std::invalid_argument("crosscheck needs order M >= 2");
    }
    const CurveSpec curve = job_curve(job);
    const SpectralData s = spectral_from_curve(curve);
    auto [q, branch] = curve_potential(s);
    PuiseuxSeries<RadicalScalar> rq = radical_series(q);
    if (job.truncation) {
        rq = rq.truncated(Rational(*job.truncation));
    }
    const auto w = wkb_expand(rq, branch, M);
    const FreeEnergyTable table = build_free_energy_table(s, rational_series(w.S[2]), M - 1);
    const Laurent chart = chart_t_of_x(s);
    bool equal = true;
    nlohmann::json per_m = nlohmann::json::object();
    for (int m = 2; m <= M; ++m) {
        const Laurent from_tr = principal_specialization(table, m, chart);
        const bool same = radical_series(from_tr) == w.S[static_cast<std::size_t>(m)];
        per_m["S" + std::to_string(m)] = {{"wkb", render(w.S[static_cast<std::size_t>(m)], "x")},
                                          {"toprec", render(from_tr, "x")}, {"equal", same}};
        equal = equal && same;
    }
    nlohmann::json report{{"command", "crosscheck"}, {"order", M}, {"wkb_equals_toprec", equal}, {"terms", per_m}};
    bool ok = equal;
    if (curve.is_airy()) {
        bool match = false;
        intersections_vs_oracle(table, match);
        report["dvv_match"] = match;
        ok = ok && match;
    }
    return {report, ok ? 0 : 2};
}

} // namespace detail

// Exit code 0 on success, 1 for domain errors and malformed input, 2 for
// internal inconsistencies.
inline JobResult run_job(const JobSpec &job)
{
    try {
        if (job.command == "quantize") {
            return detail::run_quantize(job);
        }
        if (job.command == "scl") {
            return detail::run_scl(job);
        }
        if (job.command == "geometry") {
            return detail::run_geometry(job);
        }
        if (job.command == "toprec") {
            return detail::run_toprec(job);
        }
        if (job.command == "wkb") {
            return detail::run_wkb(job);
        }
        if (job.command == "crosscheck") {
            return detail::run_crosscheck(job);
        }
        throw std::invalid_argument("unknown command '" + job.command + "'");
    } catch (const InternalInconsistency &e) {
        return {{{"command", job.command}, {"error", e.what()}, {"kind", "internal_inconsistency"}}, 2};
    } catch (const DomainError &e) {
        return {{{"command", job.command}, {"error", e.what()}, {"kind", "domain_error"}}, 1};
    } catch (const std::invalid_argument &e) {
        return {{{"command", job.command}, {"error", e.what()}, {"kind", "invalid_input"}}, 1};
    } catch (const std::domain_error &e) {
        return {{{"command", job.command}, {"error", e.what()}, {"kind", "domain_error"}}, 1};
    }
}

} // namespace qcurve
