#include "dispersive/io.hpp"

#include <charconv>
#include <cmath>
#include <fstream>
#include <set>

#include "dispersive/error.hpp"

namespace dispersive {
namespace {

[[noreturn]] void invalid(const std::string& field, const std::string& message) {
    throw Error(ErrorKind::InvalidSpec, field + ": " + message);
}

const json& member(const json& obj, const std::string& key, const std::string& field) {
    const auto it = obj.find(key);
    if (it == obj.end()) invalid(field + "." + key, "missing");
    return *it;
}

void reject_unknown(const json& obj, std::initializer_list<const char*> known, const std::string& field) {
    const std::set<std::string> allowed(known.begin(), known.end());
    for (const auto& [key, value] : obj.items())
        if (!allowed.contains(key)) invalid(field.empty() ? key : field + "." + key, "unknown key");
}

const json& object(const json& j, const std::string& field) {
    if (!j.is_object()) invalid(field, "expected an object");
    return j;
}

double number(const json& j, const std::string& field) {
    if (!j.is_number()) invalid(field, "expected a number");
    return j.get<double>();
}

std::vector<double> numbers(const json& j, const std::string& field) {
    if (!j.is_array()) invalid(field, "expected an array of numbers");
    std::vector<double> out;
    for (std::size_t i = 0; i < j.size(); ++i) out.push_back(number(j[i], field + "[" + std::to_string(i) + "]"));
    return out;
}

// Shapes follow from l, so an l = 1 general set may write B as [] or [[]].
Matrix matrix(const json& j, std::size_t rows, std::size_t cols, const std::string& field) {
    if (!j.is_array()) invalid(field, "expected a list of rows");
    const bool empty_ok = cols == 0 && (j.empty() || (j.size() == rows));
    if (!empty_ok && j.size() != rows)
        invalid(field, "expected " + std::to_string(rows) + " rows, got " + std::to_string(j.size()));
    Matrix m(rows, cols);
    for (std::size_t r = 0; r < j.size(); ++r) {
        const auto row = numbers(j[r], field + "[" + std::to_string(r) + "]");
        if (row.size() != cols)
            invalid(field + "[" + std::to_string(r) + "]",
                    "expected " + std::to_string(cols) + " entries, got " + std::to_string(row.size()));
        for (std::size_t c = 0; c < cols; ++c) m(r, c) = row[c];
    }
    return m;
}

json matrix_json(const Matrix& m) {
    json rows = json::array();
    for (std::size_t r = 0; r < m.rows(); ++r) {
        json row = json::array();
        for (std::size_t c = 0; c < m.cols(); ++c) row.push_back(m(r, c));
        rows.push_back(std::move(row));
    }
    return rows;
}

BoundaryCoefficients bc_from_json(const json& j, int l) {
    object(j, "bc");
    const json& kind = member(j, "kind", "bc");
    if (!kind.is_string()) invalid("bc.kind", "expected a string");
    const auto ul = static_cast<std::size_t>(l);
    const std::string k = kind.get<std::string>();
    if (k == "canonical") {
        reject_unknown(j, {"kind", "a", "b"}, "bc");
        CanonicalDiagonal d;
        if (j.contains("a")) d.a = numbers(j["a"], "bc.a");
        if (j.contains("b")) d.b = numbers(j["b"], "bc.b");
        return d;
    }
    if (k == "general") {
        reject_unknown(j, {"kind", "A", "B"}, "bc");
        return GeneralFull{matrix(member(j, "A", "bc"), ul - 1, ul, "bc.A"),
                           matrix(member(j, "B", "bc"), ul, ul - 1, "bc.B")};
    }
    if (k == "raw") {
        reject_unknown(j, {"kind", "alpha", "beta"}, "bc");
        return RawLinearForms{matrix(member(j, "alpha", "bc"), ul - 1, 2 * ul - 1, "bc.alpha"),
                              matrix(member(j, "beta", "bc"), ul, 2 * ul - 1, "bc.beta")};
    }
    invalid("bc.kind", "expected \"canonical\", \"general\" or \"raw\", got \"" + k + "\"");
}

TrigTerm trig_term(const json& j, const std::string& field) {
    if (j.is_array()) {
        const auto v = numbers(j, field);
        if (v.size() != 3) invalid(field, "expected [amplitude, frequency, phase]");
        return {v[0], v[1], v[2]};
    }
    object(j, field);
    reject_unknown(j, {"amplitude", "frequency", "phase"}, field);
    TrigTerm t;
    t.amplitude = number(member(j, "amplitude", field), field + ".amplitude");
    t.frequency = number(member(j, "frequency", field), field + ".frequency");
    if (j.contains("phase")) t.phase = number(j["phase"], field + ".phase");
    return t;
}

ForcingSpec forcing_from_json(const json& j) {
    object(j, "forcing");
    const json& kind = member(j, "kind", "forcing");
    if (!kind.is_string()) invalid("forcing.kind", "expected a string");
    const std::string k = kind.get<std::string>();
    if (k == "polynomial") {
        reject_unknown(j, {"kind", "coeffs"}, "forcing");
        return ExactPolynomial{Polynomial(numbers(member(j, "coeffs", "forcing"), "forcing.coeffs"))};
    }
    if (k == "trig") {
        reject_unknown(j, {"kind", "terms"}, "forcing");
        const json& terms = member(j, "terms", "forcing");
        if (!terms.is_array()) invalid("forcing.terms", "expected an array");
        TrigSum s;
        for (std::size_t i = 0; i < terms.size(); ++i)
            s.terms.push_back(trig_term(terms[i], "forcing.terms[" + std::to_string(i) + "]"));
        return s;
    }
    if (k == "samples") {
        reject_unknown(j, {"kind", "values"}, "forcing");
        return GridSamples{numbers(member(j, "values", "forcing"), "forcing.values")};
    }
    invalid("forcing.kind", "expected \"polynomial\", \"trig\" or \"samples\", got \"" + k + "\"");
}

json doubles(const std::vector<double>& v) { return json(v); }

// Non-finite values have no JSON literal; they are written as null.
json real(double v) { return std::isfinite(v) ? json(v) : json(nullptr); }

}  // namespace

ProblemSpec spec_from_json(const json& doc) {
    object(doc, "spec");
    reject_unknown(doc, {"l", "lambda", "length", "bc", "forcing"}, "");
    ProblemSpec s;
    const json& l = member(doc, "l", "spec");
    if (!l.is_number_integer()) invalid("l", "expected an integer");
    s.l = l.get<int>();
    if (s.l < 1) invalid("l", "must be >= 1");
    if (doc.contains("lambda")) s.lambda = number(doc["lambda"], "lambda");
    if (doc.contains("length")) s.length = number(doc["length"], "length");
    s.bc = bc_from_json(member(doc, "bc", "spec"), s.l);
    s.forcing = forcing_from_json(member(doc, "forcing", "spec"));
    require_valid(s);
    return s;
}

json spec_to_json(const ProblemSpec& spec) {
    json bc;
    if (const auto* d = std::get_if<CanonicalDiagonal>(&spec.bc))
        bc = {{"kind", "canonical"}, {"a", doubles(d->a)}, {"b", doubles(d->b)}};
    else if (const auto* g = std::get_if<GeneralFull>(&spec.bc))
        bc = {{"kind", "general"}, {"A", matrix_json(g->A)}, {"B", matrix_json(g->B)}};
    else {
        const auto& r = std::get<RawLinearForms>(spec.bc);
        bc = {{"kind", "raw"}, {"alpha", matrix_json(r.alpha)}, {"beta", matrix_json(r.beta)}};
    }
    json forcing;
    if (const auto* p = std::get_if<ExactPolynomial>(&spec.forcing))
        forcing = {{"kind", "polynomial"}, {"coeffs", doubles(p->p.coeffs())}};
    else if (const auto* t = std::get_if<TrigSum>(&spec.forcing)) {
        json terms = json::array();
        for (const TrigTerm& term : t->terms)
            terms.push_back({{"amplitude", term.amplitude}, {"frequency", term.frequency}, {"phase", term.phase}});
        forcing = {{"kind", "trig"}, {"terms", std::move(terms)}};
    } else
        forcing = {{"kind", "samples"}, {"values", doubles(std::get<GridSamples>(spec.forcing).values)}};
    return {{"l", spec.l}, {"lambda", spec.lambda}, {"length", spec.length}, {"bc", std::move(bc)},
            {"forcing", std::move(forcing)}};
}

ProblemSpec read_spec(const std::filesystem::path& path) {
    std::ifstream in(path);
    if (!in) throw Error(ErrorKind::Io, "cannot open spec file " + path.string());
    json doc;
    try {
        doc = json::parse(in);
    } catch (const json::parse_error& e) {
        throw Error(ErrorKind::Io, path.string() + " is not valid JSON: " + e.what());
    }
    return spec_from_json(doc);
}

json report_to_json(const AdmissibilityReport& report) {
    return {{"l", report.l},
            {"family", std::string(to_string(report.family))},
            {"A", doubles(report.margins_A)},
            {"B", doubles(report.margins_B)},
            {"admissible", report.admissible}};
}

json solution_to_json(const GridSolution& s) {
    return {{"l", s.l},
            {"p", s.p},
            {"n", s.grid.n()},
            {"length", s.grid.length()},
            {"x", doubles(s.nodes())},
            {"values", doubles(s.values)},
            {"traces", {{"at0", doubles(s.traces.at0)}, {"atL", doubles(s.traces.atL)}}},
            {"condition_estimate", real(s.condition_estimate)},
            {"relative_residual", real(s.relative_residual)},
            {"pivot_ratio", real(s.pivot_ratio)}};
}

json estimate_to_json(const EstimateReport& r) {
    return {{"l2_ratio", real(r.l2_ratio)},
            {"trace_lhs", real(r.trace_lhs)},
            {"trace_rhs", real(r.trace_rhs)},
            {"hl_ratio", real(r.hl_ratio)},
            {"h2l1_ratio", real(r.h2l1_ratio)},
            {"M1", real(r.M1)},
            {"f_norm", real(r.f_norm)},
            {"u_norm", real(r.u_norm)},
            {"condition_estimate", real(r.condition_estimate)},
            {"l2_ok", r.l2_ok},
            {"trace_ok", r.trace_ok},
            {"passed", r.passed()}};
}

json convergence_to_json(const ConvergenceReport& r) {
    json max_errors = json::array(), l2_errors = json::array();
    for (double e : r.max_errors) max_errors.push_back(real(e));
    for (double e : r.l2_errors) l2_errors.push_back(real(e));
    return {{"grid_sizes", r.grid_sizes},
            {"max_errors", std::move(max_errors)},
            {"l2_errors", std::move(l2_errors)},
            {"fitted_order", real(r.fitted_order)},
            {"exact_regime", r.exact_regime},
            {"reference_n", r.reference_n}};
}

json lemma_suite_to_json(const LemmaSuiteReport& report) {
    json entries = json::array();
    for (const LemmaSuiteEntry& e : report.entries)
        entries.push_back({{"identity", e.identity.name()},
                           {"length", e.length},
                           {"cases", e.cases},
                           {"failures", e.failures},
                           {"worst_scaled_residual", real(e.worst_scaled_residual)}});
    return {{"entries", std::move(entries)}, {"passed", report.passed}};
}

json sweep_case_to_json(const SweepCase& c) {
    return {{"index", c.index},
            {"seed", c.seed},
            {"spec", spec_to_json(c.spec)},
            {"estimate", estimate_to_json(c.estimate)},
            {"homogeneous_max", real(c.homogeneous_max)},
            {"uniqueness_ok", c.uniqueness_ok},
            {"passed", c.passed()}};
}

std::string format_real(double value) {
    char buf[64];
    const auto res = std::to_chars(buf, buf + sizeof buf, value, std::chars_format::general, 17);
    return std::string(buf, res.ptr);
}

std::string solution_csv(const GridSolution& solution) {
    std::string out = "x,u\n";
    const auto x = solution.nodes();
    for (std::size_t i = 0; i < x.size(); ++i) out += format_real(x[i]) + "," + format_real(solution.values[i]) + "\n";
    return out;
}

std::string convergence_csv(const ConvergenceReport& report, double length) {
    std::string out = "n,h,max_error,l2_error\n";
    for (std::size_t i = 0; i < report.grid_sizes.size(); ++i) {
        const int n = report.grid_sizes[i];
        out += std::to_string(n) + "," + format_real(length / (n - 1)) + "," + format_real(report.max_errors[i]) + "," +
               format_real(report.l2_errors[i]) + "\n";
    }
    return out;
}

std::string sweep_csv(const std::vector<SweepCase>& cases) {
    std::string out =
        "l,index,seed,lambda,length,M1,l2_ratio,trace_lhs,trace_rhs,hl_ratio,h2l1_ratio,condition_estimate,"
        "homogeneous_max,l2_ok,trace_ok,uniqueness_ok,passed\n";
    for (const SweepCase& c : cases) {
        const EstimateReport& e = c.estimate;
        out += std::to_string(c.spec.l) + "," + std::to_string(c.index) + "," + std::to_string(c.seed) + "," +
               format_real(c.spec.lambda) + "," + format_real(c.spec.length) + "," + format_real(e.M1) + "," +
               format_real(e.l2_ratio) + "," + format_real(e.trace_lhs) + "," + format_real(e.trace_rhs) + "," +
               format_real(e.hl_ratio) + "," + format_real(e.h2l1_ratio) + "," + format_real(e.condition_estimate) +
               "," + format_real(c.homogeneous_max) + "," + (e.l2_ok ? "1" : "0") + "," + (e.trace_ok ? "1" : "0") +
               "," + (c.uniqueness_ok ? "1" : "0") + "," + (c.passed() ? "1" : "0") + "\n";
    }
    return out;
}

void write_file(const std::filesystem::path& path, const std::string& contents) {
    std::ofstream out(path, std::ios::binary | std::ios::trunc);
    if (!out) throw Error(ErrorKind::Io, "cannot open " + path.string() + " for writing");
    out << contents;
    out.close();
    if (!out) throw Error(ErrorKind::Io, "failed writing " + path.string());
}

}  // namespace dispersive
