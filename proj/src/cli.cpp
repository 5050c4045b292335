#include "dispersive/cli.hpp"

#include <chrono>
#include <ctime>
#include <string>

#include "dispersive/error.hpp"
#include "dispersive/io.hpp"

namespace dispersive {
namespace {

namespace fs = std::filesystem;

struct Outcome {
    json report;
    int code = exit_code::ok;
};

void require(bool ok, const std::string& message) {
    if (!ok) throw Error(ErrorKind::InvalidArgument, message);
}

void check_order(int l, const RunConfig& c) {
    require(l <= c.max_l, "l = " + std::to_string(l) + " exceeds --max-l " + std::to_string(c.max_l) +
                              "; higher orders need h^-(2l+1) scales that the solver does not resolve reliably");
}

void check_grid_size(int n) {
    require(n >= 2 && n <= max_grid_n,
            "grid size " + std::to_string(n) + " outside the supported range [2, " + std::to_string(max_grid_n) + "]");
}

int grid_n(const RunConfig& c, int fallback) {
    const int n = c.grid_n.value_or(fallback);
    check_grid_size(n);
    return n;
}

// Raw forms are reduced here so every later stage sees coefficient form.
ProblemSpec load_spec(const RunConfig& c) {
    require(!c.spec_path.empty(), std::string("--spec is required for ") + std::string(to_string(c.command)));
    ProblemSpec s = read_spec(c.spec_path);
    check_order(s.l, c);
    if (const auto* raw = std::get_if<RawLinearForms>(&s.bc)) s.bc = reduce_raw_forms(s.l, *raw);
    return s;
}

EstimateTolerances tolerances(const RunConfig& c) {
    EstimateTolerances t;
    if (c.tol_l2) t.l2 = *c.tol_l2;
    if (c.tol_trace) t.trace = *c.tol_trace;
    require(t.l2 >= 0.0 && t.trace >= 0.0, "tolerances must be >= 0");
    return t;
}

fs::path output(const RunConfig& c, const std::string& name) { return c.out_dir / name; }

void write_json(const fs::path& path, const json& j) { write_file(path, j.dump(2) + "\n"); }

Outcome check(const RunConfig& c) {
    const ProblemSpec s = load_spec(c);
    const AdmissibilityReport report = margins(s.l, s.bc);
    json j = report_to_json(report);
    write_json(output(c, "admissibility.json"), j);
    return {std::move(j), report.admissible ? exit_code::ok : exit_code::contract};
}

Outcome solve(const RunConfig& c) {
    const ProblemSpec s = load_spec(c);
    const Grid grid(grid_n(c, 201), s.length);
    const GridSolution sol = solve_linear(assemble(s, grid, c.accuracy_p));
    write_file(output(c, "solution.csv"), solution_csv(sol));
    write_json(output(c, "solution.json"), solution_to_json(sol));
    const AdmissibilityReport adm = margins(s.l, s.bc);
    json j = {{"n", grid.n()},
              {"p", c.accuracy_p},
              {"admissible", adm.admissible},
              {"condition_estimate", sol.condition_estimate},
              {"relative_residual", sol.relative_residual},
              {"files", {"solution.csv", "solution.json"}}};
    return {std::move(j), exit_code::ok};
}

Outcome verify_lemmas(const RunConfig& c) {
    LemmaSuiteOptions o;
    o.max_order = c.max_l;
    o.cases = c.cases.value_or(200);
    o.seed = c.seed;
    require(o.cases >= 1, "--cases must be >= 1");
    const LemmaSuiteReport report = run_lemma_suite(o);
    json j = lemma_suite_to_json(report);
    write_json(output(c, "lemmas.json"), j);
    return {std::move(j), report.passed ? exit_code::ok : exit_code::contract};
}

Outcome mms(const RunConfig& c) {
    ProblemSpec s = load_spec(c);
    require(c.mms_levels >= 3, "--levels must be >= 3");
    const std::vector<int> grids = nested_grids(grid_n(c, 41), c.mms_levels);
    check_grid_size(grids.back());
    json j;
    ConvergenceReport r;
    if (c.mms_mode == MmsMode::Manufactured) {
        const int degree = c.mms_degree.value_or(2 * s.l + c.accuracy_p + 6);
        const Polynomial u = polynomial_satisfying_bcs(s.l, s.bc, s.length, degree, c.seed);
        s.forcing = ExactPolynomial{forcing_for(u, s.lambda, s.l)};
        r = convergence_study(s, u, grids, c.accuracy_p);
        j["mode"] = "manufactured";
        j["exact_solution"] = u.coeffs();
    } else {
        check_grid_size(c.reference_n);
        r = self_convergence_study(s, grids, c.reference_n, c.accuracy_p);
        j["mode"] = "self";
    }
    const bool passed = convergence_passes(r, c.accuracy_p);
    j["convergence"] = convergence_to_json(r);
    j["order_threshold"] = c.accuracy_p - 0.5;
    j["passed"] = passed;
    write_json(output(c, "mms.json"), j);
    write_file(output(c, "mms.csv"), convergence_csv(r, s.length));
    return {std::move(j), passed ? exit_code::ok : exit_code::contract};
}

Outcome estimates(const RunConfig& c) {
    const ProblemSpec s = load_spec(c);
    const EstimateReport r = estimate_check(s, Grid(grid_n(c, 201), s.length), c.accuracy_p, tolerances(c));
    json j = estimate_to_json(r);
    write_json(output(c, "estimates.json"), j);
    return {std::move(j), r.passed() ? exit_code::ok : exit_code::contract};
}

Outcome sweep_command(const RunConfig& c) {
    require(!c.sweep_l.empty(), "--l needs at least one order");
    std::vector<SweepCase> all;
    json summary = json::array();
    json failures = json::array();
    const fs::path failure_dir = output(c, "sweep_failures");
    for (int l : c.sweep_l) {
        require(l >= 1, "--l entries must be >= 1");
        check_order(l, c);
        SweepOptions o;
        o.l = l;
        o.cases = c.cases.value_or(100);
        o.n = grid_n(c, 201);
        o.p = c.accuracy_p;
        o.seed = c.seed;
        o.tol = tolerances(c);
        require(o.cases >= 1, "--cases must be >= 1");
        const std::vector<SweepCase> cases = sweep(o);
        int failed = 0;
        double worst_l2 = 0.0, worst_trace = 0.0, worst_homogeneous = 0.0;
        for (const SweepCase& k : cases) {
            worst_l2 = std::max(worst_l2, k.estimate.l2_ratio);
            if (k.estimate.trace_rhs > 0.0) worst_trace = std::max(worst_trace, k.estimate.trace_lhs / k.estimate.trace_rhs);
            worst_homogeneous = std::max(worst_homogeneous, k.homogeneous_max);
            if (k.passed()) continue;
            ++failed;
            // Each failing case is dumped as a spec that `estimates` can rerun.
            fs::create_directories(failure_dir);
            const std::string name = "l" + std::to_string(l) + "_case" + std::to_string(k.index) + ".json";
            write_json(failure_dir / name, spec_to_json(k.spec));
            failures.push_back({{"l", l}, {"index", k.index}, {"seed", k.seed}, {"spec", "sweep_failures/" + name}});
        }
        summary.push_back({{"l", l},
                           {"cases", o.cases},
                           {"failed", failed},
                           {"worst_l2_ratio", worst_l2},
                           {"worst_trace_ratio", worst_trace},
                           {"worst_homogeneous_max", worst_homogeneous}});
        all.insert(all.end(), cases.begin(), cases.end());
    }
    json cases_json = json::array();
    for (const SweepCase& k : all) cases_json.push_back(sweep_case_to_json(k));
    write_file(output(c, "sweep.csv"), sweep_csv(all));
    write_json(output(c, "sweep.json"), {{"summary", summary}, {"cases", std::move(cases_json)}});
    const bool passed = failures.empty();
    json j = {{"summary", std::move(summary)}, {"failures", std::move(failures)}, {"passed", passed},
              {"files", {"sweep.csv", "sweep.json"}}};
    return {std::move(j), passed ? exit_code::ok : exit_code::contract};
}

std::string utc_now() {
    const std::time_t t = std::chrono::system_clock::to_time_t(std::chrono::system_clock::now());
    std::tm tm{};
    gmtime_r(&t, &tm);
    char buf[32];
    std::strftime(buf, sizeof buf, "%Y-%m-%dT%H:%M:%SZ", &tm);
    return buf;
}

void print_error(std::ostream& err, std::string_view kind, const std::string& message, int code) {
    err << json{{"error", {{"kind", kind}, {"message", message}}}, {"exit_code", code}}.dump() << "\n";
}

}  // namespace

int exit_code_for(ErrorKind kind) {
    switch (kind) {
        case ErrorKind::InadmissibleCoefficients: return exit_code::contract;
        case ErrorKind::NumericallySingular: return exit_code::numerical;
        default: return exit_code::failure;
    }
}

std::optional<Command> parse_command(std::string_view name) {
    for (Command c : {Command::Check, Command::Solve, Command::VerifyLemmas, Command::Mms, Command::Estimates,
                      Command::Sweep})
        if (to_string(c) == name) return c;
    return std::nullopt;
}

std::string_view to_string(Command command) {
    switch (command) {
        case Command::Check: return "check";
        case Command::Solve: return "solve";
        case Command::VerifyLemmas: return "verify-lemmas";
        case Command::Mms: return "mms";
        case Command::Estimates: return "estimates";
        case Command::Sweep: return "sweep";
    }
    return "unknown";
}

int run(const RunConfig& config, std::ostream& out, std::ostream& err) {
    const std::string started = utc_now();
    const auto t0 = std::chrono::steady_clock::now();
    int code = exit_code::ok;
    try {
        require(config.accuracy_p == 2 || config.accuracy_p == 4, "--p must be 2 or 4");
        require(config.max_l >= 1, "--max-l must be >= 1");
        std::error_code ec;
        fs::create_directories(config.out_dir, ec);
        if (ec) throw Error(ErrorKind::Io, "cannot create output directory " + config.out_dir.string() + ": " + ec.message());

        Outcome o;
        switch (config.command) {
            case Command::Check: o = check(config); break;
            case Command::Solve: o = solve(config); break;
            case Command::VerifyLemmas: o = verify_lemmas(config); break;
            case Command::Mms: o = mms(config); break;
            case Command::Estimates: o = estimates(config); break;
            case Command::Sweep: o = sweep_command(config); break;
        }
        out << o.report.dump(2) << "\n";
        code = o.code;
    } catch (const Error& e) {
        code = exit_code_for(e.kind());
        print_error(err, to_string(e.kind()), e.what(), code);
    } catch (const fs::filesystem_error& e) {
        code = exit_code::failure;
        print_error(err, to_string(ErrorKind::Io), e.what(), code);
    } catch (const std::exception& e) {
        code = exit_code::failure;
        print_error(err, "Internal", e.what(), code);
    }
    // Timestamps live here only, so the report files stay byte-identical across runs.
    const double elapsed = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
    const json meta = {{"command", to_string(config.command)},
                       {"started_utc", started},
                       {"finished_utc", utc_now()},
                       {"elapsed_seconds", elapsed},
                       {"exit_code", code}};
    std::error_code ec;
    if (fs::is_directory(config.out_dir, ec)) {
        try {
            write_json(output(config, std::string(to_string(config.command)) + ".meta.json"), meta);
        } catch (const Error& e) {
            print_error(err, to_string(e.kind()), e.what(), exit_code::failure);
            if (code == exit_code::ok) code = exit_code::failure;
        }
    }
    return code;
}

}  // namespace dispersive
