#pragma once

#include <filesystem>
#include <string>
#include <vector>

#include "json.hpp"

#include "dispersive/admissibility.hpp"
#include "dispersive/discretize.hpp"
#include "dispersive/lemmas.hpp"
#include "dispersive/model.hpp"
#include "dispersive/verify.hpp"

namespace dispersive {

using json = nlohmann::json;

// Problem spec document:
//   { "l": 2, "lambda": 1.0, "length": 1.0,
//     "bc": { "kind": "canonical", "a": [...], "b": [...] }
//         | { "kind": "general", "A": [[...]], "B": [[...]] }
//         | { "kind": "raw", "alpha": [[...]], "beta": [[...]] },
//     "forcing": { "kind": "polynomial", "coeffs": [c0, c1, ...] }
//              | { "kind": "trig", "terms": [{"amplitude": a, "frequency": w, "phase": s}, ...] }
//              | { "kind": "samples", "values": [...] } }
// Matrices are lists of rows. "lambda" and "length" default to 1; trig terms
// may also be written as [a, w, s]. Unknown keys are rejected.

/// Throws InvalidSpec naming the offending field.
ProblemSpec spec_from_json(const json& doc);
json spec_to_json(const ProblemSpec& spec);

/// Throws Io when the file cannot be read or is not JSON, InvalidSpec otherwise.
ProblemSpec read_spec(const std::filesystem::path& path);

/// Keys l, family, A, B, admissible.
json report_to_json(const AdmissibilityReport& report);
/// Keys l, p, n, length, x, values, traces {at0, atL}, condition_estimate,
/// relative_residual, pivot_ratio.
json solution_to_json(const GridSolution& solution);
json estimate_to_json(const EstimateReport& report);
json convergence_to_json(const ConvergenceReport& report);
json lemma_suite_to_json(const LemmaSuiteReport& report);
json sweep_case_to_json(const SweepCase& c);

/// 17 significant digits, '.' separator, independent of the global locale.
std::string format_real(double value);

/// Columns x,u.
std::string solution_csv(const GridSolution& solution);
/// Columns n,h,max_error,l2_error.
std::string convergence_csv(const ConvergenceReport& report, double length);
/// One row per case.
std::string sweep_csv(const std::vector<SweepCase>& cases);

/// Writes the whole file or throws Io.
void write_file(const std::filesystem::path& path, const std::string& contents);

}  // namespace dispersive
