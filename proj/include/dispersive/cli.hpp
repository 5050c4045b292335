#pragma once

#include <cstdint>
#include <filesystem>
#include <optional>
#include <ostream>
#include <string_view>
#include <vector>

#include "dispersive/error.hpp"

namespace dispersive {

enum class Command { Check, Solve, VerifyLemmas, Mms, Estimates, Sweep };

std::optional<Command> parse_command(std::string_view name);
std::string_view to_string(Command command);

/// manufactured: errors against a bc-satisfying polynomial; self: errors of the
/// spec's own forcing against a reference solve.
enum class MmsMode { Manufactured, Self };

inline constexpr int max_grid_n = 4001;

/// Unset optionals fall back to per-command defaults: n = 201 (41 for mms),
/// cases = 200 for verify-lemmas and 100 for sweep.
struct RunConfig {
    Command command = Command::Check;
    std::filesystem::path spec_path;
    std::optional<int> grid_n;
    int accuracy_p = 4;
    std::uint64_t seed = 1;
    std::filesystem::path out_dir = "out";
    std::optional<double> tol_l2;
    std::optional<double> tol_trace;
    int max_l = 5;
    std::optional<int> cases;
    std::vector<int> sweep_l{2};
    MmsMode mms_mode = MmsMode::Manufactured;
    std::optional<int> mms_degree;  // default 2l + p + 6, past the exact range
    int mms_levels = 3;
    int reference_n = 1281;
};

namespace exit_code {
inline constexpr int ok = 0;
inline constexpr int failure = 1;     // I/O or validation
inline constexpr int contract = 2;    // inadmissible, or a checked property failed
inline constexpr int numerical = 3;   // NumericallySingular
}  // namespace exit_code

int exit_code_for(ErrorKind kind);

/// Prints the command's report as JSON on out and writes report files plus a
/// <command>.meta.json with timestamps into out_dir. Errors go to err as one
/// JSON object per line.
int run(const RunConfig& config, std::ostream& out, std::ostream& err);

}  // namespace dispersive
