#pragma once

#include "mellin/cli/config.hpp"

#include <cstdint>
#include <iosfwd>
#include <optional>
#include <string>
#include <variant>
#include <vector>

namespace mellin::cli {

inline constexpr int kFormatVersion = 1;

enum ExitCode : int { kExitOk = 0, kExitValidationFail = 1, kExitConfig = 2, kExitNumerical = 3 };

using Cell = std::variant<std::string, double, std::int64_t, bool>;
using MetaValue = std::variant<std::string, double, std::int64_t, bool, std::vector<double>, std::vector<std::int64_t>>;

/// Tabular command output plus scalar metadata; rendered as a table, CSV or JSON.
struct Report {
    std::string command;
    std::vector<std::pair<std::string, MetaValue>> meta;
    std::vector<std::string> columns;
    std::vector<std::vector<Cell>> rows;
    std::vector<std::string> notes;
    int exit_code = kExitOk;
};

std::string render(const Report& report, OutputFormat format);

/// %.17g: 17 significant digits, enough to round-trip any double.
std::string format_double(double x);
/// RFC-4180 field quoting.
std::string csv_field(const std::string& s);

struct Invocation {
    std::string command;  ///< price | validate | converge | boundary
    std::string config_path;
    std::optional<std::string> out;
    std::optional<OutputFormat> format;
    std::optional<int> threads;
    std::optional<std::uint64_t> seed;
};

Report cmd_price(const RunConfig& cfg);
Report cmd_validate(const RunConfig& cfg);
Report cmd_converge(const RunConfig& cfg);
Report cmd_boundary(const RunConfig& cfg);

/// Loads the config, applies flag overrides, runs the command and writes the
/// rendered report to `out` (or the --out file). Returns the process exit code.
int run(const Invocation& inv, std::ostream& out, std::ostream& err);

}  // namespace mellin::cli
