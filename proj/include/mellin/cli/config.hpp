#pragma once

#include "mellin/levy_model.hpp"
#include "mellin/mellin_transform.hpp"
#include "mellin/oracles.hpp"
#include "mellin/payoffs.hpp"

#include <cstdint>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

namespace mellin::cli {

enum class OutputFormat { table, csv, json };

OutputFormat parse_format(const std::string& text);
const char* to_string(OutputFormat format) noexcept;

/// Schema or value problem in the run configuration. `field` is a JSON
/// pointer-like path ("/model/vols/1"), `line` is 1-based when known.
class ConfigError : public std::runtime_error {
public:
    ConfigError(std::string field, const std::string& message, int line = 0);
    const std::string& field() const noexcept { return field_; }
    int line() const noexcept { return line_; }

private:
    std::string field_;
    int line_;
};

struct ModelConfig {
    std::string type = "gbm";  ///< gbm | merton | kou
    std::vector<double> vols;
    Eigen::MatrixXd corr;
    std::vector<JumpSpec> jumps;  ///< one per asset
    DriftConvention drift_convention = DriftConvention::martingale;
};

struct NumericsConfig {
    ContourSpec contour;
    int time_steps = 64;
};

struct ValidationConfig {
    std::vector<std::string> oracles;  ///< empty: every applicable oracle
    McConfig mc{1000000};
    int binomial_steps = 10000;
    int exercise_dates = 64;
    int lsm_paths = 100000;
};

struct ConvergeConfig {
    std::string parameter = "time_steps";  ///< time_steps | nodes | step
    double start = 16;
    int levels = 4;
};

struct OutputConfig {
    OutputFormat format = OutputFormat::table;
    std::string path;
};

struct RunConfig {
    ModelConfig model;
    OptionSpec option;
    NumericsConfig numerics;
    ValidationConfig validation;
    ConvergeConfig converge;
    OutputConfig output;

    LevyModel build_model() const;
};

/// Parses and schema-checks a configuration document. Throws ConfigError.
RunConfig parse_config(const std::string& text);
RunConfig load_config(const std::string& path);

}  // namespace mellin::cli
