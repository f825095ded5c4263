#include "mellin/cli/config.hpp"

#include "mellin/error.hpp"

#include <json.hpp>

#include <fstream>
#include <set>
#include <sstream>

namespace mellin::cli {

using nlohmann::json;

namespace {

std::string describe(const json& v) {
    return std::string(v.type_name());
}

// Typed accessors that report the offending field path.
class Node {
public:
    Node(const json& value, std::string path) : v_(value), path_(std::move(path)) {}

    const std::string& path() const { return path_; }
    const json& raw() const { return v_; }

    [[noreturn]] void error(const std::string& message) const { throw ConfigError(path_, message); }

    void require_object(std::initializer_list<const char*> allowed) const {
        if (!v_.is_object()) error("expected an object, got " + describe(v_));
        std::set<std::string> ok(allowed.begin(), allowed.end());
        for (auto it = v_.begin(); it != v_.end(); ++it) {
            if (!ok.count(it.key())) throw ConfigError(path_ + "/" + it.key(), "unknown field");
        }
    }

    bool has(const char* key) const { return v_.contains(key) && !v_.at(key).is_null(); }

    Node at(const char* key) const {
        if (!v_.contains(key)) throw ConfigError(path_ + "/" + key, "required field is missing");
        return Node(v_.at(key), path_ + "/" + key);
    }

    Node at(std::size_t i) const { return Node(v_.at(i), path_ + "/" + std::to_string(i)); }

    double number() const {
        if (!v_.is_number()) error("expected a number, got " + describe(v_));
        return v_.get<double>();
    }

    std::int64_t integer() const {
        if (!v_.is_number_integer() && !v_.is_number_unsigned()) error("expected an integer, got " + describe(v_));
        return v_.get<std::int64_t>();
    }

    bool boolean() const {
        if (!v_.is_boolean()) error("expected true or false, got " + describe(v_));
        return v_.get<bool>();
    }

    std::string string() const {
        if (!v_.is_string()) error("expected a string, got " + describe(v_));
        return v_.get<std::string>();
    }

    std::size_t array_size() const {
        if (!v_.is_array()) error("expected an array, got " + describe(v_));
        return v_.size();
    }

    std::vector<double> numbers() const {
        std::vector<double> out(array_size());
        for (std::size_t i = 0; i < out.size(); ++i) out[i] = at(i).number();
        return out;
    }

    /// A number broadcast to every dimension, or an array of length n.
    std::vector<double> numbers_or_scalar() const {
        if (v_.is_number()) return {number()};
        return numbers();
    }

private:
    const json& v_;
    std::string path_;
};

int line_of(const std::string& text, std::size_t byte) {
    int line = 1;
    for (std::size_t i = 0; i < byte && i < text.size(); ++i) {
        if (text[i] == '\n') ++line;
    }
    return line;
}

JumpSpec parse_jump(const Node& node, const std::string& type) {
    if (type == "merton") {
        node.require_object({"intensity", "mean", "stddev"});
        return MertonJumps{node.at("intensity").number(), node.at("mean").number(), node.at("stddev").number()};
    }
    node.require_object({"intensity", "up_prob", "up_rate", "down_rate"});
    return KouJumps{node.at("intensity").number(), node.at("up_prob").number(), node.at("up_rate").number(),
                    node.at("down_rate").number()};
}

ModelConfig parse_model(const Node& node) {
    node.require_object({"type", "vols", "correlation", "jumps", "drift_convention"});
    ModelConfig m;
    if (node.has("type")) m.type = node.at("type").string();
    if (m.type != "gbm" && m.type != "merton" && m.type != "kou") {
        node.at("type").error("unknown model type '" + m.type + "' (expected gbm, merton or kou)");
    }
    const Node vols = node.at("vols");
    m.vols = vols.numbers();
    const std::size_t n = m.vols.size();
    if (n == 0) vols.error("at least one volatility is required");
    for (std::size_t i = 0; i < n; ++i) {
        if (!(m.vols[i] > 0.0)) vols.at(i).error("volatility must be > 0");
    }

    m.corr = Eigen::MatrixXd::Identity(static_cast<Eigen::Index>(n), static_cast<Eigen::Index>(n));
    if (node.has("correlation")) {
        const Node c = node.at("correlation");
        if (c.raw().is_number()) {
            // a single off-diagonal coefficient shared by every pair
            const double rho = c.number();
            for (std::size_t i = 0; i < n; ++i) {
                for (std::size_t j = 0; j < n; ++j) {
                    if (i != j) m.corr(Eigen::Index(i), Eigen::Index(j)) = rho;
                }
            }
        } else {
            if (c.array_size() != n) c.error("expected a " + std::to_string(n) + "x" + std::to_string(n) + " matrix");
            for (std::size_t i = 0; i < n; ++i) {
                const Node row = c.at(i);
                if (row.array_size() != n) row.error("expected " + std::to_string(n) + " entries");
                for (std::size_t j = 0; j < n; ++j) m.corr(Eigen::Index(i), Eigen::Index(j)) = row.at(j).number();
            }
        }
        try {
            validate_correlation(m.corr);
        } catch (const Error& e) {
            c.error(e.what());
        }
    }

    if (m.type == "gbm") {
        if (node.has("jumps")) node.at("jumps").error("a gbm model takes no jumps");
        m.jumps.assign(n, NoJumps{});
    } else {
        const Node j = node.at("jumps");
        if (j.raw().is_object()) {
            m.jumps.assign(n, parse_jump(j, m.type));
        } else {
            if (j.array_size() != n) j.error("expected one jump specification per asset (" + std::to_string(n) + ")");
            for (std::size_t i = 0; i < n; ++i) m.jumps.push_back(parse_jump(j.at(i), m.type));
        }
        for (std::size_t i = 0; i < n; ++i) {
            try {
                validate_jumps(m.jumps[i]);
            } catch (const Error& e) {
                (j.raw().is_object() ? j : j.at(i)).error(e.what());
            }
        }
    }

    if (node.has("drift_convention")) {
        const Node d = node.at("drift_convention");
        const std::string s = d.string();
        if (s == "martingale") {
            m.drift_convention = DriftConvention::martingale;
        } else if (s == "paper_literal") {
            m.drift_convention = DriftConvention::paper_literal;
        } else {
            d.error("expected 'martingale' or 'paper_literal'");
        }
    }
    return m;
}

OptionSpec parse_option(const Node& node, std::size_t n) {
    node.require_object({"kind", "style", "strike", "maturity", "spots", "rate"});
    OptionSpec o;
    if (node.has("kind")) {
        const std::string k = node.at("kind").string();
        if (k == "basket_put") {
            o.kind = PayoffKind::basket_put;
        } else if (k == "basket_call") {
            o.kind = PayoffKind::basket_call;
        } else {
            node.at("kind").error("expected 'basket_put' or 'basket_call'");
        }
    }
    if (node.has("style")) {
        const std::string s = node.at("style").string();
        if (s == "european") {
            o.style = ExerciseStyle::european;
        } else if (s == "american") {
            o.style = ExerciseStyle::american;
        } else {
            node.at("style").error("expected 'european' or 'american'");
        }
    }
    o.strike = node.at("strike").number();
    if (!(o.strike > 0.0)) node.at("strike").error("strike must be > 0");
    o.maturity = node.at("maturity").number();
    if (!(o.maturity >= 0.0)) node.at("maturity").error("maturity must be >= 0");
    o.rate = node.at("rate").number();
    if (!(o.rate >= 0.0)) node.at("rate").error("rate must be >= 0");
    const Node spots = node.at("spots");
    o.spot = spots.numbers();
    if (o.spot.size() != n) spots.error("expected " + std::to_string(n) + " spots (one per volatility)");
    for (std::size_t i = 0; i < n; ++i) {
        if (!(o.spot[i] > 0.0)) spots.at(i).error("spot must be > 0");
    }
    return o;
}

NumericsConfig parse_numerics(const Node& node) {
    node.require_object(
        {"abscissa", "half_width", "nodes", "step", "truncation_tol", "time_steps", "exploit_symmetry"});
    NumericsConfig c;
    if (node.has("abscissa")) c.contour.abscissa = node.at("abscissa").numbers_or_scalar();
    if (node.has("half_width")) {
        c.contour.half_width = node.at("half_width").numbers_or_scalar();
        for (double b : c.contour.half_width) {
            if (!(b > 0.0)) node.at("half_width").error("half-width must be > 0");
        }
    }
    if (node.has("nodes")) {
        const Node nodes = node.at("nodes");
        if (nodes.raw().is_array()) {
            for (std::size_t i = 0; i < nodes.array_size(); ++i) c.contour.nodes.push_back(int(nodes.at(i).integer()));
        } else {
            c.contour.nodes = {int(nodes.integer())};
        }
        for (int q : c.contour.nodes) {
            if (q < 16 || q % 2 != 0) nodes.error("node counts must be even and >= 16");
        }
    }
    if (node.has("step")) {
        c.contour.step = node.at("step").number();
        if (!(c.contour.step > 0.0)) node.at("step").error("step must be > 0");
    }
    if (node.has("truncation_tol")) {
        c.contour.truncation_tol = node.at("truncation_tol").number();
        if (!(c.contour.truncation_tol > 0.0 && c.contour.truncation_tol < 1.0)) {
            node.at("truncation_tol").error("truncation_tol must lie in (0, 1)");
        }
    }
    if (node.has("exploit_symmetry")) c.contour.exploit_symmetry = node.at("exploit_symmetry").boolean();
    if (node.has("time_steps")) {
        c.time_steps = int(node.at("time_steps").integer());
        if (c.time_steps < 16) node.at("time_steps").error("time_steps must be >= 16");
    }
    return c;
}

ValidationConfig parse_validation(const Node& node) {
    node.require_object({"oracles", "mc_paths", "mc_steps", "seed", "antithetic", "binomial_steps", "exercise_dates",
                         "lsm_paths"});
    ValidationConfig v;
    if (node.has("oracles")) {
        const Node o = node.at("oracles");
        for (std::size_t i = 0; i < o.array_size(); ++i) {
            const std::string name = o.at(i).string();
            if (name != "black_scholes" && name != "binomial" && name != "mc" && name != "lsm") {
                o.at(i).error("unknown oracle '" + name + "' (expected black_scholes, binomial, mc or lsm)");
            }
            v.oracles.push_back(name);
        }
    }
    if (node.has("mc_paths")) {
        v.mc.paths = node.at("mc_paths").integer();
        if (v.mc.paths < 10000) node.at("mc_paths").error("mc_paths must be >= 10000");
    }
    if (node.has("mc_steps")) {
        v.mc.steps = int(node.at("mc_steps").integer());
        if (v.mc.steps < 1) node.at("mc_steps").error("mc_steps must be >= 1");
    }
    if (node.has("seed")) {
        const auto s = node.at("seed").integer();
        if (s < 0) node.at("seed").error("seed must be >= 0");
        v.mc.seed = static_cast<std::uint64_t>(s);
    }
    if (node.has("antithetic")) v.mc.antithetic = node.at("antithetic").boolean();
    if (node.has("binomial_steps")) {
        v.binomial_steps = int(node.at("binomial_steps").integer());
        if (v.binomial_steps < 100) node.at("binomial_steps").error("binomial_steps must be >= 100");
    }
    if (node.has("exercise_dates")) {
        v.exercise_dates = int(node.at("exercise_dates").integer());
        if (v.exercise_dates < 16) node.at("exercise_dates").error("exercise_dates must be >= 16");
    }
    if (node.has("lsm_paths")) {
        v.lsm_paths = int(node.at("lsm_paths").integer());
        if (v.lsm_paths < 10000) node.at("lsm_paths").error("lsm_paths must be >= 10000");
    }
    return v;
}

ConvergeConfig parse_converge(const Node& node) {
    node.require_object({"parameter", "start", "levels"});
    ConvergeConfig c;
    if (node.has("parameter")) {
        c.parameter = node.at("parameter").string();
        if (c.parameter != "time_steps" && c.parameter != "nodes" && c.parameter != "step") {
            node.at("parameter").error("expected 'time_steps', 'nodes' or 'step'");
        }
    }
    if (c.parameter == "nodes") c.start = 32;
    if (c.parameter == "step") c.start = 0.8;
    if (node.has("start")) {
        c.start = node.at("start").number();
        if (!(c.start > 0.0)) node.at("start").error("start must be > 0");
    }
    if (node.has("levels")) {
        c.levels = int(node.at("levels").integer());
        if (c.levels < 2 || c.levels > 12) node.at("levels").error("levels must lie in [2, 12]");
    }
    return c;
}

OutputConfig parse_output(const Node& node) {
    node.require_object({"format", "path"});
    OutputConfig o;
    if (node.has("format")) {
        try {
            o.format = parse_format(node.at("format").string());
        } catch (const std::invalid_argument& e) {
            node.at("format").error(e.what());
        }
    }
    if (node.has("path")) o.path = node.at("path").string();
    return o;
}

}  // namespace

ConfigError::ConfigError(std::string field, const std::string& message, int line)
    : std::runtime_error((line > 0 ? "line " + std::to_string(line) + ": " : std::string()) +
                         (field.empty() ? std::string() : field + ": ") + message),
      field_(std::move(field)),
      line_(line) {}

OutputFormat parse_format(const std::string& text) {
    if (text == "table") return OutputFormat::table;
    if (text == "csv") return OutputFormat::csv;
    if (text == "json") return OutputFormat::json;
    throw std::invalid_argument("unknown output format '" + text + "' (expected table, csv or json)");
}

const char* to_string(OutputFormat format) noexcept {
    switch (format) {
        case OutputFormat::csv: return "csv";
        case OutputFormat::json: return "json";
        default: return "table";
    }
}

LevyModel RunConfig::build_model() const {
    return LevyModel::risk_neutral(model.vols, model.corr, model.jumps, option.rate, model.drift_convention);
}

RunConfig parse_config(const std::string& text) {
    json doc;
    try {
        doc = json::parse(text);
    } catch (const json::parse_error& e) {
        throw ConfigError("", std::string("malformed JSON: ") + e.what(), line_of(text, e.byte));
    }
    const Node root(doc, "");
    root.require_object({"model", "option", "numerics", "validation", "converge", "output"});
    RunConfig cfg;
    cfg.model = parse_model(root.at("model"));
    cfg.option = parse_option(root.at("option"), cfg.model.vols.size());
    if (root.has("numerics")) cfg.numerics = parse_numerics(root.at("numerics"));
    if (root.has("validation")) cfg.validation = parse_validation(root.at("validation"));
    if (root.has("converge")) cfg.converge = parse_converge(root.at("converge"));
    if (root.has("output")) cfg.output = parse_output(root.at("output"));

    const std::size_t n = cfg.model.vols.size();
    const auto& c = cfg.numerics.contour;
    auto check_len = [n](std::size_t size, const char* field) {
        if (size > 1 && size != n) {
            throw ConfigError(std::string("/numerics/") + field,
                              "expected a scalar or " + std::to_string(n) + " entries");
        }
    };
    check_len(c.abscissa.size(), "abscissa");
    check_len(c.half_width.size(), "half_width");
    check_len(c.nodes.size(), "nodes");
    if (!c.nodes.empty() && c.half_width.empty()) {
        throw ConfigError("/numerics/nodes", "explicit node counts need an explicit half_width");
    }
    return cfg;
}

RunConfig load_config(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw ConfigError("", "cannot open configuration file '" + path + "'");
    std::ostringstream ss;
    ss << in.rdbuf();
    return parse_config(ss.str());
}

}  // namespace mellin::cli
