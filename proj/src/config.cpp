#include "wbrm/config.hpp"

#include <algorithm>
#include <cctype>
#include <cmath>
#include <fstream>
#include <sstream>

#include <nlohmann/json.hpp>

#include "wbrm/errors.hpp"

namespace wbrm {

int SweepConfig::effective_n(double lambda) const {
    if (!adaptive_n) return n;
    const int needed =
        static_cast<int>(std::ceil(lambda * 5.8 * std::sqrt(2.0 * b))) + 4 * (b + 2);
    return std::max(n, std::min(dense_limit, needed));
}

namespace {

std::string trim(const std::string& s) {
    std::size_t a = s.find_first_not_of(" \t\r");
    if (a == std::string::npos) return "";
    std::size_t z = s.find_last_not_of(" \t\r");
    return s.substr(a, z - a + 1);
}

struct Value {
    std::string raw;
    int line;

    double as_double() const {
        try {
            std::size_t pos = 0;
            const double v = std::stod(raw, &pos);
            if (pos != raw.size()) throw std::invalid_argument("trailing");
            return v;
        } catch (...) {
            throw ValidationError("config line " + std::to_string(line) + ": expected number, got '" + raw + "'");
        }
    }
    long as_long() const {
        const double v = as_double();
        if (v != std::floor(v)) throw ValidationError("config line " + std::to_string(line) + ": expected integer");
        return static_cast<long>(v);
    }
    bool as_bool() const {
        if (raw == "true") return true;
        if (raw == "false") return false;
        throw ValidationError("config line " + std::to_string(line) + ": expected true/false");
    }
    std::string as_string() const {
        if (raw.size() >= 2 && raw.front() == '"' && raw.back() == '"')
            return raw.substr(1, raw.size() - 2);
        return raw;
    }
    std::vector<double> as_array() const {
        if (raw.size() < 2 || raw.front() != '[' || raw.back() != ']')
            throw ValidationError("config line " + std::to_string(line) + ": expected [a, b, ...]");
        std::vector<double> out;
        std::string body = raw.substr(1, raw.size() - 2);
        std::stringstream ss(body);
        std::string item;
        while (std::getline(ss, item, ',')) {
            item = trim(item);
            if (item.empty()) continue;
            try {
                out.push_back(std::stod(item));
            } catch (...) {
                throw ValidationError("config line " + std::to_string(line) + ": bad array element '" + item + "'");
            }
        }
        return out;
    }
};

std::vector<double> make_grid(double lo, double hi, double step) {
    if (!(step > 0.0) || hi < lo) throw ValidationError("config: bad lambda range");
    std::vector<double> grid;
    for (double v = lo; v <= hi + 1e-9 * step; v += step) grid.push_back(v);
    return grid;
}

}  // namespace

SweepConfig parse_config_text(const std::string& text) {
    SweepConfig cfg;
    std::istringstream in(text);
    std::string line;
    std::string section;
    int lineno = 0;

    double lambda_min = 0, lambda_max = -1, lambda_step = 0;
    bool have_range = false;

    while (std::getline(in, line)) {
        ++lineno;
        const std::size_t hash = line.find('#');
        if (hash != std::string::npos) line = line.substr(0, hash);
        line = trim(line);
        if (line.empty()) continue;

        if (line.front() == '[') {
            if (line.back() != ']')
                throw ValidationError("config line " + std::to_string(lineno) + ": bad section header");
            section = trim(line.substr(1, line.size() - 2));
            continue;
        }

        const std::size_t eq = line.find('=');
        if (eq == std::string::npos)
            throw ValidationError("config line " + std::to_string(lineno) + ": expected key = value");
        std::string key = trim(line.substr(0, eq));
        if (!section.empty()) key = section + "." + key;
        const Value v{trim(line.substr(eq + 1)), lineno};

        if (key == "n" || key == "run.n") cfg.n = static_cast<int>(v.as_long());
        else if (key == "b" || key == "run.b") cfg.b = static_cast<int>(v.as_long());
        else if (key == "lambda_grid" || key == "run.lambda_grid") cfg.lambda_grid = v.as_array();
        else if (key == "lambda_min" || key == "run.lambda_min") { lambda_min = v.as_double(); have_range = true; }
        else if (key == "lambda_max" || key == "run.lambda_max") { lambda_max = v.as_double(); have_range = true; }
        else if (key == "lambda_step" || key == "run.lambda_step") { lambda_step = v.as_double(); have_range = true; }
        else if (key == "realizations" || key == "run.realizations") cfg.realizations = static_cast<int>(v.as_long());
        else if (key == "master_seed" || key == "run.master_seed") cfg.master_seed = static_cast<std::uint64_t>(v.as_long());
        else if (key == "window_lo" || key == "run.window_lo") cfg.window_lo = v.as_double();
        else if (key == "window_hi" || key == "run.window_hi") cfg.window_hi = v.as_double();
        else if (key == "state_cap" || key == "run.state_cap") cfg.state_cap = static_cast<int>(v.as_long());
        else if (key == "output_dir" || key == "run.output_dir") cfg.output_dir = v.as_string();
        else if (key == "dense_limit" || key == "run.dense_limit") cfg.dense_limit = static_cast<int>(v.as_long());
        else if (key == "adaptive_n" || key == "run.adaptive_n") cfg.adaptive_n = v.as_bool();
        else if (key == "fit.small_window") {
            const auto a = v.as_array();
            if (a.size() != 2) throw ValidationError("config: fit.small_window wants [lo, hi]");
            cfg.small_fit_lo = a[0];
            cfg.small_fit_hi = a[1];
        } else if (key == "fit.linear_window") {
            const auto a = v.as_array();
            if (a.size() != 2) throw ValidationError("config: fit.linear_window wants [lo, hi]");
            cfg.linear_fit_lo = a[0];
            cfg.linear_fit_hi = a[1];
        } else if (key == "fit.loglarge_window") {
            const auto a = v.as_array();
            if (a.size() != 2) throw ValidationError("config: fit.loglarge_window wants [lo, hi]");
            cfg.loglarge_fit_lo = a[0];
            cfg.loglarge_fit_hi = a[1];
        } else if (key == "dist.b_values") cfg.dist_b_values = v.as_array();
        else if (key == "dist.lambdas") cfg.dist_lambdas = v.as_array();
        else if (key == "dist.x_samples") cfg.x_samples = v.as_long();
        else if (key == "dist.h_trials") cfg.h_trials = v.as_long();
        else throw ValidationError("config line " + std::to_string(lineno) + ": unknown key '" + key + "'");
    }

    if (have_range) {
        if (!cfg.lambda_grid.empty())
            throw ValidationError("config: give either lambda_grid or a lambda range, not both");
        cfg.lambda_grid = make_grid(lambda_min, lambda_max, lambda_step);
    }
    if (!cfg.lambda_grid.empty()) {
        for (std::size_t i = 1; i < cfg.lambda_grid.size(); ++i)
            if (!(cfg.lambda_grid[i] > cfg.lambda_grid[i - 1]))
                throw ValidationError("config: lambda_grid must be strictly increasing");
    }
    if (cfg.realizations < 1) throw ValidationError("config: realizations must be >= 1");
    if (!(cfg.window_lo >= 0.0 && cfg.window_lo < cfg.window_hi && cfg.window_hi <= 1.0))
        throw ValidationError("config: need 0 <= window_lo < window_hi <= 1");
    return cfg;
}

SweepConfig parse_config_file(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw ValidationError("config file not found: " + path);
    std::stringstream ss;
    ss << in.rdbuf();
    return parse_config_text(ss.str());
}

std::string config_to_json(const SweepConfig& cfg) {
    nlohmann::json j;
    j["n"] = cfg.n;
    j["b"] = cfg.b;
    j["lambda_grid"] = cfg.lambda_grid;
    j["realizations"] = cfg.realizations;
    j["master_seed"] = cfg.master_seed;
    j["window_lo"] = cfg.window_lo;
    j["window_hi"] = cfg.window_hi;
    j["state_cap"] = cfg.state_cap;
    j["output_dir"] = cfg.output_dir;
    j["dense_limit"] = cfg.dense_limit;
    j["adaptive_n"] = cfg.adaptive_n;
    j["fit"] = {{"small_window", {cfg.small_fit_lo, cfg.small_fit_hi}},
                {"linear_window", {cfg.linear_fit_lo, cfg.linear_fit_hi}},
                {"loglarge_window", {cfg.loglarge_fit_lo, cfg.loglarge_fit_hi}}};
    j["dist"] = {{"b_values", cfg.dist_b_values},
                 {"lambdas", cfg.dist_lambdas},
                 {"x_samples", cfg.x_samples},
                 {"h_trials", cfg.h_trials}};
    return j.dump(2);
}

}  // namespace wbrm
