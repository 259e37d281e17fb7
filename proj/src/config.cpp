#include "occtime/config.hpp"

#include <cmath>
#include <cstdint>
#include <fstream>
#include <set>
#include <sstream>
#include <type_traits>

#include "json.hpp"

namespace occtime {

using nlohmann::json;

namespace {

void only_keys(const json& j, const std::string& where, std::initializer_list<const char*> allowed) {
    if (!j.is_object()) throw ConfigError(where + ": expected an object");
    const std::set<std::string> ok(allowed.begin(), allowed.end());
    for (const auto& item : j.items()) {
        if (!ok.count(item.key())) throw ConfigError(where + ": unknown key \"" + item.key() + "\"");
    }
}

double number(const json& j, const std::string& where) {
    if (!j.is_number()) throw ConfigError(where + ": expected a number");
    return j.get<double>();
}

template <class T>
void read(const json& obj, const char* key, const std::string& where, T& out) {
    if (!obj.contains(key)) return;
    const json& v = obj.at(key);
    const std::string path = where + "." + key;
    if constexpr (std::is_same_v<T, double> || std::is_same_v<T, std::optional<double>>) {
        out = number(v, path);
    } else {
        if (!v.is_number_integer()) throw ConfigError(path + ": expected an integer");
        if (v.is_number_unsigned()) {
            out = static_cast<T>(v.get<std::uint64_t>());
        } else {
            const auto x = v.get<std::int64_t>();
            if (x < 0 && std::is_unsigned_v<T>) throw ConfigError(path + ": must be non-negative");
            out = static_cast<T>(x);
        }
    }
}

std::vector<double> number_list(const json& j, const std::string& where) {
    if (!j.is_array()) throw ConfigError(where + ": expected an array");
    std::vector<double> out;
    for (std::size_t i = 0; i < j.size(); ++i) out.push_back(number(j[i], where + "[" + std::to_string(i) + "]"));
    return out;
}

json parse_text(const std::string& text, const std::string& what) {
    try {
        return json::parse(text);
    } catch (const json::parse_error& e) {
        throw ConfigError(what + ": " + e.what());
    }
}

std::string slurp(const std::filesystem::path& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw ConfigError("cannot open " + path.string());
    std::ostringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

StepPenalty parse_penalty(const json& j) {
    only_keys(j, "penalty", {"thresholds", "levels"});
    if (!j.contains("thresholds") || !j.contains("levels")) throw ConfigError("penalty: thresholds and levels required");
    return {number_list(j.at("thresholds"), "penalty.thresholds"), number_list(j.at("levels"), "penalty.levels")};
}

}  // namespace

std::vector<double> CurveGrid::points() const {
    std::vector<double> w(static_cast<std::size_t>(n));
    for (int i = 0; i < n; ++i) w[i] = w_min + (w_max - w_min) * i / (n - 1.0);
    w.back() = w_max;
    return w;
}

RunConfig parse_config(const std::string& text, const std::filesystem::path& base_dir) {
    const json j = parse_text(text, "config parse error");
    only_keys(j, "config", {"params", "grid", "sim", "sweep_L", "penalty"});
    if (!j.contains("params")) throw ConfigError("config: \"params\" is required");
    RunConfig cfg;
    const json& p = j.at("params");
    only_keys(p, "params", {"r", "mu", "sigma", "c", "lambda", "L"});
    for (const char* key : {"r", "mu", "sigma", "c", "lambda", "L"}) {
        if (!p.contains(key)) throw ConfigError(std::string("params.") + key + " is required");
    }
    read(p, "r", "params", cfg.params.r);
    read(p, "mu", "params", cfg.params.mu);
    read(p, "sigma", "params", cfg.params.sigma);
    read(p, "c", "params", cfg.params.c);
    read(p, "lambda", "params", cfg.params.lambda);
    read(p, "L", "params", cfg.params.L);
    try {
        cfg.params = validate(cfg.params);
    } catch (const std::invalid_argument& e) {
        throw ConfigError(std::string("params: ") + e.what());
    }
    const double cr = cfg.params.safe_level(), L = cfg.params.L;

    cfg.grid = {-L, cr, 101};
    if (j.contains("grid")) {
        const json& g = j.at("grid");
        only_keys(g, "grid", {"w_min", "w_max", "n"});
        read(g, "w_min", "grid", cfg.grid.w_min);
        read(g, "w_max", "grid", cfg.grid.w_max);
        read(g, "n", "grid", cfg.grid.n);
    }
    if (!(cfg.grid.n >= 2)) throw ConfigError("grid.n must be at least 2");
    if (!(cfg.grid.w_min < cfg.grid.w_max)) throw ConfigError("grid: w_min must be below w_max");
    if (!(cfg.grid.w_min >= -L && cfg.grid.w_max <= cr)) throw ConfigError("grid: must lie inside [-L, c/r]");

    if (j.contains("sim")) {
        const json& s = j.at("sim");
        only_keys(s, "sim", {"w0", "a0", "dt", "n_paths", "seed", "t_max", "constant_pi", "bridge"});
        read(s, "w0", "sim", cfg.sim.w0);
        read(s, "a0", "sim", cfg.sim.a0);
        read(s, "dt", "sim", cfg.sim.dt);
        read(s, "n_paths", "sim", cfg.sim.n_paths);
        read(s, "seed", "sim", cfg.sim.seed);
        read(s, "t_max", "sim", cfg.sim.t_max);
        read(s, "constant_pi", "sim", cfg.constant_pi);
        if (s.contains("bridge")) {
            if (!s.at("bridge").is_boolean()) throw ConfigError("sim.bridge: expected a boolean");
            cfg.sim.bridge = s.at("bridge").get<bool>();
        }
    }
    try {
        checked_t_max(cfg.sim, cfg.params);
    } catch (const std::invalid_argument& e) {
        throw ConfigError(e.what());
    }

    cfg.sweep_L = {0.5 * L, L, 2.0 * L};
    if (j.contains("sweep_L")) cfg.sweep_L = number_list(j.at("sweep_L"), "sweep_L");
    if (cfg.sweep_L.empty()) throw ConfigError("sweep_L: at least one value required");
    for (double x : cfg.sweep_L) {
        if (!(x > 0.0) || !std::isfinite(x)) throw ConfigError("sweep_L: values must be positive");
    }

    if (j.contains("penalty")) {
        const json& pen = j.at("penalty");
        if (pen.is_string()) {
            const std::filesystem::path path = base_dir / pen.get<std::string>();
            cfg.penalty = parse_penalty(parse_text(slurp(path), "penalty file parse error"));
        } else {
            cfg.penalty = parse_penalty(pen);
        }
        try {
            validate(*cfg.penalty, cfg.params);
        } catch (const std::invalid_argument& e) {
            throw ConfigError(e.what());
        }
    }
    return cfg;
}

RunConfig load_config(const std::filesystem::path& path) {
    return parse_config(slurp(path), path.parent_path());
}

}  // namespace occtime
