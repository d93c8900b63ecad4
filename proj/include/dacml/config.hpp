#pragma once

#include "dacml/agent.hpp"
#include "dacml/errors.hpp"
#include "dacml/experiment.hpp"

#include <json.hpp>

#include <cstdint>
#include <fstream>
#include <functional>
#include <optional>
#include <string>
#include <string_view>
#include <type_traits>
#include <vector>

namespace dacml {

using Json = nlohmann::json;

// ---------------------------------------------------------------------------
// Experiment config <-> JSON
//
// Every key is optional on input; missing keys keep their defaults. Unknown
// keys are rejected so typos surface as config errors.
// ---------------------------------------------------------------------------

namespace detail {

inline void reject_unknown(const Json &j, std::string_view where, std::initializer_list<std::string_view> known) {
    if (!j.is_object()) throw ConfigError(std::string(where) + " must be an object");
    for (auto it = j.begin(); it != j.end(); ++it) {
        bool ok = false;
        for (auto k : known) ok = ok || it.key() == k;
        if (!ok) throw ConfigError("unknown config key '" + std::string(where) + "." + it.key() + "'");
    }
}

template <typename T>
void read(const Json &j, const char *key, T &out, std::string_view where) {
    if (!j.contains(key)) return;
    const Json &v = j.at(key);
    if constexpr (std::is_unsigned_v<T>) {
        if (!v.is_number_unsigned())
            throw ConfigError("config key '" + std::string(where) + "." + key + "' must be a non-negative integer");
    } else if constexpr (std::is_integral_v<T>) {
        if (!v.is_number_integer())
            throw ConfigError("config key '" + std::string(where) + "." + key + "' must be an integer");
    }
    try {
        out = v.get<T>();
    } catch (const Json::exception &) {
        throw ConfigError("config key '" + std::string(where) + "." + key + "' has the wrong type");
    }
}

} // namespace detail

[[nodiscard]] inline Json to_json(const MazeConfig &m) {
    Json palette = Json::array();
    for (const Rgb &c : m.wall_palette) palette.push_back({c.r, c.g, c.b});
    return {{"grid_size", m.grid_size},         {"wall_palette", palette},
            {"view_columns", m.view_columns},   {"field_of_view", m.field_of_view_deg},
            {"max_steps", m.max_steps},         {"initial_reward", m.initial_reward}};
}

[[nodiscard]] inline Json to_json(const AgentConfig &a) {
    return {
        {"reactive", {{"persistence", a.reactive.persistence}}},
        {"autoencoder",
         {{"embedding_dim", a.autoencoder.embedding_dim},
          {"learning_rate", a.autoencoder.learning_rate},
          {"init_scale", a.autoencoder.init_scale},
          {"re_threshold", a.gate.re_threshold}}},
        {"memory",
         {{"stm_capacity", a.memory.stm_capacity},
          {"ltm_capacity", a.memory.ltm_capacity},
          {"trigger_decay", a.memory.trigger_decay},
          {"trigger_ceiling", a.memory.trigger_ceiling}}},
        {"selection",
         {{"sigma", a.selection.sigma},
          {"abs_threshold", a.selection.abs_threshold},
          {"prop_threshold", a.selection.prop_threshold},
          {"distance_decay", a.selection.distance_decay}}},
    };
}

[[nodiscard]] inline Json to_json(const ExperimentConfig &c) {
    Json agents = Json::array();
    for (AgentKind k : c.agents) agents.push_back(std::string(to_string(k)));
    Json j = to_json(c.agent);
    j["runs"] = c.runs;
    j["episodes_per_run"] = c.episodes_per_run;
    j["agents"] = agents;
    j["base_seed"] = c.base_seed;
    j["window"] = c.window;
    j["report_window"] = c.report_window;
    j["workers"] = c.workers;
    j["out_dir"] = c.out_dir;
    j["maze"] = to_json(c.maze);
    return j;
}

inline void apply_json(const Json &j, MazeConfig &m) {
    detail::reject_unknown(j, "maze",
                           {"grid_size", "wall_palette", "view_columns", "field_of_view", "max_steps", "initial_reward"});
    detail::read(j, "grid_size", m.grid_size, "maze");
    detail::read(j, "view_columns", m.view_columns, "maze");
    detail::read(j, "field_of_view", m.field_of_view_deg, "maze");
    detail::read(j, "max_steps", m.max_steps, "maze");
    detail::read(j, "initial_reward", m.initial_reward, "maze");
    if (j.contains("wall_palette")) {
        const Json &p = j.at("wall_palette");
        if (!p.is_array()) throw ConfigError("maze.wall_palette must be a list of [r, g, b] triples");
        m.wall_palette.clear();
        for (const Json &c : p) {
            if (!c.is_array() || c.size() != 3 || !c[0].is_number() || !c[1].is_number() || !c[2].is_number())
                throw ConfigError("maze.wall_palette entries must be [r, g, b] triples");
            m.wall_palette.push_back({c[0].get<double>(), c[1].get<double>(), c[2].get<double>()});
        }
    }
}

inline void apply_json(const Json &j, ExperimentConfig &c) {
    detail::reject_unknown(j, "config",
                           {"runs", "episodes_per_run", "agents", "base_seed", "window", "report_window", "workers",
                            "out_dir", "maze", "reactive", "autoencoder", "memory", "selection"});
    detail::read(j, "runs", c.runs, "config");
    detail::read(j, "episodes_per_run", c.episodes_per_run, "config");
    detail::read(j, "base_seed", c.base_seed, "config");
    detail::read(j, "window", c.window, "config");
    detail::read(j, "report_window", c.report_window, "config");
    detail::read(j, "workers", c.workers, "config");
    detail::read(j, "out_dir", c.out_dir, "config");
    if (j.contains("agents")) {
        const Json &a = j.at("agents");
        if (!a.is_array()) throw ConfigError("agents must be a list of agent names");
        c.agents.clear();
        for (const Json &name : a) {
            const auto kind = name.is_string() ? parse_agent_kind(name.get<std::string>()) : std::nullopt;
            if (!kind) throw ConfigError("unknown agent kind " + name.dump());
            c.agents.push_back(*kind);
        }
    }
    if (j.contains("maze")) apply_json(j.at("maze"), c.maze);
    if (j.contains("reactive")) {
        const Json &r = j.at("reactive");
        detail::reject_unknown(r, "reactive", {"persistence"});
        detail::read(r, "persistence", c.agent.reactive.persistence, "reactive");
    }
    if (j.contains("autoencoder")) {
        const Json &a = j.at("autoencoder");
        detail::reject_unknown(a, "autoencoder", {"embedding_dim", "learning_rate", "init_scale", "re_threshold"});
        detail::read(a, "embedding_dim", c.agent.autoencoder.embedding_dim, "autoencoder");
        detail::read(a, "learning_rate", c.agent.autoencoder.learning_rate, "autoencoder");
        detail::read(a, "init_scale", c.agent.autoencoder.init_scale, "autoencoder");
        detail::read(a, "re_threshold", c.agent.gate.re_threshold, "autoencoder");
    }
    if (j.contains("memory")) {
        const Json &m = j.at("memory");
        detail::reject_unknown(m, "memory", {"stm_capacity", "ltm_capacity", "trigger_decay", "trigger_ceiling"});
        detail::read(m, "stm_capacity", c.agent.memory.stm_capacity, "memory");
        detail::read(m, "ltm_capacity", c.agent.memory.ltm_capacity, "memory");
        detail::read(m, "trigger_decay", c.agent.memory.trigger_decay, "memory");
        detail::read(m, "trigger_ceiling", c.agent.memory.trigger_ceiling, "memory");
    }
    if (j.contains("selection")) {
        const Json &s = j.at("selection");
        detail::reject_unknown(s, "selection", {"sigma", "abs_threshold", "prop_threshold", "distance_decay"});
        detail::read(s, "sigma", c.agent.selection.sigma, "selection");
        detail::read(s, "abs_threshold", c.agent.selection.abs_threshold, "selection");
        detail::read(s, "prop_threshold", c.agent.selection.prop_threshold, "selection");
        detail::read(s, "distance_decay", c.agent.selection.distance_decay, "selection");
    }
}

// ---------------------------------------------------------------------------
// Presets and overrides
// ---------------------------------------------------------------------------

/// Desk-scale default: 5 runs x 400 episodes x all three agents.
[[nodiscard]] inline ExperimentConfig default_config() { return ExperimentConfig{}; }

/// 20 simulations of 1000 episodes each.
[[nodiscard]] inline ExperimentConfig paper_scale_config() {
    ExperimentConfig c;
    c.runs = 20;
    c.episodes_per_run = 1000;
    return c;
}

[[nodiscard]] inline std::optional<ExperimentConfig> preset(std::string_view name) {
    if (name == "default" || name == "desk-scale") return default_config();
    if (name == "paper-scale") return paper_scale_config();
    return std::nullopt;
}

[[nodiscard]] inline Json parse_json_text(const std::string &text, const std::string &origin) {
    try {
        return Json::parse(text);
    } catch (const Json::parse_error &e) {
        throw ConfigError(origin + ": " + e.what());
    }
}

/// Applies a config file on top of `base`.
[[nodiscard]] inline ExperimentConfig load_config_file(const std::string &path, ExperimentConfig base = {}) {
    std::ifstream in(path);
    if (!in) throw ConfigError("cannot open config file '" + path + "'");
    std::string text((std::istreambuf_iterator<char>(in)), std::istreambuf_iterator<char>());
    apply_json(parse_json_text(text, path), base);
    return base;
}

/// `key=value` with a dotted key such as `selection.sigma=0.5`. The value is
/// parsed as JSON and falls back to a plain string.
inline void apply_override(ExperimentConfig &cfg, std::string_view assignment) {
    const auto eq = assignment.find('=');
    if (eq == std::string_view::npos || eq == 0)
        throw ConfigError("override '" + std::string(assignment) + "' is not of the form key=value");
    const std::string key(assignment.substr(0, eq));
    const std::string raw(assignment.substr(eq + 1));
    Json value;
    try {
        value = Json::parse(raw);
    } catch (const Json::parse_error &) {
        value = raw;
    }
    Json patch = Json::object();
    Json *node = &patch;
    std::size_t start = 0;
    for (;;) {
        const auto dot = key.find('.', start);
        const std::string part = key.substr(start, dot == std::string::npos ? std::string::npos : dot - start);
        if (part.empty()) throw ConfigError("override key '" + key + "' is malformed");
        if (dot == std::string::npos) {
            (*node)[part] = value;
            break;
        }
        node = &(*node)[part];
        start = dot + 1;
    }
    apply_json(patch, cfg);
}

/// Stable 64-bit FNV-1a digest of the layer parameters.
[[nodiscard]] inline std::uint64_t parameter_digest(const AgentConfig &cfg) {
    const std::string text = to_json(cfg).dump();
    std::uint64_t h = 0xcbf29ce484222325ULL;
    for (unsigned char ch : text) {
        h ^= ch;
        h *= 0x100000001b3ULL;
    }
    return h;
}

} // namespace dacml
