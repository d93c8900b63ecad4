#pragma once

#include "dacml/config.hpp"
#include "dacml/csv.hpp"
#include "dacml/experiment.hpp"
#include "dacml/svg_plot.hpp"

#include <CLI11.hpp>

#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <iomanip>
#include <map>
#include <ostream>
#include <sstream>
#include <string>
#include <vector>

namespace dacml::cli {

/// Process exit codes.
enum ExitCode : int { kOk = 0, kRuntimeFailure = 1, kUsageError = 2 };

/// Environment variable consulted for the worker count when neither the
/// config nor --workers sets one.
inline constexpr const char *kWorkersEnv = "DACML_WORKERS";

namespace detail {

[[nodiscard]] inline std::string fmt_opt(const std::optional<double> &v) {
    return v ? format_real(*v) : std::string("-");
}

inline void write_file(const std::filesystem::path &path, const std::string &contents) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw std::runtime_error("cannot write " + path.string());
    out << contents;
    if (!out) throw std::runtime_error("write failed for " + path.string());
}

[[nodiscard]] inline std::vector<EpisodeRecord> load_results(const std::string &path) {
    std::ifstream in(path);
    if (!in) throw CsvFormatError(0, "cannot open '" + path + "'");
    auto records = read_results_csv(in);
    if (records.empty()) throw CsvFormatError(2, "'" + path + "' has no data rows");
    return records;
}

} // namespace detail

struct RunOptions {
    std::string config = "default";
    std::string preset;
    std::vector<std::string> agents;
    std::optional<std::size_t> runs;
    std::optional<std::size_t> episodes;
    std::vector<std::string> overrides;
};

struct GlobalOptions {
    std::optional<std::uint64_t> seed;
    std::optional<std::size_t> workers;
    std::optional<std::string> out_dir;
};

/// Builds the effective experiment config: preset, then config file, then
/// flags. Throws ConfigError on any invalid input.
[[nodiscard]] inline ExperimentConfig resolve_config(const RunOptions &opt, const GlobalOptions &global) {
    ExperimentConfig cfg;
    if (!opt.preset.empty()) {
        auto p = preset(opt.preset);
        if (!p) throw ConfigError("unknown preset '" + opt.preset + "' (expected default or paper-scale)");
        cfg = *p;
    }
    if (!opt.config.empty() && opt.config != "default") cfg = load_config_file(opt.config, cfg);
    if (!opt.agents.empty()) {
        cfg.agents.clear();
        for (const auto &name : opt.agents) {
            const auto kind = parse_agent_kind(name);
            if (!kind) throw ConfigError("unknown agent '" + name + "' (expected dacml, dacml-nobias, reactive)");
            cfg.agents.push_back(*kind);
        }
    }
    if (opt.runs) cfg.runs = *opt.runs;
    if (opt.episodes) cfg.episodes_per_run = *opt.episodes;
    for (const auto &o : opt.overrides) apply_override(cfg, o);
    if (global.seed) cfg.base_seed = *global.seed;
    if (global.workers) cfg.workers = *global.workers;
    if (global.out_dir) cfg.out_dir = *global.out_dir;
    if (cfg.workers == 0) {
        if (const char *env = std::getenv(kWorkersEnv)) {
            const auto n = dacml::detail::parse_int<std::size_t>(env);
            if (!n) throw ConfigError(std::string(kWorkersEnv) + " must be a non-negative integer");
            cfg.workers = *n;
        }
    }
    cfg.validate();
    if (!goal_reachable_from_corners(cfg.maze))
        throw ConfigError("goal is not reachable from every corner within maze.max_steps");
    return cfg;
}

inline int cmd_run(const RunOptions &opt, const GlobalOptions &global, std::ostream &out, std::ostream &err) {
    ExperimentConfig cfg;
    try {
        cfg = resolve_config(opt, global);
    } catch (const ConfigError &e) {
        err << "config error: " << e.what() << '\n';
        return kUsageError;
    }

    namespace fs = std::filesystem;
    const fs::path dir(cfg.out_dir);
    const fs::path partial = dir / "results.partial.csv";
    try {
        fs::create_directories(dir);
        detail::write_file(dir / "config.json", to_json(cfg).dump(2) + "\n");
        {
            std::ofstream p(partial, std::ios::binary);
            if (!p) throw std::runtime_error("cannot write " + partial.string());
            p << kResultsHeader << '\n';
        }

        bool partial_ok = true;
        const ExperimentResult result = run_experiment(cfg, [&](const RunResult &run) {
            if (!partial_ok || run.failure) return;
            std::ofstream p(partial, std::ios::binary | std::ios::app);
            std::ostringstream rows;
            write_results_csv(rows, run.records);
            const std::string body = rows.str();
            p << body.substr(body.find('\n') + 1);
            partial_ok = static_cast<bool>(p);
        });

        std::ostringstream results;
        write_results_csv(results, result.records);
        detail::write_file(dir / "results.csv", results.str());
        std::ostringstream summary;
        write_summary_csv(summary, summarize(result.records, cfg.window));
        detail::write_file(dir / "summary.csv", summary.str());
        fs::remove(partial);

        for (AgentKind k : cfg.agents) {
            const auto m = final_window_means(result.records, k, cfg.report_window);
            if (!m) continue;
            out << std::left << std::setw(13) << to_string(k) << " final-" << cfg.report_window
                << " reward " << format_real(m->reward) << "  steps " << format_real(m->steps) << "  entropy "
                << detail::fmt_opt(m->entropy) << '\n';
        }
        for (const auto &f : result.failures)
            err << "run failed: " << to_string(f.agent) << " #" << f.run << ": " << f.message << '\n';
        out << "wrote " << (dir / "results.csv").string() << " and " << (dir / "summary.csv").string() << '\n';
        return result.failures.empty() ? kOk : kRuntimeFailure;
    } catch (const std::exception &e) {
        err << "run failed: " << e.what() << '\n';
        return kRuntimeFailure;
    }
}

inline int cmd_plot(const std::string &input, const std::string &output, const std::string &metric_name,
                    std::ostream &out, std::ostream &err) {
    const auto metric = parse_plot_metric(metric_name);
    if (!metric) {
        err << "unknown metric '" << metric_name << "' (expected all, reward, steps, entropy)\n";
        return kUsageError;
    }
    std::vector<SummaryRow> rows;
    try {
        std::ifstream in(input);
        if (!in) throw CsvFormatError(0, "cannot open '" + input + "'");
        rows = read_summary_csv(in);
        if (rows.empty()) throw CsvFormatError(2, "no data rows");
    } catch (const CsvFormatError &e) {
        err << input << ": " << e.what() << '\n';
        return kUsageError;
    }
    try {
        detail::write_file(output, render_learning_curves_svg(rows, *metric));
    } catch (const std::exception &e) {
        err << e.what() << '\n';
        return kRuntimeFailure;
    }
    out << "wrote " << output << '\n';
    return kOk;
}

/// Final-window means per agent of each file, and their differences. Shared
/// agents are differenced file-to-file (second minus first); when the files
/// share no agent, every pair across the two files is differenced.
inline int cmd_compare(const std::string &first, const std::string &second, std::size_t window, std::ostream &out,
                       std::ostream &err) {
    std::vector<EpisodeRecord> a;
    std::vector<EpisodeRecord> b;
    try {
        a = detail::load_results(first);
        b = detail::load_results(second);
    } catch (const CsvFormatError &e) {
        err << "compare: " << e.what() << '\n';
        return kUsageError;
    }
    if (window < 1) {
        err << "compare: --window must be >= 1\n";
        return kUsageError;
    }

    auto means = [window](const std::vector<EpisodeRecord> &records) {
        std::map<AgentKind, WindowMeans> m;
        for (AgentKind k : kAllAgentKinds)
            if (auto w = final_window_means(records, k, window)) m[k] = *w;
        return m;
    };
    const auto ma = means(a);
    const auto mb = means(b);

    auto row = [&out](const std::string &label, double reward, double steps, const std::optional<double> &h) {
        out << std::left << std::setw(34) << label << std::right << std::setw(12) << format_real(reward)
            << std::setw(12) << format_real(steps) << std::setw(12) << detail::fmt_opt(h) << '\n';
    };
    out << "final-window means (last " << window << " episodes)\n";
    out << std::left << std::setw(34) << "source:agent" << std::right << std::setw(12) << "reward" << std::setw(12)
        << "steps" << std::setw(12) << "entropy" << '\n';
    for (const auto &[k, m] : ma) row("A:" + std::string(to_string(k)), m.reward, m.steps, m.entropy);
    for (const auto &[k, m] : mb) row("B:" + std::string(to_string(k)), m.reward, m.steps, m.entropy);

    auto diff = [&](const std::string &label, const WindowMeans &x, const WindowMeans &y) {
        std::optional<double> dh;
        if (x.entropy && y.entropy) dh = *y.entropy - *x.entropy;
        row(label, y.reward - x.reward, y.steps - x.steps, dh);
    };
    out << "differences (B - A)\n";
    bool shared = false;
    for (const auto &[k, m] : ma) {
        if (auto it = mb.find(k); it != mb.end()) {
            shared = true;
            diff(std::string(to_string(k)), m, it->second);
        }
    }
    if (!shared) {
        for (const auto &[ka, xa] : ma)
            for (const auto &[kb, xb] : mb)
                diff(std::string(to_string(kb)) + " - " + std::string(to_string(ka)), xa, xb);
    }
    return kOk;
}

/// Entry point shared by the dacml executable and the tests.
inline int run_cli(int argc, const char *const *argv, std::ostream &out, std::ostream &err) {
    CLI::App app{"Three-layer episodic-memory foraging agents: run experiments, plot and compare results."};
    app.require_subcommand(1);

    GlobalOptions global;
    std::uint64_t seed = 0;
    std::size_t workers = 0;
    std::string out_dir;
    auto *seed_opt = app.add_option("--seed", seed, "Base seed for every run");
    auto *workers_opt = app.add_option("--workers", workers, "Parallel runs (0 = all cores)");
    auto *out_opt = app.add_option("--out-dir", out_dir, "Directory for run outputs");

    RunOptions run_opt;
    std::size_t runs = 0;
    std::size_t episodes = 0;
    auto *run = app.add_subcommand("run", "Run an experiment and write results.csv / summary.csv");
    run->fallthrough();
    run->add_option("--config", run_opt.config, "Config file path, or 'default'");
    run->add_option("--preset", run_opt.preset, "Base preset: default or paper-scale");
    run->add_option("--agents", run_opt.agents, "Agent kinds (dacml, dacml-nobias, reactive)")->delimiter(',');
    auto *runs_opt = run->add_option("--runs", runs, "Simulations per agent kind");
    auto *episodes_opt = run->add_option("--episodes", episodes, "Episodes per simulation");
    run->add_option("--set", run_opt.overrides, "Config override key=value (repeatable)");

    std::string plot_in;
    std::string plot_out;
    std::string plot_metric = "all";
    auto *plot = app.add_subcommand("plot", "Render summary.csv as an SVG figure");
    plot->fallthrough();
    plot->add_option("--input", plot_in, "summary.csv to plot")->required();
    plot->add_option("--output", plot_out, "Output SVG path")->required();
    plot->add_option("--metric", plot_metric, "all, reward, steps or entropy");

    std::string cmp_a;
    std::string cmp_b;
    std::size_t cmp_window = 50;
    auto *compare = app.add_subcommand("compare", "Compare final-window means of two results.csv files");
    compare->fallthrough();
    compare->add_option("first", cmp_a, "First results.csv")->required();
    compare->add_option("second", cmp_b, "Second results.csv")->required();
    compare->add_option("--window", cmp_window, "Episodes in the final window");

    try {
        app.parse(argc, argv);
    } catch (const CLI::CallForHelp &) {
        out << app.help();
        return kOk;
    } catch (const CLI::CallForAllHelp &) {
        out << app.help("", CLI::AppFormatMode::All);
        return kOk;
    } catch (const CLI::ParseError &e) {
        err << e.what() << '\n';
        return kUsageError;
    }

    if (*seed_opt) global.seed = seed;
    if (*workers_opt) global.workers = workers;
    if (*out_opt) global.out_dir = out_dir;
    if (*runs_opt) run_opt.runs = runs;
    if (*episodes_opt) run_opt.episodes = episodes;

    if (run->parsed()) return cmd_run(run_opt, global, out, err);
    if (plot->parsed()) return cmd_plot(plot_in, plot_out, plot_metric, out, err);
    return cmd_compare(cmp_a, cmp_b, cmp_window, out, err);
}

} // namespace dacml::cli
