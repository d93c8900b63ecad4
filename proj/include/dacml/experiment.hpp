#pragma once

#include "dacml/agent.hpp"
#include "dacml/errors.hpp"
#include "dacml/maze.hpp"
#include "dacml/metrics.hpp"
#include "dacml/random.hpp"

#include <algorithm>
#include <atomic>
#include <cstdint>
#include <cstdio>
#include <functional>
#include <map>
#include <mutex>
#include <optional>
#include <ostream>
#include <string>
#include <thread>
#include <vector>

namespace dacml {

struct ExperimentConfig {
    std::size_t runs = 5;
    std::size_t episodes_per_run = 400;
    std::vector<AgentKind> agents{kAllAgentKinds.begin(), kAllAgentKinds.end()};
    MazeConfig maze;
    AgentConfig agent;
    std::uint64_t base_seed = 20211;
    /// Smoothing window for summary.csv.
    std::size_t window = 20;
    /// Episodes averaged for the first/final-window comparisons.
    std::size_t report_window = 50;
    /// 0 picks the hardware concurrency.
    std::size_t workers = 0;
    std::string out_dir = "out";

    void validate() const {
        if (runs < 1) throw ConfigError("runs must be >= 1");
        if (episodes_per_run < 1) throw ConfigError("episodes_per_run must be >= 1");
        if (agents.empty()) throw ConfigError("at least one agent kind is required");
        if (window < 1) throw ConfigError("window must be >= 1");
        if (report_window < 1) throw ConfigError("report_window must be >= 1");
        maze.validate();
        agent.validate();
    }
};

struct EpisodeRecord {
    AgentKind agent = AgentKind::Reactive;
    std::size_t run = 0;
    std::size_t episode = 0;
    double reward = 0.0;
    int steps = 0;
    std::optional<double> mean_entropy;
    /// Share of steps whose action came from the contextual layer.
    double contextual_fraction = 0.0;
};

struct RunFailure {
    AgentKind agent = AgentKind::Reactive;
    std::size_t run = 0;
    std::string message;
};

struct RunResult {
    AgentKind agent = AgentKind::Reactive;
    std::size_t run = 0;
    std::vector<EpisodeRecord> records;
    std::optional<std::string> failure;
};

struct ExperimentResult {
    /// Sorted by (agent, run, episode); failed runs contribute nothing.
    std::vector<EpisodeRecord> records;
    std::vector<RunFailure> failures;
};

[[nodiscard]] inline std::uint64_t run_seed(std::uint64_t base_seed, AgentKind kind, std::size_t run) noexcept {
    return derive_seed(base_seed, (static_cast<std::uint64_t>(kind) << 32) | static_cast<std::uint64_t>(run));
}

/// Called after each episode with the agent as it stands at episode end.
using EpisodeObserver = std::function<void(const Agent &, const EpisodeRecord &)>;

/// Plays one episode to completion. Returns the record (run/agent fields
/// left for the caller).
inline EpisodeRecord play_episode(MazeEnv &env, Agent &agent, std::uint64_t reset_seed, Rng &rng) {
    auto [pose, obs] = env.reset(reset_seed);
    (void)pose;
    EntropyAccumulator entropy;
    std::size_t contextual = 0;
    for (;;) {
        const StepLog log = agent.step(obs, rng);
        entropy.add(log);
        contextual += log.contextual ? 1 : 0;
        Transition tr = env.step(log.action);
        if (tr.outcome.done) {
            agent.on_episode_end(tr.outcome);
            EpisodeRecord rec;
            rec.agent = agent.kind();
            rec.reward = tr.outcome.reward;
            rec.steps = tr.outcome.step_index + 1;
            rec.mean_entropy = entropy.mean();
            rec.contextual_fraction = static_cast<double>(contextual) / rec.steps;
            return rec;
        }
        obs = std::move(tr.outcome.observation);
    }
}

/// One simulation: a fresh agent and environment, episodes played in order
/// with memory carried across them. Learning failures mark the run failed.
inline RunResult run_single(const ExperimentConfig &cfg, AgentKind kind, std::size_t run,
                            const EpisodeObserver &observer = {}) {
    RunResult result;
    result.agent = kind;
    result.run = run;
    const std::uint64_t seed = run_seed(cfg.base_seed, kind, run);
    Rng env_rng(derive_seed(seed, 1));
    Rng action_rng(derive_seed(seed, 2));
    try {
        MazeEnv env(cfg.maze);
        Agent agent(kind, cfg.agent, cfg.maze, derive_seed(seed, 3));
        result.records.reserve(cfg.episodes_per_run);
        for (std::size_t e = 0; e < cfg.episodes_per_run; ++e) {
            EpisodeRecord rec = play_episode(env, agent, env_rng(), action_rng);
            rec.run = run;
            rec.episode = e;
            if (observer) observer(agent, rec);
            result.records.push_back(rec);
        }
    } catch (const NumericalError &err) {
        result.records.clear();
        result.failure = err.what();
    }
    return result;
}

[[nodiscard]] inline std::size_t resolve_workers(std::size_t requested) noexcept {
    if (requested > 0) return requested;
    const unsigned hw = std::thread::hardware_concurrency();
    return hw > 0 ? hw : 1;
}

/// Called once per finished run, serialized, in completion order.
using RunSink = std::function<void(const RunResult &)>;

/// Every (agent kind, run) pair, spread over a worker pool. Output ordering
/// does not depend on scheduling.
inline ExperimentResult run_experiment(const ExperimentConfig &cfg, const RunSink &sink = {}) {
    cfg.validate();
    struct Job {
        AgentKind kind;
        std::size_t run;
    };
    std::vector<Job> jobs;
    for (AgentKind k : cfg.agents)
        for (std::size_t r = 0; r < cfg.runs; ++r) jobs.push_back({k, r});

    std::vector<RunResult> results(jobs.size());
    std::atomic<std::size_t> next{0};
    std::mutex sink_mutex;
    auto worker = [&] {
        for (std::size_t j = next++; j < jobs.size(); j = next++) {
            results[j] = run_single(cfg, jobs[j].kind, jobs[j].run);
            if (sink) {
                std::lock_guard lock(sink_mutex);
                sink(results[j]);
            }
        }
    };
    const std::size_t n_workers = std::min(resolve_workers(cfg.workers), jobs.size());
    if (n_workers <= 1) {
        worker();
    } else {
        std::vector<std::thread> pool;
        pool.reserve(n_workers);
        for (std::size_t w = 0; w < n_workers; ++w) pool.emplace_back(worker);
        for (auto &t : pool) t.join();
    }

    ExperimentResult out;
    for (auto &r : results) {
        if (r.failure) {
            out.failures.push_back({r.agent, r.run, *r.failure});
            continue;
        }
        out.records.insert(out.records.end(), r.records.begin(), r.records.end());
    }
    std::sort(out.records.begin(), out.records.end(), [](const EpisodeRecord &a, const EpisodeRecord &b) {
        if (a.agent != b.agent) return a.agent < b.agent;
        if (a.run != b.run) return a.run < b.run;
        return a.episode < b.episode;
    });
    return out;
}

// ---------------------------------------------------------------------------
// Aggregation
// ---------------------------------------------------------------------------

struct SummaryRow {
    AgentKind agent = AgentKind::Reactive;
    std::size_t episode = 0;
    double reward = 0.0;
    double steps = 0.0;
    std::optional<double> entropy;
};

/// Mean over runs per episode, then a trailing window, per agent kind.
[[nodiscard]] inline std::vector<SummaryRow> summarize(const std::vector<EpisodeRecord> &records, std::size_t window) {
    struct Acc {
        double reward = 0.0;
        double steps = 0.0;
        std::size_t n = 0;
        double entropy = 0.0;
        std::size_t n_entropy = 0;
    };
    std::map<AgentKind, std::map<std::size_t, Acc>> acc;
    for (const auto &r : records) {
        Acc &a = acc[r.agent][r.episode];
        a.reward += r.reward;
        a.steps += r.steps;
        ++a.n;
        if (r.mean_entropy) {
            a.entropy += *r.mean_entropy;
            ++a.n_entropy;
        }
    }
    std::vector<SummaryRow> rows;
    for (const auto &[kind, episodes] : acc) {
        std::vector<std::size_t> index;
        std::vector<double> reward;
        std::vector<double> steps;
        std::vector<std::optional<double>> entropy;
        for (const auto &[ep, a] : episodes) {
            index.push_back(ep);
            reward.push_back(a.reward / static_cast<double>(a.n));
            steps.push_back(a.steps / static_cast<double>(a.n));
            entropy.push_back(a.n_entropy ? std::optional<double>(a.entropy / static_cast<double>(a.n_entropy))
                                          : std::nullopt);
        }
        const auto reward_w = sliding_window(std::span<const double>(reward), window);
        const auto steps_w = sliding_window(std::span<const double>(steps), window);
        const auto entropy_w = sliding_window(std::span<const std::optional<double>>(entropy), window);
        for (std::size_t k = 0; k < index.size(); ++k)
            rows.push_back({kind, index[k], reward_w[k], steps_w[k], entropy_w[k]});
    }
    return rows;
}

struct WindowMeans {
    double reward = 0.0;
    double steps = 0.0;
    std::optional<double> entropy;
    std::size_t episodes = 0;
};

/// Means over all runs of episodes with index in [first, last).
[[nodiscard]] inline std::optional<WindowMeans> window_means(const std::vector<EpisodeRecord> &records,
                                                             AgentKind agent, std::size_t first, std::size_t last) {
    WindowMeans m;
    double entropy = 0.0;
    std::size_t n_entropy = 0;
    for (const auto &r : records) {
        if (r.agent != agent || r.episode < first || r.episode >= last) continue;
        m.reward += r.reward;
        m.steps += r.steps;
        ++m.episodes;
        if (r.mean_entropy) {
            entropy += *r.mean_entropy;
            ++n_entropy;
        }
    }
    if (m.episodes == 0) return std::nullopt;
    m.reward /= static_cast<double>(m.episodes);
    m.steps /= static_cast<double>(m.episodes);
    if (n_entropy) m.entropy = entropy / static_cast<double>(n_entropy);
    return m;
}

[[nodiscard]] inline std::size_t episode_count(const std::vector<EpisodeRecord> &records, AgentKind agent) {
    std::size_t n = 0;
    for (const auto &r : records)
        if (r.agent == agent) n = std::max(n, r.episode + 1);
    return n;
}

[[nodiscard]] inline std::optional<WindowMeans> final_window_means(const std::vector<EpisodeRecord> &records,
                                                                   AgentKind agent, std::size_t window) {
    const std::size_t n = episode_count(records, agent);
    return window_means(records, agent, n > window ? n - window : 0, n);
}

[[nodiscard]] inline std::optional<WindowMeans> first_window_means(const std::vector<EpisodeRecord> &records,
                                                                   AgentKind agent, std::size_t window) {
    return window_means(records, agent, 0, window);
}

// ---------------------------------------------------------------------------
// CSV output
// ---------------------------------------------------------------------------

inline constexpr const char *kResultsHeader = "agent,run,episode,reward,steps,mean_entropy";
inline constexpr const char *kSummaryHeader = "agent,episode,reward_w,steps_w,entropy_w";

/// Six significant digits, locale independent.
[[nodiscard]] inline std::string format_real(double v) {
    char buf[64];
    std::snprintf(buf, sizeof buf, "%.6g", v);
    return buf;
}

inline void write_results_csv(std::ostream &os, const std::vector<EpisodeRecord> &records) {
    os << kResultsHeader << '\n';
    for (const auto &r : records) {
        os << to_string(r.agent) << ',' << r.run << ',' << r.episode << ',' << format_real(r.reward) << ','
           << r.steps << ',';
        if (r.mean_entropy) os << format_real(*r.mean_entropy);
        os << '\n';
    }
}

inline void write_summary_csv(std::ostream &os, const std::vector<SummaryRow> &rows) {
    os << kSummaryHeader << '\n';
    for (const auto &r : rows) {
        os << to_string(r.agent) << ',' << r.episode << ',' << format_real(r.reward) << ',' << format_real(r.steps)
           << ',';
        if (r.entropy) os << format_real(*r.entropy);
        os << '\n';
    }
}

} // namespace dacml
