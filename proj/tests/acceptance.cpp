// Acceptance suite: one PASS/FAIL line per criterion, non-zero exit if any fails.

#include "dacml/autoencoder.hpp"
#include "dacml/cli.hpp"
#include "dacml/config.hpp"
#include "dacml/experiment.hpp"
#include "memory_model.hpp"
#include "selection_instances.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <cstring>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <sstream>
#include <string>

using namespace dacml;
namespace fs = std::filesystem;

namespace {

int g_failed = 0;

void report(bool ok, const char *name, const std::string &detail) {
    std::printf("%s  %-26s %s\n", ok ? "PASS" : "FAIL", name, detail.c_str());
    std::fflush(stdout);
    if (!ok) ++g_failed;
}

std::string fmt(const char *f, double a = 0, double b = 0, double c = 0, double d = 0, double e = 0) {
    char buf[256];
    std::snprintf(buf, sizeof buf, f, a, b, c, d, e);
    return buf;
}

double seconds_since(std::chrono::steady_clock::time_point t0) {
    return std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
}

std::string slurp(const fs::path &p) {
    std::ifstream in(p, std::ios::binary);
    return {std::istreambuf_iterator<char>(in), std::istreambuf_iterator<char>()};
}

void trends(const fs::path &out) {
    const ExperimentConfig cfg = default_config();
    const auto t0 = std::chrono::steady_clock::now();
    const auto res = run_experiment(cfg);
    const double elapsed = seconds_since(t0);
    std::printf("      desk-scale run: %zu runs x %zu episodes x 3 agents in %.1f s\n", cfg.runs,
                cfg.episodes_per_run, elapsed);

    fs::create_directories(out);
    {
        std::ofstream f(out / "results.csv", std::ios::binary);
        write_results_csv(f, res.records);
        std::ofstream s(out / "summary.csv", std::ios::binary);
        write_summary_csv(s, summarize(res.records, cfg.window));
    }

    const std::size_t w = cfg.report_window;
    const auto dac = final_window_means(res.records, AgentKind::DacMl, w);
    const auto nob = final_window_means(res.records, AgentKind::DacMlNoBias, w);
    const auto rea = final_window_means(res.records, AgentKind::Reactive, w);
    const auto dac0 = first_window_means(res.records, AgentKind::DacMl, w);
    const auto nob0 = first_window_means(res.records, AgentKind::DacMlNoBias, w);
    if (!res.failures.empty() || !dac || !nob || !rea || !dac0 || !nob0) {
        report(false, "trend-a-reward", "desk-scale run incomplete");
        report(false, "trend-b-steps", "desk-scale run incomplete");
        report(false, "trend-c-entropy", "desk-scale run incomplete");
        return;
    }

    const bool a = dac->reward >= 1.2 * rea->reward && dac->reward >= 1.2 * nob->reward;
    report(a, "trend-a-reward",
           fmt("final-50 reward dacml %.3f, reactive %.3f (x%.2f), nobias %.3f (x%.2f); need x1.20", dac->reward,
               rea->reward, dac->reward / rea->reward, nob->reward, dac->reward / nob->reward));

    const bool b = dac->steps <= 0.6 * rea->steps;
    report(b, "trend-b-steps",
           fmt("final-50 steps dacml %.1f vs reactive %.1f (ratio %.3f); need <= 0.600", dac->steps, rea->steps,
               dac->steps / rea->steps));

    bool c = false;
    std::string detail = "entropy missing in a window";
    if (dac->entropy && dac0->entropy && nob->entropy && nob0->entropy) {
        const double rd = *dac->entropy / *dac0->entropy;
        const double rn = *nob->entropy / *nob0->entropy;
        c = rd < 0.7 && (1.0 - rd) > (1.0 - rn);
        detail = fmt("dacml %.3f -> %.3f (ratio %.3f, need < 0.700); nobias %.3f -> %.3f", *dac0->entropy,
                     *dac->entropy, rd, *nob0->entropy, *nob->entropy) +
                 fmt(" (ratio %.3f, must stay above dacml)", rn);
    }
    report(c, "trend-c-entropy", detail);
}

void oracle_equivalence() {
    Rng rng(0x5e1ec7);
    constexpr int n = 5000;
    int agree = 0;
    int with_dist = 0;
    std::string first;
    for (int i = 0; i < n; ++i) {
        const auto inst = instances::make(rng, i % 2 == 0);
        const auto msg = instances::compare_with_oracle(inst);
        if (msg.empty()) ++agree;
        else if (first.empty()) first = " first mismatch: " + msg;
        with_dist += instances::pipeline(inst).distribution ? 1 : 0;
    }
    report(agree == n, "oracle-equivalence",
           fmt("%.0f/%.0f instances bit-identical (%.0f with a distribution)", agree, n, with_dist) + first);
}

void gradient_check() {
    Rng rng(0x9ad);
    AutoencoderConfig cfg;
    cfg.embedding_dim = 3;
    cfg.init_scale = 2.0;
    constexpr int instances = 50;
    constexpr double eps = 1e-5;
    double worst = 0.0;
    for (int inst = 0; inst < instances; ++inst) {
        const std::size_t d = inst % 2 == 0 ? 8 : 36;
        auto ae = Autoencoder::random(d, cfg, rng);
        std::vector<double> x(d);
        for (double &v : x) v = uniform01(rng);
        const auto g = ae.gradient(x);
        auto p = ae.parameters();
        for (std::size_t i = 0; i < p.size(); ++i) {
            const double keep = p[i];
            p[i] = keep + eps;
            const double up = ae.loss(x);
            p[i] = keep - eps;
            const double down = ae.loss(x);
            p[i] = keep;
            const double fd = (up - down) / (2 * eps);
            worst = std::max(worst, std::abs(fd - g[i]) / std::max({std::abs(fd), std::abs(g[i]), 1e-8}));
        }
    }
    report(worst < 1e-4, "gradient-check", fmt("max relative error %.2e over %.0f instances; need < 1e-4", worst, instances));
}

void memory_invariants() {
    const auto rep = memory_model::run_interleavings(50000, 0xfeed);
    report(rep.violations == 0 && rep.operations >= 10000, "memory-invariants",
           fmt("%.0f operations, %.0f violations, %.0f consolidations, %.0f LTM evictions, %.0f STM overflows",
               static_cast<double>(rep.operations), static_cast<double>(rep.violations),
               static_cast<double>(rep.consolidations), static_cast<double>(rep.evictions),
               static_cast<double>(rep.stm_overflows)) +
               (rep.first_violation.empty() ? "" : " first: " + rep.first_violation));
}

void normalization_invariance() {
    Rng rng(0x5ca1e);
    constexpr int n = 3000;
    int exact = 0;
    int general_sets = 0;
    double general_dev = 0.0;
    for (int i = 0; i < n; ++i) {
        const auto inst = instances::make(rng);
        const auto base = instances::pipeline(inst);
        const double k = std::ldexp(1.0, static_cast<int>(uniform_index(rng, 61)) - 30);
        const auto s = instances::pipeline(instances::scaled(inst, k));
        const bool same = base.selected == s.selected && base.distribution.has_value() == s.distribution.has_value() &&
                          (!base.distribution || base.distribution->probabilities == s.distribution->probabilities);
        exact += same ? 1 : 0;

        const double k2 = 1e-3 + 1e3 * uniform01(rng);
        const auto g = instances::pipeline(instances::scaled(inst, k2));
        general_sets += base.selected == g.selected ? 1 : 0;
        if (base.distribution && g.distribution)
            for (std::size_t a = 0; a < 3; ++a)
                general_dev = std::max(general_dev, std::abs(base.distribution->probabilities[a] -
                                                             g.distribution->probabilities[a]));
    }
    report(exact == n && general_sets == n, "normalization-invariance",
           fmt("binary scales: %.0f/%.0f bit-identical; arbitrary scales: %.0f/%.0f identical sets, "
               "max |dp| %.1e (rounding of k*V)",
               exact, n, general_sets, n, general_dev));
}

void determinism(const fs::path &out) {
    const fs::path a = out / "det_a";
    const fs::path b = out / "det_b";
    std::ostringstream sink;
    auto run = [&](const fs::path &dir, const char *workers) {
        const std::string d = dir.string();
        const char *argv[] = {"dacml", "--out-dir", d.c_str(), "--workers", workers, "--seed", "777",
                              "run",   "--runs",    "3",       "--episodes", "120"};
        return cli::run_cli(static_cast<int>(std::size(argv)), argv, sink, sink);
    };
    const int ca = run(a, "1");
    const int cb = run(b, "3");
    const std::string ra = slurp(a / "results.csv");
    const std::string rb = slurp(b / "results.csv");
    const bool ok = ca == 0 && cb == 0 && !ra.empty() && ra == rb;
    report(ok, "determinism",
           fmt("two CLI executions (1 and 3 workers), results.csv %.0f bytes each, identical: ", ra.size()) +
               (ra == rb ? "yes" : "no"));
}

void paper_scale_smoke() {
    cli::RunOptions opt;
    opt.preset = "paper-scale";
    ExperimentConfig cfg;
    bool loaded = false;
    try {
        cfg = cli::resolve_config(opt, {});
        loaded = cfg.runs == 20 && cfg.episodes_per_run == 1000 && cfg.agents.size() == 3;
    } catch (const std::exception &) {
    }
    // one full-length run per agent kind on a single worker
    double worst = 1e300;
    std::string detail;
    for (AgentKind k : cfg.agents) {
        const auto t0 = std::chrono::steady_clock::now();
        const auto r = run_single(cfg, k, 0);
        const double rate = static_cast<double>(r.records.size()) / seconds_since(t0);
        worst = std::min(worst, r.failure ? 0.0 : rate);
        detail += std::string(to_string(k)) + fmt(" %.0f", rate) + " ";
    }
    report(loaded && worst >= 50.0, "paper-scale-smoke",
           std::string("preset 20x1000 loaded: ") + (loaded ? "yes" : "no") +
               "; episodes/s/worker over 1000 episodes: " + detail + "(need >= 50)");
}

} // namespace

int main(int argc, char **argv) {
    fs::path out = fs::temp_directory_path() / "dacml_acceptance";
    for (int i = 1; i + 1 < argc; ++i)
        if (std::strcmp(argv[i], "--out") == 0) out = argv[i + 1];
    fs::remove_all(out);
    fs::create_directories(out);

    const auto t0 = std::chrono::steady_clock::now();
    trends(out);
    oracle_equivalence();
    gradient_check();
    memory_invariants();
    normalization_invariance();
    determinism(out);
    paper_scale_smoke();
    std::printf("%d criteria failed; %.1f s total\n", g_failed, seconds_since(t0));
    return g_failed == 0 ? 0 : 1;
}
