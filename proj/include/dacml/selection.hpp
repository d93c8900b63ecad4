#pragma once

#include "dacml/errors.hpp"
#include "dacml/maze.hpp"
#include "dacml/memory.hpp"
#include "dacml/random.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <optional>
#include <span>
#include <vector>

namespace dacml {

struct SelectionConfig {
    /// Length scale of the distance-to-similarity kernel exp(-d / sigma).
    double sigma = 1.0;
    double abs_threshold = 0.95;
    /// Fraction of the best eligibility a couplet must reach.
    double prop_threshold = 0.6;
    /// Rate of the exponential discount on normalized distance to sequence end.
    double distance_decay = 2.0;

    void validate() const {
        if (!(sigma > 0.0)) throw ConfigError("selection.sigma must be > 0");
        if (!(abs_threshold > 0.0)) throw ConfigError("selection.abs_threshold must be > 0");
        if (!(prop_threshold > 0.0 && prop_threshold <= 1.0))
            throw ConfigError("selection.prop_threshold must be in (0, 1]");
        if (!(distance_decay >= 0.0)) throw ConfigError("selection.distance_decay must be >= 0");
    }
};

struct EligibilityScore {
    CoupletRef ref;
    double score = 0.0;
};

struct ValuedCouplet {
    CoupletRef ref;
    double value = 0.0;
};

struct ActionDistribution {
    std::array<double, kActionCount> probabilities{};

    [[nodiscard]] double operator[](Action a) const noexcept { return probabilities[index_of(a)]; }

    /// Shannon entropy, natural log.
    [[nodiscard]] double entropy() const noexcept {
        double h = 0.0;
        for (double p : probabilities)
            if (p > 0.0) h -= p * std::log(p);
        return h;
    }

    [[nodiscard]] Action sample(Rng &rng) const {
        const double u = uniform01(rng);
        double acc = 0.0;
        std::size_t last = 0;
        for (std::size_t a = 0; a < kActionCount; ++a) {
            if (probabilities[a] <= 0.0) continue;
            acc += probabilities[a];
            last = a;
            if (u < acc) return kAllActions[a];
        }
        return kAllActions[last];
    }
};

[[nodiscard]] inline double euclidean_distance(std::span<const double> a, std::span<const double> b) {
    if (a.size() != b.size()) throw ContractError("embedding length mismatch in distance");
    double sq = 0.0;
    for (std::size_t k = 0; k < a.size(); ++k) sq += (a[k] - b[k]) * (a[k] - b[k]);
    return std::sqrt(sq);
}

/// exp(-||a - b|| / sigma), in (0, 1].
[[nodiscard]] inline double similarity(std::span<const double> a, std::span<const double> b, double sigma) {
    return std::exp(-euclidean_distance(a, b) / sigma);
}

/// Eligibility of every LTM couplet: similarity to the query times its trigger.
[[nodiscard]] inline std::vector<EligibilityScore> score_ltm(std::span<const double> query,
                                                             const LongTermMemory &ltm,
                                                             const TriggerTable &triggers,
                                                             const SelectionConfig &cfg) {
    if (!triggers.matches(ltm)) throw ContractError("trigger table does not match LTM shape");
    std::vector<EligibilityScore> scores;
    scores.reserve(ltm.couplet_count());
    for (std::size_t s = 0; s < ltm.size(); ++s) {
        const auto &seq = ltm[s].couplets;
        for (std::size_t i = 0; i < seq.size(); ++i) {
            const double sim = similarity(query, seq[i].embedding, cfg.sigma);
            scores.push_back({{s, i}, sim * triggers.at(s, i)});
        }
    }
    return scores;
}

/// Winner-takes-all over eligibilities: keeps couplets passing both the
/// absolute threshold and prop_threshold times the maximum. Sorted by ref.
[[nodiscard]] inline std::vector<CoupletRef> select_couplets(std::span<const EligibilityScore> scores,
                                                             const SelectionConfig &cfg) {
    std::vector<CoupletRef> selected;
    if (scores.empty()) return selected;
    double best = scores.front().score;
    for (const auto &s : scores) best = std::max(best, s.score);
    if (best < cfg.abs_threshold) return selected;
    const double cut = cfg.prop_threshold * best;
    for (const auto &s : scores)
        if (s.score >= cfg.abs_threshold && s.score >= cut) selected.push_back(s.ref);
    std::sort(selected.begin(), selected.end());
    return selected;
}

/// Normalized distance from position i to the end of a sequence of length L.
[[nodiscard]] inline double distance_to_end(std::size_t position, std::size_t length) noexcept {
    const std::size_t span = length > 1 ? length - 1 : 1;
    return static_cast<double>(length - 1 - position) / static_cast<double>(span);
}

/// Sequence reward discounted by distance to the sequence end, then divided
/// by the largest such value among the selected couplets.
[[nodiscard]] inline std::vector<ValuedCouplet> value_couplets(std::span<const CoupletRef> selected,
                                                               const LongTermMemory &ltm, double distance_decay) {
    if (selected.empty()) throw ContractError("value_couplets needs a non-empty selection");
    std::vector<ValuedCouplet> values;
    values.reserve(selected.size());
    double best = 0.0;
    for (const CoupletRef &ref : selected) {
        if (!ltm.contains(ref)) throw ContractError("selected couplet is not in LTM");
        const SequenceRecord &seq = ltm[ref.sequence];
        const double d = distance_to_end(ref.position, seq.length());
        const double v = seq.reward * std::exp(-distance_decay * d);
        values.push_back({ref, v});
        best = std::max(best, v);
    }
    for (auto &v : values) v.value /= best;
    return values;
}

/// Per-action sums of relative values, normalized to a distribution.
[[nodiscard]] inline ActionDistribution action_distribution(std::span<const ValuedCouplet> values,
                                                            const LongTermMemory &ltm) {
    if (values.empty()) throw ContractError("action_distribution needs at least one valued couplet");
    std::array<double, kActionCount> mass{};
    for (const auto &v : values) {
        const Action a = ltm[v.ref.sequence].couplets[v.ref.position].action;
        mass[index_of(a)] += v.value;
    }
    double total = 0.0;
    for (double m : mass) total += m;
    ActionDistribution dist;
    for (std::size_t a = 0; a < kActionCount; ++a) dist.probabilities[a] = mass[a] / total;
    return dist;
}

struct ContextualDecision {
    /// Empty when nothing in LTM is eligible; the caller falls back to the
    /// reactive layer.
    std::optional<Action> action;
    std::optional<ActionDistribution> distribution;
    std::vector<CoupletRef> selected;
};

/// score -> select -> value -> distribution -> sample. Draws from `rng` only
/// when a distribution exists. Trigger updates are left to the caller.
[[nodiscard]] inline ContextualDecision contextual_step(std::span<const double> query, const LongTermMemory &ltm,
                                                        const TriggerTable &triggers, const SelectionConfig &cfg,
                                                        Rng &rng) {
    ContextualDecision out;
    if (ltm.empty()) return out;
    const auto scores = score_ltm(query, ltm, triggers, cfg);
    out.selected = select_couplets(scores, cfg);
    if (out.selected.empty()) return out;
    const auto values = value_couplets(out.selected, ltm, cfg.distance_decay);
    out.distribution = action_distribution(values, ltm);
    out.action = out.distribution->sample(rng);
    return out;
}

} // namespace dacml
