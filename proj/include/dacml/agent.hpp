#pragma once

#include "dacml/autoencoder.hpp"
#include "dacml/errors.hpp"
#include "dacml/maze.hpp"
#include "dacml/memory.hpp"
#include "dacml/random.hpp"
#include "dacml/reactive.hpp"
#include "dacml/selection.hpp"

#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

namespace dacml {

enum class AgentKind : std::uint8_t { DacMl = 0, DacMlNoBias = 1, Reactive = 2 };

inline constexpr std::array<AgentKind, 3> kAllAgentKinds{AgentKind::DacMl, AgentKind::DacMlNoBias,
                                                          AgentKind::Reactive};

[[nodiscard]] constexpr std::string_view to_string(AgentKind k) noexcept {
    switch (k) {
    case AgentKind::DacMl: return "dacml";
    case AgentKind::DacMlNoBias: return "dacml-nobias";
    case AgentKind::Reactive: return "reactive";
    }
    return "?";
}

[[nodiscard]] inline std::optional<AgentKind> parse_agent_kind(std::string_view name) noexcept {
    for (AgentKind k : kAllAgentKinds)
        if (to_string(k) == name) return k;
    return std::nullopt;
}

/// Parameters of every layer. Shared verbatim by all agent kinds of an experiment.
struct AgentConfig {
    ReactiveConfig reactive;
    AutoencoderConfig autoencoder;
    GateConfig gate;
    MemoryConfig memory;
    SelectionConfig selection;

    void validate() const {
        reactive.validate();
        autoencoder.validate();
        gate.validate();
        memory.validate();
        selection.validate();
    }
};

struct StepLog {
    Action action = Action::Forward;
    /// Contextual distribution the action was drawn from; empty on reactive steps.
    std::optional<ActionDistribution> distribution;
    bool contextual = false;
    bool stored = false;
    double reconstruction_error = 0.0;
};

/// One of the three experimental agents. Reactive agents own no memory and
/// never touch the autoencoder; the no-bias variant reads every trigger as 1.
class Agent {
public:
    /// `init_seed` only seeds the autoencoder weights; per-step randomness
    /// comes from the Rng passed to step().
    Agent(AgentKind kind, const AgentConfig &cfg, const MazeConfig &maze, std::uint64_t init_seed)
        : kind_(kind),
          cfg_(cfg),
          reactive_(cfg.reactive, maze.contact_depth()),
          autoencoder_(make_autoencoder(kind, cfg, maze, init_seed)),
          stm_(cfg.memory.stm_capacity),
          ltm_(cfg.memory.ltm_capacity),
          triggers_(cfg.memory, kind == AgentKind::DacMl) {
        cfg_.validate();
    }

    StepLog step(std::span<const double> obs, Rng &rng) {
        StepLog log;
        if (kind_ == AgentKind::Reactive) {
            log.action = reactive_.act(obs, rng);
            return log;
        }

        autoencoder_.train_step(obs);
        EncodedState state = autoencoder_.encode(obs);
        log.reconstruction_error = state.reconstruction_error;

        ContextualDecision decision = contextual_step(state.embedding, ltm_, triggers_, cfg_.selection, rng);
        if (decision.action) {
            log.action = *decision.action;
            log.distribution = decision.distribution;
            log.contextual = true;
            reactive_.observe(log.action);
        } else {
            log.action = reactive_.act(obs, rng);
        }

        if (gate(state, cfg_.gate)) {
            stm_.push({std::move(state.embedding), log.action});
            log.stored = true;
        }

        if (kind_ == AgentKind::DacMl) {
            // Prime only chains whose couplet voted for the executed action.
            std::erase_if(decision.selected, [&](const CoupletRef &r) {
                return ltm_[r.sequence].couplets[r.position].action != log.action;
            });
            triggers_.boost_successors(decision.selected);
            triggers_.decay();
        }
        return log;
    }

    /// Consolidates on goal contact, then clears STM and the walk history.
    ConsolidationStatus on_episode_end(const StepOutcome &outcome) {
        if (!outcome.done) throw ContractError("on_episode_end called before the episode finished");
        ConsolidationStatus status = ConsolidationStatus::SkippedEmptyStm;
        if (kind_ != AgentKind::Reactive) {
            status = consolidate(stm_, ltm_, triggers_, outcome.reward);
            stm_.clear();
        }
        reactive_.reset();
        return status;
    }

    [[nodiscard]] AgentKind kind() const noexcept { return kind_; }
    [[nodiscard]] const AgentConfig &config() const noexcept { return cfg_; }
    [[nodiscard]] const Autoencoder &autoencoder() const noexcept { return autoencoder_; }
    [[nodiscard]] const ShortTermMemory &stm() const noexcept { return stm_; }
    [[nodiscard]] const LongTermMemory &ltm() const noexcept { return ltm_; }
    [[nodiscard]] const TriggerTable &triggers() const noexcept { return triggers_; }
    [[nodiscard]] const ReactiveLayer &reactive() const noexcept { return reactive_; }

private:
    static Autoencoder make_autoencoder(AgentKind kind, const AgentConfig &cfg, const MazeConfig &maze,
                                        std::uint64_t seed) {
        if (kind == AgentKind::Reactive) return Autoencoder(maze.observation_size(), cfg.autoencoder);
        Rng rng(seed);
        return Autoencoder::random(maze.observation_size(), cfg.autoencoder, rng);
    }

    AgentKind kind_;
    AgentConfig cfg_;
    ReactiveLayer reactive_;
    Autoencoder autoencoder_;
    ShortTermMemory stm_;
    LongTermMemory ltm_;
    TriggerTable triggers_;
};

} // namespace dacml
