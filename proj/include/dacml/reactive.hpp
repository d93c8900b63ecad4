#pragma once

#include "dacml/errors.hpp"
#include "dacml/maze.hpp"
#include "dacml/random.hpp"

#include <optional>
#include <span>

namespace dacml {

struct ReactiveConfig {
    /// Probability of repeating the previous action.
    double persistence = 0.5;

    void validate() const {
        if (!(persistence >= 0.0 && persistence <= 1.0))
            throw ConfigError("reactive.persistence must be in [0, 1]");
    }
};

struct ReactiveState {
    std::optional<Action> last_action;
    double persistence = 0.5;
};

/// True when the central view column reports an opaque non-goal cell
/// directly in front of the agent.
[[nodiscard]] inline bool wall_ahead(std::span<const double> obs, double contact_depth) {
    const std::size_t columns = obs.size() / 4;
    if (columns == 0) return false;
    const double *col = obs.data() + 4 * (columns / 2);
    const bool goal = col[0] == kGoalColor.r && col[1] == kGoalColor.g && col[2] == kGoalColor.b;
    return !goal && col[3] <= contact_depth * (1.0 + 1e-9);
}

/// Persistent random walk with a collision reflex.
///
/// With probability `persistence` the previous action is repeated, otherwise
/// an action is drawn uniformly. If a wall is directly ahead and the walk
/// would push into it (previous or proposed action is Forward), a turn is
/// drawn uniformly instead. The returned action becomes `last_action`.
inline Action reactive_action(ReactiveState &state, std::span<const double> obs, double contact_depth,
                              Rng &rng) {
    Action proposal;
    if (!state.last_action) {
        proposal = kAllActions[uniform_index(rng, kActionCount)];
    } else if (bernoulli(rng, state.persistence)) {
        proposal = *state.last_action;
    } else {
        proposal = kAllActions[uniform_index(rng, kActionCount)];
    }

    const bool pushing = proposal == Action::Forward || state.last_action == Action::Forward;
    if (pushing && wall_ahead(obs, contact_depth))
        proposal = bernoulli(rng, 0.5) ? Action::TurnLeft : Action::TurnRight;

    state.last_action = proposal;
    return proposal;
}

/// Reactive layer as owned by an agent.
class ReactiveLayer {
public:
    ReactiveLayer(const ReactiveConfig &cfg, double contact_depth) : contact_depth_(contact_depth) {
        cfg.validate();
        state_.persistence = cfg.persistence;
    }

    Action act(std::span<const double> obs, Rng &rng) { return reactive_action(state_, obs, contact_depth_, rng); }

    /// Record the action actually executed, so persistence follows the
    /// behavior even when a higher layer was in control.
    void observe(Action executed) noexcept { state_.last_action = executed; }

    void reset() noexcept { state_.last_action.reset(); }

    [[nodiscard]] const ReactiveState &state() const noexcept { return state_; }

private:
    ReactiveState state_;
    double contact_depth_;
};

} // namespace dacml
