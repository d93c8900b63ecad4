#pragma once

#include "dacml/errors.hpp"
#include "dacml/random.hpp"

#include <array>
#include <cmath>
#include <cstddef>
#include <cstdint>
#include <deque>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

namespace dacml {

// ---------------------------------------------------------------------------
// Actions and headings
// ---------------------------------------------------------------------------

enum class Action : std::uint8_t { Forward = 0, TurnLeft = 1, TurnRight = 2 };

inline constexpr std::size_t kActionCount = 3;
inline constexpr std::array<Action, kActionCount> kAllActions{Action::Forward, Action::TurnLeft,
                                                               Action::TurnRight};

[[nodiscard]] constexpr std::size_t index_of(Action a) noexcept { return static_cast<std::size_t>(a); }

[[nodiscard]] constexpr std::string_view to_string(Action a) noexcept {
    switch (a) {
    case Action::Forward: return "forward";
    case Action::TurnLeft: return "left";
    case Action::TurnRight: return "right";
    }
    return "?";
}

/// Grid frame: x grows east, y grows south. North is therefore y - 1.
enum class Heading : std::uint8_t { North = 0, East = 1, South = 2, West = 3 };

[[nodiscard]] constexpr Heading turn_right(Heading h) noexcept {
    return static_cast<Heading>((static_cast<int>(h) + 1) % 4);
}
[[nodiscard]] constexpr Heading turn_left(Heading h) noexcept {
    return static_cast<Heading>((static_cast<int>(h) + 3) % 4);
}
[[nodiscard]] constexpr int heading_dx(Heading h) noexcept {
    return h == Heading::East ? 1 : (h == Heading::West ? -1 : 0);
}
[[nodiscard]] constexpr int heading_dy(Heading h) noexcept {
    return h == Heading::South ? 1 : (h == Heading::North ? -1 : 0);
}

// ---------------------------------------------------------------------------
// Configuration
// ---------------------------------------------------------------------------

struct Rgb {
    double r = 0.0;
    double g = 0.0;
    double b = 0.0;
    friend bool operator==(const Rgb &, const Rgb &) = default;
};

/// Color the goal cell is rendered with. Wall palettes may not use it.
inline constexpr Rgb kGoalColor{0.0, 1.0, 0.0};

[[nodiscard]] inline std::vector<Rgb> default_wall_palette() {
    return {
        {1.0, 0.0, 0.0},  // red
        {0.0, 0.0, 1.0},  // blue
        {1.0, 1.0, 0.0},  // yellow
        {1.0, 0.0, 1.0},  // magenta
    };
}

struct MazeConfig {
    int grid_size = 15;
    /// Perimeter colors, assigned clockwise from the north-west corner in
    /// equal arcs (four entries give one color per side).
    std::vector<Rgb> wall_palette = default_wall_palette();
    int view_columns = 9;
    double field_of_view_deg = 90.0;
    int max_steps = 200;
    double initial_reward = 3.0;

    void validate() const {
        if (grid_size < 5 || grid_size % 2 == 0)
            throw ConfigError("maze.grid_size must be odd and >= 5, got " + std::to_string(grid_size));
        if (view_columns < 1) throw ConfigError("maze.view_columns must be >= 1");
        if (!(field_of_view_deg > 0.0 && field_of_view_deg < 180.0))
            throw ConfigError("maze.field_of_view must be in (0, 180) degrees");
        if (max_steps < 1) throw ConfigError("maze.max_steps must be >= 1");
        if (!(initial_reward > 0.0) || !std::isfinite(initial_reward))
            throw ConfigError("maze.initial_reward must be > 0");
        if (wall_palette.size() < 4) throw ConfigError("maze.wall_palette needs at least 4 colors");
        for (std::size_t i = 0; i < wall_palette.size(); ++i) {
            const Rgb &c = wall_palette[i];
            for (double v : {c.r, c.g, c.b})
                if (!(v >= 0.0 && v <= 1.0)) throw ConfigError("maze.wall_palette components must lie in [0, 1]");
            if (c == kGoalColor) throw ConfigError("maze.wall_palette may not contain the goal color");
            for (std::size_t j = 0; j < i; ++j)
                if (wall_palette[j] == c) throw ConfigError("maze.wall_palette colors must be distinct");
        }
    }

    [[nodiscard]] int center() const noexcept { return grid_size / 2; }
    [[nodiscard]] double diagonal() const noexcept { return grid_size * std::sqrt(2.0); }
    [[nodiscard]] std::size_t observation_size() const noexcept {
        return 4 * static_cast<std::size_t>(view_columns);
    }
    /// Depth reported for an opaque cell directly ahead.
    [[nodiscard]] double contact_depth() const noexcept { return 1.0 / diagonal(); }
};

// ---------------------------------------------------------------------------
// State
// ---------------------------------------------------------------------------

struct AgentPose {
    int x = 1;
    int y = 1;
    Heading heading = Heading::North;
    friend bool operator==(const AgentPose &, const AgentPose &) = default;
};

/// K columns of (r, g, b, depth), left to right across the field of view.
using Observation = std::vector<double>;

struct StepOutcome {
    Observation observation;
    double reward = 0.0;
    bool done = false;
    /// Zero-based index of the step that produced this outcome.
    int step_index = 0;
};

struct Transition {
    AgentPose pose;
    StepOutcome outcome;
};

[[nodiscard]] inline bool is_wall(const MazeConfig &cfg, int x, int y) noexcept {
    return x <= 0 || y <= 0 || x >= cfg.grid_size - 1 || y >= cfg.grid_size - 1;
}

[[nodiscard]] inline bool is_goal(const MazeConfig &cfg, int x, int y) noexcept {
    return x == cfg.center() && y == cfg.center();
}

[[nodiscard]] inline bool is_valid_pose(const MazeConfig &cfg, const AgentPose &p) noexcept {
    return p.x >= 0 && p.y >= 0 && p.x < cfg.grid_size && p.y < cfg.grid_size && !is_wall(cfg, p.x, p.y);
}

[[nodiscard]] inline std::array<AgentPose, 4> corner_cells(const MazeConfig &cfg) {
    const int lo = 1;
    const int hi = cfg.grid_size - 2;
    return {AgentPose{lo, lo}, AgentPose{hi, lo}, AgentPose{lo, hi}, AgentPose{hi, hi}};
}

/// Palette entry for a perimeter cell. Walks the perimeter clockwise from
/// (0, 0) and splits it into palette.size() equal arcs.
[[nodiscard]] inline const Rgb &wall_color(const MazeConfig &cfg, int x, int y) {
    const int n = cfg.grid_size;
    const int side = n - 1;
    int k = 0;
    if (y == 0 && x < side) k = x;                       // north, west -> east
    else if (x == side && y < side) k = side + y;        // east, north -> south
    else if (y == side && x > 0) k = 2 * side + (side - x);  // south, east -> west
    else k = 3 * side + (side - y);                      // west, south -> north
    const auto perimeter = static_cast<std::size_t>(4 * side);
    const std::size_t slot = static_cast<std::size_t>(k) * cfg.wall_palette.size() / perimeter;
    return cfg.wall_palette[slot];
}

// ---------------------------------------------------------------------------
// Rendering
// ---------------------------------------------------------------------------

/// Casts one ray per view column from the center of the agent's cell and
/// reports the color of the first opaque cell (wall or goal) plus the
/// distance between the two cell centers, normalized by the maze diagonal.
[[nodiscard]] inline Observation render_observation(const AgentPose &pose, const MazeConfig &cfg) {
    constexpr double kPi = 3.14159265358979323846;
    const int columns = cfg.view_columns;
    Observation obs(cfg.observation_size(), 0.0);

    const double heading_rad = static_cast<int>(pose.heading) * (kPi / 2.0);
    const double fov = cfg.field_of_view_deg * kPi / 180.0;
    const double ox = pose.x + 0.5;
    const double oy = pose.y + 0.5;

    for (int c = 0; c < columns; ++c) {
        const double offset = columns == 1 ? 0.0 : -fov / 2.0 + fov * c / (columns - 1);
        const double angle = heading_rad + offset;  // clockwise from north
        double dx = std::sin(angle);
        double dy = -std::cos(angle);
        if (std::abs(dx) < 1e-12) dx = 0.0;
        if (std::abs(dy) < 1e-12) dy = 0.0;

        int cx = pose.x;
        int cy = pose.y;
        const int step_x = dx > 0 ? 1 : -1;
        const int step_y = dy > 0 ? 1 : -1;
        const double delta_x = dx == 0.0 ? INFINITY : std::abs(1.0 / dx);
        const double delta_y = dy == 0.0 ? INFINITY : std::abs(1.0 / dy);
        double side_x = dx == 0.0 ? INFINITY : (dx > 0 ? (cx + 1.0 - ox) : (ox - cx)) * delta_x;
        double side_y = dy == 0.0 ? INFINITY : (dy > 0 ? (cy + 1.0 - oy) : (oy - cy)) * delta_y;

        Rgb color{};
        for (;;) {
            if (side_x < side_y) {
                side_x += delta_x;
                cx += step_x;
            } else {
                side_y += delta_y;
                cy += step_y;
            }
            if (is_wall(cfg, cx, cy)) {
                color = wall_color(cfg, cx, cy);
                break;
            }
            if (is_goal(cfg, cx, cy)) {
                color = kGoalColor;
                break;
            }
        }
        const double dist = std::hypot(cx - pose.x, cy - pose.y);
        double *col = obs.data() + 4 * c;
        col[0] = color.r;
        col[1] = color.g;
        col[2] = color.b;
        col[3] = dist / cfg.diagonal();
    }
    return obs;
}

// ---------------------------------------------------------------------------
// Dynamics
// ---------------------------------------------------------------------------

/// Pose after one action, ignoring episode bookkeeping. Forward into a wall is
/// a no-op.
[[nodiscard]] inline AgentPose next_pose(const AgentPose &pose, Action action, const MazeConfig &cfg) noexcept {
    AgentPose next = pose;
    switch (action) {
    case Action::Forward: {
        const int nx = pose.x + heading_dx(pose.heading);
        const int ny = pose.y + heading_dy(pose.heading);
        if (!is_wall(cfg, nx, ny)) {
            next.x = nx;
            next.y = ny;
        }
        break;
    }
    case Action::TurnLeft: next.heading = turn_left(pose.heading); break;
    case Action::TurnRight: next.heading = turn_right(pose.heading); break;
    }
    return next;
}

/// Linear decay from R0 at t = 0 down to 0 at t = T_max.
[[nodiscard]] inline double goal_reward(const MazeConfig &cfg, int step_index) noexcept {
    const double r = cfg.initial_reward * (1.0 - static_cast<double>(step_index) / cfg.max_steps);
    return r > 0.0 ? r : 0.0;
}

/// Fewest actions from `start` to the goal cell (BFS over cell x heading).
/// Empty if unreachable.
[[nodiscard]] inline std::optional<int> shortest_path_length(const MazeConfig &cfg, const AgentPose &start) {
    const int n = cfg.grid_size;
    auto key = [n](const AgentPose &p) { return (p.y * n + p.x) * 4 + static_cast<int>(p.heading); };
    std::vector<int> dist(static_cast<std::size_t>(n * n * 4), -1);
    std::deque<AgentPose> frontier{start};
    dist[static_cast<std::size_t>(key(start))] = 0;
    while (!frontier.empty()) {
        const AgentPose p = frontier.front();
        frontier.pop_front();
        const int d = dist[static_cast<std::size_t>(key(p))];
        if (is_goal(cfg, p.x, p.y)) return d;
        for (Action a : kAllActions) {
            const AgentPose q = next_pose(p, a, cfg);
            auto &slot = dist[static_cast<std::size_t>(key(q))];
            if (slot < 0) {
                slot = d + 1;
                frontier.push_back(q);
            }
        }
    }
    return std::nullopt;
}

/// True if every corner start, in every heading, can reach the goal within
/// the step limit.
[[nodiscard]] inline bool goal_reachable_from_corners(const MazeConfig &cfg) {
    for (AgentPose corner : corner_cells(cfg)) {
        for (int h = 0; h < 4; ++h) {
            corner.heading = static_cast<Heading>(h);
            const auto len = shortest_path_length(cfg, corner);
            if (!len || *len > cfg.max_steps) return false;
        }
    }
    return true;
}

/// Corner spawn with uniform corner and heading, determined by the seed.
[[nodiscard]] inline AgentPose spawn_pose(const MazeConfig &cfg, std::uint64_t seed) {
    Rng rng(seed);
    AgentPose pose = corner_cells(cfg)[uniform_index(rng, 4)];
    pose.heading = static_cast<Heading>(uniform_index(rng, 4));
    return pose;
}

/// Single foraging arena. One episode at a time; step() after the episode
/// ended throws ProtocolError until the next reset().
class MazeEnv {
public:
    explicit MazeEnv(MazeConfig cfg) : cfg_(std::move(cfg)) { cfg_.validate(); }

    struct ResetResult {
        AgentPose pose;
        Observation observation;
    };

    ResetResult reset(std::uint64_t seed) {
        pose_ = spawn_pose(cfg_, seed);
        steps_ = 0;
        done_ = false;
        return {pose_, render_observation(pose_, cfg_)};
    }

    /// Starts an episode from an explicit pose instead of a corner spawn.
    ResetResult reset_to(const AgentPose &pose) {
        if (!is_valid_pose(cfg_, pose) || is_goal(cfg_, pose.x, pose.y))
            throw ContractError("reset_to needs a free, non-goal cell");
        pose_ = pose;
        steps_ = 0;
        done_ = false;
        return {pose_, render_observation(pose_, cfg_)};
    }

    Transition step(Action action) {
        if (done_) throw ProtocolError("step() called after the episode ended");
        const int t = steps_++;
        pose_ = next_pose(pose_, action, cfg_);
        StepOutcome out;
        out.step_index = t;
        out.observation = render_observation(pose_, cfg_);
        if (is_goal(cfg_, pose_.x, pose_.y)) {
            out.done = true;
            out.reward = goal_reward(cfg_, t);
        } else if (steps_ >= cfg_.max_steps) {
            out.done = true;
        }
        done_ = out.done;
        return {pose_, std::move(out)};
    }

    [[nodiscard]] const MazeConfig &config() const noexcept { return cfg_; }
    [[nodiscard]] const AgentPose &pose() const noexcept { return pose_; }
    [[nodiscard]] bool done() const noexcept { return done_; }
    [[nodiscard]] int steps_taken() const noexcept { return steps_; }

private:
    MazeConfig cfg_;
    AgentPose pose_{};
    int steps_ = 0;
    bool done_ = true;
};

} // namespace dacml
