#include "dacml/maze.hpp"
#include "dacml/reactive.hpp"

#include <gtest/gtest.h>

#include <algorithm>
#include <array>
#include <cmath>

using namespace dacml;

namespace {

std::size_t corner_index(const MazeConfig &cfg, const AgentPose &p) {
    const auto corners = corner_cells(cfg);
    for (std::size_t i = 0; i < corners.size(); ++i)
        if (corners[i].x == p.x && corners[i].y == p.y) return i;
    return corners.size();
}

MazeConfig small_maze() {
    MazeConfig cfg;
    cfg.grid_size = 5;
    return cfg;
}

} // namespace

TEST(MazeReset, SpawnsInACorner) {
    MazeEnv env{MazeConfig{}};
    for (std::uint64_t seed = 0; seed < 200; ++seed) {
        const auto r = env.reset(seed);
        EXPECT_LT(corner_index(env.config(), r.pose), 4u);
        EXPECT_EQ(r.observation.size(), 36u);
        EXPECT_FALSE(env.done());
    }
}

TEST(MazeReset, SameSeedSamePoseAndObservation) {
    MazeEnv a{MazeConfig{}};
    MazeEnv b{MazeConfig{}};
    for (std::uint64_t seed : {0ULL, 7ULL, 123456789ULL}) {
        const auto ra = a.reset(seed);
        const auto rb = b.reset(seed);
        EXPECT_EQ(ra.pose, rb.pose);
        EXPECT_EQ(ra.observation, rb.observation);
    }
}

TEST(MazeReset, CornerAndHeadingFrequenciesAreUniform) {
    const MazeConfig cfg;
    constexpr int n = 10000;
    std::array<int, 4> corners{};
    std::array<int, 4> headings{};
    for (int seed = 0; seed < n; ++seed) {
        const AgentPose p = spawn_pose(cfg, static_cast<std::uint64_t>(seed));
        ++corners[corner_index(cfg, p)];
        ++headings[static_cast<std::size_t>(p.heading)];
    }
    double chi_c = 0.0;
    double chi_h = 0.0;
    for (int i = 0; i < 4; ++i) {
        EXPECT_NEAR(corners[i] / double(n), 0.25, 0.02);
        chi_c += std::pow(corners[i] - n / 4.0, 2) / (n / 4.0);
        chi_h += std::pow(headings[i] - n / 4.0, 2) / (n / 4.0);
    }
    // chi-square, 3 dof, p = 0.001
    EXPECT_LT(chi_c, 16.27);
    EXPECT_LT(chi_h, 16.27);
}

TEST(MazeStep, ForwardIntoWallIsNoOp) {
    MazeEnv env{MazeConfig{}};
    env.reset_to({1, 1, Heading::North});
    const auto tr = env.step(Action::Forward);
    EXPECT_EQ(tr.pose, (AgentPose{1, 1, Heading::North}));
    EXPECT_EQ(tr.outcome.reward, 0.0);
    EXPECT_FALSE(tr.outcome.done);
    EXPECT_EQ(tr.outcome.step_index, 0);
}

TEST(MazeStep, TurnsRotateInPlace) {
    MazeEnv env{MazeConfig{}};
    env.reset_to({3, 4, Heading::North});
    EXPECT_EQ(env.step(Action::TurnRight).pose, (AgentPose{3, 4, Heading::East}));
    EXPECT_EQ(env.step(Action::TurnRight).pose, (AgentPose{3, 4, Heading::South}));
    EXPECT_EQ(env.step(Action::TurnLeft).pose, (AgentPose{3, 4, Heading::East}));
    EXPECT_EQ(env.step(Action::Forward).pose, (AgentPose{4, 4, Heading::East}));
}

TEST(MazeStep, GoalOnFirstStepPaysFullReward) {
    MazeEnv env{MazeConfig{}};
    env.reset_to({7, 6, Heading::South});
    const auto tr = env.step(Action::Forward);
    EXPECT_TRUE(tr.outcome.done);
    EXPECT_DOUBLE_EQ(tr.outcome.reward, 3.0);
}

TEST(MazeStep, GoalAtHalfTimePaysHalf) {
    MazeEnv env{MazeConfig{}};
    env.reset_to({7, 6, Heading::South});
    for (int i = 0; i < 100; ++i) ASSERT_FALSE(env.step(Action::TurnLeft).outcome.done);
    const auto tr = env.step(Action::Forward);
    EXPECT_EQ(tr.outcome.step_index, 100);
    EXPECT_TRUE(tr.outcome.done);
    EXPECT_DOUBLE_EQ(tr.outcome.reward, 1.5);
}

TEST(MazeStep, TimeoutEndsWithZeroReward) {
    MazeEnv env{MazeConfig{}};
    env.reset_to({1, 1, Heading::North});
    Transition tr;
    for (int i = 0; i < 200; ++i) {
        ASSERT_FALSE(env.done());
        tr = env.step(Action::TurnLeft);
    }
    EXPECT_TRUE(tr.outcome.done);
    EXPECT_EQ(tr.outcome.reward, 0.0);
    EXPECT_EQ(tr.outcome.step_index, 199);
    EXPECT_EQ(env.steps_taken(), 200);
}

TEST(MazeStep, StepOutsideEpisodeIsProtocolError) {
    MazeEnv env{MazeConfig{}};
    EXPECT_THROW(env.step(Action::Forward), ProtocolError);
    env.reset_to({7, 6, Heading::South});
    (void)env.step(Action::Forward);
    EXPECT_THROW(env.step(Action::Forward), ProtocolError);
    env.reset(3);
    EXPECT_NO_THROW(env.step(Action::TurnLeft));
}

TEST(MazeStep, ResetToRejectsWallsAndGoal) {
    MazeEnv env{MazeConfig{}};
    EXPECT_THROW(env.reset_to({0, 3, Heading::North}), ContractError);
    EXPECT_THROW(env.reset_to({7, 7, Heading::North}), ContractError);
}

TEST(MazeReward, LinearDecayValues) {
    const MazeConfig cfg;
    EXPECT_DOUBLE_EQ(goal_reward(cfg, 0), 3.0);
    EXPECT_DOUBLE_EQ(goal_reward(cfg, 100), 1.5);
    EXPECT_DOUBLE_EQ(goal_reward(cfg, 200), 0.0);
    EXPECT_DOUBLE_EQ(goal_reward(cfg, 500), 0.0);
}

TEST(MazeReward, BoundedAndNonIncreasing) {
    const MazeConfig cfg;
    double prev = goal_reward(cfg, 0);
    for (int t = 0; t <= 400; ++t) {
        const double r = goal_reward(cfg, t);
        EXPECT_GE(r, 0.0);
        EXPECT_LE(r, cfg.initial_reward);
        EXPECT_LE(r, prev);
        prev = r;
    }
}

TEST(MazeRender, WallDirectlyAheadHandComputed) {
    // 5x5: interior cells 1..3, goal at (2, 2). From (1, 1) facing north the
    // central ray hits (1, 0), one cell away, on the red north arc.
    const MazeConfig cfg = small_maze();
    const auto obs = render_observation({1, 1, Heading::North}, cfg);
    ASSERT_EQ(obs.size(), 36u);
    const double *mid = obs.data() + 4 * 4;
    EXPECT_EQ(mid[0], 1.0);
    EXPECT_EQ(mid[1], 0.0);
    EXPECT_EQ(mid[2], 0.0);
    EXPECT_NEAR(mid[3], 1.0 / (5.0 * std::sqrt(2.0)), 1e-12);
    EXPECT_TRUE(wall_ahead(obs, cfg.contact_depth()));
}

TEST(MazeRender, DistantWallHandComputed) {
    // From (1, 1) facing east the ray crosses (2, 1), (3, 1) and stops at
    // (4, 1): east arc (blue), three cells away.
    const MazeConfig cfg = small_maze();
    const auto obs = render_observation({1, 1, Heading::East}, cfg);
    const double *mid = obs.data() + 4 * 4;
    EXPECT_EQ(mid[0], 0.0);
    EXPECT_EQ(mid[1], 0.0);
    EXPECT_EQ(mid[2], 1.0);
    EXPECT_NEAR(mid[3], 3.0 / (5.0 * std::sqrt(2.0)), 1e-12);
    EXPECT_FALSE(wall_ahead(obs, cfg.contact_depth()));
}

TEST(MazeRender, GoalIsGreenAndNotAWall) {
    const MazeConfig cfg = small_maze();
    const auto obs = render_observation({2, 1, Heading::South}, cfg);
    const double *mid = obs.data() + 4 * 4;
    EXPECT_EQ(mid[0], 0.0);
    EXPECT_EQ(mid[1], 1.0);
    EXPECT_EQ(mid[2], 0.0);
    EXPECT_NEAR(mid[3], cfg.contact_depth(), 1e-12);
    EXPECT_FALSE(wall_ahead(obs, cfg.contact_depth()));
}

TEST(MazeRender, DifferentWallsLookDifferent) {
    const MazeConfig cfg;
    const auto north = render_observation({7, 3, Heading::North}, cfg);
    const auto west = render_observation({3, 7, Heading::West}, cfg);
    const auto east = render_observation({11, 7, Heading::East}, cfg);
    EXPECT_NE(north, west);
    EXPECT_NE(north, east);
    EXPECT_NE(west, east);
}

TEST(MazeRender, PaletteSplitsPerimeterClockwise) {
    const MazeConfig cfg;
    const auto pal = default_wall_palette();
    EXPECT_EQ(wall_color(cfg, 3, 0), pal[0]);
    EXPECT_EQ(wall_color(cfg, 14, 3), pal[1]);
    EXPECT_EQ(wall_color(cfg, 10, 14), pal[2]);
    EXPECT_EQ(wall_color(cfg, 0, 10), pal[3]);
}

TEST(MazeRender, ObservationsStayInUnitRangeOnRandomWalks) {
    const MazeConfig cfg;
    MazeEnv env{cfg};
    Rng rng(99);
    for (int ep = 0; ep < 30; ++ep) {
        auto r = env.reset(rng());
        Observation obs = r.observation;
        while (true) {
            ASSERT_EQ(obs.size(), cfg.observation_size());
            for (std::size_t k = 0; k < obs.size(); ++k) {
                ASSERT_GE(obs[k], 0.0);
                ASSERT_LE(obs[k], 1.0);
                if (k % 4 == 3) ASSERT_GT(obs[k], 0.0);
            }
            auto tr = env.step(kAllActions[uniform_index(rng, 3)]);
            ASSERT_TRUE(is_valid_pose(cfg, tr.pose));
            ASSERT_GE(tr.outcome.reward, 0.0);
            ASSERT_LE(tr.outcome.reward, cfg.initial_reward);
            if (tr.outcome.done) break;
            obs = tr.outcome.observation;
        }
    }
}

TEST(MazeLayout, ShortestPathsFromCorner) {
    const MazeConfig cfg;
    // east: 6 forward, right, 6 forward
    EXPECT_EQ(shortest_path_length(cfg, {1, 1, Heading::East}), 13);
    // north: right, 6 forward, right, 6 forward
    EXPECT_EQ(shortest_path_length(cfg, {1, 1, Heading::North}), 14);
    EXPECT_TRUE(goal_reachable_from_corners(cfg));
}

TEST(MazeLayout, TightStepLimitMakesGoalUnreachable) {
    MazeConfig cfg;
    cfg.max_steps = 12;
    EXPECT_FALSE(goal_reachable_from_corners(cfg));
}

TEST(MazeConfigValidation, RejectsBadValues) {
    MazeConfig cfg;
    cfg.grid_size = 4;
    EXPECT_THROW(cfg.validate(), ConfigError);
    cfg = MazeConfig{};
    cfg.wall_palette[1] = kGoalColor;
    EXPECT_THROW(cfg.validate(), ConfigError);
    cfg = MazeConfig{};
    cfg.wall_palette[1] = cfg.wall_palette[0];
    EXPECT_THROW(cfg.validate(), ConfigError);
    cfg = MazeConfig{};
    cfg.field_of_view_deg = 180.0;
    EXPECT_THROW(cfg.validate(), ConfigError);
    cfg = MazeConfig{};
    cfg.max_steps = 0;
    EXPECT_THROW(MazeEnv{cfg}, ConfigError);
}
