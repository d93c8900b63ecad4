// Trains one agent for a number of episodes and draws the path it takes in
// the last one.
//
//   forage_demo [dacml|dacml-nobias|reactive] [episodes] [seed]

#include "dacml/agent.hpp"
#include "dacml/experiment.hpp"

#include <cstdio>
#include <cstdlib>
#include <string>
#include <vector>

using namespace dacml;

int main(int argc, char **argv) {
    const auto kind = parse_agent_kind(argc > 1 ? argv[1] : "dacml");
    if (!kind) {
        std::fprintf(stderr, "unknown agent '%s'\n", argv[1]);
        return 2;
    }
    const int episodes = argc > 2 ? std::atoi(argv[2]) : 200;
    const std::uint64_t seed = argc > 3 ? std::strtoull(argv[3], nullptr, 10) : 1;

    const MazeConfig maze;
    const AgentConfig cfg;
    MazeEnv env(maze);
    Agent agent(*kind, cfg, maze, derive_seed(seed, 3));
    Rng env_rng(derive_seed(seed, 1));
    Rng rng(derive_seed(seed, 2));

    for (int e = 0; e + 1 < episodes; ++e) {
        const auto rec = play_episode(env, agent, env_rng(), rng);
        if ((e + 1) % 50 == 0)
            std::printf("episode %4d  reward %.2f  steps %3d  LTM %3zu sequences\n", e + 1, rec.reward, rec.steps,
                        agent.ltm().size());
    }

    // last episode, stepped by hand to record the path
    std::vector<std::string> grid(static_cast<std::size_t>(maze.grid_size),
                                  std::string(static_cast<std::size_t>(maze.grid_size), ' '));
    for (int y = 0; y < maze.grid_size; ++y)
        for (int x = 0; x < maze.grid_size; ++x)
            if (is_wall(maze, x, y)) grid[y][x] = '#';
    grid[maze.center()][maze.center()] = 'G';

    auto [pose, obs] = env.reset(env_rng());
    grid[pose.y][pose.x] = 'S';
    int contextual = 0;
    for (;;) {
        const StepLog log = agent.step(obs, rng);
        contextual += log.contextual ? 1 : 0;
        Transition tr = env.step(log.action);
        char &cell = grid[tr.pose.y][tr.pose.x];
        if (cell == ' ') cell = log.contextual ? '*' : '.';
        if (tr.outcome.done) {
            agent.on_episode_end(tr.outcome);
            std::printf("\nlast episode: reward %.2f in %d steps, %d from memory ('*'), rest reactive ('.')\n\n",
                        tr.outcome.reward, tr.outcome.step_index + 1, contextual);
            break;
        }
        obs = std::move(tr.outcome.observation);
    }
    for (const auto &row : grid) std::printf("  %s\n", row.c_str());
    return 0;
}
