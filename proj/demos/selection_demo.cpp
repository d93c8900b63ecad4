// Walks the contextual pipeline on a hand-built memory: two rewarded
// sequences that share a state but continue differently.

#include "dacml/selection.hpp"

#include <cstdio>

using namespace dacml;

namespace {

void show(const char *label, const ContextualDecision &d) {
    std::printf("%-22s selected %zu couplet(s)", label, d.selected.size());
    if (d.distribution)
        std::printf("  P(forward)=%.3f P(left)=%.3f P(right)=%.3f  H=%.3f", (*d.distribution)[Action::Forward],
                    (*d.distribution)[Action::TurnLeft], (*d.distribution)[Action::TurnRight], d.distribution->entropy());
    std::printf("\n");
}

} // namespace

int main() {
    LongTermMemory ltm;
    TriggerTable triggers(5.0, 0.5, true);
    auto add = [&](std::vector<Couplet> c, double reward) {
        triggers.add_row(c.size());
        ltm.append({std::move(c), reward});
    };
    add({{{0.1, 0.1}, Action::Forward}, {{0.5, 0.5}, Action::TurnLeft}, {{0.9, 0.2}, Action::Forward}}, 2.4);
    add({{{0.8, 0.8}, Action::TurnRight}, {{0.5, 0.5}, Action::TurnRight}, {{0.2, 0.9}, Action::Forward}}, 1.2);

    SelectionConfig cfg;
    Rng rng(1);
    const std::vector<double> shared{0.5, 0.5};
    show("shared state, cold:", contextual_step(shared, ltm, triggers, cfg, rng));

    // arriving from the first sequence primes its continuation
    const CoupletRef came_from{0, 0};
    triggers.boost_successors({&came_from, 1});
    show("after sequence 0:", contextual_step(shared, ltm, triggers, cfg, rng));

    for (int i = 0; i < 3; ++i) triggers.decay();
    show("three steps later:", contextual_step(shared, ltm, triggers, cfg, rng));
    return 0;
}
