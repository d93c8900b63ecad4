#include "dacml/memory.hpp"
#include "memory_model.hpp"

#include <gtest/gtest.h>

#include <cmath>
#include <map>

using namespace dacml;

namespace {

Couplet tagged(double tag, Action a = Action::Forward) { return {{tag, 0.0}, a}; }

void fill(ShortTermMemory &stm, int n, double offset = 0.0) {
    for (int i = 1; i <= n; ++i) stm.push(tagged(offset + i));
}

} // namespace

TEST(ShortTermMemory, PushIntoEmpty) {
    ShortTermMemory stm(50);
    stm.push(tagged(1));
    EXPECT_EQ(stm.size(), 1u);
}

TEST(ShortTermMemory, FullBufferDropsOldest) {
    ShortTermMemory stm(50);
    fill(stm, 50);
    stm.push(tagged(51));
    ASSERT_EQ(stm.size(), 50u);
    EXPECT_EQ(stm[0].embedding[0], 2.0);
    EXPECT_EQ(stm[49].embedding[0], 51.0);
}

TEST(ShortTermMemory, KeepsLastFiftyOfHundredTwenty) {
    ShortTermMemory stm(50);
    fill(stm, 120);
    ASSERT_EQ(stm.size(), 50u);
    for (std::size_t i = 0; i < 50; ++i) EXPECT_EQ(stm[i].embedding[0], 71.0 + static_cast<double>(i));
}

TEST(Consolidation, EmptyStmLeavesLtm) {
    ShortTermMemory stm;
    LongTermMemory ltm;
    TriggerTable tt;
    EXPECT_EQ(consolidate(stm, ltm, tt, 2.0), ConsolidationStatus::SkippedEmptyStm);
    EXPECT_EQ(ltm.size(), 0u);
}

TEST(Consolidation, StoresWholeStmWithReward) {
    ShortTermMemory stm;
    LongTermMemory ltm;
    TriggerTable tt;
    fill(stm, 12);
    EXPECT_EQ(consolidate(stm, ltm, tt, 2.1), ConsolidationStatus::Stored);
    ASSERT_EQ(ltm.size(), 1u);
    EXPECT_EQ(ltm[0].length(), 12u);
    EXPECT_EQ(ltm[0].reward, 2.1);
    EXPECT_EQ(stm.size(), 0u);
    EXPECT_TRUE(tt.matches(ltm));
}

TEST(Consolidation, ZeroRewardIsSkipped) {
    ShortTermMemory stm;
    LongTermMemory ltm;
    TriggerTable tt;
    fill(stm, 5);
    EXPECT_EQ(consolidate(stm, ltm, tt, 0.0), ConsolidationStatus::SkippedNonPositiveReward);
    EXPECT_EQ(ltm.size(), 0u);
    EXPECT_EQ(stm.size(), 5u);
}

TEST(Consolidation, FullLtmEvictsOldest) {
    ShortTermMemory stm;
    LongTermMemory ltm(100);
    TriggerTable tt;
    for (int s = 0; s < 100; ++s) {
        fill(stm, 3, 1000.0 * s);
        ASSERT_TRUE(stored(consolidate(stm, ltm, tt, 1.0 + s)));
    }
    fill(stm, 4, 1e6);
    EXPECT_EQ(consolidate(stm, ltm, tt, 7.0), ConsolidationStatus::StoredWithEviction);
    ASSERT_EQ(ltm.size(), 100u);
    EXPECT_EQ(ltm[0].reward, 2.0);  // the first sequence (reward 1) is gone
    EXPECT_EQ(ltm[99].reward, 7.0);
    EXPECT_EQ(ltm[99].couplets[0].embedding[0], 1e6 + 1);
    EXPECT_TRUE(tt.matches(ltm));
}

TEST(LongTermMemory, RejectsEmptyOrUnrewarded) {
    LongTermMemory ltm;
    EXPECT_THROW(ltm.append({{}, 1.0}), ContractError);
    EXPECT_THROW(ltm.append({{tagged(1)}, 0.0}), ContractError);
}

TEST(Triggers, DecayAtRestIsIdentity) {
    TriggerTable tt(5.0, 0.5, true);
    tt.add_row(3);
    tt.decay();
    for (std::size_t i = 0; i < 3; ++i) EXPECT_EQ(tt.at(0, i), 1.0);
}

TEST(Triggers, DecayFromCeiling) {
    TriggerTable tt(5.0, 0.5, true);
    tt.add_row(2);
    const CoupletRef first{0, 0};
    tt.boost_successors({&first, 1});
    EXPECT_EQ(tt.at(0, 1), 5.0);
    tt.decay();
    EXPECT_DOUBLE_EQ(tt.at(0, 1), 3.0);
}

TEST(Triggers, DecayConvergesWithinFiftySteps) {
    TriggerTable tt(5.0, 0.5, true);
    tt.add_row(2);
    const CoupletRef first{0, 0};
    tt.boost_successors({&first, 1});
    int steps = 0;
    while (std::abs(tt.at(0, 1) - 1.0) > 1e-6) {
        tt.decay();
        ++steps;
        ASSERT_LE(steps, 50);
    }
    // 4 * 0.5^n <= 1e-6 first holds at n = 22
    EXPECT_EQ(steps, 22);
}

TEST(Triggers, BoostCases) {
    TriggerTable tt(5.0, 0.5, true);
    tt.add_row(6);
    tt.add_row(4);
    EXPECT_EQ(tt.boost_successors({}), 0u);
    for (std::size_t s = 0; s < 2; ++s)
        for (std::size_t i = 0; i < tt.row_length(s); ++i) EXPECT_EQ(tt.at(s, i), 1.0);

    const CoupletRef last{1, 3};
    tt.boost_successors({&last, 1});
    for (std::size_t i = 0; i < 4; ++i) EXPECT_EQ(tt.at(1, i), 1.0);

    const CoupletRef mid{0, 3};
    tt.boost_successors({&mid, 1});
    for (std::size_t i = 0; i < 6; ++i) EXPECT_EQ(tt.at(0, i), i == 4 ? 5.0 : 1.0);

    const CoupletRef stale[] = {{2, 0}, {0, 9}};
    EXPECT_EQ(tt.boost_successors(stale), 2u);
}

TEST(Triggers, DisabledBiasReadsOne) {
    TriggerTable tt(5.0, 0.5, false);
    Rng rng(11);
    for (int i = 0; i < 50; ++i) tt.add_row(1 + uniform_index(rng, 10));
    for (int step = 0; step < 2000; ++step) {
        std::vector<CoupletRef> refs;
        for (int k = 0; k < 5; ++k) {
            const std::size_t s = uniform_index(rng, tt.rows());
            refs.push_back({s, uniform_index(rng, tt.row_length(s))});
        }
        tt.boost_successors(refs);
        if (bernoulli(rng, 0.5)) tt.decay();
        const std::size_t s = uniform_index(rng, tt.rows());
        ASSERT_EQ(tt.at(s, uniform_index(rng, tt.row_length(s))), 1.0);
    }
}

TEST(MemoryProperties, RandomInterleavingsMatchModel) {
    const auto report = memory_model::run_interleavings(20000, 20260301);
    EXPECT_EQ(report.violations, 0u) << report.first_violation;
    EXPECT_GE(report.operations, 10000u);
    EXPECT_GT(report.evictions, 0u);
    EXPECT_GT(report.stm_overflows, 0u);
}
