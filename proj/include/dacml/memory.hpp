#pragma once

#include "dacml/errors.hpp"
#include "dacml/maze.hpp"

#include <algorithm>
#include <compare>
#include <cstddef>
#include <deque>
#include <span>
#include <string>
#include <vector>

namespace dacml {

struct MemoryConfig {
    std::size_t stm_capacity = 50;
    std::size_t ltm_capacity = 100;
    double trigger_decay = 0.5;
    double trigger_ceiling = 5.0;

    void validate() const {
        if (stm_capacity < 1) throw ConfigError("memory.stm_capacity must be >= 1");
        if (ltm_capacity < 1) throw ConfigError("memory.ltm_capacity must be >= 1");
        if (!(trigger_decay >= 0.0 && trigger_decay < 1.0))
            throw ConfigError("memory.trigger_decay must be in [0, 1)");
        if (!(trigger_ceiling >= 1.0)) throw ConfigError("memory.trigger_ceiling must be >= 1");
    }
};

/// State-action couplet: the unit stored in both memories.
struct Couplet {
    std::vector<double> embedding;
    Action action = Action::Forward;
};

/// Position of a couplet inside long-term memory.
struct CoupletRef {
    std::size_t sequence = 0;
    std::size_t position = 0;
    friend auto operator<=>(const CoupletRef &, const CoupletRef &) = default;
};

/// FIFO window over the most recent couplets of the current episode.
class ShortTermMemory {
public:
    explicit ShortTermMemory(std::size_t capacity = 50) : capacity_(capacity) {
        if (capacity_ < 1) throw ConfigError("STM capacity must be >= 1");
    }

    void push(Couplet c) {
        if (buffer_.size() == capacity_) buffer_.pop_front();
        buffer_.push_back(std::move(c));
    }

    void clear() noexcept { buffer_.clear(); }

    [[nodiscard]] std::size_t size() const noexcept { return buffer_.size(); }
    [[nodiscard]] bool empty() const noexcept { return buffer_.empty(); }
    [[nodiscard]] std::size_t capacity() const noexcept { return capacity_; }
    [[nodiscard]] const std::deque<Couplet> &contents() const noexcept { return buffer_; }
    [[nodiscard]] const Couplet &operator[](std::size_t i) const { return buffer_[i]; }

private:
    std::size_t capacity_;
    std::deque<Couplet> buffer_;
};

struct SequenceRecord {
    std::vector<Couplet> couplets;
    double reward = 0.0;

    [[nodiscard]] std::size_t length() const noexcept { return couplets.size(); }
};

/// Rewarded episodic sequences, oldest first. Evicts the oldest when full.
class LongTermMemory {
public:
    explicit LongTermMemory(std::size_t capacity = 100) : capacity_(capacity) {
        if (capacity_ < 1) throw ConfigError("LTM capacity must be >= 1");
    }

    /// Appends and returns true if the oldest sequence was evicted to make room.
    bool append(SequenceRecord record) {
        if (record.couplets.empty()) throw ContractError("cannot store an empty sequence");
        if (!(record.reward > 0.0)) throw ContractError("stored sequences need a positive reward");
        bool evicted = false;
        if (sequences_.size() == capacity_) {
            sequences_.pop_front();
            evicted = true;
        }
        sequences_.push_back(std::move(record));
        return evicted;
    }

    [[nodiscard]] std::size_t size() const noexcept { return sequences_.size(); }
    [[nodiscard]] bool empty() const noexcept { return sequences_.empty(); }
    [[nodiscard]] std::size_t capacity() const noexcept { return capacity_; }
    [[nodiscard]] const SequenceRecord &operator[](std::size_t s) const { return sequences_[s]; }
    [[nodiscard]] const std::deque<SequenceRecord> &sequences() const noexcept { return sequences_; }

    [[nodiscard]] std::size_t couplet_count() const noexcept {
        std::size_t n = 0;
        for (const auto &s : sequences_) n += s.length();
        return n;
    }

    [[nodiscard]] bool contains(CoupletRef ref) const noexcept {
        return ref.sequence < sequences_.size() && ref.position < sequences_[ref.sequence].length();
    }

private:
    std::size_t capacity_;
    std::deque<SequenceRecord> sequences_;
};

/// Per-couplet eligibility multipliers that carry the sequential bias.
///
/// One row per LTM sequence, one entry per couplet. Entries rest at 1, are
/// raised to the ceiling when their predecessor is selected and relax back
/// via t <- 1 + decay * (t - 1). With the bias disabled every read returns 1
/// and updates are ignored.
class TriggerTable {
public:
    TriggerTable(double ceiling = 5.0, double decay = 0.5, bool bias_enabled = true)
        : ceiling_(ceiling), decay_(decay), enabled_(bias_enabled) {}

    TriggerTable(const MemoryConfig &cfg, bool bias_enabled)
        : TriggerTable(cfg.trigger_ceiling, cfg.trigger_decay, bias_enabled) {}

    [[nodiscard]] double at(std::size_t sequence, std::size_t position) const {
        if (!enabled_) return 1.0;
        return rows_.at(sequence).at(position);
    }
    [[nodiscard]] double at(CoupletRef ref) const { return at(ref.sequence, ref.position); }

    void add_row(std::size_t length) { rows_.emplace_back(length, 1.0); }
    void drop_oldest_row() {
        if (!rows_.empty()) rows_.pop_front();
    }

    void decay() noexcept {
        if (!enabled_) return;
        for (auto &row : rows_)
            for (double &t : row) t = 1.0 + decay_ * (t - 1.0);
    }

    /// Raises the successor of each selected couplet to the ceiling. Returns
    /// the number of references skipped because they no longer exist.
    std::size_t boost_successors(std::span<const CoupletRef> selected) {
        std::size_t stale = 0;
        for (const CoupletRef &ref : selected) {
            if (ref.sequence >= rows_.size() || ref.position >= rows_[ref.sequence].size()) {
                ++stale;
                continue;
            }
            if (!enabled_) continue;
            auto &row = rows_[ref.sequence];
            if (ref.position + 1 < row.size()) row[ref.position + 1] = ceiling_;
        }
        return stale;
    }

    [[nodiscard]] bool bias_enabled() const noexcept { return enabled_; }
    [[nodiscard]] double ceiling() const noexcept { return ceiling_; }
    [[nodiscard]] double decay_factor() const noexcept { return decay_; }
    [[nodiscard]] std::size_t rows() const noexcept { return rows_.size(); }
    [[nodiscard]] std::size_t row_length(std::size_t s) const { return rows_.at(s).size(); }

    /// Shape matches LTM exactly: one row per sequence, one entry per couplet.
    [[nodiscard]] bool matches(const LongTermMemory &ltm) const noexcept {
        if (rows_.size() != ltm.size()) return false;
        for (std::size_t s = 0; s < rows_.size(); ++s)
            if (rows_[s].size() != ltm[s].length()) return false;
        return true;
    }

private:
    double ceiling_;
    double decay_;
    bool enabled_;
    std::deque<std::vector<double>> rows_;
};

enum class ConsolidationStatus { Stored, StoredWithEviction, SkippedEmptyStm, SkippedNonPositiveReward };

[[nodiscard]] constexpr bool stored(ConsolidationStatus s) noexcept {
    return s == ConsolidationStatus::Stored || s == ConsolidationStatus::StoredWithEviction;
}

/// Moves the STM contents into LTM as one rewarded sequence and keeps the
/// trigger table aligned. No-op (STM untouched) for an empty STM or a
/// non-positive reward.
inline ConsolidationStatus consolidate(ShortTermMemory &stm, LongTermMemory &ltm, TriggerTable &triggers,
                                       double reward) {
    if (stm.empty()) return ConsolidationStatus::SkippedEmptyStm;
    if (!(reward > 0.0)) return ConsolidationStatus::SkippedNonPositiveReward;

    SequenceRecord record;
    record.reward = reward;
    record.couplets.assign(stm.contents().begin(), stm.contents().end());
    const std::size_t length = record.length();

    const bool evicted = ltm.append(std::move(record));
    if (evicted) triggers.drop_oldest_row();
    triggers.add_row(length);
    stm.clear();
    return evicted ? ConsolidationStatus::StoredWithEviction : ConsolidationStatus::Stored;
}

} // namespace dacml
