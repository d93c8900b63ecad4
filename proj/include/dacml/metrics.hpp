#pragma once

#include "dacml/agent.hpp"
#include "dacml/errors.hpp"

#include <algorithm>
#include <optional>
#include <span>
#include <vector>

namespace dacml {

/// Mean per-step entropy over the steps that carried a distribution.
[[nodiscard]] inline std::optional<double> mean_entropy(std::span<const StepLog> logs) {
    double sum = 0.0;
    std::size_t n = 0;
    for (const auto &log : logs) {
        if (!log.distribution) continue;
        sum += log.distribution->entropy();
        ++n;
    }
    if (n == 0) return std::nullopt;
    return sum / static_cast<double>(n);
}

/// Streaming form of mean_entropy, used inside the episode loop.
class EntropyAccumulator {
public:
    void add(const StepLog &log) noexcept {
        if (!log.distribution) return;
        sum_ += log.distribution->entropy();
        ++count_;
    }
    [[nodiscard]] std::optional<double> mean() const noexcept {
        if (count_ == 0) return std::nullopt;
        return sum_ / static_cast<double>(count_);
    }

private:
    double sum_ = 0.0;
    std::size_t count_ = 0;
};

/// Trailing moving average; the first w - 1 points average what is available.
[[nodiscard]] inline std::vector<double> sliding_window(std::span<const double> series, std::size_t w) {
    if (w < 1) throw ContractError("sliding window width must be >= 1");
    std::vector<double> out;
    out.reserve(series.size());
    for (std::size_t k = 0; k < series.size(); ++k) {
        const std::size_t lo = k + 1 >= w ? k + 1 - w : 0;
        double sum = 0.0;
        for (std::size_t j = lo; j <= k; ++j) sum += series[j];
        out.push_back(sum / static_cast<double>(k - lo + 1));
    }
    return out;
}

/// Same trailing window over a series with gaps; a point is absent when its
/// window holds no values.
[[nodiscard]] inline std::vector<std::optional<double>> sliding_window(std::span<const std::optional<double>> series,
                                                                       std::size_t w) {
    if (w < 1) throw ContractError("sliding window width must be >= 1");
    std::vector<std::optional<double>> out;
    out.reserve(series.size());
    for (std::size_t k = 0; k < series.size(); ++k) {
        const std::size_t lo = k + 1 >= w ? k + 1 - w : 0;
        double sum = 0.0;
        std::size_t n = 0;
        for (std::size_t j = lo; j <= k; ++j) {
            if (!series[j]) continue;
            sum += *series[j];
            ++n;
        }
        out.push_back(n ? std::optional<double>(sum / static_cast<double>(n)) : std::nullopt);
    }
    return out;
}

} // namespace dacml
