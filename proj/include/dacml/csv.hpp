#pragma once

#include "dacml/agent.hpp"
#include "dacml/experiment.hpp"

#include <charconv>
#include <cmath>
#include <cstdlib>
#include <istream>
#include <optional>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

namespace dacml {

/// Input file does not follow the expected CSV schema. `line` is 1-based.
class CsvFormatError : public std::runtime_error {
public:
    CsvFormatError(std::size_t line, const std::string &what)
        : std::runtime_error("line " + std::to_string(line) + ": " + what), line_(line) {}
    [[nodiscard]] std::size_t line() const noexcept { return line_; }

private:
    std::size_t line_;
};

namespace detail {

[[nodiscard]] inline std::vector<std::string_view> split_fields(std::string_view line) {
    std::vector<std::string_view> out;
    std::size_t start = 0;
    for (;;) {
        const auto comma = line.find(',', start);
        out.push_back(line.substr(start, comma == std::string_view::npos ? std::string_view::npos : comma - start));
        if (comma == std::string_view::npos) break;
        start = comma + 1;
    }
    return out;
}

[[nodiscard]] inline std::string_view trim_cr(std::string_view s) {
    if (!s.empty() && s.back() == '\r') s.remove_suffix(1);
    return s;
}

[[nodiscard]] inline std::optional<double> parse_real(std::string_view s) {
    if (s.empty()) return std::nullopt;
    const std::string copy(s);
    char *end = nullptr;
    const double v = std::strtod(copy.c_str(), &end);
    if (end != copy.c_str() + copy.size() || !std::isfinite(v)) return std::nullopt;
    return v;
}

template <typename Int>
[[nodiscard]] std::optional<Int> parse_int(std::string_view s) {
    Int v{};
    const auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
    if (ec != std::errc{} || ptr != s.data() + s.size()) return std::nullopt;
    return v;
}

/// Reads lines, checks the header, hands each data row (with its line number)
/// to `on_row`. Blank lines are skipped.
template <typename OnRow>
void read_rows(std::istream &in, std::string_view header, std::size_t columns, OnRow &&on_row) {
    std::string line;
    std::size_t line_no = 0;
    if (!std::getline(in, line)) throw CsvFormatError(1, "empty file, expected header '" + std::string(header) + "'");
    ++line_no;
    if (trim_cr(line) != header) throw CsvFormatError(1, "expected header '" + std::string(header) + "'");
    while (std::getline(in, line)) {
        ++line_no;
        const auto view = trim_cr(line);
        if (view.empty()) continue;
        const auto fields = split_fields(view);
        if (fields.size() != columns)
            throw CsvFormatError(line_no, "expected " + std::to_string(columns) + " fields, got " +
                                              std::to_string(fields.size()));
        on_row(fields, line_no);
    }
}

[[nodiscard]] inline AgentKind parse_agent_field(std::string_view s, std::size_t line) {
    const auto kind = parse_agent_kind(s);
    if (!kind) throw CsvFormatError(line, "unknown agent '" + std::string(s) + "'");
    return *kind;
}

} // namespace detail

/// Parses a results.csv produced by the `run` command.
[[nodiscard]] inline std::vector<EpisodeRecord> read_results_csv(std::istream &in) {
    std::vector<EpisodeRecord> records;
    detail::read_rows(in, kResultsHeader, 6, [&](const std::vector<std::string_view> &f, std::size_t line) {
        EpisodeRecord r;
        r.agent = detail::parse_agent_field(f[0], line);
        const auto run = detail::parse_int<std::size_t>(f[1]);
        const auto episode = detail::parse_int<std::size_t>(f[2]);
        const auto reward = detail::parse_real(f[3]);
        const auto steps = detail::parse_int<int>(f[4]);
        if (!run || !episode || !reward || !steps) throw CsvFormatError(line, "malformed numeric field");
        r.run = *run;
        r.episode = *episode;
        r.reward = *reward;
        r.steps = *steps;
        if (!f[5].empty()) {
            const auto h = detail::parse_real(f[5]);
            if (!h) throw CsvFormatError(line, "malformed mean_entropy");
            r.mean_entropy = *h;
        }
        records.push_back(r);
    });
    return records;
}

/// Parses a summary.csv produced by the `run` command.
[[nodiscard]] inline std::vector<SummaryRow> read_summary_csv(std::istream &in) {
    std::vector<SummaryRow> rows;
    detail::read_rows(in, kSummaryHeader, 5, [&](const std::vector<std::string_view> &f, std::size_t line) {
        SummaryRow r;
        r.agent = detail::parse_agent_field(f[0], line);
        const auto episode = detail::parse_int<std::size_t>(f[1]);
        const auto reward = detail::parse_real(f[2]);
        const auto steps = detail::parse_real(f[3]);
        if (!episode || !reward || !steps) throw CsvFormatError(line, "malformed numeric field");
        r.episode = *episode;
        r.reward = *reward;
        r.steps = *steps;
        if (!f[4].empty()) {
            const auto h = detail::parse_real(f[4]);
            if (!h) throw CsvFormatError(line, "malformed entropy_w");
            r.entropy = *h;
        }
        rows.push_back(r);
    });
    return rows;
}

} // namespace dacml
