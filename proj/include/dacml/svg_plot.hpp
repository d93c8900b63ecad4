#pragma once

#include "dacml/agent.hpp"
#include "dacml/experiment.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <map>
#include <optional>
#include <sstream>
#include <string>
#include <string_view>
#include <vector>

namespace dacml {

enum class PlotMetric { All, Reward, Steps, Entropy };

[[nodiscard]] inline std::optional<PlotMetric> parse_plot_metric(std::string_view s) noexcept {
    if (s == "all") return PlotMetric::All;
    if (s == "reward") return PlotMetric::Reward;
    if (s == "steps") return PlotMetric::Steps;
    if (s == "entropy") return PlotMetric::Entropy;
    return std::nullopt;
}

namespace detail {

[[nodiscard]] inline std::string svg_num(double v) {
    char buf[32];
    std::snprintf(buf, sizeof buf, "%.2f", v);
    return buf;
}

[[nodiscard]] inline std::string tick_label(double v) {
    char buf[32];
    std::snprintf(buf, sizeof buf, "%.3g", v);
    return buf;
}

[[nodiscard]] inline std::string_view agent_color(AgentKind k) noexcept {
    switch (k) {
    case AgentKind::DacMl: return "#2ca02c";
    case AgentKind::DacMlNoBias: return "#d62728";
    case AgentKind::Reactive: return "#1f77b4";
    }
    return "#000000";
}

/// Rounds a span up to 1, 2 or 5 times a power of ten.
[[nodiscard]] inline double nice_step(double span, int ticks) {
    const double raw = span / ticks;
    const double mag = std::pow(10.0, std::floor(std::log10(raw)));
    const double norm = raw / mag;
    const double nice = norm <= 1.0 ? 1.0 : norm <= 2.0 ? 2.0 : norm <= 5.0 ? 5.0 : 10.0;
    return nice * mag;
}

struct Panel {
    std::string title;
    std::string y_label;
    PlotMetric metric;
};

[[nodiscard]] inline std::optional<double> metric_value(const SummaryRow &r, PlotMetric m) {
    switch (m) {
    case PlotMetric::Reward: return r.reward;
    case PlotMetric::Steps: return r.steps;
    case PlotMetric::Entropy: return r.entropy;
    case PlotMetric::All: break;
    }
    return std::nullopt;
}

} // namespace detail

/// Stacked learning-curve panels (reward, steps, entropy) from windowed
/// summary rows, one polyline per agent. Output is a pure function of input.
[[nodiscard]] inline std::string render_learning_curves_svg(const std::vector<SummaryRow> &rows,
                                                            PlotMetric metric = PlotMetric::All) {
    using detail::svg_num;
    std::vector<detail::Panel> panels;
    if (metric == PlotMetric::All || metric == PlotMetric::Reward)
        panels.push_back({"Mean reward per episode", "reward", PlotMetric::Reward});
    if (metric == PlotMetric::All || metric == PlotMetric::Steps)
        panels.push_back({"Mean steps per episode", "steps", PlotMetric::Steps});
    if (metric == PlotMetric::All || metric == PlotMetric::Entropy)
        panels.push_back({"Mean policy entropy per episode", "entropy (nats)", PlotMetric::Entropy});

    std::map<AgentKind, std::vector<const SummaryRow *>> by_agent;
    for (const auto &r : rows) by_agent[r.agent].push_back(&r);
    for (auto &[kind, series] : by_agent)
        std::sort(series.begin(), series.end(),
                  [](const SummaryRow *a, const SummaryRow *b) { return a->episode < b->episode; });

    double x_max = 1.0;
    for (const auto &r : rows) x_max = std::max(x_max, static_cast<double>(r.episode));

    constexpr double width = 720.0;
    constexpr double panel_h = 220.0;
    constexpr double left = 70.0;
    constexpr double right = 20.0;
    constexpr double top = 30.0;
    constexpr double bottom = 40.0;
    constexpr double legend_h = 30.0;
    const double plot_w = width - left - right;
    const double plot_h = panel_h - top - bottom;
    const double height = legend_h + panel_h * static_cast<double>(panels.size());

    std::ostringstream svg;
    svg << "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" << svg_num(width) << "\" height=\""
        << svg_num(height) << "\" viewBox=\"0 0 " << svg_num(width) << ' ' << svg_num(height) << "\">\n";
    svg << "<rect width=\"100%\" height=\"100%\" fill=\"white\"/>\n";
    svg << "<g font-family=\"sans-serif\" font-size=\"11\">\n";

    // legend
    double lx = left;
    for (const auto &[kind, series] : by_agent) {
        svg << "<line x1=\"" << svg_num(lx) << "\" y1=\"15\" x2=\"" << svg_num(lx + 20) << "\" y2=\"15\" stroke=\""
            << detail::agent_color(kind) << "\" stroke-width=\"2\"/>\n";
        svg << "<text x=\"" << svg_num(lx + 25) << "\" y=\"19\">" << to_string(kind) << "</text>\n";
        lx += 140.0;
    }

    for (std::size_t p = 0; p < panels.size(); ++p) {
        const auto &panel = panels[p];
        const double y0 = legend_h + panel_h * static_cast<double>(p) + top;

        double lo = 0.0;
        double hi = 0.0;
        bool any = false;
        for (const auto &r : rows) {
            const auto v = detail::metric_value(r, panel.metric);
            if (!v) continue;
            hi = any ? std::max(hi, *v) : *v;
            lo = any ? std::min(lo, *v) : std::min(0.0, *v);
            any = true;
        }
        if (!any || hi <= lo) hi = lo + 1.0;
        const double step = detail::nice_step(hi - lo, 4);
        lo = std::floor(lo / step) * step;
        hi = std::ceil(hi / step) * step;

        auto sx = [&](double x) { return left + plot_w * x / x_max; };
        auto sy = [&](double y) { return y0 + plot_h * (1.0 - (y - lo) / (hi - lo)); };

        svg << "<text x=\"" << svg_num(left + plot_w / 2) << "\" y=\"" << svg_num(y0 - 10)
            << "\" text-anchor=\"middle\" font-size=\"13\">" << panel.title << "</text>\n";
        svg << "<rect x=\"" << svg_num(left) << "\" y=\"" << svg_num(y0) << "\" width=\"" << svg_num(plot_w)
            << "\" height=\"" << svg_num(plot_h) << "\" fill=\"none\" stroke=\"#444\"/>\n";

        for (double t = lo; t <= hi + step * 1e-9; t += step) {
            svg << "<line x1=\"" << svg_num(left) << "\" y1=\"" << svg_num(sy(t)) << "\" x2=\""
                << svg_num(left + plot_w) << "\" y2=\"" << svg_num(sy(t)) << "\" stroke=\"#ddd\"/>\n";
            svg << "<text x=\"" << svg_num(left - 6) << "\" y=\"" << svg_num(sy(t) + 4)
                << "\" text-anchor=\"end\">" << detail::tick_label(t) << "</text>\n";
        }
        const double xstep = detail::nice_step(x_max, 5);
        for (double t = 0.0; t <= x_max + xstep * 1e-9; t += xstep) {
            svg << "<text x=\"" << svg_num(sx(t)) << "\" y=\"" << svg_num(y0 + plot_h + 15)
                << "\" text-anchor=\"middle\">" << detail::tick_label(t) << "</text>\n";
        }
        svg << "<text x=\"" << svg_num(left + plot_w / 2) << "\" y=\"" << svg_num(y0 + plot_h + 32)
            << "\" text-anchor=\"middle\">episode</text>\n";
        svg << "<text transform=\"translate(" << svg_num(18) << ',' << svg_num(y0 + plot_h / 2)
            << ") rotate(-90)\" text-anchor=\"middle\">" << panel.y_label << "</text>\n";

        for (const auto &[kind, series] : by_agent) {
            std::ostringstream pts;
            std::size_t n = 0;
            for (const SummaryRow *r : series) {
                const auto v = detail::metric_value(*r, panel.metric);
                if (!v) continue;
                pts << (n++ ? " " : "") << svg_num(sx(static_cast<double>(r->episode))) << ',' << svg_num(sy(*v));
            }
            if (n == 0) continue;
            svg << "<polyline fill=\"none\" stroke=\"" << detail::agent_color(kind)
                << "\" stroke-width=\"1.5\" points=\"" << pts.str() << "\"/>\n";
        }
    }
    svg << "</g>\n</svg>\n";
    return svg.str();
}

} // namespace dacml
