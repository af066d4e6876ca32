#include "perr/figure.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <set>

#include <fmt/format.h>

#include "perr/error.hpp"

namespace perr {

namespace {

struct Box {
    double left, top, width, height;
};

struct Axis {
    double lo, hi;
    double to_px(double v, double px_lo, double px_hi) const {
        return px_lo + (v - lo) / (hi - lo) * (px_hi - px_lo);
    }
};

struct SeriesStyle {
    const char* label;
    const char* colour;
    double shift;
};

SeriesStyle style_for(Estimator e) {
    switch (e) {
        case Estimator::perr_comp: return {"PERR_Comp", "#c0392b", kCompShift};
        case Estimator::perr_prev: return {"PERR_Prev", "#2471a3", kPrevShift};
        case Estimator::rr: break;
    }
    return {"RR", "#229954", 0.0};
}

// Step of 1, 2 or 5 times a power of ten giving about `target` intervals.
double nice_step(double span, int target) {
    const double raw = span / target;
    const double mag = std::pow(10.0, std::floor(std::log10(raw)));
    for (double m : {1.0, 2.0, 5.0}) {
        if (m * mag >= raw) return m * mag;
    }
    return 10.0 * mag;
}

std::string num(double v) { return fmt::format("{:.2f}", v); }
std::string data(double v) { return fmt::format("{:.17g}", v); }

std::string marker(Estimator e, double cx, double cy, const char* colour) {
    switch (e) {
        case Estimator::perr_comp:
            return fmt::format(R"(<rect x="{}" y="{}" width="9" height="9" fill="{}"/>)",
                               num(cx - 4.5), num(cy - 4.5), colour);
        case Estimator::perr_prev:
            return fmt::format(R"(<circle cx="{}" cy="{}" r="5" fill="{}"/>)", num(cx), num(cy),
                               colour);
        case Estimator::rr: break;
    }
    return fmt::format(R"(<polygon points="{},{} {},{} {},{}" fill="{}"/>)", num(cx), num(cy - 6),
                       num(cx - 5.5), num(cy + 4), num(cx + 5.5), num(cy + 4), colour);
}

}  // namespace

std::string render_figure(std::span<const SummaryRow> rows, const FigureOptions& options) {
    std::set<int> scenarios;
    std::set<double> dropouts;
    double y_lo = options.reference_rr;
    double y_hi = options.reference_rr;
    for (const auto& r : rows) {
        scenarios.insert(r.scenario_id);
        dropouts.insert(r.dropout_target);
        for (const auto& v : {r.mean, r.p2_5, r.p97_5}) {
            if (v) {
                y_lo = std::min(y_lo, *v);
                y_hi = std::max(y_hi, *v);
            }
        }
    }
    if (scenarios.empty()) throw EmptyInput("no summary rows to plot");

    const double pad_y = std::max(0.05 * (y_hi - y_lo), 0.05);
    const Axis y_axis{y_lo - pad_y, y_hi + pad_y};
    const Axis x_axis{*dropouts.begin() - 0.01, *dropouts.rbegin() + 0.01};

    std::string svg = fmt::format(
        R"(<?xml version="1.0" encoding="UTF-8"?>)"
        "\n"
        R"(<svg xmlns="http://www.w3.org/2000/svg" width="{0}" height="{1}" viewBox="0 0 {0} {1}" font-family="sans-serif" font-size="12">)"
        "\n"
        R"(<rect width="{0}" height="{1}" fill="white"/>)"
        "\n",
        kFigureWidth, kFigureHeight);

    const double panel_w = kFigureWidth / 2.0;
    const double panel_h = (kFigureHeight - 40.0) / 2.0;
    for (int scenario : scenarios) {
        // Slot by scenario id: 1 upper-left, 2 upper-right, 3 lower-left, 4 lower-right.
        const int slot = (scenario - 1) % 4;
        const Box panel{(slot % 2) * panel_w, (slot / 2) * panel_h, panel_w, panel_h};
        const Box plot{panel.left + 70.0, panel.top + 40.0, panel.width - 100.0,
                       panel.height - 90.0};
        const auto px = [&](double v) { return x_axis.to_px(v, plot.left, plot.left + plot.width); };
        const auto py = [&](double v) { return y_axis.to_px(v, plot.top + plot.height, plot.top); };

        svg += fmt::format(R"(<g class="panel" id="scenario-{}">)", scenario);
        svg += "\n";
        svg += fmt::format(R"(<text x="{}" y="{}" text-anchor="middle" font-size="14">Scenario {}</text>)",
                           num(plot.left + plot.width / 2), num(panel.top + 24.0), scenario);
        svg += "\n";
        svg += fmt::format(R"(<rect x="{}" y="{}" width="{}" height="{}" fill="none" stroke="#444"/>)",
                           num(plot.left), num(plot.top), num(plot.width), num(plot.height));
        svg += "\n";

        const double y_step = nice_step(y_axis.hi - y_axis.lo, 6);
        for (double t = std::ceil(y_axis.lo / y_step) * y_step; t <= y_axis.hi; t += y_step) {
            svg += fmt::format(
                R"(<line x1="{0}" y1="{2}" x2="{1}" y2="{2}" stroke="#ddd"/><text x="{3}" y="{4}" text-anchor="end">{5}</text>)",
                num(plot.left), num(plot.left + plot.width), num(py(t)), num(plot.left - 6),
                num(py(t) + 4), fmt::format("{:.3g}", t));
            svg += "\n";
        }
        for (double d : dropouts) {
            svg += fmt::format(R"(<text x="{}" y="{}" text-anchor="middle">{}</text>)", num(px(d)),
                               num(plot.top + plot.height + 18), fmt::format("{:.3g}", d));
            svg += "\n";
        }
        svg += fmt::format(R"(<text x="{}" y="{}" text-anchor="middle">Mortality/dropout rate</text>)",
                           num(plot.left + plot.width / 2), num(plot.top + plot.height + 38));
        svg += "\n";
        svg += fmt::format(
            R"svg(<text x="{0}" y="{1}" text-anchor="middle" transform="rotate(-90 {0} {1})">Estimate</text>)svg",
            num(panel.left + 22), num(plot.top + plot.height / 2));
        svg += "\n";
        svg += fmt::format(
            R"(<line class="reference" data-y="{0}" x1="{1}" y1="{3}" x2="{2}" y2="{3}" stroke="#777" stroke-dasharray="6 4"/>)",
            data(options.reference_rr), num(plot.left), num(plot.left + plot.width),
            num(py(options.reference_rr)));
        svg += "\n";

        for (Estimator e : kAllEstimators) {
            const SeriesStyle st = style_for(e);
            svg += fmt::format(R"(<g class="series" data-estimator="{}">)", estimator_name(e));
            svg += "\n";
            for (const auto& r : rows) {
                if (r.scenario_id != scenario || r.estimator != e || !r.mean) continue;
                const double x = r.dropout_target + st.shift;
                const double cx = px(x);
                svg += fmt::format(R"(<g class="point" data-dropout="{}" data-x="{}" data-y="{}">)",
                                   data(r.dropout_target), data(x), data(*r.mean));
                if (r.p2_5 && r.p97_5) {
                    const double lo = py(*r.p2_5);
                    const double hi = py(*r.p97_5);
                    svg += fmt::format(
                        R"(<line x1="{0}" y1="{1}" x2="{0}" y2="{2}" stroke="{5}"/><line x1="{3}" y1="{1}" x2="{4}" y2="{1}" stroke="{5}"/><line x1="{3}" y1="{2}" x2="{4}" y2="{2}" stroke="{5}"/>)",
                        num(cx), num(lo), num(hi), num(cx - 4), num(cx + 4), st.colour);
                }
                svg += marker(e, cx, py(*r.mean), st.colour);
                svg += "</g>\n";
            }
            svg += "</g>\n";
        }
        svg += "</g>\n";
    }

    // Legend.
    double lx = 360.0;
    const double ly = kFigureHeight - 18.0;
    for (Estimator e : {Estimator::perr_prev, Estimator::perr_comp, Estimator::rr}) {
        const SeriesStyle st = style_for(e);
        svg += fmt::format(R"(<g class="legend">{}<text x="{}" y="{}">{}</text></g>)",
                           marker(e, lx, ly - 4, st.colour), num(lx + 12), num(ly), st.label);
        svg += "\n";
        lx += 150.0;
    }
    svg += fmt::format(
        R"(<g class="legend"><line x1="{0}" y1="{2}" x2="{1}" y2="{2}" stroke="#777" stroke-dasharray="6 4"/><text x="{3}" y="{4}">true RR = {5}</text></g>)",
        num(lx - 8), num(lx + 20), num(ly - 4), num(lx + 26), num(ly),
        fmt::format("{:.6g}", options.reference_rr));
    svg += "\n</svg>\n";
    return svg;
}

void emit_figure(std::span<const SummaryRow> rows, const std::filesystem::path& path,
                 const FigureOptions& options) {
    const std::string svg = render_figure(rows, options);
    std::ofstream out(path, std::ios::binary);
    if (!out) throw IoError("cannot write figure " + path.string());
    out << svg;
    if (!out) throw IoError("failed writing figure " + path.string());
}

}  // namespace perr
