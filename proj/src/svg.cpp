#include "whw/svg.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <limits>
#include <stdexcept>

#include "whw/csvio.hpp"

namespace whw {

namespace {

constexpr double kWidth = 720.0, kHeight = 480.0;
constexpr double kLeft = 72.0, kRight = 24.0, kTop = 40.0, kBottom = 56.0;

std::string fmt(double v) {
    // fixed short representation for coordinates; deterministic
    char buf[32];
    std::snprintf(buf, sizeof(buf), "%.2f", v);
    return buf;
}

std::string fmt_tick(double v) {
    char buf[48];
    std::snprintf(buf, sizeof(buf), "%.6g", v);
    return buf;
}

} // namespace

SvgPlot::SvgPlot(std::string title, std::string xlabel, std::string ylabel, bool logx, bool logy)
    : title_(std::move(title)), xlabel_(std::move(xlabel)), ylabel_(std::move(ylabel)),
      logx_(logx), logy_(logy) {}

void SvgPlot::add_series(const std::string& name, const std::vector<double>& xs,
                         const std::vector<double>& ys, const std::string& color,
                         bool markers_only) {
    if (xs.size() != ys.size()) throw std::invalid_argument("SvgPlot: series size mismatch");
    series_.push_back({name, xs, ys, color, markers_only});
}

void SvgPlot::add_power_guide(const std::string& name, double slope, double c,
                              const std::string& color) {
    guides_.push_back({name, slope, c, color});
}

void SvgPlot::add_vline(double x, const std::string& color) { vlines_.emplace_back(x, color); }

std::string SvgPlot::render() const {
    double xmin = std::numeric_limits<double>::max(), xmax = -xmin;
    double ymin = xmin, ymax = -xmin;
    for (const auto& s : series_)
        for (std::size_t i = 0; i < s.xs.size(); ++i) {
            const double x = s.xs[i], y = s.ys[i];
            if (logx_ && !(x > 0)) continue;
            if (logy_ && !(y > 0)) continue;
            xmin = std::min(xmin, x);
            xmax = std::max(xmax, x);
            ymin = std::min(ymin, y);
            ymax = std::max(ymax, y);
        }
    if (!(xmin < xmax)) { xmin = logx_ ? 0.1 : -1.0; xmax = logx_ ? 10.0 : 1.0; }
    if (!(ymin < ymax)) { ymin = logy_ ? 0.1 : -1.0; ymax = logy_ ? 10.0 : 1.0; }

    auto tx = [&](double v) {
        const double a = logx_ ? std::log10(v) : v;
        const double lo = logx_ ? std::log10(xmin) : xmin;
        const double hi = logx_ ? std::log10(xmax) : xmax;
        return kLeft + (a - lo) / (hi - lo) * (kWidth - kLeft - kRight);
    };
    auto ty = [&](double v) {
        const double a = logy_ ? std::log10(v) : v;
        const double lo = logy_ ? std::log10(ymin) : ymin;
        const double hi = logy_ ? std::log10(ymax) : ymax;
        return kHeight - kBottom - (a - lo) / (hi - lo) * (kHeight - kTop - kBottom);
    };

    std::string svg;
    svg += "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" + fmt(kWidth) + "\" height=\"" +
           fmt(kHeight) + "\" viewBox=\"0 0 " + fmt(kWidth) + " " + fmt(kHeight) + "\">\n";
    svg += "<rect width=\"100%\" height=\"100%\" fill=\"white\"/>\n";
    svg += "<text x=\"" + fmt(kWidth / 2) + "\" y=\"22\" text-anchor=\"middle\" "
           "font-family=\"monospace\" font-size=\"15\">" + title_ + "</text>\n";

    // frame
    svg += "<rect x=\"" + fmt(kLeft) + "\" y=\"" + fmt(kTop) + "\" width=\"" +
           fmt(kWidth - kLeft - kRight) + "\" height=\"" + fmt(kHeight - kTop - kBottom) +
           "\" fill=\"none\" stroke=\"black\"/>\n";

    // ticks: decades for log axes, 5 even ticks otherwise
    auto ticks = [&](double lo, double hi, bool log) {
        std::vector<double> t;
        if (log) {
            for (int e = static_cast<int>(std::floor(std::log10(lo)));
                 e <= static_cast<int>(std::ceil(std::log10(hi))); ++e) {
                const double v = std::pow(10.0, e);
                if (v >= lo * 0.999 && v <= hi * 1.001) t.push_back(v);
            }
            if (t.size() < 2) { t = {lo, hi}; }
        } else {
            for (int i = 0; i <= 4; ++i) t.push_back(lo + (hi - lo) * i / 4.0);
        }
        return t;
    };
    for (const double v : ticks(xmin, xmax, logx_)) {
        svg += "<line x1=\"" + fmt(tx(v)) + "\" y1=\"" + fmt(kHeight - kBottom) + "\" x2=\"" +
               fmt(tx(v)) + "\" y2=\"" + fmt(kHeight - kBottom + 5) + "\" stroke=\"black\"/>\n";
        svg += "<text x=\"" + fmt(tx(v)) + "\" y=\"" + fmt(kHeight - kBottom + 18) +
               "\" text-anchor=\"middle\" font-family=\"monospace\" font-size=\"11\">" +
               fmt_tick(v) + "</text>\n";
    }
    for (const double v : ticks(ymin, ymax, logy_)) {
        svg += "<line x1=\"" + fmt(kLeft - 5) + "\" y1=\"" + fmt(ty(v)) + "\" x2=\"" + fmt(kLeft) +
               "\" y2=\"" + fmt(ty(v)) + "\" stroke=\"black\"/>\n";
        svg += "<text x=\"" + fmt(kLeft - 8) + "\" y=\"" + fmt(ty(v) + 4) +
               "\" text-anchor=\"end\" font-family=\"monospace\" font-size=\"11\">" + fmt_tick(v) +
               "</text>\n";
    }
    svg += "<text x=\"" + fmt(kWidth / 2) + "\" y=\"" + fmt(kHeight - 16) +
           "\" text-anchor=\"middle\" font-family=\"monospace\" font-size=\"13\">" + xlabel_ +
           "</text>\n";
    svg += "<text x=\"18\" y=\"" + fmt(kHeight / 2) +
           "\" text-anchor=\"middle\" font-family=\"monospace\" font-size=\"13\" "
           "transform=\"rotate(-90 18 " + fmt(kHeight / 2) + ")\">" + ylabel_ + "</text>\n";

    for (const auto& [x, color] : vlines_) {
        if (logx_ && !(x > 0)) continue;
        svg += "<line x1=\"" + fmt(tx(x)) + "\" y1=\"" + fmt(kTop) + "\" x2=\"" + fmt(tx(x)) +
               "\" y2=\"" + fmt(kHeight - kBottom) + "\" stroke=\"" + color +
               "\" stroke-dasharray=\"2,3\"/>\n";
    }

    for (const auto& g : guides_) {
        const double x0 = xmin, x1 = xmax;
        const double y0 = g.c * std::pow(x0, g.slope), y1 = g.c * std::pow(x1, g.slope);
        svg += "<line x1=\"" + fmt(tx(x0)) + "\" y1=\"" + fmt(ty(std::clamp(y0, ymin, ymax))) +
               "\" x2=\"" + fmt(tx(x1)) + "\" y2=\"" + fmt(ty(std::clamp(y1, ymin, ymax))) +
               "\" stroke=\"" + g.color + "\" stroke-dasharray=\"6,4\"/>\n";
    }

    double legend_y = kTop + 14.0;
    for (const auto& s : series_) {
        if (s.markers_only) {
            for (std::size_t i = 0; i < s.xs.size(); ++i) {
                if ((logx_ && !(s.xs[i] > 0)) || (logy_ && !(s.ys[i] > 0))) continue;
                svg += "<circle cx=\"" + fmt(tx(s.xs[i])) + "\" cy=\"" + fmt(ty(s.ys[i])) +
                       "\" r=\"3\" fill=\"" + s.color + "\"/>\n";
            }
        } else {
            std::string pts;
            for (std::size_t i = 0; i < s.xs.size(); ++i) {
                if ((logx_ && !(s.xs[i] > 0)) || (logy_ && !(s.ys[i] > 0))) continue;
                pts += fmt(tx(s.xs[i])) + "," + fmt(ty(s.ys[i])) + " ";
            }
            svg += "<polyline points=\"" + pts + "\" fill=\"none\" stroke=\"" + s.color +
                   "\" stroke-width=\"1.5\"/>\n";
        }
        svg += "<text x=\"" + fmt(kLeft + 10) + "\" y=\"" + fmt(legend_y) +
               "\" font-family=\"monospace\" font-size=\"12\" fill=\"" + s.color + "\">" + s.name +
               "</text>\n";
        legend_y += 14.0;
    }
    for (const auto& g : guides_) {
        svg += "<text x=\"" + fmt(kLeft + 10) + "\" y=\"" + fmt(legend_y) +
               "\" font-family=\"monospace\" font-size=\"12\" fill=\"" + g.color + "\">" + g.name +
               "</text>\n";
        legend_y += 14.0;
    }

    svg += "</svg>\n";
    return svg;
}

void SvgPlot::save(const std::string& path) const {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw std::runtime_error("cannot write " + path);
    out << render();
}

} // namespace whw
