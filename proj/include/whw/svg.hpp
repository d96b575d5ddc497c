#pragma once

#include <string>
#include <vector>

namespace whw {

// Minimal deterministic SVG plotter: fixed layout, no external assets.
// Supports linear/log axes, polyline series, scatter markers, and straight
// guide lines (for reference slopes on log-log plots).
class SvgPlot {
public:
    SvgPlot(std::string title, std::string xlabel, std::string ylabel,
            bool logx = false, bool logy = false);

    void add_series(const std::string& name, const std::vector<double>& xs,
                    const std::vector<double>& ys, const std::string& color,
                    bool markers_only = false);
    // y = c * x^slope drawn across the x-range
    void add_power_guide(const std::string& name, double slope, double c,
                         const std::string& color);
    // vertical line at x
    void add_vline(double x, const std::string& color);

    std::string render() const;
    void save(const std::string& path) const;

private:
    struct Series {
        std::string name;
        std::vector<double> xs, ys;
        std::string color;
        bool markers_only;
    };
    struct Guide {
        std::string name;
        double slope, c;
        std::string color;
    };
    std::string title_, xlabel_, ylabel_;
    bool logx_, logy_;
    std::vector<Series> series_;
    std::vector<Guide> guides_;
    std::vector<std::pair<double, std::string>> vlines_;
};

} // namespace whw
