#include "whw/quadrature.hpp"

#include <cmath>
#include <map>
#include <mutex>
#include <numbers>

#include "whw/errors.hpp"

namespace whw {

namespace {

// Newton iteration on the Legendre polynomial roots (symmetric pairs).
GaussLegendre compute_gl(int k) {
    GaussLegendre rule;
    rule.nodes.resize(k);
    rule.weights.resize(k);
    const int half = (k + 1) / 2;
    for (int i = 0; i < half; ++i) {
        double x = std::cos(std::numbers::pi * (i + 0.75) / (k + 0.5));
        double pp = 0.0;
        for (int it = 0; it < 100; ++it) {
            double p0 = 1.0, p1 = 0.0;
            for (int j = 0; j < k; ++j) {
                const double p2 = p1;
                p1 = p0;
                p0 = ((2.0 * j + 1.0) * x * p1 - j * p2) / (j + 1.0);
            }
            pp = k * (x * p0 - p1) / (x * x - 1.0);
            const double dx = p0 / pp;
            x -= dx;
            if (std::abs(dx) < 1e-15) break;
        }
        rule.nodes[i] = -x;
        rule.nodes[k - 1 - i] = x;
        const double w = 2.0 / ((1.0 - x * x) * pp * pp);
        rule.weights[i] = w;
        rule.weights[k - 1 - i] = w;
    }
    return rule;
}

} // namespace

const GaussLegendre& GaussLegendre::order(int k) {
    static std::map<int, GaussLegendre> cache;
    static std::mutex mtx;
    std::lock_guard<std::mutex> lock(mtx);
    auto it = cache.find(k);
    if (it == cache.end()) it = cache.emplace(k, compute_gl(k)).first;
    return it->second;
}

int QuadratureRule::required_panels(double rate) {
    return static_cast<int>(std::ceil(10.0 * std::max(1.0, rate) / (2.0 * std::numbers::pi)));
}

QuadratureRule QuadratureRule::for_wave(Frequency lambda) {
    return {required_panels(std::abs(lambda)), 8};
}

QuadratureRule QuadratureRule::for_heat(Frequency lambda) {
    return {required_panels(std::abs(sqrt_branch(lambda))), 8};
}

void QuadratureRule::require(double rate) const {
    const int need = required_panels(rate);
    if (panels < need) throw RuleTooCoarse(need, panels);
}

Complex integrate(const std::function<Complex(double)>& fn, double a, double b,
                  const QuadratureRule& rule) {
    if (b <= a) return Complex(0.0);
    const auto& gl = GaussLegendre::order(rule.nodes_per_panel);
    const int np = std::max(1, static_cast<int>(std::ceil((b - a) * rule.panels)));
    const double h = (b - a) / np;
    Complex total(0.0);
    for (int p = 0; p < np; ++p) {
        const double x0 = a + p * h;
        const double mid = x0 + 0.5 * h;
        Complex panel(0.0);
        for (std::size_t i = 0; i < gl.nodes.size(); ++i)
            panel += gl.weights[i] * fn(mid + 0.5 * h * gl.nodes[i]);
        total += 0.5 * h * panel;
    }
    return total;
}

} // namespace whw
