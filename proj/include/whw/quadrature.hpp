#pragma once

#include <functional>
#include <vector>

#include "whw/frequency.hpp"

namespace whw {

// Gauss-Legendre nodes/weights on [-1, 1], cached per order.
struct GaussLegendre {
    std::vector<double> nodes;
    std::vector<double> weights;
    static const GaussLegendre& order(int k);
};

// Composite Gauss-Legendre rule on a unit-length interval. Panel counts scale
// with the oscillation rate of the kernel: |lambda| on the wave intervals,
// |sqrt(lambda)| on the heat interval (>= 10 panels per wavelength).
struct QuadratureRule {
    int panels = 16;
    int nodes_per_panel = 8;

    static int required_panels(double rate);
    static QuadratureRule for_wave(Frequency lambda);
    static QuadratureRule for_heat(Frequency lambda);

    // Throws RuleTooCoarse when this rule cannot resolve the given rate.
    void require(double rate) const;
};

// integral of fn over [a, b] with ceil((b-a)*panels) uniform panels
Complex integrate(const std::function<Complex(double)>& fn, double a, double b,
                  const QuadratureRule& rule);

} // namespace whw
