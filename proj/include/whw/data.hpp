#pragma once

#include <functional>
#include <vector>

#include "whw/frequency.hpp"

namespace whw {

using ScalarFn = std::function<Complex(double)>;

// Resolvent data y = (f, g, h, ft, gt):
//   f on [0,1] (H^1, f(0) = 0), g on [0,1],
//   h on [1,2],
//   ft on [2,3] (H^1, ft(3) = 0), gt on [2,3].
// Derivative evaluators are optional and unused by the solver itself.
struct DataQuintuple {
    ScalarFn f, g, h, ft, gt;
    ScalarFn df, dft; // optional

    static DataQuintuple zero();

    // checks f(0) = 0 and ft(3) = 0 against |.| <= tol * scale
    void validate(double tol = 1e-10) const;
};

// Natural cubic spline through (xs, vals); adapts sampled-grid data to the
// callable interface.
ScalarFn cubic_interpolant(std::vector<double> xs, std::vector<Complex> vals);

} // namespace whw
