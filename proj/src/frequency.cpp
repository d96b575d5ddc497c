#include "whw/frequency.hpp"

#include <cmath>

namespace whw {

Complex sqrt_branch(Complex lambda) {
    // std::sqrt takes the same branch except on the negative real axis, where
    // a -0.0 imaginary part would select the lower edge (theta = -pi). Force
    // the upper edge: theta in (-pi, pi].
    if (lambda.imag() == 0.0) {
        if (lambda.real() < 0.0) return Complex(0.0, std::sqrt(-lambda.real()));
        return Complex(std::sqrt(lambda.real()), 0.0);
    }
    return std::sqrt(lambda);
}

HalfPlaneFactors t_factors(Frequency lambda) {
    const Complex root = sqrt_branch(lambda);
    const Complex ch = std::cosh(lambda);
    const Complex sh = std::sinh(lambda);
    return {0.5 * (ch + root * sh), 0.5 * (ch - root * sh)};
}

} // namespace whw
