#pragma once

#include <complex>

namespace whw {

using Complex = std::complex<double>;

// Spectral parameter lambda. On the imaginary axis lambda = i s.
using Frequency = Complex;

// Principal square root with the branch cut along the negative real axis and
// the convention theta in (-pi, pi]: for lambda = r e^{i theta},
// sqrt(lambda) = r^{1/2} e^{i theta/2}. The result always has Re >= 0, and the
// negative real axis maps to the positive imaginary axis (theta = +pi).
Complex sqrt_branch(Complex lambda);

// T_+ and T_- of the determinant factorization,
//   T_pm(lambda) = (cosh(lambda) +- sqrt(lambda) sinh(lambda)) / 2.
// Both are bounded below by 1/4 in modulus on the imaginary axis for
// |s| >= (1/sqrt(2) + 1)^2.
struct HalfPlaneFactors {
    Complex t_plus;
    Complex t_minus;
};

HalfPlaneFactors t_factors(Frequency lambda);

} // namespace whw
