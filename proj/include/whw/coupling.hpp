#pragma once

#include <Eigen/Dense>

#include "whw/frequency.hpp"

namespace whw {

// The 4x4 coupling matrix tying the wave solutions on [0,1], [2,3] to the
// heat solution on [1,2] through the interface conditions. Row order:
//   v(1) = w(1),  u'(1) = w'(1),  vt(2) = w(2),  ut'(2) = w'(2).
Eigen::Matrix4cd build_m(Frequency lambda);

enum class DetForm {
    raw,      // -lambda^2 [2 sqrt(l) cosh(sqrt(l)) cosh(l) sinh(l) + sinh(sqrt(l)) (l sinh^2(l) + cosh^2(l))]
    factored, // 2 lambda^2 [-e^{sqrt(l)} T+^2 + e^{-sqrt(l)} T-^2]
    scaled,   // -T+^2 + e^{-2 sqrt(l)} T-^2, with the factor 2 lambda^2 e^{sqrt(l)} removed
};

struct DetResult {
    Complex value;
    // Re sqrt(lambda) removed from the scaled form; 0 for raw/factored. The
    // full removed factor is 2 lambda^2 e^{sqrt(lambda)}.
    double scale_exponent;
};

// Determinant of build_m(lambda) in the requested form. The raw and factored
// forms agree identically; the scaled form satisfies
//   det = 2 lambda^2 e^{sqrt(lambda)} * scaled.
// Throws OverflowBudget when a non-scaled form would exceed the double
// exponent range, and std::domain_error for form == scaled at lambda == 0.
DetResult det_m(Frequency lambda, DetForm form);

// Reconstructs det from the scaled form: 2 lambda^2 e^{sqrt(lambda)} * value.
Complex det_rescale(Frequency lambda, const DetResult& scaled);

enum class CofactorSource {
    appendix, // closed forms through e^{+-sqrt(l)} T_pm (c34 corrected)
    numeric,  // signed 3x3 minors of build_m
};

// Cofactor matrix C with C(i,j) = (-1)^{i+j} minor_{ij}, so that
// transpose(C) * M = det * I. With literal_c34 = true the appendix source
// evaluates the Appendix's c34 exactly as printed (as a product, the missing
// binary operator read as multiplication); this exists only so the adjugate
// check can pinpoint the typo.
Eigen::Matrix4cd cofactors(Frequency lambda, CofactorSource source, bool literal_c34 = false);

// sigma_min / sigma_max of the row-equilibrated coupling matrix. Tiny values
// signal proximity to an eigenvalue. Meaningful for |lambda| up to ~5e2; far
// out on the imaginary axis the parameterization itself degenerates.
double equilibrated_smin_ratio(const Eigen::Matrix4cd& m);

} // namespace whw
