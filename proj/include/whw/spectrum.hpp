#pragma once

#include <string>
#include <vector>

#include "whw/frequency.hpp"

namespace whw {

// Rectangular search region in the lambda plane. Must keep the prescribed
// distance from the origin, where the winding function has its spurious zero.
// Searching Re > 0 is permitted only in audit mode (no zeros may be found).
struct SearchRegion {
    double re_min = -20.0;
    double re_max = -0.01;
    double im_min = -50.0;
    double im_max = 50.0;
    double exclusion_radius_at_origin = 1e-3;
    bool audit = false;

    void validate() const; // throws std::invalid_argument
    static SearchRegion defaults();
};

struct Eigenvalue {
    Complex lambda;
    double abs_det_residual; // |scaled det| at the root
    int newton_iters;
};

struct SpectrumReport {
    std::vector<Eigenvalue> eigenvalues; // sorted by (Re, Im)
    long boxes_scanned = 0;
    int winding_total = 0;
    std::vector<std::string> notes; // multiple-root clusters etc.
};

// Number of zeros of det M_lambda inside the region (argument principle on
// the entire function det^2 / (4 lambda^4), trapezoid quadrature of the
// numerically differenced log-derivative, adaptive doubling).
int count_zeros(const SearchRegion& region, int contour_points = 256);

// Quadtree bisection + Newton refinement of every zero in the region.
SpectrumReport find_eigenvalues(const SearchRegion& region, double tol = 1e-10);

// min over log-spaced samples of |scaled det(i s)|, s in [s_min, s_max]
// (both signs are covered by conjugate symmetry). Throws ClearanceViolation
// if the minimum falls below the floor.
double imaginary_axis_clearance(double s_min, double s_max, int samples, double floor = 1e-6);

} // namespace whw
