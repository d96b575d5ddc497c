#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "whw/closed_form.hpp"
#include "whw/generator.hpp"
#include "whw/simulate.hpp"

namespace whw {

// ||R(is, A_h)|| in the energy norm: reciprocal smallest singular value of
// L^T (is I - A_h) L^{-T} with gram = L L^T, via inverse iteration on the
// normal equations (two banded solves per sweep). Relative accuracy ~1e-4.
double resolvent_norm(double s, const DiscreteGenerator& gen, double tol = 1e-4,
                      int max_iters = 800, std::uint64_t seed = 0x5eed);

// Shift s to the nearest discrete eigenvalue's imaginary part (inverse power
// iteration on (is I - A_h)^{-1}); the resolvent peaks there. Returns the
// eigenvalue estimate.
Complex nearest_discrete_eigenvalue(double s, const DiscreteGenerator& gen,
                                    int iters = 60, std::uint64_t seed = 0x5eed);

struct ScanRow {
    double s = 0.0;               // shift actually measured (peak-tracked)
    double s_target = 0.0;        // requested shift
    double resolvent_norm = 0.0;
    int mesh_n = 0;
    bool converged = false;       // peak value moved < 2% under mesh doubling
    std::string error;            // per-row failure, scan continues
};

struct ScanPolicy {
    double mesh_factor = 3.3;     // n_per_unit >= max(64, mesh_factor * s)
    int min_mesh = 64;
    bool track_peaks = true;      // align each row with the local resonance
    double convergence_rtol = 0.02;
    int jobs = 1;
};

// One row per target shift: chooses the mesh from s, optionally snaps to the
// local resonance peak, and doubles the mesh once to set the converged flag.
std::vector<ScanRow> scan_resolvent(const std::vector<double>& s_targets, SystemKind system,
                                    const ScanPolicy& policy = {});

// log-spaced targets (criterion sweeps); for track_peaks the exact measured s
// snaps to the nearest resonance of the discretized generator
std::vector<double> log_spaced(double lo, double hi, int points);

struct ExponentFit {
    double exponent = 0.0;
    double intercept = 0.0;       // log-log intercept
    double ci_halfwidth = 0.0;    // 95% on the exponent
    double window_min = 0.0, window_max = 0.0;
    int points = 0;
    double r_squared = 0.0;
    double residual_stddev = 0.0;
};

// OLS on (log x, log y). Requires >= 12 points inside the window.
ExponentFit fit_power(const std::vector<double>& xs, const std::vector<double>& ys,
                      double window_min, double window_max);

// Decay-exponent fit on an energy trace for t >= t_start: resamples the trace
// at log-spaced times (power fits weight decades equally), drops the
// underflow tail (E < 1e-30), and returns the fitted exponent of E ~ t^-p
// (positive p for decay).
ExponentFit decay_exponent(const EnergyTrace& trace, double t_start, int fit_points = 48);

// reference rates for plots/comparisons
struct RateFunction {
    std::string tag;
    std::function<double(double)> value;
    static RateFunction power(double p);         // t^p
    static RateFunction power_log(double p);     // t^p log t
};

struct LemmaCheck {
    std::string name;
    bool passed;
    double margin; // worst-case margin in the check's own units
    std::string detail;
};

struct LemmaSuiteReport {
    std::vector<LemmaCheck> checks;
    bool all_passed() const;
};

struct LemmaSuiteOptions {
    std::uint64_t seed = 20201;
    bool corrupt_c34 = false; // literal Appendix c34, for the mutation test
};

// Lemma 3.3 bound sweep, Lemma 3.2 uniformity sweep, determinant
// form-equality sweep, adjugate identity sweep, imaginary-axis clearance.
LemmaSuiteReport lemma_suite(const LemmaSuiteOptions& opt = {});

// Discretized right-hand side: components sampled at their nodes, interface
// entries carrying the mean of the two merged components.
Eigen::VectorXcd sample_data(const DataQuintuple& y, const DiscreteGenerator& gen);

// x_h = (is I - A_h)^{-1} y_h
Eigen::VectorXcd discrete_resolvent_solve(double s, const DiscreteGenerator& gen,
                                          const Eigen::VectorXcd& rhs);

// G-norm of the difference between a discrete state and the closed-form
// solution sampled on the same grid, relative to the closed form's G-norm.
double grid_relative_error(const Eigen::VectorXcd& xh, const GridClosedForm& exact,
                           const DiscreteGenerator& gen);

Eigen::VectorXcd pack_closed_form(const GridClosedForm& cf, const DiscreteGenerator& gen);

} // namespace whw
