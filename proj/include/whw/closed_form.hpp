#pragma once

#include <Eigen/Dense>

#include "whw/data.hpp"
#include "whw/frequency.hpp"
#include "whw/quadrature.hpp"

namespace whw {

// value and xi-derivative of a particular integral
struct KernelValue {
    Complex value;
    Complex derivative;
};

// U(xi)  = (1/l) int_0^xi sinh(l (xi - r)) (l f + g) dr,   U' = int_0^xi cosh(...) (l f + g) dr
KernelValue quad_u(Frequency lambda, const ScalarFn& f, const ScalarFn& g, double xi,
                   const QuadratureRule& rule);

// W(xi)  = (1/sqrt(l)) int_1^xi sinh(sqrt(l) (xi - r)) h dr,  W' = int_1^xi cosh(...) h dr
KernelValue quad_w(Frequency lambda, const ScalarFn& h, double xi, const QuadratureRule& rule);

// Ut(xi) = (1/l) int_xi^3 sinh(l (r - xi)) (l ft + gt) dr,  Ut' = -int_xi^3 cosh(...) (l ft + gt) dr
KernelValue quad_ut(Frequency lambda, const ScalarFn& ft, const ScalarFn& gt, double xi,
                    const QuadratureRule& rule);

// Right-hand side of the 4x4 coupling system:
//   b = (l U(1) + f(1),  U'(1),  l Ut(2) + ft(2) - W(2),  -Ut'(2) + W'(2)).
Eigen::Vector4cd rhs_vector(Frequency lambda, const DataQuintuple& y,
                            const QuadratureRule& wave_rule, const QuadratureRule& heat_rule);

struct ClosedFormState {
    Frequency lambda;
    Complex a, b, c, atilde;
    DataQuintuple data;
    QuadratureRule wave_rule, heat_rule;
};

enum class CoefficientPath {
    lu,       // scaled LU on M / ||M||_inf (default)
    cofactor, // Cramer through the appendix cofactors; cross-validation only
};

// Closed-form resolvent solve (lambda - A)x = y. Throws SingularCoupling when
// lambda sits within numerical reach of an eigenvalue.
ClosedFormState solve_resolvent(Frequency lambda, const DataQuintuple& y,
                                CoefficientPath path = CoefficientPath::lu,
                                double singular_threshold = 1e-6);

// State sample (u, v, w, ut, vt) at xi in [0, 3], each component zero outside
// its native subinterval.
struct StateSample {
    Complex u, v, w, ut, vt;
};

StateSample evaluate_state(const ClosedFormState& x, double xi);

// All five components sampled on the three joined uniform grids with
// n_per_unit points per unit interval (incremental kernel evaluation; O(n)).
struct GridClosedForm {
    int n_per_unit;
    std::vector<Complex> u, v;   // nodes 0..n on [0,1]
    std::vector<Complex> w;      // nodes 0..n on [1,2]
    std::vector<Complex> ut, vt; // nodes 0..n on [2,3]
};

GridClosedForm evaluate_on_grid(const ClosedFormState& x, int n_per_unit);

// Max-norm residuals of the component ODEs (fourth-order finite differences
// of evaluate_state at n_probe interior points) plus boundary and coupling
// residuals; 'envelope' is the expected truncation level for the given step.
struct ResidualReport {
    double ode_u, ode_w, ode_ut;
    double bc_u0, bc_v0, bc_ut3, bc_vt3;
    double coup_v1w1, coup_u1w1, coup_vt2w2, coup_ut2w2;
    double envelope;
    double state_scale;
    double max_ode() const { return std::max({ode_u, ode_w, ode_ut}); }
    double max_bc() const { return std::max({bc_u0, bc_v0, bc_ut3, bc_vt3}); }
    double max_coupling() const {
        return std::max({coup_v1w1, coup_u1w1, coup_vt2w2, coup_ut2w2});
    }
};

ResidualReport residual_check(Frequency lambda, const DataQuintuple& y, const ClosedFormState& x,
                              int n_probe, double step = 1e-3);

} // namespace whw
