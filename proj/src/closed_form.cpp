#include "whw/closed_form.hpp"

#include <cmath>
#include <stdexcept>

#include <Eigen/LU>

#include "whw/coupling.hpp"
#include "whw/errors.hpp"

namespace whw {

namespace {

Complex zero_fn_guard(const ScalarFn& fn, double x) {
    return fn ? fn(x) : Complex(0.0);
}

// S = int_a^xi sinh(rate (xi - r)) phi dr and C = int_a^xi cosh(...) phi dr
struct SinhCoshPair {
    Complex s, c;
};

SinhCoshPair kernel_integrals(Complex rate, const std::function<Complex(double)>& phi, double a,
                              double xi, const QuadratureRule& rule) {
    SinhCoshPair out{Complex(0.0), Complex(0.0)};
    if (xi <= a) return out;
    const auto& gl = GaussLegendre::order(rule.nodes_per_panel);
    const int np = std::max(1, static_cast<int>(std::ceil((xi - a) * rule.panels)));
    const double h = (xi - a) / np;
    for (int p = 0; p < np; ++p) {
        const double mid = a + (p + 0.5) * h;
        for (std::size_t i = 0; i < gl.nodes.size(); ++i) {
            const double r = mid + 0.5 * h * gl.nodes[i];
            const Complex arg = rate * (xi - r);
            const Complex v = 0.5 * h * gl.weights[i] * phi(r);
            out.s += std::sinh(arg) * v;
            out.c += std::cosh(arg) * v;
        }
    }
    return out;
}

} // namespace

KernelValue quad_u(Frequency lambda, const ScalarFn& f, const ScalarFn& g, double xi,
                   const QuadratureRule& rule) {
    if (lambda == Complex(0.0)) throw std::domain_error("quad_u: lambda must be nonzero");
    if (xi < 0.0 || xi > 1.0) throw std::domain_error("quad_u: xi outside [0,1]");
    rule.require(std::abs(lambda));
    auto phi = [&](double r) { return lambda * zero_fn_guard(f, r) + zero_fn_guard(g, r); };
    const auto sc = kernel_integrals(lambda, phi, 0.0, xi, rule);
    return {sc.s / lambda, sc.c};
}

KernelValue quad_w(Frequency lambda, const ScalarFn& h, double xi, const QuadratureRule& rule) {
    if (lambda == Complex(0.0)) throw std::domain_error("quad_w: lambda must be nonzero");
    if (xi < 1.0 || xi > 2.0) throw std::domain_error("quad_w: xi outside [1,2]");
    const Complex root = sqrt_branch(lambda);
    rule.require(std::abs(root));
    auto phi = [&](double r) { return zero_fn_guard(h, r); };
    const auto sc = kernel_integrals(root, phi, 1.0, xi, rule);
    return {sc.s / root, sc.c};
}

KernelValue quad_ut(Frequency lambda, const ScalarFn& ft, const ScalarFn& gt, double xi,
                    const QuadratureRule& rule) {
    if (lambda == Complex(0.0)) throw std::domain_error("quad_ut: lambda must be nonzero");
    if (xi < 2.0 || xi > 3.0) throw std::domain_error("quad_ut: xi outside [2,3]");
    rule.require(std::abs(lambda));
    // mirror change of variables q = 3 - r reduces to the quad_u kernel on [0, 3 - xi]
    auto phi = [&](double q) {
        return lambda * zero_fn_guard(ft, 3.0 - q) + zero_fn_guard(gt, 3.0 - q);
    };
    const auto sc = kernel_integrals(lambda, phi, 0.0, 3.0 - xi, rule);
    return {sc.s / lambda, -sc.c};
}

Eigen::Vector4cd rhs_vector(Frequency lambda, const DataQuintuple& y,
                            const QuadratureRule& wave_rule, const QuadratureRule& heat_rule) {
    if (lambda == Complex(0.0)) throw std::domain_error("rhs_vector: lambda must be nonzero");
    const KernelValue U1 = quad_u(lambda, y.f, y.g, 1.0, wave_rule);
    const KernelValue W2 = quad_w(lambda, y.h, 2.0, heat_rule);
    const KernelValue Ut2 = quad_ut(lambda, y.ft, y.gt, 2.0, wave_rule);
    Eigen::Vector4cd b;
    b(0) = lambda * U1.value + zero_fn_guard(y.f, 1.0);
    b(1) = U1.derivative;
    b(2) = lambda * Ut2.value + zero_fn_guard(y.ft, 2.0) - W2.value;
    b(3) = -Ut2.derivative + W2.derivative;
    return b;
}

ClosedFormState solve_resolvent(Frequency lambda, const DataQuintuple& y, CoefficientPath path,
                                double singular_threshold) {
    if (lambda == Complex(0.0)) throw std::domain_error("solve_resolvent: lambda must be nonzero");
    const Eigen::Matrix4cd M = build_m(lambda);
    if (equilibrated_smin_ratio(M) < singular_threshold)
        throw SingularCoupling("solve_resolvent: coupling matrix nearly singular (lambda close to an eigenvalue)");

    ClosedFormState st;
    st.lambda = lambda;
    st.data = y;
    st.wave_rule = QuadratureRule::for_wave(lambda);
    st.heat_rule = QuadratureRule::for_heat(lambda);
    const Eigen::Vector4cd b = rhs_vector(lambda, y, st.wave_rule, st.heat_rule);

    Eigen::Vector4cd coeff;
    if (path == CoefficientPath::lu) {
        const double scale = M.cwiseAbs().maxCoeff();
        coeff = (M / scale).partialPivLu().solve(b / scale);
    } else {
        const Eigen::Matrix4cd C = cofactors(lambda, CofactorSource::appendix);
        const Complex det = det_m(lambda, DetForm::raw).value;
        coeff = (C.transpose() * b) / det;
    }
    st.a = coeff(0);
    st.b = coeff(1);
    st.c = coeff(2);
    st.atilde = coeff(3);
    return st;
}

StateSample evaluate_state(const ClosedFormState& x, double xi) {
    if (xi < 0.0 || xi > 3.0) throw std::domain_error("evaluate_state: xi outside [0,3]");
    const Complex l = x.lambda;
    const Complex root = sqrt_branch(l);
    StateSample s{};
    if (xi <= 1.0) {
        const KernelValue U = quad_u(l, x.data.f, x.data.g, xi, x.wave_rule);
        s.u = x.a * std::sinh(l * xi) - U.value;
        s.v = l * s.u - zero_fn_guard(x.data.f, xi);
    }
    if (xi >= 1.0 && xi <= 2.0) {
        const KernelValue W = quad_w(l, x.data.h, xi, x.heat_rule);
        s.w = x.b * std::cosh(root * (xi - 1.0)) + x.c * std::sinh(root * (xi - 1.0)) - W.value;
    }
    if (xi >= 2.0) {
        const KernelValue Ut = quad_ut(l, x.data.ft, x.data.gt, xi, x.wave_rule);
        s.ut = x.atilde * std::sinh(l * (3.0 - xi)) - Ut.value;
        s.vt = l * s.ut - zero_fn_guard(x.data.ft, xi);
    }
    return s;
}

GridClosedForm evaluate_on_grid(const ClosedFormState& x, int n_per_unit) {
    const int n = n_per_unit;
    const double d = 1.0 / n;
    const Complex l = x.lambda;
    const Complex root = sqrt_branch(l);
    GridClosedForm out;
    out.n_per_unit = n;
    out.u.resize(n + 1);
    out.v.resize(n + 1);
    out.w.resize(n + 1);
    out.ut.resize(n + 1);
    out.vt.resize(n + 1);

    // cumulative sinh/cosh integrals via the addition formulas: one local
    // panel per grid cell, then the pair is advanced by (cosh, sinh)(rate d)
    auto cumulative = [&](Complex rate, const std::function<Complex(double)>& phi, double a,
                          const QuadratureRule& rule, std::vector<SinhCoshPair>& acc) {
        acc.assign(n + 1, {Complex(0.0), Complex(0.0)});
        const auto& gl = GaussLegendre::order(rule.nodes_per_panel);
        const Complex ch = std::cosh(rate * d), sh = std::sinh(rate * d);
        for (int j = 0; j < n; ++j) {
            const double x1 = a + (j + 1) * d;
            SinhCoshPair local{Complex(0.0), Complex(0.0)};
            for (std::size_t i = 0; i < gl.nodes.size(); ++i) {
                const double r = x1 - 0.5 * d + 0.5 * d * gl.nodes[i];
                const Complex arg = rate * (x1 - r);
                const Complex v = 0.5 * d * gl.weights[i] * phi(r);
                local.s += std::sinh(arg) * v;
                local.c += std::cosh(arg) * v;
            }
            acc[j + 1].s = ch * acc[j].s + sh * acc[j].c + local.s;
            acc[j + 1].c = sh * acc[j].s + ch * acc[j].c + local.c;
        }
    };

    std::vector<SinhCoshPair> accU, accW, accUt;
    auto phi_u = [&](double r) { return l * zero_fn_guard(x.data.f, r) + zero_fn_guard(x.data.g, r); };
    auto phi_w = [&](double r) { return zero_fn_guard(x.data.h, r); };
    auto phi_ut = [&](double q) {
        return l * zero_fn_guard(x.data.ft, 3.0 - q) + zero_fn_guard(x.data.gt, 3.0 - q);
    };
    cumulative(l, phi_u, 0.0, x.wave_rule, accU);
    cumulative(root, phi_w, 1.0, x.heat_rule, accW);
    cumulative(l, phi_ut, 0.0, x.wave_rule, accUt); // in the mirrored variable tau = 3 - xi

    for (int j = 0; j <= n; ++j) {
        const double xi1 = j * d;
        out.u[j] = x.a * std::sinh(l * xi1) - accU[j].s / l;
        out.v[j] = l * out.u[j] - zero_fn_guard(x.data.f, xi1);
        const double xi2 = 1.0 + j * d;
        out.w[j] = x.b * std::cosh(root * (xi2 - 1.0)) + x.c * std::sinh(root * (xi2 - 1.0)) -
                   accW[j].s / root;
        const double xi3 = 2.0 + j * d;
        out.ut[j] = x.atilde * std::sinh(l * (3.0 - xi3)) - accUt[n - j].s / l;
        out.vt[j] = l * out.ut[j] - zero_fn_guard(x.data.ft, xi3);
    }
    return out;
}

ResidualReport residual_check(Frequency lambda, const DataQuintuple& y, const ClosedFormState& x,
                              int n_probe, double step) {
    const Complex l = lambda;
    ResidualReport rep{};

    auto second_derivative = [&](auto component, double xi) {
        // fourth-order centered stencil
        const double h = step;
        const Complex m2 = component(xi - 2 * h), m1 = component(xi - 1 * h);
        const Complex c0 = component(xi), p1 = component(xi + 1 * h), p2 = component(xi + 2 * h);
        return (-m2 + 16.0 * m1 - 30.0 * c0 + 16.0 * p1 - p2) / (12.0 * h * h);
    };
    auto u_at = [&](double xi) { return evaluate_state(x, xi).u; };
    auto w_at = [&](double xi) { return evaluate_state(x, xi).w; };
    auto ut_at = [&](double xi) { return evaluate_state(x, xi).ut; };

    double scale = 0.0;
    for (int i = 0; i <= 8; ++i) {
        const StateSample s = evaluate_state(x, 3.0 * i / 8.0);
        scale = std::max({scale, std::abs(s.u), std::abs(s.w), std::abs(s.ut)});
    }
    rep.state_scale = scale;

    const double lo = 2.5 * step;
    for (int i = 0; i < n_probe; ++i) {
        const double t = (n_probe == 1) ? 0.5 : static_cast<double>(i) / (n_probe - 1);
        const double xi1 = lo + (1.0 - 2.0 * lo) * t;
        const Complex ru = second_derivative(u_at, xi1) -
                           (l * l * u_at(xi1) - l * zero_fn_guard(y.f, xi1) - zero_fn_guard(y.g, xi1));
        rep.ode_u = std::max(rep.ode_u, std::abs(ru));
        const double xi2 = 1.0 + lo + (1.0 - 2.0 * lo) * t;
        const Complex rw = second_derivative(w_at, xi2) -
                           (l * w_at(xi2) - zero_fn_guard(y.h, xi2));
        rep.ode_w = std::max(rep.ode_w, std::abs(rw));
        const double xi3 = 2.0 + lo + (1.0 - 2.0 * lo) * t;
        const Complex rt = second_derivative(ut_at, xi3) -
                           (l * l * ut_at(xi3) - l * zero_fn_guard(y.ft, xi3) - zero_fn_guard(y.gt, xi3));
        rep.ode_ut = std::max(rep.ode_ut, std::abs(rt));
    }

    const StateSample s0 = evaluate_state(x, 0.0);
    const StateSample s3 = evaluate_state(x, 3.0);
    rep.bc_u0 = std::abs(s0.u);
    rep.bc_v0 = std::abs(s0.v);
    rep.bc_ut3 = std::abs(s3.ut);
    rep.bc_vt3 = std::abs(s3.vt);

    const StateSample s1 = evaluate_state(x, 1.0);
    const StateSample s2 = evaluate_state(x, 2.0);
    rep.coup_v1w1 = std::abs(s1.v - s1.w);
    rep.coup_vt2w2 = std::abs(s2.vt - s2.w);
    // derivative couplings via one-sided fourth-order differences
    auto deriv_left = [&](auto f, double xi) {
        const double h = step;
        return (25.0 * f(xi) - 48.0 * f(xi - h) + 36.0 * f(xi - 2 * h) - 16.0 * f(xi - 3 * h) +
                3.0 * f(xi - 4 * h)) /
               (12.0 * h);
    };
    auto deriv_right = [&](auto f, double xi) {
        const double h = step;
        return (-25.0 * f(xi) + 48.0 * f(xi + h) - 36.0 * f(xi + 2 * h) + 16.0 * f(xi + 3 * h) -
                3.0 * f(xi + 4 * h)) /
               (12.0 * h);
    };
    rep.coup_u1w1 = std::abs(deriv_left(u_at, 1.0) - deriv_right(w_at, 1.0));
    rep.coup_ut2w2 = std::abs(deriv_right(ut_at, 2.0) - deriv_left(w_at, 2.0));

    // truncation envelope O(step^4 |lambda|^6 scale) plus roundoff O(eps scale / step^2)
    const double al = std::max(1.0, std::abs(l));
    rep.envelope = 10.0 * std::pow(step, 4) * std::pow(al, 6) * std::max(scale, 1e-300) +
                   100.0 * 2.2e-16 * std::max(scale, 1.0) / (step * step);
    return rep;
}

} // namespace whw
