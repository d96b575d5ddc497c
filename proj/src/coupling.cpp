#include "whw/coupling.hpp"

#include <cmath>
#include <stdexcept>

#include <Eigen/SVD>

#include "whw/errors.hpp"

namespace whw {

namespace {

// log of the largest exponential magnitude appearing in the hyperbolic forms
double exponent_load(Frequency lambda) {
    const Complex root = sqrt_branch(lambda);
    return 2.0 * std::abs(lambda.real()) + std::abs(root.real()) + 2.0 * std::log(std::abs(lambda) + 1.0);
}

constexpr double kExponentBudget = 690.0; // just under log(DBL_MAX)

} // namespace

Eigen::Matrix4cd build_m(Frequency lambda) {
    if (std::abs(lambda.real()) + std::abs(sqrt_branch(lambda).real()) > kExponentBudget)
        throw OverflowBudget("build_m: exponential entries exceed double range");
    const Complex m = sqrt_branch(lambda);
    const Complex sl = std::sinh(lambda), cl = std::cosh(lambda);
    const Complex sm = std::sinh(m), cm = std::cosh(m);
    Eigen::Matrix4cd M;
    M << lambda * sl, Complex(-1.0), Complex(0.0), Complex(0.0),
         lambda * cl, Complex(0.0), -m, Complex(0.0),
         Complex(0.0), -cm, -sm, lambda * sl,
         Complex(0.0), m * sm, m * cm, lambda * cl;
    return M;
}

DetResult det_m(Frequency lambda, DetForm form) {
    const Complex m = sqrt_branch(lambda);
    switch (form) {
    case DetForm::raw: {
        if (exponent_load(lambda) > kExponentBudget)
            throw OverflowBudget("det_m(raw): exponent budget exceeded");
        const Complex sl = std::sinh(lambda), cl = std::cosh(lambda);
        const Complex sm = std::sinh(m), cm = std::cosh(m);
        const Complex v = -lambda * lambda *
                          (2.0 * m * cm * cl * sl + sm * (lambda * sl * sl + cl * cl));
        return {v, 0.0};
    }
    case DetForm::factored: {
        if (exponent_load(lambda) > kExponentBudget)
            throw OverflowBudget("det_m(factored): exponent budget exceeded");
        const auto [tp, tm] = t_factors(lambda);
        const Complex v = 2.0 * lambda * lambda *
                          (-std::exp(m) * tp * tp + std::exp(-m) * tm * tm);
        return {v, 0.0};
    }
    case DetForm::scaled: {
        if (lambda == Complex(0.0))
            throw std::domain_error("det_m(scaled): lambda must be nonzero");
        const auto [tp, tm] = t_factors(lambda);
        const Complex v = -tp * tp + std::exp(-2.0 * m) * tm * tm;
        return {v, m.real()};
    }
    }
    throw std::logic_error("det_m: unknown form");
}

Complex det_rescale(Frequency lambda, const DetResult& scaled) {
    const Complex m = sqrt_branch(lambda);
    return 2.0 * lambda * lambda * std::exp(m) * scaled.value;
}

Eigen::Matrix4cd cofactors(Frequency lambda, CofactorSource source, bool literal_c34) {
    if (lambda == Complex(0.0))
        throw std::domain_error("cofactors: lambda must be nonzero");

    if (source == CofactorSource::numeric) {
        const Eigen::Matrix4cd M = build_m(lambda);
        Eigen::Matrix4cd C;
        for (int i = 0; i < 4; ++i) {
            for (int j = 0; j < 4; ++j) {
                Eigen::Matrix3cd minor;
                int rr = 0;
                for (int r = 0; r < 4; ++r) {
                    if (r == i) continue;
                    int cc = 0;
                    for (int c = 0; c < 4; ++c) {
                        if (c == j) continue;
                        minor(rr, cc) = M(r, c);
                        ++cc;
                    }
                    ++rr;
                }
                const double sign = ((i + j) % 2 == 0) ? 1.0 : -1.0;
                C(i, j) = sign * minor.determinant();
            }
        }
        return C;
    }

    const Complex m = sqrt_branch(lambda);
    const Complex sl = std::sinh(lambda), cl = std::cosh(lambda);
    const auto [tp, tm] = t_factors(lambda);
    const Complex ep = std::exp(m), en = std::exp(-m);
    const Complex plus = ep * tp + en * tm;   // = cosh(sqrt(l)) cosh(l) + sqrt(l) sinh(sqrt(l)) sinh(l)
    const Complex minus = ep * tp - en * tm;  // = sinh(sqrt(l)) cosh(l) + sqrt(l) cosh(sqrt(l)) sinh(l) ... over sqrt(l)
    const Complex l = lambda;
    const Complex l32 = l * m;      // lambda^{3/2}
    const Complex l52 = l * l * m;  // lambda^{5/2}

    Eigen::Matrix4cd C;
    C(0, 0) = -l32 * plus;
    C(0, 1) = l * l * cl * minus;
    C(0, 2) = -l * l * cl * plus;
    C(0, 3) = l32 * cl;
    C(1, 0) = -l * minus;
    C(1, 1) = -l * l * sl * minus;
    C(1, 2) = l * l * sl * plus;
    C(1, 3) = -l32 * sl;
    C(2, 0) = l32 * cl;
    C(2, 1) = l52 * sl * cl;
    C(2, 2) = l * l * cl * cl;
    // The Appendix prints c34 with the binary operator between the two terms
    // missing; the signed-minor oracle fixes it to a sum.
    C(2, 3) = literal_c34 ? -l32 * (ep * tp * en * tm) : -l32 * plus;
    C(3, 0) = -l32 * sl;
    C(3, 1) = -l52 * sl * sl;
    C(3, 2) = -l * l * cl * sl;
    C(3, 3) = -l * minus;
    return C;
}

double equilibrated_smin_ratio(const Eigen::Matrix4cd& m) {
    Eigen::Matrix4cd e = m;
    for (int i = 0; i < 4; ++i) {
        const double r = e.row(i).cwiseAbs().maxCoeff();
        if (r > 0.0) e.row(i) /= r;
    }
    Eigen::JacobiSVD<Eigen::Matrix4cd> svd(e);
    const auto& sv = svd.singularValues();
    return sv(3) / sv(0);
}

} // namespace whw
