#include <cmath>
#include <random>

#include <Eigen/LU>

#include "doctest.h"
#include "whw/coupling.hpp"
#include "whw/errors.hpp"
#include "whw/frequency.hpp"

using namespace whw;

namespace {

// frozen extended-precision reference values
constexpr double kDetM1 = -10.017874927409901899; // -sinh(1)(4 cosh^2(1) - 1)
const Complex kDetI1(-0.18658707010974147398, 0.12150549528128067889);
const Complex kC34At2PlusI(37.268007680883795509, -52.944657120775751731);

std::mt19937_64 rng(42);

Complex random_lambda(double max_mag) {
    std::uniform_real_distribution<double> angle(-std::numbers::pi, std::numbers::pi);
    std::uniform_real_distribution<double> logmag(std::log(0.2), std::log(max_mag));
    return std::polar(std::exp(logmag(rng)), angle(rng));
}

// Sample away from the zero set of det (Re >= 0 is zero-free) and close to
// the imaginary axis, where the adjugate cancellations stay conditioned (the
// off-diagonal sums cancel terms of size ~ e^{2 Re lambda - Re sqrt(lambda)}
// relative to det). This is also where the Cramer path operates.
Complex random_lambda_resolvent_side(double max_mag) {
    std::uniform_real_distribution<double> re(0.0, 2.0);
    std::uniform_real_distribution<double> logmag(std::log(0.2), std::log(max_mag));
    std::uniform_int_distribution<int> sign(0, 1);
    const double s = std::exp(logmag(rng)) * (sign(rng) ? 1.0 : -1.0);
    return Complex(re(rng), s);
}

} // namespace

TEST_CASE("sqrt_branch examples and branch convention") {
    CHECK(sqrt_branch(Complex(4.0, 0.0)) == Complex(2.0, 0.0));
    // theta = pi convention on the cut: sqrt(-1) = +i, also for -0.0 imag
    CHECK(sqrt_branch(Complex(-1.0, 0.0)) == Complex(0.0, 1.0));
    CHECK(sqrt_branch(Complex(-1.0, -0.0)) == Complex(0.0, 1.0));
    const Complex r2i = sqrt_branch(Complex(0.0, 2.0));
    CHECK(std::abs(r2i - Complex(1.0, 1.0)) < 1e-15);
    CHECK(sqrt_branch(Complex(0.0, 0.0)) == Complex(0.0, 0.0));
}

TEST_CASE("sqrt_branch round-trip and half-plane property") {
    for (int i = 0; i < 2000; ++i) {
        const Complex l = random_lambda(1e6);
        const Complex r = sqrt_branch(l);
        CHECK(r.real() >= 0.0);
        CHECK(std::abs(r * r - l) <= 1e-14 * std::abs(l));
    }
    // negative real axis lands on the positive imaginary axis
    for (double x : {-0.5, -2.0, -100.0}) {
        const Complex r = sqrt_branch(Complex(x, 0.0));
        CHECK(r.real() == 0.0);
        CHECK(r.imag() > 0.0);
    }
}

TEST_CASE("t_factors special values") {
    const auto at0 = t_factors(Complex(0.0));
    CHECK(std::abs(at0.t_plus - 0.5) < 1e-15);
    CHECK(std::abs(at0.t_minus - 0.5) < 1e-15);

    const auto at1 = t_factors(Complex(1.0));
    CHECK(std::abs(at1.t_plus - std::exp(1.0) / 2.0) < 1e-15);

    // sum/difference identities
    for (int i = 0; i < 200; ++i) {
        const Complex l = random_lambda(50.0);
        const auto [tp, tm] = t_factors(l);
        const Complex root = sqrt_branch(l);
        CHECK(std::abs(tp + tm - std::cosh(l)) <=
              1e-12 * std::max(1.0, std::abs(std::cosh(l))));
        CHECK(std::abs(tp - tm - root * std::sinh(l)) <=
              1e-12 * std::max(1.0, std::abs(root * std::sinh(l))));
    }
}

TEST_CASE("t_factors lower bound on the imaginary axis") {
    // Lemma 3.3 sweep; the floor 1/4 holds from |s| = (1/sqrt(2)+1)^2 upward
    const double s0 = std::pow(1.0 / std::sqrt(2.0) + 1.0, 2.0);
    double worst = 1e300;
    for (int i = 0; i < 10000; ++i) {
        const double s = s0 * std::exp(std::log(1e4 / s0) * i / 9999.0);
        for (double sign : {1.0, -1.0}) {
            const auto [tp, tm] = t_factors(Complex(0.0, sign * s));
            worst = std::min({worst, std::abs(tp), std::abs(tm)});
        }
    }
    CHECK(worst >= 0.25);
}

TEST_CASE("determinant closed form at lambda = 1") {
    const Complex raw = det_m(Complex(1.0), DetForm::raw).value;
    const double closed = -std::sinh(1.0) * (4.0 * std::cosh(1.0) * std::cosh(1.0) - 1.0);
    CHECK(std::abs(raw - closed) <= 1e-12 * std::abs(closed));
    CHECK(std::abs(raw - kDetM1) <= 1e-12 * std::abs(kDetM1));
}

TEST_CASE("determinant vanishes at lambda = 0 (raw and factored)") {
    CHECK(std::abs(det_m(Complex(0.0), DetForm::raw).value) == 0.0);
    CHECK(std::abs(det_m(Complex(0.0), DetForm::factored).value) == 0.0);
    CHECK_THROWS_AS(det_m(Complex(0.0), DetForm::scaled), std::domain_error);
}

TEST_CASE("determinant forms agree after rescaling") {
    for (int i = 0; i < 1000; ++i) {
        const double s = 1e-2 * std::exp(std::log(1e5) * i / 999.0);
        const Complex l(0.0, s);
        const Complex raw = det_m(l, DetForm::raw).value;
        const Complex fac = det_m(l, DetForm::factored).value;
        const Complex resc = det_rescale(l, det_m(l, DetForm::scaled));
        const double scale = std::abs(raw);
        CHECK(std::abs(raw - fac) <= 1e-10 * scale);
        CHECK(std::abs(raw - resc) <= (s <= 1e3 ? 1e-10 : 1e-7) * scale);
    }
}

TEST_CASE("extended-precision determinant value at i") {
    const Complex raw = det_m(Complex(0.0, 1.0), DetForm::raw).value;
    CHECK(std::abs(raw - kDetI1) <= 1e-13);
}

TEST_CASE("build_m matches the LU determinant") {
    SUBCASE("entry check at lambda = 1") {
        const auto M = build_m(Complex(1.0));
        CHECK(std::abs(M(0, 0) - std::sinh(1.0)) < 1e-15);
        CHECK(M(0, 1) == Complex(-1.0));
        CHECK(std::abs(M(3, 3) - std::cosh(1.0)) < 1e-15);
    }
    SUBCASE("s = 7 on the axis") {
        const Complex l(0.0, 7.0);
        const Complex lu = build_m(l).partialPivLu().determinant();
        const Complex fac = det_m(l, DetForm::factored).value;
        CHECK(std::abs(lu - fac) <= 1e-10 * std::abs(fac));
    }
    SUBCASE("100 random lambda, |lambda| <= 100") {
        for (int i = 0; i < 100; ++i) {
            const Complex l = random_lambda(100.0);
            const Complex lu = build_m(l).partialPivLu().determinant();
            const Complex raw = det_m(l, DetForm::raw).value;
            CHECK(std::abs(lu - raw) <= 1e-10 * std::abs(raw));
        }
    }
}

TEST_CASE("overflow budget is enforced for non-scaled forms") {
    const Complex huge(500.0, 0.0);
    CHECK_THROWS_AS(det_m(huge, DetForm::raw), OverflowBudget);
    CHECK_NOTHROW(det_m(huge, DetForm::scaled));
}

TEST_CASE("cofactors: appendix closed forms match numeric minors") {
    for (int i = 0; i < 50; ++i) {
        const Complex l = random_lambda_resolvent_side(1e3);
        const auto ca = cofactors(l, CofactorSource::appendix);
        const auto cn = cofactors(l, CofactorSource::numeric);
        const double scale = cn.cwiseAbs().maxCoeff();
        for (int r = 0; r < 4; ++r)
            for (int c = 0; c < 4; ++c)
                CHECK(std::abs(ca(r, c) - cn(r, c)) <= 1e-9 * scale);
    }
}

TEST_CASE("cofactor c11 closed form") {
    const Complex l(0.7, 1.3);
    const Complex root = sqrt_branch(l);
    const auto [tp, tm] = t_factors(l);
    const Complex expected = -l * root * (std::exp(root) * tp + std::exp(-root) * tm);
    CHECK(std::abs(cofactors(l, CofactorSource::appendix)(0, 0) - expected) <=
          1e-13 * std::abs(expected));
}

TEST_CASE("c34 fixed by the signed-minor oracle") {
    const Complex l(2.0, 1.0);
    const Complex corrected = cofactors(l, CofactorSource::appendix)(2, 3);
    const Complex numeric = cofactors(l, CofactorSource::numeric)(2, 3);
    CHECK(std::abs(corrected - kC34At2PlusI) <= 1e-12 * std::abs(kC34At2PlusI));
    CHECK(std::abs(numeric - kC34At2PlusI) <= 1e-10 * std::abs(kC34At2PlusI));
    // the literal printed entry (read as a product) disagrees
    const Complex literal = cofactors(l, CofactorSource::appendix, true)(2, 3);
    CHECK(std::abs(literal - numeric) > 1e-3 * std::abs(numeric));
}

TEST_CASE("adjugate identity transpose(C) M = det I") {
    for (int i = 0; i < 50; ++i) {
        const Complex l = random_lambda_resolvent_side(1e3);
        const auto M = build_m(l);
        const auto C = cofactors(l, CofactorSource::appendix);
        const Complex det = det_m(l, DetForm::raw).value;
        const Eigen::Matrix4cd lhs = C.transpose() * M;
        for (int r = 0; r < 4; ++r)
            for (int c = 0; c < 4; ++c) {
                const Complex want = r == c ? det : Complex(0.0);
                CHECK(std::abs(lhs(r, c) - want) <= 1e-9 * std::abs(det));
            }
    }
}

TEST_CASE("conjugate symmetry of the determinant") {
    for (int i = 0; i < 100; ++i) {
        const Complex l = random_lambda(200.0);
        const Complex a = det_m(l, DetForm::raw).value;
        const Complex b = det_m(std::conj(l), DetForm::raw).value;
        CHECK(std::abs(std::conj(a) - b) <= 1e-12 * std::abs(a));
    }
}
