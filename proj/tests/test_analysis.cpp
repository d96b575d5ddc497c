#include <cmath>
#include <numbers>
#include <random>

#include "doctest.h"
#include "whw/analysis.hpp"
#include "whw/errors.hpp"

using namespace whw;

namespace {

DataQuintuple probe_data() {
    DataQuintuple y = DataQuintuple::zero();
    y.f = [](double x) { return Complex(std::sin(std::numbers::pi * x) * x); };
    y.g = [](double x) { return Complex(std::cos(2.0 * x)); };
    y.h = [](double x) { return Complex(std::exp(x - 1.0) * (2.0 - x)); };
    y.ft = [](double x) { return Complex((3.0 - x) * (3.0 - x) * std::sin(x)); };
    y.gt = [](double x) { return Complex(std::cos(3.0 * x)); };
    return y;
}

} // namespace

TEST_CASE("fit_power: exact power law") {
    std::vector<double> xs, ys;
    for (int i = 1; i <= 20; ++i) {
        xs.push_back(i);
        ys.push_back(static_cast<double>(i) * i);
    }
    const ExponentFit fit = fit_power(xs, ys, 0.5, 25.0);
    CHECK(fit.exponent == doctest::Approx(2.0).epsilon(1e-12));
    CHECK(fit.ci_halfwidth < 1e-10);
    CHECK(fit.r_squared == doctest::Approx(1.0));
}

TEST_CASE("fit_power: constant data has exponent 0") {
    std::vector<double> xs, ys;
    for (int i = 1; i <= 15; ++i) {
        xs.push_back(i);
        ys.push_back(3.5);
    }
    CHECK(fit_power(xs, ys, 0.0, 100.0).exponent == doctest::Approx(0.0));
}

TEST_CASE("fit_power: sqrt law with 1% noise") {
    std::mt19937_64 rng(5);
    std::uniform_real_distribution<double> noise(-0.01, 0.01);
    std::vector<double> xs, ys;
    for (int i = 0; i < 60; ++i) {
        const double x = 10.0 * std::exp(std::log(100.0) * i / 59.0);
        xs.push_back(x);
        ys.push_back(2.7 * std::sqrt(x) * (1.0 + noise(rng)));
    }
    const ExponentFit fit = fit_power(xs, ys, 5.0, 2000.0);
    CHECK(std::abs(fit.exponent - 0.5) < 0.02);
}

TEST_CASE("fit_power: too few points") {
    std::vector<double> xs{1, 2, 3}, ys{1, 2, 3};
    CHECK_THROWS_AS(fit_power(xs, ys, 0.0, 10.0), InsufficientPoints);
}

TEST_CASE("decay_exponent: synthetic t^-4 trace") {
    EnergyTrace trace;
    for (int i = 0; i <= 4000; ++i) {
        const double t = 1.0 + i * 0.05;
        trace.rows.push_back({t, std::pow(t, -4.0), 0, 0, 0, 0});
    }
    const ExponentFit fit = decay_exponent(trace, 10.0);
    CHECK(fit.exponent == doctest::Approx(4.0).epsilon(1e-6));
}

TEST_CASE("decay_exponent: zero trace underflows") {
    EnergyTrace trace;
    for (int i = 0; i <= 2000; ++i) trace.rows.push_back({i * 0.1, 0.0, 0, 0, 0, 0});
    CHECK_THROWS_AS(decay_exponent(trace, 10.0), EnergyUnderflow);
}

TEST_CASE("decay_exponent: short trace is rejected") {
    EnergyTrace trace;
    for (int i = 0; i <= 100; ++i) trace.rows.push_back({i * 0.1, 1.0, 0, 0, 0, 0});
    CHECK_THROWS_AS(decay_exponent(trace, 10.0), InsufficientPoints);
}

TEST_CASE("resolvent_norm: conjugate symmetry in s") {
    const DiscreteGenerator gen = build_generator(Mesh{SystemKind::full_A, 64});
    const double a = resolvent_norm(17.0, gen);
    const double b = resolvent_norm(-17.0, gen);
    CHECK(std::abs(a - b) <= 2e-3 * a);
}

TEST_CASE("resolvent_norm dominates every Rayleigh quotient") {
    const DiscreteGenerator gen = build_generator(Mesh{SystemKind::full_A, 64});
    const double s = 9.0;
    const double norm = resolvent_norm(s, gen);
    const Eigen::VectorXcd y = sample_data(probe_data(), gen);
    const Eigen::VectorXcd x = discrete_resolvent_solve(s, gen, y);
    const double num = energy(Eigen::VectorXcd(x), gen).total;
    const double den = energy(Eigen::VectorXcd(y), gen).total;
    CHECK(norm * 1.0001 >= std::sqrt(num / den));
}

TEST_CASE("discrete resolvent converges to the closed form") {
    const double s = 10.0;
    std::vector<double> errs;
    for (const int n : {64, 128, 256}) {
        const DiscreteGenerator gen = build_generator(Mesh{SystemKind::full_A, n});
        const ClosedFormState cf = solve_resolvent(Complex(0.0, s), probe_data());
        const GridClosedForm grid = evaluate_on_grid(cf, n);
        const Eigen::VectorXcd xh = discrete_resolvent_solve(s, gen, sample_data(probe_data(), gen));
        errs.push_back(grid_relative_error(xh, grid, gen));
    }
    CHECK(std::log2(errs[0] / errs[1]) >= 1.8);
    CHECK(std::log2(errs[1] / errs[2]) >= 1.8);
}

TEST_CASE("peak tracking lands on a discrete resonance") {
    const DiscreteGenerator gen = build_generator(Mesh{SystemKind::full_A, 128});
    const Complex lam = nearest_discrete_eigenvalue(31.5, gen);
    CHECK(lam.real() < 0.0);
    CHECK(std::abs(lam.imag() - 31.5) < 2.0);
    // the resolvent norm at the tracked peak beats nearby off-peak values
    const double peak = resolvent_norm(lam.imag(), gen);
    const double off = resolvent_norm(lam.imag() + 1.2, gen);
    CHECK(peak > off);
}

TEST_CASE("lemma_suite passes on the default configuration") {
    const LemmaSuiteReport rep = lemma_suite();
    for (const auto& c : rep.checks) {
        INFO(c.name, ": ", c.detail);
        CHECK(c.passed);
    }
    CHECK(rep.all_passed());
}

TEST_CASE("lemma_suite pinpoints a corrupted c34") {
    LemmaSuiteOptions opt;
    opt.corrupt_c34 = true;
    const LemmaSuiteReport rep = lemma_suite(opt);
    bool adjugate_failed = false;
    for (const auto& c : rep.checks)
        if (c.name == "adjugate_identity" && !c.passed) {
            adjugate_failed = true;
            CHECK(c.detail.find("(3,4)") != std::string::npos);
        }
    CHECK(adjugate_failed);
}

TEST_CASE("scan_resolvent records unconverged or failed rows without aborting") {
    // a tiny mesh factor forces disagreement between the two mesh levels
    ScanPolicy policy;
    policy.mesh_factor = 0.1;
    policy.min_mesh = 16;
    policy.track_peaks = false;
    const auto rows = scan_resolvent({200.0}, SystemKind::full_A, policy);
    REQUIRE(rows.size() == 1);
    CHECK(rows[0].error.empty());
    CHECK_FALSE(rows[0].converged);
}
