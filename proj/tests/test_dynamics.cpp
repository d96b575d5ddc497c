#include <cmath>
#include <numbers>
#include <random>

#include "doctest.h"
#include "whw/errors.hpp"
#include "whw/generator.hpp"
#include "whw/simulate.hpp"

using namespace whw;

namespace {

Eigen::VectorXcd random_state(int n, std::uint64_t seed) {
    std::mt19937_64 rng(seed);
    std::normal_distribution<double> d;
    Eigen::VectorXcd x(n);
    for (int i = 0; i < n; ++i) x(i) = Complex(d(rng), d(rng));
    return x;
}

} // namespace

TEST_CASE("layout sizes and bandwidth") {
    const Mesh full{SystemKind::full_A, 16};
    const Layout L(full);
    CHECK(L.size() == 5 * 16 - 1);
    const Mesh half{SystemKind::half_B, 16};
    const Layout Lh(half);
    CHECK(Lh.size() == 2 * 16 + 8 - 1);

    const DiscreteGenerator gen = build_generator(full);
    // bandwidth <= 5
    for (int k = 0; k < gen.a_h.outerSize(); ++k)
        for (Eigen::SparseMatrix<double>::InnerIterator it(gen.a_h, k); it; ++it)
            CHECK(std::abs(it.row() - it.col()) <= 5);
}

TEST_CASE("mesh validation") {
    CHECK_THROWS_AS(build_generator(Mesh{SystemKind::full_A, 4}), std::invalid_argument);
    CHECK_THROWS_AS(build_generator(Mesh{SystemKind::half_B, 15}), std::invalid_argument);
}

TEST_CASE("exact discrete dissipativity: Re<A_h x, x>_G = -||D+ w||^2") {
    for (const Mesh mesh : {Mesh{SystemKind::full_A, 24}, Mesh{SystemKind::half_B, 24}}) {
        const DiscreteGenerator gen = build_generator(mesh);
        for (int trial = 0; trial < 5; ++trial) {
            const Eigen::VectorXcd x = random_state(gen.size(), 100 + trial);
            const double lhs = dissipation_form(x, gen);
            const double rhs = -heat_gradient_norm_sq(x, gen);
            CHECK(lhs <= 1e-10 * x.squaredNorm() / mesh.spacing());
            CHECK(std::abs(lhs - rhs) <= 1e-9 * std::abs(rhs));
        }
    }
}

TEST_CASE("generator consistency on a compatible smooth state") {
    // w = sin^4(pi(xi-1)) vanishes with w', w'', w''' at both interfaces, so
    // every row of A_h x including the interface rows is second-order
    auto exact_w = [](double xi) {
        const double s = std::sin(std::numbers::pi * (xi - 1.0));
        return s * s * s * s;
    };
    auto exact_wpp = [](double xi) {
        const double p = std::numbers::pi;
        const double s = std::sin(p * (xi - 1.0)), c = std::cos(p * (xi - 1.0));
        return 4.0 * p * p * s * s * (3.0 * c * c - s * s);
    };
    double prev_err = 0.0;
    for (int level = 0; level < 3; ++level) {
        const int n = 32 << level;
        const Mesh mesh{SystemKind::full_A, n};
        const DiscreteGenerator gen = build_generator(mesh);
        const Layout& L = gen.layout;
        Eigen::VectorXd x = Eigen::VectorXd::Zero(gen.size());
        for (int j = 1; j <= n - 1; ++j) x(L.iw(j)) = exact_w(1.0 + j * mesh.spacing());
        const Eigen::VectorXd ax = gen.a_h * x;
        double err = 0.0;
        for (int j = 1; j <= n - 1; ++j)
            err = std::max(err, std::abs(ax(L.iw(j)) - exact_wpp(1.0 + j * mesh.spacing())));
        // interface rows approximate (u'' + w'')/2 = 0 here
        err = std::max(err, std::abs(ax(L.ith1())));
        err = std::max(err, std::abs(ax(L.ith2())));
        if (level > 0) {
            const double order = std::log2(prev_err / err);
            CHECK(order >= 1.8);
        }
        prev_err = err;
    }
}

TEST_CASE("built-in profiles satisfy the discrete domain constraints") {
    const Mesh mesh{SystemKind::full_A, 64};
    const DiscreteGenerator gen = build_generator(mesh);
    for (const char* name : {"bump_wave1", "bump_heat", "smooth_heat", "packet_wave1", "symmetric_pair"}) {
        const GridState x = make_initial_data(name, mesh);
        CHECK(domain_violations(x, gen).empty());
    }
    // admissible analytically, though its fractional edge defeats the
    // finite-difference certificate
    CHECK_NOTHROW(make_initial_data("rough_heat", mesh));
    const Mesh half{SystemKind::half_B, 64};
    const DiscreteGenerator genh = build_generator(half);
    for (const char* name : {"bump_wave1", "bump_heat", "smooth_heat", "packet_wave1"}) {
        const GridState x = make_initial_data(name, half);
        CHECK(domain_violations(x, genh).empty());
    }
}

TEST_CASE("bump profiles hit their interface values") {
    const Mesh mesh{SystemKind::full_A, 32};
    const GridState x = make_initial_data("bump_heat", mesh);
    const Layout L(mesh);
    CHECK(x.values(L.ith1()) == 0.0); // w(1) = 0
    CHECK(std::abs(x.values(L.ith2())) < 1e-30); // w(2) = 0 up to sin(pi) roundoff
    const GridState y = make_initial_data("bump_wave1", mesh);
    CHECK(y.values(L.iu(mesh.n())) == 0.0); // u(1) = 0
}

TEST_CASE("custom profile violating v(0) = 0 is rejected with the constraint name") {
    const Mesh mesh{SystemKind::full_A, 32};
    CHECK_THROWS_AS(make_initial_data("custom:v=1", mesh), ProfileViolatesDomain);
    try {
        make_initial_data("custom:v=1", mesh);
    } catch (const ProfileViolatesDomain& e) {
        CHECK(e.constraint == "v(0) = 0");
    }
    // a valid custom profile passes
    CHECK_NOTHROW(make_initial_data("custom:u=x^2*(1-x)^2", mesh));
}

TEST_CASE("simulate: zero data stays zero") {
    const Mesh mesh{SystemKind::full_A, 16};
    const DiscreteGenerator gen = build_generator(mesh);
    GridState x0;
    x0.mesh = mesh;
    x0.values = Eigen::VectorXd::Zero(gen.size());
    SimulateOptions opt;
    opt.t_final = 1.0;
    const SimulationResult res = simulate(x0, gen, opt);
    for (const auto& row : res.trace.rows) CHECK(row.energy == 0.0);
}

TEST_CASE("simulate: energy is non-increasing and the dissipation identity is exact") {
    const Mesh mesh{SystemKind::full_A, 48};
    const DiscreteGenerator gen = build_generator(mesh);
    const GridState x0 = make_initial_data("rough_heat", mesh);
    SimulateOptions opt;
    opt.t_final = 2.0;
    opt.sample_stride = 1;
    const SimulationResult res = simulate(x0, gen, opt);
    const double e0 = res.trace.rows.front().energy;
    const double dt = 0.5 * mesh.spacing();
    for (std::size_t k = 1; k < res.trace.rows.size(); ++k) {
        const auto& prev = res.trace.rows[k - 1];
        const auto& cur = res.trace.rows[k];
        CHECK(cur.energy <= prev.energy + 1e-12 * e0);
        // E_{k+1} - E_k = dt * dissipation at the midpoint state
        const double balance = cur.energy - prev.energy - dt * cur.dissipation_rate;
        CHECK(std::abs(balance) <= 1e-12 * e0);
    }
}

TEST_CASE("energy: quadratic scaling and component split") {
    const Mesh mesh{SystemKind::full_A, 32};
    const DiscreteGenerator gen = build_generator(mesh);
    GridState x = make_initial_data("bump_heat", mesh);
    const EnergyBreakdown e1 = energy(x, gen);
    CHECK(e1.total == doctest::Approx(e1.wave1 + e1.heat + e1.wave2));
    CHECK(e1.wave1 == 0.0);
    CHECK(e1.wave2 == 0.0);
    x.values *= 2.0;
    const EnergyBreakdown e2 = energy(x, gen);
    CHECK(e2.total == doctest::Approx(4.0 * e1.total).epsilon(1e-12));
}

TEST_CASE("reflection: energy doubles exactly and the seam stays odd") {
    const int n = 48;
    const Mesh half{SystemKind::half_B, n};
    const Mesh full{SystemKind::full_A, n};
    const DiscreteGenerator genh = build_generator(half);
    const DiscreteGenerator genf = build_generator(full);

    const GridState xh = make_initial_data("bump_wave1", half);
    const GridState xf = reflect_half_state(xh, full);
    CHECK(domain_violations(xf, genf).empty());

    const double eh = energy(xh, genh).total;
    const double ef = energy(xf, genf).total;
    CHECK(ef == doctest::Approx(2.0 * eh).epsilon(1e-13));

    // one Crank-Nicolson step on both systems preserves the embedding
    SimulateOptions opt;
    opt.dt = 0.25 * half.spacing();
    opt.t_final = opt.dt;
    const GridState xh1 = simulate(xh, genh, opt).final_state;
    const GridState xf1 = simulate(xf, genf, opt).final_state;
    const GridState xf1_expected = reflect_half_state(xh1, full);
    CHECK((xf1.values - xf1_expected.values).cwiseAbs().maxCoeff() <= 1e-12);
}

TEST_CASE("reflection rejects mismatched meshes") {
    const GridState xh = make_initial_data("bump_wave1", Mesh{SystemKind::half_B, 32});
    CHECK_THROWS_AS(reflect_half_state(xh, Mesh{SystemKind::full_A, 64}), ReflectionSeam);
}

TEST_CASE("simulate mesh convergence (smoke)") {
    // solution differences between successive refinements contract
    std::vector<Eigen::VectorXd> coarse_on_fine;
    const double T = 1.5;
    std::vector<double> errs;
    Eigen::VectorXd prev;
    int prev_n = 0;
    for (const int n : {32, 64, 128}) {
        const Mesh mesh{SystemKind::full_A, n};
        const DiscreteGenerator gen = build_generator(mesh);
        const GridState x0 = make_initial_data("packet_wave1", mesh);
        SimulateOptions opt;
        opt.dt = 0.5 * mesh.spacing();
        opt.t_final = T;
        opt.sample_stride = 1 << 20;
        const GridState xT = simulate(x0, gen, opt).final_state;
        if (prev_n > 0) {
            // compare on the coarse nodes (every second fine node)
            const Layout Lc((Mesh{SystemKind::full_A, prev_n}));
            const Layout Lf(mesh);
            double err = 0.0;
            for (int j = 1; j <= prev_n; ++j)
                err = std::max(err, std::abs(prev(Lc.iu(j)) - xT.values(Lf.iu(2 * j))));
            for (int j = 1; j <= prev_n - 1; ++j)
                err = std::max(err, std::abs(prev(Lc.iw(j)) - xT.values(Lf.iw(2 * j))));
            errs.push_back(err);
        }
        prev = xT.values;
        prev_n = n;
    }
    CHECK(errs.size() == 2);
    const double order = std::log2(errs[0] / errs[1]);
    CHECK(order >= 1.8);
}
