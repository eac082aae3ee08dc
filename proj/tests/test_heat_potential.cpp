#include "doctest.h"

#include <cmath>
#include <stdexcept>

#include "contagion/analysis.hpp"
#include "contagion/closed_form.hpp"
#include "contagion/heat_potential.hpp"

using namespace contagion;

namespace {
double sup_diff(const Eigen::VectorXd& a, const Eigen::VectorXd& b) {
    return (a - b).cwiseAbs().maxCoeff();
}
}  // namespace

TEST_CASE("drift representations") {
    GridSpec grid(1.0, 10);
    CHECK(DriftSpec::linear(-0.5).at_node(4, grid) == doctest::Approx(-0.2));
    CHECK(DriftSpec::linear(-0.5).rate_at_node(4, grid) == -0.5);
    Eigen::VectorXd m = Eigen::VectorXd::LinSpaced(11, 0.0, -1.0).array().square();
    auto tab = DriftSpec::tabulated(m);
    CHECK(tab.rate_at_node(3, grid) == doctest::Approx((m[3] - m[2]) / 0.1));
    CHECK(tab.at(0.25, grid) == doctest::Approx(0.5 * (m[2] + m[3])));
    Eigen::VectorXd bad = m;
    bad[0] = 0.1;
    CHECK_THROWS_AS(DriftSpec::tabulated(bad).validate(grid), std::invalid_argument);
    CHECK_THROWS_AS(DriftSpec::tabulated(m.head(5)).validate(grid), std::invalid_argument);
    bad = m;
    bad[4] = NAN;
    CHECK_THROWS_AS(solve_nu(DriftSpec::tabulated(bad), grid, 0.5), std::invalid_argument);
    CHECK_THROWS_AS(solve_nu(DriftSpec::zero(), grid, 0.0), std::domain_error);
}

TEST_CASE("zero drift reproduces the closed form weight exactly") {
    GridSpec grid(1.0, 1000);
    const Eigen::VectorXd nu = solve_nu(DriftSpec::zero(), grid, 0.5);
    CHECK(nu[0] == 0.0);
    for (int n = 1; n <= grid.n_steps; ++n) CHECK(nu[n] == doctest::Approx(nu0(grid.t(n), 0.5)).epsilon(1e-14));
    const Eigen::VectorXd nu_lin = solve_nu(DriftSpec::linear(0.0), grid, 0.5);
    CHECK(sup_diff(nu, nu_lin) == 0.0);
}

TEST_CASE("zero drift loss rate") {
    GridSpec grid(1.0, 1000);
    const Eigen::VectorXd nu = solve_nu(DriftSpec::zero(), grid, 0.5);
    const Eigen::VectorXd g = loss_rate_hp(nu, DriftSpec::zero(), grid, 0.5);
    CHECK(std::abs(g[1000] - 0.1760326634) <= 1e-3);
    for (int n = 100; n <= 1000; n += 100) CHECK(std::abs(g[n] - g0(grid.t(n), 0.5)) <= 1e-3);
    const Eigen::VectorXd gd = loss_rate_direct(nu, DriftSpec::zero(), grid, 0.5);
    CHECK(std::abs(gd[1000] - 0.1760326634) <= 1e-3);
    const Eigen::VectorXd glin = loss_rate_hp(nu, DriftSpec::linear(0.0), grid, 0.5);
    CHECK(sup_diff(g, glin) == 0.0);
    CHECK_THROWS_AS(loss_rate_hp(nu.head(10), DriftSpec::zero(), grid, 0.5), std::invalid_argument);
}

TEST_CASE("constant drift matches the inverse Laplace closed form") {
    GridSpec grid(1.0, 1000);
    const auto drift = DriftSpec::linear(-0.5);
    const Eigen::VectorXd nu = solve_nu(drift, grid, 0.5);
    const Eigen::VectorXd g = loss_rate_hp(nu, drift, grid, 0.5);
    const Eigen::VectorXd gd = loss_rate_direct(nu, drift, grid, 0.5);
    double err = 0.0, err_d = 0.0;
    for (int n = 1; n <= grid.n_steps; ++n) {
        const double exact = g_const_drift(grid.t(n), 0.5, -0.5);
        err = std::max(err, std::abs(g[n] - exact));
        err_d = std::max(err_d, std::abs(gd[n] - exact));
        CHECK(g[n] >= -1e-10);
    }
    CHECK(err <= 5e-3);
    CHECK(err_d <= 5e-3);
    CHECK(std::abs(g[1000] - 0.5 / std::sqrt(2.0 * M_PI)) <= 5e-3);
}

TEST_CASE("the two loss-rate routes approach each other") {
    for (double mu : {0.0, -0.5, 0.5}) {
        const auto drift = DriftSpec::linear(mu);
        double prev = -1.0;
        for (int N : {500, 1000, 2000}) {
            GridSpec grid(1.0, N);
            const Eigen::VectorXd nu = solve_nu(drift, grid, 0.5);
            const double d = sup_diff(loss_rate_hp(nu, drift, grid, 0.5), loss_rate_direct(nu, drift, grid, 0.5));
            CHECK(d <= 1e-2);
            if (prev >= 0.0) CHECK(d <= 0.5 * prev + 1e-13);
            prev = d;
        }
    }
}

TEST_CASE("density by images for zero drift") {
    GridSpec grid(1.0, 1000);
    const Eigen::VectorXd nu = solve_nu(DriftSpec::zero(), grid, 0.5);
    Eigen::VectorXd x(3);
    x << 0.0, 0.5, 1.3;
    const Eigen::VectorXd p = transition_density(nu, DriftSpec::zero(), grid, 0.5, x, 1000);
    CHECK(std::abs(p[1] - 0.156971555882289328142115866999) <= 1e-5);
    CHECK(std::abs(p[2] - (heat_kernel(1.0, 1.3, 0.5) - heat_kernel(1.0, 1.3, -0.5))) <= 1e-5);
    CHECK(std::abs(p[0]) <= 1e-5);
    CHECK_THROWS_AS(transition_density(nu, DriftSpec::zero(), grid, 0.5, x, 0), std::domain_error);
    Eigen::VectorXd unsorted(2);
    unsorted << 1.0, 0.5;
    CHECK_THROWS_AS(transition_density(nu, DriftSpec::zero(), grid, 0.5, unsorted, 10), std::invalid_argument);
}

TEST_CASE("boundary value and mass for drifts") {
    for (double mu : {0.0, -0.5}) {
        const auto drift = DriftSpec::linear(mu);
        GridSpec grid(1.0, 1000);
        const Eigen::VectorXd nu = solve_nu(drift, grid, 0.5);
        const Eigen::VectorXd L = cumulative_trapezoid(loss_rate_hp(nu, drift, grid, 0.5), grid.delta);
        const Eigen::VectorXd x = default_x_grid(0.5, 1.0);
        for (int n : {20, 100, 400, 1000}) {
            const Eigen::VectorXd p = transition_density(nu, drift, grid, 0.5, x, n);
            CHECK(std::abs(p[0]) <= 5e-3);
            const double h = x[1] - x[0];
            const double mass = h * (p.sum() - 0.5 * (p[0] + p[p.size() - 1]));
            CHECK(std::abs(mass + L[n] - 1.0) <= 1e-3);
        }
    }
}

TEST_CASE("boundary value shrinks under refinement") {
    const auto drift = DriftSpec::linear(-0.5);
    Eigen::VectorXd x0 = Eigen::VectorXd::Zero(1);
    double prev = -1.0;
    for (int N : {250, 500, 1000}) {
        GridSpec grid(1.0, N);
        const Eigen::VectorXd nu = solve_nu(drift, grid, 0.5);
        double worst = 0.0;
        for (int k = 1; k <= 10; ++k)
            worst = std::max(worst, std::abs(transition_density(nu, drift, grid, 0.5, x0, k * N / 10)[0]));
        if (prev >= 0.0) CHECK(worst < prev);
        prev = worst;
    }
}
