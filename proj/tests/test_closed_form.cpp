#include "doctest.h"

#include <cmath>
#include <stdexcept>
#include <random>

#include "contagion/closed_form.hpp"
#include "contagion/kernels.hpp"

using namespace contagion;

TEST_CASE("g0 values") {
    CHECK(g0(1.0, 0.5) == doctest::Approx(0.1760326634).epsilon(1e-9));
    CHECK(g0(0.0, 0.5) == 0.0);
    CHECK(g0(1e-4, 0.5) < 1e-300);
    CHECK(g0(1.0, 60.0) < 1e-300);
    CHECK_THROWS_AS(g0(1.0, 0.0), std::domain_error);
}

TEST_CASE("nu0 values") {
    CHECK(nu0(1.0, 0.5) == doctest::Approx(-0.352065326764299477774680441597).epsilon(1e-13));
    CHECK(nu0(0.0, 0.5) == 0.0);
    CHECK(nu0(1e-4, 0.5) > -1e-300);
    CHECK(nu0(1.0, 1e-9) == doctest::Approx(-1.0 / std::sqrt(2.0 * M_PI)).epsilon(1e-12));
    for (double t = 0.05; t <= 2.0; t += 0.05) {
        CHECK(nu0(t, 0.5) <= 0.0);
        CHECK(nu0(t, 0.5) == -heat_kernel(t, 0.0, 0.5));
    }
}

TEST_CASE("omega0 values") {
    CHECK(omega0(1.0, 0.0, 0.5) == doctest::Approx(0.617075077451973792724590778783).epsilon(1e-12));
    CHECK(omega0(0.7, 0.7, 0.5) == 0.0);
    CHECK(omega0(1.0, 0.25, 0.5) == doctest::Approx(0.299764569589059689895055870047).epsilon(1e-12));
    CHECK_THROWS_AS(omega0(0.5, 1.0, 0.5), std::domain_error);

    // trapezoid of g0 over [0.25, 1]
    const int n = 20000;
    const double h = 0.75 / n;
    double acc = 0.5 * (g0(0.25, 0.5) + g0(1.0, 0.5));
    for (int i = 1; i < n; ++i) acc += g0(0.25 + i * h, 0.5);
    CHECK(acc * h == doctest::Approx(omega0(1.0, 0.25, 0.5)).epsilon(1e-8));
}

TEST_CASE("omega0 derivatives") {
    std::mt19937_64 rng(7);
    std::uniform_real_distribution<double> u(0.05, 2.0);
    for (int k = 0; k < 20; ++k) {
        double t = u(rng), tp = u(rng);
        if (tp > t) std::swap(t, tp);
        if (t - tp < 1e-3) t += 1e-2;
        const double h = 1e-5;
        const double dt = (omega0(t + h, tp, 0.5) - omega0(t - h, tp, 0.5)) / (2 * h);
        const double dtp = (omega0(t, tp + h, 0.5) - omega0(t, tp - h, 0.5)) / (2 * h);
        CHECK(std::abs(dt - g0(t, 0.5)) <= 1e-6 * g0(t, 0.5));
        CHECK(std::abs(dtp + g0(tp, 0.5)) <= 1e-6 * g0(tp, 0.5));
    }
}

TEST_CASE("constant drift density") {
    CHECK(g_const_drift(1.0, 0.5, 0.0) == g0(1.0, 0.5));
    // drift away from the barrier: (z + mu t)^2 = 1 and 0
    CHECK(g_const_drift(1.0, 0.5, 0.5) == doctest::Approx(0.120985362259571674898915096468).epsilon(1e-12));
    CHECK(g_const_drift(0.5, 0.5, -1.0) == doctest::Approx(0.564189583547756286948079451561).epsilon(1e-12));
    CHECK(g_const_drift(1.0, 0.5, -0.5) == doctest::Approx(0.5 / std::sqrt(2.0 * M_PI)).epsilon(1e-12));
    for (double mu : {0.0, -0.5, -1.0}) {
        // midpoint rule in u = sqrt(t) up to t = 3600, plus the known tail for mu = 0
        const int n = 400000;
        const double top = 60.0;
        const double h = top / n;
        double acc = 0.0;
        for (int i = 1; i <= n; ++i) {
            const double u = (i - 0.5) * h;
            acc += g_const_drift(u * u, 0.5, mu) * 2.0 * u;
        }
        const double tail = mu == 0.0 ? 2.0 * (normal_cdf(0.5 / top) - 0.5) : 0.0;
        CHECK(std::abs(acc * h + tail - 1.0) <= 1e-6);
    }
}

TEST_CASE("analytic time derivatives") {
    for (double t : {0.05, 0.2, 0.7, 1.5}) {
        const double h = 1e-6;
        CHECK(g0_t(t, 0.5) == doctest::Approx((g0(t + h, 0.5) - g0(t - h, 0.5)) / (2 * h)).epsilon(1e-6));
        CHECK(nu0_t(t, 0.5) == doctest::Approx((nu0(t + h, 0.5) - nu0(t - h, 0.5)) / (2 * h)).epsilon(1e-6));
    }
}
