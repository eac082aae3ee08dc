#include "doctest.h"

#include <cmath>
#include <stdexcept>

#include "contagion/kernels.hpp"

using namespace contagion;

TEST_CASE("grid spacing") {
    GridSpec g(1.0, 1000);
    CHECK(g.delta * g.n_steps == doctest::Approx(1.0).epsilon(1e-15));
    CHECK(g.t(250) == doctest::Approx(0.25));
    CHECK(g.size() == 1001);
    CHECK_THROWS_AS(GridSpec(1.0, 1), std::invalid_argument);
    CHECK_THROWS_AS(GridSpec(0.0, 10), std::invalid_argument);
}

TEST_CASE("normal cdf") {
    CHECK(normal_cdf(0.0) == 0.5);
    CHECK(std::abs(normal_cdf(0.5) - 0.691462461274013103637704610608) <= 1e-12);
    CHECK(normal_cdf(-8.0) < 1e-14);
    double prev = 0.0;
    for (double x = -8.0; x <= 8.0; x += 0.01) {
        CHECK(std::abs(normal_cdf(x) + normal_cdf(-x) - 1.0) <= 1e-14);
        CHECK(normal_cdf(x) >= prev);
        prev = normal_cdf(x);
    }
}

TEST_CASE("heat kernel") {
    CHECK(heat_kernel(1.0, 0.5, 0.5) == doctest::Approx(0.3989422804014327).epsilon(1e-14));
    CHECK(heat_kernel(1.0, 0.0, 0.5) == doctest::Approx(0.352065326764299477774680441597).epsilon(1e-14));
    CHECK(heat_kernel(1e-6, 1.0, 0.5) == 0.0);
    CHECK_THROWS_AS(heat_kernel(0.0, 0.1, 0.5), std::domain_error);

    const double t = 0.7, z = 0.5;
    const int n = 20000;
    const double a = z - 10.0 * std::sqrt(t), b = z + 10.0 * std::sqrt(t);
    const double h = (b - a) / n;
    double mass = 0.5 * (heat_kernel(t, a, z) + heat_kernel(t, b, z));
    for (int i = 1; i < n; ++i) mass += heat_kernel(t, a + i * h, z);
    CHECK(std::abs(mass * h - 1.0) <= 1e-8);
}

TEST_CASE("xi kernel") {
    CHECK(xi_kernel(1.0, 1.0, 123.0) == 1.0);
    CHECK(xi_kernel(1.0, 0.5, 0.0) == 1.0);
    CHECK(xi_kernel(1.0, 0.5, 1.0) == doctest::Approx(0.36787944117144233).epsilon(1e-14));
    CHECK_THROWS_AS(xi_kernel(0.5, 1.0, 0.0), std::domain_error);
    // psi = O(t - t') approaches the diagonal value
    CHECK(xi_kernel(1.0, 1.0 - 1e-8, 0.3 * 1e-8) == doctest::Approx(1.0).epsilon(1e-9));
}

TEST_CASE("derivative identity with unit kernel") {
    auto one = [](double, double) { return 1.0; };
    auto unit = [](double) { return 1.0; };
    CHECK(lemma1_lhs(one, unit, 1.0, 4096) == doctest::Approx(0.3989422804).epsilon(1e-8));
    CHECK(lemma1_rhs_form1(one, unit, 1.0, 4096) == doctest::Approx(0.3989422804014327).epsilon(1e-14));
    CHECK_THROWS_AS(lemma1_lhs(one, unit, 0.0, 16), std::domain_error);
}

TEST_CASE("derivative identity forms agree and the gap shrinks with resolution") {
    auto xi = [](double t, double tp) { return std::exp(-(t - tp)); };
    auto nu = [](double tp) { return tp; };
    const double l = lemma1_lhs(xi, nu, 1.0, 4096);
    CHECK(std::abs(l - lemma1_rhs_form1(xi, nu, 1.0, 4096)) <= 1e-4);
    CHECK(std::abs(l - lemma1_rhs_form2(xi, nu, 1.0, 4096)) <= 1e-4);
    const double coarse = std::abs(lemma1_lhs(xi, nu, 1.0, 64) - lemma1_rhs_form1(xi, nu, 1.0, 64));
    const double fine = std::abs(lemma1_lhs(xi, nu, 1.0, 128) - lemma1_rhs_form1(xi, nu, 1.0, 128));
    CHECK(fine <= coarse);
}
