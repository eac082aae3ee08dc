#pragma once

// Shared quadrature for the heat-potential integrals
//   int_0^t w(t,t') Xi nu / sqrt(2 pi (t-t')^3) dt',  Xi = exp(-kappa^2 w^2 / (2(t-t'))),
// on a uniform grid: trapezoid on the cells [t_0, t_{n-1}] and a u = sqrt(t-t')
// rule on the last cell. Psi = kappa * w; for the feedback system w = Omega, kappa = alpha.

#include <cmath>
#include <numbers>
#include <vector>

#include <Eigen/Dense>

namespace contagion::detail {

inline constexpr double kTwoPi = 2.0 * std::numbers::pi;

// c[m] = 1 / (sqrt(8 pi delta) m^{3/2}), m = 1..N.
inline std::vector<double> node_coefficients(int n_steps, double delta) {
    std::vector<double> c(n_steps + 1, 0.0);
    const double s = 1.0 / std::sqrt(8.0 * std::numbers::pi * delta);
    for (int m = 1; m <= n_steps; ++m) c[m] = s / (m * std::sqrt(static_cast<double>(m)));
    return c;
}

// Trapezoid multiplicity of node j among the cells 1..n-1.
inline double node_weight(int j, int n) {
    if (n < 2) return 0.0;
    return (j == 0 || j == n - 1) ? 1.0 : 2.0;
}

struct HistorySums {
    double I = 0.0;  // sum of w Xi nu
    double U = 0.0;  // coefficient of nu_n in the J sum
    double V = 0.0;  // history part of the J sum
};

// w(j) gives w(t_n, t_j) for j = 0..n-1.
template <class W>
HistorySums history_sums(int n, double delta, double kappa, const W& w,
                         const Eigen::VectorXd& nu, const std::vector<double>& c) {
    HistorySums s;
    if (n < 2) return s;
    const double k2 = kappa * kappa;
    for (int j = 0; j < n; ++j) {
        const double b = node_weight(j, n) * c[n - j];
        const double tau = (n - j) * delta;
        const double wj = w(j);
        const double q = k2 * wj * wj / tau;
        const double e = std::exp(-0.5 * q);
        s.I += b * wj * e * nu[j];
        s.U += b;
        s.V -= b * (1.0 - q) * e * nu[j];
    }
    return s;
}

// Last-cell integral of w Xi nu; rate = dw/dt' limit at t'=t (sign: w ~ rate * tau),
// jump = w(t_n, t_{n-1}).
inline double singular_I(double rate, double jump, double kappa, double nu_n, double nu_n1,
                         double delta) {
    const double e = std::exp(-kappa * kappa * jump * jump / (2.0 * delta));
    return std::sqrt(delta / kTwoPi) * rate * nu_n + jump * e * nu_n1 / std::sqrt(kTwoPi * delta);
}

// Last-cell value of int (nu_n - (1 - Psi^2/tau) Xi nu) / sqrt(2 pi tau^3).
inline double singular_J(double rate, double jump, double kappa, double nu_n, double nu_n1,
                         double delta) {
    const double k2 = kappa * kappa;
    const double e = std::exp(-k2 * jump * jump / (2.0 * delta));
    const double r1 = 1.0 / std::sqrt(kTwoPi * delta);
    const double r3 = 1.0 / std::sqrt(kTwoPi * delta * delta * delta);
    const double a = (1.0 + e) * r1 + k2 * (1.5 * delta * delta * rate * rate + 0.5 * jump * jump) * r3;
    const double b = (1.0 + e) * r1 - k2 * jump * jump * e * r3;
    return a * nu_n - b * nu_n1;
}

}  // namespace contagion::detail
