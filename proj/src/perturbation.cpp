#include "contagion/perturbation.hpp"

#include <cmath>
#include <stdexcept>

#include "contagion/closed_form.hpp"
#include "volterra_sums.hpp"

namespace contagion {

using detail::kTwoPi;

namespace {

void check_node(int t_node, const GridSpec& grid) {
    if (t_node < 1 || t_node > grid.n_steps) throw std::domain_error("node must lie in 1..N");
}

// int_0^{t_n} f(t') / sqrt(2 pi (t_n - t')) dt' with f known at nodes 0..n-1 and its
// limit at t' = t_n: trapezoid on the first n-1 cells, u = sqrt(t - t') on the last one.
template <class F>
double half_singular_integral(int n, double delta, const F& f, double f_at_t) {
    double acc = 0.0;
    if (n >= 2) {
        for (int j = 0; j < n; ++j) {
            const double w = (j == 0 || j == n - 1) ? 0.5 : 1.0;
            acc += w * delta * f(j) / std::sqrt(kTwoPi * (n - j) * delta);
        }
    }
    return acc + std::sqrt(delta / kTwoPi) * (f_at_t + f(n - 1));
}

}  // namespace

double nu1(int t_node, const GridSpec& grid, double z) {
    check_node(t_node, grid);
    const double t = grid.t(t_node);
    // omega0 * g0 * nu0 with omega0 = Omega0 / ((t - t') g0(t')), equal to 1 on the diagonal
    auto f = [&](int j) {
        const double tp = grid.t(j);
        if (tp <= 0.0) return 0.0;
        return omega0(t, tp, z) * nu0(tp, z) / (t - tp);
    };
    const double integral = half_singular_integral(t_node, grid.delta, f, g0(t, z) * nu0(t, z));
    return -integral - z * omega0(t, 0.0, z) * std::exp(-z * z / (2.0 * t)) / std::sqrt(kTwoPi * t * t * t);
}

double nu1_t(int t_node, const GridSpec& grid, double z) {
    check_node(t_node, grid);
    const double t = grid.t(t_node);
    const double g0t = g0(t, z);
    auto f = [&](int j) {
        const double tp = grid.t(j);
        if (tp <= 0.0) return 0.0;
        const double tau = t - tp;
        const double om = omega0(t, tp, z);
        return (3.0 * g0(tp, z) / tau - 3.0 * om / (tau * tau)) * nu0(tp, z) -
               (3.0 * om / tau - 2.0 * g0t) * nu0_t(tp, z);
    };
    const double diag = -1.5 * g0_t(t, z) * nu0(t, z) - g0t * nu0_t(t, z);
    const double integral = half_singular_integral(t_node, grid.delta, f, diag);
    const double e = std::exp(-z * z / (2.0 * t));
    const double tail = 1.0 - normal_cdf(z / std::sqrt(t));
    return integral - z * z * e * e / (kTwoPi * t * t * t) +
           2.0 * z * tail * (3.0 - z * z / t) * e / (2.0 * std::sqrt(kTwoPi * std::pow(t, 5)));
}

double g1(int t_node, const GridSpec& grid, double z, const Eigen::VectorXd& nu1_t_path) {
    check_node(t_node, grid);
    if (nu1_t_path.size() <= t_node) throw std::invalid_argument("nu1_t path too short");
    const double t = grid.t(t_node);
    auto f = [&](int j) { return nu1_t_path[j]; };
    const double integral = half_singular_integral(t_node, grid.delta, f, nu1_t_path[t_node]);
    const double e = std::exp(-z * z / (2.0 * t));
    return -g0(t, z) * nu0(t, z) - integral -
           (1.0 - z * z / t) * omega0(t, 0.0, z) * e / (2.0 * std::sqrt(kTwoPi * t * t * t));
}

Eigen::VectorXd nu1_path(const GridSpec& grid, double z) {
    Eigen::VectorXd v = Eigen::VectorXd::Zero(grid.size());
    for (int n = 1; n <= grid.n_steps; ++n) v[n] = nu1(n, grid, z);
    return v;
}

Eigen::VectorXd nu1_t_path(const GridSpec& grid, double z) {
    Eigen::VectorXd v = Eigen::VectorXd::Zero(grid.size());
    for (int n = 1; n <= grid.n_steps; ++n) v[n] = nu1_t(n, grid, z);
    return v;
}

Eigen::VectorXd g1_path(const GridSpec& grid, double z) {
    const Eigen::VectorXd d = nu1_t_path(grid, z);
    Eigen::VectorXd v = Eigen::VectorXd::Zero(grid.size());
    for (int n = 1; n <= grid.n_steps; ++n) v[n] = g1(n, grid, z, d);
    return v;
}

PerturbationSolution assemble(double alpha, const GridSpec& grid, double z,
                              std::optional<double> rescale_target) {
    if (!(alpha >= 0.0)) throw std::invalid_argument("alpha must be >= 0");
    if (!(z > 0.0)) throw std::domain_error("start point z must be positive");
    PerturbationSolution s{grid, z, alpha, Eigen::VectorXd::Zero(grid.size()),
                           nu1_path(grid, z), Eigen::VectorXd::Zero(grid.size()),
                           g1_path(grid, z), Eigen::VectorXd(), false, 1.0};
    for (int n = 1; n <= grid.n_steps; ++n) {
        s.nu0[n] = nu0(grid.t(n), z);
        s.g0[n] = g0(grid.t(n), z);
    }
    if (rescale_target) {
        const double target = *rescale_target;
        if (!(target >= 0.0)) throw std::invalid_argument("target mass must be nonnegative");
        if (alpha == 0.0) throw std::invalid_argument("rescaling needs alpha > 0");
        auto trap = [&](const Eigen::VectorXd& v) {
            return grid.delta * (v.sum() - 0.5 * (v[0] + v[grid.n_steps]));
        };
        const double m1 = alpha * trap(s.g1);
        const double scale = (target - trap(s.g0)) / m1;
        if (!(scale > 0.0) || !std::isfinite(scale))
            throw std::invalid_argument("target mass implies a non-positive first-order scale");
        s.scale = scale;
        s.rescaled = true;
    }
    s.g_assembled = s.g0 + s.scale * alpha * s.g1;
    return s;
}

}  // namespace contagion
