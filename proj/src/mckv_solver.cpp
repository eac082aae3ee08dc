#include "contagion/mckv_solver.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>
#include <utility>

#include "contagion/heat_potential.hpp"
#include "volterra_sums.hpp"

namespace contagion {

using detail::kTwoPi;

void ProblemSpec::validate() const {
    if (!(alpha >= 0.0) || !std::isfinite(alpha)) throw std::invalid_argument("alpha must be >= 0");
    if (!(z > 0.0) || !std::isfinite(z)) throw std::invalid_argument("z must be > 0");
}

std::string to_string(BlowUpCause cause) {
    switch (cause) {
        case BlowUpCause::newton_divergence: return "newton_divergence";
        case BlowUpCause::rate_threshold: return "rate_threshold";
        case BlowUpCause::mass_exhausted: return "mass_exhausted";
    }
    return "unknown";
}

double omega_update(double omega_prev, double g_n, double g_n1, double delta) {
    return omega_prev + delta * (g_n + g_n1) / 2.0;
}

namespace {

void check_cell(int l, int n) {
    if (l < 1 || l >= n) throw std::domain_error("interior cell index must satisfy 1 <= l < n");
}

double cell_scale(double delta) { return 1.0 / std::sqrt(8.0 * std::numbers::pi * delta); }

}  // namespace

double quad_I(int l, int n, double omega_nl, double omega_nl1, double nu_l, double nu_l1,
              double alpha, double delta) {
    check_cell(l, n);
    const double m0 = n - l;
    const double m1 = n - l + 1;
    const double a2 = alpha * alpha;
    const double right = omega_nl * std::exp(-a2 * omega_nl * omega_nl / (2.0 * m0 * delta)) * nu_l / std::pow(m0, 1.5);
    const double left = omega_nl1 * std::exp(-a2 * omega_nl1 * omega_nl1 / (2.0 * m1 * delta)) * nu_l1 / std::pow(m1, 1.5);
    return cell_scale(delta) * (right + left);
}

double quad_J(int l, int n, double omega_nl, double omega_nl1, double nu_n, double nu_l,
              double nu_l1, double alpha, double delta) {
    check_cell(l, n);
    const double a2 = alpha * alpha;
    auto term = [&](double omega, double m, double nu_j) {
        const double q = a2 * omega * omega / (m * delta);
        return (nu_n - (1.0 - q) * std::exp(-0.5 * q) * nu_j) / std::pow(m, 1.5);
    };
    return cell_scale(delta) * (term(omega_nl, n - l, nu_l) + term(omega_nl1, n - l + 1, nu_l1));
}

double quad_I_singular(double g_n, double g_n1, double nu_n, double nu_n1, double alpha,
                       double delta) {
    const double gamma = delta * (g_n + g_n1) / 2.0;
    return detail::singular_I(g_n, gamma, alpha, nu_n, nu_n1, delta);
}

double quad_J_singular(double g_n, double g_n1, double nu_n, double nu_n1, double alpha,
                       double delta) {
    const double gamma = delta * (g_n + g_n1) / 2.0;
    return detail::singular_J(g_n, gamma, alpha, nu_n, nu_n1, delta);
}

namespace {

struct Residual {
    double value;
    double nu;
};

// Scalar equation in g_n after eliminating nu_n.
class StepEquation {
public:
    StepEquation(int n, const Eigen::VectorXd& nu, const Eigen::VectorXd& g,
                 const Eigen::VectorXd& L, const ProblemSpec& spec, const std::vector<double>& c)
        : n_(n), nu_(nu), g_(g), L_(L), spec_(spec), c_(c) {}

    Residual operator()(double gn) const {
        const double d = spec_.grid.delta;
        const double alpha = spec_.alpha;
        const double z = spec_.z;
        const double t = spec_.grid.t(n_);
        const double gamma = d * (g_[n_ - 1] + gn) / 2.0;
        const double s_n = L_[n_ - 1] + gamma;
        const auto s = detail::history_sums(n_, d, alpha, [&](int j) { return s_n - L_[j]; }, nu_, c_);
        const double e = std::exp(-alpha * alpha * gamma * gamma / (2.0 * d));
        const double A = std::sqrt(d / kTwoPi) * gn;
        const double B = gamma * e * nu_[n_ - 1] / std::sqrt(kTwoPi * d);
        const double a = alpha * s_n - z;
        const double ea = std::exp(-a * a / (2.0 * t));
        const double f1 = ea / std::sqrt(kTwoPi * t);
        const double f2 = a * ea / (2.0 * std::sqrt(kTwoPi * t * t * t));
        const double nu_n = -(alpha * (s.I + B) + f1) / (1.0 + alpha * A);
        const double jn = detail::singular_J(gn, gamma, alpha, nu_n, nu_[n_ - 1], d);
        const double r = gn + (alpha * gn + 1.0 / std::sqrt(kTwoPi * t)) * nu_n +
                         0.5 * (s.U * nu_n + s.V + jn) + f2;
        return {r, nu_n};
    }

private:
    int n_;
    const Eigen::VectorXd& nu_;
    const Eigen::VectorXd& g_;
    const Eigen::VectorXd& L_;
    const ProblemSpec& spec_;
    const std::vector<double>& c_;
};

std::optional<double> newton(const StepEquation& eq, double x, const SolverOptions& opts) {
    for (int it = 0; it < opts.max_newton; ++it) {
        const double r = eq(x).value;
        if (!std::isfinite(r)) return std::nullopt;
        if (std::abs(r) <= opts.tolerance) return x;
        const double h = std::max(1e-7, 1e-7 * std::abs(x));
        const double dr = (eq(x + h).value - eq(x - h).value) / (2.0 * h);
        if (!std::isfinite(dr) || dr == 0.0) return std::nullopt;
        x -= r / dr;
        if (!std::isfinite(x)) return std::nullopt;
    }
    if (std::abs(eq(x).value) <= opts.tolerance) return x;
    return std::nullopt;
}

std::optional<double> bisect(const StepEquation& eq, double lo, double hi, int steps) {
    double flo = eq(lo).value;
    const double fhi = eq(hi).value;
    if (!std::isfinite(flo) || !std::isfinite(fhi) || flo * fhi > 0.0) return std::nullopt;
    for (int k = 0; k < steps; ++k) {
        const double mid = 0.5 * (lo + hi);
        const double fm = eq(mid).value;
        if (fm * flo <= 0.0) {
            hi = mid;
        } else {
            lo = mid;
            flo = fm;
        }
    }
    return 0.5 * (lo + hi);
}

// A root far from the previous value is only accepted if the residual is monotone on the
// way there; otherwise the branch continued from g_{n-1} has folded.
bool folded(const StepEquation& eq, double g_prev, double root) {
    if (std::abs(root - g_prev) <= 0.5 * std::max(1.0, g_prev)) return false;
    const double lo = std::min(root, g_prev);
    const double hi = std::max(root, g_prev);
    constexpr int samples = 33;
    double prev = eq(lo).value;
    for (int k = 1; k < samples; ++k) {
        const double cur = eq(lo + (hi - lo) * k / (samples - 1)).value;
        if (cur < prev) return true;
        prev = cur;
    }
    return false;
}

StepResult step_impl(int n, const Eigen::VectorXd& nu, const Eigen::VectorXd& g,
                     const Eigen::VectorXd& L, const ProblemSpec& spec, const SolverOptions& opts,
                     const std::vector<double>& c) {
    const StepEquation eq(n, nu, g, L, spec, c);
    const double g_prev = g[n - 1];
    auto root = newton(eq, g_prev, opts);
    if (!root) root = bisect(eq, 0.0, 10.0 * std::max(1.0, g_prev), opts.bisection_steps);
    if (!root || folded(eq, g_prev, *root))
        return {0.0, 0.0, BlowUpCause::newton_divergence};
    const double gn = *root;
    const double nu_n = eq(gn).nu;
    if (gn > opts.g_max) return {nu_n, gn, BlowUpCause::rate_threshold};
    if (omega_update(L[n - 1], gn, g_prev, spec.grid.delta) >= 1.0)
        return {nu_n, gn, BlowUpCause::mass_exhausted};
    return {nu_n, gn, std::nullopt};
}

}  // namespace

StepResult step(int n, const SolutionPath& history, const ProblemSpec& spec,
                const SolverOptions& opts) {
    spec.validate();
    if (n < 1 || n > spec.grid.n_steps) throw std::domain_error("step index out of range");
    if (history.blow_up) throw std::invalid_argument("history already ended in blow-up");
    if (history.g.size() < n || history.nu.size() < n || history.L.size() < n)
        throw std::invalid_argument("history must hold nodes 0..n-1");
    const auto c = detail::node_coefficients(spec.grid.n_steps, spec.grid.delta);
    return step_impl(n, history.nu, history.g, history.L, spec, opts, c);
}

SolutionPath solve(const ProblemSpec& spec, const SolverOptions& opts) {
    spec.validate();
    const GridSpec& grid = spec.grid;
    const auto c = detail::node_coefficients(grid.n_steps, grid.delta);
    SolutionPath path{grid, Eigen::VectorXd::Zero(grid.size()), Eigen::VectorXd::Zero(grid.size()),
                      Eigen::VectorXd::Zero(grid.size()), std::nullopt};
    for (int n = 1; n <= grid.n_steps; ++n) {
        const StepResult r = step_impl(n, path.nu, path.g, path.L, spec, opts, c);
        if (r.failure) {
            path.blow_up = BlowUpReport{n, grid.t(n), *r.failure, path.g[n - 1]};
            path.nu.conservativeResize(n);
            path.g.conservativeResize(n);
            path.L.conservativeResize(n);
            return path;
        }
        if (r.g < -1e-6) throw std::runtime_error("negative loss rate at node " + std::to_string(n));
        path.nu[n] = r.nu;
        path.g[n] = r.g;
        path.L[n] = omega_update(path.L[n - 1], r.g, path.g[n - 1], grid.delta);
    }
    return path;
}

Eigen::VectorXd andreas_residual(const SolutionPath& path, const ProblemSpec& spec) {
    if (path.blow_up) throw std::invalid_argument("residual check needs a path without blow-up");
    const GridSpec& grid = path.grid;
    const Eigen::VectorXd& L = path.L;
    Eigen::VectorXd res = Eigen::VectorXd::Zero(L.size());
    for (int n = 1; n < L.size(); ++n) {
        const double t = grid.t(n);
        const double lhs = normal_cdf((spec.alpha * L[n] - spec.z) / std::sqrt(t));
        double rhs = 0.0;
        for (int k = 1; k <= n; ++k) {
            const double s_mid = grid.t(k) - 0.5 * grid.delta;
            const double l_mid = 0.5 * (L[k] + L[k - 1]);
            rhs += normal_cdf(spec.alpha * (L[n] - l_mid) / std::sqrt(t - s_mid)) * (L[k] - L[k - 1]);
        }
        res[n] = lhs - rhs;
    }
    return res;
}

Eigen::VectorXd density_slice(const SolutionPath& path, const ProblemSpec& spec,
                              const Eigen::VectorXd& x_grid, int t_node) {
    const int last = path.last_node();
    if (t_node < 1 || t_node > last) throw std::domain_error("density node outside the solved path");
    const GridSpec grid = last == path.grid.n_steps ? path.grid : GridSpec(path.grid.t(last), last);
    auto drift = DriftSpec::tabulated(-spec.alpha * path.L.head(last + 1),
                                      -spec.alpha * path.g.head(last + 1));
    return transition_density(path.nu.head(last + 1), drift, grid, spec.z, x_grid, t_node);
}

}  // namespace contagion
