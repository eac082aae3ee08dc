#include "contagion/heat_potential.hpp"

#include <cmath>
#include <stdexcept>

#include <boost/math/quadrature/gauss_kronrod.hpp>

#include "volterra_sums.hpp"

namespace contagion {

using detail::kTwoPi;

DriftSpec DriftSpec::zero() { return DriftSpec{}; }

DriftSpec DriftSpec::linear(double mu) {
    DriftSpec d;
    d.kind = Kind::linear;
    d.mu = mu;
    return d;
}

DriftSpec DriftSpec::tabulated(Eigen::VectorXd values, Eigen::VectorXd rates) {
    DriftSpec d;
    d.kind = Kind::tabulated;
    d.values = std::move(values);
    d.rates = std::move(rates);
    return d;
}

void DriftSpec::validate(const GridSpec& grid) const {
    switch (kind) {
        case Kind::zero:
            return;
        case Kind::linear:
            if (!std::isfinite(mu)) throw std::invalid_argument("drift slope must be finite");
            return;
        case Kind::tabulated:
            if (values.size() != grid.size())
                throw std::invalid_argument("tabulated drift must cover every grid node");
            if (!values.allFinite()) throw std::invalid_argument("tabulated drift must be finite");
            if (std::abs(values[0]) > 1e-14) throw std::invalid_argument("drift must start at 0");
            if (rates.size() != 0) {
                if (rates.size() != grid.size())
                    throw std::invalid_argument("drift rates must cover every grid node");
                if (!rates.allFinite()) throw std::invalid_argument("drift rates must be finite");
            }
            return;
    }
}

double DriftSpec::at_node(int n, const GridSpec& grid) const {
    switch (kind) {
        case Kind::zero: return 0.0;
        case Kind::linear: return mu * grid.t(n);
        case Kind::tabulated: return values[n];
    }
    return 0.0;
}

double DriftSpec::rate_at_node(int n, const GridSpec& grid) const {
    switch (kind) {
        case Kind::zero: return 0.0;
        case Kind::linear: return mu;
        case Kind::tabulated:
            if (rates.size() != 0) return rates[n];
            return n >= 1 ? (values[n] - values[n - 1]) / grid.delta : 0.0;
    }
    return 0.0;
}

double DriftSpec::at(double t, const GridSpec& grid) const {
    switch (kind) {
        case Kind::zero: return 0.0;
        case Kind::linear: return mu * t;
        case Kind::tabulated: {
            const double s = t / grid.delta;
            int k = static_cast<int>(std::floor(s));
            if (k < 0) return values[0];
            if (k >= grid.n_steps) return values[grid.n_steps];
            const double f = s - k;
            return (1.0 - f) * values[k] + f * values[k + 1];
        }
    }
    return 0.0;
}

namespace {

// Gauss-Kronrod bisection with an absolute floor, so cells whose integrand underflows
// do not recurse.
template <class F>
double adaptive_gk(const F& f, double a, double b, int depth) {
    double err = 0.0;
    const double v = boost::math::quadrature::gauss_kronrod<double, 15>::integrate(f, a, b, 0, 0.0, &err);
    if (depth >= 12 || err <= std::max(1e-14, 1e-10 * std::abs(v))) return v;
    const double m = 0.5 * (a + b);
    return adaptive_gk(f, a, m, depth + 1) + adaptive_gk(f, m, b, depth + 1);
}

void check_inputs(const DriftSpec& drift, const GridSpec& grid, double z) {
    if (!(z > 0.0)) throw std::domain_error("start point z must be positive");
    drift.validate(grid);
}

void check_nu(const Eigen::VectorXd& nu, const GridSpec& grid) {
    if (nu.size() != grid.size()) throw std::invalid_argument("nu does not match the grid");
}

Eigen::VectorXd drift_nodes(const DriftSpec& drift, const GridSpec& grid) {
    Eigen::VectorXd m(grid.size());
    for (int n = 0; n < grid.size(); ++n) m[n] = drift.at_node(n, grid);
    return m;
}

}  // namespace

Eigen::VectorXd solve_nu(const DriftSpec& drift, const GridSpec& grid, double z) {
    check_inputs(drift, grid, z);
    const double d = grid.delta;
    const auto c = detail::node_coefficients(grid.n_steps, d);
    const Eigen::VectorXd m = drift_nodes(drift, grid);
    Eigen::VectorXd nu = Eigen::VectorXd::Zero(grid.size());
    for (int n = 1; n <= grid.n_steps; ++n) {
        const double t = grid.t(n);
        const double r = drift.rate_at_node(n, grid);
        const double p = m[n] - m[n - 1];
        const auto s = detail::history_sums(n, d, 1.0, [&](int j) { return m[n] - m[j]; }, nu, c);
        const double a = m[n] + z;
        const double forcing = std::exp(-a * a / (2.0 * t)) / std::sqrt(kTwoPi * t);
        const double e = std::exp(-p * p / (2.0 * d));
        const double denom = 1.0 - std::sqrt(d / kTwoPi) * r;
        if (denom == 0.0) throw std::domain_error("drift rate makes the step singular");
        nu[n] = (s.I + p * e * nu[n - 1] / std::sqrt(kTwoPi * d) - forcing) / denom;
    }
    return nu;
}

Eigen::VectorXd loss_rate_hp(const Eigen::VectorXd& nu, const DriftSpec& drift,
                             const GridSpec& grid, double z) {
    check_inputs(drift, grid, z);
    check_nu(nu, grid);
    const double d = grid.delta;
    const auto c = detail::node_coefficients(grid.n_steps, d);
    const Eigen::VectorXd m = drift_nodes(drift, grid);
    Eigen::VectorXd g = Eigen::VectorXd::Zero(grid.size());
    for (int n = 1; n <= grid.n_steps; ++n) {
        const double t = grid.t(n);
        const double r = drift.rate_at_node(n, grid);
        const double p = m[n] - m[n - 1];
        const auto s = detail::history_sums(n, d, 1.0, [&](int j) { return m[n] - m[j]; }, nu, c);
        const double jn = detail::singular_J(r, p, 1.0, nu[n], nu[n - 1], d);
        const double a = m[n] + z;
        const double tail = a * std::exp(-a * a / (2.0 * t)) / (2.0 * std::sqrt(kTwoPi * t * t * t));
        g[n] = (r - 1.0 / std::sqrt(kTwoPi * t)) * nu[n] - 0.5 * (s.U * nu[n] + s.V + jn) + tail;
    }
    return g;
}

Eigen::VectorXd loss_rate_direct(const Eigen::VectorXd& nu, const DriftSpec& drift,
                                 const GridSpec& grid, double z) {
    check_inputs(drift, grid, z);
    check_nu(nu, grid);
    const double d = grid.delta;
    const auto c = detail::node_coefficients(grid.n_steps, d);
    const Eigen::VectorXd m = drift_nodes(drift, grid);
    Eigen::VectorXd g = Eigen::VectorXd::Zero(grid.size());
    for (int n = 1; n <= grid.n_steps; ++n) {
        const double t = grid.t(n);
        const double r = drift.rate_at_node(n, grid);
        // int (nu(t) - (Xi - 2 tau Xi_t) nu(t')) / sqrt(2 pi tau^3), Xi - 2 tau Xi_t = (1 + 2 r Psi - Psi^2/tau) Xi
        double bracket = 0.0;
        for (int j = 0; j < n && n >= 2; ++j) {
            const double tau = (n - j) * d;
            const double psi = m[n] - m[j];
            const double q = psi * psi / tau;
            const double factor = (1.0 + 2.0 * r * psi - q) * std::exp(-0.5 * q);
            bracket += detail::node_weight(j, n) * c[n - j] * (nu[n] - factor * nu[j]);
        }
        const double p = m[n] - m[n - 1];
        const double q = p * p / d;
        const double k_last = nu[n] - (1.0 + 2.0 * r * p - q) * std::exp(-0.5 * q) * nu[n - 1];
        bracket += 2.0 * k_last / std::sqrt(kTwoPi * d);
        const double a = m[n] + z;
        const double boundary = std::exp(-a * a / (2.0 * t)) / std::sqrt(kTwoPi * t);
        g[n] = -nu[n] / std::sqrt(kTwoPi * t) - 0.5 * bracket - (r - a / (2.0 * t)) * boundary;
    }
    return g;
}

HeatPotentialSolution solve_heat_potential(const DriftSpec& drift, const GridSpec& grid,
                                           double z) {
    Eigen::VectorXd nu = solve_nu(drift, grid, z);
    Eigen::VectorXd g = loss_rate_hp(nu, drift, grid, z);
    return {grid, std::move(nu), std::move(g), z};
}

Eigen::VectorXd transition_density(const Eigen::VectorXd& nu, const DriftSpec& drift,
                                   const GridSpec& grid, double z,
                                   const Eigen::VectorXd& x_grid, int t_node) {
    check_inputs(drift, grid, z);
    check_nu(nu, grid);
    if (t_node < 1 || t_node > grid.n_steps)
        throw std::domain_error("density needs a node in 1..N");
    for (Eigen::Index i = 0; i < x_grid.size(); ++i) {
        if (!(x_grid[i] >= 0.0)) throw std::invalid_argument("x grid must be nonnegative");
        if (i > 0 && x_grid[i] < x_grid[i - 1]) throw std::invalid_argument("x grid must be sorted");
    }
    const double d = grid.delta;
    const double t = grid.t(t_node);
    const double mt = drift.at_node(t_node, grid);

    // In u = sqrt(t - t') the cell [t_{k-1}, t_k] maps to [sqrt(t - t_k), sqrt(t - t_{k-1})].
    auto cell_integral = [&](double x, int k) {
        const double tk = grid.t(k);
        auto f = [&](double u) {
            if (u <= 0.0) {
                // Psi ~ M_t u^2 near the diagonal; only the x = 0 integrand survives.
                return x > 0.0 ? 0.0
                               : -2.0 * drift.rate_at_node(t_node, grid) * nu[t_node] /
                                     std::sqrt(kTwoPi);
            }
            const double tau = u * u;
            const double tp = t - tau;
            const double w = (tk - tp) / d;  // linear weight toward node k-1
            const double nu_tp = w * nu[k - 1] + (1.0 - w) * nu[k];
            const double y = x - (mt - drift.at(tp, grid));
            return 2.0 * y * std::exp(-y * y / (2.0 * tau)) * nu_tp / (std::sqrt(kTwoPi) * tau);
        };
        const double a = std::sqrt(std::max(0.0, t - tk));
        const double b = std::sqrt(t - grid.t(k - 1));
        return adaptive_gk(f, a, b, 0);
    };

    Eigen::VectorXd p(x_grid.size());
    for (Eigen::Index i = 0; i < x_grid.size(); ++i) {
        const double x = x_grid[i];
        double acc = 0.0;
        for (int k = 1; k <= t_node; ++k) acc += cell_integral(x, k);
        if (x == 0.0) acc += nu[t_node];  // one-sided limit of the double layer
        p[i] = acc + heat_kernel(t, x - mt, z);
    }
    return p;
}

Eigen::VectorXd default_x_grid(double z, double t_end, int points) {
    if (points < 2) throw std::invalid_argument("need at least two x points");
    return Eigen::VectorXd::LinSpaced(points, 0.0, z + 5.0 * std::sqrt(t_end));
}

}  // namespace contagion
