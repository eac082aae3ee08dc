#include "contagion/analysis.hpp"

#include <cmath>
#include <stdexcept>

namespace contagion {

double alpha_from_bank_params(const BankSystemParams& p) {
    const double R = p.recovery_rate;
    const double f = p.interbank_fraction;
    const double L = p.external_liability;
    if (!(R >= 0.0 && R <= 1.0)) throw std::invalid_argument("recovery rate must lie in [0,1]");
    if (!(p.sigma > 0.0)) throw std::invalid_argument("sigma must be > 0");
    if (!(f >= 0.0 && f < 1.0)) throw std::invalid_argument("interbank fraction must lie in [0,1)");
    if (!(L > 0.0)) throw std::invalid_argument("external liability must be > 0");
    const double gamma = f * L / (1.0 - f);
    const double lambda0 = R * (L + gamma) - gamma;
    if (!(lambda0 > 0.0)) throw std::domain_error("initial default barrier is not positive");
    return gamma * (1.0 - R * R) / (p.sigma * lambda0);
}

double interbank_fraction_preset(const std::string& region) {
    if (region == "EU") return 0.12;
    if (region == "Canada") return 0.08;
    if (region == "US") return 0.045;
    throw std::invalid_argument("unknown region preset: " + region);
}

Eigen::VectorXd cumulative_trapezoid(const Eigen::VectorXd& f, double delta) {
    Eigen::VectorXd c = Eigen::VectorXd::Zero(f.size());
    for (Eigen::Index i = 1; i < f.size(); ++i) c[i] = c[i - 1] + 0.5 * delta * (f[i] + f[i - 1]);
    return c;
}

MomentsResult conditional_moments(const Eigen::VectorXd& g, const GridSpec& grid, double alpha) {
    if (g.size() != grid.size()) throw std::invalid_argument("g does not match the grid");
    const Eigen::VectorXd t = Eigen::VectorXd::LinSpaced(grid.size(), 0.0, grid.t_end);
    auto trap = [&](const Eigen::VectorXd& v) {
        return grid.delta * (v.sum() - 0.5 * (v[0] + v[v.size() - 1]));
    };
    const double mass = trap(g);
    if (!(mass > 0.0)) throw std::domain_error("conditional moments need positive mass");
    const double mean = trap(t.cwiseProduct(g)) / mass;
    const double second = trap(t.cwiseProduct(t).cwiseProduct(g)) / mass;
    return {grid.t_end, alpha, mean, std::max(0.0, second - mean * mean), mass};
}

double nested_difference(const Eigen::VectorXd& coarse, const Eigen::VectorXd& fine) {
    if (fine.size() != 2 * coarse.size() - 1) throw std::invalid_argument("grids are not nested");
    double d = 0.0;
    for (Eigen::Index i = 0; i < coarse.size(); ++i) d = std::max(d, std::abs(coarse[i] - fine[2 * i]));
    return d;
}

double convergence_order(const Eigen::VectorXd& coarse, const Eigen::VectorXd& mid,
                         const Eigen::VectorXd& fine) {
    const double d1 = nested_difference(coarse, mid);
    const double d2 = nested_difference(mid, fine);
    if (!(d1 > 0.0) || !(d2 > 0.0)) throw std::domain_error("differences vanish; order undefined");
    return std::log2(d1 / d2);
}

double convergence_order(const SolutionPath& coarse, const SolutionPath& mid,
                         const SolutionPath& fine) {
    if (coarse.blow_up || mid.blow_up || fine.blow_up)
        throw std::invalid_argument("convergence order needs paths without blow-up");
    return convergence_order(coarse.g, mid.g, fine.g);
}

}  // namespace contagion
