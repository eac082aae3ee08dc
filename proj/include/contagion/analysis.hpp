#pragma once

#include <limits>
#include <string>

#include <Eigen/Dense>

#include "contagion/kernels.hpp"
#include "contagion/mckv_solver.hpp"

namespace contagion {

struct BankSystemParams {
    double recovery_rate;
    double sigma;
    double interbank_fraction;
    double external_liability = 1.0;
};

double alpha_from_bank_params(const BankSystemParams& p);

/// Interbank fraction of a named banking system: "EU", "Canada" or "US".
double interbank_fraction_preset(const std::string& region);

struct MomentsResult {
    double horizon;
    double alpha;
    double cond_mean;
    double cond_var;
    double total_mass;
};

MomentsResult conditional_moments(const Eigen::VectorXd& g, const GridSpec& grid,
                                  double alpha = std::numeric_limits<double>::quiet_NaN());

/// log2 of successive sup-norm differences; finer arrays are sampled at the coarse nodes.
double convergence_order(const Eigen::VectorXd& coarse, const Eigen::VectorXd& mid,
                         const Eigen::VectorXd& fine);
double convergence_order(const SolutionPath& coarse, const SolutionPath& mid,
                         const SolutionPath& fine);

/// Sup-norm of coarse - fine sampled at the coarse nodes (fine has 2x the steps).
double nested_difference(const Eigen::VectorXd& coarse, const Eigen::VectorXd& fine);

/// Trapezoid running integral, entry 0 is 0.
Eigen::VectorXd cumulative_trapezoid(const Eigen::VectorXd& f, double delta);

}  // namespace contagion
