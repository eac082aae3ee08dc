#pragma once

#include <optional>

#include <Eigen/Dense>

#include "contagion/kernels.hpp"

namespace contagion {

struct PerturbationSolution {
    GridSpec grid;
    double z;
    double alpha;
    Eigen::VectorXd nu0;
    Eigen::VectorXd nu1;
    Eigen::VectorXd g0;
    Eigen::VectorXd g1;
    Eigen::VectorXd g_assembled;
    bool rescaled = false;
    double scale = 1.0;  // multiplier on the alpha * g1 term
};

double nu1(int t_node, const GridSpec& grid, double z);
double nu1_t(int t_node, const GridSpec& grid, double z);
/// nu1_t_path holds nu1_t at nodes 0..t_node.
double g1(int t_node, const GridSpec& grid, double z, const Eigen::VectorXd& nu1_t_path);

Eigen::VectorXd nu1_path(const GridSpec& grid, double z);
Eigen::VectorXd nu1_t_path(const GridSpec& grid, double z);
Eigen::VectorXd g1_path(const GridSpec& grid, double z);

/// g0 + alpha g1; with a target, the g1 term is scaled so the trapezoid mass matches it.
PerturbationSolution assemble(double alpha, const GridSpec& grid, double z,
                              std::optional<double> rescale_target = std::nullopt);

}  // namespace contagion
