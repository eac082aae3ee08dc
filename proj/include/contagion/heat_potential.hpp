#pragma once

#include <Eigen/Dense>

#include "contagion/kernels.hpp"

namespace contagion {

/// Known drift M(t) with M(0) = 0.
struct DriftSpec {
    enum class Kind { zero, linear, tabulated };

    Kind kind = Kind::zero;
    double mu = 0.0;
    Eigen::VectorXd values;  // M at nodes 0..N (tabulated)
    Eigen::VectorXd rates;   // optional M_t at nodes; empty -> backward difference

    static DriftSpec zero();
    static DriftSpec linear(double mu);
    static DriftSpec tabulated(Eigen::VectorXd values, Eigen::VectorXd rates = {});

    void validate(const GridSpec& grid) const;
    double at_node(int n, const GridSpec& grid) const;
    double rate_at_node(int n, const GridSpec& grid) const;
    /// M(t) between nodes; tabulated drifts are linearly interpolated.
    double at(double t, const GridSpec& grid) const;
};

struct HeatPotentialSolution {
    GridSpec grid;
    Eigen::VectorXd nu;  // nodes 0..N, nu(0) = 0
    Eigen::VectorXd g;
    double z;
};

Eigen::VectorXd solve_nu(const DriftSpec& drift, const GridSpec& grid, double z);

Eigen::VectorXd loss_rate_hp(const Eigen::VectorXd& nu, const DriftSpec& drift,
                             const GridSpec& grid, double z);

Eigen::VectorXd loss_rate_direct(const Eigen::VectorXd& nu, const DriftSpec& drift,
                                 const GridSpec& grid, double z);

HeatPotentialSolution solve_heat_potential(const DriftSpec& drift, const GridSpec& grid,
                                           double z);

/// p(t_node, x) for x in x_grid.
Eigen::VectorXd transition_density(const Eigen::VectorXd& nu, const DriftSpec& drift,
                                   const GridSpec& grid, double z,
                                   const Eigen::VectorXd& x_grid, int t_node);

/// 400 points on [0, z + 5 sqrt(T)].
Eigen::VectorXd default_x_grid(double z, double t_end, int points = 400);

}  // namespace contagion
