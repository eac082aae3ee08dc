#pragma once

#include <optional>
#include <string>

#include <Eigen/Dense>

#include "contagion/kernels.hpp"

namespace contagion {

struct ProblemSpec {
    double alpha;
    double z;
    GridSpec grid;

    void validate() const;
};

enum class BlowUpCause { newton_divergence, rate_threshold, mass_exhausted };

std::string to_string(BlowUpCause cause);

struct BlowUpReport {
    int node;      // first node that could not be accepted
    double time;   // node * delta
    BlowUpCause cause;
    double last_g; // g at the last accepted node
};

/// Node arrays 0..last; L_n = int_0^{t_n} g.
struct SolutionPath {
    GridSpec grid;
    Eigen::VectorXd nu;
    Eigen::VectorXd g;
    Eigen::VectorXd L;
    std::optional<BlowUpReport> blow_up;

    int last_node() const { return static_cast<int>(g.size()) - 1; }
};

struct SolverOptions {
    double g_max = 1e6;
    double tolerance = 1e-12;
    int max_newton = 50;
    int bisection_steps = 200;
};

double omega_update(double omega_prev, double g_n, double g_n1, double delta);

// Cell rules of the discretized system. Indices follow Omega_{nl} = int_{t_l}^{t_n} g.
double quad_I(int l, int n, double omega_nl, double omega_nl1, double nu_l, double nu_l1,
              double alpha, double delta);
double quad_J(int l, int n, double omega_nl, double omega_nl1, double nu_n, double nu_l,
              double nu_l1, double alpha, double delta);
double quad_I_singular(double g_n, double g_n1, double nu_n, double nu_n1, double alpha,
                       double delta);
double quad_J_singular(double g_n, double g_n1, double nu_n, double nu_n1, double alpha,
                       double delta);

struct StepResult {
    double nu;
    double g;
    std::optional<BlowUpCause> failure;
};

/// Advance to node n given nodes 0..n-1 in history.
StepResult step(int n, const SolutionPath& history, const ProblemSpec& spec,
                const SolverOptions& opts = {});

SolutionPath solve(const ProblemSpec& spec, const SolverOptions& opts = {});

/// Per-node lhs - rhs of the renewal identity for L; entry 0 is 0.
Eigen::VectorXd andreas_residual(const SolutionPath& path, const ProblemSpec& spec);

Eigen::VectorXd density_slice(const SolutionPath& path, const ProblemSpec& spec,
                              const Eigen::VectorXd& x_grid, int t_node);

}  // namespace contagion
