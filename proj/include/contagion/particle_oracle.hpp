#pragma once

#include <cstdint>

#include <Eigen/Dense>

namespace contagion {

struct ParticleConfig {
    long n_particles = 100000;
    int n_steps = 1000;
    std::uint64_t seed = 1;
    double alpha = 0.0;
    double z = 0.5;
    double t_end = 1.0;
    bool bridge = true;
};

struct ParticleRun {
    ParticleConfig config;
    Eigen::VectorXd t;       // nodes 0..n_steps
    Eigen::VectorXd L_hat;
    Eigen::VectorXd stderr_;
    int workers = 1;
};

ParticleRun simulate(const ParticleConfig& config);

}  // namespace contagion
