#include "contagion/particle_oracle.hpp"

#include <cmath>
#include <random>
#include <stdexcept>
#include <vector>

namespace contagion {

namespace {
constexpr long kBlock = 4096;
}

ParticleRun simulate(const ParticleConfig& cfg) {
    if (cfg.n_particles < 1) throw std::invalid_argument("need at least one particle");
    if (cfg.n_steps < 1) throw std::invalid_argument("need at least one step");
    if (!(cfg.z > 0.0)) throw std::invalid_argument("z must be > 0");
    if (!(cfg.t_end > 0.0)) throw std::invalid_argument("t_end must be > 0");
    if (!(cfg.alpha >= 0.0)) throw std::invalid_argument("alpha must be >= 0");

    const double dt = cfg.t_end / cfg.n_steps;
    const double sd = std::sqrt(dt);
    const long n = cfg.n_particles;
    const long blocks = (n + kBlock - 1) / kBlock;

    // one generator per block keeps results independent of how blocks are scheduled
    std::vector<std::mt19937_64> rng;
    rng.reserve(blocks);
    for (long b = 0; b < blocks; ++b) {
        std::seed_seq seq{static_cast<std::uint32_t>(cfg.seed), static_cast<std::uint32_t>(cfg.seed >> 32),
                          static_cast<std::uint32_t>(b), static_cast<std::uint32_t>(b >> 32)};
        rng.emplace_back(seq);
    }

    std::vector<double> y(n, cfg.z);
    std::vector<char> alive(n, 1);
    ParticleRun run;
    run.config = cfg;
    run.t = Eigen::VectorXd::LinSpaced(cfg.n_steps + 1, 0.0, cfg.t_end);
    run.L_hat = Eigen::VectorXd::Zero(cfg.n_steps + 1);
    run.stderr_ = Eigen::VectorXd::Zero(cfg.n_steps + 1);

    long absorbed = 0;
    double last_increment = 0.0;
    for (int k = 1; k <= cfg.n_steps; ++k) {
        const double shift = cfg.alpha * last_increment;
        long newly = 0;
        for (long b = 0; b < blocks; ++b) {
            std::normal_distribution<double> normal(0.0, sd);
            std::uniform_real_distribution<double> uniform(0.0, 1.0);
            auto& gen = rng[b];
            const long end = std::min(n, (b + 1) * kBlock);
            for (long i = b * kBlock; i < end; ++i) {
                if (!alive[i]) continue;
                const double before = y[i];
                const double after = before + normal(gen) - shift;
                bool hit = after <= 0.0;
                if (!hit && cfg.bridge) hit = uniform(gen) < std::exp(-2.0 * before * after / dt);
                y[i] = after;
                if (hit) {
                    alive[i] = 0;
                    ++newly;
                }
            }
        }
        absorbed += newly;
        last_increment = static_cast<double>(newly) / n;
        const double l = static_cast<double>(absorbed) / n;
        run.L_hat[k] = l;
        run.stderr_[k] = std::sqrt(l * (1.0 - l) / n);
    }
    return run;
}

}  // namespace contagion
