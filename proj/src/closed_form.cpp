#include "contagion/closed_form.hpp"

#include <cmath>
#include <numbers>
#include <stdexcept>

#include "contagion/kernels.hpp"

namespace contagion {

namespace {
constexpr double kTwoPi = 2.0 * std::numbers::pi;

void require_positive_z(double z) {
    if (!(z > 0.0)) throw std::domain_error("start point z must be positive");
}
}  // namespace

double g0(double t, double z) { return g_const_drift(t, z, 0.0); }

double nu0(double t, double z) {
    require_positive_z(z);
    if (t <= 0.0) return 0.0;
    return -std::exp(-z * z / (2.0 * t)) / std::sqrt(kTwoPi * t);
}

double omega0(double t, double t_prime, double z) {
    require_positive_z(z);
    if (t_prime > t) throw std::domain_error("omega0 needs t' <= t");
    if (t_prime == t) return 0.0;
    const double upper = t_prime > 0.0 ? normal_cdf(z / std::sqrt(t_prime)) : 1.0;
    return 2.0 * (upper - normal_cdf(z / std::sqrt(t)));
}

double g_const_drift(double t, double z, double mu) {
    require_positive_z(z);
    if (t <= 0.0) return 0.0;
    const double a = z + mu * t;
    return z * std::exp(-a * a / (2.0 * t)) / std::sqrt(kTwoPi * t * t * t);
}

double g0_t(double t, double z) {
    if (t <= 0.0) return 0.0;
    return g0(t, z) * (z * z / (2.0 * t * t) - 1.5 / t);
}

double nu0_t(double t, double z) {
    if (t <= 0.0) return 0.0;
    return nu0(t, z) * (z * z / (2.0 * t * t) - 0.5 / t);
}

}  // namespace contagion
