#include "contagion/kernels.hpp"

#include <cmath>
#include <numbers>
#include <stdexcept>

namespace contagion {

namespace {
constexpr double kTwoPi = 2.0 * std::numbers::pi;
constexpr double kInvSqrt2Pi = 0.5 * std::numbers::inv_sqrtpi * std::numbers::sqrt2;

void require_positive_time(double t) {
    if (!(t > 0.0)) throw std::domain_error("time must be positive");
}

// d/dt of xi(t, t') by central differences.
double xi_t(const Kernel2& xi, double t, double tp) {
    const double h = 1e-6 * std::max(1.0, t);
    return (xi(t + h, tp) - xi(t - h, tp)) / (2.0 * h);
}
}  // namespace

GridSpec::GridSpec(double t_end_, int n_steps_) : t_end(t_end_), n_steps(n_steps_) {
    if (!(t_end > 0.0) || !std::isfinite(t_end)) throw std::invalid_argument("t_end must be positive");
    if (n_steps < 2) throw std::invalid_argument("n_steps must be at least 2");
    delta = t_end / n_steps;
}

double normal_cdf(double x) { return 0.5 * std::erfc(-x * std::numbers::sqrt2 / 2.0); }

double heat_kernel(double t, double y, double z) {
    require_positive_time(t);
    const double d = y - z;
    return std::exp(-d * d / (2.0 * t)) / std::sqrt(kTwoPi * t);
}

double xi_kernel(double t, double t_prime, double psi) {
    if (t < t_prime) throw std::domain_error("xi_kernel needs t >= t'");
    if (t == t_prime) return 1.0;
    return std::exp(-psi * psi / (2.0 * (t - t_prime)));
}

double lemma1_lhs(const Kernel2& xi, const Weight& nu, double t, int quad_n) {
    require_positive_time(t);
    auto q = [&](double s) {
        const double top = std::sqrt(s);
        const double du = top / quad_n;
        double acc = 0.0;
        for (int k = 0; k < quad_n; ++k) {
            const double u = (k + 0.5) * du;
            const double tp = s - u * u;
            acc += xi(s, tp) * nu(tp);
        }
        return 2.0 * kInvSqrt2Pi * acc * du;
    };
    const double h = t / 1e4;
    return (q(t + h) - q(t - h)) / (2.0 * h);
}

double lemma1_rhs_form1(const Kernel2& xi, const Weight& nu, double t, int quad_n) {
    require_positive_time(t);
    const double top = std::sqrt(t);
    const double du = top / quad_n;
    const double nut = nu(t);
    double acc = 0.0;
    for (int k = 0; k < quad_n; ++k) {
        const double u = (k + 0.5) * du;
        const double tau = u * u;
        const double tp = t - tau;
        const double bracket = nut - (xi(t, tp) - 2.0 * tau * xi_t(xi, t, tp)) * nu(tp);
        acc += bracket / tau;
    }
    return nut / std::sqrt(kTwoPi * t) + kInvSqrt2Pi * acc * du;
}

double lemma1_rhs_form2(const Kernel2& xi, const Weight& nu, double t, int quad_n) {
    require_positive_time(t);
    auto inner = [&](double tp) {
        return (xi(t, tp) - 2.0 * (t - tp) * xi_t(xi, t, tp)) * nu(tp);
    };
    const double top = std::sqrt(t);
    const double du = top / quad_n;
    double acc = 0.0;
    for (int k = 0; k < quad_n; ++k) {
        const double u = (k + 0.5) * du;
        const double tp = t - u * u;
        const double h = 1e-5 * std::max(1.0, t);
        acc += (inner(tp + h) - inner(tp - h)) / (2.0 * h);
    }
    return 2.0 * kInvSqrt2Pi * acc * du;
}

}  // namespace contagion
