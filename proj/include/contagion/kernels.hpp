#pragma once

#include <functional>

namespace contagion {

/// Uniform time grid t_n = n * delta, n = 0..n_steps.
struct GridSpec {
    double t_end;
    int n_steps;
    double delta;

    GridSpec(double t_end, int n_steps);

    double t(int n) const { return n * delta; }
    int size() const { return n_steps + 1; }
};

double normal_cdf(double x);

/// exp(-(y-z)^2/(2t)) / sqrt(2 pi t)
double heat_kernel(double t, double y, double z);

/// exp(-psi^2/(2(t-t'))), equal to 1 on the diagonal.
double xi_kernel(double t, double t_prime, double psi);

using Kernel2 = std::function<double(double, double)>;
using Weight = std::function<double(double)>;

// Three evaluations of d/dt int_0^t xi(t,t') nu(t') / sqrt(2 pi (t-t')) dt'.
// All quadratures are midpoint rules in u = sqrt(t - t').
double lemma1_lhs(const Kernel2& xi, const Weight& nu, double t, int quad_n);
double lemma1_rhs_form1(const Kernel2& xi, const Weight& nu, double t, int quad_n);
// Valid for nu(0) = 0.
double lemma1_rhs_form2(const Kernel2& xi, const Weight& nu, double t, int quad_n);

}  // namespace contagion
