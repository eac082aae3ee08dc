#pragma once

namespace contagion {

// First-passage quantities of z + W at the origin. All vanish at t = 0.
double g0(double t, double z);
double nu0(double t, double z);
double omega0(double t, double t_prime, double z);

/// First-passage density of z + W + mu t at the origin.
double g_const_drift(double t, double z, double mu);

// Time derivatives of g0 and nu0.
double g0_t(double t, double z);
double nu0_t(double t, double z);

}  // namespace contagion
