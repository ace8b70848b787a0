#pragma once

#include <optional>

namespace craft {

// Constants of the Beta-Bernoulli feature prior with mean m and variance rho.
// a_v / b_v are the posterior shape parameters after observing v in {0,1};
// F0 is the per-feature share of the new-cluster cost and F_delta the price of
// switching one feature on.
struct FConstants {
  double a0 = 0, b0 = 0, a1 = 0, b1 = 0;
  double F0 = 0, F1 = 0, F_delta = 0;

  double a(int v) const { return v ? a1 : a0; }
  double b(int v) const { return v ? b1 : b0; }
};

// Throws RhoOutOfRange unless 0 < rho < m(1-m), InvalidArgument unless 0 < m < 1.
FConstants compute_f_constants(double m, double rho);

// m + (v - m) rho / (m (1 - m)); slides from m (rho -> 0) to v (rho -> m(1-m)).
double nu_point_estimate(double m, double rho, int v);

// Unset rho resolves to max(0.01, m(1-m) - 0.01). Throws RhoOutOfRange when
// the result is not strictly inside (0, m(1-m)).
double resolve_rho(double m, std::optional<double> rho);

}  // namespace craft
