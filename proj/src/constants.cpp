#include "craft/constants.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "craft/error.hpp"

namespace craft {

namespace {

void check_m(double m) {
  if (!(m > 0.0 && m < 1.0)) throw Error(ErrorKind::InvalidArgument, "m must lie in (0, 1), got " + std::to_string(m));
}

void check_rho(double m, double rho) {
  const double upper = m * (1.0 - m);
  if (!(rho > 0.0 && rho < upper))
    throw Error(ErrorKind::RhoOutOfRange,
                "rho must lie in (0, m(1-m)) = (0, " + std::to_string(upper) + "), got " + std::to_string(rho));
}

// (a+b) log(a+b) - a log a - b log b
double beta_entropy_term(double a, double b) { return (a + b) * std::log(a + b) - a * std::log(a) - b * std::log(b); }

}  // namespace

FConstants compute_f_constants(double m, double rho) {
  check_m(m);
  check_rho(m, rho);
  FConstants fc;
  fc.a0 = m * m * (1.0 - m) / rho - m;
  fc.b0 = m * (1.0 - m) * (1.0 - m) / rho + m;
  fc.a1 = fc.a0 + 1.0;
  fc.b1 = fc.b0 - 1.0;
  fc.F0 = beta_entropy_term(fc.a0, fc.b0);
  fc.F1 = beta_entropy_term(fc.a1, fc.b1);
  fc.F_delta = fc.F1 - fc.F0;
  return fc;
}

double nu_point_estimate(double m, double rho, int v) {
  check_m(m);
  check_rho(m, rho);
  return m + (static_cast<double>(v) - m) * rho / (m * (1.0 - m));
}

double resolve_rho(double m, std::optional<double> rho) {
  check_m(m);
  const double r = rho ? *rho : std::max(0.01, m * (1.0 - m) - 0.01);
  check_rho(m, r);
  return r;
}

}  // namespace craft
