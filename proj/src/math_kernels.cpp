#include "noma/math_kernels.hpp"

#include <cmath>
#include <stdexcept>

namespace noma {

void EvalPolicy::validate() const {
  if (!(series_cutoff > 0.0))
    throw std::invalid_argument("EvalPolicy: series_cutoff must be > 0");
  if (!(rel_tol > 0.0) || rel_tol > 1e-6)
    throw std::invalid_argument("EvalPolicy: rel_tol must be in (0, 1e-6]");
  if (max_terms < 20)
    throw std::invalid_argument("EvalPolicy: max_terms must be >= 20");
}

namespace {

// E1(x) = -gamma_E - log(x) + sum_{n>=1} (-1)^{n+1} x^n / (n n!) for small x.
double e1_series(double x, const EvalPolicy& p) {
  const double base = -kEulerGamma - std::log(x);
  double sum = 0.0;
  double term = 1.0;  // x^n / n!
  // stop a safety margin below rel_tol: the alternating tail is bounded by
  // the first dropped term
  for (int n = 1; n <= p.max_terms; ++n) {
    term *= x / n;
    const double inc = ((n & 1) ? term : -term) / n;
    sum += inc;
    if (std::abs(inc) <= 0.05 * p.rel_tol * std::abs(base + sum)) break;
  }
  return base + sum;
}

// Modified Lentz evaluation of the continued fraction
// exp(x) E1(x) = 1/(x+1- 1/(x+3- 4/(x+5- 9/(...)))) for x away from 0.
double scaled_e1_lentz(double x, const EvalPolicy& p) {
  constexpr double kTiny = 1e-300;
  double b = x + 1.0;
  double c = 1.0 / kTiny;
  double d = 1.0 / b;
  double h = d;
  for (int i = 1; i <= p.max_terms; ++i) {
    const double a = -static_cast<double>(i) * i;
    b += 2.0;
    d = a * d + b;
    if (std::abs(d) < kTiny) d = kTiny;
    c = b + a / c;
    if (std::abs(c) < kTiny) c = kTiny;
    d = 1.0 / d;
    const double delta = c * d;
    h *= delta;
    if (std::abs(delta - 1.0) < 0.05 * p.rel_tol) break;
  }
  return h;
}

void require_positive(double x, const char* who) {
  if (!(x > 0.0)) throw std::domain_error(std::string(who) + ": argument must be > 0");
}

}  // namespace

double exp_integral_e1(double x, const EvalPolicy& policy) {
  require_positive(x, "exp_integral_e1");
  if (x < policy.series_cutoff) return e1_series(x, policy);
  return std::exp(-x) * scaled_e1_lentz(x, policy);
}

double scaled_e1(double x, const EvalPolicy& policy) {
  require_positive(x, "scaled_e1");
  if (x < policy.series_cutoff) return std::exp(x) * e1_series(x, policy);
  return scaled_e1_lentz(x, policy);
}

double exp_e1_product(double c, double x, const EvalPolicy& policy) {
  return std::exp(c - x) * scaled_e1(x, policy);
}

double alpha_integral(double gamma, double lambda, double rho,
                      const EvalPolicy& policy) {
  require_positive(gamma, "alpha_integral");
  require_positive(lambda, "alpha_integral");
  require_positive(rho, "alpha_integral");
  const double t = lambda * gamma / rho;
  const double arg = (gamma + 1.0) * lambda / rho;
  return (std::exp(-t) * std::log1p(gamma) + exp_e1_product(lambda / rho, arg, policy)) / lambda;
}

double laplace_shifted_e1(double p, double a, double b, double s_lower,
                          const EvalPolicy& policy) {
  require_positive(p, "laplace_shifted_e1");
  require_positive(a, "laplace_shifted_e1");
  require_positive(b, "laplace_shifted_e1");
  if (s_lower < 0.0) throw std::domain_error("laplace_shifted_e1: S must be >= 0");
  const double edge = b + a * s_lower;
  const double first = exp_e1_product(-p * s_lower, edge, policy);
  const double second = exp_e1_product(b * p / a, edge * (1.0 + p / a), policy);
  return (first - second) / p;
}

}  // namespace noma
