#pragma once

namespace noma {

// Euler-Mascheroni constant.
inline constexpr double kEulerGamma = 0.57721566490153286061;

/// Controls the dual-regime evaluation of the exponential integral:
/// a power series below `series_cutoff`, a modified-Lentz continued
/// fraction above it.
struct EvalPolicy {
  double series_cutoff = 1.0;
  int max_terms = 200;
  double rel_tol = 1e-12;

  void validate() const;  // throws std::invalid_argument
};

/// E1(x) = int_x^inf exp(-t)/t dt for x > 0. Strictly decreasing,
/// bounded above by exp(-x)/x. Throws std::domain_error for x <= 0.
double exp_integral_e1(double x, const EvalPolicy& policy = {});

/// exp(x) * E1(x). Finite for arbitrarily large x and bracketed by
/// 1/(x+1) < result < 1/x. Throws std::domain_error for x <= 0.
double scaled_e1(double x, const EvalPolicy& policy = {});

/// exp(c) * E1(x), evaluated as exp(c - x) * scaled_e1(x). Every closed
/// form in this project pairs a growing exponential with a decaying E1;
/// routing the pair through here keeps the product finite whenever
/// c <= x, which holds at all call sites.
double exp_e1_product(double c, double x, const EvalPolicy& policy = {});

/// alpha(gamma, lambda, rho) = int_{gamma/rho}^inf log(1 + rho x) exp(-lambda x) dx
///   = exp(-lambda gamma / rho) log(1 + gamma) / lambda
///   + exp(lambda / rho) E1((gamma + 1) lambda / rho) / lambda.
/// Positive, decreasing in gamma and in lambda. All arguments must be > 0.
double alpha_integral(double gamma, double lambda, double rho,
                      const EvalPolicy& policy = {});

/// int_S^inf exp(-p x) E1(a x + b) dx
///   = exp(-p S) E1(b + a S) / p - exp(b p / a) E1((b + a S)(1 + p / a)) / p.
/// The Laplace transform of a shifted E1 when S = 0. Requires p, a, b > 0
/// and S >= 0.
double laplace_shifted_e1(double p, double a, double b, double s_lower,
                          const EvalPolicy& policy = {});

}  // namespace noma
