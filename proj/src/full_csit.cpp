#include "noma/full_csit.hpp"

#include <cmath>
#include <stdexcept>

#include "noma/math_kernels.hpp"

namespace noma {

namespace {

constexpr double kLn2 = 0.6931471805599453094;

// Relative lambda spread below which the 1/(l1 - l2) expressions switch to
// their analytic limits.
constexpr double kEqualLambdaTol = 1e-6;

bool lambdas_equal(const Scenario& s) {
  return std::abs(s.lambda1() - s.lambda2()) < kEqualLambdaTol * s.lambda1();
}

double psi(double li, double lj, double gamma, double rho, double t) {
  const double c = li + lj * gamma;
  return li * std::exp(-lj * gamma / rho) / c * std::exp(-c * t);
}

}  // namespace

const char* to_string(TxMode mode) {
  switch (mode) {
    case TxMode::noma_both: return "noma_both";
    case TxMode::strong_only_free: return "strong_only_free";
    case TxMode::oma_both: return "oma_both";
    case TxMode::weak_only_free: return "weak_only_free";
    case TxMode::strong_only_fallback: return "strong_only_fallback";
    case TxMode::none: return "none";
  }
  return "?";
}

double rate_noma_weak(const Scenario& s) {
  const double l = s.lambda1() + s.lambda2();
  return l * alpha_integral(s.gamma(), l, s.rho()) / kLn2;
}

double rate_noma_strong_solo(const Scenario& s) {
  const double l1 = s.lambda1(), l2 = s.lambda2(), g = s.gamma(), rho = s.rho();
  return (l2 * (-std::expm1(-l1 * g / rho)) * alpha_integral(g, l2, rho) +
          l1 * (-std::expm1(-l2 * g / rho)) * alpha_integral(g, l1, rho)) /
         kLn2;
}

namespace {

// Both-active part of the strong-user NOMA rate, one (i, j) ordering. The
// log(1+gamma) piece reuses psi; the E1 pair carries the 1/(li - lj) pole
// removed analytically in the equal-power branch below.
double paired_term(double li, double lj, double g, double rho) {
  const double t1 = psi(li, lj, g, rho, g / rho) * std::log1p(g);
  const double zj = lj * (1.0 + g) * (1.0 + g) / rho;
  const double wij = (li + lj * g) * (1.0 + g) / rho;
  const double t2 = li / (li - lj) *
                    (exp_e1_product((lj - (li - lj) * g) / rho, zj) -
                     exp_e1_product(li / rho, wij));
  return t1 + t2;
}

double paired_sum_equal_lambda(const Scenario& s) {
  const double l = s.lambda1(), g = s.gamma(), rho = s.rho();
  const double z = l * (1.0 + g) * (1.0 + g) / rho;
  const double t1 = 2.0 * psi(l, l, g, rho, g / rho) * std::log1p(g);
  const double bracket = std::exp(l / rho - z) / z - exp_e1_product(l / rho, z);
  return t1 + 2.0 * l * (1.0 + g) / rho * bracket;
}

}  // namespace

double rate_noma_strong_paired(const Scenario& s) {
  if (lambdas_equal(s)) return paired_sum_equal_lambda(s) / kLn2;
  const double l1 = s.lambda1(), l2 = s.lambda2();
  return (paired_term(l1, l2, s.gamma(), s.rho()) +
          paired_term(l2, l1, s.gamma(), s.rho())) /
         kLn2;
}

double rate_noma_strong(const Scenario& s) {
  return rate_noma_strong_solo(s) + rate_noma_strong_paired(s);
}

std::pair<double, double> rate_oma(const Scenario& s) {
  const double l1 = s.lambda1(), l2 = s.lambda2(), gt = s.gamma_tilde();
  const double r2 = 2.0 * s.rho();
  const double weak = (l1 + l2) * alpha_integral(gt, l1 + l2, r2) / (2.0 * kLn2);
  const double strong = (l1 * alpha_integral(gt, l1, r2) + l2 * alpha_integral(gt, l2, r2) -
                         (l1 + l2) * alpha_integral(gt, l1 + l2, r2)) /
                        (2.0 * kLn2);
  return {weak, strong};
}

StrategyDecision decide_noma_a(const Scenario& s, double x_weak, double x_strong) {
  if (!(x_weak >= 0.0) || x_strong < x_weak)
    throw std::domain_error("decide_noma_a: requires 0 <= x_weak <= x_strong");
  const double tn = s.gamma() / s.rho();
  const double to = s.gamma_tilde() / (2.0 * s.rho());
  if (x_weak >= tn && x_strong >= tn * (1.0 + s.rho() * x_weak))
    return {TxMode::noma_both, true, true};
  if (x_weak < tn && x_strong >= tn)
    return {TxMode::strong_only_free, false, true};
  if (x_weak >= tn) {
    // NOMA failed for the strong user; try OMA.
    if (x_weak >= to) {
      if (x_strong >= to) return {TxMode::oma_both, true, true};
      return {TxMode::weak_only_free, true, false};
    }
    if (x_strong >= tn) return {TxMode::strong_only_fallback, false, true};
    return {TxMode::none, false, false};
  }
  return {TxMode::none, false, false};
}

namespace {

double chi_term(double li, double lj, double g, double gt, double rho) {
  const double c = li + lj * g;
  const double e = std::exp(-lj * g / rho);
  return li * e * alpha_integral(g, c, rho) +
         0.5 * li * (alpha_integral(gt, li + lj, 2.0 * rho) -
                     e * alpha_integral(gt, c, 2.0 * rho));
}

// delta(t) = exp(-(l1+l2) t / rho) log(1+t)
//          + exp((l1+l2)/rho) E1((l1+l2)(t+1)/rho)
double delta_fn(const Scenario& s, double t) {
  const double l = s.lambda1() + s.lambda2();
  const double rho = s.rho();
  return std::exp(-l * t / rho) * std::log1p(t) +
         exp_e1_product(l / rho, l * (t + 1.0) / rho);
}

// Antiderivative block of the fallback region for one (i, j) ordering,
// used as mu(gamma) - mu(gamma_tilde/2).
double mu_fn(double li, double lj, double g, double rho, double t) {
  const double c = li + lj * g;
  double r = exp_e1_product((lj - li * t) / rho, lj * (1.0 + t) / rho);
  r -= exp_e1_product((li + lj) / rho, (li + lj) * (1.0 + t) / rho);
  r -= li / c * std::exp(-(lj * g + c * t) / rho) * std::log1p(g + g * t);
  r -= li / c * exp_e1_product((-lj * g + c * (1.0 + g) / g) / rho,
                               c * (t + (1.0 + g) / g) / rho);
  const double u = lj * (1.0 + g * (1.0 + t)) / rho;
  r -= exp_e1_product((lj - li * t) / rho, u);
  r += exp_e1_product((lj + li * (1.0 + 1.0 / g)) / rho, u * (1.0 + li / (lj * g)));
  return r;
}

double omega_fn(double li, double lj, double g, double gt, double rho) {
  const double c = li + lj * g;
  const double r2 = 2.0 * rho;
  const double edge = 1.0 + 2.0 * g + g * gt;  // rate argument at the region corner
  double r = li * alpha_integral(gt, li + lj, r2);
  r -= li / c * std::exp(-(2.0 * lj * g + c * gt) / r2) * std::log(edge);
  r -= li / c * exp_e1_product((-2.0 * lj * g * g + c * (1.0 + 2.0 * g)) / (2.0 * g * rho),
                               c * (g * gt + 1.0 + 2.0 * g) / (2.0 * g * rho));
  r += exp_e1_product((lj - li * gt) / r2, lj * (1.0 + gt) / r2);
  r -= exp_e1_product((li + lj) / r2, (li + lj) * (1.0 + gt) / r2);
  r -= exp_e1_product((lj - li * gt) / r2, lj * edge / r2);
  r += exp_e1_product((lj * g + li * (1.0 + 2.0 * g)) / (2.0 * g * rho),
                      c * edge / (2.0 * g * rho));
  return r;
}

}  // namespace

double rate_noma_a_weak(const Scenario& s) {
  const double g = s.gamma(), gt = s.gamma_tilde(), rho = s.rho();
  return (chi_term(s.lambda1(), s.lambda2(), g, gt, rho) +
          chi_term(s.lambda2(), s.lambda1(), g, gt, rho)) /
         kLn2;
}

double rate_noma_a_strong_fallback(const Scenario& s) {
  const double g = s.gamma(), gt = s.gamma_tilde(), rho = s.rho();
  const double l1 = s.lambda1(), l2 = s.lambda2();
  const double half_gt = 0.5 * gt;
  double r = delta_fn(s, g) - delta_fn(s, half_gt);
  r += mu_fn(l1, l2, g, rho, g) - mu_fn(l1, l2, g, rho, half_gt);
  r += mu_fn(l2, l1, g, rho, g) - mu_fn(l2, l1, g, rho, half_gt);
  return r / kLn2;
}

double rate_noma_a_strong_oma(const Scenario& s) {
  const double g = s.gamma(), gt = s.gamma_tilde(), rho = s.rho();
  return (omega_fn(s.lambda1(), s.lambda2(), g, gt, rho) +
          omega_fn(s.lambda2(), s.lambda1(), g, gt, rho)) /
         (2.0 * kLn2);
}

double rate_noma_a_strong(const Scenario& s) {
  return rate_noma_strong(s) + rate_noma_a_strong_fallback(s) + rate_noma_a_strong_oma(s);
}

std::pair<double, double> rate_noma_a(const Scenario& s) {
  return {rate_noma_a_weak(s), rate_noma_a_strong(s)};
}

RateReport rate_report(const Scenario& s, Strategy strategy) {
  RateReport r;
  r.strategy = strategy;
  switch (strategy) {
    case Strategy::noma:
      r.weak = rate_noma_weak(s);
      r.strong = rate_noma_strong(s);
      break;
    case Strategy::oma: {
      const auto [w, st] = rate_oma(s);
      r.weak = w;
      r.strong = st;
      break;
    }
    case Strategy::noma_adaptive: {
      const auto [w, st] = rate_noma_a(s);
      r.weak = w;
      r.strong = st;
      break;
    }
  }
  r.sum = r.weak + r.strong;
  return r;
}

double activity_probability(const Scenario& s, Strategy strategy) {
  switch (strategy) {
    case Strategy::noma:
      return phi_noma_weak(s);  // the weak user is the binding constraint
    case Strategy::oma:
      return phi_oma_weak(s);
    case Strategy::noma_adaptive: {
      // NOMA region plus the OMA rescue region
      // {x_weak >= gamma_tilde/(2 rho), x_weak <= x_strong < (g/rho)(1 + rho x_weak)}.
      const double t = s.gamma_tilde() / (2.0 * s.rho());
      const double oma_branch =
          std::exp(-(s.lambda1() + s.lambda2()) * t) -
          psi(s.lambda1(), s.lambda2(), s.gamma(), s.rho(), t) -
          psi(s.lambda2(), s.lambda1(), s.gamma(), s.rho(), t);
      return phi_noma_weak(s) + oma_branch;
    }
  }
  return 0.0;
}

double rate_noma_strong_asymptote(const Scenario& s) {
  const double l1 = s.lambda1(), l2 = s.lambda2(), g = s.gamma();
  const double head = noma_high_snr_limit(s) * std::log1p(g);
  if (lambdas_equal(s)) return (head + 2.0 / (1.0 + g)) / kLn2;
  const double tail = (l1 * std::log((l1 + l2 * g) / (l2 * (1.0 + g))) -
                       l2 * std::log((l2 + l1 * g) / (l1 * (1.0 + g)))) /
                      (l1 - l2);
  return (head + tail) / kLn2;
}

namespace {

double fitted_intercept(const Scenario& s, Strategy strategy, double slope) {
  const double rho_ref = 1e6;
  const RateReport r = rate_report(s.with_rho(rho_ref), strategy);
  return r.sum - slope * std::log(rho_ref);
}

}  // namespace

AsymptoteReport asymptotics(const Scenario& s, Strategy strategy, MetricTarget target) {
  const double l1 = s.lambda1(), l2 = s.lambda2(), g = s.gamma();
  const double m = noma_high_snr_limit(s);
  const double lsum = std::log(l1 + l2);
  const double c12 = l1 + l2 * g, c21 = l2 + l1 * g;

  if (target == MetricTarget::sum) {
    // Same slope for all three strategies; the constant term does not
    // reduce to a compact expression, so it is fitted on the closed form.
    AsymptoteReport r;
    r.slope = 1.0 / kLn2;
    r.intercept_or_asymptote = fitted_intercept(s, strategy, r.slope);
    return r;
  }

  AsymptoteReport r;
  if (target == MetricTarget::weak) {
    switch (strategy) {
      case Strategy::noma:
        r.slope = 1.0 / kLn2;
        r.intercept_or_asymptote = -(lsum + kEulerGamma) / kLn2;
        break;
      case Strategy::oma:
        r.slope = 0.5 / kLn2;
        r.intercept_or_asymptote = (kLn2 - lsum - kEulerGamma) / (2.0 * kLn2);
        break;
      case Strategy::noma_adaptive:
        r.slope = (1.0 + m) / (2.0 * kLn2);
        r.intercept_or_asymptote = -(1.0 + m) * kEulerGamma / (2.0 * kLn2) +
                                   0.5 * (1.0 - m) - lsum / (2.0 * kLn2) -
                                   l1 * std::log(c12) / (2.0 * kLn2 * c12) -
                                   l2 * std::log(c21) / (2.0 * kLn2 * c21);
        break;
    }
    return r;
  }

  // strong user
  switch (strategy) {
    case Strategy::noma:
      r.slope = 0.0;
      r.intercept_or_asymptote = rate_noma_strong_asymptote(s);
      break;
    case Strategy::oma:
      r.slope = 0.5 / kLn2;
      r.intercept_or_asymptote =
          (kLn2 + lsum - std::log(l1) - std::log(l2) - kEulerGamma) / (2.0 * kLn2);
      break;
    case Strategy::noma_adaptive: {
      r.slope = (1.0 - m) / (2.0 * kLn2);
      const double sigma12 = l1 / c12 * std::log(c12 / g) + std::log((l1 + l2) / l2) +
                             std::log(l2 * g / c12);
      const double sigma21 = l2 / c21 * std::log(c21 / g) + std::log((l1 + l2) / l1) +
                             std::log(l1 * g / c21);
      r.intercept_or_asymptote = rate_noma_strong_asymptote(s) +
                                 (1.0 - m) * (kLn2 - kEulerGamma) / (2.0 * kLn2) -
                                 lsum / (2.0 * kLn2) + (sigma12 + sigma21) / (2.0 * kLn2);
      break;
    }
  }
  return r;
}

}  // namespace noma
