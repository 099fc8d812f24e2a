#include "noma/no_csit.hpp"

#include <cmath>
#include <stdexcept>

namespace noma {

namespace {

// psi_{i,j}(t) = lambda_i exp(-lambda_j g / rho) / (lambda_i + lambda_j g)
//              * exp(-(lambda_i + lambda_j g) t)
double psi(double li, double lj, double gamma, double rho, double t) {
  const double c = li + lj * gamma;
  return li * std::exp(-lj * gamma / rho) / c * std::exp(-c * t);
}

double phi_pair(const Scenario& s, double t) {
  return psi(s.lambda1(), s.lambda2(), s.gamma(), s.rho(), t) +
         psi(s.lambda2(), s.lambda1(), s.gamma(), s.rho(), t);
}

double bits_per_symbol(const Scenario& s) { return std::log2(1.0 + s.gamma()); }

}  // namespace

const char* to_string(Strategy s) {
  switch (s) {
    case Strategy::oma: return "oma";
    case Strategy::noma: return "noma";
    case Strategy::noma_adaptive: return "noma_a";
  }
  return "?";
}

double noma_high_snr_limit(const Scenario& s) {
  const double l1 = s.lambda1(), l2 = s.lambda2(), g = s.gamma();
  return l1 / (l1 + l2 * g) + l2 / (l2 + l1 * g);
}

double phi_noma_strong(const Scenario& s) { return phi_pair(s, 0.0); }

double phi_noma_weak(const Scenario& s) { return phi_pair(s, s.gamma() / s.rho()); }

double phi_oma_strong(const Scenario& s) {
  const double t = s.gamma_tilde() / (2.0 * s.rho());
  const double l1 = s.lambda1(), l2 = s.lambda2();
  return std::exp(-l1 * t) + std::exp(-l2 * t) - std::exp(-(l1 + l2) * t);
}

double phi_oma_weak(const Scenario& s) {
  return std::exp(-(s.lambda1() + s.lambda2()) * s.gamma_tilde() / (2.0 * s.rho()));
}

ThroughputReport throughput(const Scenario& s, Strategy strategy) {
  if (strategy == Strategy::noma_adaptive) strategy = select_no_csit(s);
  ThroughputReport r;
  r.strategy = strategy;
  const double bits = bits_per_symbol(s);
  if (strategy == Strategy::noma) {
    r.weak = phi_noma_weak(s) * bits;
    r.strong = phi_noma_strong(s) * bits;
  } else {
    r.weak = phi_oma_weak(s) * bits;
    r.strong = phi_oma_strong(s) * bits;
  }
  r.sum = r.weak + r.strong;
  return r;
}

double ga_ratio(const Scenario& s) {
  const double l1 = s.lambda1(), l2 = s.lambda2(), g = s.gamma();
  const double e = g * g / (2.0 * s.rho());
  return l1 / (l1 + l2 * g) * std::exp(-(l2 - l1) * e) +
         l2 / (l2 + l1 * g) * std::exp(-(l1 - l2) * e);
}

namespace {

double throughput_gap(const Scenario& s, MetricTarget target, double rho) {
  // OMA minus NOMA at the non-outage-probability level; the shared
  // log2(1+gamma) factor cancels.
  const Scenario sr = s.with_rho(rho);
  switch (target) {
    case MetricTarget::weak: return phi_oma_weak(sr) - phi_noma_weak(sr);
    case MetricTarget::strong: return phi_oma_strong(sr) - phi_noma_strong(sr);
    case MetricTarget::sum:
      return phi_oma_weak(sr) + phi_oma_strong(sr) - phi_noma_weak(sr) - phi_noma_strong(sr);
  }
  return 0.0;
}

constexpr double kRhoLo = 1e-6;
constexpr double kRhoHi = 1e12;
constexpr int kScanPoints = 200;
constexpr double kRhoRelTol = 1e-6;

double bisect_crossing(const Scenario& s, MetricTarget target, double lo, double hi) {
  // invariant: gap(lo) < 0 <= gap(hi)
  while (hi / lo > 1.0 + kRhoRelTol) {
    const double mid = std::sqrt(lo * hi);
    if (throughput_gap(s, target, mid) >= 0.0)
      hi = mid;
    else
      lo = mid;
  }
  return hi;
}

}  // namespace

std::optional<double> rho_min(const Scenario& s, MetricTarget target) {
  if (target == MetricTarget::weak) {
    // Work on the ratio g_A instead of the throughput difference: the
    // difference underflows to 0-0 at small rho, while the ratio stays
    // well-scaled and is monotone decreasing, crossing 1 at most once.
    if (ga_ratio(s.with_rho(kRhoLo)) <= 1.0) return 0.0;
    if (ga_ratio(s.with_rho(kRhoHi)) >= 1.0) return std::nullopt;
    double lo = kRhoLo, hi = kRhoHi;
    while (hi / lo > 1.0 + kRhoRelTol) {
      const double mid = std::sqrt(lo * hi);
      if (ga_ratio(s.with_rho(mid)) <= 1.0)
        hi = mid;
      else
        lo = mid;
    }
    return hi;
  }
  // Dominance at high SNR is guaranteed but single crossing is not: scan
  // log-spaced points and keep the last sign change.
  const double step = std::pow(kRhoHi / kRhoLo, 1.0 / (kScanPoints - 1));
  double prev_rho = kRhoLo;
  double prev_gap = throughput_gap(s, target, prev_rho);
  double last_lo = -1.0, last_hi = -1.0;
  bool any_negative = prev_gap < 0.0;
  double rho = kRhoLo;
  for (int i = 1; i < kScanPoints; ++i) {
    rho *= step;
    const double gap = throughput_gap(s, target, rho);
    if (prev_gap < 0.0 && gap >= 0.0) {
      last_lo = prev_rho;
      last_hi = rho;
    }
    any_negative = any_negative || gap < 0.0;
    prev_rho = rho;
    prev_gap = gap;
  }
  if (prev_gap < 0.0) return std::nullopt;  // not yet dominant at the scan end
  if (!any_negative) return 0.0;            // dominant over the whole range
  if (last_lo < 0.0) return std::nullopt;
  return bisect_crossing(s, target, last_lo, last_hi);
}

Strategy select_no_csit(const Scenario& s) {
  const double noma_sum = phi_noma_weak(s) + phi_noma_strong(s);
  const double oma_sum = phi_oma_weak(s) + phi_oma_strong(s);
  return noma_sum >= oma_sum ? Strategy::noma : Strategy::oma;
}

}  // namespace noma
