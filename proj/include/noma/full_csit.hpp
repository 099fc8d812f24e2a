#pragma once

#include <utility>

#include "noma/no_csit.hpp"

namespace noma {

/// Transmission mode chosen for one fading realization by the adaptive
/// full-CSIT rule. With ordered draws (x_weak <= x_strong) the modes
/// weak_only_free and none-inside-the-OMA-branch cannot trigger; they are
/// kept so the rule is total on raw inputs.
enum class TxMode {
  noma_both,
  strong_only_free,
  oma_both,
  weak_only_free,
  strong_only_fallback,
  none,
};

const char* to_string(TxMode mode);

struct StrategyDecision {
  TxMode mode = TxMode::none;
  bool active_weak = false;
  bool active_strong = false;
};

enum class Provenance { closed_form, monte_carlo, quadrature };

/// Average data rates in bits/s/Hz under minimum-instantaneous-rate
/// activation.
struct RateReport {
  double weak = 0.0;
  double strong = 0.0;
  double sum = 0.0;
  Strategy strategy = Strategy::noma;
  Provenance provenance = Provenance::closed_form;
};

/// E[R_weak] with NOMA: (l1 + l2) alpha(gamma, l1 + l2, rho) / log 2.
double rate_noma_weak(const Scenario& s);

/// Strong-user NOMA rate accrued while the weak user is inactive
/// (x_weak < gamma/rho, interference-free transmission).
double rate_noma_strong_solo(const Scenario& s);

/// Strong-user NOMA rate accrued while both users are active; handles the
/// equal-power pole analytically.
double rate_noma_strong_paired(const Scenario& s);

/// E[R_strong] with NOMA = solo + paired parts.
double rate_noma_strong(const Scenario& s);

/// (weak, strong) OMA average rates; strong >= weak.
std::pair<double, double> rate_oma(const Scenario& s);

/// Per-realization mode selection maximizing the number of active users:
/// NOMA when both users clear their NOMA constraints, interference-free
/// strong-user transmission when only it can be active, OMA when NOMA
/// fails for the strong user but both clear the OMA threshold, otherwise
/// single-user fallbacks. Requires 0 <= x_weak <= x_strong.
StrategyDecision decide_noma_a(const Scenario& s, double x_weak, double x_strong);

/// Weak-user average rate under the adaptive rule.
double rate_noma_a_weak(const Scenario& s);

/// Strong-user adaptive rate accrued in the region where it falls back to
/// interference-free transmission between the NOMA and OMA thresholds.
double rate_noma_a_strong_fallback(const Scenario& s);

/// Strong-user adaptive rate accrued in the OMA branch.
double rate_noma_a_strong_oma(const Scenario& s);

/// Strong-user average rate under the adaptive rule:
/// rate_noma_strong + fallback + OMA parts.
double rate_noma_a_strong(const Scenario& s);

/// (weak, strong) average rates under the adaptive rule.
std::pair<double, double> rate_noma_a(const Scenario& s);

RateReport rate_report(const Scenario& s, Strategy strategy);

/// P(both users active) for the given strategy. The adaptive strategy
/// dominates both pure strategies pointwise.
double activity_probability(const Scenario& s, Strategy strategy);

/// High-SNR asymptote of the strong-user NOMA rate (it saturates);
/// equal-power case via the analytic limit.
double rate_noma_strong_asymptote(const Scenario& s);

/// rate(rho) ~ slope * ln(rho) + intercept for large rho, slope in
/// bits/s/Hz per unit of ln(rho). For the saturating strong-user NOMA
/// rate the slope is 0 and intercept_or_asymptote carries the asymptote.
/// Sum intercepts are fitted numerically on rho in [1e5, 1e6]; per-user
/// intercepts are analytic.
struct AsymptoteReport {
  double slope = 0.0;
  double intercept_or_asymptote = 0.0;
};

AsymptoteReport asymptotics(const Scenario& s, Strategy strategy, MetricTarget target);

}  // namespace noma
