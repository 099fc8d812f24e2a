#pragma once

#include <optional>

#include "noma/channel_model.hpp"

namespace noma {

enum class Strategy { oma, noma, noma_adaptive };

const char* to_string(Strategy s);

/// Per-user throughput in bits/s/Hz under fixed-rate transmission.
struct ThroughputReport {
  double weak = 0.0;
  double strong = 0.0;
  double sum = 0.0;
  Strategy strategy = Strategy::noma;
};

/// m(gamma) = l1/(l1 + l2 g) + l2/(l2 + l1 g): the common high-SNR limit
/// of the NOMA non-outage probabilities; m(1) = 1 and m decreases in gamma.
double noma_high_snr_limit(const Scenario& s);

/// P(strong user not in outage with NOMA): both-user SIC constraint
/// x_strong >= (g/rho)(1 + rho x_weak).
double phi_noma_strong(const Scenario& s);

/// P(weak user not in outage with NOMA): the strong-user constraint plus
/// x_weak >= g/rho. Never exceeds phi_noma_strong.
double phi_noma_weak(const Scenario& s);

/// P(x_strong >= gamma_tilde / (2 rho)).
double phi_oma_strong(const Scenario& s);

/// P(x_weak >= gamma_tilde / (2 rho)).
double phi_oma_weak(const Scenario& s);

/// T_k = phi_k * log2(1 + gamma). Strategy noma_adaptive reports the
/// throughput of the selected strategy.
ThroughputReport throughput(const Scenario& s, Strategy strategy);

/// Closed form of phi_noma_weak / phi_oma_weak; strictly decreasing in rho
/// when p2 > p1, with limit m(gamma).
double ga_ratio(const Scenario& s);

enum class MetricTarget { weak, strong, sum };

/// Smallest rho above which the OMA throughput dominates the NOMA
/// throughput for the given target, found by a log-spaced scan of
/// [1e-6, 1e12] (last sign change) refined by bisection to 1e-6 relative.
/// Returns 0 when OMA dominates over the whole range and nullopt when no
/// finite crossover exists.
std::optional<double> rho_min(const Scenario& s, MetricTarget target);

/// Sum-throughput-maximizing choice between OMA and NOMA from the
/// large-scale parameters alone. Ties go to NOMA (both users active every
/// slot at equal throughput).
Strategy select_no_csit(const Scenario& s);

}  // namespace noma
