#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "noma/full_csit.hpp"

namespace noma {

/// Mean and its standard error from n draws; deterministic in seed and in
/// the number of worker threads.
struct McEstimate {
  double mean = 0.0;
  double std_error = 0.0;
  std::int64_t n = 0;
  std::uint64_t seed = 0;
};

/// Partition of the K ordered users into a NOMA subset (joint slots) and
/// OMA users (dedicated slots). Over a K-slot cycle the M NOMA users share
/// M slots at K/M times their power and each OMA user gets one slot at K
/// times its power, so every strategy spends the same energy per cycle.
/// Per-slot SINR thresholds scale with the duty cycle:
/// (1+gamma)^(K/M) - 1 for the NOMA subset, (1+gamma)^K - 1 for OMA users.
struct MixedStrategy {
  std::vector<int> noma_set;  // indices into the ordered draw, ascending
  std::vector<int> oma_set;

  static MixedStrategy pure_noma(int k);
  static MixedStrategy pure_oma(int k);
  /// Canonical candidate list: pure NOMA, all (K-1)-user-NOMA mixed
  /// partitions, pure OMA.
  static std::vector<MixedStrategy> candidates(int k);

  void validate(int k) const;  // throws std::invalid_argument
  std::string label() const;   // "noma", "oma", or "mixed-noma-<idx...>"
  bool is_pure_noma(int k) const;
  bool is_pure_oma() const;
};

/// Power-time bookkeeping of one strategy over its K-slot cycle.
struct CycleAccounting {
  double noma_power_scale = 1.0;
  int noma_active_slots = 0;
  double oma_power_scale = 1.0;
  int oma_active_slots = 1;
  int cycle_slots = 0;
};
CycleAccounting cycle_accounting(const MixedStrategy& strategy, int k);

struct McPerUser {
  std::vector<McEstimate> user;  // ordered, weakest first
  McEstimate sum;
};

struct McRates {
  std::vector<McEstimate> user;
  McEstimate sum;
  McEstimate all_active;
};

/// Fixed-rate (no-CSIT) throughput per user in bits/s/Hz. SIC decodes in
/// descending received power; a failure anywhere fails all weaker users.
McPerUser mc_throughput(const KScenario& s, const MixedStrategy& strategy,
                        std::int64_t n, std::uint64_t seed, int threads = 0);

/// Two-user wrapper; Strategy::noma_adaptive first applies the
/// large-scale selection rule.
McPerUser mc_throughput(const Scenario& s, Strategy strategy, std::int64_t n,
                        std::uint64_t seed, int threads = 0);

/// Minimum-rate activation (full CSIT) under a fixed strategy: active
/// users transmit at instantaneous capacity, others stay silent.
McRates mc_rate_full_csit(const KScenario& s, const MixedStrategy& strategy,
                          std::int64_t n, std::uint64_t seed, int threads = 0);

/// Per-draw adaptive strategy choice maximizing the number of active
/// users (ties: larger sum rate, then fewer OMA slots). For K = 2 this
/// reduces exactly to decide_noma_a.
McRates mc_rate_full_csit_adaptive(const KScenario& s, std::int64_t n,
                                   std::uint64_t seed, int threads = 0);

/// Two-user wrapper over the fixed strategies and the adaptive rule.
McRates mc_rate_full_csit(const Scenario& s, Strategy strategy, std::int64_t n,
                          std::uint64_t seed, int threads = 0);

/// All four two-user non-outage frequencies from one pass over the draws.
struct McPhis {
  McEstimate noma_weak, noma_strong, oma_weak, oma_strong;
};
McPhis mc_phis(const Scenario& s, std::int64_t n, std::uint64_t seed, int threads = 0);

/// Every two-user closed form's empirical counterpart from a single pass
/// over shared draws: the four phis, per-user average rates under the
/// three strategies, and the adaptive both-active frequency.
struct McTwoUserSummary {
  McPhis phis;
  McEstimate rate_noma_weak, rate_noma_strong;
  McEstimate rate_oma_weak, rate_oma_strong;
  McEstimate rate_noma_a_weak, rate_noma_a_strong;
  McEstimate activity_noma_a;
};
McTwoUserSummary mc_two_user_summary(const Scenario& s, std::int64_t n,
                                     std::uint64_t seed, int threads = 0);

/// Sum-throughput-maximizing strategy for K users estimated by Monte
/// Carlo (closed forms exist only for K = 2). Ties prefer the earlier
/// candidate (pure NOMA first).
MixedStrategy mc_select_no_csit(const KScenario& s, std::int64_t n,
                                std::uint64_t seed, int threads = 0);

}  // namespace noma
