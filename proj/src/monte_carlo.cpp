#include "noma/monte_carlo.hpp"

#include <algorithm>
#include <atomic>
#include <bit>
#include <cmath>
#include <stdexcept>
#include <thread>
#include <vector>

namespace noma {

namespace {

constexpr std::int64_t kBlock = 1 << 20;
constexpr int kMaxUsers = 8;
constexpr int kMaxMetrics = 16;

int resolve_threads(int threads) {
  if (threads > 0) return threads;
  const unsigned hc = std::thread::hardware_concurrency();
  return hc == 0 ? 1 : static_cast<int>(hc);
}

struct Sums {
  double s[kMaxMetrics] = {};
  double s2[kMaxMetrics] = {};
};

// Runs per_draw over [0, n) in fixed blocks; each block is summed serially
// and block partials are combined in block order, so the result is
// bit-identical for any worker count.
template <typename PerDraw>
Sums run_blocks(int n_metrics, std::int64_t n, int threads, const PerDraw& per_draw) {
  if (n_metrics > kMaxMetrics) throw std::invalid_argument("monte carlo: too many metrics");
  const std::int64_t n_blocks = (n + kBlock - 1) / kBlock;
  std::vector<Sums> partials(static_cast<std::size_t>(n_blocks));
  std::atomic<std::int64_t> next{0};

  auto worker = [&] {
    double v[kMaxMetrics] = {};
    for (;;) {
      const std::int64_t b = next.fetch_add(1);
      if (b >= n_blocks) return;
      Sums local;
      const std::int64_t lo = b * kBlock;
      const std::int64_t hi = std::min(n, lo + kBlock);
      for (std::int64_t i = lo; i < hi; ++i) {
        per_draw(static_cast<std::uint64_t>(i), v);
        for (int m = 0; m < n_metrics; ++m) {
          local.s[m] += v[m];
          local.s2[m] += v[m] * v[m];
        }
      }
      partials[static_cast<std::size_t>(b)] = local;
    }
  };

  const int nt = std::min<std::int64_t>(resolve_threads(threads), n_blocks);
  if (nt <= 1) {
    worker();
  } else {
    std::vector<std::thread> pool;
    pool.reserve(static_cast<std::size_t>(nt));
    for (int t = 0; t < nt; ++t) pool.emplace_back(worker);
    for (auto& th : pool) th.join();
  }

  Sums total;
  for (const Sums& p : partials)
    for (int m = 0; m < n_metrics; ++m) {
      total.s[m] += p.s[m];
      total.s2[m] += p.s2[m];
    }
  return total;
}

McEstimate make_estimate(double s, double s2, std::int64_t n, std::uint64_t seed) {
  McEstimate e;
  e.n = n;
  e.seed = seed;
  e.mean = s / static_cast<double>(n);
  const double var = std::max(0.0, (s2 - s * s / static_cast<double>(n)) /
                                       static_cast<double>(n - 1));
  e.std_error = std::sqrt(var / static_cast<double>(n));
  return e;
}

// Per-slot SINR threshold for a user active `active_slots` of k slots:
// (1+gamma)^(k/active_slots) - 1, computed so the pure-NOMA case is gamma
// exactly and integer exponents round identically across all call sites.
double duty_scaled_threshold(double gamma, int k, int active_slots) {
  if (active_slots == k) return gamma;
  if (k % active_slots == 0) {
    const int e = k / active_slots;
    double q = 1.0 + gamma, acc = 1.0;
    for (int i = 0; i < e; ++i) acc *= q;
    return acc - 1.0;
  }
  return std::pow(1.0 + gamma, static_cast<double>(k) / active_slots) - 1.0;
}

// Strategy constants resolved against one KScenario.
struct StrategyEval {
  std::vector<int> noma;  // ascending indices into the ordered draw
  std::vector<int> oma;
  int k = 0;
  double noma_scale = 1.0, noma_thr = 0.0, noma_slot_frac = 1.0;
  double oma_scale = 1.0, oma_thr = 0.0;
  double bits = 0.0;  // log2(1 + gamma)

  StrategyEval(const KScenario& s, const MixedStrategy& ms) {
    ms.validate(s.k());
    noma = ms.noma_set;
    oma = ms.oma_set;
    k = s.k();
    bits = std::log2(1.0 + s.gamma);
    const int m = static_cast<int>(noma.size());
    if (m > 0) {
      noma_scale = static_cast<double>(k) / m;
      noma_thr = duty_scaled_threshold(s.gamma, k, m);
      noma_slot_frac = static_cast<double>(m) / k;
    }
    oma_scale = static_cast<double>(k);
    oma_thr = duty_scaled_threshold(s.gamma, k, 1);
  }
};

// Fixed-rate SIC outcome: decode the NOMA subset strongest-first with the
// full interference of all weaker subset members; one failure fails every
// not-yet-decoded (weaker) user. OMA users decode independently.
void eval_throughput_draw(const StrategyEval& ev, const double* x, double rho,
                          double* out) {
  const int m = static_cast<int>(ev.noma.size());
  double intf[kMaxUsers];
  double acc = 0.0;
  for (int p = 0; p < m; ++p) {
    intf[p] = acc;
    acc += ev.noma_scale * rho * x[ev.noma[p]];
  }
  bool chain_ok = true;
  for (int p = m - 1; p >= 0; --p) {
    const double sinr = ev.noma_scale * rho * x[ev.noma[p]] / (1.0 + intf[p]);
    chain_ok = chain_ok && sinr >= ev.noma_thr;
    out[ev.noma[p]] = chain_ok ? ev.bits : 0.0;
  }
  for (int idx : ev.oma)
    out[idx] = (ev.oma_scale * rho * x[idx] >= ev.oma_thr) ? ev.bits : 0.0;
}

// Minimum-rate activation: a NOMA user transmits iff its capacity over the
// already-active weaker users clears the duty-scaled threshold; rates are
// normalized per slot of the K-slot cycle. Returns the active count.
int eval_rate_draw(const StrategyEval& ev, const double* x, double rho, double* out) {
  int active = 0;
  double intf = 0.0;
  for (int idx : ev.noma) {
    const double sig = ev.noma_scale * rho * x[idx];
    const double sinr = sig / (1.0 + intf);
    if (sinr >= ev.noma_thr) {
      out[idx] = ev.noma_slot_frac * std::log2(1.0 + sinr);
      intf += sig;
      ++active;
    } else {
      out[idx] = 0.0;
    }
  }
  for (int idx : ev.oma) {
    const double snr = ev.oma_scale * rho * x[idx];
    if (snr >= ev.oma_thr) {
      out[idx] = std::log2(1.0 + snr) / ev.k;
      ++active;
    } else {
      out[idx] = 0.0;
    }
  }
  return active;
}

// Best activation pattern for one strategy: maximize the number of active
// users, then the sum rate. OMA users are independent, so only the NOMA
// subset needs enumeration.
struct PatternOutcome {
  int active = -1;
  double sum_rate = 0.0;
  double rates[kMaxUsers] = {};
};

PatternOutcome eval_best_pattern(const StrategyEval& ev, const double* x, double rho) {
  PatternOutcome best;
  const int m = static_cast<int>(ev.noma.size());

  int oma_active = 0;
  double oma_rates[kMaxUsers];
  double oma_sum = 0.0;
  for (int p = 0; p < static_cast<int>(ev.oma.size()); ++p) {
    const double snr = ev.oma_scale * rho * x[ev.oma[p]];
    if (snr >= ev.oma_thr) {
      oma_rates[p] = std::log2(1.0 + snr) / ev.k;
      oma_sum += oma_rates[p];
      ++oma_active;
    } else {
      oma_rates[p] = 0.0;
    }
  }

  for (unsigned mask = 0; mask < (1u << m); ++mask) {
    double rates[kMaxUsers];
    double intf = 0.0, sum = 0.0;
    bool feasible = true;
    int count = 0;
    for (int p = 0; p < m && feasible; ++p) {
      if (!(mask & (1u << p))) {
        rates[p] = 0.0;
        continue;
      }
      const double sig = ev.noma_scale * rho * x[ev.noma[p]];
      const double sinr = sig / (1.0 + intf);
      if (sinr < ev.noma_thr) {
        feasible = false;
        break;
      }
      rates[p] = ev.noma_slot_frac * std::log2(1.0 + sinr);
      sum += rates[p];
      intf += sig;
      ++count;
    }
    if (!feasible) continue;
    const int active = count + oma_active;
    const double total = sum + oma_sum;
    if (active > best.active || (active == best.active && total > best.sum_rate)) {
      best.active = active;
      best.sum_rate = total;
      for (int p = 0; p < m; ++p) best.rates[ev.noma[p]] = rates[p];
      for (int p = 0; p < static_cast<int>(ev.oma.size()); ++p)
        best.rates[ev.oma[p]] = oma_rates[p];
    }
  }
  return best;
}

}  // namespace

MixedStrategy MixedStrategy::pure_noma(int k) {
  MixedStrategy m;
  for (int i = 0; i < k; ++i) m.noma_set.push_back(i);
  return m;
}

MixedStrategy MixedStrategy::pure_oma(int k) {
  MixedStrategy m;
  for (int i = 0; i < k; ++i) m.oma_set.push_back(i);
  return m;
}

std::vector<MixedStrategy> MixedStrategy::candidates(int k) {
  std::vector<MixedStrategy> out;
  out.push_back(pure_noma(k));
  // partitions with a NOMA subset of size m, largest subsets first
  for (int m = k - 1; m >= 2; --m) {
    for (unsigned mask = 0; mask < (1u << k); ++mask) {
      if (std::popcount(mask) != m) continue;
      MixedStrategy ms;
      for (int i = 0; i < k; ++i)
        ((mask >> i) & 1u ? ms.noma_set : ms.oma_set).push_back(i);
      out.push_back(std::move(ms));
    }
  }
  out.push_back(pure_oma(k));
  return out;
}

void MixedStrategy::validate(int k) const {
  if (k < 2 || k > kMaxUsers)
    throw std::invalid_argument("MixedStrategy: user count out of range");
  std::vector<char> seen(static_cast<std::size_t>(k), 0);
  auto visit = [&](const std::vector<int>& v) {
    int prev = -1;
    for (int i : v) {
      if (i < 0 || i >= k) throw std::invalid_argument("MixedStrategy: index out of range");
      if (i <= prev) throw std::invalid_argument("MixedStrategy: indices must be ascending");
      if (seen[static_cast<std::size_t>(i)])
        throw std::invalid_argument("MixedStrategy: sets must be disjoint");
      seen[static_cast<std::size_t>(i)] = 1;
      prev = i;
    }
  };
  visit(noma_set);
  visit(oma_set);
  for (char c : seen)
    if (!c) throw std::invalid_argument("MixedStrategy: sets must cover all users");
  if (noma_set.size() == 1)
    throw std::invalid_argument("MixedStrategy: NOMA subset needs at least 2 users");
}

std::string MixedStrategy::label() const {
  if (oma_set.empty()) return "noma";
  if (noma_set.empty()) return "oma";
  std::string s = "mixed-noma";
  for (int i : noma_set) s += "-" + std::to_string(i);
  return s;
}

bool MixedStrategy::is_pure_noma(int k) const {
  return static_cast<int>(noma_set.size()) == k;
}
bool MixedStrategy::is_pure_oma() const { return noma_set.empty(); }

CycleAccounting cycle_accounting(const MixedStrategy& strategy, int k) {
  strategy.validate(k);
  CycleAccounting c;
  const int m = static_cast<int>(strategy.noma_set.size());
  c.noma_active_slots = m;
  c.noma_power_scale = m > 0 ? static_cast<double>(k) / m : 1.0;
  c.oma_power_scale = static_cast<double>(k);
  c.oma_active_slots = 1;
  c.cycle_slots = k;
  return c;
}

McPerUser mc_throughput(const KScenario& s, const MixedStrategy& strategy,
                        std::int64_t n, std::uint64_t seed, int threads) {
  if (n < 1000) throw std::invalid_argument("mc_throughput: needs n >= 1000");
  const StrategyEval ev(s, strategy);
  const ChannelSampler sampler(s, seed);
  const int k = s.k();
  const double rho = s.rho;
  const Sums total = run_blocks(k + 1, n, threads, [&](std::uint64_t i, double* v) {
    double x[kMaxUsers];
    sampler.draw(i, {x, static_cast<std::size_t>(k)});
    eval_throughput_draw(ev, x, rho, v);
    double sum = 0.0;
    for (int u = 0; u < k; ++u) sum += v[u];
    v[k] = sum;
  });
  McPerUser out;
  for (int u = 0; u < k; ++u)
    out.user.push_back(make_estimate(total.s[u], total.s2[u], n, seed));
  out.sum = make_estimate(total.s[k], total.s2[k], n, seed);
  return out;
}

McPerUser mc_throughput(const Scenario& s, Strategy strategy, std::int64_t n,
                        std::uint64_t seed, int threads) {
  if (strategy == Strategy::noma_adaptive) strategy = select_no_csit(s);
  const MixedStrategy ms =
      strategy == Strategy::noma ? MixedStrategy::pure_noma(2) : MixedStrategy::pure_oma(2);
  return mc_throughput(to_k_scenario(s), ms, n, seed, threads);
}

McRates mc_rate_full_csit(const KScenario& s, const MixedStrategy& strategy,
                          std::int64_t n, std::uint64_t seed, int threads) {
  if (n < 1000) throw std::invalid_argument("mc_rate_full_csit: needs n >= 1000");
  const StrategyEval ev(s, strategy);
  const ChannelSampler sampler(s, seed);
  const int k = s.k();
  const double rho = s.rho;
  const Sums total = run_blocks(k + 2, n, threads, [&](std::uint64_t i, double* v) {
    double x[kMaxUsers];
    sampler.draw(i, {x, static_cast<std::size_t>(k)});
    const int active = eval_rate_draw(ev, x, rho, v);
    double sum = 0.0;
    for (int u = 0; u < k; ++u) sum += v[u];
    v[k] = sum;
    v[k + 1] = active == k ? 1.0 : 0.0;
  });
  McRates out;
  for (int u = 0; u < k; ++u)
    out.user.push_back(make_estimate(total.s[u], total.s2[u], n, seed));
  out.sum = make_estimate(total.s[k], total.s2[k], n, seed);
  out.all_active = make_estimate(total.s[k + 1], total.s2[k + 1], n, seed);
  return out;
}

McRates mc_rate_full_csit_adaptive(const KScenario& s, std::int64_t n,
                                   std::uint64_t seed, int threads) {
  if (n < 1000) throw std::invalid_argument("mc_rate_full_csit_adaptive: needs n >= 1000");
  const int k = s.k();
  std::vector<StrategyEval> evals;
  for (const MixedStrategy& ms : MixedStrategy::candidates(k)) evals.emplace_back(s, ms);
  const ChannelSampler sampler(s, seed);
  const double rho = s.rho;
  const Sums total = run_blocks(k + 2, n, threads, [&](std::uint64_t i, double* v) {
    double x[kMaxUsers];
    sampler.draw(i, {x, static_cast<std::size_t>(k)});
    PatternOutcome best;
    // candidates are ordered by decreasing NOMA-subset size, so on full
    // ties the strategy with fewer OMA slots wins
    for (const StrategyEval& ev : evals) {
      const PatternOutcome o = eval_best_pattern(ev, x, rho);
      if (o.active > best.active ||
          (o.active == best.active && o.sum_rate > best.sum_rate)) {
        best = o;
      }
    }
    double sum = 0.0;
    for (int u = 0; u < k; ++u) {
      v[u] = best.rates[u];
      sum += v[u];
    }
    v[k] = sum;
    v[k + 1] = best.active == k ? 1.0 : 0.0;
  });
  McRates out;
  for (int u = 0; u < k; ++u)
    out.user.push_back(make_estimate(total.s[u], total.s2[u], n, seed));
  out.sum = make_estimate(total.s[k], total.s2[k], n, seed);
  out.all_active = make_estimate(total.s[k + 1], total.s2[k + 1], n, seed);
  return out;
}

McRates mc_rate_full_csit(const Scenario& s, Strategy strategy, std::int64_t n,
                          std::uint64_t seed, int threads) {
  if (n < 1000) throw std::invalid_argument("mc_rate_full_csit: needs n >= 1000");
  const KScenario ks = to_k_scenario(s);
  if (strategy == Strategy::noma)
    return mc_rate_full_csit(ks, MixedStrategy::pure_noma(2), n, seed, threads);
  if (strategy == Strategy::oma)
    return mc_rate_full_csit(ks, MixedStrategy::pure_oma(2), n, seed, threads);

  // adaptive: per-draw mode selection
  const ChannelSampler sampler(s, seed);
  const double rho = s.rho();
  const Sums total = run_blocks(4, n, threads, [&](std::uint64_t i, double* v) {
    const auto [xw, xs] = sampler.draw2(i);
    const StrategyDecision d = decide_noma_a(s, xw, xs);
    double rw = 0.0, rs = 0.0;
    switch (d.mode) {
      case TxMode::noma_both:
        rw = std::log2(1.0 + rho * xw);
        rs = std::log2(1.0 + rho * xs / (1.0 + rho * xw));
        break;
      case TxMode::strong_only_free:
      case TxMode::strong_only_fallback:
        rs = std::log2(1.0 + rho * xs);
        break;
      case TxMode::oma_both:
        rw = 0.5 * std::log2(1.0 + 2.0 * rho * xw);
        rs = 0.5 * std::log2(1.0 + 2.0 * rho * xs);
        break;
      case TxMode::weak_only_free:
        rw = 0.5 * std::log2(1.0 + 2.0 * rho * xw);
        break;
      case TxMode::none:
        break;
    }
    v[0] = rw;
    v[1] = rs;
    v[2] = rw + rs;
    v[3] = (d.active_weak && d.active_strong) ? 1.0 : 0.0;
  });
  McRates out;
  out.user.push_back(make_estimate(total.s[0], total.s2[0], n, seed));
  out.user.push_back(make_estimate(total.s[1], total.s2[1], n, seed));
  out.sum = make_estimate(total.s[2], total.s2[2], n, seed);
  out.all_active = make_estimate(total.s[3], total.s2[3], n, seed);
  return out;
}

McPhis mc_phis(const Scenario& s, std::int64_t n, std::uint64_t seed, int threads) {
  if (n < 1000) throw std::invalid_argument("mc_phis: needs n >= 1000");
  const ChannelSampler sampler(s, seed);
  const double rho = s.rho();
  const double g = s.gamma();
  const double oma_thr = duty_scaled_threshold(g, 2, 1);
  const Sums total = run_blocks(4, n, threads, [&](std::uint64_t i, double* v) {
    const auto [xw, xs] = sampler.draw2(i);
    const bool strong_ok = rho * xs >= g * (1.0 + rho * xw);
    const bool weak_ok = strong_ok && rho * xw >= g;
    v[0] = weak_ok ? 1.0 : 0.0;
    v[1] = strong_ok ? 1.0 : 0.0;
    v[2] = (2.0 * rho * xw >= oma_thr) ? 1.0 : 0.0;
    v[3] = (2.0 * rho * xs >= oma_thr) ? 1.0 : 0.0;
  });
  McPhis out;
  out.noma_weak = make_estimate(total.s[0], total.s2[0], n, seed);
  out.noma_strong = make_estimate(total.s[1], total.s2[1], n, seed);
  out.oma_weak = make_estimate(total.s[2], total.s2[2], n, seed);
  out.oma_strong = make_estimate(total.s[3], total.s2[3], n, seed);
  return out;
}

McTwoUserSummary mc_two_user_summary(const Scenario& s, std::int64_t n,
                                     std::uint64_t seed, int threads) {
  if (n < 1000) throw std::invalid_argument("mc_two_user_summary: needs n >= 1000");
  const ChannelSampler sampler(s, seed);
  const double rho = s.rho();
  const double g = s.gamma();
  const double oma_thr = duty_scaled_threshold(g, 2, 1);
  const Sums total = run_blocks(11, n, threads, [&](std::uint64_t i, double* v) {
    const auto [xw, xs] = sampler.draw2(i);
    const double snr_w = rho * xw, snr_s = rho * xs;

    // fixed-rate outcomes
    const bool noma_strong_ok = snr_s >= g * (1.0 + snr_w);
    const bool noma_weak_ok = noma_strong_ok && snr_w >= g;
    v[0] = noma_weak_ok ? 1.0 : 0.0;
    v[1] = noma_strong_ok ? 1.0 : 0.0;
    v[2] = (2.0 * snr_w >= oma_thr) ? 1.0 : 0.0;
    v[3] = (2.0 * snr_s >= oma_thr) ? 1.0 : 0.0;

    // minimum-rate activation, pure strategies
    const bool noma_weak_active = snr_w >= g;
    v[4] = noma_weak_active ? std::log2(1.0 + snr_w) : 0.0;
    const double sinr_s = noma_weak_active ? snr_s / (1.0 + snr_w) : snr_s;
    v[5] = sinr_s >= g ? std::log2(1.0 + sinr_s) : 0.0;
    v[6] = 2.0 * snr_w >= oma_thr ? 0.5 * std::log2(1.0 + 2.0 * snr_w) : 0.0;
    v[7] = 2.0 * snr_s >= oma_thr ? 0.5 * std::log2(1.0 + 2.0 * snr_s) : 0.0;

    // adaptive rule
    const StrategyDecision d = decide_noma_a(s, xw, xs);
    double rw = 0.0, rs = 0.0;
    switch (d.mode) {
      case TxMode::noma_both:
        rw = std::log2(1.0 + snr_w);
        rs = std::log2(1.0 + snr_s / (1.0 + snr_w));
        break;
      case TxMode::strong_only_free:
      case TxMode::strong_only_fallback:
        rs = std::log2(1.0 + snr_s);
        break;
      case TxMode::oma_both:
        rw = 0.5 * std::log2(1.0 + 2.0 * snr_w);
        rs = 0.5 * std::log2(1.0 + 2.0 * snr_s);
        break;
      case TxMode::weak_only_free:
        rw = 0.5 * std::log2(1.0 + 2.0 * snr_w);
        break;
      case TxMode::none:
        break;
    }
    v[8] = rw;
    v[9] = rs;
    v[10] = (d.active_weak && d.active_strong) ? 1.0 : 0.0;
  });
  auto est = [&](int m) { return make_estimate(total.s[m], total.s2[m], n, seed); };
  McTwoUserSummary out;
  out.phis.noma_weak = est(0);
  out.phis.noma_strong = est(1);
  out.phis.oma_weak = est(2);
  out.phis.oma_strong = est(3);
  out.rate_noma_weak = est(4);
  out.rate_noma_strong = est(5);
  out.rate_oma_weak = est(6);
  out.rate_oma_strong = est(7);
  out.rate_noma_a_weak = est(8);
  out.rate_noma_a_strong = est(9);
  out.activity_noma_a = est(10);
  return out;
}

MixedStrategy mc_select_no_csit(const KScenario& s, std::int64_t n,
                                std::uint64_t seed, int threads) {
  const std::vector<MixedStrategy> cands = MixedStrategy::candidates(s.k());
  double best = -1.0;
  std::size_t best_idx = 0;
  for (std::size_t c = 0; c < cands.size(); ++c) {
    const double sum = mc_throughput(s, cands[c], n, seed, threads).sum.mean;
    if (sum > best) {
      best = sum;
      best_idx = c;
    }
  }
  return cands[best_idx];
}

}  // namespace noma
