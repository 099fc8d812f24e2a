#include "noma/verify.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <ostream>
#include <sstream>
#include <vector>

#include "noma/formula_checks.hpp"
#include "noma/math_kernels.hpp"
#include "noma/quadrature.hpp"
#include "noma/sweep.hpp"

namespace noma {

namespace {

constexpr std::uint64_t kVerifySeed = 0x5eed0001;

std::string fmt(double v) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.6g", v);
  return buf;
}

// Deterministic pseudo-random grid points for the check suites.
class CheckRng {
 public:
  explicit CheckRng(std::uint64_t seed) : key_{seed, 0x76657269ull} {}
  double uniform() {
    if (pos_ == 4) {
      block_ = Philox4x64::generate(key_, {ctr_++, 0, 0, 0});
      pos_ = 0;
    }
    return uniform_open_unit(block_[pos_++]);
  }
  double uniform(double lo, double hi) { return lo + (hi - lo) * uniform(); }
  double log_uniform(double lo, double hi) {
    return lo * std::exp(uniform() * std::log(hi / lo));
  }

 private:
  Philox4x64::Key key_;
  Philox4x64::Block block_{};
  std::uint64_t ctr_ = 0;
  int pos_ = 4;
};

std::vector<Scenario> check_grid() {
  std::vector<Scenario> grid;
  for (int i = 0; i < 10; ++i) {
    const double p1 = 0.05 + 0.05 * i;  // (0, 0.5]
    for (int j = 0; j < 10; ++j) {
      const double gamma = std::pow(100.0, j / 9.0);  // [1, 100]
      for (int k = 0; k < 10; ++k) {
        const double rho = 1e-2 * std::pow(1e8, k / 9.0);  // [1e-2, 1e6]
        grid.emplace_back(p1, 1.0 - p1, gamma, rho);
      }
    }
  }
  return grid;
}

Scenario random_scenario(CheckRng& rng) {
  const double p1 = rng.uniform(0.05, 0.5);
  const double gamma = rng.log_uniform(1.0, 31.6);
  const double rho = rng.log_uniform(0.3, 3.2e3);
  return {p1, 1.0 - p1, gamma, rho};
}

struct Suite {
  std::ostream& out;
  std::vector<CheckResult> results;

  void add(const std::string& id, const std::string& name, bool pass,
           const std::string& details) {
    results.push_back({id, name, pass, details});
    out << (pass ? "PASS " : "FAIL ") << id << " " << name << ": " << details << "\n"
        << std::flush;
  }
};

double rel_err_floored(double closed, double reference) {
  return std::abs(closed - reference) / std::max(std::abs(reference), 1e-280);
}

// ---- fast-level checks -----------------------------------------------

void check_invariant_grid(Suite& suite) {
  double worst_slack = 1e300;
  bool phi_ok = true, thm_ok = true, ga_ok = true, ident_ok = true, act_ok = true,
       sel_ok = true;
  for (const Scenario& s : check_grid()) {
    const double phi_nw = phi_noma_weak(s), phi_ns = phi_noma_strong(s);
    const double phi_ow = phi_oma_weak(s), phi_os = phi_oma_strong(s);
    phi_ok = phi_ok && phi_nw >= 0.0 && phi_nw <= phi_ns && phi_ns <= 1.0;
    phi_ok = phi_ok && phi_ow >= 0.0 && phi_ow <= phi_os && phi_os <= 1.0;

    const double ra = rate_noma_weak(s);
    const double ra_hat = rate_noma_a_weak(s);
    const auto [ra_oma, rb_oma] = rate_oma(s);
    const double rb = rate_noma_strong(s);
    const double rb_hat = rate_noma_a_strong(s);
    const double scale1 = 1.0 + std::abs(ra);
    for (double slack : {(ra - ra_hat) / scale1, (ra_hat - ra_oma) / scale1,
                         (rb_hat - rb) / (1.0 + std::abs(rb))})
      worst_slack = std::min(worst_slack, slack);
    thm_ok = thm_ok && ra - ra_hat >= -1e-9 * scale1 && ra_hat - ra_oma >= -1e-9 * scale1 &&
             rb_hat - rb >= -1e-9 * (1.0 + std::abs(rb));

    const double ga = ga_ratio(s);
    if (phi_ow > 1e-280)
      ga_ok = ga_ok && rel_err_floored(ga, phi_nw / phi_ow) <= 1e-12;

    const ThroughputReport tn = throughput(s, Strategy::noma);
    const double bits = std::log2(1.0 + s.gamma());
    ident_ok = ident_ok &&
               std::abs(tn.weak - phi_nw * bits) <= 1e-15 * std::max(1.0, tn.weak) &&
               std::abs(tn.strong - phi_ns * bits) <= 1e-15 * std::max(1.0, tn.strong);

    const double act_a = activity_probability(s, Strategy::noma_adaptive);
    act_ok = act_ok && act_a >= phi_nw - 1e-12 && act_a >= phi_ow - 1e-12 &&
             act_a <= 1.0 + 1e-12;

    const Strategy sel = select_no_csit(s);
    const double noma_sum = throughput(s, Strategy::noma).sum;
    const double oma_sum = throughput(s, Strategy::oma).sum;
    sel_ok = sel_ok && sel == (noma_sum >= oma_sum ? Strategy::noma : Strategy::oma);
  }
  suite.add("grid-phi", "phi ordering and range on 1000-point grid", phi_ok,
            phi_ok ? "0 <= phi_weak <= phi_strong <= 1 everywhere" : "ordering violated");
  suite.add("grid-theorems", "rate orderings on 1000-point grid", thm_ok,
            "min normalized slack " + fmt(worst_slack) + " (tol -1e-9)");
  suite.add("grid-ga-identity", "ga_ratio equals phi ratio", ga_ok,
            ga_ok ? "agreement within 1e-12" : "mismatch beyond 1e-12");
  suite.add("grid-throughput-identity", "T = phi * log2(1+gamma)", ident_ok,
            ident_ok ? "identity holds to 1e-15" : "identity violated");
  suite.add("grid-activity", "adaptive both-active dominance", act_ok,
            act_ok ? "noma_a >= max(noma, oma) everywhere" : "dominance violated");
  suite.add("grid-selection", "select_no_csit equals argmax", sel_ok,
            sel_ok ? "exact agreement on grid" : "disagreement found");
}

std::vector<Scenario> operating_points() {
  std::vector<Scenario> pts;
  for (double rho_db : {0.0, 10.0, 20.0, 30.0, 40.0})
    pts.push_back(Scenario::from_db(0.1, 0.9, 10.0, rho_db));
  return pts;
}

void check_formula_reconciliation(Suite& suite, const std::string& id) {
  double worst = 0.0;
  std::string worst_where;
  for (const Scenario& s : operating_points()) {
    for (const std::string& fid : registered_formulas()) {
      const FormulaCheck c = quad_verify(s, fid);
      if (c.rel_err > worst) {
        worst = c.rel_err;
        worst_where = fid + " @ rho_db=" + fmt(s.rho_db());
      }
    }
  }
  suite.add(id, "closed forms vs defining integrals", worst <= 1e-6,
            "max rel_err " + fmt(worst) + " at " + worst_where + " (tol 1e-6)");
}

// ---- full-level criteria ---------------------------------------------

void criterion1_kernels(Suite& suite) {
  const auto t0 = std::chrono::steady_clock::now();
  CheckRng rng(kVerifySeed);
  double worst_e1 = 0.0;
  for (int i = 0; i < 1000; ++i) {
    const double x = rng.log_uniform(1e-6, 1e3);
    const double closed = exp_integral_e1(x);
    const double quad =
        integrate_to_inf([](double t) { return std::exp(-t) / t; }, x, 0.0, 1e-12).value;
    worst_e1 = std::max(worst_e1, rel_err_floored(closed, quad));
  }
  double worst_alpha = 0.0;
  for (int i = 0; i < 1000; ++i) {
    const double g = rng.log_uniform(0.1, 100.0);
    const double lam = rng.log_uniform(0.1, 100.0);
    const double rho = rng.log_uniform(0.1, 100.0);
    const double closed = alpha_integral(g, lam, rho);
    const double quad = integrate_to_inf(
                            [&](double x) { return std::log1p(rho * x) * std::exp(-lam * x); },
                            g / rho, 0.0, 1e-12)
                            .value;
    worst_alpha = std::max(worst_alpha, rel_err_floored(closed, quad));
  }
  const double secs =
      std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
  const bool pass = worst_e1 <= 1e-10 && worst_alpha <= 1e-10 && secs < 5.0;
  suite.add("criterion-1", "kernel correctness vs quadrature", pass,
            "E1 max rel " + fmt(worst_e1) + ", alpha max rel " + fmt(worst_alpha) +
                " (tol 1e-10), " + fmt(secs) + " s (limit 5)");
}

struct FourSigma {
  double worst_pulls = 0.0;
  std::string worst_where;
  bool ok = true;

  // sigma_bound guards starved cells where the empirical sigma collapses to
  // zero: an upper bound on the true sigma from the closed-form mean.
  void check(const std::string& where, double closed, const McEstimate& mc,
             double value_cap) {
    const double n = static_cast<double>(mc.n);
    const double sigma_bound = std::sqrt(std::max(closed, 0.0) * value_cap / n);
    const double tol = 4.0 * std::max(mc.std_error, sigma_bound) + 10.0 * value_cap / n;
    const double err = std::abs(closed - mc.mean);
    const double pulls = err / std::max(tol / 4.0, 1e-300);
    if (pulls > worst_pulls) {
      worst_pulls = pulls;
      worst_where = where;
    }
    ok = ok && err <= tol;
  }
};

void criterion2_monte_carlo(Suite& suite, int threads) {
  const auto t0 = std::chrono::steady_clock::now();
  CheckRng rng(kVerifySeed + 2);
  FourSigma fs;
  const std::int64_t n = 10'000'000;
  for (int i = 0; i < 20; ++i) {
    const Scenario s = random_scenario(rng);
    const McTwoUserSummary mc = mc_two_user_summary(s, n, kVerifySeed + 100 + i, threads);
    const std::string tag = "scenario " + std::to_string(i);
    fs.check(tag + " phi_noma_weak", phi_noma_weak(s), mc.phis.noma_weak, 1.0);
    fs.check(tag + " phi_noma_strong", phi_noma_strong(s), mc.phis.noma_strong, 1.0);
    fs.check(tag + " phi_oma_weak", phi_oma_weak(s), mc.phis.oma_weak, 1.0);
    fs.check(tag + " phi_oma_strong", phi_oma_strong(s), mc.phis.oma_strong, 1.0);
    const double cap = 64.0;  // bits/s/Hz ceiling over the sampled ranges
    fs.check(tag + " rate_noma_weak", rate_noma_weak(s), mc.rate_noma_weak, cap);
    fs.check(tag + " rate_noma_strong", rate_noma_strong(s), mc.rate_noma_strong, cap);
    const auto [ow, os] = rate_oma(s);
    fs.check(tag + " rate_oma_weak", ow, mc.rate_oma_weak, cap);
    fs.check(tag + " rate_oma_strong", os, mc.rate_oma_strong, cap);
    const auto [aw, as] = rate_noma_a(s);
    fs.check(tag + " rate_noma_a_weak", aw, mc.rate_noma_a_weak, cap);
    fs.check(tag + " rate_noma_a_strong", as, mc.rate_noma_a_strong, cap);
    fs.check(tag + " activity_noma_a",
             activity_probability(s, Strategy::noma_adaptive), mc.activity_noma_a, 1.0);
  }
  const double secs =
      std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
  const bool pass = fs.ok && secs < 300.0;
  suite.add("criterion-2", "closed forms vs 1e7-draw Monte Carlo", pass,
            "worst pull " + fmt(fs.worst_pulls) + " sigma at " + fs.worst_where +
                " (limit 4), " + fmt(secs) + " s (limit 300)");
}

void criterion3_quadrature(Suite& suite) { check_formula_reconciliation(suite, "criterion-3"); }

void criterion4_theorems(Suite& suite) {
  double worst_slack = 1e300;
  bool thm_ok = true, ga_ok = true;
  for (const Scenario& s : check_grid()) {
    const double ra = rate_noma_weak(s);
    const double ra_hat = rate_noma_a_weak(s);
    const double ra_oma = rate_oma(s).first;
    const double rb = rate_noma_strong(s);
    const double rb_hat = rate_noma_a_strong(s);
    const double sc = 1.0 + std::abs(ra);
    const double sb = 1.0 + std::abs(rb);
    worst_slack = std::min({worst_slack, (ra - ra_hat) / sc, (ra_hat - ra_oma) / sc,
                            (rb_hat - rb) / sb});
    thm_ok = thm_ok && (ra - ra_hat) >= -1e-9 * sc && (ra_hat - ra_oma) >= -1e-9 * sc &&
             (rb_hat - rb) >= -1e-9 * sb;

    // 100-point increasing rho sequence: non-increasing everywhere, with an
    // overall strict drop unless the powers are equal (g_A is then constant).
    double prev = ga_ratio(s.with_rho(1e-2));
    const double first = prev;
    double last = prev;
    for (int i = 1; i < 100; ++i) {
      const double rho = 1e-2 * std::pow(1e8, i / 99.0);
      last = ga_ratio(s.with_rho(rho));
      ga_ok = ga_ok && last <= prev * (1.0 + 1e-12);
      prev = last;
    }
    if (s.p2() > s.p1() && s.gamma() > 1.0) ga_ok = ga_ok && last < first;
  }
  suite.add("criterion-4", "theorem orderings and g_A monotonicity", thm_ok && ga_ok,
            "min normalized slack " + fmt(worst_slack) + " (tol -1e-9), monotonicity " +
                (ga_ok ? "holds" : "violated"));
}

void criterion5_asymptotics(Suite& suite) {
  const Scenario base(0.1, 0.9, 10.0, 1.0);
  double worst = 0.0;
  std::string worst_where;
  bool ok = true;
  for (Strategy strat : {Strategy::oma, Strategy::noma, Strategy::noma_adaptive}) {
    for (MetricTarget t : {MetricTarget::weak, MetricTarget::strong, MetricTarget::sum}) {
      const AsymptoteReport a = asymptotics(base, strat, t);
      auto value = [&](double rho) {
        const RateReport r = rate_report(base.with_rho(rho), strat);
        switch (t) {
          case MetricTarget::weak: return r.weak;
          case MetricTarget::strong: return r.strong;
          default: return r.sum;
        }
      };
      const double fd = (value(1e6) - value(1e5)) / std::log(10.0);
      double err;
      if (a.slope == 0.0) {
        err = std::abs(fd) / 5e-4;  // absolute floor for the saturating rate
        ok = ok && std::abs(fd) <= 5e-4;
      } else {
        err = std::abs(fd / a.slope - 1.0) / 0.01;
        ok = ok && std::abs(fd / a.slope - 1.0) <= 0.01;
      }
      if (err > worst) {
        worst = err;
        worst_where = std::string(to_string(strat)) + "/" +
                      (t == MetricTarget::weak ? "weak"
                       : t == MetricTarget::strong ? "strong" : "sum");
      }
    }
  }
  const double asym = rate_noma_strong_asymptote(base);
  const double at8 = rate_noma_strong(base.with_rho(1e8));
  const double asym_err = std::abs(at8 / asym - 1.0);
  ok = ok && asym_err <= 5e-3;
  suite.add("criterion-5", "asymptotic slopes and strong-user asymptote", ok,
            "worst slope deviation " + fmt(worst) + "x tolerance at " + worst_where +
                "; asymptote rel err " + fmt(asym_err) + " (tol 5e-3)");
}

void criterion6_selection(Suite& suite, int threads) {
  bool sel_ok = true, act_ok = true;
  for (const Scenario& s : check_grid()) {
    const Strategy sel = select_no_csit(s);
    const double noma_sum = throughput(s, Strategy::noma).sum;
    const double oma_sum = throughput(s, Strategy::oma).sum;
    sel_ok = sel_ok && sel == (noma_sum >= oma_sum ? Strategy::noma : Strategy::oma);
    const double act_a = activity_probability(s, Strategy::noma_adaptive);
    act_ok = act_ok && act_a >= activity_probability(s, Strategy::noma) - 1e-12 &&
             act_a >= activity_probability(s, Strategy::oma) - 1e-12;
  }
  const Scenario op = Scenario::from_db(0.1, 0.9, 10.0, 10.0);
  const McRates mc = mc_rate_full_csit(op, Strategy::noma_adaptive, 10'000'000,
                                       kVerifySeed + 6, threads);
  const double closed = activity_probability(op, Strategy::noma_adaptive);
  const double pulls = std::abs(closed - mc.all_active.mean) /
                       std::max(mc.all_active.std_error, 1e-300);
  const bool mc_ok = pulls <= 4.0;
  suite.add("criterion-6", "selection optimality and activity dominance",
            sel_ok && act_ok && mc_ok,
            std::string("argmax ") + (sel_ok ? "exact" : "violated") + ", dominance " +
                (act_ok ? "holds" : "violated") + ", MC cross-check " + fmt(pulls) +
                " sigma (limit 4)");
}

void criterion7_crossover(Suite& suite) {
  const Scenario lo = Scenario::from_db(0.1, 0.9, 10.0, 0.0);
  const Scenario hi = Scenario::from_db(0.1, 0.9, 10.0, 40.0);
  const bool low_ok = throughput(lo, Strategy::noma).sum > throughput(lo, Strategy::oma).sum;
  const bool high_ok = throughput(hi, Strategy::noma).sum < throughput(hi, Strategy::oma).sum;
  const auto rw = rho_min(lo, MetricTarget::weak);
  const auto rs = rho_min(lo, MetricTarget::strong);
  const auto rsum = rho_min(lo, MetricTarget::sum);
  const bool finite = rw && rs && rsum;
  std::string detail = "noma>oma at 0 dB: ";
  detail += low_ok ? "yes" : "no";
  detail += ", oma>noma at 40 dB: ";
  detail += high_ok ? "yes" : "no";
  if (finite)
    detail += ", rho_min dB (weak/strong/sum): " + fmt(linear_to_db(*rw)) + "/" +
              fmt(linear_to_db(*rs)) + "/" + fmt(linear_to_db(*rsum));
  else
    detail += ", rho_min not finite";
  suite.add("criterion-7", "throughput crossover structure", low_ok && high_ok && finite,
            detail);
}

void criterion8_three_users(Suite& suite, int threads) {
  const auto t0 = std::chrono::steady_clock::now();
  const std::int64_t n = 1'000'000;
  const double gamma = db_to_linear(10.0);
  const std::vector<MixedStrategy> cands = MixedStrategy::candidates(3);
  const std::size_t noma_idx = 0, oma_idx = cands.size() - 1;

  bool noma_best_low = false, oma_best_high = false, mixed_best_somewhere = false;
  bool adaptive_dominates = true;
  for (int step = 0; step <= 10; ++step) {
    const double rho_db = -10.0 + 5.0 * step;
    const KScenario ks({0.05, 0.15, 0.8}, gamma, db_to_linear(rho_db));
    std::vector<double> sums;
    for (const MixedStrategy& ms : cands)
      sums.push_back(mc_throughput(ks, ms, n, kVerifySeed + 8, threads).sum.mean);
    const std::size_t best =
        static_cast<std::size_t>(std::max_element(sums.begin(), sums.end()) - sums.begin());
    if (step == 0) noma_best_low = best == noma_idx;
    if (step == 10) oma_best_high = best == oma_idx;
    if (best != noma_idx && best != oma_idx) mixed_best_somewhere = true;

    const McRates adaptive = mc_rate_full_csit_adaptive(ks, n, kVerifySeed + 8, threads);
    for (const MixedStrategy& ms : cands) {
      const McRates fixed = mc_rate_full_csit(ks, ms, n, kVerifySeed + 8, threads);
      adaptive_dominates =
          adaptive_dominates && adaptive.all_active.mean >= fixed.all_active.mean - 1e-12;
    }
  }
  const double secs =
      std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
  const bool pass = noma_best_low && oma_best_high && mixed_best_somewhere &&
                    adaptive_dominates && secs < 600.0;
  suite.add("criterion-8", "K=3 qualitative reproduction", pass,
            std::string("noma best at -10 dB: ") + (noma_best_low ? "yes" : "no") +
                ", oma best at 40 dB: " + (oma_best_high ? "yes" : "no") +
                ", mixed best somewhere: " + (mixed_best_somewhere ? "yes" : "no") +
                ", adaptive activity dominates: " + (adaptive_dominates ? "yes" : "no") +
                ", " + fmt(secs) + " s (limit 600)");
}

bool estimates_identical(const McRates& a, const McRates& b) {
  if (a.user.size() != b.user.size()) return false;
  for (std::size_t i = 0; i < a.user.size(); ++i)
    if (a.user[i].mean != b.user[i].mean || a.user[i].std_error != b.user[i].std_error)
      return false;
  return a.sum.mean == b.sum.mean && a.sum.std_error == b.sum.std_error &&
         a.all_active.mean == b.all_active.mean &&
         a.all_active.std_error == b.all_active.std_error;
}

std::string read_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

void criterion9_reproducibility(Suite& suite) {
  const Scenario op = Scenario::from_db(0.1, 0.9, 10.0, 10.0);
  const std::int64_t n = 3'000'000;
  const McRates r1 = mc_rate_full_csit(op, Strategy::noma_adaptive, n, kVerifySeed + 9, 1);
  const McRates r2 = mc_rate_full_csit(op, Strategy::noma_adaptive, n, kVerifySeed + 9, 1);
  const McRates r4 = mc_rate_full_csit(op, Strategy::noma_adaptive, n, kVerifySeed + 9, 4);
  const bool rerun_ok = estimates_identical(r1, r2);
  const bool threads_ok = estimates_identical(r1, r4);

  const KScenario ks({0.05, 0.15, 0.8}, db_to_linear(10.0), db_to_linear(10.0));
  const McRates k1 = mc_rate_full_csit_adaptive(ks, n, kVerifySeed + 9, 1);
  const McRates k4 = mc_rate_full_csit_adaptive(ks, n, kVerifySeed + 9, 4);
  const bool k_ok = estimates_identical(k1, k4);

  SweepSpec spec;
  spec.p1 = {0.1};
  spec.p2 = 0.9;
  spec.gamma_db = {10.0};
  spec.rho_db = {0.0, 20.0, 10.0};
  spec.metrics = {Metric::throughput, Metric::rate};
  spec.engines = {Engine::closed_form, Engine::monte_carlo};
  spec.samples = 200'000;
  spec.seed = kVerifySeed;
  std::ostringstream sink;
  spec.output_path = "verify_sweep_a.csv";
  run_sweep(spec, sink);
  spec.output_path = "verify_sweep_b.csv";
  spec.threads = 4;
  run_sweep(spec, sink);
  const bool sweep_ok = read_file("verify_sweep_a.csv") == read_file("verify_sweep_b.csv") &&
                        !read_file("verify_sweep_a.csv").empty();
  std::remove("verify_sweep_a.csv");
  std::remove("verify_sweep_b.csv");

  suite.add("criterion-9", "seed and thread-count reproducibility",
            rerun_ok && threads_ok && k_ok && sweep_ok,
            std::string("rerun ") + (rerun_ok ? "identical" : "differs") + ", 1-vs-4 threads " +
                (threads_ok && k_ok ? "identical" : "differs") + ", sweep files " +
                (sweep_ok ? "byte-identical" : "differ"));
}

}  // namespace

std::vector<CheckResult> run_verify(VerifyLevel level, std::ostream& out, int threads) {
  Suite suite{out, {}};
  if (level == VerifyLevel::fast) {
    check_invariant_grid(suite);
    check_formula_reconciliation(suite, "formula-reconciliation");
    return suite.results;
  }
  criterion1_kernels(suite);
  criterion2_monte_carlo(suite, threads);
  criterion3_quadrature(suite);
  criterion4_theorems(suite);
  criterion5_asymptotics(suite);
  criterion6_selection(suite, threads);
  criterion7_crossover(suite);
  criterion8_three_users(suite, threads);
  criterion9_reproducibility(suite);
  return suite.results;
}

bool all_passed(const std::vector<CheckResult>& results) {
  for (const CheckResult& r : results)
    if (!r.pass) return false;
  return !results.empty();
}

}  // namespace noma
