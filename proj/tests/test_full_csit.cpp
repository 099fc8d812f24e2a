#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>

#include "noma/formula_checks.hpp"
#include "noma/full_csit.hpp"
#include "noma/rng.hpp"

using namespace noma;

namespace {
double rel(double a, double b) { return std::abs(a - b) / std::abs(b); }
const Scenario kOp = Scenario::from_db(0.1, 0.9, 10.0, 20.0);
constexpr double kLn2 = 0.6931471805599453094;

Scenario random_scenario(std::uint64_t i) {
  const auto b = Philox4x64::generate({i, 0xabcd}, {0, 0, 0, 0});
  const double p1 = 0.05 + 0.45 * uniform_open_unit(b[0]);
  const double g = std::pow(10.0, 1.5 * uniform_open_unit(b[1]));
  const double rho = std::pow(10.0, -1.0 + 5.0 * uniform_open_unit(b[2]));
  return {p1, 1.0 - p1, g, rho};
}

}  // namespace

TEST_CASE("every closed form matches its defining integral at the operating point") {
  for (const std::string& id : registered_formulas()) {
    const FormulaCheck c = quad_verify(kOp, id);
    INFO(id, " closed=", c.closed, " integral=", c.integral);
    CHECK(c.rel_err <= 1e-6);
  }
  CHECK_THROWS_AS(quad_verify(kOp, "not_a_formula"), std::invalid_argument);
}

TEST_CASE("tight quadrature agreement for the simple rate forms") {
  CHECK(quad_verify(kOp, "rate_noma_weak").rel_err < 1e-9);
  CHECK(quad_verify(kOp, "rate_oma_weak").rel_err < 1e-9);
  CHECK(quad_verify(kOp, "rate_oma_strong").rel_err < 1e-9);
  CHECK(quad_verify(kOp, "phi_oma_weak").rel_err < 1e-12);
}

TEST_CASE("rates vanish or saturate in the expected limits") {
  CHECK(rate_noma_weak(kOp.with_rho(1e-9)) < 1e-30);
  const Scenario big_gamma(0.1, 0.9, 1e8, 100.0);
  CHECK(rate_noma_strong(big_gamma) < 1e-30);
  const auto [w, st] = rate_oma(kOp);
  CHECK(st >= w);
  const Scenario eq(0.5, 0.5, 10.0, 100.0);
  const auto [we, se] = rate_oma(eq);
  CHECK(se >= we);  // max stochastically dominates min even at equal powers
}

TEST_CASE("equal and near-equal power closed forms agree with the integrals") {
  const Scenario eq(0.5, 0.5, 10.0, 100.0);
  CHECK(quad_verify(eq, "rate_noma_strong_paired").rel_err < 1e-6);
  CHECK(quad_verify(eq, "rate_noma_strong").rel_err < 1e-6);

  // just outside the analytic-limit switch
  const Scenario near(0.5, 0.5 * (1.0 + 1e-5), 10.0, 100.0);
  CHECK(quad_verify(near, "rate_noma_strong_paired").rel_err < 1e-6);

  // continuity across the switch
  const Scenario at(0.5, 0.5 * (1.0 + 1e-7), 10.0, 100.0);
  CHECK(rel(rate_noma_strong_paired(at), rate_noma_strong_paired(eq)) < 1e-5);
}

TEST_CASE("theorem orderings on random scenarios") {
  for (std::uint64_t i = 0; i < 300; ++i) {
    const Scenario s = random_scenario(i);
    const double ra = rate_noma_weak(s);
    const double ra_hat = rate_noma_a_weak(s);
    const double ra_oma = rate_oma(s).first;
    const double rb = rate_noma_strong(s);
    const double rb_hat = rate_noma_a_strong(s);
    const double sc = 1e-9 * (1.0 + std::abs(ra));
    CHECK(ra >= ra_hat - sc);
    CHECK(ra_hat >= ra_oma - sc);
    CHECK(rb_hat >= rb - 1e-9 * (1.0 + std::abs(rb)));
  }
}

TEST_CASE("decision rule branches") {
  const Scenario s(0.1, 0.9, 10.0, 100.0);  // tn = 0.1, to = 0.6
  CHECK(decide_noma_a(s, 0.0, 0.0).mode == TxMode::none);
  CHECK(decide_noma_a(s, 0.2, 1e6).mode == TxMode::noma_both);
  CHECK(decide_noma_a(s, 0.05, 0.5).mode == TxMode::strong_only_free);
  CHECK(decide_noma_a(s, 0.7, 0.9).mode == TxMode::oma_both);       // NOMA fails, OMA works
  CHECK(decide_noma_a(s, 0.2, 0.5).mode == TxMode::strong_only_fallback);
  CHECK(decide_noma_a(s, 0.05, 0.05).mode == TxMode::none);
  CHECK_THROWS_AS(decide_noma_a(s, 0.5, 0.2), std::domain_error);
  CHECK_THROWS_AS(decide_noma_a(s, -0.1, 0.2), std::domain_error);

  const StrategyDecision d = decide_noma_a(s, 0.2, 1e6);
  CHECK(d.active_weak);
  CHECK(d.active_strong);
}

TEST_CASE("decision rule is exhaustive and self-consistent" * doctest::timeout(300)) {
  const Scenario s(0.1, 0.9, 10.0, 31.6227766);
  const ChannelSampler sampler(s, 5150);
  const double tn = s.gamma() / s.rho();
  const double to = s.gamma_tilde() / (2.0 * s.rho());
  for (std::uint64_t i = 0; i < 1'000'000; ++i) {
    const auto [xw, xs] = sampler.draw2(i);
    const StrategyDecision d = decide_noma_a(s, xw, xs);
    // re-check the defining inequalities of the reported mode
    switch (d.mode) {
      case TxMode::noma_both:
        CHECK(xw >= tn);
        CHECK(xs >= tn * (1.0 + s.rho() * xw));
        CHECK((d.active_weak && d.active_strong));
        break;
      case TxMode::strong_only_free:
        CHECK(xw < tn);
        CHECK(xs >= tn);
        CHECK((!d.active_weak && d.active_strong));
        break;
      case TxMode::oma_both:
        CHECK(xw >= to);
        CHECK(xs >= to);
        CHECK(xs < tn * (1.0 + s.rho() * xw));
        CHECK((d.active_weak && d.active_strong));
        break;
      case TxMode::strong_only_fallback:
        CHECK(xw >= tn);
        CHECK(xw < to);
        CHECK(xs >= tn);
        CHECK(xs < tn * (1.0 + s.rho() * xw));
        CHECK((!d.active_weak && d.active_strong));
        break;
      case TxMode::weak_only_free:
        FAIL("unreachable for ordered draws");
        break;
      case TxMode::none:
        CHECK(xw < tn);
        CHECK(xs < tn);
        CHECK((!d.active_weak && !d.active_strong));
        break;
    }
  }
}

TEST_CASE("activity probabilities") {
  for (double rho_db : {-10.0, 0.0, 10.0, 20.0, 40.0}) {
    const Scenario s = kOp.with_rho(db_to_linear(rho_db));
    const double a_noma = activity_probability(s, Strategy::noma);
    const double a_oma = activity_probability(s, Strategy::oma);
    const double a_ad = activity_probability(s, Strategy::noma_adaptive);
    CHECK(a_ad >= a_noma - 1e-15);
    CHECK(a_ad >= a_oma - 1e-15);
    CHECK(a_ad <= 1.0);
  }
  CHECK(rel(activity_probability(kOp.with_rho(1e14), Strategy::oma), 1.0) < 1e-10);
  CHECK(quad_verify(kOp, "activity_noma_a").rel_err < 1e-6);
}

TEST_CASE("asymptotic slopes match the analytic table") {
  const double m = noma_high_snr_limit(kOp);
  CHECK(asymptotics(kOp, Strategy::noma, MetricTarget::weak).slope == 1.0 / kLn2);
  CHECK(asymptotics(kOp, Strategy::oma, MetricTarget::weak).slope == 0.5 / kLn2);
  CHECK(rel(asymptotics(kOp, Strategy::noma_adaptive, MetricTarget::weak).slope,
            (1.0 + m) / (2.0 * kLn2)) < 1e-15);
  CHECK(asymptotics(kOp, Strategy::noma, MetricTarget::strong).slope == 0.0);
  CHECK(asymptotics(kOp, Strategy::oma, MetricTarget::strong).slope == 0.5 / kLn2);
  CHECK(rel(asymptotics(kOp, Strategy::noma_adaptive, MetricTarget::strong).slope,
            (1.0 - m) / (2.0 * kLn2)) < 1e-15);
  // NOMA weak-user slope is twice the OMA one; sum slopes are strategy-independent
  CHECK(asymptotics(kOp, Strategy::noma, MetricTarget::weak).slope ==
        2.0 * asymptotics(kOp, Strategy::oma, MetricTarget::weak).slope);
  for (Strategy st : {Strategy::oma, Strategy::noma, Strategy::noma_adaptive})
    CHECK(asymptotics(kOp, st, MetricTarget::sum).slope == 1.0 / kLn2);
}

TEST_CASE("finite-difference slopes and intercepts agree with asymptotics()") {
  for (Strategy strat : {Strategy::oma, Strategy::noma, Strategy::noma_adaptive}) {
    for (MetricTarget t : {MetricTarget::weak, MetricTarget::strong, MetricTarget::sum}) {
      const AsymptoteReport a = asymptotics(kOp, strat, t);
      auto value = [&](double rho) {
        const RateReport r = rate_report(kOp.with_rho(rho), strat);
        return t == MetricTarget::weak ? r.weak
               : t == MetricTarget::strong ? r.strong : r.sum;
      };
      const double fd = (value(1e6) - value(1e5)) / std::log(10.0);
      if (a.slope == 0.0) {
        CHECK(std::abs(fd) < 5e-4);
      } else {
        CHECK(rel(fd, a.slope) < 0.01);
        // the line slope*ln(rho) + intercept reproduces the rate at 1e6
        const double predicted = a.slope * std::log(1e6) + a.intercept_or_asymptote;
        CHECK(rel(predicted, value(1e6)) < 0.01);
      }
    }
  }
}

TEST_CASE("strong-user NOMA rate saturates at the analytic asymptote") {
  const double asym = rate_noma_strong_asymptote(kOp);
  CHECK(rel(rate_noma_strong(kOp.with_rho(1e8)), asym) < 5e-3);

  // equal-power limit agrees with a nearby unequal-power evaluation
  const Scenario eq(0.5, 0.5, 10.0, 100.0);
  const Scenario near(0.5, 0.5 * (1.0 + 1e-4), 10.0, 100.0);
  CHECK(rel(rate_noma_strong_asymptote(eq), rate_noma_strong_asymptote(near)) < 1e-3);
  CHECK(rel(rate_noma_strong(eq.with_rho(1e8)), rate_noma_strong_asymptote(eq)) < 5e-3);
}

TEST_CASE("rate_report wiring") {
  const RateReport r = rate_report(kOp, Strategy::noma_adaptive);
  CHECK(r.sum == r.weak + r.strong);
  CHECK(r.strategy == Strategy::noma_adaptive);
  CHECK(r.provenance == Provenance::closed_form);
  CHECK(r.weak == rate_noma_a_weak(kOp));
  CHECK(r.strong == rate_noma_a_strong(kOp));
}
