#include "noma/formula_checks.hpp"

#include <cmath>
#include <functional>
#include <stdexcept>

#include "noma/full_csit.hpp"
#include "noma/quadrature.hpp"

namespace noma {

namespace {

constexpr double kInnerAbs = 0.0, kInnerRel = 1e-11;
constexpr double kOuterAbs = 0.0, kOuterRel = 1e-9;

using Fn = std::function<double(const Scenario&)>;

double log2_term(double x) { return std::log2(x); }

// int_{a}^{inf} dxa int_{lower(xa)}^{inf} g(xa, xb) f(xa, xb) dxb
double wedge_to_inf(const Scenario& s, double a,
                    const std::function<double(double)>& lower,
                    const std::function<double(double, double)>& g) {
  auto outer = [&](double xa) {
    return integrate_to_inf([&](double xb) { return g(xa, xb) * pdf_joint(s, xa, xb); },
                            lower(xa), kInnerAbs, kInnerRel)
        .value;
  };
  return integrate_to_inf(outer, a, kOuterAbs, kOuterRel).value;
}

// int_{a}^{b} dxa int_{lower(xa)}^{upper(xa)} g(xa, xb) f(xa, xb) dxb,
// with b = inf when to_inf is set.
double wedge_band(const Scenario& s, double a, double b, bool to_inf,
                  const std::function<double(double)>& lower,
                  const std::function<double(double)>& upper,
                  const std::function<double(double, double)>& g) {
  auto outer = [&](double xa) {
    return integrate([&](double xb) { return g(xa, xb) * pdf_joint(s, xa, xb); },
                     lower(xa), upper(xa), kInnerAbs, kInnerRel)
        .value;
  };
  return to_inf ? integrate_to_inf(outer, a, kOuterAbs, kOuterRel).value
                : integrate(outer, a, b, kOuterAbs, kOuterRel).value;
}

struct Entry {
  const char* id;
  Fn closed;
  Fn integral;
};

// Defining integrals, straight from the outage/rate event regions. The
// weak-user threshold is g/rho (NOMA) or gamma_tilde/(2 rho) (OMA); the
// strong-user NOMA constraint is x_strong >= (g/rho)(1 + rho x_weak).
const Entry kRegistry[] = {
    {"phi_noma_strong", [](const Scenario& s) { return phi_noma_strong(s); },
     [](const Scenario& s) {
       const double tn = s.gamma() / s.rho();
       return wedge_to_inf(s, 0.0,
                           [&](double xa) { return tn * (1.0 + s.rho() * xa); },
                           [](double, double) { return 1.0; });
     }},
    {"phi_noma_weak", [](const Scenario& s) { return phi_noma_weak(s); },
     [](const Scenario& s) {
       const double tn = s.gamma() / s.rho();
       return wedge_to_inf(s, tn,
                           [&](double xa) { return tn * (1.0 + s.rho() * xa); },
                           [](double, double) { return 1.0; });
     }},
    {"phi_oma_strong", [](const Scenario& s) { return phi_oma_strong(s); },
     [](const Scenario& s) {
       const double t = s.gamma_tilde() / (2.0 * s.rho());
       return integrate_to_inf([&](double x) { return pdf_strong(s, x); }, t,
                               kOuterAbs, kOuterRel)
           .value;
     }},
    {"phi_oma_weak", [](const Scenario& s) { return phi_oma_weak(s); },
     [](const Scenario& s) {
       const double t = s.gamma_tilde() / (2.0 * s.rho());
       return integrate_to_inf([&](double x) { return pdf_weak(s, x); }, t,
                               kOuterAbs, kOuterRel)
           .value;
     }},
    {"ga_ratio", [](const Scenario& s) { return ga_ratio(s); },
     [](const Scenario& s) { return phi_noma_weak(s) / phi_oma_weak(s); }},
    {"rate_noma_weak", [](const Scenario& s) { return rate_noma_weak(s); },
     [](const Scenario& s) {
       const double tn = s.gamma() / s.rho();
       return integrate_to_inf(
                  [&](double x) { return log2_term(1.0 + s.rho() * x) * pdf_weak(s, x); },
                  tn, kOuterAbs, kOuterRel)
           .value;
     }},
    {"rate_noma_strong_solo", [](const Scenario& s) { return rate_noma_strong_solo(s); },
     [](const Scenario& s) {
       const double tn = s.gamma() / s.rho();
       auto outer = [&](double xa) {
         return integrate_to_inf(
                    [&](double xb) {
                      return log2_term(1.0 + s.rho() * xb) * pdf_joint(s, xa, xb);
                    },
                    tn, kInnerAbs, kInnerRel)
             .value;
       };
       return integrate(outer, 0.0, tn, kOuterAbs, kOuterRel).value;
     }},
    {"rate_noma_strong_paired", [](const Scenario& s) { return rate_noma_strong_paired(s); },
     [](const Scenario& s) {
       const double tn = s.gamma() / s.rho();
       return wedge_to_inf(s, tn,
                           [&](double xa) { return tn * (1.0 + s.rho() * xa); },
                           [&](double xa, double xb) {
                             return log2_term(1.0 + s.rho() * xb / (1.0 + s.rho() * xa));
                           });
     }},
    {"rate_noma_strong", [](const Scenario& s) { return rate_noma_strong(s); },
     [](const Scenario& s) {
       return quad_verify(s, "rate_noma_strong_solo").integral +
              quad_verify(s, "rate_noma_strong_paired").integral;
     }},
    {"rate_oma_weak", [](const Scenario& s) { return rate_oma(s).first; },
     [](const Scenario& s) {
       const double t = s.gamma_tilde() / (2.0 * s.rho());
       return integrate_to_inf(
                  [&](double x) {
                    return 0.5 * log2_term(1.0 + 2.0 * s.rho() * x) * pdf_weak(s, x);
                  },
                  t, kOuterAbs, kOuterRel)
           .value;
     }},
    {"rate_oma_strong", [](const Scenario& s) { return rate_oma(s).second; },
     [](const Scenario& s) {
       const double t = s.gamma_tilde() / (2.0 * s.rho());
       return integrate_to_inf(
                  [&](double x) {
                    return 0.5 * log2_term(1.0 + 2.0 * s.rho() * x) * pdf_strong(s, x);
                  },
                  t, kOuterAbs, kOuterRel)
           .value;
     }},
    {"rate_noma_a_weak", [](const Scenario& s) { return rate_noma_a_weak(s); },
     [](const Scenario& s) {
       const double tn = s.gamma() / s.rho();
       const double to = s.gamma_tilde() / (2.0 * s.rho());
       const double noma_part = wedge_to_inf(
           s, tn, [&](double xa) { return tn * (1.0 + s.rho() * xa); },
           [&](double xa, double) { return log2_term(1.0 + s.rho() * xa); });
       const double oma_part = wedge_band(
           s, to, 0.0, true, [](double xa) { return xa; },
           [&](double xa) { return tn * (1.0 + s.rho() * xa); },
           [&](double xa, double) {
             return 0.5 * log2_term(1.0 + 2.0 * s.rho() * xa);
           });
       return noma_part + oma_part;
     }},
    {"rate_noma_a_strong_fallback",
     [](const Scenario& s) { return rate_noma_a_strong_fallback(s); },
     [](const Scenario& s) {
       const double tn = s.gamma() / s.rho();
       const double to = s.gamma_tilde() / (2.0 * s.rho());
       return wedge_band(s, tn, to, false, [](double xa) { return xa; },
                         [&](double xa) { return tn * (1.0 + s.rho() * xa); },
                         [&](double, double xb) { return log2_term(1.0 + s.rho() * xb); });
     }},
    {"rate_noma_a_strong_oma", [](const Scenario& s) { return rate_noma_a_strong_oma(s); },
     [](const Scenario& s) {
       const double tn = s.gamma() / s.rho();
       const double to = s.gamma_tilde() / (2.0 * s.rho());
       return wedge_band(s, to, 0.0, true, [](double xa) { return xa; },
                         [&](double xa) { return tn * (1.0 + s.rho() * xa); },
                         [&](double, double xb) {
                           return 0.5 * log2_term(1.0 + 2.0 * s.rho() * xb);
                         });
     }},
    {"rate_noma_a_strong", [](const Scenario& s) { return rate_noma_a_strong(s); },
     [](const Scenario& s) {
       return quad_verify(s, "rate_noma_strong").integral +
              quad_verify(s, "rate_noma_a_strong_fallback").integral +
              quad_verify(s, "rate_noma_a_strong_oma").integral;
     }},
    {"activity_noma_a",
     [](const Scenario& s) { return activity_probability(s, Strategy::noma_adaptive); },
     [](const Scenario& s) {
       const double tn = s.gamma() / s.rho();
       const double to = s.gamma_tilde() / (2.0 * s.rho());
       const double noma_region = wedge_to_inf(
           s, tn, [&](double xa) { return tn * (1.0 + s.rho() * xa); },
           [](double, double) { return 1.0; });
       const double oma_region = wedge_band(
           s, to, 0.0, true, [](double xa) { return xa; },
           [&](double xa) { return tn * (1.0 + s.rho() * xa); },
           [](double, double) { return 1.0; });
       return noma_region + oma_region;
     }},
};

}  // namespace

FormulaCheck quad_verify(const Scenario& s, std::string_view formula_id) {
  for (const Entry& e : kRegistry) {
    if (formula_id == e.id) {
      FormulaCheck c;
      c.closed = e.closed(s);
      c.integral = e.integral(s);
      c.rel_err = std::abs(c.closed - c.integral) /
                  std::max(std::abs(c.integral), 1e-300);
      return c;
    }
  }
  throw std::invalid_argument("quad_verify: unknown formula id '" +
                              std::string(formula_id) + "'");
}

std::vector<std::string> registered_formulas() {
  std::vector<std::string> ids;
  for (const Entry& e : kRegistry) ids.emplace_back(e.id);
  return ids;
}

}  // namespace noma
