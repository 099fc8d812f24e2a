#pragma once

#include <cstdint>
#include <span>
#include <utility>
#include <vector>

#include "noma/rng.hpp"

namespace noma {

double db_to_linear(double db);
double linear_to_db(double v);

/// Two-user uplink large-scale parameters, all linear. Received power of
/// user i is x_i = P_i |h_i|^2 with |h_i|^2 unit-mean exponential, so x_i
/// is exponential with rate lambda_i = 1/P_i. Convention: p2 >= p1 and
/// gamma >= 1 (enforced); rho is the average SNR 1/N0.
class Scenario {
 public:
  Scenario(double p1, double p2, double gamma, double rho);
  static Scenario from_db(double p1, double p2, double gamma_db, double rho_db);

  double p1() const { return p1_; }
  double p2() const { return p2_; }
  double gamma() const { return gamma_; }
  double rho() const { return rho_; }

  double lambda1() const { return 1.0 / p1_; }  // lambda1 >= lambda2
  double lambda2() const { return 1.0 / p2_; }

  /// OMA SNR threshold making one active slot carry the information of two:
  /// gamma_tilde = 2 gamma + gamma^2 > 2 gamma.
  double gamma_tilde() const { return gamma_ * (2.0 + gamma_); }

  double gamma_db() const { return linear_to_db(gamma_); }
  double rho_db() const { return linear_to_db(rho_); }

  Scenario with_rho(double rho) const { return {p1_, p2_, gamma_, rho}; }

 private:
  double p1_, p2_, gamma_, rho_;
};

/// K ordered users; powers ascending, gamma >= 1 shared by all users.
struct KScenario {
  std::vector<double> powers;
  double gamma = 1.0;
  double rho = 1.0;

  KScenario(std::vector<double> powers_in, double gamma_in, double rho_in);
  int k() const { return static_cast<int>(powers.size()); }
};

KScenario to_k_scenario(const Scenario& s);

/// pdf of the weakest received power: (l1+l2) exp(-(l1+l2) x).
double pdf_weak(const Scenario& s, double x);

/// pdf of the strongest received power:
/// l1 exp(-l1 x) + l2 exp(-l2 x) - (l1+l2) exp(-(l1+l2) x).
double pdf_strong(const Scenario& s, double x);

/// Joint pdf of (weak, strong) on the wedge 0 <= xa <= xb:
/// l1 l2 (exp(-(l1 xa + l2 xb)) + exp(-(l2 xa + l1 xb))).
double pdf_joint(const Scenario& s, double xa, double xb);

/// One ordered fading realization: entries ascending, x[0] the weakest.
struct ChannelDraw {
  std::vector<double> x;
  double weak() const { return x.front(); }
  double strong() const { return x.back(); }
};

/// Counter-based channel sampler. draw(i, ...) is a pure function of
/// (seed, stream, i): streams can be consumed in any order, split across
/// threads, or revisited, and always reproduce the same realizations.
/// Sorting ties (probability zero) keep the original user order.
class ChannelSampler {
 public:
  ChannelSampler(const KScenario& s, std::uint64_t seed, std::uint32_t stream = 0);
  ChannelSampler(const Scenario& s, std::uint64_t seed, std::uint32_t stream = 0);

  int k() const { return static_cast<int>(powers_.size()); }

  /// Fills out[0..k) with the i-th draw, sorted ascending.
  void draw(std::uint64_t index, std::span<double> out) const;

  /// Two-user fast path: (weak, strong).
  std::pair<double, double> draw2(std::uint64_t index) const;

  ChannelDraw draw_vec(std::uint64_t index) const;

 private:
  std::vector<double> powers_;
  Philox4x64::Key key_;
  std::uint32_t stream_;
};

}  // namespace noma
