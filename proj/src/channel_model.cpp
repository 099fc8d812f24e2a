#include "noma/channel_model.hpp"

#include <cmath>
#include <stdexcept>

namespace noma {

double db_to_linear(double db) { return std::pow(10.0, db / 10.0); }
double linear_to_db(double v) { return 10.0 * std::log10(v); }

Scenario::Scenario(double p1, double p2, double gamma, double rho)
    : p1_(p1), p2_(p2), gamma_(gamma), rho_(rho) {
  if (!(p1 > 0.0) || !(p2 > 0.0)) throw std::invalid_argument("Scenario: powers must be > 0");
  if (p2 < p1) throw std::invalid_argument("Scenario: requires p2 >= p1");
  if (!(gamma >= 1.0)) throw std::invalid_argument("Scenario: requires gamma >= 1");
  if (!(rho > 0.0)) throw std::invalid_argument("Scenario: requires rho > 0");
}

Scenario Scenario::from_db(double p1, double p2, double gamma_db, double rho_db) {
  return {p1, p2, db_to_linear(gamma_db), db_to_linear(rho_db)};
}

KScenario::KScenario(std::vector<double> powers_in, double gamma_in, double rho_in)
    : powers(std::move(powers_in)), gamma(gamma_in), rho(rho_in) {
  if (powers.size() < 2) throw std::invalid_argument("KScenario: needs at least 2 users");
  double prev = 0.0;
  for (double p : powers) {
    if (!(p > 0.0)) throw std::invalid_argument("KScenario: powers must be > 0");
    if (p < prev) throw std::invalid_argument("KScenario: powers must be ascending");
    prev = p;
  }
  if (!(gamma >= 1.0)) throw std::invalid_argument("KScenario: requires gamma >= 1");
  if (!(rho > 0.0)) throw std::invalid_argument("KScenario: requires rho > 0");
}

KScenario to_k_scenario(const Scenario& s) {
  return KScenario{{s.p1(), s.p2()}, s.gamma(), s.rho()};
}

double pdf_weak(const Scenario& s, double x) {
  if (x < 0.0) throw std::domain_error("pdf_weak: x must be >= 0");
  const double l = s.lambda1() + s.lambda2();
  return l * std::exp(-l * x);
}

double pdf_strong(const Scenario& s, double x) {
  if (x < 0.0) throw std::domain_error("pdf_strong: x must be >= 0");
  const double l1 = s.lambda1(), l2 = s.lambda2();
  return l1 * std::exp(-l1 * x) + l2 * std::exp(-l2 * x) -
         (l1 + l2) * std::exp(-(l1 + l2) * x);
}

double pdf_joint(const Scenario& s, double xa, double xb) {
  if (xa < 0.0 || xb < xa) throw std::domain_error("pdf_joint: requires 0 <= xa <= xb");
  const double l1 = s.lambda1(), l2 = s.lambda2();
  return l1 * l2 * (std::exp(-(l1 * xa + l2 * xb)) + std::exp(-(l2 * xa + l1 * xb)));
}

ChannelSampler::ChannelSampler(const KScenario& s, std::uint64_t seed, std::uint32_t stream)
    : powers_(s.powers), key_{seed, 0x6e6f6d61ull}, stream_(stream) {}

ChannelSampler::ChannelSampler(const Scenario& s, std::uint64_t seed, std::uint32_t stream)
    : ChannelSampler(to_k_scenario(s), seed, stream) {}

void ChannelSampler::draw(std::uint64_t index, std::span<double> out) const {
  const int k = static_cast<int>(powers_.size());
  Philox4x64::Block block{};
  for (int j = 0; j < k; ++j) {
    if (j % 4 == 0) {
      block = Philox4x64::generate(
          key_, {index, static_cast<std::uint64_t>(j / 4),
                 static_cast<std::uint64_t>(stream_), 0});
    }
    out[j] = powers_[j] * exponential_unit(block[j % 4]);
  }
  // insertion sort: k is tiny and stability keeps ties in user order
  for (int i = 1; i < k; ++i) {
    const double v = out[i];
    int j = i - 1;
    while (j >= 0 && out[j] > v) {
      out[j + 1] = out[j];
      --j;
    }
    out[j + 1] = v;
  }
}

std::pair<double, double> ChannelSampler::draw2(std::uint64_t index) const {
  const Philox4x64::Block block = Philox4x64::generate(
      key_, {index, 0, static_cast<std::uint64_t>(stream_), 0});
  const double x1 = powers_[0] * exponential_unit(block[0]);
  const double x2 = powers_[1] * exponential_unit(block[1]);
  return x1 > x2 ? std::pair{x2, x1} : std::pair{x1, x2};
}

ChannelDraw ChannelSampler::draw_vec(std::uint64_t index) const {
  ChannelDraw d;
  d.x.resize(powers_.size());
  draw(index, d.x);
  return d;
}

}  // namespace noma
