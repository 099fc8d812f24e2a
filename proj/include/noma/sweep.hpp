#pragma once

#include <cstdint>
#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

#include "noma/monte_carlo.hpp"

namespace noma {

enum class Metric { throughput, rate, activity, rho_min, asymptote };
enum class Engine { closed_form, monte_carlo, quadrature };

const char* to_string(Metric m);
const char* to_string(Engine e);

struct RhoRangeDb {
  double start = 0.0;
  double stop = 0.0;
  double step = 1.0;
  std::vector<double> values() const;  // inclusive of stop within half a step
};

/// Axis definitions for one experiment. p1/gamma_db may be grids; p2 is
/// either fixed or the complement 1 - p1. Setting k_powers (3 or more
/// entries) switches to the K-user Monte Carlo path, where the candidate
/// strategies are the canonical mixed partitions.
struct SweepSpec {
  std::vector<double> p1{0.1};
  std::optional<double> p2;  // nullopt: complement convention
  std::vector<double> gamma_db{10.0};
  RhoRangeDb rho_db{-10.0, 40.0, 5.0};
  std::vector<Strategy> strategies{Strategy::oma, Strategy::noma, Strategy::noma_adaptive};
  std::vector<Metric> metrics{Metric::throughput};
  std::vector<Engine> engines{Engine::closed_form};
  std::int64_t samples = 1'000'000;
  std::uint64_t seed = 1;
  int threads = 0;
  std::string output_path = "sweep.csv";
  std::vector<double> k_powers;  // empty: two-user mode

  void validate() const;  // throws std::invalid_argument naming the field
};

/// One output cell. Empty optionals serialize as empty CSV fields.
struct CsvRow {
  double p1 = 0, p2 = 0, gamma = 0, gamma_db = 0;
  std::optional<double> rho, rho_db;
  std::string strategy, metric, engine;
  std::optional<double> value_weak, value_strong, value_sum;
  std::optional<double> stderr_weak, stderr_strong, stderr_sum;
  std::optional<std::int64_t> samples;
  std::optional<std::uint64_t> seed;
};

std::string csv_header();
std::string format_csv_row(const CsvRow& row);
CsvRow parse_csv_row(const std::string& line);

struct SweepResult {
  std::size_t rows = 0;
  std::string path;
};

/// Evaluates the full grid and writes one CsvRow per cell in deterministic
/// grid order; a short summary goes to `summary`.
SweepResult run_sweep(const SweepSpec& spec, std::ostream& summary);

/// rho_min per (p1, gamma) cell under the complement convention
/// P2 = 1 - P1, reported in dB with "inf" for cells with no finite
/// crossover.
SweepResult rho_min_map(const std::vector<double>& p1_grid,
                        const std::vector<double>& gamma_db_grid,
                        const std::string& output_path, std::ostream& summary);

}  // namespace noma
