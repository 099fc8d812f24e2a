#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <sstream>

#include "noma/cli.hpp"
#include "noma/sweep.hpp"

using namespace noma;

namespace {

std::string read_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

std::vector<CsvRow> read_rows(const std::string& path) {
  std::ifstream in(path);
  std::string line;
  REQUIRE(std::getline(in, line));
  REQUIRE(line == csv_header());
  std::vector<CsvRow> rows;
  while (std::getline(in, line)) rows.push_back(parse_csv_row(line));
  return rows;
}

struct TempFile {
  std::string path;
  explicit TempFile(std::string p) : path(std::move(p)) {}
  ~TempFile() { std::remove(path.c_str()); }
};

}  // namespace

TEST_CASE("spec validation names the offending field") {
  SweepSpec spec;
  spec.strategies.clear();
  CHECK_THROWS_WITH_AS(spec.validate(),
                       "invalid sweep spec: field 'strategies' must not be empty",
                       std::invalid_argument);
  spec = SweepSpec{};
  spec.rho_db = {30.0, 10.0, 5.0};
  CHECK_THROWS_AS(spec.validate(), std::invalid_argument);
  spec = SweepSpec{};
  spec.engines = {Engine::monte_carlo};
  spec.samples = 10;
  CHECK_THROWS_AS(spec.validate(), std::invalid_argument);
  spec = SweepSpec{};
  spec.p1 = {1.2};  // complement convention needs p1 < 1
  CHECK_THROWS_AS(spec.validate(), std::invalid_argument);
}

TEST_CASE("rho grid includes the endpoint") {
  const RhoRangeDb r{-10.0, 40.0, 5.0};
  const auto v = r.values();
  REQUIRE(v.size() == 11);
  CHECK(v.front() == -10.0);
  CHECK(v.back() == 40.0);
}

TEST_CASE("csv rows round-trip at full precision") {
  CsvRow r;
  r.p1 = 0.1;
  r.p2 = 0.9;
  r.gamma = 10.0;
  r.gamma_db = 10.0;
  r.rho = 3.1622776601683795e3;
  r.rho_db = 35.0;
  r.strategy = "noma";
  r.metric = "rate";
  r.engine = "monte_carlo";
  r.value_weak = 1.234567890123456789e-7;
  r.value_sum = std::numeric_limits<double>::infinity();
  r.stderr_weak = 4.9406564584124654e-324;  // denormal survives too
  r.samples = 1000000;
  r.seed = 42;
  const CsvRow back = parse_csv_row(format_csv_row(r));
  CHECK(back.p1 == r.p1);
  CHECK(*back.rho == *r.rho);
  CHECK(*back.value_weak == *r.value_weak);
  CHECK(*back.value_sum == *r.value_sum);
  CHECK(*back.stderr_weak == *r.stderr_weak);
  CHECK(!back.value_strong.has_value());
  CHECK(!back.stderr_sum.has_value());
  CHECK(*back.samples == 1000000);
  CHECK(*back.seed == 42);
  CHECK(back.strategy == "noma");
}

TEST_CASE("closed-form sweep reproduces the throughput crossover") {
  TempFile tmp("test_sweep_fig2.csv");
  SweepSpec spec;
  spec.p1 = {0.1};
  spec.p2 = 0.9;
  spec.gamma_db = {10.0};
  spec.rho_db = {0.0, 40.0, 40.0};  // the two endpoints
  spec.strategies = {Strategy::noma, Strategy::oma};
  spec.metrics = {Metric::throughput};
  spec.engines = {Engine::closed_form};
  spec.output_path = tmp.path;
  std::ostringstream sink;
  const SweepResult res = run_sweep(spec, sink);
  CHECK(res.rows == 4);

  const auto rows = read_rows(tmp.path);
  REQUIRE(rows.size() == 4);
  auto sum_of = [&](const std::string& strat, double rho_db) {
    for (const CsvRow& r : rows)
      if (r.strategy == strat && *r.rho_db == rho_db) return *r.value_sum;
    FAIL("row not found");
    return 0.0;
  };
  CHECK(sum_of("noma", 0.0) > sum_of("oma", 0.0));
  CHECK(sum_of("noma", 40.0) < sum_of("oma", 40.0));
  for (const CsvRow& r : rows) CHECK(!r.stderr_sum.has_value());
}

TEST_CASE("monte carlo sweep is byte-identical across reruns and thread counts") {
  TempFile a("test_sweep_a.csv"), b("test_sweep_b.csv");
  SweepSpec spec;
  spec.p1 = {0.1};
  spec.p2 = 0.9;
  spec.gamma_db = {10.0};
  spec.rho_db = {10.0, 20.0, 10.0};
  spec.strategies = {Strategy::noma, Strategy::noma_adaptive};
  spec.metrics = {Metric::throughput, Metric::rate, Metric::activity};
  spec.engines = {Engine::closed_form, Engine::monte_carlo};
  spec.samples = 100'000;
  spec.seed = 7;
  spec.output_path = a.path;
  std::ostringstream sink;
  run_sweep(spec, sink);
  spec.output_path = b.path;
  spec.threads = 3;
  run_sweep(spec, sink);
  const std::string ca = read_file(a.path);
  CHECK(!ca.empty());
  CHECK(ca == read_file(b.path));
  // LF line endings only
  CHECK(ca.find('\r') == std::string::npos);
}

TEST_CASE("rho-min map emits inf sentinels where no crossover exists") {
  TempFile tmp("test_rho_min_map.csv");
  std::ostringstream sink;
  rho_min_map({0.1, 0.3}, {0.0, 10.0}, tmp.path, sink);
  const auto rows = read_rows(tmp.path);
  REQUIRE(rows.size() == 4);
  for (const CsvRow& r : rows) {
    CHECK(r.metric == "rho_min_db");
    if (r.gamma_db == 0.0) CHECK(std::isinf(*r.value_weak));  // gamma = 1
    if (r.gamma_db == 10.0) CHECK(std::isfinite(*r.value_weak));
  }
}

TEST_CASE("asymptote metric emits slope and intercept rows") {
  TempFile tmp("test_sweep_asym.csv");
  SweepSpec spec;
  spec.p1 = {0.1};
  spec.p2 = 0.9;
  spec.gamma_db = {10.0};
  spec.rho_db = {40.0, 40.5, 1.0};
  spec.strategies = {Strategy::noma};
  spec.metrics = {Metric::asymptote};
  spec.engines = {Engine::closed_form};
  spec.output_path = tmp.path;
  std::ostringstream sink;
  run_sweep(spec, sink);
  const auto rows = read_rows(tmp.path);
  REQUIRE(rows.size() == 2);
  CHECK(rows[0].metric == "asymptote_slope");
  CHECK(rows[1].metric == "asymptote_intercept");
  CHECK(*rows[0].value_sum == doctest::Approx(1.0 / std::log(2.0)));
}

TEST_CASE("k-user sweep emits one row per strategy") {
  TempFile tmp("test_sweep_k3.csv");
  SweepSpec spec;
  spec.gamma_db = {10.0};
  spec.rho_db = {10.0, 10.5, 1.0};
  spec.metrics = {Metric::throughput, Metric::activity};
  spec.engines = {Engine::monte_carlo};
  spec.samples = 50'000;
  spec.k_powers = {0.05, 0.15, 0.8};
  spec.output_path = tmp.path;
  std::ostringstream sink;
  run_sweep(spec, sink);
  const auto rows = read_rows(tmp.path);
  // throughput: 5 fixed strategies; activity: 5 fixed + adaptive
  CHECK(rows.size() == 11);
  int adaptive_rows = 0;
  for (const CsvRow& r : rows) adaptive_rows += r.strategy == "noma_a" ? 1 : 0;
  CHECK(adaptive_rows == 1);
}

TEST_CASE("cli: flags, config file and env give identical results") {
  TempFile csv_flags("test_cli_flags.csv"), csv_config("test_cli_config.csv"),
      csv_env("test_cli_env.csv"), config("test_cli.conf");
  {
    std::ofstream conf(config.path);
    conf << "# comment line\n"
         << "p1 = 0.1\np2 = 0.9\ngamma-db = 10\n"
         << "rho-db-start = 0\nrho-db-stop = 10\nrho-db-step = 5\n"
         << "strategies = noma,oma\nmetrics = throughput\nengines = closed_form\n"
         << "output = " << csv_config.path << "\n";
  }
  CHECK(run_cli({"sweep", "--p1", "0.1", "--p2", "0.9", "--gamma-db", "10",
                 "--rho-db-start", "0", "--rho-db-stop", "10", "--rho-db-step", "5",
                 "--strategies", "noma,oma", "--metrics", "throughput", "--engines",
                 "closed_form", "--output", csv_flags.path}) == 0);
  CHECK(run_cli({"sweep", "--config", config.path}) == 0);
  const std::string body_flags = read_file(csv_flags.path);
  CHECK(!body_flags.empty());
  CHECK(body_flags == read_file(csv_config.path));

  // flag overrides config; env fills what neither provides
  setenv("NOMA_OUTPUT", csv_env.path.c_str(), 1);
  CHECK(run_cli({"sweep", "--config", config.path, "--strategies", "noma,oma"}) == 0);
  unsetenv("NOMA_OUTPUT");
  CHECK(body_flags == read_file(csv_env.path));
}

TEST_CASE("cli: invalid input reports the field and exits nonzero") {
  CHECK(run_cli({"sweep", "--strategies", "sideways"}) == 2);
  CHECK(run_cli({"sweep", "--rho-db-start", "10", "--rho-db-stop", "0"}) == 2);
  CHECK(run_cli({"verify", "--level", "bogus"}) == 2);
  CHECK(run_cli({"decide", "--p1", "0.1", "--p2", "0.9", "--xa", "0.5", "--xb", "0.2"}) == 2);
  CHECK(run_cli({"no-such-verb"}) != 0);
}

TEST_CASE("cli: decide prints a mode") {
  CHECK(run_cli({"decide", "--p1", "0.1", "--p2", "0.9", "--gamma-db", "10", "--rho-db",
                 "20", "--xa", "0.5", "--xb", "100"}) == 0);
}
