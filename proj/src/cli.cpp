#include "noma/cli.hpp"

#include <CLI11.hpp>

#include <cstdlib>
#include <fstream>
#include <iostream>
#include <map>
#include <sstream>

#include "noma/sweep.hpp"
#include "noma/verify.hpp"

namespace noma {

namespace {

// Option resolution order: command-line flag, then NOMA_<FLAG> environment
// variable, then config-file entry, then default. The config format is
// flat key=value with '#' comments; keys match the long flag names.
class Options {
 public:
  void set_flag(const std::string& key, const std::string& value) { flags_[key] = value; }

  void load_config(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw std::invalid_argument("cannot read config file '" + path + "'");
    std::string line;
    int lineno = 0;
    while (std::getline(in, line)) {
      ++lineno;
      const auto hash = line.find('#');
      if (hash != std::string::npos) line.erase(hash);
      const std::string trimmed = trim(line);
      if (trimmed.empty()) continue;
      const auto eq = trimmed.find('=');
      if (eq == std::string::npos)
        throw std::invalid_argument("config line " + std::to_string(lineno) +
                                    ": expected key=value");
      config_[trim(trimmed.substr(0, eq))] = trim(trimmed.substr(eq + 1));
    }
  }

  std::optional<std::string> get(const std::string& key) const {
    if (auto it = flags_.find(key); it != flags_.end()) return it->second;
    std::string env_name = "NOMA_";
    for (char c : key) env_name += c == '-' ? '_' : static_cast<char>(std::toupper(c));
    if (const char* env = std::getenv(env_name.c_str())) return std::string(env);
    if (auto it = config_.find(key); it != config_.end()) return it->second;
    return std::nullopt;
  }

  double get_double(const std::string& key, double fallback) const {
    const auto v = get(key);
    if (!v) return fallback;
    return parse_one_double(key, *v);
  }

  static double parse_one_double(const std::string& key, const std::string& v) {
    try {
      std::size_t used = 0;
      const double d = std::stod(v, &used);
      if (used != v.size()) throw std::invalid_argument("");
      return d;
    } catch (...) {
      throw std::invalid_argument("field '" + key + "': not a number: '" + v + "'");
    }
  }

  // "a,b,c" or "start:stop:step"
  std::vector<double> get_grid(const std::string& key, std::vector<double> fallback) const {
    const auto v = get(key);
    if (!v) return fallback;
    std::vector<double> out;
    if (v->find(':') != std::string::npos) {
      const auto parts = split(*v, ':');
      if (parts.size() != 3)
        throw std::invalid_argument("field '" + key + "': expected start:stop:step");
      const double start = parse_one_double(key, parts[0]);
      const double stop = parse_one_double(key, parts[1]);
      const double step = parse_one_double(key, parts[2]);
      if (!(step > 0.0)) throw std::invalid_argument("field '" + key + "': step must be > 0");
      for (double x = start; x <= stop + 0.5 * step; x += step) out.push_back(x);
      return out;
    }
    for (const std::string& p : split(*v, ','))
      out.push_back(parse_one_double(key, p));
    return out;
  }

  static std::vector<std::string> split(const std::string& s, char sep) {
    std::vector<std::string> out;
    std::string cur;
    for (char c : s) {
      if (c == sep) {
        out.push_back(trim(cur));
        cur.clear();
      } else {
        cur += c;
      }
    }
    out.push_back(trim(cur));
    return out;
  }

  static std::string trim(const std::string& s) {
    const auto b = s.find_first_not_of(" \t\r");
    if (b == std::string::npos) return "";
    const auto e = s.find_last_not_of(" \t\r");
    return s.substr(b, e - b + 1);
  }

 private:
  std::map<std::string, std::string> flags_;
  std::map<std::string, std::string> config_;
};

Strategy parse_strategy(const std::string& s) {
  if (s == "oma") return Strategy::oma;
  if (s == "noma") return Strategy::noma;
  if (s == "noma_a" || s == "noma-a") return Strategy::noma_adaptive;
  throw std::invalid_argument("field 'strategies': unknown strategy '" + s + "'");
}

Metric parse_metric(const std::string& s) {
  if (s == "throughput") return Metric::throughput;
  if (s == "rate") return Metric::rate;
  if (s == "activity") return Metric::activity;
  if (s == "rho_min" || s == "rho-min") return Metric::rho_min;
  if (s == "asymptote") return Metric::asymptote;
  throw std::invalid_argument("field 'metrics': unknown metric '" + s + "'");
}

Engine parse_engine(const std::string& s) {
  if (s == "closed_form" || s == "closed-form") return Engine::closed_form;
  if (s == "monte_carlo" || s == "monte-carlo") return Engine::monte_carlo;
  if (s == "quadrature") return Engine::quadrature;
  throw std::invalid_argument("field 'engines': unknown engine '" + s + "'");
}

SweepSpec build_spec(const Options& opt) {
  SweepSpec spec;
  spec.p1 = opt.get_grid("p1", spec.p1);
  if (const auto v = opt.get("p2")) {
    if (*v == "complement")
      spec.p2.reset();
    else
      spec.p2 = Options::parse_one_double("p2", *v);
  }
  spec.gamma_db = opt.get_grid("gamma-db", spec.gamma_db);
  spec.rho_db.start = opt.get_double("rho-db-start", spec.rho_db.start);
  spec.rho_db.stop = opt.get_double("rho-db-stop", spec.rho_db.stop);
  spec.rho_db.step = opt.get_double("rho-db-step", spec.rho_db.step);
  if (const auto v = opt.get("strategies")) {
    spec.strategies.clear();
    for (const std::string& p : Options::split(*v, ','))
      spec.strategies.push_back(parse_strategy(p));
  }
  if (const auto v = opt.get("metrics")) {
    spec.metrics.clear();
    for (const std::string& p : Options::split(*v, ','))
      spec.metrics.push_back(parse_metric(p));
  }
  if (const auto v = opt.get("engines")) {
    spec.engines.clear();
    for (const std::string& p : Options::split(*v, ','))
      spec.engines.push_back(parse_engine(p));
  }
  spec.samples = static_cast<std::int64_t>(opt.get_double("samples", static_cast<double>(spec.samples)));
  spec.seed = static_cast<std::uint64_t>(opt.get_double("seed", static_cast<double>(spec.seed)));
  spec.threads = static_cast<int>(opt.get_double("threads", 0.0));
  if (const auto v = opt.get("output")) spec.output_path = *v;
  if (const auto v = opt.get("powers")) {
    spec.k_powers.clear();
    for (const std::string& p : Options::split(*v, ','))
      spec.k_powers.push_back(Options::parse_one_double("powers", p));
  }
  return spec;
}

void add_passthrough(CLI::App* cmd, Options& opt, const std::vector<std::string>& keys) {
  for (const std::string& key : keys) {
    auto setter = [&opt, key](const std::string& v) { opt.set_flag(key, v); };
    cmd->add_option_function<std::string>("--" + key, setter);
  }
}

int cmd_sweep(const Options& opt) {
  const SweepSpec spec = build_spec(opt);
  run_sweep(spec, std::cout);
  return 0;
}

int cmd_rho_min_map(const Options& opt) {
  const std::vector<double> p1 = opt.get_grid("p1", {0.05, 0.1, 0.15, 0.2, 0.25, 0.3,
                                                     0.35, 0.4, 0.45, 0.5});
  const std::vector<double> gdb = opt.get_grid("gamma-db", {0, 2, 4, 6, 8, 10, 12, 14});
  std::string output = opt.get("output").value_or("rho_min_map.csv");
  rho_min_map(p1, gdb, output, std::cout);
  return 0;
}

int cmd_verify(const Options& opt) {
  const std::string level_str = opt.get("level").value_or("fast");
  VerifyLevel level;
  if (level_str == "fast")
    level = VerifyLevel::fast;
  else if (level_str == "full")
    level = VerifyLevel::full;
  else
    throw std::invalid_argument("field 'level': expected fast or full");
  const int threads = static_cast<int>(opt.get_double("threads", 0.0));
  const auto results = run_verify(level, std::cout, threads);
  std::size_t passed = 0;
  for (const auto& r : results) passed += r.pass ? 1 : 0;
  std::cout << passed << "/" << results.size() << " checks passed\n";
  return all_passed(results) ? 0 : 1;
}

int cmd_decide(const Options& opt) {
  const double p1 = opt.get_double("p1", 0.1);
  const double p2 = opt.get_double("p2", 0.9);
  const double gamma_db = opt.get_double("gamma-db", 10.0);
  const double rho_db = opt.get_double("rho-db", 10.0);
  const auto xa = opt.get("xa");
  const auto xb = opt.get("xb");
  if (!xa || !xb) throw std::invalid_argument("field 'xa'/'xb': both are required");
  const Scenario s = Scenario::from_db(p1, p2, gamma_db, rho_db);
  const StrategyDecision d =
      decide_noma_a(s, Options::parse_one_double("xa", *xa), Options::parse_one_double("xb", *xb));
  std::cout << "mode=" << to_string(d.mode) << " active_weak=" << (d.active_weak ? 1 : 0)
            << " active_strong=" << (d.active_strong ? 1 : 0) << "\n";
  return 0;
}

}  // namespace

int run_cli(const std::vector<std::string>& args) {
  CLI::App app{"uplink NOMA/OMA performance analysis"};
  app.require_subcommand(1);

  Options opt;
  std::string config_path;

  const std::vector<std::string> sweep_keys = {
      "p1", "p2", "gamma-db", "rho-db-start", "rho-db-stop", "rho-db-step",
      "strategies", "metrics", "engines", "samples", "seed", "threads",
      "output", "powers"};

  CLI::App* sweep = app.add_subcommand("sweep", "run a parameter sweep and write CSV");
  add_passthrough(sweep, opt, sweep_keys);
  sweep->add_option("--config", config_path, "flat key=value config file");

  CLI::App* verify = app.add_subcommand("verify", "run the verification suite");
  add_passthrough(verify, opt, {"level", "threads"});

  CLI::App* map = app.add_subcommand("rho-min-map", "rho_min over a (p1, gamma) grid");
  add_passthrough(map, opt, {"p1", "gamma-db", "output"});

  CLI::App* decide = app.add_subcommand("decide", "print the adaptive decision for one draw");
  add_passthrough(decide, opt, {"p1", "p2", "gamma-db", "rho-db", "xa", "xb"});

  try {
    std::vector<std::string> reversed(args.rbegin(), args.rend());
    app.parse(reversed);
  } catch (const CLI::ParseError& e) {
    return app.exit(e);
  }

  try {
    if (!config_path.empty()) opt.load_config(config_path);
    if (sweep->parsed()) return cmd_sweep(opt);
    if (verify->parsed()) return cmd_verify(opt);
    if (map->parsed()) return cmd_rho_min_map(opt);
    if (decide->parsed()) return cmd_decide(opt);
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 2;
  }
  return 0;
}

}  // namespace noma
