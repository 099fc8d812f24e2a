#include "noma/sweep.hpp"

#include <charconv>
#include <cmath>
#include <fstream>
#include <limits>
#include <ostream>
#include <stdexcept>

#include "noma/formula_checks.hpp"

namespace noma {

const char* to_string(Metric m) {
  switch (m) {
    case Metric::throughput: return "throughput";
    case Metric::rate: return "rate";
    case Metric::activity: return "activity";
    case Metric::rho_min: return "rho_min";
    case Metric::asymptote: return "asymptote";
  }
  return "?";
}

const char* to_string(Engine e) {
  switch (e) {
    case Engine::closed_form: return "closed_form";
    case Engine::monte_carlo: return "monte_carlo";
    case Engine::quadrature: return "quadrature";
  }
  return "?";
}

std::vector<double> RhoRangeDb::values() const {
  std::vector<double> v;
  for (double x = start; x <= stop + 0.5 * step; x += step) v.push_back(x);
  return v;
}

void SweepSpec::validate() const {
  auto fail = [](const std::string& field, const std::string& why) {
    throw std::invalid_argument("invalid sweep spec: field '" + field + "' " + why);
  };
  if (p1.empty()) fail("p1", "must not be empty");
  for (double v : p1)
    if (!(v > 0.0)) fail("p1", "entries must be > 0");
  if (p2 && !(*p2 > 0.0)) fail("p2", "must be > 0");
  if (!p2)
    for (double v : p1)
      if (!(v < 1.0)) fail("p1", "must be < 1 under the complement convention");
  if (gamma_db.empty()) fail("gamma-db", "must not be empty");
  for (double v : gamma_db)
    if (v < 0.0) fail("gamma-db", "entries must be >= 0 dB (gamma >= 1)");
  if (!(rho_db.step > 0.0)) fail("rho-db-step", "must be > 0");
  if (!(rho_db.start < rho_db.stop)) fail("rho-db-start", "must be < rho-db-stop");
  if (strategies.empty()) fail("strategies", "must not be empty");
  if (metrics.empty()) fail("metrics", "must not be empty");
  if (engines.empty()) fail("engines", "must not be empty");
  bool wants_mc = false;
  for (Engine e : engines) wants_mc = wants_mc || e == Engine::monte_carlo;
  if (wants_mc && samples < 1000) fail("samples", "must be >= 1000 with the monte_carlo engine");
  if (output_path.empty()) fail("output", "must not be empty");
  if (!k_powers.empty()) {
    if (k_powers.size() < 3) fail("powers", "needs at least 3 entries");
    double prev = 0.0;
    for (double p : k_powers) {
      if (!(p > 0.0)) fail("powers", "entries must be > 0");
      if (p < prev) fail("powers", "entries must be ascending");
      prev = p;
    }
    if (!wants_mc) fail("engines", "K-user sweeps support only monte_carlo");
  }
}

namespace {

std::string format_double(double v) {
  if (std::isinf(v)) return v > 0 ? "inf" : "-inf";
  char buf[40];
  auto [ptr, ec] = std::to_chars(buf, buf + sizeof buf, v, std::chars_format::scientific);
  if (ec != std::errc()) throw std::runtime_error("csv: number formatting failed");
  return {buf, ptr};
}

double parse_double(std::string_view sv) {
  if (sv == "inf") return std::numeric_limits<double>::infinity();
  if (sv == "-inf") return -std::numeric_limits<double>::infinity();
  double v = 0.0;
  auto [ptr, ec] = std::from_chars(sv.data(), sv.data() + sv.size(), v);
  if (ec != std::errc() || ptr != sv.data() + sv.size())
    throw std::runtime_error("csv: bad numeric field '" + std::string(sv) + "'");
  return v;
}

template <typename T>
std::string opt_str(const std::optional<T>& v) {
  if (!v) return "";
  if constexpr (std::is_same_v<T, double>)
    return format_double(*v);
  else
    return std::to_string(*v);
}

std::vector<std::string> split_csv_line(const std::string& line) {
  std::vector<std::string> out;
  std::string cur;
  for (char c : line) {
    if (c == ',') {
      out.push_back(cur);
      cur.clear();
    } else {
      cur += c;
    }
  }
  out.push_back(cur);
  return out;
}

}  // namespace

std::string csv_header() {
  return "p1,p2,gamma,gamma_db,rho,rho_db,strategy,metric,engine,"
         "value_weak,value_strong,value_sum,stderr_weak,stderr_strong,stderr_sum,"
         "samples,seed";
}

std::string format_csv_row(const CsvRow& r) {
  std::string out;
  out += format_double(r.p1);
  out += ',';
  out += format_double(r.p2);
  out += ',';
  out += format_double(r.gamma);
  out += ',';
  out += format_double(r.gamma_db);
  out += ',';
  out += opt_str(r.rho);
  out += ',';
  out += opt_str(r.rho_db);
  out += ',';
  out += r.strategy;
  out += ',';
  out += r.metric;
  out += ',';
  out += r.engine;
  out += ',';
  out += opt_str(r.value_weak);
  out += ',';
  out += opt_str(r.value_strong);
  out += ',';
  out += opt_str(r.value_sum);
  out += ',';
  out += opt_str(r.stderr_weak);
  out += ',';
  out += opt_str(r.stderr_strong);
  out += ',';
  out += opt_str(r.stderr_sum);
  out += ',';
  out += opt_str(r.samples);
  out += ',';
  out += opt_str(r.seed);
  return out;
}

CsvRow parse_csv_row(const std::string& line) {
  const std::vector<std::string> f = split_csv_line(line);
  if (f.size() != 17) throw std::runtime_error("csv: expected 17 fields");
  CsvRow r;
  r.p1 = parse_double(f[0]);
  r.p2 = parse_double(f[1]);
  r.gamma = parse_double(f[2]);
  r.gamma_db = parse_double(f[3]);
  auto opt_d = [&](const std::string& s) -> std::optional<double> {
    if (s.empty()) return std::nullopt;
    return parse_double(s);
  };
  r.rho = opt_d(f[4]);
  r.rho_db = opt_d(f[5]);
  r.strategy = f[6];
  r.metric = f[7];
  r.engine = f[8];
  r.value_weak = opt_d(f[9]);
  r.value_strong = opt_d(f[10]);
  r.value_sum = opt_d(f[11]);
  r.stderr_weak = opt_d(f[12]);
  r.stderr_strong = opt_d(f[13]);
  r.stderr_sum = opt_d(f[14]);
  if (!f[15].empty()) r.samples = std::stoll(f[15]);
  if (!f[16].empty()) r.seed = std::stoull(f[16]);
  return r;
}

namespace {

bool combo_supported(Metric m, Engine e, bool k_user) {
  if (k_user) {
    return e == Engine::monte_carlo &&
           (m == Metric::throughput || m == Metric::rate || m == Metric::activity);
  }
  switch (m) {
    case Metric::throughput:
    case Metric::rate:
    case Metric::activity:
      return true;
    case Metric::rho_min:
    case Metric::asymptote:
      return e == Engine::closed_form;
  }
  return false;
}

void fill_base(CsvRow& row, const Scenario& s) {
  row.p1 = s.p1();
  row.p2 = s.p2();
  row.gamma = s.gamma();
  row.gamma_db = s.gamma_db();
}

std::vector<CsvRow> two_user_cell(const SweepSpec& spec, const Scenario& s,
                                  double rho_db, Strategy strat, Metric metric,
                                  Engine engine) {
  CsvRow row;
  fill_base(row, s);
  row.rho = s.rho();
  row.rho_db = rho_db;
  row.strategy = to_string(strat);
  row.metric = to_string(metric);
  row.engine = to_string(engine);

  switch (metric) {
    case Metric::throughput: {
      if (engine == Engine::closed_form) {
        const ThroughputReport t = throughput(s, strat);
        row.value_weak = t.weak;
        row.value_strong = t.strong;
        row.value_sum = t.sum;
      } else if (engine == Engine::monte_carlo) {
        const McPerUser t = mc_throughput(s, strat, spec.samples, spec.seed, spec.threads);
        row.value_weak = t.user[0].mean;
        row.value_strong = t.user[1].mean;
        row.value_sum = t.sum.mean;
        row.stderr_weak = t.user[0].std_error;
        row.stderr_strong = t.user[1].std_error;
        row.stderr_sum = t.sum.std_error;
        row.samples = spec.samples;
        row.seed = spec.seed;
      } else {  // quadrature: phi integrals times the fixed information quantity
        const Strategy eff = strat == Strategy::noma_adaptive ? select_no_csit(s) : strat;
        const double bits = std::log2(1.0 + s.gamma());
        const char* weak_id = eff == Strategy::noma ? "phi_noma_weak" : "phi_oma_weak";
        const char* strong_id = eff == Strategy::noma ? "phi_noma_strong" : "phi_oma_strong";
        row.value_weak = quad_verify(s, weak_id).integral * bits;
        row.value_strong = quad_verify(s, strong_id).integral * bits;
        row.value_sum = *row.value_weak + *row.value_strong;
      }
      break;
    }
    case Metric::rate: {
      if (engine == Engine::closed_form) {
        const RateReport r = rate_report(s, strat);
        row.value_weak = r.weak;
        row.value_strong = r.strong;
        row.value_sum = r.sum;
      } else if (engine == Engine::monte_carlo) {
        const McRates r = mc_rate_full_csit(s, strat, spec.samples, spec.seed, spec.threads);
        row.value_weak = r.user[0].mean;
        row.value_strong = r.user[1].mean;
        row.value_sum = r.sum.mean;
        row.stderr_weak = r.user[0].std_error;
        row.stderr_strong = r.user[1].std_error;
        row.stderr_sum = r.sum.std_error;
        row.samples = spec.samples;
        row.seed = spec.seed;
      } else {
        const char* weak_id;
        const char* strong_id;
        switch (strat) {
          case Strategy::noma: weak_id = "rate_noma_weak"; strong_id = "rate_noma_strong"; break;
          case Strategy::oma: weak_id = "rate_oma_weak"; strong_id = "rate_oma_strong"; break;
          default: weak_id = "rate_noma_a_weak"; strong_id = "rate_noma_a_strong"; break;
        }
        row.value_weak = quad_verify(s, weak_id).integral;
        row.value_strong = quad_verify(s, strong_id).integral;
        row.value_sum = *row.value_weak + *row.value_strong;
      }
      break;
    }
    case Metric::activity: {
      if (engine == Engine::closed_form) {
        row.value_sum = activity_probability(s, strat);
      } else if (engine == Engine::monte_carlo) {
        const McRates r = mc_rate_full_csit(s, strat, spec.samples, spec.seed, spec.threads);
        row.value_sum = r.all_active.mean;
        row.stderr_sum = r.all_active.std_error;
        row.samples = spec.samples;
        row.seed = spec.seed;
      } else {
        if (strat == Strategy::noma_adaptive) {
          row.value_sum = quad_verify(s, "activity_noma_a").integral;
        } else {
          row.value_sum =
              quad_verify(s, strat == Strategy::noma ? "phi_noma_weak" : "phi_oma_weak").integral;
        }
      }
      break;
    }
    case Metric::asymptote: {
      const AsymptoteReport w = asymptotics(s, strat, MetricTarget::weak);
      const AsymptoteReport st = asymptotics(s, strat, MetricTarget::strong);
      const AsymptoteReport sm = asymptotics(s, strat, MetricTarget::sum);
      CsvRow slope = row, icpt = row;
      slope.metric = "asymptote_slope";
      slope.value_weak = w.slope;
      slope.value_strong = st.slope;
      slope.value_sum = sm.slope;
      icpt.metric = "asymptote_intercept";
      icpt.value_weak = w.intercept_or_asymptote;
      icpt.value_strong = st.intercept_or_asymptote;
      icpt.value_sum = sm.intercept_or_asymptote;
      return {slope, icpt};
    }
    case Metric::rho_min:
      break;  // handled once per (p1, gamma), not per rho
  }
  return {row};
}

CsvRow rho_min_row(const Scenario& s) {
  CsvRow row;
  fill_base(row, s);
  row.strategy = "oma_vs_noma";
  row.metric = "rho_min_db";
  row.engine = to_string(Engine::closed_form);
  auto in_db = [&](MetricTarget t) -> double {
    const auto v = rho_min(s, t);
    if (!v) return std::numeric_limits<double>::infinity();
    return *v > 0.0 ? linear_to_db(*v) : -std::numeric_limits<double>::infinity();
  };
  row.value_weak = in_db(MetricTarget::weak);
  row.value_strong = in_db(MetricTarget::strong);
  row.value_sum = in_db(MetricTarget::sum);
  return row;
}

std::vector<CsvRow> k_user_cell(const SweepSpec& spec, const KScenario& ks,
                                double rho_db, Metric metric) {
  std::vector<CsvRow> rows;
  const int k = ks.k();
  std::vector<MixedStrategy> cands = MixedStrategy::candidates(k);
  auto base_row = [&](const std::string& strat_label) {
    CsvRow row;
    row.p1 = ks.powers.front();
    row.p2 = ks.powers.back();
    row.gamma = ks.gamma;
    row.gamma_db = linear_to_db(ks.gamma);
    row.rho = ks.rho;
    row.rho_db = rho_db;
    row.strategy = strat_label;
    row.metric = to_string(metric);
    row.engine = to_string(Engine::monte_carlo);
    row.samples = spec.samples;
    row.seed = spec.seed;
    return row;
  };
  // per-user columns carry the weakest and strongest ordered users; the sum
  // covers all K users
  for (const MixedStrategy& ms : cands) {
    CsvRow row = base_row(ms.label());
    if (metric == Metric::throughput) {
      const McPerUser t = mc_throughput(ks, ms, spec.samples, spec.seed, spec.threads);
      row.value_weak = t.user.front().mean;
      row.value_strong = t.user.back().mean;
      row.value_sum = t.sum.mean;
      row.stderr_weak = t.user.front().std_error;
      row.stderr_strong = t.user.back().std_error;
      row.stderr_sum = t.sum.std_error;
    } else {
      const McRates r = mc_rate_full_csit(ks, ms, spec.samples, spec.seed, spec.threads);
      if (metric == Metric::rate) {
        row.value_weak = r.user.front().mean;
        row.value_strong = r.user.back().mean;
        row.value_sum = r.sum.mean;
        row.stderr_weak = r.user.front().std_error;
        row.stderr_strong = r.user.back().std_error;
        row.stderr_sum = r.sum.std_error;
      } else {
        row.value_sum = r.all_active.mean;
        row.stderr_sum = r.all_active.std_error;
      }
    }
    rows.push_back(std::move(row));
  }
  if (metric == Metric::rate || metric == Metric::activity) {
    const McRates r = mc_rate_full_csit_adaptive(ks, spec.samples, spec.seed, spec.threads);
    CsvRow row = base_row("noma_a");
    if (metric == Metric::rate) {
      row.value_weak = r.user.front().mean;
      row.value_strong = r.user.back().mean;
      row.value_sum = r.sum.mean;
      row.stderr_weak = r.user.front().std_error;
      row.stderr_strong = r.user.back().std_error;
      row.stderr_sum = r.sum.std_error;
    } else {
      row.value_sum = r.all_active.mean;
      row.stderr_sum = r.all_active.std_error;
    }
    rows.push_back(std::move(row));
  }
  return rows;
}

}  // namespace

SweepResult run_sweep(const SweepSpec& spec, std::ostream& summary) {
  spec.validate();
  std::vector<std::string> lines;
  const std::vector<double> rhos = spec.rho_db.values();

  for (double p1 : spec.p1) {
    for (double gdb : spec.gamma_db) {
      if (spec.k_powers.empty()) {
        const double p2 = spec.p2 ? *spec.p2 : 1.0 - p1;
        const Scenario base = Scenario::from_db(p1, p2, gdb, 0.0);
        bool wants_rho_min = false;
        for (Metric m : spec.metrics) wants_rho_min = wants_rho_min || m == Metric::rho_min;
        if (wants_rho_min) lines.push_back(format_csv_row(rho_min_row(base)));
        for (double rdb : rhos) {
          const Scenario s = base.with_rho(db_to_linear(rdb));
          for (Strategy strat : spec.strategies)
            for (Metric metric : spec.metrics) {
              if (metric == Metric::rho_min) continue;
              for (Engine engine : spec.engines) {
                if (!combo_supported(metric, engine, false)) continue;
                for (CsvRow& row : two_user_cell(spec, s, rdb, strat, metric, engine))
                  lines.push_back(format_csv_row(row));
              }
            }
        }
      } else {
        for (double rdb : rhos) {
          const KScenario ks(spec.k_powers, db_to_linear(gdb), db_to_linear(rdb));
          for (Metric metric : spec.metrics) {
            if (!combo_supported(metric, Engine::monte_carlo, true)) continue;
            for (CsvRow& row : k_user_cell(spec, ks, rdb, metric))
              lines.push_back(format_csv_row(row));
          }
        }
      }
    }
  }

  std::ofstream out(spec.output_path, std::ios::binary);
  if (!out) throw std::runtime_error("cannot write output file '" + spec.output_path + "'");
  out << csv_header() << '\n';
  for (const std::string& l : lines) out << l << '\n';
  out.close();
  if (!out) throw std::runtime_error("write failed for '" + spec.output_path + "'");

  summary << "wrote " << lines.size() << " rows to " << spec.output_path << "\n";
  return {lines.size(), spec.output_path};
}

SweepResult rho_min_map(const std::vector<double>& p1_grid,
                        const std::vector<double>& gamma_db_grid,
                        const std::string& output_path, std::ostream& summary) {
  if (p1_grid.empty()) throw std::invalid_argument("rho_min_map: field 'p1' must not be empty");
  if (gamma_db_grid.empty())
    throw std::invalid_argument("rho_min_map: field 'gamma-db' must not be empty");
  std::ofstream out(output_path, std::ios::binary);
  if (!out) throw std::runtime_error("cannot write output file '" + output_path + "'");
  out << csv_header() << '\n';
  std::size_t rows = 0;
  for (double p1 : p1_grid) {
    for (double gdb : gamma_db_grid) {
      const Scenario s = Scenario::from_db(p1, 1.0 - p1, gdb, 0.0);
      out << format_csv_row(rho_min_row(s)) << '\n';
      ++rows;
    }
  }
  out.close();
  if (!out) throw std::runtime_error("write failed for '" + output_path + "'");
  summary << "wrote " << rows << " rows to " << output_path << "\n";
  return {rows, output_path};
}

}  // namespace noma
