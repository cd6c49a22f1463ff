// Command-line front end: sweeps a parameter axis and emits per-point exact,
// asymptotic, and Monte Carlo metric values as CSV, with a JSON sidecar that
// echoes every resolved parameter so a run can be reproduced from it.

#include <cstdio>
#include <filesystem>
#include <fstream>
#include <future>
#include <iostream>
#include <map>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <json.hpp>

#include "thzlink/mcsim.hpp"
#include "thzlink/metrics.hpp"
#include "thzlink/snrstats.hpp"

namespace fs = std::filesystem;
using nlohmann::json;
using namespace thzlink;

namespace {

struct RunParams {
  std::string subcommand;
  double frequency_ghz = 300.0;
  double d0_m = 1.0;
  double delta = 2.0;
  double r_max_m = 50.0;
  std::string topology = "1d";
  double gamma_bar_db = 150.0;
  double alpha = 2.5;
  double mu = 2.0;
  double m = 1.5;
  double beta = 4.0;
  double mod_a = 1.0;
  double mod_b = 2.0;
  int quad_n = 30;
  double gamma_th_db = 0.0;
  std::string table_path = "data/absorption_itu.csv";

  std::string axis;  // empty: subcommand default
  double sweep_start = 0.0, sweep_stop = 0.0;
  int sweep_points = 0;
  bool asymptotic = false;
  double mc_samples = 0.0;
  std::uint64_t seed = 1;
  int workers = 0;
  double moment_order = 1.0;
  std::string output;
  std::string config_path;
};

[[noreturn]] void config_fail(const std::string& msg) {
  std::cerr << "error: " << msg << "\n";
  std::exit(1);
}

// Minimal TOML-subset reader: [section] headers, key = value lines,
// '#' comments, quoted or bare scalar values.
std::map<std::string, std::map<std::string, std::string>> read_toml(
    const std::string& path) {
  std::ifstream in(path);
  if (!in) config_fail("cannot open config file: " + path);
  std::map<std::string, std::map<std::string, std::string>> out;
  std::string line, section;
  int lineno = 0;
  auto trim = [](std::string s) {
    const auto a = s.find_first_not_of(" \t\r");
    if (a == std::string::npos) return std::string();
    const auto b = s.find_last_not_of(" \t\r");
    return s.substr(a, b - a + 1);
  };
  while (std::getline(in, line)) {
    ++lineno;
    if (auto h = line.find('#'); h != std::string::npos) line.resize(h);
    line = trim(line);
    if (line.empty()) continue;
    if (line.front() == '[') {
      if (line.back() != ']')
        config_fail(path + ":" + std::to_string(lineno) + ": bad section header");
      section = trim(line.substr(1, line.size() - 2));
      continue;
    }
    const auto eq = line.find('=');
    if (eq == std::string::npos)
      config_fail(path + ":" + std::to_string(lineno) + ": expected key = value");
    std::string key = trim(line.substr(0, eq));
    std::string val = trim(line.substr(eq + 1));
    if (val.size() >= 2 && val.front() == '"' && val.back() == '"')
      val = val.substr(1, val.size() - 2);
    out[section][key] = val;
  }
  return out;
}

double to_num(const std::string& s, const std::string& what) {
  try {
    std::size_t pos = 0;
    const double v = std::stod(s, &pos);
    if (pos != s.size()) throw std::invalid_argument(s);
    return v;
  } catch (const std::exception&) {
    config_fail("bad numeric value for " + what + ": '" + s + "'");
  }
}

void apply_toml(RunParams& rp, const std::string& path) {
  const auto doc = read_toml(path);
  auto get = [&](const std::string& sec, const std::string& key,
                 auto setter) {
    auto s = doc.find(sec);
    if (s == doc.end()) return;
    auto k = s->second.find(key);
    if (k != s->second.end()) setter(k->second);
  };
  auto num = [&](const std::string& sec, const std::string& key, double& dst) {
    get(sec, key, [&](const std::string& v) { dst = to_num(v, sec + "." + key); });
  };
  num("link", "frequency_ghz", rp.frequency_ghz);
  num("link", "d0_m", rp.d0_m);
  num("link", "delta", rp.delta);
  num("link", "r_max_m", rp.r_max_m);
  num("link", "gamma_bar_db", rp.gamma_bar_db);
  get("link", "topology", [&](const std::string& v) { rp.topology = v; });
  num("fading", "alpha", rp.alpha);
  num("fading", "mu", rp.mu);
  num("fading", "m", rp.m);
  num("misalignment", "beta", rp.beta);
  num("modulation", "a", rp.mod_a);
  num("modulation", "b", rp.mod_b);
  get("quadrature", "n",
      [&](const std::string& v) { rp.quad_n = int(to_num(v, "quadrature.n")); });
  num("op", "gamma_th_db", rp.gamma_th_db);
  get("absorption", "table", [&](const std::string& v) { rp.table_path = v; });
}

void apply_sidecar(RunParams& rp, const std::string& path) {
  std::ifstream in(path);
  if (!in) config_fail("cannot open sidecar file: " + path);
  json j;
  try {
    in >> j;
  } catch (const std::exception& e) {
    config_fail("bad sidecar JSON: " + std::string(e.what()));
  }
  rp.subcommand = j.value("subcommand", rp.subcommand);
  rp.frequency_ghz = j.value("frequency_ghz", rp.frequency_ghz);
  rp.d0_m = j.value("d0_m", rp.d0_m);
  rp.delta = j.value("delta", rp.delta);
  rp.r_max_m = j.value("r_max_m", rp.r_max_m);
  rp.topology = j.value("topology", rp.topology);
  rp.gamma_bar_db = j.value("gamma_bar_db", rp.gamma_bar_db);
  rp.alpha = j.value("alpha", rp.alpha);
  rp.mu = j.value("mu", rp.mu);
  rp.m = j.value("m", rp.m);
  rp.beta = j.value("beta", rp.beta);
  rp.mod_a = j.value("modulation_a", rp.mod_a);
  rp.mod_b = j.value("modulation_b", rp.mod_b);
  rp.quad_n = j.value("quadrature_n", rp.quad_n);
  rp.gamma_th_db = j.value("gamma_th_db", rp.gamma_th_db);
  rp.table_path = j.value("absorption_table", rp.table_path);
  rp.axis = j.value("axis", rp.axis);
  rp.sweep_start = j.value("sweep_start", rp.sweep_start);
  rp.sweep_stop = j.value("sweep_stop", rp.sweep_stop);
  rp.sweep_points = j.value("sweep_points", rp.sweep_points);
  rp.asymptotic = j.value("asymptotic", rp.asymptotic);
  rp.mc_samples = j.value("mc_samples", rp.mc_samples);
  rp.seed = j.value("seed", rp.seed);
  rp.workers = j.value("workers", rp.workers);
  rp.moment_order = j.value("moment_order", rp.moment_order);
}

std::string resolve_table_path(const RunParams& rp) {
  if (fs::exists(rp.table_path)) return rp.table_path;
  std::vector<fs::path> candidates;
  if (const char* env = std::getenv("THZLINK_ABSORPTION_PATH")) {
    candidates.emplace_back(fs::path(env) / rp.table_path);
    candidates.emplace_back(fs::path(env) / fs::path(rp.table_path).filename());
  }
  if (!rp.config_path.empty())
    candidates.emplace_back(fs::path(rp.config_path).parent_path() /
                            rp.table_path);
  for (const auto& c : candidates)
    if (fs::exists(c)) return c.string();
  config_fail("absorption table not found: " + rp.table_path);
}

LinkConfig make_link_config(const RunParams& rp) {
  LinkConfig cfg;
  cfg.frequency_hz = rp.frequency_ghz * 1e9;
  cfg.d0 = rp.d0_m;
  cfg.delta = rp.delta;
  cfg.r_max = rp.r_max_m;
  if (rp.topology == "1d")
    cfg.topology = Topology::D1;
  else if (rp.topology == "2d")
    cfg.topology = Topology::D2;
  else if (rp.topology == "3d")
    cfg.topology = Topology::D3;
  else
    config_fail("topology must be 1d, 2d, or 3d; got '" + rp.topology + "'");
  cfg.gamma_bar = std::pow(10.0, rp.gamma_bar_db / 10.0);
  cfg.misalignment.beta = rp.beta;
  cfg.fading = derive_constants(rp.alpha, rp.mu, rp.m, rp.beta);
  return cfg;
}

struct Row {
  double axis = 0.0;
  std::optional<double> exact, asym, mc, mc_stderr;
  std::vector<double> extra;  // mc subcommand wide columns
};

std::string fmt(double v) {
  char buf[40];
  std::snprintf(buf, sizeof(buf), "%.17g", v);
  return buf;
}

std::string default_axis(const std::string& sub) {
  if (sub == "op") return "ratio_db";
  if (sub == "pdf" || sub == "cdf") return "gamma_db";
  if (sub == "mgf") return "s_db";
  if (sub == "capacity") return "snr_db";
  return "snr_db";
}

json sidecar_of(const RunParams& rp, const std::string& table_resolved) {
  json j;
  j["subcommand"] = rp.subcommand;
  j["frequency_ghz"] = rp.frequency_ghz;
  j["d0_m"] = rp.d0_m;
  j["delta"] = rp.delta;
  j["r_max_m"] = rp.r_max_m;
  j["topology"] = rp.topology;
  j["gamma_bar_db"] = rp.gamma_bar_db;
  j["alpha"] = rp.alpha;
  j["mu"] = rp.mu;
  j["m"] = rp.m;
  j["beta"] = rp.beta;
  j["modulation_a"] = rp.mod_a;
  j["modulation_b"] = rp.mod_b;
  j["quadrature_n"] = rp.quad_n;
  j["gamma_th_db"] = rp.gamma_th_db;
  j["absorption_table"] = table_resolved;
  j["axis"] = rp.axis;
  j["sweep_start"] = rp.sweep_start;
  j["sweep_stop"] = rp.sweep_stop;
  j["sweep_points"] = rp.sweep_points;
  j["asymptotic"] = rp.asymptotic;
  j["mc_samples"] = rp.mc_samples;
  j["seed"] = rp.seed;
  j["workers"] = rp.workers;
  j["moment_order"] = rp.moment_order;
  return j;
}

Row eval_point(const RunParams& rp, const AbsorptionTable& table,
               double axis_value) {
  RunParams pt = rp;
  double gamma_th = std::pow(10.0, rp.gamma_th_db / 10.0);
  if (rp.axis == "ratio_db")
    pt.gamma_bar_db = axis_value + rp.gamma_th_db;
  else if (rp.axis == "snr_db")
    pt.gamma_bar_db = axis_value;
  else if (rp.axis == "frequency_ghz")
    pt.frequency_ghz = axis_value;
  else if (rp.axis != "gamma_db" && rp.axis != "s_db")
    config_fail("unknown axis '" + rp.axis + "'");

  SnrModel model(make_link_config(pt), table, pt.quad_n);
  const ModulationCoeffs mc{rp.mod_a, rp.mod_b};
  Row row;
  row.axis = axis_value;

  const std::string& sub = rp.subcommand;
  if (sub == "op") {
    row.exact = outage(model, gamma_th);
    if (rp.asymptotic) row.asym = *outage_asymptotic(model, gamma_th).asymptotic;
  } else if (sub == "asep") {
    row.exact = asep(model, mc);
    if (rp.asymptotic) row.asym = *asep_asymptotic(model, mc).asymptotic;
  } else if (sub == "capacity") {
    row.exact = capacity(model);
    if (rp.asymptotic) row.asym = capacity_asymptotic(model);
  } else if (sub == "pdf") {
    row.exact = model.pdf(std::pow(10.0, axis_value / 10.0));
  } else if (sub == "cdf") {
    row.exact = model.cdf(std::pow(10.0, axis_value / 10.0));
  } else if (sub == "mgf") {
    row.exact = model.mgf(std::pow(10.0, axis_value / 10.0));
  } else if (sub == "moment") {
    row.exact = model.moment(rp.moment_order);
  }

  if (rp.mc_samples > 0.0) {
    SimConfig sim;
    sim.samples = std::uint64_t(rp.mc_samples);
    sim.seed = rp.seed;
    sim.workers = rp.workers;
    const auto est = estimate_metrics(simulate(model, sim), gamma_th, mc);
    if (sub == "mc") {
      row.extra = {est.op,   est.op_stderr,      est.asep,
                   est.asep_stderr, est.capacity, est.capacity_stderr};
    } else if (sub == "op") {
      row.mc = est.op;
      row.mc_stderr = est.op_stderr;
    } else if (sub == "asep") {
      row.mc = est.asep;
      row.mc_stderr = est.asep_stderr;
    } else if (sub == "capacity") {
      row.mc = est.capacity;
      row.mc_stderr = est.capacity_stderr;
    }
  } else if (sub == "mc") {
    config_fail("mc subcommand requires --mc <samples>");
  }
  return row;
}

int run(RunParams& rp) {
  if (rp.axis.empty()) rp.axis = default_axis(rp.subcommand);
  if (rp.sweep_points < 2 || !(rp.sweep_start < rp.sweep_stop))
    config_fail("sweep requires start < stop and points >= 2");
  if (rp.output.empty()) rp.output = rp.subcommand + ".csv";

  const std::string table_path = resolve_table_path(rp);
  AbsorptionTable table;
  try {
    table = AbsorptionTable::load_csv(table_path);
  } catch (const std::exception& e) {
    config_fail(e.what());
  }

  std::vector<double> axis(rp.sweep_points);
  for (int i = 0; i < rp.sweep_points; ++i)
    axis[i] = rp.sweep_start + (rp.sweep_stop - rp.sweep_start) * i /
                                   (rp.sweep_points - 1);

  std::vector<Row> rows(axis.size());
  try {
    if (rp.mc_samples > 0.0) {
      // The simulator already fans out across workers; keep points serial.
      for (std::size_t i = 0; i < axis.size(); ++i)
        rows[i] = eval_point(rp, table, axis[i]);
    } else {
      std::vector<std::future<Row>> futs;
      futs.reserve(axis.size());
      for (double x : axis)
        futs.push_back(std::async(std::launch::async, [&, x] {
          return eval_point(rp, table, x);
        }));
      for (std::size_t i = 0; i < futs.size(); ++i) rows[i] = futs[i].get();
    }
  } catch (const ConvergenceError& e) {
    std::cerr << "error: convergence failure during sweep: " << e.what()
              << "\n";
    return 2;
  } catch (const std::exception& e) {
    config_fail(e.what());
  }

  std::ofstream csv(rp.output, std::ios::binary);
  if (!csv) config_fail("cannot write output file: " + rp.output);
  if (rp.subcommand == "mc") {
    csv << "axis,mc_op,mc_op_stderr,mc_asep,mc_asep_stderr,mc_capacity,"
           "mc_capacity_stderr\r\n";
    for (const auto& r : rows) {
      csv << fmt(r.axis);
      for (double v : r.extra) csv << "," << fmt(v);
      csv << "\r\n";
    }
  } else {
    csv << "axis,exact,asymptotic,mc,mc_stderr\r\n";
    auto cell = [&](const std::optional<double>& v) {
      csv << ",";
      if (v) csv << fmt(*v);
    };
    for (const auto& r : rows) {
      csv << fmt(r.axis);
      cell(r.exact);
      cell(r.asym);
      cell(r.mc);
      cell(r.mc_stderr);
      csv << "\r\n";
    }
  }
  csv.close();

  const std::string sidecar_path =
      (fs::path(rp.output).replace_extension(".json")).string();
  std::ofstream sj(sidecar_path, std::ios::binary);
  if (!sj) config_fail("cannot write sidecar file: " + sidecar_path);
  sj << sidecar_of(rp, table_path).dump(2) << "\n";
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"THz link performance over alpha-F fading with beam "
               "misalignment and mobility"};
  app.require_subcommand(1);

  RunParams rp;
  std::string sweep_arg;

  auto add_common = [&](CLI::App* sub) {
    sub->add_option("--config", rp.config_path,
                    "TOML config file, or a JSON sidecar from a previous run");
    sub->add_option("--sweep", sweep_arg, "axis sweep as start:stop:points");
    sub->add_option("--axis", rp.axis,
                    "sweep axis: snr | ratio | frequency | gamma | s");
    sub->add_flag("--asymptotic", rp.asymptotic,
                  "also emit the high-SNR asymptote column");
    sub->add_option("--mc", rp.mc_samples,
                    "Monte Carlo sample count (0 disables)");
    sub->add_option("--seed", rp.seed, "Monte Carlo seed");
    sub->add_option("--workers", rp.workers,
                    "Monte Carlo worker threads (0: hardware)");
    sub->add_option("--output", rp.output, "output CSV path");
    sub->add_option("--frequency-ghz", rp.frequency_ghz, "carrier frequency");
    sub->add_option("--gamma-bar-db", rp.gamma_bar_db, "reference SNR, dB");
    sub->add_option("--gamma-th-db", rp.gamma_th_db, "outage threshold, dB");
    sub->add_option("--beta", rp.beta, "misalignment factor");
    sub->add_option("--alpha", rp.alpha, "fading non-linearity");
    sub->add_option("--mu", rp.mu, "multipath clusters");
    sub->add_option("--m", rp.m, "shadowing parameter");
    sub->add_option("--delta", rp.delta, "path-loss exponent");
    sub->add_option("--rmax", rp.r_max_m, "maximum separation, m");
    sub->add_option("--topology", rp.topology, "1d | 2d | 3d");
    sub->add_option("--quad-order", rp.quad_n, "Gauss-Legendre order");
    sub->add_option("--absorption-table", rp.table_path,
                    "absorption table CSV");
    sub->add_option("--order", rp.moment_order, "moment order (moment)");
  };

  for (const char* name :
       {"op", "asep", "capacity", "pdf", "cdf", "mgf", "moment", "mc"})
    add_common(app.add_subcommand(name));

  CLI11_PARSE(app, argc, argv);
  auto* sub = app.get_subcommands().front();
  rp.subcommand = sub->get_name();

  // Config first, then flag overrides on top.
  if (!rp.config_path.empty()) {
    RunParams from_file;
    from_file.subcommand = rp.subcommand;
    from_file.config_path = rp.config_path;
    if (fs::path(rp.config_path).extension() == ".json")
      apply_sidecar(from_file, rp.config_path);
    else
      apply_toml(from_file, rp.config_path);
    // Re-apply any explicitly passed flags over the file values.
    auto keep = [&](const char* flag) { return sub->count(flag) > 0; };
    RunParams flags = rp;
    rp = from_file;
    rp.subcommand = flags.subcommand;
    rp.config_path = flags.config_path;
    if (keep("--axis")) rp.axis = flags.axis;
    if (keep("--asymptotic")) rp.asymptotic = flags.asymptotic;
    if (keep("--mc")) rp.mc_samples = flags.mc_samples;
    if (keep("--seed")) rp.seed = flags.seed;
    if (keep("--workers")) rp.workers = flags.workers;
    if (keep("--output")) rp.output = flags.output;
    if (keep("--frequency-ghz")) rp.frequency_ghz = flags.frequency_ghz;
    if (keep("--gamma-bar-db")) rp.gamma_bar_db = flags.gamma_bar_db;
    if (keep("--gamma-th-db")) rp.gamma_th_db = flags.gamma_th_db;
    if (keep("--beta")) rp.beta = flags.beta;
    if (keep("--alpha")) rp.alpha = flags.alpha;
    if (keep("--mu")) rp.mu = flags.mu;
    if (keep("--m")) rp.m = flags.m;
    if (keep("--delta")) rp.delta = flags.delta;
    if (keep("--rmax")) rp.r_max_m = flags.r_max_m;
    if (keep("--topology")) rp.topology = flags.topology;
    if (keep("--quad-order")) rp.quad_n = flags.quad_n;
    if (keep("--absorption-table")) rp.table_path = flags.table_path;
    if (keep("--order")) rp.moment_order = flags.moment_order;
  }
  if (!sweep_arg.empty()) {
    double a, b;
    int n;
    if (std::sscanf(sweep_arg.c_str(), "%lf:%lf:%d", &a, &b, &n) != 3)
      config_fail("bad --sweep, expected start:stop:points");
    rp.sweep_start = a;
    rp.sweep_stop = b;
    rp.sweep_points = n;
  }
  // Short axis aliases.
  if (rp.axis == "snr") rp.axis = "snr_db";
  if (rp.axis == "ratio") rp.axis = "ratio_db";
  if (rp.axis == "frequency") rp.axis = "frequency_ghz";
  if (rp.axis == "gamma") rp.axis = "gamma_db";
  if (rp.axis == "s") rp.axis = "s_db";

  return run(rp);
}
