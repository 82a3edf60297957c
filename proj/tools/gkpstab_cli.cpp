// Command-line front end: runs the decoder, sweeps, tables, bounds, and
// reductions, emitting CSV or JSON. Exit codes: 0 success, 2 bad
// configuration, 3 numerical failure, 4 --check violation.

#include <algorithm>
#include <cmath>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <memory>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#ifdef _OPENMP
#include <omp.h>
#endif

#include "CLI11.hpp"
#include "gkpstab/bounds.hpp"
#include "gkpstab/decode.hpp"
#include "gkpstab/errors.hpp"
#include "gkpstab/io.hpp"
#include "gkpstab/optimize.hpp"
#include "gkpstab/reduction.hpp"

namespace {

using namespace gkpstab;

struct CheckFailure : std::runtime_error {
  using std::runtime_error::runtime_error;
};

// ---------- shared plumbing ----------

struct Common {
  std::string out;
  std::string config;
  int threads = 0;
  bool check = false;
};

void add_common(CLI::App* cmd, Common& c, bool with_check = true) {
  cmd->add_option("--out", c.out, "Write the result to this file instead of stdout");
  cmd->add_option("--config", c.config,
                  "JSON file supplying option values; explicit flags win");
  cmd->add_option("--threads", c.threads,
                  "Worker cap (0: use GKPSTAB_THREADS, then all cores)");
  if (with_check)
    cmd->add_flag("--check", c.check,
                  "Compare the result against its published value; exit 4 on "
                  "a violation");
}

int resolve_threads(int flag) {
  if (flag > 0) return flag;
  if (flag < 0) throw ConfigError("--threads must be non-negative");
  if (const char* env = std::getenv("GKPSTAB_THREADS")) {
    try {
      const int n = std::stoi(env);
      if (n < 0) throw ConfigError("GKPSTAB_THREADS must be non-negative");
      return n;
    } catch (const ConfigError&) {
      throw;
    } catch (const std::exception&) {
      throw ConfigError("GKPSTAB_THREADS must be an integer");
    }
  }
  return 0;
}

void apply_threads(int n) {
#ifdef _OPENMP
  if (n > 0) omp_set_num_threads(n);
#else
  (void)n;
#endif
}

// Layers --config values under the command-line flags: a key applies only
// when its flag was not given explicitly; unknown keys are rejected.
class ConfigLayer {
 public:
  ConfigLayer(CLI::App* cmd, const std::string& path) : cmd_(cmd) {
    if (!path.empty()) obj_ = load_json(path);
  }

  template <typename T>
  void fold(const std::string& flag, T& value) {
    const std::string key = flag.substr(2);
    keys_.push_back(key);
    if (obj_.is_null() || !obj_.contains(key)) return;
    if (cmd_->count(flag) > 0) return;
    try {
      value = obj_.at(key).get<T>();
    } catch (const Json::exception& e) {
      throw ConfigError("config key '" + key + "': " + e.what());
    }
  }

  void finish(const std::string& context) {
    if (!obj_.is_null()) reject_unknown_keys(obj_, keys_, context);
  }

 private:
  CLI::App* cmd_;
  Json obj_;
  std::vector<std::string> keys_;
};

void emit_text(const std::string& text, const std::string& out_path) {
  if (out_path.empty()) {
    std::cout << text;
    return;
  }
  std::ofstream os(out_path);
  if (!os) throw ConfigError("cannot write " + out_path);
  os << text;
  if (!os) throw ConfigError("failed while writing " + out_path);
}

void emit_json(const Json& j, const std::string& out_path) {
  emit_text(j.dump(2) + "\n", out_path);
}

void emit_csv(const std::vector<std::string>& header,
              const std::vector<std::vector<std::string>>& rows,
              const std::string& out_path) {
  std::ostringstream ss;
  write_csv(ss, header, rows);
  emit_text(ss.str(), out_path);
}

EstimatorKind parse_estimator(const std::string& s) {
  if (s == "linear") return EstimatorKind::kLinear;
  if (s == "mmse") return EstimatorKind::kMmse;
  throw ConfigError("estimator must be 'linear' or 'mmse'");
}

double resolve_sigma(double sigma, double sigma_sq, double fallback_sq) {
  if (sigma > 0.0 && sigma_sq > 0.0)
    throw ConfigError("give --sigma or --sigma-sq, not both");
  if (sigma > 0.0) return sigma;
  if (sigma_sq > 0.0) return std::sqrt(sigma_sq);
  if (fallback_sq > 0.0) return std::sqrt(fallback_sq);
  throw ConfigError("one of --sigma or --sigma-sq is required");
}

Vec to_vec(const std::vector<double>& v) {
  Vec out(static_cast<int>(v.size()));
  for (std::size_t i = 0; i < v.size(); ++i) out(static_cast<int>(i)) = v[i];
  return out;
}

// The syndrome spread grows like sigma^2 (2G - 1), and with it the number of
// lattice translates the estimator has to sum. Cap the gain scan so default
// runs stay tractable at large sigma; the optimum sits far below the cap.
double tractable_g_max(double sigma) {
  const double g = 0.5 * (3.8 / (sigma * sigma) + 1.0);
  return std::clamp(g, 4.0, 100.0);
}

Vec linspace(double a, double b, int n) {
  if (n < 2) throw ConfigError("axis needs at least two points");
  Vec v(n);
  for (int i = 0; i < n; ++i) v(i) = a + (b - a) * i / (n - 1);
  return v;
}

int default_modes_for(const std::string& label) {
  if (label == "d4" || label == "bell" || label == "hexagonal-pair") return 2;
  return 1;
}

// Accepts a built-in label, param:<r>,<theta>, or a JSON file holding either
// a raw generator matrix or {"generator": ..., "label": ...}.
Lattice load_lattice_arg(const std::string& spec, int modes_flag) {
  const std::string param = "param:";
  if (spec.rfind(param, 0) == 0) {
    double r = 0.0, theta = 0.0;
    char comma = 0;
    std::istringstream ss(spec.substr(param.size()));
    if (!(ss >> r >> comma >> theta) || comma != ',')
      throw ConfigError("lattice: expected param:<r>,<theta>");
    return param_lattice(r, theta);
  }
  if (std::filesystem::exists(spec)) {
    const Json j = load_json(spec);
    Lattice l;
    if (j.is_object()) {
      reject_unknown_keys(j, {"generator", "label"}, "lattice file");
      l.generator = mat_from_json(j.at("generator"));
      l.label = j.value("label", std::filesystem::path(spec).stem().string());
    } else {
      l.generator = mat_from_json(j);
      l.label = std::filesystem::path(spec).stem().string();
    }
    if (l.generator.rows() != l.generator.cols() || l.generator.rows() % 2 != 0)
      throw ConfigError("lattice file: generator must be square and 2M x 2M");
    l.modes = static_cast<int>(l.generator.rows()) / 2;
    check_integral(l);
    return l;
  }
  const int modes = modes_flag > 0 ? modes_flag : default_modes_for(spec);
  return lattice_from_spec(spec, modes);
}

Json int_mat_json(const Eigen::MatrixXi& m) {
  Json rows = Json::array();
  for (int i = 0; i < m.rows(); ++i) {
    Json row = Json::array();
    for (int j = 0; j < m.cols(); ++j) row.push_back(m(i, j));
    rows.push_back(std::move(row));
  }
  return rows;
}

void require_check(bool ok, const std::string& what) {
  if (!ok) throw CheckFailure(what);
}

// ---------- lattice info ----------

struct LatticeInfoParams {
  std::string name;
  int modes = 0;
  Common common;
};

void run_lattice_info(CLI::App* cmd, const LatticeInfoParams& p) {
  ConfigLayer layer(cmd, p.common.config);
  LatticeInfoParams q = p;
  layer.fold("--modes", q.modes);
  layer.finish("lattice info");
  const Lattice l = load_lattice_arg(q.name, q.modes);
  const Eigen::MatrixXi a = check_integral(l);
  const double shortest = shortest_vector_norm(l);
  Json out{{"label", l.label},
           {"modes", l.modes},
           {"generator", to_json(l.generator)},
           {"a_matrix", int_mat_json(a)},
           {"self_dual", is_self_dual(l)},
           {"shortest_vector_norm", shortest},
           {"shortest_over_ell", shortest / kEll}};
  emit_json(out, q.common.out);
}

// ---------- decode ----------

struct DecodeParams {
  std::string lattice = "square";
  int modes = 0;
  double sigma = 0.0;
  double sigma_sq = 0.0;
  std::string estimator = "mmse";
  std::string method = "auto";
  double gain = 0.0;  // 0: optimize
  double gkp_db = 0.0;
  long long samples = 0;  // 0: command default
  std::uint64_t seed = 1;
  Common common;
};

void run_decode(CLI::App* cmd, const DecodeParams& p) {
  ConfigLayer layer(cmd, p.common.config);
  DecodeParams q = p;
  layer.fold("--lattice", q.lattice);
  layer.fold("--modes", q.modes);
  layer.fold("--sigma", q.sigma);
  layer.fold("--sigma-sq", q.sigma_sq);
  layer.fold("--estimator", q.estimator);
  layer.fold("--method", q.method);
  layer.fold("--gain", q.gain);
  layer.fold("--gkp-db", q.gkp_db);
  layer.fold("--samples", q.samples);
  layer.fold("--seed", q.seed);
  layer.finish("decode");

  const int threads = resolve_threads(q.common.threads);
  apply_threads(threads);
  const Lattice l = load_lattice_arg(q.lattice, q.modes);
  const double sigma = resolve_sigma(q.sigma, q.sigma_sq, 0.0);
  const EstimatorKind kind = parse_estimator(q.estimator);
  const FiniteGkp fin =
      q.gkp_db > 0.0 ? FiniteGkp::from_db(q.gkp_db) : FiniteGkp::ideal();
  if (q.method != "auto" && q.method != "quadrature" && q.method != "mc")
    throw ConfigError("--method must be auto, quadrature, or mc");
  const bool use_mc = q.method == "mc" || (q.method == "auto" && l.modes == 2);

  Json out{{"command", "decode"},
           {"lattice", l.label},
           {"modes", l.modes},
           {"sigma", sigma},
           {"estimator", q.estimator},
           {"method", use_mc ? "mc" : "quadrature"},
           {"gkp_db", q.gkp_db}};

  if (q.gain > 0.0) {
    const CodeSpec code =
        make_code(single_layer_encoding(q.gain, l.modes), l, l.modes, l.modes);
    const AgnModel noise = iid_noise(sigma * sigma, 2 * l.modes);
    DecodeReport rep;
    if (use_mc) {
      McConfig mc;
      mc.samples = q.samples > 0 ? q.samples : 1000000;
      mc.seed = q.seed;
      mc.threads = threads;
      rep = output_covariance_mc(code, noise, fin, kind, {}, mc);
    } else {
      QuadConfig quad;
      quad.threads = threads;
      rep = output_covariance_quadrature(code, noise, fin, kind, {}, quad);
    }
    out["gain"] = q.gain;
    out["report"] = to_json(rep);
    out["sigma_gm_sq"] = rep.sigma_gm_sq;
    out["sigma_rms_sq"] = rep.sigma_rms_sq;
    if (q.common.check)
      throw ConfigError("--check needs the gain-optimized configuration");
  } else {
    GainSearchConfig cfg;
    cfg.fin = fin;
    cfg.quad.threads = threads;
    cfg.search_mc.threads = threads;
    cfg.search_mc.seed = q.seed;
    cfg.g_max = std::min(cfg.g_max, tractable_g_max(sigma));
    cfg.g_cap = std::min(cfg.g_cap, 2.0 * cfg.g_max);
    if (q.samples > 0) {
      cfg.search_mc.samples = q.samples;
      cfg.final_samples = 4 * q.samples;
    }
    const OptResult res = optimize_gain(l, sigma, kind, cfg);
    out["g_opt"] = res.params[0];
    out["sigma_gm_sq"] = res.sigma_gm_sq;
    out["sigma_rms_sq"] = res.sigma_rms_sq;
    out["evaluations"] = res.evaluations;
    if (q.common.check) {
      const bool base_case = l.modes == 1 && !use_mc && fin.exact() &&
                             kind == EstimatorKind::kMmse &&
                             std::abs(sigma * sigma - 1e-2) < 1e-12;
      double ref = 0.0;
      if (base_case && l.label == "square") ref = 1.25129e-3;
      if (base_case && l.label == "hexagonal") ref = 1.15575e-3;
      if (ref == 0.0)
        throw ConfigError("--check: no published value for this configuration");
      require_check(std::abs(res.sigma_rms_sq - ref) <= 5e-7,
                    "decode: sigma_rms_sq " + format_sig(res.sigma_rms_sq) +
                        " is not within 5e-7 of " + format_sig(ref));
    }
  }
  if (q.seed != 0) out["seed"] = q.seed;
  emit_json(out, q.common.out);
}

// ---------- sweep ----------

struct SweepParams {
  double sigma = 0.0;
  double sigma_sq = 0.0;
  double r_min = 1.0;
  double r_max = 3.5;
  int r_points = 12;
  double theta_min = 0.0;
  double theta_max = M_PI / 4.0;
  int theta_points = 12;
  std::string estimator = "mmse";
  Common common;
};

void run_sweep(CLI::App* cmd, const SweepParams& p) {
  ConfigLayer layer(cmd, p.common.config);
  SweepParams q = p;
  layer.fold("--sigma", q.sigma);
  layer.fold("--sigma-sq", q.sigma_sq);
  layer.fold("--r-min", q.r_min);
  layer.fold("--r-max", q.r_max);
  layer.fold("--r-points", q.r_points);
  layer.fold("--theta-min", q.theta_min);
  layer.fold("--theta-max", q.theta_max);
  layer.fold("--theta-points", q.theta_points);
  layer.fold("--estimator", q.estimator);
  layer.finish("sweep");

  const int threads = resolve_threads(q.common.threads);
  apply_threads(threads);
  const double sigma = resolve_sigma(q.sigma, q.sigma_sq, 1e-2);
  SweepGrid grid;
  grid.r_values = linspace(q.r_min, q.r_max, q.r_points);
  grid.theta_values = linspace(q.theta_min, q.theta_max, q.theta_points);
  grid.sigma_sq = sigma * sigma;
  GainSearchConfig cfg;
  cfg.quad.threads = threads;
  const std::vector<SweepRow> rows =
      sweep_single_mode(grid, parse_estimator(q.estimator), cfg);

  std::vector<std::vector<std::string>> cells;
  cells.reserve(rows.size());
  for (const auto& row : rows) {
    if (row.failed) {
      cells.push_back({format_sig(row.r), format_sig(row.theta), "", "", "",
                       row.error});
    } else {
      cells.push_back({format_sig(row.r), format_sig(row.theta),
                       format_sig(row.g_opt), format_sig(row.sigma_rms_sq),
                       format_sig(row.sigma_gm_sq), "ok"});
    }
  }
  emit_csv({"r", "theta", "g_opt", "sigma_rms_sq", "sigma_gm_sq", "status"},
           cells, q.common.out);

  if (q.common.check) {
    const SweepRow* best = nullptr;
    for (const auto& row : rows)
      if (!row.failed && (!best || row.sigma_rms_sq < best->sigma_rms_sq))
        best = &row;
    require_check(best != nullptr, "sweep: every grid point failed");
    const double dr = (q.r_max - q.r_min) / (q.r_points - 1);
    const double dt = (q.theta_max - q.theta_min) / (q.theta_points - 1);
    bool near_hex = false;
    for (const auto& e : hex_equivalents())
      if (std::abs(best->r - e.r) <= dr + 1e-12 &&
          std::abs(best->theta - e.theta) <= dt + 1e-12)
        near_hex = true;
    require_check(near_hex,
                  "sweep: grid minimum at (r = " + format_sig(best->r) +
                      ", theta = " + format_sig(best->theta) +
                      ") is not within one cell of a hexagonal point");
    require_check(std::abs(q.r_min - 1.0) < 1e-12,
                  "sweep: --check needs the grid to start at r = 1");
    double lo = std::numeric_limits<double>::infinity(), hi = -lo;
    for (const auto& row : rows) {
      if (row.failed || std::abs(row.r - 1.0) > 1e-12) continue;
      lo = std::min(lo, row.sigma_rms_sq);
      hi = std::max(hi, row.sigma_rms_sq);
    }
    require_check(hi - lo <= 1e-6,
                  "sweep: r = 1 line varies by " + format_sig(hi - lo) +
                      " across theta, above 1e-6");
  }
}

// ---------- table2 ----------

struct Table2Params {
  std::vector<double> sigmas{0.1, 0.2, 0.5};
  std::vector<std::string> lattices{"square", "hexagonal", "d4"};
  std::string estimator = "mmse";
  long long samples = 100000;
  long long final_samples = 400000;
  std::uint64_t seed = 1;
  double tol = 0.0015;
  Common common;
};

struct Table2Cell {
  std::string lattice;
  double sigma = 0.0;
  double gm = 0.0;
};

double table2_reference(const std::string& lattice, double sigma) {
  static const std::vector<std::pair<std::string, std::vector<double>>> t{
      {"square", {0.0354, 0.120, 0.490}},
      {"hexagonal", {0.0340, 0.117, 0.489}},
      {"d4", {0.0322, 0.112, 0.487}}};
  static const std::vector<double> s{0.1, 0.2, 0.5};
  for (const auto& [name, vals] : t)
    if (name == lattice)
      for (std::size_t i = 0; i < s.size(); ++i)
        if (std::abs(s[i] - sigma) < 1e-12) return vals[i];
  return 0.0;
}

void run_table2(CLI::App* cmd, const Table2Params& p) {
  ConfigLayer layer(cmd, p.common.config);
  Table2Params q = p;
  layer.fold("--sigma", q.sigmas);
  layer.fold("--lattices", q.lattices);
  layer.fold("--estimator", q.estimator);
  layer.fold("--samples", q.samples);
  layer.fold("--final-samples", q.final_samples);
  layer.fold("--seed", q.seed);
  layer.fold("--tol", q.tol);
  layer.finish("table2");

  const int threads = resolve_threads(q.common.threads);
  apply_threads(threads);
  const EstimatorKind kind = parse_estimator(q.estimator);

  std::vector<std::vector<std::string>> cells;
  std::vector<Table2Cell> results;
  for (const auto& name : q.lattices) {
    const Lattice l = lattice_from_spec(name, 2);
    for (double sigma : q.sigmas) {
      GainSearchConfig cfg;
      cfg.search_mc.samples = q.samples;
      cfg.search_mc.seed = q.seed;
      cfg.search_mc.threads = threads;
      cfg.quad.threads = threads;
      cfg.final_samples = q.final_samples;
      cfg.g_max = std::min(cfg.g_max, tractable_g_max(sigma));
      cfg.g_cap = std::min(cfg.g_cap, 2.0 * cfg.g_max);
      const OptResult res = optimize_gain(l, sigma, kind, cfg);

      // Re-measure at the optimum on a fresh stream, growing the sample
      // count until the entry standard error supports the check tolerance.
      const CodeSpec code =
          make_code(single_layer_encoding(res.params[0], 2), l, 2, 2);
      const AgnModel noise = iid_noise(sigma * sigma, 4);
      McConfig mc = cfg.search_mc;
      mc.samples = q.final_samples;
      mc.seed = q.seed + 7777777;
      DecodeReport rep =
          output_covariance_mc(code, noise, FiniteGkp::ideal(), kind, {}, mc);
      const double target_entry_se =
          2.0 * std::sqrt(rep.sigma_gm_sq) * (q.tol / 5.0);
      const long long scaled =
          scale_samples_for_se(rep, mc.samples, target_entry_se);
      if (scaled > mc.samples) {
        mc.samples = scaled;
        mc.seed = q.seed + 7777787;
        rep = output_covariance_mc(code, noise, FiniteGkp::ideal(), kind, {}, mc);
      }

      const double gm = std::sqrt(rep.sigma_gm_sq);
      results.push_back({name, sigma, gm});
      cells.push_back({name, format_sig(sigma), format_sig(res.params[0]),
                       format_sig(gm), format_sig(rep.sigma_gm_sq),
                       format_sig(rep.sigma_rms_sq),
                       std::to_string(mc.samples),
                       format_sig(rep.numerical_error)});
    }
  }
  emit_csv({"lattice", "sigma", "g_opt", "sigma_gm", "sigma_gm_sq",
            "sigma_rms_sq", "samples", "entry_se"},
           cells, q.common.out);

  if (q.common.check) {
    std::vector<std::string> violations;
    for (const auto& cell : results) {
      const double ref = table2_reference(cell.lattice, cell.sigma);
      if (ref == 0.0) continue;
      if (std::abs(cell.gm - ref) > q.tol)
        violations.push_back(cell.lattice + " sigma " + format_sig(cell.sigma) +
                             ": sigma_gm " + format_sig(cell.gm) +
                             " vs published " + format_sig(ref));
    }
    auto find_cell = [&](const std::string& name, double s) -> const Table2Cell* {
      for (const auto& c : results)
        if (c.lattice == name && std::abs(c.sigma - s) < 1e-12) return &c;
      return nullptr;
    };
    const Table2Cell* sq = find_cell("square", 0.1);
    const Table2Cell* hex = find_cell("hexagonal", 0.1);
    const Table2Cell* d4c = find_cell("d4", 0.1);
    if (sq && hex) {
      const double imp = 100.0 * (sq->gm - hex->gm) / sq->gm;
      if (std::abs(imp - 3.95) > 0.5)
        violations.push_back("hexagonal improvement " + format_sig(imp) +
                             "% vs published 3.95% (0.5 pt window)");
    }
    if (sq && d4c) {
      const double imp = 100.0 * (sq->gm - d4c->gm) / sq->gm;
      if (std::abs(imp - 9.04) > 0.5)
        violations.push_back("d4 improvement " + format_sig(imp) +
                             "% vs published 9.04% (0.5 pt window)");
    }
    if (!violations.empty()) {
      std::string msg = "table2:";
      for (const auto& v : violations) msg += "\n  " + v;
      throw CheckFailure(msg);
    }
  }
}

// ---------- table3 ----------

struct Table3Params {
  std::vector<double> sigmas{0.1, 0.2, 0.3};
  std::vector<std::string> ancillas{"square", "hexagonal", "d4"};
  std::string estimator = "mmse";
  long long samples = 60000;
  long long final_samples = 200000;
  std::uint64_t seed = 5;
  int starts = 8;
  int rounds = 3;
  double g1_max = 0.0;  // 0: per-sigma tractable default
  Common common;
};

struct Table3Ref {
  double g1 = 0.0, g2 = 0.0;
};

Table3Ref table3_reference(const std::string& ancilla, double sigma) {
  static const std::vector<std::pair<std::string, std::vector<Table3Ref>>> t{
      {"square", {{18.9, 1.14}, {3.43, 1.20}, {1.92, 1.20}}},
      {"hexagonal", {{22.5, 2.04}, {3.20, 1.11}, {1.75, 1.11}}},
      {"d4", {{8.46, 1.21}, {3.21, 1.04}, {1.72, 1.01}}}};
  static const std::vector<double> s{0.1, 0.2, 0.3};
  for (const auto& [name, vals] : t)
    if (name == ancilla)
      for (std::size_t i = 0; i < s.size(); ++i)
        if (std::abs(s[i] - sigma) < 1e-12) return vals[i];
  return {};
}

Lattice table3_lattice(const std::string& name) {
  if (name == "hexagonal") return hexagonal_pair();
  return lattice_from_spec(name, 2);
}

void run_table3(CLI::App* cmd, const Table3Params& p) {
  ConfigLayer layer(cmd, p.common.config);
  Table3Params q = p;
  layer.fold("--sigma", q.sigmas);
  layer.fold("--ancillas", q.ancillas);
  layer.fold("--estimator", q.estimator);
  layer.fold("--samples", q.samples);
  layer.fold("--final-samples", q.final_samples);
  layer.fold("--seed", q.seed);
  layer.fold("--starts", q.starts);
  layer.fold("--rounds", q.rounds);
  layer.fold("--g1-max", q.g1_max);
  layer.finish("table3");

  const int threads = resolve_threads(q.common.threads);
  apply_threads(threads);
  const EstimatorKind kind = parse_estimator(q.estimator);

  std::vector<std::vector<std::string>> cells;
  std::vector<std::string> violations;
  for (const auto& name : q.ancillas) {
    const Lattice l = table3_lattice(name);
    for (double sigma : q.sigmas) {
      ConcatSearchConfig cfg;
      cfg.search_mc.samples = q.samples;
      cfg.search_mc.seed = q.seed;
      cfg.search_mc.threads = threads;
      cfg.final_samples = q.final_samples;
      cfg.starts = q.starts;
      cfg.rounds = q.rounds;
      // The second layer multiplies the first layer's syndrome spread, so the
      // first-layer gain gets a tighter tractable cap than a single layer.
      cfg.g1_max = q.g1_max > 0.0
                       ? q.g1_max
                       : std::clamp(0.5 * (1.6 / (sigma * sigma) + 1.0), 6.0, 80.0);
      cfg.g1_cap = cfg.g1_max;
      const OptResult res = optimize_concat(l, sigma, kind, cfg);
      cells.push_back({name, format_sig(sigma), format_sig(res.params[0]),
                       format_sig(res.params[1]), format_sig(res.objective),
                       format_sig(res.sigma_gm_sq),
                       format_sig(res.sigma_rms_sq),
                       format_sig(res.multi_start_spread),
                       std::to_string(res.evaluations)});

      if (!q.common.check) continue;
      const Table3Ref ref = table3_reference(name, sigma);
      if (ref.g1 == 0.0) continue;
      McConfig mc = cfg.search_mc;
      mc.samples = q.final_samples;
      mc.seed = q.seed + 1000003;
      const CodeSpec paper_code =
          make_code(staircase_encoding(ref.g1, ref.g2), l, 1, 2);
      const DecodeReport paper_rep = output_covariance_mc(
          paper_code, iid_noise(sigma * sigma, 3), FiniteGkp::ideal(), kind,
          cfg.trunc, mc);
      const std::string tag = name + " sigma " + format_sig(sigma);
      if (std::abs(res.params[0] - ref.g1) > 0.15 * ref.g1)
        violations.push_back(tag + ": G1 " + format_sig(res.params[0]) +
                             " vs published " + format_sig(ref.g1) +
                             " (15% window)");
      if (std::abs(res.params[1] - ref.g2) > 0.15)
        violations.push_back(tag + ": G2 " + format_sig(res.params[1]) +
                             " vs published " + format_sig(ref.g2) +
                             " (0.15 window)");
      if (std::abs(res.objective - paper_rep.sigma_gm_sq) >
          0.01 * paper_rep.sigma_gm_sq)
        violations.push_back(
            tag + ": objective " + format_sig(res.objective) +
            " vs objective at the published params " +
            format_sig(paper_rep.sigma_gm_sq) + " (1% window)");
    }
  }
  emit_csv({"ancilla", "sigma", "g1_opt", "g2_opt", "objective_gm_sq",
            "sigma_gm_sq", "sigma_rms_sq", "restart_spread", "evaluations"},
           cells, q.common.out);
  if (q.common.check && !violations.empty()) {
    std::string msg = "table3:";
    for (const auto& v : violations) msg += "\n  " + v;
    throw CheckFailure(msg);
  }
}

// ---------- breakeven ----------

struct BreakevenParams {
  std::string lattice = "square";
  int modes = 0;
  std::string estimator = "mmse";
  double lo = 0.5;
  double hi = 0.71;
  double tol = 0.002;
  long long samples = 0;
  std::uint64_t seed = 1;
  Common common;
};

void run_breakeven(CLI::App* cmd, const BreakevenParams& p) {
  ConfigLayer layer(cmd, p.common.config);
  BreakevenParams q = p;
  layer.fold("--lattice", q.lattice);
  layer.fold("--modes", q.modes);
  layer.fold("--estimator", q.estimator);
  layer.fold("--lo", q.lo);
  layer.fold("--hi", q.hi);
  layer.fold("--tol", q.tol);
  layer.fold("--samples", q.samples);
  layer.fold("--seed", q.seed);
  layer.finish("breakeven");

  const int threads = resolve_threads(q.common.threads);
  apply_threads(threads);
  const Lattice l = load_lattice_arg(q.lattice, q.modes);
  const EstimatorKind kind = parse_estimator(q.estimator);
  BreakevenConfig cfg;
  cfg.lo = q.lo;
  cfg.hi = q.hi;
  cfg.tol = q.tol;
  cfg.gain.quad.threads = threads;
  cfg.gain.search_mc.threads = threads;
  cfg.gain.search_mc.seed = q.seed;
  cfg.gain.g_max = std::min(cfg.gain.g_max, tractable_g_max(q.hi));
  cfg.gain.g_cap = cfg.gain.g_max;
  if (q.samples > 0) {
    cfg.gain.search_mc.samples = q.samples;
    cfg.gain.final_samples = q.samples;
  }
  const double sigma_star = find_breakeven(l, kind, cfg);
  const auto window = breakeven_window();
  Json out{{"command", "breakeven"}, {"lattice", l.label},
           {"estimator", q.estimator}, {"sigma_star", sigma_star},
           {"window_low", window.first}, {"window_high", window.second},
           {"seed", q.seed}};
  emit_json(out, q.common.out);

  if (q.common.check) {
    const bool mmse = kind == EstimatorKind::kMmse;
    if (mmse)
      require_check(sigma_star >= window.first && sigma_star <= window.second,
                    "breakeven: sigma_star " + format_sig(sigma_star) +
                        " falls outside [1/sqrt(e), 1/sqrt(2)]");
    if (mmse && (l.label == "square" || l.label == "hexagonal"))
      require_check(std::abs(sigma_star - 0.605) <= 0.010,
                    "breakeven: sigma_star " + format_sig(sigma_star) +
                        " vs published 0.605 (0.010 window)");
    else if (!mmse && l.label == "square")
      require_check(std::abs(sigma_star - 0.558) <= 0.010,
                    "breakeven: sigma_star " + format_sig(sigma_star) +
                        " vs published 0.558 (0.010 window)");
    else if (mmse && l.label == "d4")
      require_check(sigma_star >= 0.595 && sigma_star <= 0.615,
                    "breakeven: sigma_star " + format_sig(sigma_star) +
                        " outside the published [0.595, 0.615]");
    else if (!mmse)
      throw ConfigError("--check: no published value for this configuration");
  }
}

// ---------- finite ----------

struct FiniteParams {
  std::vector<double> dbs;
  std::vector<double> sigmas;
  bool find_breakeven_db = false;
  double db_lo = 9.5;
  double db_hi = 11.5;
  double db_tol = 0.02;
  std::vector<double> probes{0.15, 0.18, 0.21, 0.25, 0.30};
  std::string lattice = "square";
  std::string estimator = "mmse";
  Common common;
};

void run_finite(CLI::App* cmd, const FiniteParams& p) {
  ConfigLayer layer(cmd, p.common.config);
  FiniteParams q = p;
  layer.fold("--db", q.dbs);
  layer.fold("--sigma", q.sigmas);
  layer.fold("--find-breakeven", q.find_breakeven_db);
  layer.fold("--db-lo", q.db_lo);
  layer.fold("--db-hi", q.db_hi);
  layer.fold("--db-tol", q.db_tol);
  layer.fold("--probes", q.probes);
  layer.fold("--lattice", q.lattice);
  layer.fold("--estimator", q.estimator);
  layer.finish("finite");

  const int threads = resolve_threads(q.common.threads);
  apply_threads(threads);
  const Lattice l = load_lattice_arg(q.lattice, 0);
  const EstimatorKind kind = parse_estimator(q.estimator);
  GainSearchConfig cfg;
  cfg.quad.threads = threads;
  cfg.search_mc.threads = threads;
  double s_hi = 0.0;
  for (double s : q.probes) s_hi = std::max(s_hi, s);
  for (double s : q.sigmas) s_hi = std::max(s_hi, s);
  if (s_hi > 0.0) {
    cfg.g_max = std::min(cfg.g_max, tractable_g_max(s_hi));
    cfg.g_cap = std::min(cfg.g_cap, 2.0 * cfg.g_max);
  }

  if (q.find_breakeven_db || (q.dbs.empty() && q.sigmas.empty())) {
    const double s_star = finite_breakeven_db(
        l, kind, to_vec(q.probes), q.db_lo, q.db_hi, q.db_tol, cfg);
    Json out{{"command", "finite"},
             {"lattice", l.label},
             {"estimator", q.estimator},
             {"breakeven_db", s_star},
             {"probes", q.probes}};
    emit_json(out, q.common.out);
    if (q.common.check)
      require_check(s_star >= 10.3 && s_star <= 10.7,
                    "finite: break-even squeezing " + format_sig(s_star) +
                        " dB outside the published [10.3, 10.7]");
    return;
  }
  if (q.dbs.empty() || q.sigmas.empty())
    throw ConfigError("finite: the curve needs both --db and --sigma");
  if (q.common.check)
    throw ConfigError("finite: --check applies to --find-breakeven");
  const std::vector<FiniteCurveRow> rows = finite_squeezing_curve(
      to_vec(q.dbs), to_vec(q.sigmas), l, kind, cfg);
  std::vector<std::vector<std::string>> cells;
  for (const auto& row : rows) {
    if (row.failed)
      cells.push_back({format_sig(row.s_db), format_sig(row.sigma), "", "",
                       "", row.error});
    else
      cells.push_back({format_sig(row.s_db), format_sig(row.sigma),
                       format_sig(row.g_opt), format_sig(row.qec_gain),
                       format_sig(row.sigma_gm_sq), "ok"});
  }
  emit_csv({"s_db", "sigma", "g_opt", "qec_gain", "sigma_gm_sq", "status"},
           cells, q.common.out);
}

// ---------- bounds ----------

struct BoundsParams {
  double sigma = 0.0;
  int data_modes = 1;
  int ancilla_modes = 1;
  double sigma_gm_sq = 0.0;
  std::vector<double> gains;
  double sigma_min = 0.02;
  double sigma_max = 0.9;
  int points = 89;
  std::vector<double> ratios{1.0, 2.0, 4.0};
  Common common;
};

void check_bounds_transition(const std::vector<double>& ratios) {
  const double edge = 1.0 / std::sqrt(2.0);
  for (double ratio : ratios) {
    const int m = static_cast<int>(std::llround(ratio));
    if (m < 1 || std::abs(ratio - m) > 1e-12)
      throw ConfigError("bounds: --check needs integer mode ratios");
    auto r = [&](double s) { return sigma_lb_capped(s, 1, m) / s; };
    require_check(r(edge - 1e-6) < 1.0 - 1e-7,
                  "bounds: ratio " + format_sig(ratio) +
                      " already reaches 1 below the no-cloning point");
    require_check(r(edge + 1e-6) >= 1.0 - 1e-12,
                  "bounds: ratio " + format_sig(ratio) +
                      " stays below 1 above the no-cloning point");
    for (int i = 1; i <= 2000; ++i) {
      const double s = 0.02 + (edge - 1e-6 - 0.02) * i / 2000.0;
      require_check(r(s) < 1.0,
                    "bounds: ratio " + format_sig(ratio) + " crosses 1 at " +
                        format_sig(s) + ", below the no-cloning point");
    }
  }
}

void run_bounds(CLI::App* cmd, const BoundsParams& p) {
  ConfigLayer layer(cmd, p.common.config);
  BoundsParams q = p;
  layer.fold("--sigma", q.sigma);
  layer.fold("--data-modes", q.data_modes);
  layer.fold("--ancilla-modes", q.ancilla_modes);
  layer.fold("--sigma-gm-sq", q.sigma_gm_sq);
  layer.fold("--gains", q.gains);
  layer.fold("--sigma-min", q.sigma_min);
  layer.fold("--sigma-max", q.sigma_max);
  layer.fold("--points", q.points);
  layer.fold("--ratios", q.ratios);
  layer.finish("bounds");

  if (q.sigma > 0.0) {
    const int n = q.data_modes, m = q.ancilla_modes;
    const double gm_sq = q.sigma_gm_sq > 0.0 ? q.sigma_gm_sq : q.sigma * q.sigma;
    Vec gains = q.gains.empty() ? Vec::Ones(n) : to_vec(q.gains);
    const BoundsReport rep = bounds_report(q.sigma, n, m, gm_sq, gains);
    Json out{{"command", "bounds"},
             {"sigma", q.sigma},
             {"data_modes", n},
             {"ancilla_modes", m},
             {"sigma_gm_sq", gm_sq},
             {"report", to_json(rep)},
             {"entropies", to_json(entropy_report(gains, q.sigma, n, m))}};
    emit_json(out, q.common.out);
    if (q.common.check) check_bounds_transition(q.ratios);
    return;
  }

  std::vector<std::vector<std::string>> cells;
  const Vec s = linspace(q.sigma_min, q.sigma_max, q.points);
  for (double ratio : q.ratios) {
    const int m = static_cast<int>(std::llround(ratio));
    if (m < 1 || std::abs(ratio - m) > 1e-12)
      throw ConfigError("bounds: mode ratios must be positive integers");
    for (int i = 0; i < s.size(); ++i) {
      const double lb = sigma_lb(s(i), 1, m);
      const double capped = sigma_lb_capped(s(i), 1, m);
      cells.push_back({format_sig(ratio), format_sig(s(i)), format_sig(lb),
                       format_sig(capped), format_sig(lb / s(i)),
                       format_sig(capped / s(i))});
    }
  }
  emit_csv({"m_over_n", "sigma", "sigma_lb", "sigma_lb_capped",
            "lb_over_sigma", "capped_over_sigma"},
           cells, q.common.out);
  if (q.common.check) check_bounds_transition(q.ratios);
}

// ---------- reduce ----------

struct ReduceParams {
  std::string input;
  int data_modes = 0;
  int ancilla_modes = 0;
  double sigma = 0.1;
  Common common;
};

void run_reduce(CLI::App* cmd, const ReduceParams& p) {
  ConfigLayer layer(cmd, p.common.config);
  ReduceParams q = p;
  layer.fold("--data-modes", q.data_modes);
  layer.fold("--ancilla-modes", q.ancilla_modes);
  layer.fold("--sigma", q.sigma);
  layer.finish("reduce");

  SymplecticMatrix enc;
  int n = q.data_modes, m = q.ancilla_modes;
  auto parse_tail = [&](const std::string& spec, std::size_t prefix,
                        int want) -> std::vector<double> {
    std::vector<double> vals;
    std::istringstream ss(spec.substr(prefix));
    std::string piece;
    while (std::getline(ss, piece, ',')) {
      try {
        vals.push_back(std::stod(piece));
      } catch (const std::exception&) {
        throw ConfigError("reduce: cannot parse parameter in '" + spec + "'");
      }
    }
    if (static_cast<int>(vals.size()) != want)
      throw ConfigError("reduce: '" + spec + "' needs " +
                        std::to_string(want) + " parameter(s)");
    return vals;
  };
  bool builtin_sqrep2 = false;
  if (q.input.rfind("sqrep2:", 0) == 0) {
    enc = sqrep2(parse_tail(q.input, 7, 1)[0]);
    n = 1;
    m = 1;
    builtin_sqrep2 = true;
  } else if (q.input.rfind("sqrep3:", 0) == 0) {
    enc = sqrep3(parse_tail(q.input, 7, 1)[0]);
    n = 1;
    m = 2;
  } else if (q.input.rfind("staircase:", 0) == 0) {
    const auto v = parse_tail(q.input, 10, 2);
    enc = staircase_encoding(v[0], v[1]);
    n = 1;
    m = 2;
  } else if (q.input.rfind("tms:", 0) == 0) {
    enc = tms(parse_tail(q.input, 4, 1)[0]);
    n = 1;
    m = 1;
  } else if (std::filesystem::exists(q.input)) {
    const Json j = load_json(q.input);
    Mat entries;
    if (j.is_object()) {
      reject_unknown_keys(j, {"entries", "data_modes", "ancilla_modes"},
                          "reduce input");
      entries = mat_from_json(j.at("entries"));
      if (j.contains("data_modes")) n = j.at("data_modes").get<int>();
      if (j.contains("ancilla_modes")) m = j.at("ancilla_modes").get<int>();
    } else {
      entries = mat_from_json(j);
    }
    if (n < 1 || m < 1)
      throw ConfigError(
          "reduce: file input needs --data-modes and --ancilla-modes");
    enc = as_symplectic(std::move(entries));
  } else {
    throw ConfigError("reduce: '" + q.input +
                      "' is neither a file nor a built-in encoding "
                      "(sqrep2:<l>, sqrep3:<l>, staircase:<g1>,<g2>, tms:<g>)");
  }

  const ReductionResult res = reduce_to_tms(enc, n, m, q.sigma);
  Json out{{"command", "reduce"},
           {"input", q.input},
           {"data_modes", n},
           {"ancilla_modes", m},
           {"result", to_json(res)}};
  out["gains"] = out["result"]["gains"];
  out["residual"] = res.residual;
  emit_json(out, q.common.out);

  if (q.common.check) {
    if (!builtin_sqrep2)
      throw ConfigError("--check: no published value for this input");
    const double ref = (std::sqrt(2.0) + 1.0) / 2.0;
    require_check(std::abs(res.gains(0) - ref) <= 1e-10,
                  "reduce: sqrep2 gain " + format_sig(res.gains(0)) +
                      " vs (sqrt(2)+1)/2 beyond 1e-10");
  }
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Oscillator-code toolkit: decoding, reduction, bounds, and "
               "optimization of GKP-stabilizer codes under Gaussian noise"};
  app.require_subcommand(1);
  app.set_version_flag("--version", "1.0.0");

  auto lat_info = std::make_shared<LatticeInfoParams>();
  CLI::App* lattice_cmd = app.add_subcommand("lattice", "Lattice inspection");
  lattice_cmd->require_subcommand(1);
  CLI::App* info_cmd = lattice_cmd->add_subcommand(
      "info", "Generator, integrality, self-duality, shortest vector");
  info_cmd->add_option("name", lat_info->name,
                       "Built-in label, param:<r>,<theta>, or JSON file")
      ->required();
  info_cmd->add_option("--modes", lat_info->modes,
                       "Mode count for labels that allow several");
  add_common(info_cmd, lat_info->common, false);
  info_cmd->callback([info_cmd, lat_info] { run_lattice_info(info_cmd, *lat_info); });

  auto dec = std::make_shared<DecodeParams>();
  CLI::App* dec_cmd = app.add_subcommand(
      "decode", "Output covariance of a single-layer code; optimizes the "
                "gain unless --gain is given");
  dec_cmd->add_option("--lattice", dec->lattice, "Ancilla lattice");
  dec_cmd->add_option("--modes", dec->modes, "Mode count for the lattice label");
  dec_cmd->add_option("--sigma", dec->sigma, "Noise standard deviation");
  dec_cmd->add_option("--sigma-sq", dec->sigma_sq, "Noise variance");
  dec_cmd->add_option("--estimator", dec->estimator, "linear or mmse");
  dec_cmd->add_option("--method", dec->method, "auto, quadrature, or mc");
  dec_cmd->add_option("--gain", dec->gain, "Fixed TMS gain (0: optimize)");
  dec_cmd->add_option("--gkp-db", dec->gkp_db,
                      "Finite GKP squeezing in dB (0: ideal)");
  dec_cmd->add_option("--samples", dec->samples, "MC samples (0: default)");
  dec_cmd->add_option("--seed", dec->seed, "MC seed");
  add_common(dec_cmd, dec->common);
  dec_cmd->callback([dec_cmd, dec] { run_decode(dec_cmd, *dec); });

  auto swp = std::make_shared<SweepParams>();
  CLI::App* swp_cmd = app.add_subcommand(
      "sweep", "Gain-optimized output over the (r, theta) lattice family");
  swp_cmd->add_option("--sigma", swp->sigma, "Noise standard deviation");
  swp_cmd->add_option("--sigma-sq", swp->sigma_sq, "Noise variance");
  swp_cmd->add_option("--r-min", swp->r_min, "Smallest squeeze");
  swp_cmd->add_option("--r-max", swp->r_max, "Largest squeeze");
  swp_cmd->add_option("--r-points", swp->r_points, "Squeeze axis points");
  swp_cmd->add_option("--theta-min", swp->theta_min, "Smallest angle");
  swp_cmd->add_option("--theta-max", swp->theta_max, "Largest angle");
  swp_cmd->add_option("--theta-points", swp->theta_points, "Angle axis points");
  swp_cmd->add_option("--estimator", swp->estimator, "linear or mmse");
  add_common(swp_cmd, swp->common);
  swp_cmd->callback([swp_cmd, swp] { run_sweep(swp_cmd, *swp); });

  auto t2 = std::make_shared<Table2Params>();
  CLI::App* t2_cmd = app.add_subcommand(
      "table2", "Two-mode shared-gain codes across lattices and noise levels");
  t2_cmd->add_option("--sigma", t2->sigmas, "Noise levels")->delimiter(',');
  t2_cmd->add_option("--lattices", t2->lattices, "Lattice labels")
      ->delimiter(',');
  t2_cmd->add_option("--estimator", t2->estimator, "linear or mmse");
  t2_cmd->add_option("--samples", t2->samples, "MC samples per search step");
  t2_cmd->add_option("--final-samples", t2->final_samples,
                     "MC samples for the reported value");
  t2_cmd->add_option("--seed", t2->seed, "MC seed");
  t2_cmd->add_option("--tol", t2->tol, "Check tolerance; also sets the "
                                       "automatic sample budget");
  add_common(t2_cmd, t2->common);
  t2_cmd->callback([t2_cmd, t2] { run_table2(t2_cmd, *t2); });

  auto t3 = std::make_shared<Table3Params>();
  CLI::App* t3_cmd = app.add_subcommand(
      "table3", "Optimized two-layer staircase over a two-mode ancilla pair");
  t3_cmd->add_option("--sigma", t3->sigmas, "Noise levels")->delimiter(',');
  t3_cmd->add_option("--ancillas", t3->ancillas, "Ancilla pair labels")
      ->delimiter(',');
  t3_cmd->add_option("--estimator", t3->estimator, "linear or mmse");
  t3_cmd->add_option("--samples", t3->samples, "MC samples per search step");
  t3_cmd->add_option("--final-samples", t3->final_samples,
                     "MC samples for the reported value");
  t3_cmd->add_option("--seed", t3->seed, "MC seed");
  t3_cmd->add_option("--starts", t3->starts, "Optimizer restarts");
  t3_cmd->add_option("--rounds", t3->rounds, "Coordinate-descent rounds");
  t3_cmd->add_option("--g1-max", t3->g1_max,
                     "First-layer gain ceiling (0: per-sigma default)");
  add_common(t3_cmd, t3->common);
  t3_cmd->callback([t3_cmd, t3] { run_table3(t3_cmd, *t3); });

  auto be = std::make_shared<BreakevenParams>();
  CLI::App* be_cmd = app.add_subcommand(
      "breakeven", "Noise level where the optimized code stops helping");
  be_cmd->add_option("--lattice", be->lattice, "Ancilla lattice");
  be_cmd->add_option("--modes", be->modes, "Mode count for the lattice label");
  be_cmd->add_option("--estimator", be->estimator, "linear or mmse");
  be_cmd->add_option("--lo", be->lo, "Bracket low end");
  be_cmd->add_option("--hi", be->hi, "Bracket high end");
  be_cmd->add_option("--tol", be->tol, "Bisection tolerance");
  be_cmd->add_option("--samples", be->samples,
                     "MC samples per evaluation (0: default)");
  be_cmd->add_option("--seed", be->seed, "MC seed");
  add_common(be_cmd, be->common);
  be_cmd->callback([be_cmd, be] { run_breakeven(be_cmd, *be); });

  auto fin = std::make_shared<FiniteParams>();
  CLI::App* fin_cmd = app.add_subcommand(
      "finite", "Finitely squeezed ancillas: QEC-gain curve or the break-even "
                "squeezing (default)");
  fin_cmd->add_option("--db", fin->dbs, "Squeezing values in dB")
      ->delimiter(',');
  fin_cmd->add_option("--sigma", fin->sigmas, "Noise levels")->delimiter(',');
  fin_cmd->add_flag("--find-breakeven", fin->find_breakeven_db,
                    "Bisect for the break-even squeezing");
  fin_cmd->add_option("--db-lo", fin->db_lo, "Bisection bracket low end");
  fin_cmd->add_option("--db-hi", fin->db_hi, "Bisection bracket high end");
  fin_cmd->add_option("--db-tol", fin->db_tol, "Bisection tolerance in dB");
  fin_cmd->add_option("--probes", fin->probes,
                      "Noise levels probed for any QEC gain")
      ->delimiter(',');
  fin_cmd->add_option("--lattice", fin->lattice, "Ancilla lattice");
  fin_cmd->add_option("--estimator", fin->estimator, "linear or mmse");
  add_common(fin_cmd, fin->common);
  fin_cmd->callback([fin_cmd, fin] { run_finite(fin_cmd, *fin); });

  auto bnd = std::make_shared<BoundsParams>();
  CLI::App* bnd_cmd = app.add_subcommand(
      "bounds", "Closed-form performance bounds: sweep CSV, or a point "
                "report when --sigma is given");
  bnd_cmd->add_option("--sigma", bnd->sigma, "Point report at this noise");
  bnd_cmd->add_option("--data-modes", bnd->data_modes, "N for the point report");
  bnd_cmd->add_option("--ancilla-modes", bnd->ancilla_modes,
                      "M for the point report");
  bnd_cmd->add_option("--sigma-gm-sq", bnd->sigma_gm_sq,
                      "Achieved geometric-mean output variance");
  bnd_cmd->add_option("--gains", bnd->gains, "Per-data-mode gains")
      ->delimiter(',');
  bnd_cmd->add_option("--sigma-min", bnd->sigma_min, "Sweep start");
  bnd_cmd->add_option("--sigma-max", bnd->sigma_max, "Sweep end");
  bnd_cmd->add_option("--points", bnd->points, "Sweep points");
  bnd_cmd->add_option("--ratios", bnd->ratios, "Mode ratios M/N")
      ->delimiter(',');
  add_common(bnd_cmd, bnd->common);
  bnd_cmd->callback([bnd_cmd, bnd] { run_bounds(bnd_cmd, *bnd); });

  auto red = std::make_shared<ReduceParams>();
  CLI::App* red_cmd = app.add_subcommand(
      "reduce", "Reduce an encoding to coupled two-mode squeezers");
  red_cmd->add_option("input", red->input,
                      "JSON matrix file or built-in: sqrep2:<l>, sqrep3:<l>, "
                      "staircase:<g1>,<g2>, tms:<g>")
      ->required();
  red_cmd->add_option("--data-modes", red->data_modes, "N for file input");
  red_cmd->add_option("--ancilla-modes", red->ancilla_modes, "M for file input");
  red_cmd->add_option("--sigma", red->sigma, "Noise level used in validation");
  add_common(red_cmd, red->common);
  red_cmd->callback([red_cmd, red] { run_reduce(red_cmd, *red); });

  try {
    app.parse(argc, argv);
  } catch (const CLI::Success& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    std::cerr << e.what() << "\n";
    return 2;
  } catch (const CheckFailure& e) {
    std::cerr << "check failed: " << e.what() << "\n";
    return 4;
  } catch (const ConfigError& e) {
    std::cerr << "configuration error: " << e.what() << "\n";
    return 2;
  } catch (const std::invalid_argument& e) {
    std::cerr << "configuration error: " << e.what() << "\n";
    return 2;
  } catch (const ValidationError& e) {
    std::cerr << "validation error: " << e.what() << "\n";
    return 2;
  } catch (const NumericalError& e) {
    std::cerr << "numerical failure: " << e.what() << "\n";
    return 3;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 3;
  }
  return 0;
}
