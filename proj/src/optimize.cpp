#include "gkpstab/optimize.hpp"

#include <algorithm>
#include <cmath>
#include <functional>
#include <limits>
#include <string>
#include <utility>

#include "gkpstab/errors.hpp"

namespace gkpstab {

namespace {

double pick(const DecodeReport& rep, Objective obj) {
  return obj == Objective::kGm ? rep.sigma_gm_sq : rep.sigma_rms_sq;
}

CodeSpec single_layer_code(const Lattice& l, double gain) {
  return make_code(single_layer_encoding(gain, l.modes), l, l.modes, l.modes);
}

struct GainEvaluator {
  const Lattice& l;
  double sigma;
  EstimatorKind kind;
  const GainSearchConfig& cfg;
  long long evaluations = 0;

  DecodeReport report(double gain, long long mc_samples,
                      std::uint64_t seed_shift) {
    ++evaluations;
    const CodeSpec code = single_layer_code(l, gain);
    const AgnModel noise = iid_noise(sigma * sigma, l.modes == 1 ? 2 : 4);
    if (l.modes == 1)
      return output_covariance_quadrature(code, noise, cfg.fin, kind,
                                          cfg.trunc, cfg.quad);
    McConfig mc = cfg.search_mc;
    if (mc_samples > 0) mc.samples = mc_samples;
    mc.seed += seed_shift;
    return output_covariance_mc(code, noise, cfg.fin, kind, cfg.trunc, mc);
  }

  double operator()(double gain) { return pick(report(gain, 0, 0), cfg.objective); }
};

// Golden-section minimization; f assumed unimodal on [lo, hi].
double golden_min(const std::function<double(double)>& f, double lo, double hi,
                  double rel_width_tol) {
  const double gr = (std::sqrt(5.0) - 1.0) / 2.0;
  double c = hi - gr * (hi - lo), d = lo + gr * (hi - lo);
  double fc = f(c), fd = f(d);
  while (hi - lo > rel_width_tol * std::max(1.0, (lo + hi) / 2.0)) {
    if (fc < fd) {
      hi = d;
      d = c;
      fd = fc;
      c = hi - gr * (hi - lo);
      fc = f(c);
    } else {
      lo = c;
      c = d;
      fc = fd;
      d = lo + gr * (hi - lo);
      fd = f(d);
    }
  }
  return (lo + hi) / 2.0;
}

std::vector<double> gain_grid(double g_max, int points) {
  std::vector<double> g{1.0};
  const double t0 = 1e-3, t1 = std::max(g_max - 1.0, 2e-3);
  for (int i = 0; i < points; ++i) {
    const double u = static_cast<double>(i) / (points - 1);
    g.push_back(1.0 + t0 * std::pow(t1 / t0, u));
  }
  return g;
}

}  // namespace

SymplecticMatrix single_layer_encoding(double gain, int modes) {
  if (modes == 1) return tms(gain);
  if (modes != 2)
    throw DimensionError("single_layer_encoding: one or two data modes");
  const Mat t = tms(gain).entries;
  Mat s = embed_two_mode(t, 4, 0, 2) * embed_two_mode(t, 4, 1, 3);
  return as_symplectic(std::move(s));
}

OptResult optimize_gain(const Lattice& l, double sigma, EstimatorKind kind,
                        const GainSearchConfig& cfg) {
  if (l.modes != 1 && l.modes != 2)
    throw DimensionError("optimize_gain: lattice must cover one or two modes");
  if (!(sigma > 0.0)) throw DomainError("optimize_gain: sigma must be positive");
  if (cfg.coarse_points < 3)
    throw ConfigError("optimize_gain: need at least three coarse points");

  GainEvaluator ev{l, sigma, kind, cfg};
  std::vector<double> grid = gain_grid(cfg.g_max, cfg.coarse_points);
  std::vector<double> val;
  val.reserve(grid.size());
  for (double g : grid) val.push_back(ev(g));
  auto best_it = std::min_element(val.begin(), val.end());
  std::size_t best = best_it - val.begin();

  // Push the upper edge out when the best sits on it.
  double top = cfg.g_max;
  while (best == grid.size() - 1 && top < cfg.g_cap) {
    const double new_top = std::min(top * 2.0, cfg.g_cap);
    for (int i = 1; i <= 4; ++i) {
      grid.push_back(top * std::pow(new_top / top, i / 4.0));
      val.push_back(ev(grid.back()));
    }
    top = new_top;
    best_it = std::min_element(val.begin(), val.end());
    best = best_it - val.begin();
  }

  const double lo = best == 0 ? grid[0] : grid[best - 1];
  const double hi = best + 1 < grid.size() ? grid[best + 1] : grid[best];
  const double rel_tol = l.modes == 1 ? 1e-7 : 1e-4;
  const double g_opt =
      lo < hi ? golden_min([&ev](double g) { return ev(g); }, lo, hi, rel_tol)
              : grid[best];

  const DecodeReport final_rep =
      ev.report(g_opt, cfg.final_samples, l.modes == 1 ? 0 : 1000003);
  OptResult out;
  out.params = {g_opt};
  out.objective = pick(final_rep, cfg.objective);
  out.sigma_gm_sq = final_rep.sigma_gm_sq;
  out.sigma_rms_sq = final_rep.sigma_rms_sq;
  out.evaluations = ev.evaluations;
  out.multi_start_spread = 0.0;
  return out;
}

std::vector<SweepRow> sweep_single_mode(const SweepGrid& grid,
                                        EstimatorKind kind,
                                        const GainSearchConfig& cfg) {
  if (grid.r_values.size() == 0 || grid.theta_values.size() == 0)
    throw ConfigError("sweep_single_mode: empty grid axis");
  if (!(grid.sigma_sq > 0.0))
    throw DomainError("sweep_single_mode: sigma_sq must be positive");
  for (int i = 0; i < grid.theta_values.size(); ++i) {
    const double th = grid.theta_values(i);
    if (th < -1e-12 || th > M_PI / 4.0 + 1e-12)
      throw DomainError("sweep_single_mode: theta outside [0, pi/4]");
  }
  for (int i = 0; i < grid.r_values.size(); ++i)
    if (!(grid.r_values(i) > 0.0))
      throw DomainError("sweep_single_mode: r must be positive");

  const double sigma = std::sqrt(grid.sigma_sq);
  std::vector<SweepRow> rows;
  rows.reserve(grid.r_values.size() * grid.theta_values.size());
  for (int ir = 0; ir < grid.r_values.size(); ++ir) {
    for (int it = 0; it < grid.theta_values.size(); ++it) {
      SweepRow row;
      row.r = grid.r_values(ir);
      row.theta = grid.theta_values(it);
      try {
        const OptResult res =
            optimize_gain(param_lattice(row.r, row.theta), sigma, kind, cfg);
        row.g_opt = res.params[0];
        row.sigma_rms_sq = res.sigma_rms_sq;
        row.sigma_gm_sq = res.sigma_gm_sq;
      } catch (const std::exception& e) {
        row.failed = true;
        row.error = e.what();
      }
      rows.push_back(std::move(row));
    }
  }
  return rows;
}

SymplecticMatrix staircase_encoding(double g1, double g2) {
  Mat s = embed_two_mode(tms(g1).entries, 3, 0, 1) *
          embed_two_mode(tms(g2).entries, 3, 1, 2);
  return as_symplectic(std::move(s));
}

OptResult optimize_concat(const Lattice& l, double sigma, EstimatorKind kind,
                          const ConcatSearchConfig& cfg) {
  if (l.modes != 2)
    throw DimensionError("optimize_concat: need a two-mode ancilla lattice");
  if (!(sigma > 0.0))
    throw DomainError("optimize_concat: sigma must be positive");
  const int starts = std::max(cfg.starts, 8);

  long long evaluations = 0;
  auto eval = [&](double g1, double g2, long long samples,
                  std::uint64_t seed_shift) {
    ++evaluations;
    const CodeSpec code = make_code(staircase_encoding(g1, g2), l, 1, 2);
    const AgnModel noise = iid_noise(sigma * sigma, 3);
    McConfig mc = cfg.search_mc;
    if (samples > 0) mc.samples = samples;
    mc.seed += seed_shift;
    const DecodeReport rep =
        output_covariance_mc(code, noise, FiniteGkp::ideal(), kind, cfg.trunc, mc);
    return std::pair<double, DecodeReport>(pick(rep, cfg.objective), rep);
  };
  auto search_val = [&](double g1, double g2) {
    return eval(g1, g2, 0, 0).first;
  };

  struct Converged {
    double g1, g2, final_obj;
    DecodeReport rep;
  };
  std::vector<Converged> done;
  std::string last_error;
  for (int i = 0; i < starts; ++i) {
    const double u = starts == 1 ? 0.0 : static_cast<double>(i) / (starts - 1);
    double g1 = 1.3 * std::pow(std::min(cfg.g1_max, 40.0) / 1.3, u);
    double g2 = 1.03 + 0.55 * (i % 3);
    try {
      double g1_limit = cfg.g1_max;
      for (int round = 0; round < cfg.rounds; ++round) {
        double lo = std::max(1.0001, g1 / 2.2);
        double hi = std::min(g1 * 2.2, g1_limit);
        g1 = golden_min([&](double x) { return search_val(x, g2); }, lo, hi,
                        2e-3);
        if (g1 > 0.98 * g1_limit && g1_limit < cfg.g1_cap)
          g1_limit = std::min(2.0 * g1_limit, cfg.g1_cap);
        lo = std::max(1.0, g2 - 0.5);
        hi = std::min(g2 + 0.5, cfg.g2_max);
        g2 = golden_min([&](double x) { return search_val(g1, x); }, lo, hi,
                        2e-3);
      }
      auto [obj, rep] = eval(g1, g2, cfg.final_samples, 1000003);
      done.push_back({g1, g2, obj, std::move(rep)});
    } catch (const std::exception& e) {
      last_error = e.what();
    }
  }
  if (done.empty())
    throw NumericalError("optimize_concat: every restart failed; last error: " +
                         last_error);

  const auto best = std::min_element(
      done.begin(), done.end(),
      [](const Converged& a, const Converged& b) { return a.final_obj < b.final_obj; });
  double worst = -std::numeric_limits<double>::infinity();
  for (const auto& c : done) worst = std::max(worst, c.final_obj);

  OptResult out;
  out.params = {best->g1, best->g2};
  out.objective = best->final_obj;
  out.sigma_gm_sq = best->rep.sigma_gm_sq;
  out.sigma_rms_sq = best->rep.sigma_rms_sq;
  out.evaluations = evaluations;
  out.multi_start_spread = worst - best->final_obj;
  return out;
}

double find_breakeven(const Lattice& l, EstimatorKind kind,
                      const BreakevenConfig& cfg) {
  if (!(cfg.lo < cfg.hi) || !(cfg.tol > 0.0))
    throw ConfigError("find_breakeven: invalid bracket or tolerance");
  GainSearchConfig gain = cfg.gain;
  gain.objective = Objective::kGm;
  auto h = [&](double sigma) {
    const OptResult res = optimize_gain(l, sigma, kind, gain);
    return std::sqrt(res.sigma_gm_sq) - sigma;
  };
  double lo = cfg.lo, hi = cfg.hi;
  double h_lo = h(lo), h_hi = h(hi);
  if (!(h_lo < 0.0) || !(h_hi > 0.0))
    throw NumericalError(
        "find_breakeven: no sign change over the bracket (h(lo) = " +
        std::to_string(h_lo) + ", h(hi) = " + std::to_string(h_hi) + ")");
  while (hi - lo > cfg.tol) {
    const double mid = (lo + hi) / 2.0;
    const double h_mid = h(mid);
    if (std::abs(h_mid) < 1e-8) return mid;
    (h_mid < 0.0 ? lo : hi) = mid;
  }
  return (lo + hi) / 2.0;
}

std::vector<FiniteCurveRow> finite_squeezing_curve(
    const Vec& s_db_values, const Vec& sigma_values, const Lattice& l,
    EstimatorKind kind, const GainSearchConfig& cfg) {
  if (s_db_values.size() == 0 || sigma_values.size() == 0)
    throw ConfigError("finite_squeezing_curve: empty axis");
  std::vector<FiniteCurveRow> rows;
  rows.reserve(s_db_values.size() * sigma_values.size());
  for (int is = 0; is < s_db_values.size(); ++is) {
    for (int iv = 0; iv < sigma_values.size(); ++iv) {
      FiniteCurveRow row;
      row.s_db = s_db_values(is);
      row.sigma = sigma_values(iv);
      try {
        GainSearchConfig local = cfg;
        local.fin = FiniteGkp::from_db(row.s_db);
        local.objective = Objective::kGm;
        const OptResult res = optimize_gain(l, row.sigma, kind, local);
        row.g_opt = res.params[0];
        row.sigma_gm_sq = res.sigma_gm_sq;
        row.qec_gain = row.sigma * row.sigma / res.sigma_gm_sq;
      } catch (const std::exception& e) {
        row.failed = true;
        row.error = e.what();
      }
      rows.push_back(std::move(row));
    }
  }
  return rows;
}

double finite_breakeven_db(const Lattice& l, EstimatorKind kind,
                           const Vec& sigma_probes, double lo_db, double hi_db,
                           double tol_db, const GainSearchConfig& cfg) {
  if (sigma_probes.size() == 0)
    throw ConfigError("finite_breakeven_db: need sigma probes");
  if (!(lo_db < hi_db) || !(tol_db > 0.0))
    throw ConfigError("finite_breakeven_db: invalid bracket or tolerance");
  auto excess = [&](double s_db) {
    GainSearchConfig local = cfg;
    local.fin = FiniteGkp::from_db(s_db);
    local.objective = Objective::kGm;
    double best = -std::numeric_limits<double>::infinity();
    for (int i = 0; i < sigma_probes.size(); ++i) {
      const double sigma = sigma_probes(i);
      const OptResult res = optimize_gain(l, sigma, kind, local);
      best = std::max(best, sigma * sigma / res.sigma_gm_sq);
    }
    return best - 1.0;
  };
  double lo = lo_db, hi = hi_db;
  const double e_lo = excess(lo), e_hi = excess(hi);
  if (!(e_lo < 0.0) || !(e_hi > 0.0))
    throw NumericalError(
        "finite_breakeven_db: no sign change over the bracket (excess(lo) = " +
        std::to_string(e_lo) + ", excess(hi) = " + std::to_string(e_hi) + ")");
  while (hi - lo > tol_db) {
    const double mid = (lo + hi) / 2.0;
    (excess(mid) < 0.0 ? lo : hi) = mid;
  }
  return (lo + hi) / 2.0;
}

long long scale_samples_for_se(const DecodeReport& pilot,
                               long long pilot_samples, double target_se) {
  if (!(target_se > 0.0))
    throw DomainError("scale_samples_for_se: target must be positive");
  if (pilot_samples < 1)
    throw DomainError("scale_samples_for_se: pilot sample count must be positive");
  if (pilot.numerical_error <= target_se) return pilot_samples;
  const double ratio = pilot.numerical_error / target_se;
  const double n = std::ceil(1.3 * pilot_samples * ratio * ratio);
  return static_cast<long long>(std::min(n, 5e8));
}

}  // namespace gkpstab
