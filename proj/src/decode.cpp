#include "gkpstab/decode.hpp"

#include <omp.h>

#include <algorithm>
#include <array>
#include <cmath>
#include <cstdlib>
#include <string>
#include <vector>

#include <Eigen/Cholesky>
#include <Eigen/Eigenvalues>

#include "gkpstab/errors.hpp"
#include "gkpstab/quadrature.hpp"
#include "gkpstab/rng.hpp"

namespace gkpstab {

namespace {

int resolve_threads(int requested) {
  if (requested > 0) return requested;
  if (const char* env = std::getenv("GKPSTAB_THREADS")) {
    const int n = std::atoi(env);
    if (n > 0) return n;
  }
  return omp_get_max_threads();
}

void validate_truncation(const TruncationPolicy& trunc) {
  if (!(trunc.rel_tail_bound > 0.0) || !(trunc.rel_tail_bound < 1.0))
    throw DomainError("truncation: rel_tail_bound must lie in (0, 1)");
  if (trunc.max_range < 1)
    throw DomainError("truncation: max_range must be at least 1");
}

// Everything the wrapped-sum evaluations need, precomputed once per code.
struct Workspace {
  NoiseBlocks blocks;
  Mat t_full;           // forward covariance of (data, raw syndrome)
  Mat v_d_inv;
  Mat neg_a;            // -v_d^{-1} v_da, the linear-estimator matrix
  Mat neg_a_t;          // its transpose
  Mat neg_translates;   // K x 2M, rows -k*ell
  double log_norm = 0;  // log of the Gaussian normalization over syndromes
  int dim_d = 0;
  int dim_a = 0;
};

Workspace make_workspace(const CodeSpec& code, const AgnModel& noise,
                         const FiniteGkp& fin, const TruncationPolicy& trunc) {
  Workspace ws;
  const Mat v_x = propagate_noise(code, noise);
  ws.blocks = noise_blocks(v_x, code.lattice, fin);
  ws.t_full = syndrome_covariance(v_x, code.lattice, fin);
  ws.dim_d = 2 * ws.blocks.data_modes;
  ws.dim_a = 2 * ws.blocks.ancilla_modes;
  ws.v_d_inv = ws.blocks.v_d.inverse();
  ws.neg_a = -(ws.v_d_inv * ws.blocks.v_da);
  ws.neg_a_t = ws.neg_a.transpose();
  ws.neg_translates = -cell_translates(ws.blocks.v_cond, trunc).points;
  const Eigen::LLT<Mat> llt(ws.blocks.v_cond);
  if (llt.info() != Eigen::Success)
    throw NumericalError("decode: conditional precision not positive definite");
  ws.log_norm = -0.5 * ws.dim_a * std::log(2.0 * M_PI) +
                Mat(llt.matrixL()).diagonal().array().log().sum();
  return ws;
}

// Reused buffers for the per-syndrome translate sums.
struct CellScratch {
  Mat d, dv, mu, r, rw, second, contrib;
  Vec e, w, f;
};

// Evaluates the wrapped Gaussian mixture at syndrome s. Returns the
// stabilized log of sum_k exp(e_k); the estimate lands in sc.f and, when
// requested, the spread sum_k w_k (mu_k - f)(mu_k - f)^T in sc.second.
double evaluate_cell(const Workspace& ws, const Vec& s, EstimatorKind kind,
                     bool need_second, CellScratch& sc) {
  sc.d = ws.neg_translates;
  sc.d.rowwise() += s.transpose();
  sc.dv.noalias() = sc.d * ws.blocks.v_cond;
  sc.e = -0.5 * sc.dv.cwiseProduct(sc.d).rowwise().sum();
  const double e_max = sc.e.maxCoeff();
  sc.w = (sc.e.array() - e_max).exp();
  const double w_sum = sc.w.sum();
  sc.mu.noalias() = sc.d * ws.neg_a_t;
  if (kind == EstimatorKind::kMmse) {
    sc.f.noalias() = sc.mu.transpose() * sc.w;
    sc.f /= w_sum;
  } else {
    sc.f.noalias() = ws.neg_a * s;
  }
  if (need_second) {
    sc.r = sc.mu;
    sc.r.rowwise() -= sc.f.transpose();
    sc.rw = sc.r;
    sc.rw.array().colwise() *= sc.w.array();
    sc.second.noalias() = sc.r.transpose() * sc.rw;
    sc.second /= w_sum;
  }
  return std::log(w_sum) + e_max;
}

Workspace workspace_from_blocks(const NoiseBlocks& blocks,
                                const TruncationPolicy& trunc) {
  Workspace ws;
  ws.blocks = blocks;
  ws.dim_d = 2 * blocks.data_modes;
  ws.dim_a = 2 * blocks.ancilla_modes;
  ws.v_d_inv = blocks.v_d.inverse();
  ws.neg_a = -(ws.v_d_inv * blocks.v_da);
  ws.neg_a_t = ws.neg_a.transpose();
  ws.neg_translates = -cell_translates(blocks.v_cond, trunc).points;
  const Eigen::LLT<Mat> llt(blocks.v_cond);
  if (llt.info() != Eigen::Success)
    throw NumericalError("decode: conditional precision not positive definite");
  ws.log_norm = -0.5 * ws.dim_a * std::log(2.0 * M_PI) +
                Mat(llt.matrixL()).diagonal().array().log().sum();
  return ws;
}

}  // namespace

double cell_half_width() { return std::sqrt(M_PI / 2.0); }

Vec wrap_to_cell(const Vec& raw) {
  const double h = cell_half_width();
  Vec out(raw.size());
  for (Eigen::Index i = 0; i < raw.size(); ++i)
    out[i] = raw[i] - kEll * std::floor((raw[i] + h) / kEll);
  return out;
}

Syndrome syndrome(const Vec& x_a, const Lattice& l) {
  if (x_a.size() != 2 * l.modes)
    throw DimensionError("syndrome: x_a has " + std::to_string(x_a.size()) +
                         " entries, lattice spans " +
                         std::to_string(2 * l.modes));
  const Mat m_hat = l.generator / kEll;
  return Syndrome{wrap_to_cell(m_hat.transpose() * omega(l.modes) * x_a)};
}

CellTranslates cell_translates(const Mat& v_cond,
                               const TruncationPolicy& trunc) {
  validate_truncation(trunc);
  const int dim = static_cast<int>(v_cond.rows());
  const double h = cell_half_width();
  const Eigen::SelfAdjointEigenSolver<Mat> es(v_cond);
  const double lam_min = es.eigenvalues().minCoeff();
  if (!(lam_min > 0.0))
    throw NumericalError(
        "cell_translates: conditional precision not positive definite");
  const double cutoff = 2.0 * std::log(1.0 / trunc.rel_tail_bound);
  const double reach = h + std::sqrt(cutoff / lam_min);
  const int n_max = static_cast<int>(std::ceil(reach / kEll));
  if (n_max > trunc.max_range)
    throw NumericalError("cell_translates: required range " +
                         std::to_string(n_max) + " per component exceeds cap " +
                         std::to_string(trunc.max_range));
  const long long side = 2LL * n_max + 1;
  double total = 1.0;
  for (int a = 0; a < dim; ++a) total *= static_cast<double>(side);
  if (total > 2e8)
    throw NumericalError(
        "cell_translates: translate enumeration too large for dimension " +
        std::to_string(dim));
  std::vector<double> kept;
  std::vector<int> idx(dim, -n_max);
  const long long count = static_cast<long long>(total);
  for (long long it = 0; it < count; ++it) {
    // conservative keep: lam_min * dist(k, cell)^2 below the tail cutoff
    double dist_sq = 0.0;
    for (int a = 0; a < dim; ++a) {
      const double d = std::max(std::abs(idx[a] * kEll) - h, 0.0);
      dist_sq += d * d;
    }
    if (lam_min * dist_sq < cutoff)
      for (int a = 0; a < dim; ++a) kept.push_back(idx[a] * kEll);
    for (int a = 0; a < dim; ++a) {
      if (++idx[a] <= n_max) break;
      idx[a] = -n_max;
    }
  }
  CellTranslates out;
  out.n_max = n_max;
  const long long rows = static_cast<long long>(kept.size()) / dim;
  out.points.resize(rows, dim);
  for (long long r = 0; r < rows; ++r)
    for (int a = 0; a < dim; ++a) out.points(r, a) = kept[r * dim + a];
  return out;
}

Vec estimator_linear(const NoiseBlocks& blocks, const Syndrome& s) {
  return -(blocks.v_d.inverse() * blocks.v_da * s.s);
}

Vec estimator_mmse(const NoiseBlocks& blocks, const Syndrome& s,
                   const TruncationPolicy& trunc) {
  const Workspace ws = workspace_from_blocks(blocks, trunc);
  CellScratch sc;
  evaluate_cell(ws, s.s, EstimatorKind::kMmse, false, sc);
  return sc.f;
}

double joint_syndrome_pdf(const NoiseBlocks& blocks, const Syndrome& s,
                          const TruncationPolicy& trunc) {
  const Workspace ws = workspace_from_blocks(blocks, trunc);
  CellScratch sc;
  const double log_mass =
      evaluate_cell(ws, s.s, EstimatorKind::kLinear, false, sc);
  return std::exp(ws.log_norm + log_mass);
}

std::pair<double, double> metrics(const Mat& v_out) {
  if (v_out.rows() != v_out.cols())
    throw DimensionError("metrics: covariance must be square");
  const Mat sym = 0.5 * (v_out + v_out.transpose());
  const Eigen::SelfAdjointEigenSolver<Mat> es(sym);
  const Vec eigs = es.eigenvalues();
  if (eigs.minCoeff() < -1e-12)
    throw ValidationError("metrics: covariance eigenvalue " +
                          std::to_string(eigs.minCoeff()) + " is negative");
  const double dim = static_cast<double>(v_out.rows());
  double log_det = 0.0;
  bool singular = false;
  for (Eigen::Index i = 0; i < eigs.size(); ++i) {
    if (eigs[i] <= 0.0)
      singular = true;
    else
      log_det += std::log(eigs[i]);
  }
  const double gm = singular ? 0.0 : std::exp(log_det / dim);
  const double rms = sym.trace() / dim;
  return {gm, rms};
}

DecodeReport output_covariance_quadrature(const CodeSpec& code,
                                          const AgnModel& noise,
                                          const FiniteGkp& fin,
                                          EstimatorKind kind,
                                          const TruncationPolicy& trunc,
                                          const QuadConfig& quad) {
  const int m_anc = code.ancilla_modes;
  if (m_anc != 1 && m_anc != 2)
    throw DomainError(
        "output_covariance_quadrature: cell quadrature covers one or two "
        "ancilla modes only");
  if (quad.points < 2 || quad.points_2mode < 2)
    throw DomainError("output_covariance_quadrature: need at least 2 points");
  if (!(quad.rel_tol > 0.0))
    throw DomainError("output_covariance_quadrature: rel_tol must be positive");

  const Workspace ws = make_workspace(code, noise, fin, trunc);
  const int pts = (m_anc == 1) ? quad.points : quad.points_2mode;
  const QuadratureRule& rule = gauss_legendre(pts);
  const int dim = 2 * m_anc;
  const double h = cell_half_width();
  const int nt = resolve_threads(quad.threads);
  const long long n_terms = ws.neg_translates.rows();

  long long evals_total = 0;
  Mat v_prev;
  for (int depth = 0; depth <= quad.max_panel_depth; ++depth) {
    const long long panels_axis = 1LL << depth;
    long long n_panels = 1;
    long long evals_panel = 1;
    for (int a = 0; a < dim; ++a) {
      n_panels *= panels_axis;
      evals_panel *= pts;
    }
    if (static_cast<double>(n_panels) * evals_panel * n_terms > 4e9)
      throw NumericalError(
          "output_covariance_quadrature: panel budget exceeded at depth " +
          std::to_string(depth) + " before reaching rel_tol");

    std::vector<double> mass(n_panels);
    std::vector<Mat> pc(n_panels);
    const double width = 2.0 * h / panels_axis;
    const double half = width / 2.0;

    auto panel_worker = [&](long long pi) {
      std::array<int, 4> pidx{};
      long long rest = pi;
      for (int a = 0; a < dim; ++a) {
        pidx[a] = static_cast<int>(rest % panels_axis);
        rest /= panels_axis;
      }
      std::vector<double> nodes(dim * pts), wts(dim * pts);
      for (int a = 0; a < dim; ++a) {
        const double center = -h + width * pidx[a] + half;
        for (int t = 0; t < pts; ++t) {
          nodes[a * pts + t] = center + half * rule.nodes[t];
          wts[a * pts + t] = half * rule.weights[t];
        }
      }
      CellScratch sc;
      Vec s(dim);
      double m_acc = 0.0;
      Mat c_acc = Mat::Zero(ws.dim_d, ws.dim_d);
      for (long long flat = 0; flat < evals_panel; ++flat) {
        long long f = flat;
        double wgt = 1.0;
        for (int a = 0; a < dim; ++a) {
          const int t = static_cast<int>(f % pts);
          f /= pts;
          s[a] = nodes[a * pts + t];
          wgt *= wts[a * pts + t];
        }
        const double log_mass = evaluate_cell(ws, s, kind, true, sc);
        const double dens = std::exp(ws.log_norm + log_mass);
        m_acc += wgt * dens;
        c_acc += (wgt * dens) * sc.second;
      }
      mass[pi] = m_acc;
      pc[pi] = std::move(c_acc);
    };

    if (nt > 1) {
#pragma omp parallel for num_threads(nt) schedule(dynamic)
      for (long long pi = 0; pi < n_panels; ++pi) panel_worker(pi);
    } else {
      for (long long pi = 0; pi < n_panels; ++pi) panel_worker(pi);
    }

    double total_mass = 0.0;
    Mat total_pc = Mat::Zero(ws.dim_d, ws.dim_d);
    for (long long pi = 0; pi < n_panels; ++pi) {
      total_mass += mass[pi];
      total_pc += pc[pi];
    }
    evals_total += n_panels * evals_panel;

    const Mat v = ws.v_d_inv + total_pc / total_mass;
    if (depth > 0) {
      const double max_abs = v.cwiseAbs().maxCoeff();
      double worst = 0.0;
      for (int i = 0; i < ws.dim_d; ++i)
        for (int j = 0; j < ws.dim_d; ++j) {
          const double denom = std::max(std::abs(v(i, j)), 1e-2 * max_abs);
          worst = std::max(worst, std::abs(v(i, j) - v_prev(i, j)) / denom);
        }
      if (worst <= quad.rel_tol) {
        DecodeReport report;
        report.v_out = v;
        std::tie(report.sigma_gm_sq, report.sigma_rms_sq) = metrics(v);
        report.numerical_error =
            std::max((v - v_prev).cwiseAbs().maxCoeff(),
                     std::abs(total_mass - 1.0));
        report.samples_or_nodes = evals_total;
        return report;
      }
    }
    v_prev = v;
  }
  throw NumericalError(
      "output_covariance_quadrature: no convergence within panel depth " +
      std::to_string(quad.max_panel_depth));
}

DecodeReport output_covariance_mc(const CodeSpec& code, const AgnModel& noise,
                                  const FiniteGkp& fin, EstimatorKind kind,
                                  const TruncationPolicy& trunc,
                                  const McConfig& mc) {
  if (mc.samples < 1)
    throw DomainError("output_covariance_mc: need at least one sample");
  if (mc.chunk < 1) throw DomainError("output_covariance_mc: chunk must be positive");

  const Workspace ws = make_workspace(code, noise, fin, trunc);
  const int nt = resolve_threads(mc.threads);
  const double h = cell_half_width();
  const int dd = ws.dim_d;
  const int da = ws.dim_a;

  Mat chol;
  if (mc.rao_blackwell) {
    const Eigen::LLT<Mat> llt(ws.t_full.bottomRightCorner(da, da));
    if (llt.info() != Eigen::Success)
      throw NumericalError("output_covariance_mc: syndrome covariance not PD");
    chol = llt.matrixL();
  } else {
    const Eigen::LLT<Mat> llt(ws.t_full);
    if (llt.info() != Eigen::Success)
      throw NumericalError("output_covariance_mc: joint covariance not PD");
    chol = llt.matrixL();
  }

  const long long n_chunks = (mc.samples + mc.chunk - 1) / mc.chunk;
  std::vector<Mat> acc(n_chunks), acc2(n_chunks);

  auto chunk_worker = [&](long long c) {
    const long long lo = c * mc.chunk;
    const long long m = std::min(mc.chunk, mc.samples - lo);
    GaussianStream gauss(mc.seed, static_cast<std::uint64_t>(c));
    CellScratch sc;
    Mat a = Mat::Zero(dd, dd), a2 = Mat::Zero(dd, dd);
    if (mc.rao_blackwell) {
      Vec z(da), s(da);
      for (long long i = 0; i < m; ++i) {
        for (int j = 0; j < da; ++j) z[j] = gauss.next();
        s.noalias() = chol * z;
        for (int j = 0; j < da; ++j)
          s[j] -= kEll * std::floor((s[j] + h) / kEll);
        evaluate_cell(ws, s, kind, true, sc);
        sc.contrib = ws.v_d_inv + sc.second;
        a += sc.contrib;
        a2.array() += sc.contrib.array().square();
      }
    } else {
      Vec z(dd + da), x(dd + da), s(da), r(dd);
      for (long long i = 0; i < m; ++i) {
        for (int j = 0; j < dd + da; ++j) z[j] = gauss.next();
        x.noalias() = chol * z;
        s = x.tail(da);
        for (int j = 0; j < da; ++j)
          s[j] -= kEll * std::floor((s[j] + h) / kEll);
        evaluate_cell(ws, s, kind, false, sc);
        r = x.head(dd) - sc.f;
        sc.contrib.noalias() = r * r.transpose();
        a += sc.contrib;
        a2.array() += sc.contrib.array().square();
      }
    }
    acc[c] = std::move(a);
    acc2[c] = std::move(a2);
  };

  if (nt > 1) {
#pragma omp parallel for num_threads(nt) schedule(dynamic)
    for (long long c = 0; c < n_chunks; ++c) chunk_worker(c);
  } else {
    for (long long c = 0; c < n_chunks; ++c) chunk_worker(c);
  }

  Mat sum = Mat::Zero(dd, dd), sum2 = Mat::Zero(dd, dd);
  for (long long c = 0; c < n_chunks; ++c) {
    sum += acc[c];
    sum2 += acc2[c];
  }
  const double n = static_cast<double>(mc.samples);
  DecodeReport report;
  report.v_out = sum / n;
  std::tie(report.sigma_gm_sq, report.sigma_rms_sq) = metrics(report.v_out);
  const Mat var =
      (sum2 / n - report.v_out.cwiseProduct(report.v_out)).cwiseMax(0.0);
  report.numerical_error = std::sqrt(var.maxCoeff() / n);
  report.samples_or_nodes = mc.samples;
  report.seed = mc.seed;
  return report;
}

}  // namespace gkpstab
