#include "gkpstab/bounds.hpp"

#include <cmath>
#include <string>

#include "gkpstab/errors.hpp"

namespace gkpstab {

namespace {

constexpr double kInvSqrtE = 0.60653065971263342;
constexpr double kInvSqrt2 = 0.70710678118654752;

void require_counts(int data_modes, int ancilla_modes, const char* who) {
  if (data_modes < 1)
    throw DimensionError(std::string(who) + ": need at least one data mode");
  if (ancilla_modes < data_modes)
    throw DimensionError(std::string(who) +
                         ": need at least as many ancilla modes as data modes");
}

void require_gains(const Vec& gains, const char* who) {
  for (int i = 0; i < gains.size(); ++i)
    if (!(gains(i) >= 1.0 - 1e-12))
      throw DomainError(std::string(who) + ": gain " + std::to_string(gains(i)) +
                        " is below 1");
}

}  // namespace

double sigma_lb(double sigma, int data_modes, int ancilla_modes) {
  require_counts(data_modes, ancilla_modes, "sigma_lb");
  const double s2 = sigma * sigma;
  if (!(s2 > 0.0) || !(s2 < 1.0))
    throw DomainError("sigma_lb: sigma^2 must lie in (0,1), got " +
                      std::to_string(s2));
  const double expo =
      static_cast<double>(data_modes + ancilla_modes) / (2.0 * data_modes);
  return kInvSqrtE * std::pow(s2 / (1.0 - s2), expo);
}

double sigma_lb_capped(double sigma, int data_modes, int ancilla_modes) {
  const double raw = sigma_lb(sigma, data_modes, ancilla_modes);
  if (sigma >= kInvSqrt2) return std::max(raw, sigma);
  return raw;
}

double capacity_lb(double sigma_gm_sq, int data_modes) {
  if (!(sigma_gm_sq > 0.0))
    throw DomainError("capacity_lb: variance must be positive");
  if (data_modes < 1)
    throw DimensionError("capacity_lb: need at least one data mode");
  const double bits =
      data_modes * std::log2(1.0 / (std::exp(1.0) * sigma_gm_sq));
  return std::max(0.0, bits);
}

double capacity_ub(const Vec& variances) {
  double bits = 0.0;
  for (int i = 0; i < variances.size(); ++i) {
    const double v = variances(i);
    if (!(v > 0.0) || !(v < 1.0))
      throw DomainError("capacity_ub: variance must lie in (0,1), got " +
                        std::to_string(v));
    bits += std::max(0.0, std::log2((1.0 - v) / v));
  }
  return bits;
}

double no_threshold_tr_lb(const Vec& gains, double sigma) {
  require_gains(gains, "no_threshold_tr_lb");
  if (!(sigma > 0.0))
    throw DomainError("no_threshold_tr_lb: sigma must be positive");
  double tr = 0.0;
  for (int i = 0; i < gains.size(); ++i)
    tr += 2.0 * sigma * sigma / (2.0 * gains(i) - 1.0);
  return tr;
}

std::pair<double, double> breakeven_window() {
  return {kInvSqrtE, kInvSqrt2};
}

EntropyReport entropy_report(const Vec& gains, double sigma, int data_modes,
                             int ancilla_modes) {
  require_counts(data_modes, ancilla_modes, "entropy_report");
  require_gains(gains, "entropy_report");
  if (gains.size() != data_modes)
    throw DimensionError("entropy_report: expected one gain per data mode");
  if (!(sigma > 0.0))
    throw DomainError("entropy_report: sigma must be positive");
  const double base = std::log(2.0 * M_PI * std::exp(1.0) * sigma * sigma);
  EntropyReport rep;
  double sum_ln = 0.0;
  for (int i = 0; i < gains.size(); ++i)
    sum_ln += std::log(2.0 * gains(i) - 1.0);
  rep.s_xd = data_modes * base + sum_ln;
  rep.s_xa = ancilla_modes * base + sum_ln;
  rep.s_joint = (data_modes + ancilla_modes) * base;
  rep.mutual_info = 2.0 * sum_ln;
  rep.cond_entropy = data_modes * base - sum_ln;
  return rep;
}

BoundsReport bounds_report(double sigma, int data_modes, int ancilla_modes,
                           double sigma_gm_sq, const Vec& gains) {
  BoundsReport rep;
  rep.sigma_lb = sigma_lb(sigma, data_modes, ancilla_modes);
  rep.capacity_lb_bits = capacity_lb(sigma_gm_sq, data_modes);
  rep.capacity_ub_bits = capacity_ub(
      Vec::Constant(data_modes + ancilla_modes, sigma * sigma));
  rep.no_threshold_tr_lb = no_threshold_tr_lb(gains, sigma);
  rep.breakeven_window = breakeven_window();
  return rep;
}

}  // namespace gkpstab
