#pragma once

#include <cmath>
#include <numbers>
#include <optional>

#include "thzlink/errors.hpp"
#include "thzlink/snrstats.hpp"

namespace thzlink {

// (a, b) of the binary-constellation conditional error kernel a Q(sqrt(b g)).
struct ModulationCoeffs {
  double a = 1.0;
  double b = 2.0;  // defaults are BPSK
};

enum class AsymptoticRegime { beta_gt_alphamu, beta_le_alphamu };

struct MetricResult {
  double exact = 0.0;
  std::optional<double> asymptotic;
  AsymptoticRegime regime = AsymptoticRegime::beta_gt_alphamu;
};

namespace detail {

// varphi(zeta) of the residue expansion, evaluated at the double pole
// zeta0 = mu - beta/alpha where the squared gamma collides with itself.
inline double varphi_at_pole(const SnrModel& model) {
  const auto& f = model.config().fading;
  const double r = model.config().misalignment.beta / f.alpha;
  // Gamma(m + beta/alpha) Gamma(beta/alpha) / Gamma(1 + beta/alpha); the
  // squared denominator gamma is Gamma(1)^2.
  return std::exp(log_gamma_real(f.m + r) + log_gamma_real(r) -
                  log_gamma_real(1.0 + r));
}

inline AsymptoticRegime regime_of(const SnrModel& model) {
  const auto& f = model.config().fading;
  const double beta = model.config().misalignment.beta;
  if (std::abs(beta - f.alpha * f.mu) < 1e-9)
    throw DegenerateError(
        "asymptotic: beta == alpha*mu collides the residue poles");
  return beta > f.alpha * f.mu ? AsymptoticRegime::beta_gt_alphamu
                               : AsymptoticRegime::beta_le_alphamu;
}

inline double plain_double_sum(const SnrModel& model) {
  double sum = 0.0;
  for (int k = 0; k < model.rule().N; ++k) {
    double row = 0.0;
    for (int i = 0; i < model.topology().l; ++i)
      row += model.coeff(i) * model.phi1(i, k);
    sum += model.rule().weights[k] * row;
  }
  return sum;
}

// sum_{i,k} coeff w Phi1 * u_k^(beta/alpha - mu) * ln(1/u_k) with
// u_k = Phi2(k) * arg_scale; the log factor of the double-pole residue.
inline double log_weighted_sum(const SnrModel& model, double arg_scale) {
  const auto& f = model.config().fading;
  const double expo = model.config().misalignment.beta / f.alpha - f.mu;
  double sum = 0.0;
  for (int k = 0; k < model.rule().N; ++k) {
    const double u = model.phi2(k) * arg_scale;
    double row = 0.0;
    for (int i = 0; i < model.topology().l; ++i)
      row += model.coeff(i) * model.phi1(i, k);
    sum += model.rule().weights[k] * row * std::pow(u, expo) * std::log(1.0 / u);
  }
  return sum;
}

}  // namespace detail

inline double outage(const SnrModel& model, double gamma_th) {
  if (!(gamma_th > 0.0)) throw DomainError("outage: requires gamma_th > 0");
  return model.cdf(gamma_th);
}

// Dominant-residue high-SNR outage. For beta > alpha*mu the simple pole of
// Gamma(zeta) at zero dominates; otherwise the order-2 pole of the squared
// gamma at mu - beta/alpha does, bringing the log factor.
inline MetricResult outage_asymptotic(const SnrModel& model, double gamma_th) {
  if (!(gamma_th > 0.0))
    throw DomainError("outage_asymptotic: requires gamma_th > 0");
  const auto regime = detail::regime_of(model);
  const auto& cfg = model.config();
  const auto& f = cfg.fading;
  const double beta = cfg.misalignment.beta;
  const double g = gamma_th / model.gamma0();
  const double g_mu = std::pow(g, 0.5 * f.alpha * f.mu);
  MetricResult res;
  res.regime = regime;
  if (regime == AsymptoticRegime::beta_gt_alphamu) {
    const double bam = beta - f.alpha * f.mu;
    res.asymptotic = 4.0 * cfg.r_max * f.c1 * std::pow(f.c2, -(f.mu + f.m)) /
                     (f.alpha * cfg.d0 * f.mu * bam * bam) * g_mu *
                     detail::plain_double_sum(model);
  } else {
    const double zeta0 = f.mu - beta / f.alpha;
    const double lambda2 = std::exp(log_gamma_real(zeta0)) *
                           detail::varphi_at_pole(model);
    const double arg_scale = std::pow(g, 0.5 * f.alpha) / f.c2;
    res.asymptotic = 4.0 * cfg.r_max * f.c1 * std::pow(f.c2, -(f.mu + f.m)) /
                     (std::pow(f.alpha, 3) * cfg.d0 *
                      std::exp(model.log_gamma_mu_m())) *
                     lambda2 * g_mu *
                     detail::log_weighted_sum(model, arg_scale);
  }
  res.exact = outage(model, gamma_th);
  return res;
}

inline double asep(const SnrModel& model, const ModulationCoeffs& mc = {},
                   const ContourConfig& cc = {}) {
  if (!(mc.a > 0.0) || !(mc.b > 0.0))
    throw DomainError("asep: modulation coefficients must be positive");
  const auto& cfg = model.config();
  const auto& f = cfg.fading;
  const double half_bg = 0.5 * mc.b * model.gamma0();
  const double pref = 2.0 * mc.a * cfg.r_max * f.c1 *
                      std::pow(f.c2, -(f.mu + f.m)) /
                      (std::sqrt(std::numbers::pi) * f.alpha * cfg.d0 *
                       std::exp(model.log_gamma_mu_m())) *
                      std::pow(half_bg, -0.5 * f.alpha * f.mu);
  const double arg_scale = 1.0 / (f.c2 * std::pow(half_bg, 0.5 * f.alpha));
  return pref * model.weighted_h_sum(model.asep_spec(), arg_scale, cc);
}

inline MetricResult asep_asymptotic(const SnrModel& model,
                                    const ModulationCoeffs& mc = {}) {
  if (!(mc.a > 0.0) || !(mc.b > 0.0))
    throw DomainError("asep_asymptotic: modulation coefficients must be positive");
  const auto regime = detail::regime_of(model);
  const auto& cfg = model.config();
  const auto& f = cfg.fading;
  const double beta = cfg.misalignment.beta;
  const double half_bg = 0.5 * mc.b * model.gamma0();
  const double g_mu = std::pow(half_bg, -0.5 * f.alpha * f.mu);
  MetricResult res;
  res.regime = regime;
  if (regime == AsymptoticRegime::beta_gt_alphamu) {
    const double bam = beta - f.alpha * f.mu;
    res.asymptotic = 2.0 * mc.a * cfg.r_max * f.c1 *
                     std::pow(f.c2, -(f.mu + f.m)) *
                     std::exp(log_gamma_real(0.5 + 0.5 * f.alpha * f.mu)) /
                     (std::sqrt(std::numbers::pi) * f.alpha * cfg.d0 * f.mu *
                      bam * bam) *
                     g_mu * detail::plain_double_sum(model);
  } else {
    const double zeta0 = f.mu - beta / f.alpha;
    // Xi(zeta0) = Gamma((1 + beta)/2)-type factor times varphi(zeta0); the
    // residue also carries Gamma(zeta0) from the simple gamma.
    const double xi = std::exp(log_gamma_real(0.5 + 0.5 * beta)) *
                      detail::varphi_at_pole(model);
    const double lambda2 = std::exp(log_gamma_real(zeta0)) * xi;
    const double arg_scale = 1.0 / (f.c2 * std::pow(half_bg, 0.5 * f.alpha));
    res.asymptotic = 2.0 * mc.a * cfg.r_max * f.c1 *
                     std::pow(f.c2, -(f.mu + f.m)) /
                     (std::sqrt(std::numbers::pi) * std::pow(f.alpha, 3) *
                      cfg.d0 * std::exp(model.log_gamma_mu_m())) *
                     g_mu * lambda2 *
                     detail::log_weighted_sum(model, arg_scale);
  }
  res.exact = asep(model, mc);
  return res;
}

inline double capacity(const SnrModel& model, const ContourConfig& cc = {}) {
  const auto& cfg = model.config();
  const auto& f = cfg.fading;
  const double pref = 2.0 * cfg.r_max * f.c1 * std::pow(f.c2, -(f.mu + f.m)) /
                      (std::numbers::ln2 * cfg.d0 *
                       std::exp(model.log_gamma_mu_m())) *
                      std::pow(model.gamma0(), -0.5 * f.alpha * f.mu);
  const double arg_scale =
      1.0 / (f.c2 * std::pow(model.gamma0(), 0.5 * f.alpha));
  return pref * model.weighted_h_sum(model.capacity_spec(), arg_scale, cc);
}

// High-SNR capacity from the implicit derivative of the moment generating
// ratio at n = 0.
inline double capacity_asymptotic(const SnrModel& model) {
  const auto& cfg = model.config();
  const auto& f = cfg.fading;
  const double beta = cfg.misalignment.beta;
  const double pref = 4.0 * cfg.r_max * beta_fn(f.mu, f.m) * f.c1 /
                      (f.alpha * cfg.d0 * std::numbers::ln2 * beta * beta *
                       std::pow(f.c2, f.m));
  const double psi_term = 2.0 / f.alpha * (digamma(f.mu) - digamma(f.m)) -
                          4.0 / beta;
  const double log_c2g = std::log(std::pow(f.c2, 2.0 / f.alpha) *
                                  model.gamma0());
  double sum = 0.0;
  for (int k = 0; k < model.rule().N; ++k) {
    const double phi2 = model.phi2(k);
    double row = 0.0;
    for (int i = 0; i < model.topology().l; ++i)
      row += model.coeff(i) * model.phi1(i, k);
    sum += model.rule().weights[k] * row / std::pow(phi2, f.mu) *
           (psi_term + log_c2g - 2.0 / f.alpha * std::log(phi2));
  }
  return pref * sum;
}

}  // namespace thzlink
