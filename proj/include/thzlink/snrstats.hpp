#pragma once

#include <cmath>
#include <utility>
#include <vector>

#include "thzlink/channel.hpp"
#include "thzlink/errors.hpp"
#include "thzlink/foxh.hpp"
#include "thzlink/mobility.hpp"
#include "thzlink/specfun.hpp"

namespace thzlink {

// Binds every symbol of the closed-form SNR statistics: link configuration,
// topology, quadrature rule, absorption coefficient and gamma_0. The four
// Fox H specs depend only on (alpha, mu, m, beta) and are built once.
class SnrModel {
 public:
  SnrModel(LinkConfig config, const AbsorptionTable& table, int quad_order = 30)
      : config_(std::move(config)),
        topo_(topology_preset(config_.topology)),
        rule_(gauss_legendre(quad_order)),
        kappa_(kappa_of_f(table, config_.frequency_hz)),
        gamma0_(gamma0_of(config_, table)) {
    const auto& f = config_.fading;
    const double a = f.alpha, mu = f.mu, m = f.m;
    const double beta = config_.misalignment.beta;
    if (!(beta > 2.0)) throw DomainError("SnrModel: requires beta > 2");
    if (!(m > std::max(2.0 / a, 1.0)))
      throw DomainError("SnrModel: requires m > max(2/alpha, 1)");
    if (!(config_.delta >= 2.0 && config_.delta <= 6.0))
      throw DomainError("SnrModel: requires delta in [2, 6]");
    if (!(config_.gamma_bar > 0.0) || !(config_.r_max > 0.0) ||
        !(config_.d0 > 0.0))
      throw DomainError("SnrModel: gamma_bar, R_M and d0 must be positive");

    const double bam = beta - a * mu;
    pdf_spec_ = FoxHSpec::make(
        3, 1, 3, 3,
        {{1.0 - mu - m, 1.0}, {1.0 + bam, a}, {1.0 + bam, a}},
        {{0.0, 1.0}, {bam, a}, {bam, a}});
    cdf_spec_ = FoxHSpec::make(
        3, 2, 4, 4,
        {{1.0 - mu - m, 1.0}, {1.0 - mu, 1.0}, {1.0 + bam, a}, {1.0 + bam, a}},
        {{0.0, 1.0}, {bam, a}, {bam, a}, {-mu, 1.0}});
    mgf_spec_ = FoxHSpec::make(
        3, 2, 4, 3,
        {{1.0, 0.5 * a}, {1.0 - m, 1.0}, {1.0 + beta, a}, {1.0 + beta, a}},
        {{mu, 1.0}, {beta, a}, {beta, a}});
    asep_spec_ = FoxHSpec::make(
        3, 3, 5, 4,
        {{1.0 - mu - m, 1.0},
         {1.0 - mu, 1.0},
         {0.5 - 0.5 * a * mu, 0.5 * a},
         {1.0 + bam, a},
         {1.0 + bam, a}},
        {{0.0, 1.0}, {bam, a}, {bam, a}, {-mu, 1.0}});
    capacity_spec_ = FoxHSpec::make(
        5, 2, 5, 5,
        {{1.0 - mu - m, 1.0},
         {-0.5 * a * mu, 0.5 * a},
         {1.0 + bam, a},
         {1.0 + bam, a},
         {1.0 - 0.5 * a * mu, 0.5 * a}},
        {{0.0, 1.0},
         {bam, a},
         {bam, a},
         {-0.5 * a * mu, 0.5 * a},
         {-0.5 * a * mu, 0.5 * a}});

    // Per-(i, k) constants of the double sum: B_i (d0/R_M)^(beta_i+1) w_k,
    // Phi(x_k; v1(i)) and Phi(x_k; v2).
    const int N = rule_.N;
    coeff_.resize(topo_.l);
    phi1_.resize(topo_.l);
    for (int i = 0; i < topo_.l; ++i) {
      coeff_[i] = topo_.B[i] *
                  std::pow(config_.d0 / config_.r_max, topo_.beta_exp[i] + 1.0);
      auto [v1, v2] = kernel_vectors(i, config_, topo_, kappa_);
      phi1_[i].resize(N);
      if (i == 0) {
        phi2_.resize(N);
        for (int k = 0; k < N; ++k) phi2_[k] = phi_kernel(rule_.nodes[k], v2);
      }
      for (int k = 0; k < N; ++k) phi1_[i][k] = phi_kernel(rule_.nodes[k], v1);
    }
    log_gamma_mu_m_ = log_gamma_real(f.mu + f.m);
  }

  const LinkConfig& config() const { return config_; }
  const TopologyParams& topology() const { return topo_; }
  const QuadratureRule& rule() const { return rule_; }
  double kappa() const { return kappa_; }
  double gamma0() const { return gamma0_; }

  // f_Gamma(gamma) as the double sum over topology terms and nodes.
  double pdf(double gamma, const ContourConfig& cc = {}) const {
    if (!(gamma > 0.0)) throw DomainError("SnrModel::pdf: requires gamma > 0");
    const auto& f = config_.fading;
    const double g = gamma / gamma0_;
    const double pref = 2.0 * config_.r_max * f.c1 *
                        std::pow(f.c2, -(f.mu + f.m)) /
                        (config_.d0 * gamma0_ * std::exp(log_gamma_mu_m_)) *
                        std::pow(g, 0.5 * f.alpha * f.mu - 1.0);
    const double arg_scale = std::pow(g, 0.5 * f.alpha) / f.c2;
    return pref * weighted_h_sum(pdf_spec_, arg_scale, cc);
  }

  // F_Gamma(gamma); raw values outside [-1e-6, 1+1e-6] raise, mild
  // truncation overshoot inside the band is clamped.
  double cdf(double gamma, const ContourConfig& cc = {}) const {
    if (!(gamma > 0.0)) throw DomainError("SnrModel::cdf: requires gamma > 0");
    const auto& f = config_.fading;
    const double g = gamma / gamma0_;
    const double pref = 4.0 * config_.r_max * f.c1 *
                        std::pow(f.c2, -(f.mu + f.m)) /
                        (f.alpha * config_.d0 * std::exp(log_gamma_mu_m_)) *
                        std::pow(g, 0.5 * f.alpha * f.mu);
    const double arg_scale = std::pow(g, 0.5 * f.alpha) / f.c2;
    const double raw = pref * weighted_h_sum(cdf_spec_, arg_scale, cc);
    if (raw < -1e-6 || raw > 1.0 + 1e-6)
      throw ConsistencyError("SnrModel::cdf: value left [0,1] beyond tolerance");
    return std::clamp(raw, 0.0, 1.0);
  }

  // M_Gamma(s) for s > 0.
  double mgf(double s, const ContourConfig& cc = {}) const {
    if (!(s > 0.0)) throw DomainError("SnrModel::mgf: requires s > 0");
    const auto& f = config_.fading;
    const double pref = 2.0 * config_.r_max * f.c1 * std::pow(f.c2, -f.m) /
                        (config_.d0 * std::exp(log_gamma_mu_m_));
    const double s_pow = std::pow(s * gamma0_, 0.5 * f.alpha);
    double sum = 0.0;
    for (int k = 0; k < rule_.N; ++k) {
      const double h = foxh_evaluate(mgf_spec_, phi2_[k] / (f.c2 * s_pow), cc);
      double row = 0.0;
      for (int i = 0; i < topo_.l; ++i) row += coeff_[i] * phi1_[i][k];
      sum += rule_.weights[k] * row / std::pow(phi2_[k], f.mu) * h;
    }
    return pref * sum;
  }

  // E[Gamma^n] in closed form; n must lie in the stated validity window.
  double moment(double n) const {
    const auto& f = config_.fading;
    const double a = f.alpha, mu = f.mu, m = f.m;
    const double beta = config_.misalignment.beta;
    const double upper = 0.5 * a * m;
    const double lower = (beta >= a * mu) ? -0.5 * a * mu : -0.5 * beta;
    if (!(n > lower && n < upper))
      throw DomainError("SnrModel::moment: order outside validity window");
    const double t = 2.0 * n / a;
    const double log_ratio = log_gamma_real(t + mu) +
                             2.0 * log_gamma_real(beta + 2.0 * n) +
                             log_gamma_real(m - t) - log_gamma_mu_m_ -
                             2.0 * log_gamma_real(1.0 + beta + 2.0 * n);
    const double pref = 4.0 * config_.r_max * f.c1 * std::pow(gamma0_, n) /
                        (a * config_.d0 * std::pow(f.c2, m - t)) *
                        std::exp(log_ratio);
    double sum = 0.0;
    for (int i = 0; i < topo_.l; ++i)
      for (int k = 0; k < rule_.N; ++k)
        sum += coeff_[i] * rule_.weights[k] * phi1_[i][k] /
               std::pow(phi2_[k], t + mu);
    return pref * sum;
  }

  // Shared access for the metrics layer.
  const FoxHSpec& asep_spec() const { return asep_spec_; }
  const FoxHSpec& capacity_spec() const { return capacity_spec_; }
  double coeff(int i) const { return coeff_[i]; }
  double phi1(int i, int k) const { return phi1_[i][k]; }
  double phi2(int k) const { return phi2_[k]; }
  double log_gamma_mu_m() const { return log_gamma_mu_m_; }

  // sum_{i,k} coeff_i w_k Phi1(i,k) H[spec; Phi2(k) * arg_scale].
  double weighted_h_sum(const FoxHSpec& spec, double arg_scale,
                        const ContourConfig& cc = {}) const {
    double sum = 0.0;
    for (int k = 0; k < rule_.N; ++k) {
      // The H argument depends on the node only, not the topology term.
      const double h = foxh_evaluate(spec, phi2_[k] * arg_scale, cc);
      double row = 0.0;
      for (int i = 0; i < topo_.l; ++i) row += coeff_[i] * phi1_[i][k];
      sum += rule_.weights[k] * row * h;
    }
    return sum;
  }

 private:
  LinkConfig config_;
  TopologyParams topo_;
  QuadratureRule rule_;
  double kappa_;
  double gamma0_;
  FoxHSpec pdf_spec_, cdf_spec_, mgf_spec_, asep_spec_, capacity_spec_;
  std::vector<double> coeff_;
  std::vector<std::vector<double>> phi1_;
  std::vector<double> phi2_;
  double log_gamma_mu_m_ = 0.0;
};

}  // namespace thzlink
