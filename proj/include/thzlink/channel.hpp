#pragma once

#include <algorithm>
#include <cmath>
#include <fstream>
#include <numbers>
#include <sstream>
#include <string>
#include <vector>

#include "thzlink/errors.hpp"
#include "thzlink/specfun.hpp"

namespace thzlink {

inline constexpr double kSpeedOfLight = 299792458.0;  // m/s

// alpha-F fading parameters with the scale and the two closed-form constants
// derived from them.
struct FadingParams {
  double alpha = 2.0;
  double mu = 1.0;
  double m = 2.0;
  double lambda_scale = 1.0;
  double c1 = 0.0;
  double c2 = 0.0;
};

struct MisalignmentParams {
  double beta = 4.0;  // w_B^2 / sigma_theta^2; must exceed 2
};

enum class Topology { D1, D2, D3 };

struct LinkConfig {
  double frequency_hz = 300e9;
  double d0 = 1.0;          // reference distance, m
  double delta = 2.0;       // path-loss exponent, in [2, 6]
  double r_max = 50.0;      // maximum separation, m
  Topology topology = Topology::D1;
  double gamma_bar = 1.0;   // P_t G_0 / sigma_w^2, linear
  MisalignmentParams misalignment;
  FadingParams fading;
};

// Ordered (frequency, kappa0 in dB/km) samples.
class AbsorptionTable {
 public:
  void add(double frequency_hz, double kappa0_db_per_km) {
    if (!samples_.empty() && frequency_hz <= samples_.back().first)
      throw InvalidSpec("AbsorptionTable: frequencies must be strictly increasing");
    if (kappa0_db_per_km < 0.0)
      throw InvalidSpec("AbsorptionTable: kappa0 must be non-negative");
    samples_.emplace_back(frequency_hz, kappa0_db_per_km);
  }

  // Two-column CSV (frequency_GHz, kappa0_dB_per_km), header row required.
  static AbsorptionTable load_csv(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw RangeError("AbsorptionTable: cannot open " + path);
    AbsorptionTable table;
    std::string line;
    if (!std::getline(in, line))
      throw InvalidSpec("AbsorptionTable: empty file " + path);
    while (std::getline(in, line)) {
      if (line.empty()) continue;
      std::stringstream ss(line);
      std::string f_str, k_str;
      if (!std::getline(ss, f_str, ',') || !std::getline(ss, k_str, ','))
        throw InvalidSpec("AbsorptionTable: malformed row in " + path);
      table.add(std::stod(f_str) * 1e9, std::stod(k_str));
    }
    if (table.samples_.empty())
      throw InvalidSpec("AbsorptionTable: no samples in " + path);
    return table;
  }

  double kappa0_db_per_km(double f_hz) const {
    if (samples_.empty() || f_hz < samples_.front().first ||
        f_hz > samples_.back().first)
      throw RangeError("AbsorptionTable: frequency outside table range");
    auto it = std::lower_bound(
        samples_.begin(), samples_.end(), f_hz,
        [](const auto& s, double f) { return s.first < f; });
    if (it->first == f_hz) return it->second;
    auto prev = std::prev(it);
    const double w = (f_hz - prev->first) / (it->first - prev->first);
    return prev->second + w * (it->second - prev->second);
  }

  const std::vector<std::pair<double, double>>& samples() const {
    return samples_;
  }

 private:
  std::vector<std::pair<double, double>> samples_;
};

// kappa(f) = ln(10) 1e-5 kappa0(f), per-meter.
inline double kappa_of_f(const AbsorptionTable& table, double f_hz) {
  return std::numbers::ln10 * 1e-5 * table.kappa0_db_per_km(f_hz);
}

// Raw constants of the SNR kernel for an explicit lambda; E[H_f^2] is fixed
// to (beta+2)^2/beta^2 throughout.
inline double c2_raw(double alpha, double mu, double m, double beta,
                     double lambda_scale) {
  const double e_pow = std::pow((beta + 2.0) / beta, alpha);
  return (m - 1.0) * e_pow / (std::pow(lambda_scale, alpha / 2.0) * mu);
}

inline double c1_raw(double alpha, double mu, double m, double beta,
                     double lambda_scale) {
  return beta * beta * alpha / (8.0 * beta_fn(mu, m)) *
         std::pow(c2_raw(alpha, mu, m, beta, lambda_scale), m);
}

// Fixes lambda so that E[H_f^2] = (beta+2)^2/beta^2, making the joint
// pointing-error/fading power average out to one.
inline FadingParams derive_constants(double alpha, double mu, double m,
                                     double beta) {
  if (!(alpha > 0.0) || !(mu > 0.0))
    throw DomainError("derive_constants: alpha and mu must be positive");
  if (!(m > std::max(2.0 / alpha, 1.0)))
    throw DomainError("derive_constants: requires m > max(2/alpha, 1)");
  if (!(beta > 2.0)) throw DomainError("derive_constants: requires beta > 2");

  FadingParams fp;
  fp.alpha = alpha;
  fp.mu = mu;
  fp.m = m;
  const double bratio = beta_fn(mu + 2.0 / alpha, m - 2.0 / alpha) / beta_fn(mu, m);
  fp.lambda_scale = std::pow((m - 1.0) / mu, 2.0 / alpha) * bratio;
  // (m-1) cancels between lambda^(alpha/2) and the numerator, so the m->1
  // limit stays finite.
  fp.c2 = std::pow((beta + 2.0) / beta, alpha) *
          std::pow(1.0 / bratio, alpha / 2.0);
  fp.c1 = beta * beta * alpha / (8.0 * beta_fn(mu, m)) * std::pow(fp.c2, m);
  return fp;
}

// f_Z(z) = -(beta^2/4) ln(z) z^(beta/2 - 1) on (0, 1).
inline double pointing_pdf(double z, double beta) {
  if (!(z > 0.0) || !(z < 1.0))
    throw DomainError("pointing_pdf: requires 0 < z < 1");
  return -0.25 * beta * beta * std::log(z) * std::pow(z, 0.5 * beta - 1.0);
}

inline double pointing_mean(double beta) {
  return beta * beta / ((beta + 2.0) * (beta + 2.0));
}

// alpha-F power PDF with the scale fixed by the normalization above; the
// binomial-term constant coincides with c2.
inline double alphaf_power_pdf(double x, const FadingParams& f) {
  if (!(x > 0.0)) throw DomainError("alphaf_power_pdf: requires x > 0");
  const double c = f.c2;
  const double xa = std::pow(x, 0.5 * f.alpha);
  return 0.5 * f.alpha / beta_fn(f.mu, f.m) * std::pow(c, f.m) *
         std::pow(x, 0.5 * f.alpha * f.mu - 1.0) *
         std::pow(xa + c, -(f.m + f.mu));
}

// gamma_0 = gamma_bar (lambda_0 / 4 pi d_0)^2 exp(kappa(f) d_0).
inline double gamma0_of(const LinkConfig& cfg, const AbsorptionTable& table) {
  const double kappa = kappa_of_f(table, cfg.frequency_hz);
  const double wavelength = kSpeedOfLight / cfg.frequency_hz;
  const double geo = wavelength / (4.0 * std::numbers::pi * cfg.d0);
  return cfg.gamma_bar * geo * geo * std::exp(kappa * cfg.d0);
}

}  // namespace thzlink
