#pragma once

#include <cmath>
#include <cstdint>
#include <thread>
#include <vector>

#include "thzlink/channel.hpp"
#include "thzlink/errors.hpp"
#include "thzlink/metrics.hpp"
#include "thzlink/mobility.hpp"
#include "thzlink/snrstats.hpp"

namespace thzlink {

struct SimConfig {
  std::uint64_t samples = 1000000;
  std::uint64_t seed = 1;
  int workers = 0;  // 0: hardware concurrency
};

// Counter-based stream: each sample index owns an independent splitmix64
// sequence, so batches are bit-identical for any worker count.
class CounterRng {
 public:
  CounterRng(std::uint64_t seed, std::uint64_t counter) {
    state_ = mix(seed + 0x9E3779B97F4A7C15ULL) ^
             mix(counter * 0xBF58476D1CE4E5B9ULL + 0x94D049BB133111EBULL);
  }

  std::uint64_t next() {
    state_ += 0x9E3779B97F4A7C15ULL;
    return mix(state_);
  }

  // Uniform in (0, 1), never exactly 0 or 1.
  double uniform() {
    return (double(next() >> 11) + 0.5) * 0x1.0p-53;
  }

  double normal() {
    // Box-Muller, cosine branch.
    const double u1 = uniform(), u2 = uniform();
    return std::sqrt(-2.0 * std::log(u1)) *
           std::cos(2.0 * std::numbers::pi * u2);
  }

  // Marsaglia-Tsang; the shape < 1 case boosts through shape + 1.
  double gamma_variate(double shape) {
    if (shape < 1.0)
      return gamma_variate(shape + 1.0) * std::pow(uniform(), 1.0 / shape);
    const double d = shape - 1.0 / 3.0;
    const double c = 1.0 / std::sqrt(9.0 * d);
    while (true) {
      double x, v;
      do {
        x = normal();
        v = 1.0 + c * x;
      } while (v <= 0.0);
      v = v * v * v;
      const double u = uniform();
      if (u < 1.0 - 0.0331 * x * x * x * x) return d * v;
      if (std::log(u) < 0.5 * x * x + d * (1.0 - v + std::log(v))) return d * v;
    }
  }

 private:
  static std::uint64_t mix(std::uint64_t z) {
    z ^= z >> 30;
    z *= 0xBF58476D1CE4E5B9ULL;
    z ^= z >> 27;
    z *= 0x94D049BB133111EBULL;
    z ^= z >> 31;
    return z;
  }

  std::uint64_t state_;
};

// Z = (U1 U2)^(2/beta), distributed as the pointing-error power.
inline double sample_pointing(double beta, CounterRng& rng) {
  return std::exp(2.0 / beta *
                  (std::log(rng.uniform()) + std::log(rng.uniform())));
}

// X = (c2 G_mu / G_m)^(2/alpha); X^(alpha/2)/c2 is Beta-prime(mu, m).
inline double sample_fading(const FadingParams& f, CounterRng& rng) {
  const double g_mu = rng.gamma_variate(f.mu);
  const double g_m = rng.gamma_variate(f.m);
  return std::pow(f.c2 * g_mu / g_m, 2.0 / f.alpha);
}

// Inverse-CDF sampling of the RWP distance by bisection on the polynomial
// CDF in the unit variable.
inline double sample_distance(const TopologyParams& topo, double d0,
                              double r_max, CounterRng& rng) {
  const double target = rng.uniform();
  double lo = 0.0, hi = 1.0;
  while (hi - lo > 1e-12) {
    const double mid = 0.5 * (lo + hi);
    (rwp_unit_cdf(mid, topo) < target ? lo : hi) = mid;
  }
  return 1.0 + 0.5 * (lo + hi) * r_max / d0;
}

struct SampleBatch {
  std::vector<double> snr;
};

inline SampleBatch simulate(const SnrModel& model, const SimConfig& sim) {
  if (sim.samples < 1) throw DomainError("simulate: requires samples >= 1");
  const auto& cfg = model.config();
  const auto& topo = model.topology();
  const double gamma0 = model.gamma0();
  const double kappa = model.kappa();
  const double beta = cfg.misalignment.beta;

  SampleBatch batch;
  batch.snr.resize(sim.samples);
  int workers = sim.workers > 0
                    ? sim.workers
                    : int(std::max(1u, std::thread::hardware_concurrency()));
  workers = int(std::min<std::uint64_t>(workers, sim.samples));

  auto run = [&](std::uint64_t begin, std::uint64_t end) {
    for (std::uint64_t i = begin; i < end; ++i) {
      CounterRng rng(sim.seed, i);
      const double d = sample_distance(topo, cfg.d0, cfg.r_max, rng);
      const double z = sample_pointing(beta, rng);
      const double x = sample_fading(cfg.fading, rng);
      batch.snr[i] = gamma0 * std::pow(d - 1.0, -cfg.delta) *
                     std::exp(-kappa * cfg.d0 * d) * z * x;
    }
  };

  std::vector<std::thread> pool;
  const std::uint64_t chunk = (sim.samples + workers - 1) / workers;
  for (int w = 0; w < workers; ++w) {
    const std::uint64_t begin = w * chunk;
    const std::uint64_t end = std::min(sim.samples, begin + chunk);
    if (begin >= end) break;
    pool.emplace_back(run, begin, end);
  }
  for (auto& t : pool) t.join();
  return batch;
}

struct McEstimates {
  double op = 0.0;
  double asep = 0.0;
  double capacity = 0.0;
  double op_stderr = 0.0;
  double asep_stderr = 0.0;
  double capacity_stderr = 0.0;
};

// Per-sample estimators: indicator below threshold, (a/2) erfc(sqrt(b g / 2))
// (the conditional Gaussian-Q error kernel), and log2(1 + g).
inline McEstimates estimate_metrics(const SampleBatch& batch, double gamma_th,
                                    const ModulationCoeffs& mc = {}) {
  if (batch.snr.empty()) throw EmptyBatch("estimate_metrics: empty batch");
  const double n = double(batch.snr.size());
  double op = 0.0, sep = 0.0, sep2 = 0.0, cap = 0.0, cap2 = 0.0;
  for (double g : batch.snr) {
    if (g < gamma_th) op += 1.0;
    const double e = 0.5 * mc.a * std::erfc(std::sqrt(0.5 * mc.b * g));
    sep += e;
    sep2 += e * e;
    const double c = std::log2(1.0 + g);
    cap += c;
    cap2 += c * c;
  }
  McEstimates est;
  est.op = op / n;
  est.asep = sep / n;
  est.capacity = cap / n;
  est.op_stderr = std::sqrt(std::max(0.0, est.op * (1.0 - est.op) / n));
  est.asep_stderr =
      std::sqrt(std::max(0.0, (sep2 / n - est.asep * est.asep) / n));
  est.capacity_stderr =
      std::sqrt(std::max(0.0, (cap2 / n - est.capacity * est.capacity) / n));
  return est;
}

}  // namespace thzlink
