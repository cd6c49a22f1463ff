#pragma once

#include <array>
#include <cmath>
#include <numbers>
#include <vector>

#include "thzlink/channel.hpp"
#include "thzlink/errors.hpp"

namespace thzlink {

// Polynomial RWP distance-PDF coefficients for one topology dimension.
struct TopologyParams {
  int l = 0;
  std::vector<double> B;
  std::vector<double> beta_exp;
};

inline TopologyParams topology_preset(Topology t) {
  switch (t) {
    case Topology::D1:
      return {2, {6.0, -6.0}, {1.0, 2.0}};
    case Topology::D2:
      return {3, {324.0 / 73.0, -420.0 / 73.0, 96.0 / 73.0}, {1.0, 3.0, 5.0}};
    case Topology::D3:
    default:
      return {3, {735.0 / 72.0, -1190.0 / 72.0, 455.0 / 72.0}, {2.0, 4.0, 6.0}};
  }
}

// f_D(d) = sum_i B_i (d0/R_M)^(beta_i+1) (d-1)^beta_i on (1, 1 + R_M/d0).
inline double rwp_pdf(double d, const TopologyParams& topo, double d0,
                      double r_max) {
  if (!(d > 1.0) || !(d < 1.0 + r_max / d0))
    throw DomainError("rwp_pdf: d outside (1, 1 + R_M/d0)");
  double f = 0.0;
  for (int i = 0; i < topo.l; ++i)
    f += topo.B[i] * std::pow(d0 / r_max, topo.beta_exp[i] + 1.0) *
         std::pow(d - 1.0, topo.beta_exp[i]);
  return f;
}

// CDF of the unit variable u = (d-1) d0 / R_M.
inline double rwp_unit_cdf(double u, const TopologyParams& topo) {
  double f = 0.0;
  for (int i = 0; i < topo.l; ++i)
    f += topo.B[i] * std::pow(u, topo.beta_exp[i] + 1.0) /
         (topo.beta_exp[i] + 1.0);
  return f;
}

struct QuadratureRule {
  int N = 0;
  std::vector<double> nodes;    // in (-1, 1), descending
  std::vector<double> weights;  // positive, sum to 2
};

// Newton iteration on P_N with Chebyshev initial guesses; tol 1e-14.
inline QuadratureRule gauss_legendre(int N) {
  if (N < 1 || N > 200)
    throw DomainError("gauss_legendre: N must be in [1, 200]");
  QuadratureRule rule;
  rule.N = N;
  rule.nodes.resize(N);
  rule.weights.resize(N);
  for (int k = 0; k < N; ++k) {
    double x = std::cos(std::numbers::pi * (k + 0.75) / (N + 0.5));
    double dp = 0.0;
    for (int it = 0; it < 100; ++it) {
      // Legendre recurrence for P_N(x) and P'_N(x).
      double p0 = 1.0, p1 = x;
      for (int j = 2; j <= N; ++j) {
        const double p2 = ((2.0 * j - 1.0) * x * p1 - (j - 1.0) * p0) / j;
        p0 = p1;
        p1 = p2;
      }
      dp = N * (x * p1 - p0) / (x * x - 1.0);
      const double dx = p1 / dp;
      x -= dx;
      if (std::abs(dx) < 1e-14) break;
    }
    rule.nodes[k] = x;
    rule.weights[k] = 2.0 / ((1.0 - x * x) * dp * dp);
  }
  return rule;
}

using KernelVector = std::array<double, 3>;

// Phi(x_k; a) = [a1 (x_k+1)]^a2 exp{a3 [a1 (x_k+1) + 1]}.
inline double phi_kernel(double x_k, const KernelVector& a) {
  const double base = a[0] * (x_k + 1.0);
  return std::pow(base, a[1]) * std::exp(a[2] * (base + 1.0));
}

// v1(i) and v2 of the SNR statistics kernel for topology term i (0-based).
inline std::pair<KernelVector, KernelVector> kernel_vectors(
    int i, const LinkConfig& cfg, const TopologyParams& topo, double kappa) {
  if (i < 0 || i >= topo.l)
    throw IndexError("kernel_vectors: topology term index out of range");
  const double a = cfg.fading.alpha;
  const double mu = cfg.fading.mu;
  const double half_range = cfg.r_max / (2.0 * cfg.d0);
  KernelVector v1 = {half_range,
                     topo.beta_exp[i] + 0.5 * a * mu * cfg.delta,
                     0.5 * a * kappa * mu * cfg.d0};
  KernelVector v2 = {half_range, 0.5 * a * cfg.delta, 0.5 * a * kappa * cfg.d0};
  return {v1, v2};
}

}  // namespace thzlink
