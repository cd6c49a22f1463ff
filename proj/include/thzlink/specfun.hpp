#pragma once

#include <cmath>
#include <complex>
#include <numbers>

#include "thzlink/errors.hpp"

namespace thzlink {

using Complex = std::complex<double>;

namespace detail {

// Lanczos coefficients, g = 7, n = 9 (Godfrey / Numerical Recipes set).
// Relative error of exp(log_gamma) is below 1e-13 on the tested range.
inline constexpr double kLanczosG = 7.0;
inline constexpr double kLanczosCoeff[9] = {
    0.99999999999980993,     676.5203681218851,     -1259.1392167224028,
    771.32342877765313,      -176.61502916214059,   12.507343278686905,
    -0.13857109526572012,    9.9843695780195716e-6, 1.5056327351493116e-7};

// log(sin(pi z)) up to a multiple of 2*pi*i, safe for large |Im z|.
inline Complex log_sin_pi(Complex z) {
  const Complex ipi(0.0, std::numbers::pi);
  if (z.imag() >= 0.0) {
    // sin(pi z) = exp(-i pi z) (exp(2 i pi z) - 1) / (2i); the first factor
    // carries the growth, the parenthesis stays bounded.
    return -ipi * z + std::log(1.0 - std::exp(2.0 * ipi * z)) +
           std::log(Complex(0.0, 0.5));
  }
  return ipi * z + std::log(1.0 - std::exp(-2.0 * ipi * z)) -
         std::log(Complex(0.0, 2.0));
}

inline Complex lanczos_log_gamma_half_plane(Complex z) {
  // Requires Re z >= 0.5.
  Complex acc(kLanczosCoeff[0], 0.0);
  for (int i = 1; i < 9; ++i) acc += kLanczosCoeff[i] / (z + double(i - 1));
  const Complex t = z + (kLanczosG - 0.5);
  return 0.5 * std::log(2.0 * std::numbers::pi) + (z - 0.5) * std::log(t) - t +
         std::log(acc);
}

}  // namespace detail

// Principal-branch log Gamma for complex z (up to 2*pi*i on the reflected
// half-plane, which is immaterial under exponentiation).
inline Complex log_gamma(Complex z) {
  constexpr double kPoleTol = 1e-12;
  if (std::abs(z.imag()) < kPoleTol && z.real() <= kPoleTol) {
    const double nearest = std::round(z.real());
    if (nearest <= 0.0 && std::abs(z.real() - nearest) < kPoleTol)
      throw PoleError("log_gamma: argument at a non-positive integer pole");
  }
  if (z.real() >= 0.5) return detail::lanczos_log_gamma_half_plane(z);
  // Reflection: Gamma(z) Gamma(1-z) = pi / sin(pi z).
  return std::log(std::numbers::pi) - detail::log_sin_pi(z) -
         detail::lanczos_log_gamma_half_plane(1.0 - z);
}

inline double log_gamma_real(double x) {
  if (x <= 0.0) {
    if (x == std::round(x)) throw PoleError("log_gamma_real: pole");
    return std::real(log_gamma(Complex(x, 0.0)));
  }
  return std::lgamma(x);
}

inline double digamma(double x) {
  if (!(x > 0.0)) throw DomainError("digamma: requires x > 0");
  double acc = 0.0;
  while (x < 10.0) {
    acc -= 1.0 / x;
    x += 1.0;
  }
  const double r = 1.0 / x, r2 = r * r;
  // Asymptotic series, |error| < 1e-13 once x >= 10.
  double psi = std::log(x) - 0.5 * r -
               r2 * (1.0 / 12.0 -
                     r2 * (1.0 / 120.0 -
                           r2 * (1.0 / 252.0 -
                                 r2 * (1.0 / 240.0 - r2 * (1.0 / 132.0)))));
  return psi + acc;
}

inline double beta_fn(double a, double b) {
  if (!(a > 0.0) || !(b > 0.0)) throw DomainError("beta_fn: requires a, b > 0");
  return std::exp(std::lgamma(a) + std::lgamma(b) - std::lgamma(a + b));
}

}  // namespace thzlink
