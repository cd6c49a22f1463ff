#pragma once

#include <algorithm>
#include <array>
#include <cmath>
#include <complex>
#include <limits>
#include <numbers>
#include <utility>
#include <vector>

#include "thzlink/errors.hpp"
#include "thzlink/specfun.hpp"

namespace thzlink {

// One (a_j, A_j) or (b_j, B_j) pair of a Fox H-function.
struct CoeffPair {
  double a;
  double A;
};

struct ContourConfig {
  // Re(zeta) of the vertical integration line; NaN selects the line
  // automatically (magnitude-balancing point inside the admissible strip).
  double abscissa = std::numeric_limits<double>::quiet_NaN();
  double half_height = 10.0;   // integrate at least this far before testing tails
  double tail_tol = 1e-11;     // relative tail cutoff
  double max_height = 400.0;
  int panel_points = 24;       // Gauss-Legendre nodes per panel
  bool use_symmetry = true;    // halve the line via conjugate symmetry
};

// Validated order + coefficient lists of H^{m,n}_{p,q}, with the
// pole-separating strip computed at construction.
class FoxHSpec {
 public:
  static FoxHSpec make(int m, int n, int p, int q, std::vector<CoeffPair> upper,
                       std::vector<CoeffPair> lower) {
    if (m < 0 || n < 0 || p < 0 || q < 0 || n > p || m > q)
      throw InvalidSpec("foxh: order must satisfy 0 <= n <= p, 0 <= m <= q");
    if (int(upper.size()) != p || int(lower.size()) != q)
      throw InvalidSpec("foxh: coefficient list length mismatch");
    for (const auto& c : upper)
      if (!(c.A > 0.0)) throw InvalidSpec("foxh: A_j must be positive");
    for (const auto& c : lower)
      if (!(c.A > 0.0)) throw InvalidSpec("foxh: B_j must be positive");

    FoxHSpec s;
    s.m_ = m;
    s.n_ = n;
    s.p_ = p;
    s.q_ = q;
    s.upper_ = std::move(upper);
    s.lower_ = std::move(lower);
    s.left_ = -std::numeric_limits<double>::infinity();
    s.right_ = std::numeric_limits<double>::infinity();
    for (int j = 0; j < m; ++j)
      s.left_ = std::max(s.left_, -s.lower_[j].a / s.lower_[j].A);
    for (int j = 0; j < n; ++j)
      s.right_ = std::min(s.right_, (1.0 - s.upper_[j].a) / s.upper_[j].A);
    if (s.left_ >= s.right_ - 1e-12)
      throw InvalidSpec("foxh: left and right pole families admit no separating strip");
    s.coeff_scale_ = 0.0;
    for (const auto& c : s.upper_) s.coeff_scale_ += c.A;
    for (const auto& c : s.lower_) s.coeff_scale_ += c.A;
    return s;
  }

  int m() const { return m_; }
  int n() const { return n_; }
  int p() const { return p_; }
  int q() const { return q_; }
  double strip_left() const { return left_; }
  double strip_right() const { return right_; }
  // Sum of all A_j and B_j; bounds the phase speed of the integrand.
  double coeff_scale() const { return coeff_scale_; }

  // log of the Mellin-Barnes kernel: sum of log-gamma terms of the
  // numerator minus those of the denominator.
  Complex log_theta(Complex s) const {
    Complex acc(0.0, 0.0);
    for (int j = 0; j < m_; ++j)
      acc += log_gamma(Complex(lower_[j].a, 0.0) + lower_[j].A * s);
    for (int j = 0; j < n_; ++j)
      acc += log_gamma(Complex(1.0 - upper_[j].a, 0.0) - upper_[j].A * s);
    for (int j = m_; j < q_; ++j)
      acc -= log_gamma(Complex(1.0 - lower_[j].a, 0.0) - lower_[j].A * s);
    for (int j = n_; j < p_; ++j)
      acc -= log_gamma(Complex(upper_[j].a, 0.0) + upper_[j].A * s);
    return acc;
  }

 private:
  int m_ = 0, n_ = 0, p_ = 0, q_ = 0;
  std::vector<CoeffPair> upper_, lower_;
  double left_ = 0.0, right_ = 0.0;
  double coeff_scale_ = 0.0;
};

namespace detail {

// 24-point Gauss-Legendre rule on [-1, 1] (nodes >= 0 listed; symmetric).
struct Panel24 {
  static constexpr int kHalf = 12;
  static constexpr double kNode[kHalf] = {
      0.0640568928626056260850430826247450385909,
      0.1911188674736163091586398207570696318404,
      0.3150426796961633743867932913198102407864,
      0.4337935076260451384870842319133497124524,
      0.5454214713888395356583756172183723700107,
      0.6480936519369755692524957869107476266696,
      0.7401241915785543642438281030999784255232,
      0.8200019859739029219539498726697452080761,
      0.8864155270044010342131543419821967550873,
      0.9382745520027327585236490017087214496548,
      0.9747285559713094981983919930081690617411,
      0.9951872199970213601799974097007368118745};
  static constexpr double kWeight[kHalf] = {
      0.1279381953467521569740561652246953718517,
      0.1258374563468282961213753825111836887264,
      0.1216704729278033912044631534762624256070,
      0.1155056680537256013533444839067835598622,
      0.1074442701159656347825773424466062227946,
      0.0976186521041138882698806644642471544279,
      0.0861901615319532759171852029837426671850,
      0.0733464814110803057340336152531165181193,
      0.0592985849154367807463677585001085845412,
      0.0442774388174198061686027482113382288593,
      0.0285313886289336631813078159518782864491,
      0.0123412297999871995468056670700372915759};
};

}  // namespace detail

// Numerical evaluation of H(z) for real z > 0 along a vertical contour,
// exploiting theta(conj s) = conj theta(s).
inline double foxh_evaluate(const FoxHSpec& spec, double z,
                            ContourConfig cfg = {}) {
  if (!(z > 0.0)) throw DomainError("foxh_evaluate: requires z > 0");
  const double L = std::log(z);

  double lo = spec.strip_left();
  double hi = spec.strip_right();
  double sigma = cfg.abscissa;
  if (std::isnan(sigma)) {
    // Pick the line where the real-axis integrand magnitude is smallest;
    // this bounds the cancellation between the oscillatory lobes.
    const bool lo_inf = std::isinf(lo), hi_inf = std::isinf(hi);
    if (lo_inf && hi_inf) {
      lo = -30.0;
      hi = 30.0;
    } else if (hi_inf) {
      hi = lo + 80.0;
      lo += 0.05;
    } else if (lo_inf) {
      lo = hi - 80.0;
      hi -= 0.05;
    } else {
      const double w = hi - lo;
      lo += 0.01 * w;
      hi -= 0.01 * w;
    }
    auto f = [&](double x) {
      return std::real(spec.log_theta(Complex(x, 0.0))) - x * L;
    };
    // Coarse scan, then golden-section refinement.
    const int kScan = 128;
    double best = lo, fbest = f(lo);
    for (int i = 1; i <= kScan; ++i) {
      const double x = lo + (hi - lo) * i / kScan;
      const double fx = f(x);
      if (fx < fbest) {
        fbest = fx;
        best = x;
      }
    }
    const double step = (hi - lo) / kScan;
    double a = std::max(lo, best - step), b = std::min(hi, best + step);
    constexpr double kGolden = 0.6180339887498949;
    double x1 = b - kGolden * (b - a), x2 = a + kGolden * (b - a);
    double f1 = f(x1), f2 = f(x2);
    for (int it = 0; it < 60 && (b - a) > 1e-10; ++it) {
      if (f1 < f2) {
        b = x2;
        x2 = x1;
        f2 = f1;
        x1 = b - kGolden * (b - a);
        f1 = f(x1);
      } else {
        a = x1;
        x1 = x2;
        f1 = f2;
        x2 = a + kGolden * (b - a);
        f2 = f(x2);
      }
    }
    sigma = 0.5 * (a + b);
  } else {
    if (!(sigma > lo && sigma < hi))
      throw PoleOnContour("foxh_evaluate: abscissa outside the separating strip");
  }

  // Reference magnitude at t = 0 keeps the exponentials in range.
  double ref;
  try {
    ref = std::real(spec.log_theta(Complex(sigma, 0.0))) - sigma * L;
  } catch (const PoleError&) {
    throw PoleOnContour("foxh_evaluate: contour passes through a pole");
  }

  const double phase_scale = spec.coeff_scale();
  auto integrand = [&](double t) -> double {
    const Complex s(sigma, t);
    const Complex v = spec.log_theta(s) - s * L - ref;
    double g = std::real(std::exp(v));
    if (!cfg.use_symmetry) {
      const Complex sc(sigma, -t);
      g = 0.5 * (g + std::real(std::exp(spec.log_theta(sc) - sc * L - ref)));
    }
    return g;
  };

  double sum = 0.0, abs_sum = 0.0;
  double t0 = 0.0;
  int quiet_panels = 0;
  while (true) {
    // Panel width: keep at most ~2 oscillation periods per 24-node panel.
    const double omega =
        std::abs(L) + phase_scale * std::log(2.0 + t0) + 2.0;
    const double h = std::clamp(4.0 * std::numbers::pi / omega, 0.02, 2.0);
    const double t1 = t0 + h;
    const double c = 0.5 * (t0 + t1), r = 0.5 * h;
    double psum = 0.0, pabs = 0.0;
    for (int i = 0; i < detail::Panel24::kHalf; ++i) {
      const double x = detail::Panel24::kNode[i];
      const double w = detail::Panel24::kWeight[i];
      const double ga = integrand(c - r * x);
      const double gb = integrand(c + r * x);
      psum += w * (ga + gb);
      pabs += w * (std::abs(ga) + std::abs(gb));
    }
    psum *= r;
    pabs *= r;
    sum += psum;
    abs_sum += pabs;
    t0 = t1;
    if (t0 >= cfg.half_height) {
      if (pabs <= cfg.tail_tol * std::max(abs_sum, 1e-300))
        ++quiet_panels;
      else
        quiet_panels = 0;
      if (quiet_panels >= 2) break;
      if (t0 > cfg.max_height)
        throw ConvergenceError(
            "foxh_evaluate: contour tail did not fall below tail_tol before "
            "max_height");
    }
  }

  // Symmetric mode integrates Re over [0, T]; the full-line variant averages
  // g(t) and g(-t) per node, which lands on the same normalization.
  return std::exp(ref) / std::numbers::pi * sum;
}

}  // namespace thzlink
