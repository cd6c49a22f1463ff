// End-to-end acceptance harness: one PASS/FAIL line per criterion, non-zero
// exit if any fail. Tolerances are pinned here, independent of the unit
// suites.

#include <chrono>
#include <cmath>
#include <cstdio>
#include <string>
#include <vector>

#include "test_util.hpp"
#include "thzlink/mcsim.hpp"
#include "thzlink/metrics.hpp"

using namespace thzlink;

namespace {

int g_failures = 0;

void report(int criterion, bool pass, const std::string& detail) {
  std::printf("%s criterion %d: %s\n", pass ? "PASS" : "FAIL", criterion,
              detail.c_str());
  if (!pass) ++g_failures;
}

AbsorptionTable flat_table(double kappa0 = 5.0) {
  AbsorptionTable t;
  t.add(100e9, kappa0);
  t.add(500e9, kappa0);
  return t;
}

LinkConfig make_config(double alpha, double mu, double m, double beta,
                       double delta, Topology topo, double r_max,
                       double gamma_bar_db) {
  LinkConfig cfg;
  cfg.frequency_hz = 300e9;
  cfg.d0 = 1.0;
  cfg.delta = delta;
  cfg.r_max = r_max;
  cfg.topology = topo;
  cfg.gamma_bar = std::pow(10.0, gamma_bar_db / 10.0);
  cfg.misalignment.beta = beta;
  cfg.fading = derive_constants(alpha, mu, m, beta);
  return cfg;
}

// Narrow-corridor 1-D outage reference scenario.
LinkConfig outage_config(double gamma_bar_db, double delta = 2.0) {
  return make_config(3.0, 3.0, 1.5, 3.0, delta, Topology::D1, 50.0,
                     gamma_bar_db);
}

// Planar 2-D error-rate reference scenario.
LinkConfig error_config(double gamma_bar_db, double beta = 10.0) {
  return make_config(3.0, 2.5, 1.5, beta, 2.3, Topology::D2, 50.0,
                     gamma_bar_db);
}

// Volumetric 3-D capacity reference scenario.
LinkConfig capacity_config(double gamma_bar_db, double r_max = 10.0) {
  return make_config(2.5, 3.0, 1.01, 4.0, 2.5, Topology::D3, r_max,
                     gamma_bar_db);
}

bool within_factor(double value, double target, double factor) {
  return value > target / factor && value < target * factor;
}

void criterion_1() {
  const auto table = flat_table();
  const auto t0 = std::chrono::steady_clock::now();
  SnrModel m2(outage_config(150.0, 2.0), table);
  const double op2 = outage(m2, 1.0);
  const double secs =
      std::chrono::duration<double>(std::chrono::steady_clock::now() - t0)
          .count();
  SnrModel m3(outage_config(150.0, 3.0), table);
  const double op3 = outage(m3, 1.0);
  char buf[256];
  std::snprintf(buf, sizeof(buf),
                "1-D outage anchors: OP(delta=2)=%.3e (target 2e-5 x2), "
                "OP(delta=3)=%.3e (target 2e-3 x2), %.2fs/point",
                op2, op3, secs);
  report(1,
         within_factor(op2, 2e-5, 2.0) && within_factor(op3, 2e-3, 2.0) &&
             secs <= 5.0,
         buf);
}

void criterion_2() {
  const auto table = flat_table();
  SnrModel strong(error_config(140.0, 10.0), table);
  const double p_strong = asep(strong);
  SnrModel weak(error_config(140.0, 2.0 + 1e-3), table);
  const double p_weak = asep(weak);
  char buf[256];
  std::snprintf(buf, sizeof(buf),
                "2-D BPSK anchors: ASEP(beta=10)=%.3e (target 1e-6 x2), "
                "ASEP(beta=2.001)=%.3e (target 3e-3 x2)",
                p_strong, p_weak);
  report(2,
         within_factor(p_strong, 1e-6, 2.0) &&
             within_factor(p_weak, 3e-3, 2.0),
         buf);
}

void criterion_3() {
  const auto table = flat_table();
  SnrModel near(capacity_config(120.0, 10.0), table);
  const double c_near = capacity(near);
  SnrModel far(capacity_config(120.0, 50.0), table);
  const double c_far = capacity(far);
  char buf[256];
  std::snprintf(buf, sizeof(buf),
                "3-D capacity anchors: C(R_M=10)=%.3f (4.8 +-15%%), "
                "C(R_M=50)=%.3f (0.9 +-15%%)",
                c_near, c_far);
  report(3,
         std::abs(c_near / 4.8 - 1.0) <= 0.15 &&
             std::abs(c_far / 0.9 - 1.0) <= 0.15,
         buf);
}

void criterion_4() {
  const auto table = flat_table();
  bool ok = true;
  std::string detail = "analytic vs MC (1e7 samples):";
  char buf[160];
  struct Case {
    const char* name;
    LinkConfig cfg;
  };
  const std::vector<Case> cases = {{"1-D", outage_config(140.0)},
                                   {"2-D", error_config(140.0)}};
  for (const auto& c : cases) {
    SnrModel model(c.cfg, table);
    SimConfig sim;
    sim.samples = 10000000;
    sim.seed = 42;
    const auto t0 = std::chrono::steady_clock::now();
    const auto batch = simulate(model, sim);
    const auto est = estimate_metrics(batch, 1.0);
    const double secs =
        std::chrono::duration<double>(std::chrono::steady_clock::now() - t0)
            .count();
    const double pairs[3][2] = {{outage(model, 1.0), est.op},
                                {asep(model), est.asep},
                                {capacity(model), est.capacity}};
    const char* names[3] = {"op", "asep", "cap"};
    for (int i = 0; i < 3; ++i) {
      const double analytic = pairs[i][0], mc = pairs[i][1];
      if (analytic < 1e-5) continue;
      const double err = std::abs(std::log10(analytic / mc));
      if (err > 0.1) ok = false;
      std::snprintf(buf, sizeof(buf), " %s %s |log10|=%.3f", c.name, names[i],
                    err);
      detail += buf;
    }
    if (secs > 60.0) ok = false;
    std::snprintf(buf, sizeof(buf), " (%s sim %.1fs)", c.name, secs);
    detail += buf;
  }
  report(4, ok, detail);
}

void criterion_5() {
  const auto table = flat_table();
  SnrModel model(outage_config(150.0), table);

  const double mass = testutil::adaptive_simpson(
      [&](double lg) {
        const double g = std::exp(lg);
        return g * model.pdf(g);
      },
      std::log(model.gamma0() * 1e-11), std::log(model.gamma0() * 1e8), 1e-8);

  bool deriv_ok = true;
  for (double db : {60.0, 90.0}) {
    const double g = std::pow(10.0, db / 10.0);
    const double h = 1e-4 * g;
    const double deriv = (model.cdf(g + h) - model.cdf(g - h)) / (2.0 * h);
    if (std::abs(deriv / model.pdf(g) - 1.0) > 1e-3) deriv_ok = false;
  }

  const double mgf0 = model.mgf(1e-30);
  const double mom0 = model.moment(0.0);
  char buf[256];
  std::snprintf(buf, sizeof(buf),
                "self-consistency: integral(pdf)=%.6f, dF/dg ok=%d, "
                "MGF(0+)=%.7f, E[G^0]=%.8f",
                mass, int(deriv_ok), mgf0, mom0);
  report(5,
         std::abs(mass - 1.0) <= 1e-4 && deriv_ok &&
             std::abs(mgf0 - 1.0) <= 1e-5 && std::abs(mom0 - 1.0) <= 1e-6,
         buf);
}

void criterion_6() {
  bool ok = true;
  double worst_exp = 0.0, worst_binom = 0.0, worst_pole = 0.0;

  const auto exp_spec = FoxHSpec::make(1, 0, 0, 1, {}, {{0.0, 1.0}});
  for (double z : {0.01, 0.1, 1.0, 5.0, 20.0}) {
    const double rel =
        std::abs(foxh_evaluate(exp_spec, z) / std::exp(-z) - 1.0);
    worst_exp = std::max(worst_exp, rel);
  }
  if (worst_exp > 1e-8) ok = false;

  for (double a : {0.5, 1.0, 2.5}) {
    const auto spec =
        FoxHSpec::make(1, 1, 1, 1, {{1.0 - a, 1.0}}, {{0.0, 1.0}});
    for (double z : {0.1, 1.0, 10.0}) {
      const double expect =
          std::exp(log_gamma_real(a)) * std::pow(1.0 + z, -a);
      worst_binom = std::max(
          worst_binom, std::abs(foxh_evaluate(spec, z) / expect - 1.0));
    }
  }
  if (worst_binom > 1e-8) ok = false;

  const double alpha = 3.0, mu = 3.0, m = 1.5, beta = 3.0;
  const double bam = beta - alpha * mu;
  const auto pole_spec = FoxHSpec::make(
      3, 1, 3, 3,
      {{1.0 - mu - m, 1.0}, {1.0 + bam, alpha}, {1.0 + bam, alpha}},
      {{0.0, 1.0}, {bam, alpha}, {bam, alpha}});
  for (double u : {1e-3, 0.1, 1.0, 10.0}) {
    auto integrand = [&](double y) {
      return y * std::exp(-0.5 * y * bam) *
             std::pow(u * std::exp(0.5 * alpha * y) + 1.0, -(m + mu));
    };
    double cutoff = 10.0;
    while (integrand(cutoff) > 1e-18 * integrand(0.5) && cutoff < 2000.0)
      cutoff *= 1.5;
    const double oracle =
        std::exp(log_gamma_real(mu + m)) / 4.0 *
        testutil::adaptive_simpson(integrand, 1e-12, cutoff, 1e-14);
    worst_pole = std::max(
        worst_pole, std::abs(foxh_evaluate(pole_spec, u) / oracle - 1.0));
  }
  if (worst_pole > 1e-4) ok = false;

  char buf[256];
  std::snprintf(buf, sizeof(buf),
                "contour-integral identities: exp rel=%.1e (<=1e-8), binomial "
                "rel=%.1e (<=1e-8), repeated-pole rel=%.1e (<=1e-4)",
                worst_exp, worst_binom, worst_pole);
  report(6, ok, buf);
}

void criterion_7() {
  const auto table = flat_table();
  bool ok = true;
  std::string detail = "asymptotics:";
  char buf[160];

  // Outage, log-corrected regime; top 10 dB of the 1-D sweep (ends 170 dB).
  for (double db : {160.0, 170.0}) {
    SnrModel model(outage_config(db), table);
    const auto res = outage_asymptotic(model, 1.0);
    const double r = *res.asymptotic / res.exact;
    if (r < 0.9 || r > 1.1) ok = false;
    std::snprintf(buf, sizeof(buf), " OP@%g=%.3f", db, r);
    detail += buf;
  }
  // ASEP both regimes at the top of the 2-D sweeps.
  {
    SnrModel model(error_config(170.0, 10.0), table);
    const auto res = asep_asymptotic(model);
    const double r = *res.asymptotic / res.exact;
    if (r < 0.9 || r > 1.1) ok = false;
    std::snprintf(buf, sizeof(buf), " ASEP(b=10)@170=%.3f", r);
    detail += buf;
  }
  for (double db : {170.0, 180.0}) {
    SnrModel model(error_config(db, 2.0 + 1e-3), table);
    const auto res = asep_asymptotic(model);
    const double r = *res.asymptotic / res.exact;
    if (r < 0.9 || r > 1.1) ok = false;
    std::snprintf(buf, sizeof(buf), " ASEP(b=2.001)@%g=%.3f", db, r);
    detail += buf;
  }
  // Capacity difference at the top of the 3-D sweep.
  {
    SnrModel model(capacity_config(160.0), table);
    const double diff = std::abs(capacity(model) - capacity_asymptotic(model));
    if (diff > 0.05) ok = false;
    std::snprintf(buf, sizeof(buf), " C diff@160=%.4f", diff);
    detail += buf;
  }
  // Diversity slope in the simple-pole regime.
  {
    const double alpha = 2.0, mu = 1.2;
    SnrModel m1(make_config(alpha, mu, 2.5, 6.0, 2.0, Topology::D1, 50.0,
                            150.0),
                table);
    SnrModel m2(make_config(alpha, mu, 2.5, 6.0, 2.0, Topology::D1, 50.0,
                            160.0),
                table);
    const double slope =
        (std::log10(outage(m2, 1.0)) - std::log10(outage(m1, 1.0)));
    const double rel = std::abs(slope / (-0.5 * alpha * mu) - 1.0);
    if (rel > 0.05) ok = false;
    std::snprintf(buf, sizeof(buf), " slope=%.4f (target %.2f +-5%%)", slope,
                  -0.5 * alpha * mu);
    detail += buf;
  }
  report(7, ok, detail);
}

void criterion_8() {
  constexpr std::size_t kN = 200000;
  bool ok = true;
  std::string detail = "sampler goodness-of-fit (1%):";
  char buf[128];

  {
    const double beta = 3.0;
    std::vector<double> s(kN);
    for (std::size_t i = 0; i < kN; ++i) {
      CounterRng rng(5, i);
      s[i] = sample_pointing(beta, rng);
    }
    const double d = testutil::ks_statistic(s, [&](double z) {
      return std::pow(z, 0.5 * beta) * (1.0 - 0.5 * beta * std::log(z));
    });
    if (d >= testutil::ks_critical_1pct(kN)) ok = false;
    std::snprintf(buf, sizeof(buf), " pointing KS=%.4f", d);
    detail += buf;
  }
  {
    const auto f = derive_constants(2.5, 3.0, 1.5, 4.0);
    std::vector<double> s(kN);
    for (std::size_t i = 0; i < kN; ++i) {
      CounterRng rng(17, i);
      s[i] = sample_fading(f, rng);
    }
    double prev_x = 1e-12, acc = 0.0;
    const double d = testutil::ks_statistic(
        s, [&, prev_x, acc](double x) mutable {
          acc += testutil::adaptive_simpson(
              [&](double y) { return alphaf_power_pdf(y, f); }, prev_x,
              std::max(x, prev_x + 1e-15), 1e-12);
          prev_x = std::max(x, prev_x);
          return acc;
        });
    if (d >= testutil::ks_critical_1pct(kN)) ok = false;
    std::snprintf(buf, sizeof(buf), " fading KS=%.4f", d);
    detail += buf;
  }
  {
    const auto topo = topology_preset(Topology::D2);
    std::vector<std::size_t> bins(20, 0);
    for (std::size_t i = 0; i < kN; ++i) {
      CounterRng rng(23, i);
      const double d = sample_distance(topo, 1.0, 40.0, rng);
      const double u = rwp_unit_cdf((d - 1.0) / 40.0, topo);
      bins[std::min<std::size_t>(19, std::size_t(u * 20.0))]++;
    }
    const double chi2 = testutil::chi_squared_equiprob(bins, kN);
    if (chi2 >= testutil::chi2_critical_1pct(19)) ok = false;
    std::snprintf(buf, sizeof(buf), " distance chi2=%.1f (<%.1f)", chi2,
                  testutil::chi2_critical_1pct(19));
    detail += buf;
  }
  report(8, ok, detail);
}

}  // namespace

int main() {
  criterion_1();
  criterion_2();
  criterion_3();
  criterion_4();
  criterion_5();
  criterion_6();
  criterion_7();
  criterion_8();
  std::printf("%s (%d criterion failures)\n",
              g_failures == 0 ? "ACCEPTANCE PASS" : "ACCEPTANCE FAIL",
              g_failures);
  return g_failures == 0 ? 0 : 1;
}
