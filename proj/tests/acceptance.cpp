// Acceptance checks AC1-AC9. One PASS/FAIL line per criterion; exit status
// is nonzero if any criterion fails.

#include <sys/wait.h>

#include <chrono>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <functional>
#include <random>
#include <sstream>
#include <string>
#include <vector>

#include "sgweyl/sgweyl.hpp"

using namespace sgweyl;

namespace {

struct Outcome {
  bool pass = false;
  std::string detail;
};

int failures = 0;

void criterion(const std::string& id, const std::string& name, double budget_s,
               const std::function<Outcome()>& body) {
  const auto t0 = std::chrono::steady_clock::now();
  Outcome o;
  try {
    o = body();
  } catch (const std::exception& e) {
    o = {false, std::string("exception: ") + e.what()};
  }
  const double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
  const bool in_time = secs < budget_s;
  const bool pass = o.pass && in_time;
  if (!pass) ++failures;
  std::printf("%s %s  %s  [%s; %.2f s of %.0f s]\n", id.c_str(), pass ? "PASS" : "FAIL",
              name.c_str(), o.detail.c_str(), secs, budget_s);
  std::fflush(stdout);
}

std::string fmt(const char* f, double a, double b = 0.0, double c = 0.0) {
  char buf[256];
  std::snprintf(buf, sizeof buf, f, a, b, c);
  return buf;
}

json run_cli_json(const std::string& args) {
  const auto out = std::filesystem::temp_directory_path() / "sgweyl_acceptance.json";
  const std::string cmd =
      std::string(SGWEYL_CLI) + " " + args + " --json " + out.string() + " > /dev/null 2>&1";
  const int st = std::system(cmd.c_str());
  if (!WIFEXITED(st) || WEXITSTATUS(st) != 0) throw std::runtime_error("CLI failed: " + args);
  auto j = read_json(out.string());
  std::filesystem::remove(out);
  return j;
}

// 100 seeded states per dimension with |c| <= 0.99
std::vector<CornerState> flow_sample(int d) {
  std::mt19937_64 rng(20 + d);
  std::vector<CornerState> out;
  while (out.size() < 100) {
    auto z = sample_corner_state(d, rng);
    if (std::abs(conserved_angle(z)) <= 0.99) out.push_back(std::move(z));
  }
  return out;
}

}  // namespace

int main() {
  criterion("AC1", "closed-form coefficients via CLI (1e-10)", 1.0, [] {
    const auto j1 = run_cli_json("coeffs --dim 1 --method closed");
    const auto j2 = run_cli_json("coeffs --dim 2 --method closed");
    const double e1 = std::abs(j1["gamma1_closed"].get<double>() + (2 / kPi) * (2 * std::log(2.0) + 1));
    const double e2 = std::abs(j2["gamma1_closed"].get<double>() + 0.25);
    const double e3 = std::abs(j2["gamma2_closed"].get<double>() - 0.5);
    const double err = std::max({e1, e2, e3});
    return Outcome{err <= 1e-10, fmt("max error %.2e", err)};
  });

  criterion("AC2", "quadrature vs closed form (1e-6 d=1,2; 1e-4 d=3)", 30.0, [] {
    bool ok = true;
    std::string detail;
    for (int d = 1; d <= 3; ++d) {
      const auto c = gamma_coeffs_general(model_symbol(d), 1.0);
      const double err = std::max(std::abs(c.gamma2.value - gamma2_closed(d)),
                                  std::abs(c.gamma1.value - gamma1_closed(d)));
      ok = ok && err <= (d < 3 ? 1e-6 : 1e-4);
      detail += fmt("d=%.0f: %.1e ", d, err);
    }
    return Outcome{ok, detail};
  });

  criterion("AC3", "return-time law, 100 states each for d=2,3", 10.0, [] {
    double worst_numeric = 0.0, worst_closed = 0.0;
    for (int d : {2, 3})
      for (const auto& z : flow_sample(d)) {
        const double c = conserved_angle(z);
        const double t = 2 * kPi / std::sqrt(1 - c * c);
        worst_numeric = std::max(worst_numeric, distance(flow_numeric(z, t, 1e-9), z));
        worst_closed = std::max(worst_closed, distance(flow_closed(z, t), z));
      }
    return Outcome{worst_numeric <= 1e-6 && worst_closed <= 1e-10,
                   fmt("numeric %.1e (1e-6), closed %.1e (1e-10)", worst_numeric, worst_closed)};
  });

  criterion("AC4", "conservation over one period (1e-7)", 30.0, [] {
    double drift = 0.0;
    for (int d : {2, 3})
      for (const auto& z : flow_sample(d)) {
        const double c0 = conserved_angle(z);
        const double period = return_time(z).period;
        for (int k = 1; k <= 8; ++k) {
          const auto w = flow_numeric(z, period * k / 8.0, 1e-9);
          drift = std::max({drift, std::abs(dot(w.omega(), w.theta()) - c0),
                            std::abs(norm(w.omega()) - 1), std::abs(norm(w.theta()) - 1)});
        }
      }
    return Outcome{drift <= 1e-7, fmt("max drift %.1e", drift)};
  });

  criterion("AC5", "periodic measure is 1 on 1000 samples", 5.0, [] {
    bool ok = true;
    std::string detail;
    for (int d : {2, 3}) {
      const auto m = periodic_measure_estimate(d, 2024, 1000);
      ok = ok && m.fraction == 1.0;
      detail += fmt("d=%.0f: %.3f ", d, m.fraction);
    }
    return Outcome{ok, detail};
  });

  criterion("AC6", "harmonic oscillator 2k+1, k<50, n=4096, L=12 (1e-3)", 60.0, [] {
    DiscretizationConfig cfg;
    cfg.half_width = 12;
    cfg.grid_points = 4096;
    cfg.op = OperatorKind::harmonic;
    const auto s = compute_spectrum(cfg, 50);
    double err = 0.0;
    for (int k = 0; k < 50; ++k) err = std::max(err, std::abs(s.eigenvalues[k] - (2 * k + 1)) / (2 * k + 1));
    return Outcome{err <= 1e-3, fmt("max rel error %.1e, trusted %.0f", err, s.trusted_count)};
  });

  criterion("AC7", "leading Weyl fit, model d=1 (trusted>=500, 20%)", 120.0, [] {
    DiscretizationConfig cfg;
    cfg.half_width = 600;
    cfg.grid_points = 16000;
    cfg.mapping = Mapping::sinh;
    const auto s = compute_spectrum(cfg, 700);
    check_confinement(cfg, s.eigenvalues[s.trusted_count - 1]);
    const auto mu = rescaled(s.trusted(), 0.5);
    const auto pts = default_fit_points(mu);
    const std::vector<BasisTag> one = {{0, 1}};
    const auto f1 = fit_weyl_basis(pts, 1.0, one);
    const auto f2 = fit_log_weyl(pts, 1.0, 1);
    const double g2 = *f2.coefficient(1, 0);
    const double rel = std::abs(g2 / (2 / kPi) - 1);
    const bool ok = s.trusted_count >= 500 && rel <= 0.2 && f2.residual_sup < f1.residual_sup;
    return Outcome{ok, fmt("trusted %.0f, gamma2 %.4f (rel %.3f)", s.trusted_count, g2, rel) +
                           fmt(", sup residual 2-term %.3f < 1-term %.3f", f2.residual_sup,
                               f1.residual_sup)};
  });

  criterion("AC8", "Laurent dictionary A2 = d gamma2 = TR (1e-6)", 10.0, [] {
    double err = 0.0;
    for (int d = 1; d <= 3; ++d) {
      WeylFit f;
      f.d_over_m = d;
      f.coefficients = {{{0, 1}, gamma2_closed(d)}, {{0, 0}, gamma1_closed(d)}};
      const double a2 = laurent_from_weyl(f, d, 0).A2;
      err = std::max({err, std::abs(a2 - tr_corner(model_symbol(d), d).value),
                      std::abs(a2 - d * gamma2_closed(d))});
    }
    return Outcome{err <= 1e-6, fmt("max error %.1e", err)};
  });

  criterion("AC9", "property suites", 60.0, [] {
    std::string detail;
    bool ok = true;
    // fit exact recovery
    {
      WeylFit planted;
      planted.d_over_m = 2;
      planted.coefficients = {{{0, 1}, 0.5}, {{0, 0}, 0.25}, {{1, 1}, -0.7}, {{1, 0}, 1.3}};
      std::vector<FitPoint> pts;
      for (int i = 0; i < 50; ++i) {
        const double l = 5 + 95.0 * i / 49;
        pts.push_back({l, planted.evaluate(l)});
      }
      const auto f = fit_log_weyl(pts, 2, 2);
      double err = 0.0;
      for (const auto& [tag, w] : planted.coefficients)
        err = std::max(err, std::abs(f.coefficients.at(tag) - w));
      ok = ok && err <= 1e-8;
      detail += fmt("fit %.0e; ", err);
    }
    // counting monotonicity
    {
      DiscretizationConfig cfg;
      cfg.half_width = 100;
      cfg.grid_points = 1000;
      cfg.mapping = Mapping::sinh;
      const auto s = compute_spectrum(cfg, 100);
      const double top = s.eigenvalues[s.trusted_count - 1];
      std::size_t prev = 0;
      bool mono = true;
      for (int i = 0; i <= 5000; ++i) {
        const auto n = counting_function(s, top * i / 5000.0);
        mono = mono && n >= prev;
        prev = n;
      }
      ok = ok && mono;
      detail += mono ? "counting monotone; " : "counting NOT monotone; ";
    }
    // digamma recurrence
    {
      double err = 0.0;
      for (double x = 0.1; x <= 50.0; x += 0.001)
        err = std::max(err, std::abs(digamma(x + 1) - digamma(x) - 1 / x));
      ok = ok && err <= 1e-12;
      detail += fmt("digamma %.0e; ", err);
    }
    // odd/even finite sums
    {
      double err = 0.0;
      for (int d = 1; d <= 20; ++d)
        err = std::max(err, std::abs(gamma1_finite_sum(d) - gamma1_closed(d)));
      ok = ok && err <= 1e-12;
      detail += fmt("finite sums %.0e; ", err);
    }
    // flow group property
    {
      std::mt19937_64 rng(77);
      std::uniform_real_distribution<double> time(-30.0, 30.0);
      double err = 0.0;
      for (int d = 1; d <= 3; ++d)
        for (int i = 0; i < 500; ++i) {
          const auto z = sample_corner_state(d, rng);
          const double s = time(rng), t = time(rng);
          err = std::max(err, distance(flow_closed(flow_closed(z, s), t), flow_closed(z, s + t)));
        }
      ok = ok && err <= 1e-10;
      detail += fmt("group %.0e", err);
    }
    return Outcome{ok, detail};
  });

  std::printf("%s: %d criteria failed\n", failures ? "FAIL" : "PASS", failures);
  return failures ? 1 : 0;
}
