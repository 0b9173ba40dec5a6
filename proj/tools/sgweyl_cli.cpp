// sgweyl: command-line experiments for logarithmic Weyl asymptotics of
// <x><D> and (1 + |x|^2)(1 - Delta).
//
// Exit codes: 0 success, 2 validation, 3 numerical non-convergence, 4 I/O.

#include <cstdio>
#include <fstream>
#include <iostream>
#include <limits>
#include <optional>
#include <random>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "sgweyl/sgweyl.hpp"

using namespace sgweyl;

namespace {

constexpr int kExitValidation = 2;
constexpr int kExitNumerical = 3;

void print(const std::string& key, double v) {
  std::cout << key << " = " << format_double(v) << "\n";
}
void print(const std::string& key, const std::string& v) { std::cout << key << " = " << v << "\n"; }
void print(const std::string& key, long long v) { std::cout << key << " = " << v << "\n"; }

void emit_json(const json& j, const std::string& path) {
  if (path.empty()) return;
  if (path == "-") {
    std::cout << j.dump(2) << "\n";
    return;
  }
  write_json(j, path);
}

std::vector<double> parse_list(const std::string& s, const std::string& what) {
  std::vector<double> out;
  for (const auto& item : split(s, ',')) {
    try {
      out.push_back(parse_double(item, what));
    } catch (const IoError&) {
      throw ValidationError("cannot parse " + what + " from '" + s + "'");
    }
  }
  return out;
}

std::pair<double, double> parse_window(const std::string& s) {
  const auto v = parse_list(s, "--window");
  require(v.size() == 2 && v[0] < v[1], "--window expects lo,hi with lo < hi");
  return {v[0], v[1]};
}

// ---------------------------------------------------------------------------

struct CoeffsArgs {
  int dim = 0;
  std::string method = "both";
  double tol = 1e-10;
  std::string json_path;
};

int run_coeffs(const CoeffsArgs& a) {
  require(a.dim >= 1 && a.dim <= 3, "--dim must be 1, 2 or 3");
  require(a.method == "closed" || a.method == "quadrature" || a.method == "both",
          "--method must be closed, quadrature or both");
  QuadratureOptions opt;
  opt.tolerance = a.tol;
  json j{{"dim", a.dim}, {"method", a.method}, {"tolerance", opt.tolerance},
         {"tau_sequence", opt.tau_sequence}, {"sphere_base_level", opt.base_level},
         {"radial_nodes", opt.radial_nodes}};
  print("dim", static_cast<long long>(a.dim));
  print("method", a.method);
  std::optional<double> g2c, g1c;
  if (a.method != "quadrature") {
    g2c = gamma2_closed(a.dim);
    g1c = gamma1_closed(a.dim);
    j["gamma2_closed"] = *g2c;
    j["gamma1_closed"] = *g1c;
    print("gamma2_closed", *g2c);
    print("gamma1_closed", *g1c);
  }
  if (a.method != "closed") {
    const auto q = gamma_coeffs_general(model_symbol(a.dim), 1.0, opt);
    j["gamma2_quadrature"] = q.gamma2.value;
    j["gamma2_quadrature_error"] = q.gamma2.estimated_error;
    j["gamma1_quadrature"] = q.gamma1.value;
    j["gamma1_quadrature_error"] = q.gamma1.estimated_error;
    j["tr"] = q.tr.value;
    j["wtr_theta"] = q.wtr_theta.value;
    j["wtr_psi"] = q.wtr_psi.value;
    j["wtr_e"] = q.wtr_e.value;
    print("gamma2_quadrature", q.gamma2.value);
    print("gamma2_quadrature_error", q.gamma2.estimated_error);
    print("gamma1_quadrature", q.gamma1.value);
    print("gamma1_quadrature_error", q.gamma1.estimated_error);
    if (g2c) {
      j["gamma2_difference"] = std::abs(q.gamma2.value - *g2c);
      j["gamma1_difference"] = std::abs(q.gamma1.value - *g1c);
      print("gamma2_difference", std::abs(q.gamma2.value - *g2c));
      print("gamma1_difference", std::abs(q.gamma1.value - *g1c));
    }
  }
  emit_json(j, a.json_path);
  return 0;
}

// ---------------------------------------------------------------------------

struct SpectrumArgs {
  DiscretizationConfig cfg;
  std::string mapping = "uniform";
  std::string op = "model";
  int count = 20;
  int min_trusted = 1;
  std::string window;
  std::string csv_path;
  std::string json_path;
};

int run_spectrum(SpectrumArgs a) {
  a.cfg.mapping = parse_mapping(a.mapping);
  a.cfg.op = parse_operator(a.op);
  validate(a.cfg);
  require(a.count >= 0, "--count must be nonnegative");
  if (!a.window.empty()) check_confinement(a.cfg, parse_window(a.window).second);
  const auto spec = compute_spectrum(a.cfg, a.count);
  if (!a.csv_path.empty()) write_spectrum(spec, a.csv_path);
  json j = spectrum_json(spec);
  j["min_trusted"] = a.min_trusted;
  if (!a.window.empty()) j["window"] = a.window;
  if (spec.trusted_count > 0) j["largest_trusted"] = spec.eigenvalues[spec.trusted_count - 1];
  for (auto it = j.begin(); it != j.end(); ++it) std::cout << it.key() << " = " << it.value() << "\n";
  emit_json(j, a.json_path);
  if (spec.trusted_count < a.min_trusted) {
    std::cerr << "error: only " << spec.trusted_count << " eigenvalues are stable under grid "
              << "refinement (required " << a.min_trusted << ")\n";
    return kExitNumerical;
  }
  return 0;
}

// ---------------------------------------------------------------------------

struct SpectrumInput {
  std::vector<double> values;  // trusted, rescaled
  double exponent = 0.0;
  double power = 1.0;
};

/// Loads a spectrum CSV; the model operator's spectrum is mapped to the
/// <x><D> normalization (power 1/2, exponent d) unless overridden.
SpectrumInput load_spectrum_input(const SpectralData& s, std::optional<double> power,
                                  std::optional<double> exponent) {
  SpectrumInput in;
  const bool model = s.config.op == OperatorKind::model;
  in.power = power.value_or(model ? 0.5 : 1.0);
  if (exponent) {
    in.exponent = *exponent;
  } else {
    require(model, "--exponent is required for non-model spectra");
    in.exponent = s.config.dimension;
  }
  in.values = rescaled(s.trusted(), in.power);
  return in;
}

struct FitArgs {
  std::string input;
  std::optional<double> exponent;
  std::optional<double> power;
  int levels = 1;
  std::string window;
  std::string json_path;
};

int run_fit(const FitArgs& a) {
  const auto table = read_csv(a.input);
  std::vector<FitPoint> points;
  double exponent = 0.0;
  json j;
  if (!table.rows.empty() && table.rows.front().size() == 2) {
    require(a.exponent.has_value(), "--exponent is required for point input");
    points = read_points(a.input);
    exponent = *a.exponent;
  } else {
    const auto spec = read_spectrum(a.input);
    const auto in = load_spectrum_input(spec, a.power, a.exponent);
    points = default_fit_points(in.values);
    exponent = in.exponent;
    j["power"] = in.power;
    j["trusted_count"] = spec.trusted_count;
  }
  if (!a.window.empty()) {
    const auto [lo, hi] = parse_window(a.window);
    points = restrict_window(points, lo, hi);
  }
  const auto fit = fit_log_weyl(points, exponent, a.levels);
  j.update(fit_json(fit));
  j["levels"] = a.levels;
  j["input"] = a.input;
  for (auto it = j.begin(); it != j.end(); ++it) std::cout << it.key() << " = " << it.value() << "\n";
  emit_json(j, a.json_path);
  return 0;
}

// ---------------------------------------------------------------------------

struct ZetaArgs {
  std::string input;
  std::string s_list;
  bool tail = false;
  int levels = 1;
  std::optional<double> exponent;
  std::optional<double> power;
  std::string json_path;
};

int run_zeta(const ZetaArgs& a) {
  const auto s_values = parse_list(a.s_list, "--s");
  require(!s_values.empty(), "--s needs at least one value");
  const auto spec = read_spectrum(a.input);
  const auto in = load_spectrum_input(spec, a.power, a.exponent);
  for (double s : s_values)
    require(s > in.exponent, "s = " + format_double(s) + " is not above the convergence abscissa " +
                                 format_double(in.exponent));
  std::optional<WeylFit> fit;
  if (a.tail) fit = fit_log_weyl(default_fit_points(in.values), in.exponent, a.levels);
  json j{{"input", a.input}, {"abscissa", in.exponent}, {"power", in.power},
         {"tail", a.tail}, {"terms", in.values.size()}};
  json values = json::array();
  for (double s : s_values) {
    const double z = zeta_partial(in.values, s, in.exponent, fit ? &*fit : nullptr);
    values.push_back({{"s", s}, {"zeta", z}});
    std::cout << "zeta(" << format_double(s) << ") = " << format_double(z) << "\n";
  }
  j["values"] = values;
  if (fit) j["fit"] = fit_json(*fit);
  emit_json(j, a.json_path);
  return 0;
}

// ---------------------------------------------------------------------------

struct FlowArgs {
  int dim = 2;
  std::optional<std::uint64_t> seed;
  std::string omega;
  std::string theta;
  std::optional<double> t;
  double tol = 1e-9;
  int samples = 200;
  std::string csv_path;
  std::string json_path;
};

int run_flow(const FlowArgs& a) {
  require(a.tol > 0.0, "--tol must be positive");
  require(a.samples >= 1, "--samples must be >= 1");
  std::optional<CornerState> z;
  if (!a.omega.empty() || !a.theta.empty()) {
    require(!a.omega.empty() && !a.theta.empty(), "--omega and --theta must be given together");
    z = CornerState::normalized(parse_list(a.omega, "--omega"), parse_list(a.theta, "--theta"));
  } else {
    require(a.dim >= 1, "--dim must be >= 1");
    std::mt19937_64 rng(a.seed.value_or(0));
    z = sample_corner_state(a.dim, rng);
  }
  const auto rt = return_time(*z);
  const double t = a.t.value_or(rt.period);
  require(std::isfinite(t), "--t must be finite");
  const auto closed = flow_closed(*z, t);
  const auto numeric = flow_numeric(*z, t, a.tol);
  const double observed = numeric_return_time(*z, a.tol);

  json j{{"dim", z->dimension()},
         {"omega", z->omega()},
         {"theta", z->theta()},
         {"c", conserved_angle(*z)},
         {"return_time", rt.period},
         {"fixed_point", rt.fixed_point},
         {"numeric_return_time", observed},
         {"t", t},
         {"tol", a.tol},
         {"closed_distance_to_start", distance(closed, *z)},
         {"numeric_distance_to_start", distance(numeric, *z)},
         {"numeric_vs_closed", distance(numeric, closed)},
         {"c_drift", std::abs(dot(numeric.omega(), numeric.theta()) - conserved_angle(*z))}};
  if (a.seed) j["seed"] = *a.seed;
  for (auto it = j.begin(); it != j.end(); ++it) std::cout << it.key() << " = " << it.value() << "\n";
  emit_json(j, a.json_path);

  if (!a.csv_path.empty()) {
    std::ofstream out(a.csv_path);
    if (!out) throw IoError("cannot write '" + a.csv_path + "'");
    const int d = z->dimension();
    out << "# c=" << format_double(conserved_angle(*z)) << "\n"
        << "# return_time=" << format_double(rt.period) << "\n"
        << "t";
    for (int i = 0; i < d; ++i) out << ",omega" << i;
    for (int i = 0; i < d; ++i) out << ",theta" << i;
    out << ",c\n";
    for (int k = 0; k <= a.samples; ++k) {
      const double tk = t * k / a.samples;
      const auto zk = flow_closed(*z, tk);
      out << format_double(tk);
      for (double v : zk.omega()) out << "," << format_double(v);
      for (double v : zk.theta()) out << "," << format_double(v);
      out << "," << format_double(dot(zk.omega(), zk.theta())) << "\n";
    }
  }
  return 0;
}

// ---------------------------------------------------------------------------

struct MeasureArgs {
  int dim = 2;
  std::uint64_t seed = 0;
  std::size_t samples = 1000;
  double t_max = std::numeric_limits<double>::infinity();
  double tol = 1e-8;
  std::string json_path;
};

int run_measure(const MeasureArgs& a) {
  const auto m = periodic_measure_estimate(a.dim, a.seed, a.samples, a.t_max, a.tol);
  json j{{"dim", a.dim},
         {"seed", a.seed},
         {"samples", m.samples},
         {"t_max", std::isfinite(a.t_max) ? json(a.t_max) : json("inf")},
         {"tol", a.tol},
         {"periodic", m.periodic},
         {"fixed_points", m.fixed_points},
         {"fraction", m.fraction}};
  for (auto it = j.begin(); it != j.end(); ++it) std::cout << it.key() << " = " << it.value() << "\n";
  emit_json(j, a.json_path);
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Numerical checks of logarithmic Weyl asymptotics for <x><D>"};
  app.require_subcommand(1);

  CoeffsArgs coeffs;
  auto* c = app.add_subcommand("coeffs", "Weyl coefficients gamma_2, gamma_1 of <x><D>");
  c->add_option("--dim", coeffs.dim, "dimension d (1, 2 or 3)")->required();
  c->add_option("--method", coeffs.method, "closed, quadrature or both");
  c->add_option("--tol", coeffs.tol, "quadrature tolerance");
  c->add_option("--json", coeffs.json_path, "write JSON report ('-' for stdout)");

  SpectrumArgs spectrum;
  auto* s = app.add_subcommand("spectrum", "eigenvalues of (1 + |x|^2)(1 - Delta)");
  s->add_option("--dim", spectrum.cfg.dimension, "dimension (1 or 2)");
  s->add_option("--grid", spectrum.cfg.grid_points, "interior grid points per axis");
  s->add_option("--half-width", spectrum.cfg.half_width, "box half-width L");
  s->add_option("--count", spectrum.count, "number of eigenvalues");
  s->add_option("--scheme", spectrum.cfg.scheme_order, "finite-difference order (2 or 4)");
  s->add_option("--mapping", spectrum.mapping, "uniform or sinh");
  s->add_option("--operator", spectrum.op, "model, unit_weight or harmonic");
  s->add_option("--window", spectrum.window, "lo,hi spectral window (checks confinement)");
  s->add_option("--min-trusted", spectrum.min_trusted, "required number of trusted eigenvalues");
  s->add_option("--csv", spectrum.csv_path, "write eigenvalues CSV (+ .json sidecar)");
  s->add_option("--json", spectrum.json_path, "write JSON report ('-' for stdout)");

  FitArgs fit;
  auto* f = app.add_subcommand("fit", "log-Weyl least-squares fit");
  f->add_option("--input", fit.input, "spectrum CSV or two-column (lambda, N) CSV")->required();
  f->add_option("--exponent", fit.exponent, "leading exponent d/m");
  f->add_option("--power", fit.power, "raise eigenvalues to this power first");
  f->add_option("--levels", fit.levels, "1 or 2 levels of basis functions");
  f->add_option("--window", fit.window, "lo,hi fit window");
  f->add_option("--json", fit.json_path, "write JSON report ('-' for stdout)");

  ZetaArgs zeta;
  auto* z = app.add_subcommand("zeta", "partial spectral zeta sums");
  z->add_option("--input", zeta.input, "spectrum CSV")->required();
  z->add_option("--s", zeta.s_list, "comma-separated s values")->required();
  z->add_flag("--tail", zeta.tail, "add the fitted tail correction");
  z->add_option("--levels", zeta.levels, "fit levels for the tail");
  z->add_option("--exponent", zeta.exponent, "convergence abscissa d/m");
  z->add_option("--power", zeta.power, "raise eigenvalues to this power first");
  z->add_option("--json", zeta.json_path, "write JSON report ('-' for stdout)");

  FlowArgs flow;
  auto* fl = app.add_subcommand("flow", "corner Hamiltonian flow of |x||xi|");
  fl->add_option("--dim", flow.dim, "dimension for a random start");
  fl->add_option("--seed", flow.seed, "seed for a random start");
  fl->add_option("--omega", flow.omega, "start omega, comma separated");
  fl->add_option("--theta", flow.theta, "start theta, comma separated");
  fl->add_option("--t", flow.t, "flow time (default: return time)");
  fl->add_option("--tol", flow.tol, "numeric integration tolerance");
  fl->add_option("--samples", flow.samples, "trajectory samples in the CSV");
  fl->add_option("--csv", flow.csv_path, "write trajectory CSV");
  fl->add_option("--json", flow.json_path, "write JSON report ('-' for stdout)");

  MeasureArgs measure;
  auto* m = app.add_subcommand("measure", "Monte Carlo estimate of the periodic-point measure");
  m->add_option("--dim", measure.dim, "dimension");
  m->add_option("--seed", measure.seed, "sampler seed");
  m->add_option("--samples", measure.samples, "number of samples");
  m->add_option("--t-max", measure.t_max, "largest admissible period");
  m->add_option("--tol", measure.tol, "return tolerance");
  m->add_option("--json", measure.json_path, "write JSON report ('-' for stdout)");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : kExitValidation;
  }

  try {
    if (*c) return run_coeffs(coeffs);
    if (*s) return run_spectrum(spectrum);
    if (*f) return run_fit(fit);
    if (*z) return run_zeta(zeta);
    if (*fl) return run_flow(flow);
    if (*m) return run_measure(measure);
  } catch (const Error& e) {
    std::cerr << "error: " << e.what() << "\n";
    return e.exit_code();
  }
  return 0;
}
