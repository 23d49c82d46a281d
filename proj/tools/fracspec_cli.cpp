// fracspec_cli: build model operators and run verification suites.
//
//   fracspec_cli build  --model kipriyanov1d --grid-n 128 --alpha 0.5 --out op.json
//   fracspec_cli verify --artifact op.json --suite spectrum --seed 7 --report report.json
//
// Exit codes: 0 all checks pass/info, 1 some check failed, 2 invalid
// configuration, 3 assembly failure, 4 a check raised an error.

#include <CLI11.hpp>
#include <json.hpp>

#include <cmath>
#include <cstdint>
#include <filesystem>
#include <fstream>
#include <functional>
#include <iostream>
#include <limits>
#include <optional>
#include <set>
#include <sstream>
#include <string>
#include <vector>

#include "fracspec/fracspec.hpp"

using namespace fracspec;
using json = nlohmann::ordered_json;

namespace {

constexpr const char* artifact_schema = "fracspec.artifact/1";
constexpr const char* report_schema = "fracspec.report/1";

enum Exit { ok = 0, check_failed = 1, bad_config = 2, assembly_failed = 3, check_errored = 4 };

struct ConfigError {
  std::string field;
  std::string message;
};

struct RunConfig {
  std::string model = "kipriyanov1d";
  std::optional<double> grid_a, grid_b;
  long grid_n = 128;
  std::optional<double> alpha;
  double sigma = 0.0;
  double lambda = 1.0;
  std::optional<double> mu;
  double delta = 1.0;
  std::optional<std::string> a11;
  std::string rho = "const:0";
  double gamma_a = 1.0;
  double nu = 1.0;
  std::string matrix_csv;
  int angles = 64;

  bool is(const char* m) const { return model == m; }

  // fills model-dependent defaults so the artifact records every value
  void resolve()
  {
    if (!grid_a)
      grid_a = is("riesz") ? -10.0 : 0.0;
    if (!grid_b)
      grid_b = is("riesz") ? 10.0 : 1.0;
    if (!alpha)
      alpha = is("riesz") ? 0.85 : 0.5;
    if (!a11)
      a11 = is("riesz") ? "wpow:2,5" : "const:1";
    if (!mu)
      mu = (*grid_b - *grid_a) / static_cast<double>(grid_n + 1);
  }

  void validate() const
  {
    static const std::set<std::string> models{"kipriyanov1d", "riesz", "difference", "custom-matrix"};
    if (!models.count(model))
      throw ConfigError{"model", "unknown model '" + model + "'"};
    if (is("custom-matrix")) {
      if (matrix_csv.empty())
        throw ConfigError{"matrix-csv", "custom-matrix needs --matrix-csv"};
      return;
    }
    if (grid_n < 4)
      throw ConfigError{"grid-n", "needs at least 4 interior nodes, got " + std::to_string(grid_n)};
    if (!(*grid_a < *grid_b))
      throw ConfigError{"grid-a", "grid needs grid-a < grid-b"};
    const double a = *alpha;
    if (is("riesz")) {
      if (!(sigma >= 0.0 && sigma < 1.0))
        throw ConfigError{"sigma", "must lie in [0, 1)"};
      if (!(a > 0.75 + sigma / 2.0 && a < 1.0))
        throw ConfigError{"alpha", "riesz needs sigma/2 + 3/4 < alpha < 1, got " + num(a)};
      if (!(delta >= 0.0))
        throw ConfigError{"delta", "must be >= 0"};
      if (!(gamma_a > 0.0))
        throw ConfigError{"gamma-a", "must be positive"};
    } else {
      if (!(a > 0.0 && a < 1.0))
        throw ConfigError{"alpha", "must lie in (0, 1), got " + num(a)};
      if (!(sigma >= 0.0 && sigma < 1.0))
        throw ConfigError{"sigma", "must lie in [0, 1), got " + num(sigma)};
    }
    if (is("difference")) {
      if (!(lambda > 0.0))
        throw ConfigError{"lambda", "must be positive"};
      if (!(*mu > 0.0))
        throw ConfigError{"mu", "must be positive"};
      if (!(nu > 0.0))
        throw ConfigError{"nu", "must be positive"};
    }
    for (const auto& [field, spec] : {std::pair{"a11", *a11}, std::pair{"rho", rho}}) {
      try {
        Coefficient::parse(spec);
      } catch (const error& e) {
        throw ConfigError{field, e.what()};
      }
    }
  }

  Grid1D grid() const { return Grid1D(*grid_a, *grid_b, grid_n); }

  json to_json() const
  {
    json j;
    j["model"] = model;
    if (is("custom-matrix")) {
      j["matrix_csv"] = matrix_csv;
      return j;
    }
    j["grid"] = {{"a", *grid_a}, {"b", *grid_b}, {"n", grid_n}};
    j["alpha"] = *alpha;
    j["sigma"] = sigma;
    j["lambda"] = lambda;
    j["mu"] = *mu;
    j["delta"] = delta;
    j["a11"] = *a11;
    j["rho"] = rho;
    j["gamma_a"] = gamma_a;
    j["nu"] = nu;
    j["angles"] = angles;
    return j;
  }

  static RunConfig from_json(const json& j)
  {
    RunConfig c;
    c.model = j.at("model").get<std::string>();
    if (c.is("custom-matrix")) {
      c.matrix_csv = j.at("matrix_csv").get<std::string>();
      return c;
    }
    c.grid_a = j.at("grid").at("a").get<double>();
    c.grid_b = j.at("grid").at("b").get<double>();
    c.grid_n = j.at("grid").at("n").get<long>();
    c.alpha = j.at("alpha").get<double>();
    c.sigma = j.at("sigma").get<double>();
    c.lambda = j.at("lambda").get<double>();
    c.mu = j.at("mu").get<double>();
    c.delta = j.at("delta").get<double>();
    c.a11 = j.at("a11").get<std::string>();
    c.rho = j.at("rho").get<std::string>();
    c.gamma_a = j.at("gamma_a").get<double>();
    c.nu = j.at("nu").get<double>();
    c.angles = j.value("angles", 64);
    return c;
  }

  static std::string num(double x)
  {
    std::ostringstream s;
    s << x;
    return s.str();
  }
};

// ---------------------------------------------------------------------------
// model assembly

struct Model {
  OperatorMatrix L;
  NormMatrix hplus;
  std::optional<TransformSpec> spec;
  std::optional<SemigroupSpec> semigroup;
  std::optional<DifferenceModel> difference;
  std::string transform_j; // description of J
};

ComplexMatrix read_matrix_csv(const std::string& path)
{
  std::ifstream in(path);
  if (!in)
    throw ConfigError{"matrix-csv", "cannot open '" + path + "'"};
  std::vector<std::vector<double>> rows;
  std::string line;
  while (std::getline(in, line)) {
    if (line.empty() || line[0] == '#')
      continue;
    std::vector<double> row;
    std::stringstream ss(line);
    std::string cell;
    while (std::getline(ss, cell, ',')) {
      try {
        std::size_t used = 0;
        row.push_back(std::stod(cell, &used));
        if (cell.find_first_not_of(" \t\r", used) != std::string::npos)
          throw std::invalid_argument(cell);
      } catch (const std::exception&) {
        throw ConfigError{"matrix-csv", "non-numeric entry '" + cell + "' in '" + path + "'"};
      }
    }
    rows.push_back(std::move(row));
  }
  const auto n = static_cast<Eigen::Index>(rows.size());
  if (n < 4)
    throw ConfigError{"matrix-csv", "matrix must be at least 4 x 4"};
  ComplexMatrix m(n, n);
  for (Eigen::Index i = 0; i < n; ++i) {
    if (static_cast<Eigen::Index>(rows[i].size()) != n)
      throw ConfigError{"matrix-csv", "row " + std::to_string(i) + " does not have " + std::to_string(n) + " entries"};
    for (Eigen::Index j = 0; j < n; ++j)
      m(i, j) = rows[i][j];
  }
  return m;
}

Model build_model(const RunConfig& c)
{
  if (c.is("custom-matrix")) {
    ComplexMatrix m = read_matrix_csv(c.matrix_csv);
    const Eigen::Index n = m.rows();
    return Model{OperatorMatrix(Grid1D(0.0, 1.0, n), std::move(m), InnerProduct::uniform(n)),
                 NormMatrix(ComplexMatrix::Identity(n, n)), std::nullopt, std::nullopt, std::nullopt, ""};
  }
  const Grid1D g = c.grid();
  const Coefficient a11 = Coefficient::parse(*c.a11);
  const Coefficient rho = Coefficient::parse(c.rho);
  if (c.is("kipriyanov1d")) {
    KipriyanovModel m = build_kipriyanov_1d(g, a11, rho, c.sigma, *c.alpha);
    return Model{std::move(m.L), std::move(m.hplus), std::move(m.spec), SemigroupSpec::shift(g), std::nullopt,
                 "shift generator, upwind first difference"};
  }
  if (c.is("riesz")) {
    RieszModel m = build_riesz_model(g, a11, c.gamma_a, rho, c.sigma, *c.alpha, c.delta);
    return Model{std::move(m.L), std::move(m.hplus), std::move(m.spec), SemigroupSpec::gauss(g), std::nullopt,
                 "Gauss generator, -(1/2) second difference"};
  }
  DifferenceOptions opts;
  opts.nu = c.nu;
  DifferenceModel m = build_difference_model(g, a11, rho, c.lambda, *c.mu, *c.alpha, opts);
  Model out{m.L, m.hplus, m.spec, SemigroupSpec::poisson(g, c.lambda, *c.mu), m, "Poisson difference generator"};
  return out;
}

// ---------------------------------------------------------------------------
// serialization

json matrix_to_json(const ComplexMatrix& m)
{
  json entries = json::array();
  for (Eigen::Index i = 0; i < m.rows(); ++i)
    for (Eigen::Index j = 0; j < m.cols(); ++j)
      if (m(i, j) != complex(0.0, 0.0))
        entries.push_back(json::array({i, j, m(i, j).real(), m(i, j).imag()}));
  return json{{"rows", m.rows()}, {"cols", m.cols()}, {"entries", std::move(entries)}};
}

ComplexMatrix matrix_from_json(const json& j)
{
  const auto rows = j.at("rows").get<Eigen::Index>(), cols = j.at("cols").get<Eigen::Index>();
  ComplexMatrix m = ComplexMatrix::Zero(rows, cols);
  for (const auto& e : j.at("entries")) {
    const auto i = e.at(0).get<Eigen::Index>(), k = e.at(1).get<Eigen::Index>();
    if (i < 0 || i >= rows || k < 0 || k >= cols)
      throw std::out_of_range("matrix entry outside the declared shape");
    m(i, k) = complex(e.at(2).get<double>(), e.at(3).get<double>());
  }
  return m;
}

json real_vector_json(const RealVector& v)
{
  json a = json::array();
  for (double x : v)
    a.push_back(x);
  return a;
}

json build_artifact(const RunConfig& c, const Model& m)
{
  json j;
  j["schema"] = artifact_schema;
  j["config"] = c.to_json();
  j["grid"] = {{"a", m.L.grid.a()}, {"b", m.L.grid.b()}, {"n", m.L.grid.n()}, {"h", m.L.grid.h()}};
  j["ip_weights"] = real_vector_json(m.L.ip.weights());
  j["operator"] = matrix_to_json(m.L.matrix);
  if (m.spec) {
    j["transform"] = {{"alpha", m.spec->alpha},
                      {"J_kind", m.transform_j},
                      {"J", matrix_to_json(m.spec->J)},
                      {"G", matrix_to_json(m.spec->G)},
                      {"F", matrix_to_json(m.spec->F)}};
  } else {
    j["transform"] = nullptr;
  }
  return j;
}

void write_file(const std::string& path, const std::string& text)
{
  std::ofstream out(path, std::ios::binary);
  if (!out)
    throw std::runtime_error("cannot write '" + path + "'");
  out << text;
}

// ---------------------------------------------------------------------------
// checks

struct Check {
  std::string name;
  std::string anchor;
  std::string status = "info"; // pass | fail | info | error
  json numbers = json::object();
};

std::string verdict(bool ok) { return ok ? "pass" : "fail"; }

class Runner {
public:
  std::vector<Check> checks;

  void run(const std::string& name, const std::string& anchor, const std::function<void(Check&)>& body)
  {
    Check c{name, anchor};
    try {
      body(c);
    } catch (const error& e) {
      c.status = "error";
      c.numbers = json{{"error", e.what()}};
    }
    checks.push_back(std::move(c));
  }
};

struct SpectrumOutput {
  ComplexVector eigenvalues; // of L, ascending modulus
  std::vector<complex> range;
};

void semigroup_suite(Runner& r, const Model& m, std::uint64_t seed)
{
  if (!m.semigroup) {
    r.run("semigroup_axioms", "contraction semigroup axioms", [](Check& c) {
      c.numbers["skipped"] = "custom matrix has no semigroup";
    });
    return;
  }
  const SemigroupSpec& s = *m.semigroup;
  const double h = s.grid.h();
  std::vector<double> times;
  double law_tol = 1e-12;
  switch (s.kind) {
  case SemigroupKind::Shift:
    times = {2.0 * h, 5.0 * h, 10.0 * h};
    break;
  case SemigroupKind::Gauss: {
    const double scale = std::pow(s.grid.length() / 20.0, 2);
    times = {0.1 * scale, 0.5 * scale, 1.0 * scale};
    law_tol = 10.0 * h;
    break;
  }
  case SemigroupKind::PoissonDifference:
    times = {0.1, 0.5, 1.0};
    break;
  }
  r.run("semigroup_axioms", "contraction semigroup axioms", [&](Check& c) {
    const AxiomReport a = verify_axioms(s, times, law_tol, seed);
    c.numbers = {{"times", times},
                 {"law_defect", a.law_defect},
                 {"law_tolerance", law_tol},
                 {"identity_defect", a.identity_defect},
                 {"contraction_max", a.contraction_max},
                 {"continuity_times", a.continuity_times},
                 {"continuity_modulus", a.continuity_modulus}};
    c.status = verdict(a.law_ok && a.contraction_ok && a.identity_ok && a.continuity_ok);
  });
  r.run("generator_maccretive", "m-accretive generator resolvent bound", [&](Check& c) {
    const OperatorMatrix gen = generator_matrix(s);
    const MAccretiveReport a = maccretive_check(gen.matrix, gen.ip, {0.01, 0.1, 1.0, 10.0, 100.0});
    c.numbers = {{"min_hermitian_eigenvalue", a.min_hermitian_eigenvalue},
                 {"t", a.t},
                 {"t_resolvent_norm", a.resolvent_norm_times_t}};
    c.status = verdict(a.pass);
  });
}

void fracpow_suite(Runner& r, const RunConfig& cfg, const Model& m)
{
  const double alpha = cfg.is("custom-matrix") ? 0.5 : *cfg.alpha;
  const double lambda = cfg.is("difference") ? cfg.lambda : 1.0;
  r.run("gl_coefficient_identity", "Grunwald coefficient difference identity", [&](Check& c) {
    const Eigen::Index kmax = 40;
    const GLCoefficients gl = gl_coefficients(alpha, lambda, kmax + 1);
    const RealVector alt = gl_coefficients_alt(alpha, lambda, kmax + 1);
    json table = json::array();
    double worst = std::abs(alt[0] - gl.c[0]) / std::abs(gl.c[0]);
    bool ok = std::abs(alt[0] - gl.c[0]) <= 1e-10 * std::abs(gl.c[0]);
    for (Eigen::Index k = 0; k <= kmax; ++k) {
      const double defect = std::abs(alt[k + 1] - alt[k] - gl.c[k + 1]) / std::abs(gl.c[k + 1]);
      worst = std::max(worst, defect);
      ok = ok && defect <= 1e-8;
      table.push_back({{"k", k}, {"C", gl.c[k]}, {"C_alt", alt[k]}, {"relative_defect", defect}});
    }
    c.numbers = {{"alpha", alpha}, {"lambda", lambda}, {"worst_relative_defect", worst}, {"table", table}};
    c.status = verdict(ok);
  });
  if (!m.spec)
    return;
  const TransformSpec& s = *m.spec;
  BalakrishnanConfig bc;
  bc.alpha = alpha;
  r.run("balakrishnan_inverse_pair", "fractional power and negative power are inverse", [&](Check& c) {
    const ComplexMatrix prod = negative_power(s.J, s.ip, bc) * balakrishnan_power(s.J, s.ip, bc);
    const ComplexMatrix id = ComplexMatrix::Identity(prod.rows(), prod.cols());
    const double defect = relative_error(prod, id);
    c.numbers = {{"alpha", alpha}, {"relative_defect", defect}};
    c.status = verdict(defect <= 1e-6);
  });
  const Grid1D& g = m.L.grid;
  if (cfg.is("kipriyanov1d")) {
    r.run("closed_form_route", "Balakrishnan power vs Marchaud derivative", [&](Check& c) {
      const double a = g.a(), b = g.b();
      const GridFunction f = GridFunction::sample(g, [&](double x) { return (x - a) * (x - a) * (b - x) * (b - x); });
      const PowerComparison p = marchaud_power_check(alpha, g, f);
      c.numbers = {{"discrepancy", p.discrepancy}, {"first", p.first}, {"last", p.last}, {"convention", p.convention}};
      c.status = verdict(p.discrepancy <= 0.02);
    });
  } else if (cfg.is("riesz")) {
    r.run("closed_form_route", "Balakrishnan power vs Riesz kernel on f''", [&](Check& c) {
      const GridFunction f = GridFunction::sample(g, [](double x) { return std::exp(-x * x); });
      const PowerComparison p = riesz_power_check(alpha, g, f);
      c.numbers = {{"discrepancy", p.discrepancy}, {"first", p.first}, {"last", p.last}, {"convention", p.convention}};
      c.status = verdict(p.discrepancy <= 0.02);
    });
  } else if (cfg.is("difference")) {
    r.run("closed_form_route", "Balakrishnan power vs Grunwald sum", [&](Check& c) {
      const double err = relative_error(balakrishnan_power(s.J, s.ip, bc), gl_power_matrix(*m.semigroup, alpha));
      c.numbers = {{"relative_error", err}};
      c.status = verdict(err <= 1e-6);
    });
  }
}

void class_suite(Runner& r, const Model& m)
{
  if (!m.spec) {
    r.run("class_membership", "transform class membership", [](Check& c) {
      c.numbers["skipped"] = "custom matrix has no transform";
    });
    return;
  }
  r.run("class_membership", "transform class membership", [&](Check& c) {
    const ClassReport k = check_class(*m.spec);
    c.numbers = {{"gamma_G", k.gamma_G},   {"C_alpha", k.C_alpha}, {"norm_J_inv", k.norm_J_inv},
                 {"norm_F", k.norm_F},     {"threshold", k.threshold}, {"margin", k.margin},
                 {"member", k.member}};
    c.status = verdict(k.member);
  });
  if (m.difference) {
    r.run("difference_h2", "perturbation bound gamma_N > sigma ||Q^-1||^2", [&](Check& c) {
      const DifferenceModel& d = *m.difference;
      c.numbers = {{"sigma", d.sigma_const},
                   {"norm_Q_inv", d.norm_Q_inv},
                   {"gamma_N", d.gamma_N},
                   {"threshold", d.sigma_const * d.norm_Q_inv * d.norm_Q_inv}};
      c.status = verdict(d.h2_verdict);
    });
  }
}

void spectrum_suite(Runner& r, const RunConfig& cfg, const Model& m, std::uint64_t seed, SpectrumOutput& out)
{
  const InnerProduct& ip = m.L.ip;
  std::optional<ResolventSpectrum> rs;
  std::optional<OrderFit> fit;
  std::optional<double> theta;

  r.run("resolvent_spectrum", "eigenvalues and s-numbers of the resolvent", [&](Check& c) {
    rs = resolvent_spectrum(m.L.matrix, ip);
    const Eigen::Index n = rs->svals.size();
    out.eigenvalues = rs->eigenvalues.cwiseInverse();
    c.numbers = {{"count", n}, {"s_first", rs->svals[0]}, {"s_last", rs->svals[n - 1]},
                 {"lambda_first_re", rs->eigenvalues[0].real()}, {"lambda_first_im", rs->eigenvalues[0].imag()}};
  });
  r.run("order_estimate", "order of the operator from s-number decay", [&](Check& c) {
    if (!rs)
      throw error(ErrorKind::InvalidArgument, "resolvent spectrum unavailable");
    fit = order_estimate(rs->svals);
    c.numbers = {{"mu", fit->mu}, {"r2", fit->r2}, {"used", fit->used}};
  });
  r.run("schatten_class", "Schatten class of the resolvent", [&](Check& c) {
    if (!rs || !fit)
      throw error(ErrorKind::InvalidArgument, "order estimate unavailable");
    const SchattenReport s = schatten_classify(rs->svals, fit->mu);
    c.numbers = {{"predicted_p", s.predicted_p},       {"strict", s.strict},
                 {"evaluated_p", s.evaluated_p},       {"sum", s.partial.back()},
                 {"cauchy_tail", s.cauchy_tail},       {"cauchy_converged", s.cauchy_converged}};
  });
  if (!cfg.is("custom-matrix") && cfg.grid_n >= 32) {
    r.run("schatten_refinement", "Schatten sum under grid refinement", [&](Check& c) {
      if (!rs || !fit)
        throw error(ErrorKind::InvalidArgument, "order estimate unavailable");
      RunConfig coarse = cfg;
      coarse.grid_n = (cfg.grid_n + 1) / 2 - 1;
      coarse.mu = *cfg.mu * (cfg.grid_n + 1.0) / (coarse.grid_n + 1.0);
      const Model cm = build_model(coarse);
      const RealVector cs = resolvent_spectrum(cm.L.matrix, cm.L.ip).svals;
      const double p = schatten_classify(rs->svals, fit->mu).evaluated_p;
      const RefinementVerdict v = schatten_refinement(cs, rs->svals, p);
      c.numbers = {{"p", p}, {"n_coarse", coarse.grid_n}, {"n_fine", cfg.grid_n},
                   {"sum_coarse", v.sum_coarse}, {"sum_fine", v.sum_fine}, {"relative_change", v.relative_change}};
      c.status = verdict(v.convergent);
    });
  }
  r.run("numerical_range", "numerical range and sector", [&](Check& c) {
    const SectorEstimate s = numerical_range(m.L.matrix, ip, cfg.angles);
    out.range = s.boundary;
    c.numbers = {{"angles", cfg.angles}, {"vertex", s.vertex}, {"semi_angle", s.semi_angle}};
    c.status = verdict(s.sectorial());
  });
  r.run("sectorial_factorization", "W = H^1/2 (I + iB) H^1/2", [&](Check& c) {
    const SectorialFactors f = sectorial_factorize(m.L.matrix, ip);
    theta = sector_angle_from_factors(f, ip);
    c.numbers = {{"reconstruction_residual", f.reconstruction_residual}, {"semi_angle", *theta}};
    c.status = verdict(f.reconstruction_residual <= 1e-10);
  });
  r.run("realpart_resolvent", "real part of the resolvent", [&](Check& c) {
    const ResolventRealPartReport p = realpart_resolvent_check(m.L.matrix, ip);
    // round-off in the inverse grows with the condition number
    const double kappa = operator_norm(m.L.matrix, ip) * operator_norm(inverse(m.L.matrix), ip);
    const double tol = std::max(1e-10, 100.0 * std::numeric_limits<double>::epsilon() * kappa);
    c.numbers = {{"relative_defect_factor_one", p.relative_factor_one()},
                 {"relative_defect_factor_half", p.relative_factor_half()},
                 {"condition_number", kappa},
                 {"tolerance", tol}};
    c.status = verdict(p.relative_factor_one() <= tol);
  });
  r.run("h1_h2", "form bounds in the energy norm", [&](Check& c) {
    const H1H2Report h = verify_H1_H2(m.L.matrix, m.hplus, ip, 100, seed);
    c.numbers = {{"C1", h.C1}, {"C2", h.C2}, {"C2_sampled", h.C2_sampled}};
    c.status = verdict(h.verdict);
  });
  r.run("eigenvalue_inequality", "eigenvalue sums against the real part", [&](Check& c) {
    const ComplexMatrix rh = inverse(hermitian_part(m.L.matrix, ip));
    const InequalityProfile p = eigenvalue_inequality(inverse(m.L.matrix), rh, ip, 1.0);
    c.numbers = {{"p", 1.0}, {"sup_ratio", p.sup}, {"final_ratio", p.ratio.back()}};
    c.status = verdict(std::isfinite(p.sup));
  });
  r.run("asymptotics", "eigenvalue decay against the order", [&](Check& c) {
    if (!rs || !fit)
      throw error(ErrorKind::InvalidArgument, "order estimate unavailable");
    const AsymptoticsVerdict a = asymptotics_check(rs->eigenvalues, fit->mu, 0.1);
    c.numbers = {{"mu", fit->mu}, {"eps", 0.1}, {"slope", a.slope}, {"max_value", a.max_value}};
    c.status = verdict(a.pass);
  });
  r.run("completeness", "root vector completeness criterion", [&](Check& c) {
    if (!theta || !fit)
      throw error(ErrorKind::InvalidArgument, "sector angle or order unavailable");
    const bool complete = completeness_criterion(*theta, fit->mu);
    c.numbers = {{"theta", *theta}, {"mu", fit->mu}, {"bound", std::numbers::pi * fit->mu / 2.0}};
    c.status = verdict(complete);
  });
}

std::string sidecar_path(const std::string& report, const std::string& suffix)
{
  std::filesystem::path p(report);
  return (p.parent_path() / (p.stem().string() + suffix)).string();
}

std::string spectrum_csv(const ComplexVector& e)
{
  std::ostringstream s;
  s.precision(17);
  s << "index,re,im,modulus\n";
  for (Eigen::Index i = 0; i < e.size(); ++i)
    s << i << ',' << e[i].real() << ',' << e[i].imag() << ',' << std::abs(e[i]) << '\n';
  return s.str();
}

std::string range_csv(const std::vector<complex>& b)
{
  std::ostringstream s;
  s.precision(17);
  s << "re,im\n";
  for (const complex& z : b)
    s << z.real() << ',' << z.imag() << '\n';
  return s.str();
}

std::set<std::string> parse_suite(const std::string& text)
{
  static const std::set<std::string> known{"semigroup", "fracpow", "spectrum", "class", "full"};
  std::set<std::string> out;
  std::stringstream ss(text);
  std::string item;
  while (std::getline(ss, item, ','))
    if (!item.empty()) {
      if (!known.count(item))
        throw ConfigError{"suite", "unknown suite '" + item + "'"};
      out.insert(item);
    }
  if (out.empty())
    throw ConfigError{"suite", "no suite selected"};
  if (out.count("full"))
    out = {"semigroup", "fracpow", "spectrum", "class"};
  return out;
}

void add_model_options(CLI::App& app, RunConfig& c)
{
  app.add_option("--model", c.model, "kipriyanov1d | riesz | difference | custom-matrix");
  app.add_option("--grid-a", c.grid_a, "left end of the grid");
  app.add_option("--grid-b", c.grid_b, "right end of the grid");
  app.add_option("--grid-n", c.grid_n, "number of interior nodes");
  app.add_option("--alpha", c.alpha, "fractional order");
  app.add_option("--sigma", c.sigma, "order of the left fractional integral");
  app.add_option("--lambda", c.lambda, "Poisson rate (difference model)");
  app.add_option("--mu", c.mu, "shift length, a multiple of h (difference model)");
  app.add_option("--delta", c.delta, "identity shift (riesz model)");
  app.add_option("--a11", c.a11, "leading coefficient: a11, or a for riesz/difference");
  app.add_option("--rho", c.rho, "lower-order coefficient: rho, or b for difference");
  app.add_option("--gamma-a", c.gamma_a, "lower bound constant for the riesz coefficient");
  app.add_option("--nu", c.nu, "N = nu I (difference model)");
  app.add_option("--matrix-csv", c.matrix_csv, "real matrix for custom-matrix");
  app.add_option("--angles", c.angles, "angles for the numerical range")->check(CLI::Range(16, 4096));
}

int fail_config(const ConfigError& e)
{
  std::cerr << "invalid --" << e.field << ": " << e.message << '\n';
  return bad_config;
}

int cmd_build(RunConfig cfg, const std::string& out)
{
  try {
    cfg.resolve();
    cfg.validate();
  } catch (const ConfigError& e) {
    return fail_config(e);
  }
  std::optional<Model> m;
  try {
    m = build_model(cfg);
  } catch (const ConfigError& e) {
    return fail_config(e);
  } catch (const error& e) {
    std::cerr << "assembly failed: " << e.what() << '\n';
    return assembly_failed;
  }
  write_file(out, build_artifact(cfg, *m).dump(1) + "\n");
  return ok;
}

int cmd_verify(RunConfig cfg, const std::string& artifact, const std::string& suite_text, std::uint64_t seed,
               const std::string& report)
{
  std::set<std::string> suites;
  std::optional<ComplexMatrix> stored;
  try {
    suites = parse_suite(suite_text);
    if (!artifact.empty()) {
      std::ifstream in(artifact);
      if (!in)
        throw ConfigError{"artifact", "cannot open '" + artifact + "'"};
      json j;
      try {
        j = json::parse(in);
        if (j.at("schema").get<std::string>() != artifact_schema)
          throw ConfigError{"artifact", "unsupported schema"};
        cfg = RunConfig::from_json(j.at("config"));
        stored = matrix_from_json(j.at("operator"));
      } catch (const json::exception& e) {
        throw ConfigError{"artifact", std::string("malformed artifact: ") + e.what()};
      } catch (const std::out_of_range& e) {
        throw ConfigError{"artifact", e.what()};
      }
    }
    cfg.resolve();
    cfg.validate();
  } catch (const ConfigError& e) {
    return fail_config(e);
  }

  std::optional<Model> m;
  try {
    m = build_model(cfg);
    if (stored) {
      if (stored->rows() != m->L.matrix.rows() || stored->cols() != m->L.matrix.cols())
        throw error(ErrorKind::InvalidArgument, "artifact operator does not match its config");
      m->L.matrix = *stored;
    }
  } catch (const ConfigError& e) {
    return fail_config(e);
  } catch (const error& e) {
    std::cerr << "assembly failed: " << e.what() << '\n';
    return assembly_failed;
  }

  Runner r;
  SpectrumOutput spectrum;
  if (suites.count("semigroup"))
    semigroup_suite(r, *m, seed);
  if (suites.count("fracpow"))
    fracpow_suite(r, cfg, *m);
  if (suites.count("class"))
    class_suite(r, *m);
  if (suites.count("spectrum"))
    spectrum_suite(r, cfg, *m, seed, spectrum);

  json doc;
  doc["schema"] = report_schema;
  doc["config"] = cfg.to_json();
  doc["seed"] = seed;
  doc["suites"] = std::vector<std::string>(suites.begin(), suites.end());
  json checks = json::array();
  int pass = 0, fail = 0, info = 0, errored = 0;
  for (const Check& c : r.checks) {
    checks.push_back({{"name", c.name}, {"paper_anchor", c.anchor}, {"status", c.status}, {"numbers", c.numbers}});
    pass += c.status == "pass";
    fail += c.status == "fail";
    info += c.status == "info";
    errored += c.status == "error";
  }
  doc["checks"] = std::move(checks);
  doc["summary"] = {{"pass", pass}, {"fail", fail}, {"info", info}, {"error", errored}};
  if (suites.count("spectrum")) {
    const std::string spec_path = sidecar_path(report, "_spectrum.csv");
    const std::string range_path = sidecar_path(report, "_range.csv");
    write_file(spec_path, spectrum_csv(spectrum.eigenvalues));
    write_file(range_path, range_csv(spectrum.range));
    doc["sidecars"] = {{"spectrum", std::filesystem::path(spec_path).filename().string()},
                       {"range", std::filesystem::path(range_path).filename().string()}};
  }
  write_file(report, doc.dump(1) + "\n");

  for (const Check& c : r.checks)
    std::cout << c.status << '\t' << c.name << '\n';
  if (errored > 0)
    return check_errored;
  return fail > 0 ? check_failed : ok;
}

} // namespace

int main(int argc, char** argv)
{
  CLI::App app{"fracspec: fractional operator powers and spectral diagnostics"};
  app.require_subcommand(1);

  RunConfig build_cfg, verify_cfg;
  std::string out, artifact, report, suite = "full";
  std::uint64_t seed = 0;

  CLI::App* build = app.add_subcommand("build", "assemble a model operator and write an artifact");
  add_model_options(*build, build_cfg);
  build->add_option("--out", out, "artifact path")->required();
  build->add_option("--seed", seed, "accepted for symmetry; assembly is deterministic");

  CLI::App* verify = app.add_subcommand("verify", "run verification suites and write a report");
  add_model_options(*verify, verify_cfg);
  verify->add_option("--artifact", artifact, "artifact from build; overrides the model options");
  verify->add_option("--suite", suite, "comma list of semigroup, fracpow, spectrum, class, full");
  verify->add_option("--seed", seed, "seed for probe vectors");
  verify->add_option("--report", report, "report path")->required();

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return bad_config;
  }

  try {
    if (*build)
      return cmd_build(build_cfg, out);
    return cmd_verify(verify_cfg, artifact, suite, seed, report);
  } catch (const std::exception& e) {
    std::cerr << "fracspec_cli: " << e.what() << '\n';
    return check_errored;
  }
}
