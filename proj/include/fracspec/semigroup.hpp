#ifndef FRACSPEC_SEMIGROUP_HPP
#define FRACSPEC_SEMIGROUP_HPP

// The shift, Gauss and Poisson-difference contraction semigroups on a grid.
// Generators are returned with the accretive sign: T_t = exp(-tA).

#include <cmath>
#include <cstdint>
#include <numbers>
#include <random>
#include <string>
#include <vector>

#include "fracspec/discretize.hpp"
#include "fracspec/grid.hpp"
#include "fracspec/numcore.hpp"

namespace fracspec {

enum class SemigroupKind { Shift, Gauss, PoissonDifference };

struct SemigroupSpec {
  SemigroupKind kind;
  Grid1D grid;
  int direction = 1;   // Shift: +1 moves values toward a (T_t f(x) = f(x + t)), -1 toward b
  double lambda = 1.0; // PoissonDifference jump rate
  double mu = 0.0;     // PoissonDifference jump length

  static SemigroupSpec shift(const Grid1D& g, int direction = 1)
  {
    if (direction != 1 && direction != -1)
      throw error(ErrorKind::InvalidArgument, "shift direction must be +1 or -1");
    return SemigroupSpec{SemigroupKind::Shift, g, direction, 1.0, 0.0};
  }

  static SemigroupSpec gauss(const Grid1D& g) { return SemigroupSpec{SemigroupKind::Gauss, g, 1, 1.0, 0.0}; }

  static SemigroupSpec poisson(const Grid1D& g, double lambda, double mu)
  {
    if (!(lambda > 0.0) || !(mu > 0.0))
      throw error(ErrorKind::NegativeParameter, "Poisson semigroup needs lambda > 0 and mu > 0");
    return SemigroupSpec{SemigroupKind::PoissonDifference, g, 1, lambda, mu};
  }

  /// mu / h as an integer; IncommensurateShift unless it is one within 1e-9.
  Eigen::Index shift_cells() const
  {
    const double r = mu / grid.h();
    const double k = std::round(r);
    if (k < 1.0 || std::abs(r - k) > 1e-9 * std::max(1.0, r))
      throw error(ErrorKind::IncommensurateShift,
                  "mu / h = " + std::to_string(r) + " is not a positive integer");
    return static_cast<Eigen::Index>(k);
  }
};

namespace detail {

inline void require_on_grid(const SemigroupSpec& s, const GridFunction& f)
{
  if (!(f.grid == s.grid))
    throw error(ErrorKind::InvalidArgument, "grid function lives on a different grid");
}

/// Values of the zero-extended interpolant at node index i + offset (fractional).
inline complex sample_shifted(const ComplexVector& v, Eigen::Index i, double offset)
{
  const double pos = static_cast<double>(i) + offset;
  const double fl = std::floor(pos);
  const double frac = pos - fl;
  const auto at = [&](double p) -> complex {
    // node indices -1 and n are the endpoints, where the function vanishes
    const auto k = static_cast<Eigen::Index>(p);
    if (p < 0.0 || k >= v.size())
      return 0.0;
    return v[k];
  };
  if (frac == 0.0)
    return at(fl);
  return (1.0 - frac) * at(fl) + frac * at(fl + 1.0);
}

} // namespace detail

/// Number of Poisson terms K such that the mass beyond K is below tol.
inline std::size_t poisson_truncation_index(double lt, double tol)
{
  if (lt == 0.0)
    return 0;
  std::size_t k = 0;
  double log_w = -lt; // log of the k-th Poisson weight
  while (true) {
    const double next = log_w + std::log(lt) - std::log(static_cast<double>(k + 1));
    // sum_{j>k} w_j <= w_{k+1} / (1 - lt/(k+2)) once k + 2 > lt
    if (static_cast<double>(k) + 2.0 > lt) {
      const double bound = std::exp(next) / (1.0 - lt / (static_cast<double>(k) + 2.0));
      if (bound < tol)
        return k;
    }
    log_w = next;
    ++k;
  }
}

inline constexpr double poisson_tail_tolerance = 1e-14;

/// T_t f.
inline GridFunction apply(const SemigroupSpec& s, double t, const GridFunction& f)
{
  detail::require_on_grid(s, f);
  if (!(t >= 0.0) || !std::isfinite(t))
    throw error(ErrorKind::NegativeTime, "semigroup time must be finite and >= 0");
  if (t == 0.0)
    return f;
  const Eigen::Index n = s.grid.n();
  const double h = s.grid.h();
  ComplexVector out = ComplexVector::Zero(n);
  switch (s.kind) {
  case SemigroupKind::Shift: {
    const double offset = s.direction * t / h;
    for (Eigen::Index i = 0; i < n; ++i)
      out[i] = detail::sample_shifted(f.values, i, offset);
    break;
  }
  case SemigroupKind::Gauss: {
    if (t < h * h / 4.0)
      throw error(ErrorKind::UnderResolvedTime,
                  "Gauss kernel under-resolved for t < h^2/4 = " + std::to_string(h * h / 4.0));
    const double c = h / std::sqrt(2.0 * std::numbers::pi * t);
    RealVector kernel(n);
    for (Eigen::Index k = 0; k < n; ++k) {
      const double d = static_cast<double>(k) * h;
      kernel[k] = c * std::exp(-d * d / (2.0 * t));
    }
    for (Eigen::Index i = 0; i < n; ++i) {
      complex acc = 0.0;
      for (Eigen::Index j = 0; j < n; ++j)
        acc += kernel[std::abs(i - j)] * f.values[j];
      out[i] = acc;
    }
    break;
  }
  case SemigroupKind::PoissonDifference: {
    const Eigen::Index m = s.shift_cells();
    const double lt = s.lambda * t;
    const std::size_t kmax = poisson_truncation_index(lt, poisson_tail_tolerance);
    double log_w = -lt;
    for (std::size_t k = 0; k <= kmax; ++k) {
      if (k > 0)
        log_w += std::log(lt) - std::log(static_cast<double>(k));
      const auto shift = static_cast<Eigen::Index>(k) * m;
      if (shift >= n)
        break; // the rest of the series only sees the zero extension
      const double w = std::exp(log_w);
      out.tail(n - shift) += w * f.values.head(n - shift);
    }
    break;
  }
  }
  return GridFunction(s.grid, std::move(out));
}

/// The accretive generator A with T_t = exp(-tA).
inline OperatorMatrix generator_matrix(const SemigroupSpec& s)
{
  const Eigen::Index n = s.grid.n();
  const double h = s.grid.h();
  ComplexMatrix a = ComplexMatrix::Zero(n, n);
  switch (s.kind) {
  case SemigroupKind::Shift:
    // A f = -s f' upwind toward the direction of travel
    for (Eigen::Index i = 0; i < n; ++i) {
      a(i, i) = 1.0 / h;
      const Eigen::Index j = i + s.direction;
      if (j >= 0 && j < n)
        a(i, j) = -1.0 / h;
    }
    break;
  case SemigroupKind::Gauss:
    a = -0.5 * second_derivative(s.grid).matrix;
    break;
  case SemigroupKind::PoissonDifference: {
    const Eigen::Index m = s.shift_cells();
    for (Eigen::Index i = 0; i < n; ++i) {
      a(i, i) = s.lambda;
      if (i - m >= 0)
        a(i, i - m) = -s.lambda;
    }
    break;
  }
  }
  return OperatorMatrix(s.grid, std::move(a));
}

/// J_n f = n (nI + A)^{-1} f for the Gauss semigroup through the closed kernel
/// sqrt(n/2) int f(tau) exp(-sqrt(2n)|x - tau|) dtau, integrated exactly against
/// the zero-extended interpolant.
inline GridFunction yosida_resolvent(const SemigroupSpec& s, double n_param, const GridFunction& f)
{
  detail::require_on_grid(s, f);
  if (s.kind != SemigroupKind::Gauss)
    throw error(ErrorKind::InvalidArgument, "closed Yosida kernel is available for the Gauss semigroup");
  if (!(n_param > 0.0) || !std::isfinite(n_param))
    throw error(ErrorKind::NegativeParameter, "Yosida parameter must be positive");
  const Eigen::Index n = s.grid.n();
  const double h = s.grid.h();
  const double kappa = std::sqrt(2.0 * n_param);
  const double kh = kappa * h;
  const double scale = std::sqrt(n_param / 2.0);
  RealVector w(n);
  // hat centred on the evaluation point, then hats k cells away
  w[0] = scale * 2.0 / kappa * (1.0 + std::expm1(-kh) / kh);
  const double hat = 4.0 * std::pow(std::sinh(0.5 * kh), 2) / (kappa * kh);
  for (Eigen::Index k = 1; k < n; ++k)
    w[k] = scale * hat * std::exp(-kh * static_cast<double>(k));
  ComplexVector out(n);
  for (Eigen::Index i = 0; i < n; ++i) {
    complex acc = 0.0;
    for (Eigen::Index j = 0; j < n; ++j)
      acc += w[std::abs(i - j)] * f.values[j];
    out[i] = acc;
  }
  return GridFunction(s.grid, std::move(out));
}

/// n (nI + A)^{-1} f by a linear solve with the generator matrix.
inline GridFunction yosida_resolvent_solve(const SemigroupSpec& s, double n_param, const GridFunction& f)
{
  detail::require_on_grid(s, f);
  if (!(n_param > 0.0) || !std::isfinite(n_param))
    throw error(ErrorKind::NegativeParameter, "Yosida parameter must be positive");
  const ComplexMatrix a = generator_matrix(s).matrix;
  const ComplexMatrix m = n_param * ComplexMatrix::Identity(a.rows(), a.cols()) + a;
  return GridFunction(s.grid, solve(m, n_param * f.values));
}

struct AxiomReport {
  double law_defect = 0.0;       // max ||T_s T_t f - T_{s+t} f|| / ||f||
  double identity_defect = 0.0;  // ||T_0 f - f||, exactly 0 when T_0 = I
  double contraction_max = 0.0;  // max ||T_t f|| / ||f|| over the probes
  std::vector<double> continuity_times;
  std::vector<double> continuity_modulus; // ||T_t f - f|| / ||f||
  bool law_ok = false;
  bool contraction_ok = false;
  bool identity_ok = false;
  bool continuity_ok = false;
};

/// Checks the semigroup law over all pairs from times, contraction over
/// `probes` random vectors at every time, T_0 = I, and strong continuity on a
/// smooth bump. law_tolerance bounds the law defect.
inline AxiomReport verify_axioms(const SemigroupSpec& s, const std::vector<double>& times,
                                 double law_tolerance, std::uint64_t seed = 0, int probes = 100)
{
  for (double t : times)
    if (!(t >= 0.0) || !std::isfinite(t))
      throw error(ErrorKind::NegativeTime, "axiom times must be finite and >= 0");
  const Grid1D& g = s.grid;
  const double mid = 0.5 * (g.a() + g.b());
  const double width = 0.1 * g.length();
  const GridFunction bump = GridFunction::sample(g, [&](double x) {
    const double z = (x - mid) / width;
    return complex(std::exp(-z * z), 0.0);
  });
  const InnerProduct ip = g.inner_product();
  const double bump_norm = ip.norm(bump.values);

  AxiomReport r;
  r.identity_defect = ip.norm(apply(s, 0.0, bump).values - bump.values);
  r.identity_ok = r.identity_defect == 0.0;

  for (double a : times)
    for (double b : times) {
      const auto lhs = apply(s, a, apply(s, b, bump));
      const auto rhs = apply(s, a + b, bump);
      r.law_defect = std::max(r.law_defect, ip.norm(lhs.values - rhs.values) / bump_norm);
    }
  r.law_ok = r.law_defect <= law_tolerance;

  std::mt19937_64 rng(seed);
  std::normal_distribution<double> normal;
  for (int p = 0; p < probes; ++p) {
    ComplexVector v(g.n());
    for (Eigen::Index i = 0; i < g.n(); ++i)
      v[i] = complex(normal(rng), normal(rng));
    const GridFunction f(g, v);
    const double fn = ip.norm(v);
    for (double t : times)
      r.contraction_max = std::max(r.contraction_max, ip.norm(apply(s, t, f).values) / fn);
  }
  r.contraction_ok = r.contraction_max <= 1.0 + 1e-10;

  const double floor_t = s.kind == SemigroupKind::Gauss ? g.h() * g.h() / 4.0 : 0.0;
  for (double t = 1e-1; t >= 1e-4; t /= 10.0) {
    if (t < floor_t)
      break;
    r.continuity_times.push_back(t);
    r.continuity_modulus.push_back(ip.norm(apply(s, t, bump).values - bump.values) / bump_norm);
  }
  r.continuity_ok = !r.continuity_modulus.empty();
  for (std::size_t i = 1; i < r.continuity_modulus.size(); ++i)
    if (r.continuity_modulus[i] > r.continuity_modulus[i - 1] * (1.0 + 1e-12))
      r.continuity_ok = false;
  if (!r.continuity_modulus.empty() && r.continuity_modulus.back() > 0.1)
    r.continuity_ok = false;
  return r;
}

} // namespace fracspec

#endif // FRACSPEC_SEMIGROUP_HPP
