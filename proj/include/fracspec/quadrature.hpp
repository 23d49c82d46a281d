#ifndef FRACSPEC_QUADRATURE_HPP
#define FRACSPEC_QUADRATURE_HPP

#include <cmath>
#include <numbers>
#include <string>
#include <vector>

#include "fracspec/error.hpp"

namespace fracspec {

struct QuadratureRule {
  std::vector<double> nodes;
  std::vector<double> weights;
};

/// n-point Gauss-Legendre rule on [0, 1] (Newton on P_n).
inline QuadratureRule gauss_legendre(int n)
{
  if (n < 1)
    throw error(ErrorKind::InvalidArgument, "gauss_legendre needs at least one node");
  QuadratureRule r;
  r.nodes.resize(n);
  r.weights.resize(n);
  for (int i = 0; i < (n + 1) / 2; ++i) {
    double x = std::cos(std::numbers::pi * (i + 0.75) / (n + 0.5));
    double dp = 0.0;
    for (int it = 0; it < 100; ++it) {
      double p0 = 1.0, p1 = x;
      for (int k = 2; k <= n; ++k) {
        const double p2 = ((2.0 * k - 1.0) * x * p1 - (k - 1.0) * p0) / k;
        p0 = p1;
        p1 = p2;
      }
      if (n == 1)
        p0 = 1.0;
      dp = n * (x * p1 - p0) / (x * x - 1.0);
      const double dx = p1 / dp;
      x -= dx;
      if (std::abs(dx) < 1e-16)
        break;
    }
    // recompute the derivative at the converged node
    double p0 = 1.0, p1 = x;
    for (int k = 2; k <= n; ++k) {
      const double p2 = ((2.0 * k - 1.0) * x * p1 - (k - 1.0) * p0) / k;
      p0 = p1;
      p1 = p2;
    }
    dp = n == 1 ? 1.0 : n * (x * p1 - p0) / (x * x - 1.0);
    const double w = 2.0 / ((1.0 - x * x) * dp * dp);
    r.nodes[i] = 0.5 * (1.0 - x);
    r.nodes[n - 1 - i] = 0.5 * (1.0 + x);
    r.weights[i] = r.weights[n - 1 - i] = 0.5 * w;
  }
  return r;
}

/// Composite Gauss-Legendre on [0, 1] with dyadic panels [2^{-k-1}, 2^{-k}]
/// refined toward 0, the last panel being [0, 2^{-(panels-1)}].
inline QuadratureRule graded_gauss(int panels, int per_panel)
{
  if (panels < 1 || per_panel < 1)
    throw error(ErrorKind::InvalidArgument, "graded_gauss needs positive panel and node counts");
  const QuadratureRule base = gauss_legendre(per_panel);
  QuadratureRule r;
  for (int k = 0; k < panels; ++k) {
    const double hi = std::ldexp(1.0, -k);
    const double lo = k + 1 == panels ? 0.0 : 0.5 * hi;
    for (int j = 0; j < per_panel; ++j) {
      r.nodes.push_back(lo + (hi - lo) * base.nodes[j]);
      r.weights.push_back((hi - lo) * base.weights[j]);
    }
  }
  return r;
}

/// Tanh-sinh quadrature on [0, 1]. The integrand receives (u, 1 - u) with
/// both computed without cancellation, so endpoint singularities of the form
/// u^a (1-u)^b are handled. Levels halve the step until two consecutive
/// estimates agree to rel_tol.
template <typename F>
double tanh_sinh_01(F&& f, double rel_tol = 1e-14, int max_level = 12)
{
  constexpr double half_pi = std::numbers::pi / 2.0;
  constexpr double t_max = 6.5;
  const auto term = [&](double t) {
    const double s = half_pi * std::sinh(t);
    const double e = std::exp(-2.0 * std::abs(s));
    const double small = e / (1.0 + e); // the endpoint-side coordinate
    const double large = 1.0 / (1.0 + e);
    const double u = s < 0.0 ? small : large;
    const double v = s < 0.0 ? large : small;
    const double c = 1.0 / std::cosh(s);
    const double w = half_pi * std::cosh(t) * 0.5 * c * c;
    if (u <= 0.0 || v <= 0.0 || w == 0.0)
      return 0.0;
    return w * f(u, v);
  };
  double step = 1.0;
  double sum = term(0.0);
  for (double t = step; t <= t_max; t += step)
    sum += term(t) + term(-t);
  double estimate = sum * step;
  for (int level = 1; level <= max_level; ++level) {
    step *= 0.5;
    double added = 0.0;
    for (double t = step; t <= t_max; t += 2.0 * step)
      added += term(t) + term(-t);
    sum += added;
    const double next = sum * step;
    if (level >= 3 && std::abs(next - estimate) <= rel_tol * std::abs(next))
      return next;
    estimate = next;
  }
  throw error(ErrorKind::QuadratureNotConverged,
              "tanh-sinh did not reach relative tolerance " + std::to_string(rel_tol));
}

} // namespace fracspec

#endif // FRACSPEC_QUADRATURE_HPP
