#ifndef FRACSPEC_DISCRETIZE_HPP
#define FRACSPEC_DISCRETIZE_HPP

// Matrix realizations of the concrete one-dimensional operators.
//
// All fractional operators use product integration: the grid function is
// replaced by its piecewise-linear interpolant (zero at the endpoints unless
// an EdgeRule says otherwise) and the singular kernel is integrated exactly
// against each linear piece.

#include <cmath>
#include <numbers>
#include <string>

#include "fracspec/grid.hpp"
#include "fracspec/numcore.hpp"

namespace fracspec {

/// How the interpolant treats the endpoint value on the boundary cell.
enum class EdgeRule {
  Zero,        // f(a) = f(b) = 0, the zero-extension convention
  Extrapolate, // f(a) = 2 f_1 - f_2 (and mirrored at b), exact on linear data
};

namespace detail {

inline void require_alpha(double alpha, double lo, double hi, bool hi_closed, const char* what)
{
  const bool ok = alpha > lo && (hi_closed ? alpha <= hi : alpha < hi) && std::isfinite(alpha);
  if (!ok)
    throw error(ErrorKind::BadAlpha, std::string(what) + ": order " + std::to_string(alpha) +
                                         " outside the admissible range");
}

/// Product-trapezoidal weight for an interior node k cells away from the
/// evaluation point, in units of h^a / Gamma(a + 2).
inline double pt_weight(Eigen::Index k, double a)
{
  if (k == 0)
    return 1.0;
  const double kk = static_cast<double>(k);
  return std::pow(kk + 1.0, a + 1.0) - 2.0 * std::pow(kk, a + 1.0) + std::pow(kk - 1.0, a + 1.0);
}

/// Weight of the boundary node at distance i cells (i >= 1), same units.
inline double pt_edge_weight(Eigen::Index i, double a)
{
  const double ii = static_cast<double>(i);
  return std::pow(ii - 1.0, a + 1.0) - (ii - 1.0 - a) * std::pow(ii, a);
}

/// Left-sided Riemann-Liouville integral of any order a > 0.
inline ComplexMatrix left_integral_matrix(const Grid1D& grid, double a, EdgeRule edge)
{
  const Eigen::Index n = grid.n();
  const double scale = std::pow(grid.h(), a) / std::tgamma(a + 2.0);
  ComplexMatrix m = ComplexMatrix::Zero(n, n);
  for (Eigen::Index i = 0; i < n; ++i) {
    for (Eigen::Index j = 0; j <= i; ++j)
      m(i, j) = scale * pt_weight(i - j, a);
    if (edge == EdgeRule::Extrapolate) {
      const double e = scale * pt_edge_weight(i + 1, a);
      m(i, 0) += 2.0 * e;
      m(i, 1) -= e;
    }
  }
  return m;
}

inline ComplexMatrix flip(const ComplexMatrix& m)
{
  return m.colwise().reverse().rowwise().reverse();
}

} // namespace detail

/// (1/Gamma(alpha)) int_a^x f(t) (x - t)^{alpha-1} dt, alpha in (0, 1].
inline OperatorMatrix rl_integral_left(const Grid1D& grid, double alpha,
                                       EdgeRule edge = EdgeRule::Zero)
{
  detail::require_alpha(alpha, 0.0, 1.0, true, "rl_integral_left");
  return OperatorMatrix(grid, detail::left_integral_matrix(grid, alpha, edge));
}

/// (1/Gamma(alpha)) int_x^b f(t) (t - x)^{alpha-1} dt, alpha in (0, 1].
inline OperatorMatrix rl_integral_right(const Grid1D& grid, double alpha,
                                        EdgeRule edge = EdgeRule::Zero)
{
  detail::require_alpha(alpha, 0.0, 1.0, true, "rl_integral_right");
  return OperatorMatrix(grid, detail::flip(detail::left_integral_matrix(grid, alpha, edge)));
}

struct MarchaudOptions {
  /// Truncation epsilon in cells. 0 keeps the singular cell, integrated
  /// exactly on the linear interpolant; m >= 1 drops [x, x + m h].
  int truncation_cells = 0;
};

/// Right-sided Marchaud derivative
///   (alpha/Gamma(1-alpha)) int_x^b [f(x) - f(t)] (t-x)^{-alpha-1} dt + f(x) (b-x)^{-alpha}/Gamma(1-alpha)
/// with f vanishing at b. With truncation_cells = m >= 1 the integral starts at
/// x + m h, and nodes closer than m h to b take the capped value
/// f(x) (eps^{-alpha} - (b-x)^{-alpha}) / alpha.
inline OperatorMatrix marchaud_right_derivative(const Grid1D& grid, double alpha,
                                                MarchaudOptions opts = {})
{
  detail::require_alpha(alpha, 0.0, 1.0, false, "marchaud_right_derivative");
  if (opts.truncation_cells < 0)
    throw error(ErrorKind::InvalidArgument, "marchaud: truncation_cells must be >= 0");
  const Eigen::Index n = grid.n();
  const double h = grid.h();
  const double g1 = std::tgamma(1.0 - alpha);
  const Eigen::Index m = opts.truncation_cells;
  const double eps = std::max<Eigen::Index>(m, 1) * h;
  // int over [k h, (k+1) h] of s^{-alpha-1} times the basis that is 1 at k h
  // (lower) or at (k+1) h (upper), for k >= 1.
  const auto moments = [&](Eigen::Index k) {
    const double s0 = static_cast<double>(k) * h, s1 = s0 + h;
    const double i0 = (std::pow(s0, -alpha) - std::pow(s1, -alpha)) / alpha;
    const double i1 = (std::pow(s1, 1.0 - alpha) - std::pow(s0, 1.0 - alpha)) / (1.0 - alpha);
    const double upper = (i1 - s0 * i0) / h;
    const double lower = i0 - upper;
    return std::pair{lower, upper};
  };
  ComplexMatrix d = ComplexMatrix::Zero(n, n);
  for (Eigen::Index i = 0; i < n; ++i) {
    const Eigen::Index remaining = n - i; // cells between node i and b
    if (m >= 1 && remaining < m) {
      const double dist = static_cast<double>(remaining) * h;
      d(i, i) = (std::pow(eps, -alpha) - std::pow(dist, -alpha)) / alpha;
      continue;
    }
    const Eigen::Index start = std::max<Eigen::Index>(m, 1);
    double diag = std::pow(static_cast<double>(start) * h, -alpha);
    if (m == 0)
      diag += alpha * std::pow(h, -alpha) / (1.0 - alpha);
    d(i, i) += diag / g1;
    if (m == 0 && i + 1 < n)
      d(i, i + 1) -= alpha * std::pow(h, -alpha) / (1.0 - alpha) / g1;
    for (Eigen::Index k = start; k < remaining; ++k) {
      const auto [lower, upper] = moments(k);
      if (i + k < n)
        d(i, i + k) -= alpha * lower / g1;
      if (i + k + 1 < n)
        d(i, i + k + 1) -= alpha * upper / g1;
    }
  }
  return OperatorMatrix(grid, std::move(d));
}

/// B_beta = 1 / (2 Gamma(beta) cos(beta pi / 2)).
inline double riesz_constant(double beta)
{
  if (!(beta > 0.0 && beta < 2.0) || beta == 1.0)
    throw error(ErrorKind::BadAlpha, "riesz constant needs beta in (0,1) or (1,2)");
  return 1.0 / (2.0 * std::tgamma(beta) * std::cos(beta * std::numbers::pi / 2.0));
}

/// int f(s) |s - x|^{beta-1} ds on the zero-extended interpolant (no constant).
inline ComplexMatrix power_kernel_matrix(const Grid1D& grid, double beta)
{
  if (!(beta > 0.0))
    throw error(ErrorKind::BadAlpha, "power kernel needs beta > 0");
  const Eigen::Index n = grid.n();
  const double scale = std::pow(grid.h(), beta) / (beta * (beta + 1.0));
  RealVector w(n);
  w[0] = 2.0 * scale;
  for (Eigen::Index k = 1; k < n; ++k) {
    const double kk = static_cast<double>(k);
    w[k] = scale * (std::pow(kk + 1.0, beta + 1.0) - 2.0 * std::pow(kk, beta + 1.0) +
                    std::pow(kk - 1.0, beta + 1.0));
  }
  ComplexMatrix m(n, n);
  for (Eigen::Index i = 0; i < n; ++i)
    for (Eigen::Index j = 0; j < n; ++j)
      m(i, j) = w[std::abs(i - j)];
  return m;
}

/// Riesz potential B_beta int f(s) |s - x|^{beta-1} ds over the grid window.
inline OperatorMatrix riesz_potential(const Grid1D& grid, double beta)
{
  const double b = riesz_constant(beta);
  return OperatorMatrix(grid, b * power_kernel_matrix(grid, beta));
}

/// Centered second difference with Dirichlet ends.
inline OperatorMatrix second_derivative(const Grid1D& grid)
{
  const Eigen::Index n = grid.n();
  const double s = 1.0 / (grid.h() * grid.h());
  ComplexMatrix m = ComplexMatrix::Zero(n, n);
  for (Eigen::Index i = 0; i < n; ++i) {
    m(i, i) = -2.0 * s;
    if (i > 0)
      m(i, i - 1) = s;
    if (i + 1 < n)
      m(i, i + 1) = s;
  }
  return OperatorMatrix(grid, std::move(m));
}

inline OperatorMatrix multiply(const Grid1D& grid, const RealVector& rho)
{
  if (rho.size() != grid.n())
    throw error(ErrorKind::InvalidArgument, "multiply: coefficient length does not match the grid");
  return OperatorMatrix(grid, rho.cast<complex>().asDiagonal().toDenseMatrix());
}

inline OperatorMatrix multiply(const Grid1D& grid, const Coefficient& rho)
{
  return multiply(grid, rho.sample(grid));
}

/// -(a f')' with a sampled at the half nodes and Dirichlet ends; a > 0 required.
inline OperatorMatrix elliptic_1d(const Grid1D& grid, const Coefficient& a11)
{
  const Eigen::Index n = grid.n();
  const double h = grid.h();
  RealVector a(n + 1); // a(x_{i-1/2}), i = 0..n
  for (Eigen::Index k = 0; k <= n; ++k) {
    a[k] = a11(grid.a() + (static_cast<double>(k) + 0.5) * h);
    if (!(a[k] > 0.0))
      throw error(ErrorKind::CoefficientBoundViolated,
                  "elliptic coefficient not positive at half node " + std::to_string(k));
  }
  ComplexMatrix m = ComplexMatrix::Zero(n, n);
  const double s = 1.0 / (h * h);
  for (Eigen::Index i = 0; i < n; ++i) {
    m(i, i) = (a[i] + a[i + 1]) * s;
    if (i > 0)
      m(i, i - 1) = -a[i] * s;
    if (i + 1 < n)
      m(i, i + 1) = -a[i + 1] * s;
  }
  return OperatorMatrix(grid, std::move(m));
}

/// (a f'')'' assembled as D2 diag(a) D2, so (Tf, g) = (a f'', g'') exactly.
/// Requires a(x) > gamma_a (1 + |x|)^5 at every node.
inline OperatorMatrix fourth_order_weighted(const Grid1D& grid, const Coefficient& a,
                                            double gamma_a)
{
  if (!(gamma_a > 0.0))
    throw error(ErrorKind::InvalidArgument, "fourth_order_weighted: gamma_a must be positive");
  const RealVector av = a.sample(grid);
  for (Eigen::Index i = 0; i < grid.n(); ++i) {
    const double bound = gamma_a * std::pow(1.0 + std::abs(grid.node(i)), 5.0);
    if (!(av[i] > bound))
      throw error(ErrorKind::CoefficientBoundViolated,
                  "fourth-order coefficient below gamma_a (1+|x|)^5 at node " + std::to_string(i));
  }
  const ComplexMatrix d2 = second_derivative(grid).matrix;
  return OperatorMatrix(grid, d2.transpose() * av.cast<complex>().asDiagonal() * d2);
}

/// Gram matrix P of a discrete energy norm, ||f||_+^2 = f^H P f.
struct NormMatrix {
  ComplexMatrix gram;

  explicit NormMatrix(ComplexMatrix p) : gram(std::move(p))
  {
    detail::require_square(gram, "NormMatrix");
    if ((gram - gram.adjoint()).norm() > 1e-12 * gram.norm())
      throw error(ErrorKind::NotHermitian, "norm matrix must be Hermitian");
  }

  double norm(const ComplexVector& f) const
  {
    return std::sqrt(std::max(0.0, (f.adjoint() * gram * f)(0).real()));
  }
};

/// Discrete H^1_0 norm: ||f'||^2 with trapezoidal weights.
inline NormMatrix h1_0_norm(const Grid1D& grid)
{
  return NormMatrix(grid.h() * elliptic_1d(grid, Coefficient::constant(1.0)).matrix);
}

/// Discrete weighted H^{2,lambda}_0 norm: ||f||^2 + ||f''||^2 with weight (1+|x|)^lambda.
inline NormMatrix weighted_h2_norm(const Grid1D& grid, double lambda)
{
  const Eigen::Index n = grid.n();
  RealVector w(n);
  for (Eigen::Index i = 0; i < n; ++i)
    w[i] = std::pow(1.0 + std::abs(grid.node(i)), lambda);
  const ComplexMatrix d2 = second_derivative(grid).matrix;
  ComplexMatrix p = ComplexMatrix::Identity(n, n) +
                    d2.adjoint() * w.cast<complex>().asDiagonal() * d2;
  return NormMatrix(grid.h() * p);
}

} // namespace fracspec

#endif // FRACSPEC_DISCRETIZE_HPP
