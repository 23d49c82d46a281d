#ifndef FRACSPEC_FRACPOW_HPP
#define FRACSPEC_FRACPOW_HPP

// Fractional powers of accretive matrices.
//
// A^{alpha}  = (sin(alpha pi)/pi) int_0^inf l^{alpha-1} (l + A)^{-1} A dl
// A^{-alpha} = (sin(alpha pi)/pi) int_0^inf l^{-alpha}  (l + A)^{-1}   dl
//
// Both are of the form int_0^inf l^{beta-1} (l + A)^{-1} X dl. The integral is
// split at l = s. On (0, s) we set l = s u^{1/beta}; on (s, inf) we set
// l = s / v and v = w^{1/(1-beta)}. Both pieces become integrals over [0, 1]
// with bounded integrands:
//   (s^beta / beta)     (l(u) I + A)^{-1} X du
//   (s^beta / (1-beta)) (s I + v(w) A)^{-1} X dw
// each evaluated with Gauss-Legendre on dyadic panels graded toward 0.

#include <cmath>
#include <numbers>
#include <string>
#include <vector>

#include <Eigen/SparseCore>
#include <Eigen/SparseLU>

#include "fracspec/discretize.hpp"
#include "fracspec/grid.hpp"
#include "fracspec/numcore.hpp"
#include "fracspec/parallel.hpp"
#include "fracspec/quadrature.hpp"
#include "fracspec/semigroup.hpp"

namespace fracspec {

struct BalakrishnanConfig {
  double alpha = 0.5;
  double split = 1.0;
  int nodes_inner = 200;
  int nodes_outer = 200;
  double tolerance = 1e-8; // relative change allowed when the nodes are doubled

  void validate() const
  {
    if (!(alpha > 0.0 && alpha < 1.0))
      throw error(ErrorKind::BadAlpha, "Balakrishnan alpha must lie in (0, 1)");
    if (!(split > 0.0) || !std::isfinite(split))
      throw error(ErrorKind::InvalidArgument, "Balakrishnan split must be positive");
    if (nodes_inner < 16 || nodes_outer < 16)
      throw error(ErrorKind::InvalidArgument, "Balakrishnan node counts must be >= 16");
  }
};

namespace detail {

inline constexpr int nodes_per_panel = 10;

/// One quadrature node: contributes coef * (c I + d A)^{-1} X.
struct ResolventNode {
  double c;
  double d;
  double coef;
};

/// Bounds on where (l + A)^{-1} varies: the smallest eigenvalue of the
/// Hermitian part (a lower bound on every singular value) and ||A||_F.
struct SpectralWindow {
  double lo;
  double hi;
};

/// Nodes for (sin(alpha pi)/pi) int_0^inf l^{beta-1} (l + A)^{-1} X dl split at s.
/// Inside the window [lo e^{-3}, hi e^3] each piece uses panels of equal width
/// in log l; beyond it the resolvent is smooth and the substitutions
/// l = l0 u^{1/beta} (toward 0) and l = l1 / w^{1/(1-beta)} (toward infinity)
/// finish the piece on dyadic panels. inner / outer node counts fix the panel
/// numbers; refine multiplies the nodes per panel.
inline std::vector<ResolventNode> balakrishnan_nodes(double beta, double split, int inner, int outer,
                                                     int refine, SpectralWindow win)
{
  constexpr double margin = 3.0;
  const int per = nodes_per_panel * refine;
  const QuadratureRule gl = gauss_legendre(per);
  std::vector<ResolventNode> out;
  const auto log_panels = [&](double x0, double x1, int panels) {
    const double width = (x1 - x0) / panels;
    for (int p = 0; p < panels; ++p)
      for (int j = 0; j < per; ++j) {
        const double l = std::exp(x0 + width * (p + gl.nodes[j]));
        out.push_back({l, 1.0, width * gl.weights[j] * std::pow(l, beta)});
      }
  };
  const auto split_panels = [](int total, bool has_log) {
    const int panels = std::max(1, total / nodes_per_panel);
    const int tail = has_log ? std::min(panels, std::max(2, panels / 5)) : panels;
    return std::pair{tail, panels - tail};
  };

  const double l0 = std::min(split, win.lo * std::exp(-margin));
  const auto [tail_in, log_in] = split_panels(inner, l0 < split);
  if (log_in > 0)
    log_panels(std::log(l0), std::log(split), log_in);
  const double base_in = log_in > 0 ? l0 : split;
  const QuadratureRule ri = graded_gauss(tail_in, per);
  for (std::size_t j = 0; j < ri.nodes.size(); ++j)
    out.push_back({base_in * std::pow(ri.nodes[j], 1.0 / beta), 1.0,
                   ri.weights[j] * std::pow(base_in, beta) / beta});

  const double l1 = std::max(split, win.hi * std::exp(margin));
  const auto [tail_out, log_out] = split_panels(outer, l1 > split);
  if (log_out > 0)
    log_panels(std::log(split), std::log(l1), log_out);
  const double base_out = log_out > 0 ? l1 : split;
  const QuadratureRule ro = graded_gauss(tail_out, per);
  for (std::size_t j = 0; j < ro.nodes.size(); ++j)
    out.push_back({base_out, std::pow(ro.nodes[j], 1.0 / (1.0 - beta)),
                   ro.weights[j] * std::pow(base_out, beta) / (1.0 - beta)});
  return out;
}

/// Solves (c I + d A) Y = B, sparse when A is mostly zeros.
class ShiftedSolver {
public:
  explicit ShiftedSolver(const ComplexMatrix& a) : a_(a)
  {
    const Eigen::Index n = a.rows();
    const auto nnz = (a.array() != complex(0.0)).count();
    sparse_ = n >= 64 && static_cast<double>(nnz) < 0.05 * static_cast<double>(n) * static_cast<double>(n);
    if (sparse_)
      sa_ = a.sparseView();
  }

  ComplexMatrix solve(double c, double d, const ComplexMatrix& rhs) const
  {
    const Eigen::Index n = a_.rows();
    if (!sparse_) {
      ComplexMatrix m = d * a_;
      m.diagonal().array() += c;
      return detail::checked_lu(m, default_tolerances).solve(rhs);
    }
    Eigen::SparseMatrix<complex> id(n, n);
    id.setIdentity();
    Eigen::SparseMatrix<complex> m = d * sa_ + c * id;
    m.makeCompressed();
    Eigen::SparseLU<Eigen::SparseMatrix<complex>> lu;
    lu.compute(m);
    if (lu.info() != Eigen::Success)
      throw error(ErrorKind::IllConditioned, "sparse factorization of the shifted matrix failed");
    ComplexMatrix y = lu.solve(rhs);
    if (lu.info() != Eigen::Success || !y.allFinite())
      throw error(ErrorKind::IllConditioned, "sparse solve of the shifted matrix failed");
    return y;
  }

private:
  ComplexMatrix a_;
  Eigen::SparseMatrix<complex> sa_;
  bool sparse_ = false;
};

inline ComplexMatrix resolvent_integral(const ShiftedSolver& solver, const ComplexMatrix& x,
                                        const std::vector<ResolventNode>& nodes)
{
  std::vector<ComplexMatrix> parts(nodes.size());
  parallel_for(nodes.size(), [&](std::size_t j) {
    parts[j] = nodes[j].coef * solver.solve(nodes[j].c, nodes[j].d, x);
  });
  ComplexMatrix sum = ComplexMatrix::Zero(x.rows(), x.cols());
  for (const auto& p : parts) // fixed order keeps the result reproducible
    sum += p;
  return sum;
}

/// Hermitian part checked against its own norm, which never exceeds ||A||.
/// Returns the window over which the resolvent varies.
inline SpectralWindow require_accretive(const ComplexMatrix& a, const InnerProduct& ip)
{
  const ComplexMatrix w = whiten(a, ip);
  const ComplexMatrix h = 0.5 * (w + w.adjoint());
  Eigen::SelfAdjointEigenSolver<ComplexMatrix> es(h, Eigen::EigenvaluesOnly);
  if (es.info() != Eigen::Success)
    throw error(ErrorKind::NoConvergence, "Hermitian eigensolver did not converge");
  const double m = es.eigenvalues()(0);
  const double scale = es.eigenvalues().cwiseAbs().maxCoeff();
  if (m < -1e-10 * scale)
    throw error(ErrorKind::NotAccretive,
                "Hermitian part has eigenvalue " + std::to_string(m) + " < 0");
  const double hi = std::max(w.norm(), 1e-300);
  return SpectralWindow{std::max(m, 1e-14 * hi), hi};
}

/// (sin(alpha pi)/pi) int l^{beta-1} (l + A)^{-1} X dl with node doubling check.
inline ComplexMatrix balakrishnan_integral(const ComplexMatrix& a, const InnerProduct& ip,
                                           const ComplexMatrix& x, double beta,
                                           const BalakrishnanConfig& cfg)
{
  cfg.validate();
  const SpectralWindow win = require_accretive(a, ip);
  const ShiftedSolver solver(a);
  const double pref = std::sin(cfg.alpha * std::numbers::pi) / std::numbers::pi;
  const ComplexMatrix coarse = resolvent_integral(
      solver, x, balakrishnan_nodes(beta, cfg.split, cfg.nodes_inner, cfg.nodes_outer, 1, win));
  const ComplexMatrix fine = resolvent_integral(
      solver, x, balakrishnan_nodes(beta, cfg.split, cfg.nodes_inner, cfg.nodes_outer, 2, win));
  const double change = relative_error(coarse, fine);
  if (!(change <= cfg.tolerance))
    throw error(ErrorKind::QuadratureNotConverged,
                "doubling the nodes changed the result by " + std::to_string(change));
  return pref * fine;
}

} // namespace detail

/// A^alpha by the Balakrishnan integral.
inline OperatorMatrix balakrishnan_power(const OperatorMatrix& a, const BalakrishnanConfig& cfg)
{
  const ComplexMatrix p = detail::balakrishnan_integral(a.matrix, a.ip, a.matrix, cfg.alpha, cfg);
  return OperatorMatrix(a.grid, p, a.ip);
}

inline ComplexMatrix balakrishnan_power(const ComplexMatrix& a, const InnerProduct& ip,
                                        const BalakrishnanConfig& cfg)
{
  return detail::balakrishnan_integral(a, ip, a, cfg.alpha, cfg);
}

/// A^alpha f without forming the full power.
inline ComplexVector balakrishnan_apply(const ComplexMatrix& a, const InnerProduct& ip,
                                        const ComplexVector& f, const BalakrishnanConfig& cfg)
{
  if (f.size() != a.rows())
    throw error(ErrorKind::InvalidArgument, "balakrishnan_apply: vector length does not match");
  const ComplexMatrix af = a * f;
  return detail::balakrishnan_integral(a, ip, af, cfg.alpha, cfg).col(0);
}

/// A^{-alpha} by the Balakrishnan integral.
inline OperatorMatrix negative_power(const OperatorMatrix& a, const BalakrishnanConfig& cfg)
{
  const ComplexMatrix id = ComplexMatrix::Identity(a.matrix.rows(), a.matrix.cols());
  const ComplexMatrix p = detail::balakrishnan_integral(a.matrix, a.ip, id, 1.0 - cfg.alpha, cfg);
  return OperatorMatrix(a.grid, p, a.ip);
}

inline ComplexMatrix negative_power(const ComplexMatrix& a, const InnerProduct& ip,
                                    const BalakrishnanConfig& cfg)
{
  const ComplexMatrix id = ComplexMatrix::Identity(a.rows(), a.cols());
  return detail::balakrishnan_integral(a, ip, id, 1.0 - cfg.alpha, cfg);
}

/// Bound on ||J^{-alpha}|| for m-accretive J: 2 ||J^{-1}|| / (1 - alpha) + 1 / alpha.
inline double lemma_constant(double alpha, double norm_j_inv)
{
  if (!(alpha > 0.0 && alpha < 1.0))
    throw error(ErrorKind::BadAlpha, "lemma_constant needs alpha in (0, 1)");
  if (!(norm_j_inv > 0.0))
    throw error(ErrorKind::InvalidArgument, "lemma_constant needs a positive inverse norm");
  return 2.0 * norm_j_inv / (1.0 - alpha) + 1.0 / alpha;
}

struct GLCoefficients {
  double alpha;
  double lambda;
  RealVector c; // C_0 .. C_K
};

/// C_0 = lambda^alpha, C_{k+1} = C_k (k - alpha) / (k + 1).
inline GLCoefficients gl_coefficients(double alpha, double lambda, Eigen::Index k_max)
{
  if (!(alpha > 0.0 && alpha < 1.0))
    throw error(ErrorKind::BadAlpha, "gl_coefficients needs alpha in (0, 1)");
  if (!(lambda > 0.0))
    throw error(ErrorKind::NegativeParameter, "gl_coefficients needs lambda > 0");
  if (k_max < 1)
    throw error(ErrorKind::InvalidArgument, "gl_coefficients needs K >= 1");
  GLCoefficients g{alpha, lambda, RealVector(k_max + 1)};
  g.c[0] = std::pow(lambda, alpha);
  for (Eigen::Index k = 0; k < k_max; ++k)
    g.c[k + 1] = g.c[k] * (static_cast<double>(k) - alpha) / static_cast<double>(k + 1);
  return g;
}

/// C'_k = lambda^{k+1} (sin(alpha pi)/pi) int_0^inf xi^{alpha-1} (xi + lambda)^{-k-1} dxi,
/// by quadrature after xi = lambda u / (1 - u).
inline RealVector gl_coefficients_alt(double alpha, double lambda, Eigen::Index k_max)
{
  if (!(alpha > 0.0 && alpha < 1.0))
    throw error(ErrorKind::BadAlpha, "gl_coefficients_alt needs alpha in (0, 1)");
  if (!(lambda > 0.0))
    throw error(ErrorKind::NegativeParameter, "gl_coefficients_alt needs lambda > 0");
  if (k_max < 1)
    throw error(ErrorKind::InvalidArgument, "gl_coefficients_alt needs K >= 1");
  const double pref = std::pow(lambda, alpha) * std::sin(alpha * std::numbers::pi) / std::numbers::pi;
  RealVector out(k_max + 1);
  for (Eigen::Index k = 0; k <= k_max; ++k) {
    const double e = static_cast<double>(k) - alpha;
    out[k] = pref * tanh_sinh_01([&](double u, double v) {
      return std::pow(u, alpha - 1.0) * std::pow(v, e);
    });
  }
  return out;
}

/// A^alpha f = sum_k C_k f(x - k mu) for the Poisson-difference generator.
inline GridFunction gl_power(const SemigroupSpec& s, double alpha, const GridFunction& f)
{
  if (s.kind != SemigroupKind::PoissonDifference)
    throw error(ErrorKind::InvalidArgument, "gl_power needs the Poisson-difference semigroup");
  detail::require_on_grid(s, f);
  const Eigen::Index m = s.shift_cells();
  const Eigen::Index n = s.grid.n();
  // terms with k m >= n only see the zero extension, so the sum is exact
  const Eigen::Index kmax = (n - 1) / m;
  const GLCoefficients g = gl_coefficients(alpha, s.lambda, std::max<Eigen::Index>(kmax, 1));
  ComplexVector out = ComplexVector::Zero(n);
  for (Eigen::Index k = 0; k <= kmax; ++k) {
    const Eigen::Index shift = k * m;
    out.tail(n - shift) += g.c[k] * f.values.head(n - shift);
  }
  return GridFunction(s.grid, std::move(out));
}

/// Dense matrix of the Grunwald sum, sum_k C_k S^{k m}.
inline ComplexMatrix gl_power_matrix(const SemigroupSpec& s, double alpha)
{
  const Eigen::Index n = s.grid.n();
  ComplexMatrix out(n, n);
  for (Eigen::Index j = 0; j < n; ++j) {
    ComplexVector e = ComplexVector::Zero(n);
    e[j] = 1.0;
    out.col(j) = gl_power(s, alpha, GridFunction(s.grid, e)).values;
  }
  return out;
}

struct PowerComparison {
  ComplexVector balakrishnan;
  ComplexVector closed_form;
  double discrepancy = 0.0; // relative L2 over the compared nodes
  Eigen::Index first = 0;   // compared node range [first, last)
  Eigen::Index last = 0;
  std::string convention;
};

namespace detail {

inline PowerComparison compare_routes(ComplexVector bal, ComplexVector closed, const Grid1D& g,
                                      Eigen::Index first, Eigen::Index last, std::string convention)
{
  PowerComparison r;
  r.first = first;
  r.last = last;
  const auto len = last - first;
  const InnerProduct ip = InnerProduct::uniform(len, g.h());
  const double denom = ip.norm(closed.segment(first, len));
  const double diff = ip.norm(bal.segment(first, len) - closed.segment(first, len));
  r.discrepancy = denom > 0.0 ? diff / denom : diff;
  r.balakrishnan = std::move(bal);
  r.closed_form = std::move(closed);
  r.convention = std::move(convention);
  return r;
}

} // namespace detail

/// Balakrishnan power of the shift generator against the Marchaud matrix.
inline PowerComparison marchaud_power_check(double alpha, const Grid1D& grid, const GridFunction& f,
                                            BalakrishnanConfig cfg = {},
                                            MarchaudOptions opts = {})
{
  detail::require_alpha(alpha, 0.0, 1.0, false, "marchaud_power_check");
  cfg.alpha = alpha;
  const OperatorMatrix a = generator_matrix(SemigroupSpec::shift(grid));
  ComplexVector bal = balakrishnan_apply(a.matrix, a.ip, f.values, cfg);
  ComplexVector closed = marchaud_right_derivative(grid, alpha, opts).matrix * f.values;
  return detail::compare_routes(std::move(bal), std::move(closed), grid, 0, grid.n(),
                                "right Marchaud derivative, all nodes");
}

/// K_alpha = -Gamma(2 alpha - 1) cos(alpha pi / 2) / (2^{alpha-1} Gamma(1 - alpha)), alpha in (1/2, 1).
inline double riesz_power_constant(double alpha)
{
  if (!(alpha > 0.5 && alpha < 1.0))
    throw error(ErrorKind::BadAlpha, "K_alpha needs alpha in (1/2, 1)");
  return -std::tgamma(2.0 * alpha - 1.0) * std::cos(alpha * std::numbers::pi / 2.0) /
         (std::pow(2.0, alpha - 1.0) * std::tgamma(1.0 - alpha));
}

/// Balakrishnan power of the Gauss generator against
/// K_alpha B_alpha int f''(x + s) |s|^{1 - 2 alpha} ds, on the middle half of the grid.
inline PowerComparison riesz_power_check(double alpha, const Grid1D& grid, const GridFunction& f,
                                         BalakrishnanConfig cfg = {})
{
  if (!(alpha > 0.75 && alpha < 1.0))
    throw error(ErrorKind::BadAlpha, "the Riesz closed form needs alpha in (3/4, 1)");
  const double k_alpha = riesz_power_constant(alpha);
  cfg.alpha = alpha;
  const OperatorMatrix a = generator_matrix(SemigroupSpec::gauss(grid));
  ComplexVector bal = balakrishnan_apply(a.matrix, a.ip, f.values, cfg);
  const double b_alpha = riesz_constant(alpha);
  const ComplexVector f2 = second_derivative(grid).matrix * f.values;
  ComplexVector closed = k_alpha * b_alpha * (power_kernel_matrix(grid, 2.0 - 2.0 * alpha) * f2);
  const Eigen::Index n = grid.n();
  return detail::compare_routes(std::move(bal), std::move(closed), grid, n / 4, n - n / 4,
                                "kernel |s|^{1-2alpha} with constant K_alpha B_alpha, interior half");
}

} // namespace fracspec

#endif // FRACSPEC_FRACPOW_HPP
