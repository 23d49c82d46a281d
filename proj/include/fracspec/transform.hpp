#ifndef FRACSPEC_TRANSFORM_HPP
#define FRACSPEC_TRANSFORM_HPP

// Z = J* G J + F J^alpha and the three model operators built from it.

#include <cmath>
#include <string>

#include "fracspec/discretize.hpp"
#include "fracspec/fracpow.hpp"
#include "fracspec/grid.hpp"
#include "fracspec/numcore.hpp"
#include "fracspec/semigroup.hpp"

namespace fracspec {

struct TransformSpec {
  ComplexMatrix J;
  ComplexMatrix G;
  ComplexMatrix F;
  double alpha = 0.0; // alpha = 0 means J^alpha = I
  InnerProduct ip;
  BalakrishnanConfig quadrature{};

  void validate() const
  {
    const auto n = ip.size();
    for (const ComplexMatrix* m : {&J, &G, &F})
      if (m->rows() != n || m->cols() != n)
        throw error(ErrorKind::InvalidArgument, "transform matrices must match the inner product size");
    if (!(alpha >= 0.0 && alpha < 1.0))
      throw error(ErrorKind::BadAlpha, "transform alpha must lie in [0, 1)");
  }
};

/// J^alpha, the identity when alpha = 0.
inline ComplexMatrix transform_power(const TransformSpec& s)
{
  s.validate();
  if (s.alpha == 0.0)
    return ComplexMatrix::Identity(s.J.rows(), s.J.cols());
  BalakrishnanConfig cfg = s.quadrature;
  cfg.alpha = s.alpha;
  return balakrishnan_power(s.J, s.ip, cfg);
}

inline ComplexMatrix assemble(const TransformSpec& s)
{
  return adjoint(s.J, s.ip) * s.G * s.J + s.F * transform_power(s);
}

/// Z f without forming J^alpha.
inline ComplexVector apply_transform(const TransformSpec& s, const ComplexVector& f)
{
  s.validate();
  ComplexVector out = adjoint(s.J, s.ip) * (s.G * (s.J * f));
  if (s.alpha == 0.0)
    return out + s.F * f;
  BalakrishnanConfig cfg = s.quadrature;
  cfg.alpha = s.alpha;
  return out + s.F * balakrishnan_apply(s.J, s.ip, f, cfg);
}

struct ClassReport {
  double gamma_G = 0.0;
  double C_alpha = 0.0;
  double norm_J_inv = 0.0;
  double norm_F = 0.0;
  double threshold = 0.0; // C_alpha ||J^{-1}|| ||F||
  bool member = false;
  double margin = 0.0;    // gamma_G - threshold
};

/// Constant in ||J^alpha f|| <= C_alpha ||J f||: lemma_constant(1 - alpha, ||J^{-1}||),
/// and ||J^{-1}|| itself when alpha = 0.
inline double transform_constant(double alpha, double norm_j_inv)
{
  if (alpha == 0.0)
    return norm_j_inv;
  return lemma_constant(1.0 - alpha, norm_j_inv);
}

inline ClassReport check_class(const TransformSpec& s)
{
  s.validate();
  ClassReport r;
  r.gamma_G = min_hermitian_part_eigenvalue(s.G, s.ip);
  r.norm_J_inv = operator_norm(inverse(s.J), s.ip);
  r.norm_F = operator_norm(s.F, s.ip);
  r.C_alpha = transform_constant(s.alpha, r.norm_J_inv);
  r.threshold = r.C_alpha * r.norm_J_inv * r.norm_F;
  r.margin = r.gamma_G - r.threshold;
  r.member = r.gamma_G > r.threshold;
  return r;
}

namespace detail {

inline ComplexMatrix left_integral_or_identity(const Grid1D& g, double sigma)
{
  if (sigma == 0.0)
    return ComplexMatrix::Identity(g.n(), g.n());
  return rl_integral_left(g, sigma).matrix;
}

inline double sup_abs(const RealVector& v) { return v.cwiseAbs().maxCoeff(); }

} // namespace detail

struct KipriyanovModel {
  OperatorMatrix L;
  TransformSpec spec;
  NormMatrix hplus;
};

/// L = -(a11 f')' + I^sigma_{0+} rho D^alpha_{b-} on the grid, with the
/// transform J = shift generator, G = a11 at the half nodes, F = I^sigma rho.
inline KipriyanovModel build_kipriyanov_1d(const Grid1D& grid, const Coefficient& a11,
                                           const Coefficient& rho, double sigma, double alpha,
                                           MarchaudOptions marchaud = {})
{
  if (!(sigma >= 0.0 && sigma < 1.0))
    throw error(ErrorKind::BadAlpha, "Kipriyanov sigma must lie in [0, 1)");
  detail::require_alpha(alpha, 0.0, 1.0, false, "build_kipriyanov_1d");
  const ComplexMatrix elliptic = elliptic_1d(grid, a11).matrix;
  const ComplexMatrix f = detail::left_integral_or_identity(grid, sigma) * multiply(grid, rho).matrix;
  ComplexMatrix l = elliptic + f * marchaud_right_derivative(grid, alpha, marchaud).matrix;

  const RealVector g = a11.sample_half(grid);
  TransformSpec spec{generator_matrix(SemigroupSpec::shift(grid)).matrix,
                     g.cast<complex>().asDiagonal().toDenseMatrix(), f, alpha,
                     grid.inner_product(), BalakrishnanConfig{}};
  return KipriyanovModel{OperatorMatrix(grid, std::move(l)), std::move(spec), h1_0_norm(grid)};
}

struct RieszModel {
  OperatorMatrix L; // includes delta I
  TransformSpec spec;
  double delta = 1.0;
  NormMatrix hplus;
};

/// L = (a f'')'' + I^sigma_+ rho I^{2(1-alpha)} f'' + delta f on a window [-X, X],
/// with the transform J = -(1/2) d^2/dx^2, G = 4a, F = -2^alpha I^sigma_+ rho.
inline RieszModel build_riesz_model(const Grid1D& grid, const Coefficient& a, double gamma_a,
                                    const Coefficient& rho, double sigma, double alpha,
                                    double delta = 1.0)
{
  if (!(sigma >= 0.0 && sigma < 1.0))
    throw error(ErrorKind::BadAlpha, "Riesz model sigma must lie in [0, 1)");
  if (!(alpha < 1.0 && sigma / 2.0 + 0.75 < alpha))
    throw error(ErrorKind::BadAlpha, "Riesz model needs sigma/2 + 3/4 < alpha < 1");
  if (!(delta >= 0.0))
    throw error(ErrorKind::NegativeParameter, "Riesz model delta must be >= 0");
  const ComplexMatrix t = fourth_order_weighted(grid, a, gamma_a).matrix;
  const ComplexMatrix is = detail::left_integral_or_identity(grid, sigma);
  const ComplexMatrix r = multiply(grid, rho).matrix;
  const ComplexMatrix d2 = second_derivative(grid).matrix;
  ComplexMatrix l = t + is * r * (riesz_potential(grid, 2.0 - 2.0 * alpha).matrix * d2);
  l.diagonal().array() += delta;

  const RealVector av = a.sample(grid);
  TransformSpec spec{generator_matrix(SemigroupSpec::gauss(grid)).matrix,
                     (4.0 * av).cast<complex>().asDiagonal().toDenseMatrix(),
                     -std::pow(2.0, alpha) * is * r, alpha, grid.inner_product(),
                     BalakrishnanConfig{}};
  return RieszModel{OperatorMatrix(grid, std::move(l)), std::move(spec), delta,
                    weighted_h2_norm(grid, 5.0)};
}

/// Sum_k |C_k| for the Grunwald coefficients. The signed partial sums S_K
/// telescope to 0, so the tail beyond K equals S_K exactly.
inline double gl_abs_sum(double alpha, double lambda, Eigen::Index k_direct = 1000)
{
  const GLCoefficients g = gl_coefficients(alpha, lambda, k_direct);
  double abs_sum = 0.0, signed_sum = 0.0;
  for (Eigen::Index k = 0; k <= k_direct; ++k) {
    abs_sum += std::abs(g.c[k]);
    signed_sum += g.c[k];
  }
  return abs_sum + signed_sum;
}

/// 4 lambda^2 ||a|| + ||b|| sum |C_k|, the bound on |(Sf, g)| for
/// S = A* a A + b A^alpha.
inline double difference_sigma(double a_sup, double b_sup, double lambda, double alpha)
{
  return 4.0 * lambda * lambda * a_sup + b_sup * gl_abs_sum(alpha, lambda);
}

/// (f_i - f_{i-1}) / h with f_{-1} = 0.
inline ComplexMatrix first_difference(const Grid1D& grid)
{
  const Eigen::Index n = grid.n();
  ComplexMatrix q = ComplexMatrix::Zero(n, n);
  for (Eigen::Index i = 0; i < n; ++i) {
    q(i, i) = 1.0 / grid.h();
    if (i > 0)
      q(i, i - 1) = -1.0 / grid.h();
  }
  return q;
}

struct DifferenceOptions {
  ComplexMatrix Q; // empty selects first_difference
  double nu = 1.0; // N = nu I
};

struct DifferenceModel {
  OperatorMatrix L;
  TransformSpec spec;
  ComplexMatrix Q;
  ComplexMatrix N;
  double sigma_const = 0.0;
  double norm_Q_inv = 0.0;
  double gamma_N = 0.0;
  bool h2_verdict = false; // gamma_N > sigma ||Q^{-1}||^2
  NormMatrix hplus;        // ||Q f||^2
};

/// L = A* a A + b A^alpha + Q* N Q with A the Poisson-difference generator and
/// A^alpha the Grunwald sum.
inline DifferenceModel build_difference_model(const Grid1D& grid, const Coefficient& a,
                                              const Coefficient& b, double lambda, double mu,
                                              double alpha, DifferenceOptions opts = {})
{
  detail::require_alpha(alpha, 0.0, 1.0, false, "build_difference_model");
  const SemigroupSpec sg = SemigroupSpec::poisson(grid, lambda, mu);
  const InnerProduct ip = grid.inner_product();
  const ComplexMatrix A = generator_matrix(sg).matrix;
  const RealVector av = a.sample(grid), bv = b.sample(grid);
  const ComplexMatrix G = av.cast<complex>().asDiagonal().toDenseMatrix();
  const ComplexMatrix F = bv.cast<complex>().asDiagonal().toDenseMatrix();
  const ComplexMatrix Q = opts.Q.size() == 0 ? first_difference(grid) : opts.Q;
  if (Q.rows() != grid.n() || Q.cols() != grid.n())
    throw error(ErrorKind::InvalidArgument, "Q must be an n x n matrix");
  if (!(opts.nu > 0.0))
    throw error(ErrorKind::NegativeParameter, "N = nu I needs nu > 0");
  const ComplexMatrix N = opts.nu * ComplexMatrix::Identity(grid.n(), grid.n());
  const ComplexMatrix QNQ = adjoint(Q, ip) * N * Q;
  ComplexMatrix l = adjoint(A, ip) * G * A + F * gl_power_matrix(sg, alpha) + QNQ;

  DifferenceModel m{OperatorMatrix(grid, std::move(l)),
                    TransformSpec{A, G, F, alpha, ip, BalakrishnanConfig{}},
                    Q,
                    N,
                    0.0,
                    0.0,
                    opts.nu,
                    false,
                    NormMatrix(Q.adjoint() * ip.weights().cast<complex>().asDiagonal() * Q)};
  m.sigma_const = difference_sigma(detail::sup_abs(av), detail::sup_abs(bv), lambda, alpha);
  m.norm_Q_inv = operator_norm(inverse(Q), ip);
  m.h2_verdict = m.gamma_N > m.sigma_const * m.norm_Q_inv * m.norm_Q_inv;
  return m;
}

} // namespace fracspec

#endif // FRACSPEC_TRANSFORM_HPP
