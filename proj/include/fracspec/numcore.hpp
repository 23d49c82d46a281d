#ifndef FRACSPEC_NUMCORE_HPP
#define FRACSPEC_NUMCORE_HPP

// Dense complex linear algebra in weighted inner products.
//
// An InnerProduct with weights w defines (f, g) = sum_i w_i f_i conj(g_i).
// Every "adjoint", "Hermitian part" and norm below is taken with respect to
// such a weighted product; with W = diag(w) the adjoint of M is W^{-1} M^H W.
// Spectral routines whiten by W^{1/2} so that a matrix self-adjoint in the
// weighted sense becomes Hermitian in the Euclidean sense.

#include <algorithm>
#include <cmath>
#include <complex>
#include <cstddef>
#include <string>
#include <vector>

#include <Eigen/Dense>

#include "fracspec/error.hpp"

namespace fracspec {

using complex = std::complex<double>;
using ComplexMatrix = Eigen::MatrixXcd;
using ComplexVector = Eigen::VectorXcd;
using RealVector = Eigen::VectorXd;

/// Every numerical threshold used by the library.
struct Tolerances {
  double hermitian = 1e-10;        // relative adjoint defect accepted as self-adjoint
  double eigen_residual = 1e-10;   // relative residual of Hermitian eigenpairs
  double positive_definite = 1e-12; // min eigenvalue / norm for herm_power
  double condition_cap = 1e12;     // solve / inverse refuse above this estimate
  double accretive = 1e-10;        // min eig of Hermitian part >= -accretive * norm
};

inline constexpr Tolerances default_tolerances{};

/// Strictly positive quadrature weights of a weighted l2 product.
class InnerProduct {
public:
  explicit InnerProduct(RealVector weights) : weights_(std::move(weights))
  {
    if (weights_.size() == 0)
      throw error(ErrorKind::InvalidArgument, "inner product needs at least one weight");
    for (Eigen::Index i = 0; i < weights_.size(); ++i)
      if (!(weights_[i] > 0.0) || !std::isfinite(weights_[i]))
        throw error(ErrorKind::InvalidArgument,
                    "inner product weight " + std::to_string(i) + " is not strictly positive");
  }

  static InnerProduct uniform(Eigen::Index n, double w = 1.0)
  {
    return InnerProduct(RealVector::Constant(n, w));
  }

  Eigen::Index size() const { return weights_.size(); }
  const RealVector& weights() const { return weights_; }
  bool is_uniform() const { return weights_.maxCoeff() == weights_.minCoeff(); }

  complex dot(const ComplexVector& f, const ComplexVector& g) const
  {
    complex acc = 0.0;
    for (Eigen::Index i = 0; i < size(); ++i)
      acc += weights_[i] * f[i] * std::conj(g[i]);
    return acc;
  }

  double norm(const ComplexVector& f) const
  {
    double acc = 0.0;
    for (Eigen::Index i = 0; i < size(); ++i)
      acc += weights_[i] * std::norm(f[i]);
    return std::sqrt(acc);
  }

  RealVector sqrt_weights() const { return weights_.array().sqrt().matrix(); }

private:
  RealVector weights_;
};

namespace detail {

inline void require_square(const ComplexMatrix& m, const char* what)
{
  if (m.rows() != m.cols() || m.rows() == 0)
    throw error(ErrorKind::InvalidArgument, std::string(what) + ": matrix must be square and non-empty");
}

inline void require_match(const ComplexMatrix& m, const InnerProduct& ip, const char* what)
{
  require_square(m, what);
  if (m.rows() != ip.size())
    throw error(ErrorKind::InvalidArgument,
                std::string(what) + ": inner product size does not match the matrix");
}

inline void require_finite(const ComplexMatrix& m, const char* what)
{
  if (!m.allFinite())
    throw error(ErrorKind::InvalidArgument, std::string(what) + ": matrix has non-finite entries");
}

} // namespace detail

/// W^{1/2} M W^{-1/2}: the Euclidean representative of M.
inline ComplexMatrix whiten(const ComplexMatrix& m, const InnerProduct& ip)
{
  detail::require_match(m, ip, "whiten");
  const RealVector s = ip.sqrt_weights();
  return s.asDiagonal() * m * s.cwiseInverse().asDiagonal();
}

/// Inverse of whiten.
inline ComplexMatrix unwhiten(const ComplexMatrix& m, const InnerProduct& ip)
{
  detail::require_match(m, ip, "unwhiten");
  const RealVector s = ip.sqrt_weights();
  return s.cwiseInverse().asDiagonal() * m * s.asDiagonal();
}

/// Adjoint with respect to ip: (M f, g) = (f, adjoint(M) g).
inline ComplexMatrix adjoint(const ComplexMatrix& m, const InnerProduct& ip)
{
  detail::require_match(m, ip, "adjoint");
  const RealVector& w = ip.weights();
  return w.cwiseInverse().asDiagonal() * m.adjoint() * w.asDiagonal();
}

inline ComplexMatrix hermitian_part(const ComplexMatrix& m, const InnerProduct& ip)
{
  return 0.5 * (m + adjoint(m, ip));
}

/// (M - M*)/(2i), so that M = Re M + i Im M.
inline ComplexMatrix imaginary_part(const ComplexMatrix& m, const InnerProduct& ip)
{
  return (m - adjoint(m, ip)) / complex(0.0, 2.0);
}

/// Largest singular value in the Euclidean sense.
inline double spectral_norm(const ComplexMatrix& m)
{
  if (m.size() == 0)
    return 0.0;
  Eigen::BDCSVD<ComplexMatrix> svd(m);
  if (svd.info() != Eigen::Success)
    throw error(ErrorKind::NoConvergence, "SVD did not converge");
  return svd.singularValues()(0);
}

/// Operator norm induced by ip.
inline double operator_norm(const ComplexMatrix& m, const InnerProduct& ip)
{
  return spectral_norm(whiten(m, ip));
}

/// Relative defect of M against its ip-adjoint.
inline double adjoint_defect(const ComplexMatrix& m, const InnerProduct& ip)
{
  const double scale = std::max(m.norm(), 1e-300);
  return (m - adjoint(m, ip)).norm() / scale;
}

struct HermitianEigen {
  RealVector values;     // ascending
  ComplexMatrix vectors; // ip-orthonormal columns
};

/// Eigendecomposition of an ip-self-adjoint matrix.
inline HermitianEigen hermitian_eigen(const ComplexMatrix& m, const InnerProduct& ip,
                                      const Tolerances& tol = default_tolerances)
{
  detail::require_match(m, ip, "hermitian_eigen");
  detail::require_finite(m, "hermitian_eigen");
  const double defect = adjoint_defect(m, ip);
  if (defect > tol.hermitian)
    throw error(ErrorKind::NotHermitian,
                "adjoint defect " + std::to_string(defect) + " exceeds tolerance");
  ComplexMatrix h = whiten(m, ip);
  h = 0.5 * (h + h.adjoint()).eval();
  Eigen::SelfAdjointEigenSolver<ComplexMatrix> es(h);
  if (es.info() != Eigen::Success)
    throw error(ErrorKind::NoConvergence, "Hermitian eigensolver did not converge");
  HermitianEigen out;
  out.values = es.eigenvalues();
  out.vectors = ip.sqrt_weights().cwiseInverse().asDiagonal() * es.eigenvectors();
  const double scale = std::max(m.norm(), 1e-300);
  const double residual =
      (m * out.vectors - out.vectors * out.values.cast<complex>().asDiagonal()).norm();
  if (residual > tol.eigen_residual * scale * std::sqrt(static_cast<double>(m.rows())))
    throw error(ErrorKind::NoConvergence, "Hermitian eigen residual too large");
  return out;
}

/// Descending modulus, ties by descending real then descending imaginary part.
inline void sort_eigenvalues(ComplexVector& values)
{
  std::vector<complex> v(values.data(), values.data() + values.size());
  std::stable_sort(v.begin(), v.end(), [](const complex& a, const complex& b) {
    const double ma = std::abs(a), mb = std::abs(b);
    if (ma != mb)
      return ma > mb;
    if (a.real() != b.real())
      return a.real() > b.real();
    return a.imag() > b.imag();
  });
  for (std::size_t i = 0; i < v.size(); ++i)
    values[static_cast<Eigen::Index>(i)] = v[i];
}

/// Eigenvalues of a general square matrix (complex Schur form).
inline ComplexVector general_eigen(const ComplexMatrix& m)
{
  detail::require_square(m, "general_eigen");
  detail::require_finite(m, "general_eigen");
  Eigen::ComplexEigenSolver<ComplexMatrix> es(m, /*computeEigenvectors=*/false);
  if (es.info() != Eigen::Success)
    throw error(ErrorKind::NoConvergence, "complex Schur iteration did not converge");
  ComplexVector values = es.eigenvalues();
  sort_eigenvalues(values);
  return values;
}

/// Unweighted singular values, descending.
inline RealVector singular_values(const ComplexMatrix& m)
{
  detail::require_finite(m, "singular_values");
  Eigen::BDCSVD<ComplexMatrix> svd(m);
  if (svd.info() != Eigen::Success)
    throw error(ErrorKind::NoConvergence, "SVD did not converge");
  return svd.singularValues();
}

/// Singular values of M as an operator on (C^n, ip), descending.
inline RealVector singular_values(const ComplexMatrix& m, const InnerProduct& ip)
{
  return singular_values(whiten(m, ip));
}

namespace detail {

inline Eigen::PartialPivLU<ComplexMatrix> checked_lu(const ComplexMatrix& m, const Tolerances& tol)
{
  require_square(m, "solve");
  require_finite(m, "solve");
  Eigen::PartialPivLU<ComplexMatrix> lu(m);
  const double rcond = lu.rcond();
  if (!(rcond > 0.0) || 1.0 / rcond > tol.condition_cap)
    throw error(ErrorKind::IllConditioned,
                "condition estimate exceeds cap (rcond = " + std::to_string(rcond) + ")");
  return lu;
}

} // namespace detail

inline ComplexVector solve(const ComplexMatrix& m, const ComplexVector& b,
                           const Tolerances& tol = default_tolerances)
{
  if (b.size() != m.rows())
    throw error(ErrorKind::InvalidArgument, "solve: right-hand side has the wrong length");
  return detail::checked_lu(m, tol).solve(b);
}

inline ComplexMatrix inverse(const ComplexMatrix& m, const Tolerances& tol = default_tolerances)
{
  return detail::checked_lu(m, tol).inverse();
}

/// M^p for M ip-self-adjoint positive definite, via its spectral decomposition.
inline ComplexMatrix herm_power(const ComplexMatrix& m, double p, const InnerProduct& ip,
                                const Tolerances& tol = default_tolerances)
{
  const HermitianEigen eig = hermitian_eigen(m, ip, tol);
  const double scale = std::max(std::abs(eig.values.maxCoeff()), std::abs(eig.values.minCoeff()));
  if (!(eig.values.minCoeff() > tol.positive_definite * scale))
    throw error(ErrorKind::NotPositiveDefinite,
                "minimum eigenvalue " + std::to_string(eig.values.minCoeff()) + " is not positive");
  const RealVector powered = eig.values.array().pow(p).matrix();
  // V^{-1} = V^H W for ip-orthonormal V.
  return eig.vectors * powered.cast<complex>().asDiagonal() * eig.vectors.adjoint() *
         ip.weights().asDiagonal();
}

/// Minimum eigenvalue of the ip-Hermitian part.
inline double min_hermitian_part_eigenvalue(const ComplexMatrix& m, const InnerProduct& ip)
{
  ComplexMatrix h = whiten(m, ip);
  h = 0.5 * (h + h.adjoint()).eval();
  Eigen::SelfAdjointEigenSolver<ComplexMatrix> es(h, Eigen::EigenvaluesOnly);
  if (es.info() != Eigen::Success)
    throw error(ErrorKind::NoConvergence, "Hermitian eigensolver did not converge");
  return es.eigenvalues()(0);
}

/// Re(Mf, f) >= 0 within tolerance.
inline bool is_accretive(const ComplexMatrix& m, const InnerProduct& ip,
                         const Tolerances& tol = default_tolerances)
{
  const double scale = std::max(operator_norm(m, ip), 1e-300);
  return min_hermitian_part_eigenvalue(m, ip) >= -tol.accretive * scale;
}

/// Relative Frobenius distance ||a - b|| / ||b||.
inline double relative_error(const ComplexMatrix& a, const ComplexMatrix& b)
{
  const double denom = b.norm();
  return denom > 0.0 ? (a - b).norm() / denom : (a - b).norm();
}

} // namespace fracspec

#endif // FRACSPEC_NUMCORE_HPP
