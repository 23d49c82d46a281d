#include <gtest/gtest.h>

#include <random>

#include "fracspec/numcore.hpp"
#include "oracles.hpp"

using namespace fracspec;

namespace {

InnerProduct random_weights(Eigen::Index n, std::mt19937_64& rng)
{
  std::uniform_real_distribution<double> u(0.2, 3.0);
  RealVector w(n);
  for (Eigen::Index i = 0; i < n; ++i)
    w[i] = u(rng);
  return InnerProduct(w);
}

ComplexMatrix weighted_hermitian(Eigen::Index n, const InnerProduct& ip, std::mt19937_64& rng)
{
  // W^{-1} S with S Hermitian is ip-self-adjoint
  return ip.weights().cwiseInverse().cast<complex>().asDiagonal() * oracle::random_hermitian(n, rng);
}

} // namespace

TEST(InnerProductTest, RejectsNonPositiveWeights)
{
  EXPECT_THROW(InnerProduct(RealVector::Constant(3, 0.0)), error);
  RealVector w(3);
  w << 1.0, -1.0, 2.0;
  EXPECT_THROW(InnerProduct{w}, error);
  EXPECT_THROW(InnerProduct{RealVector()}, error);
}

TEST(AdjointTest, MatchesInnerProductOnRandomVectors)
{
  std::mt19937_64 rng(1);
  const InnerProduct ip = random_weights(9, rng);
  const ComplexMatrix m = oracle::random_complex(9, rng);
  const ComplexMatrix ma = adjoint(m, ip);
  for (int trial = 0; trial < 5; ++trial) {
    const ComplexVector f = oracle::random_complex(9, rng).col(0);
    const ComplexVector g = oracle::random_complex(9, rng).col(1);
    EXPECT_NEAR(std::abs(ip.dot(m * f, g) - ip.dot(f, ma * g)), 0.0, 1e-11);
  }
}

TEST(AdjointTest, RealDiagonalIsSelfAdjointForAnyWeights)
{
  std::mt19937_64 rng(2);
  const InnerProduct ip = random_weights(5, rng);
  ComplexMatrix d = ComplexMatrix::Zero(5, 5);
  d.diagonal() << 1.0, -2.0, 3.5, 0.25, 7.0;
  // check on basis vectors
  for (int i = 0; i < 5; ++i)
    for (int j = 0; j < 5; ++j) {
      const ComplexVector ei = ComplexVector::Unit(5, i), ej = ComplexVector::Unit(5, j);
      EXPECT_NEAR(std::abs(ip.dot(d * ei, ej) - ip.dot(ei, d * ej)), 0.0, 1e-14);
    }
  EXPECT_LT((adjoint(d, ip) - d).norm(), 1e-14);
}

TEST(AdjointTest, IsAnInvolution)
{
  std::mt19937_64 rng(3);
  const InnerProduct ip = random_weights(12, rng);
  for (int trial = 0; trial < 10; ++trial) {
    const ComplexMatrix m = oracle::random_complex(12, rng);
    EXPECT_LE((adjoint(adjoint(m, ip), ip) - m).norm(), 1e-14 * m.norm() * 10);
  }
}

TEST(AdjointTest, WhitenRoundTrip)
{
  std::mt19937_64 rng(4);
  const InnerProduct ip = random_weights(7, rng);
  const ComplexMatrix m = oracle::random_complex(7, rng);
  EXPECT_LT((unwhiten(whiten(m, ip), ip) - m).norm(), 1e-13 * m.norm());
}

TEST(HermitianEigenTest, DiagonalSorted)
{
  ComplexMatrix d = ComplexMatrix::Zero(3, 3);
  d.diagonal() << 3.0, 1.0, 2.0;
  const auto e = hermitian_eigen(d, InnerProduct::uniform(3));
  EXPECT_NEAR(e.values[0], 1.0, 1e-14);
  EXPECT_NEAR(e.values[1], 2.0, 1e-14);
  EXPECT_NEAR(e.values[2], 3.0, 1e-14);
}

TEST(HermitianEigenTest, IdentityHasUnitSpectrumAndOrthonormalVectors)
{
  const InnerProduct ip = InnerProduct::uniform(6);
  const auto e = hermitian_eigen(ComplexMatrix::Identity(6, 6), ip);
  EXPECT_LT((e.values - RealVector::Ones(6)).norm(), 1e-14);
  EXPECT_LT((e.vectors.adjoint() * e.vectors - ComplexMatrix::Identity(6, 6)).norm(), 1e-13);
}

TEST(HermitianEigenTest, MatchesCharacteristicPolynomialRoots)
{
  std::mt19937_64 rng(5);
  for (int trial = 0; trial < 5; ++trial) {
    const ComplexMatrix m = oracle::random_hermitian(8, rng);
    const auto e = hermitian_eigen(m, InnerProduct::uniform(8));
    auto roots = oracle::poly_roots(oracle::charpoly(m));
    std::vector<double> re;
    for (const auto& z : roots) {
      EXPECT_LT(std::abs(z.imag()), 1e-8);
      re.push_back(z.real());
    }
    std::sort(re.begin(), re.end());
    for (int i = 0; i < 8; ++i)
      EXPECT_NEAR(e.values[i], re[i], 1e-8 * std::max(1.0, std::abs(re[i])));
  }
}

TEST(HermitianEigenTest, WeightedEigenpairsAreIpOrthonormal)
{
  std::mt19937_64 rng(6);
  const InnerProduct ip = random_weights(10, rng);
  const ComplexMatrix m = weighted_hermitian(10, ip, rng);
  const auto e = hermitian_eigen(m, ip);
  const ComplexMatrix gram = e.vectors.adjoint() * ip.weights().cast<complex>().asDiagonal() * e.vectors;
  EXPECT_LT((gram - ComplexMatrix::Identity(10, 10)).norm(), 1e-12);
  const ComplexMatrix resid = m * e.vectors - e.vectors * e.values.cast<complex>().asDiagonal();
  EXPECT_LE(resid.norm(), 1e-10 * m.norm());
}

TEST(HermitianEigenTest, RejectsNonHermitian)
{
  ComplexMatrix m(2, 2);
  m << 1.0, 1.0, 0.0, 1.0;
  try {
    hermitian_eigen(m, InnerProduct::uniform(2));
    FAIL() << "expected NotHermitian";
  } catch (const error& e) {
    EXPECT_EQ(e.kind(), ErrorKind::NotHermitian);
  }
}

TEST(GeneralEigenTest, NilpotentAndTriangular)
{
  ComplexMatrix n(2, 2);
  n << 0.0, 1.0, 0.0, 0.0;
  const ComplexVector z = general_eigen(n);
  EXPECT_LT(z.cwiseAbs().maxCoeff(), 1e-14);
  ComplexMatrix t(2, 2);
  t << 2.0, 1.0, 0.0, 3.0;
  const ComplexVector v = general_eigen(t);
  EXPECT_NEAR(std::abs(v[0] - complex(3.0)), 0.0, 1e-14);
  EXPECT_NEAR(std::abs(v[1] - complex(2.0)), 0.0, 1e-14);
}

TEST(GeneralEigenTest, TraceAndDeterminant)
{
  std::mt19937_64 rng(7);
  for (int trial = 0; trial < 10; ++trial) {
    const ComplexMatrix m = oracle::random_complex(6, rng);
    const ComplexVector z = general_eigen(m);
    EXPECT_LE(std::abs(z.sum() - m.trace()), 1e-8 * m.norm());
    EXPECT_LE(std::abs(z.prod() - m.determinant()), 1e-8 * std::abs(m.determinant()));
  }
}

TEST(GeneralEigenTest, MatchesCharacteristicPolynomialRoots)
{
  std::mt19937_64 rng(8);
  const ComplexMatrix m = oracle::random_complex(6, rng);
  const ComplexVector z = general_eigen(m);
  const auto roots = oracle::poly_roots(oracle::charpoly(m));
  for (const auto& r : roots) {
    double best = 1e300;
    for (Eigen::Index i = 0; i < z.size(); ++i)
      best = std::min(best, std::abs(z[i] - r));
    EXPECT_LT(best, 1e-8 * std::max(1.0, std::abs(r)));
  }
}

TEST(GeneralEigenTest, SimilarityInvariance)
{
  std::mt19937_64 rng(9);
  for (int trial = 0; trial < 5; ++trial) {
    const ComplexMatrix m = oracle::random_complex(10, rng);
    const ComplexMatrix s = ComplexMatrix::Identity(10, 10) + 0.2 * oracle::random_complex(10, rng);
    const ComplexVector a = general_eigen(m);
    const ComplexVector b = general_eigen(s.inverse() * m * s);
    for (Eigen::Index i = 0; i < a.size(); ++i) {
      double best = 1e300;
      for (Eigen::Index j = 0; j < b.size(); ++j)
        best = std::min(best, std::abs(a[i] - b[j]));
      EXPECT_LT(best, 1e-7 * std::max(1.0, std::abs(a[i])));
    }
  }
}

TEST(GeneralEigenTest, SortOrderBreaksTiesByRealThenImaginary)
{
  ComplexVector v(5);
  v << complex(0, 1), complex(1, 0), complex(-1, 0), complex(0, -1), complex(0.5, 0);
  sort_eigenvalues(v);
  EXPECT_EQ(v[0], complex(1, 0));
  EXPECT_EQ(v[1], complex(0, 1));
  EXPECT_EQ(v[2], complex(0, -1));
  EXPECT_EQ(v[3], complex(-1, 0));
  EXPECT_EQ(v[4], complex(0.5, 0));
}

TEST(SingularValuesTest, DiagonalAndUnitary)
{
  ComplexMatrix d = ComplexMatrix::Zero(2, 2);
  d.diagonal() << -3.0, 4.0;
  const RealVector s = singular_values(d, InnerProduct::uniform(2));
  EXPECT_NEAR(s[0], 4.0, 1e-14);
  EXPECT_NEAR(s[1], 3.0, 1e-14);
  std::mt19937_64 rng(10);
  const ComplexMatrix q = oracle::random_complex(8, rng).householderQr().householderQ();
  EXPECT_LT((singular_values(q, InnerProduct::uniform(8)) - RealVector::Ones(8)).norm(), 1e-13);
}

TEST(SingularValuesTest, MatchEigenvaluesOfAdjointProduct)
{
  std::mt19937_64 rng(11);
  const InnerProduct ip = random_weights(10, rng);
  const ComplexMatrix m = oracle::random_complex(10, rng);
  const RealVector s = singular_values(m, ip);
  const auto e = hermitian_eigen(adjoint(m, ip) * m, ip);
  for (Eigen::Index i = 0; i < 10; ++i)
    EXPECT_NEAR(s[i], std::sqrt(e.values[9 - i]), 1e-10 * s[0]);
  EXPECT_NEAR(s.squaredNorm(), whiten(m, ip).squaredNorm(), 1e-8 * s.squaredNorm());
}

TEST(SingularValuesTest, EqualEigenvaluesForHermitianPositive)
{
  std::mt19937_64 rng(12);
  const ComplexMatrix a = oracle::random_hpd(12, rng);
  const InnerProduct ip = InnerProduct::uniform(12);
  const RealVector s = singular_values(a, ip);
  const RealVector l = hermitian_eigen(a, ip).values.reverse();
  EXPECT_LE((s - l).cwiseAbs().maxCoeff(), 1e-9 * s[0]);
}

TEST(SolveTest, SolvesAndRejectsSingular)
{
  std::mt19937_64 rng(13);
  const ComplexMatrix a = oracle::random_hpd(6, rng);
  const ComplexVector b = oracle::random_complex(6, rng).col(0);
  EXPECT_LT((a * solve(a, b) - b).norm(), 1e-12 * b.norm());
  EXPECT_LT((a * inverse(a) - ComplexMatrix::Identity(6, 6)).norm(), 1e-12);
  ComplexMatrix s = ComplexMatrix::Ones(3, 3);
  try {
    inverse(s);
    FAIL() << "expected IllConditioned";
  } catch (const error& e) {
    EXPECT_EQ(e.kind(), ErrorKind::IllConditioned);
  }
}

TEST(HermPowerTest, ScalarPowersAndIdentity)
{
  ComplexMatrix d = ComplexMatrix::Zero(2, 2);
  d.diagonal() << 4.0, 9.0;
  const InnerProduct ip = InnerProduct::uniform(2);
  const ComplexMatrix r = herm_power(d, 0.5, ip);
  EXPECT_NEAR(std::abs(r(0, 0) - 2.0), 0.0, 1e-14);
  EXPECT_NEAR(std::abs(r(1, 1) - 3.0), 0.0, 1e-14);
  for (double p : {-1.0, -0.3, 0.7, 2.0})
    EXPECT_LT((herm_power(ComplexMatrix::Identity(4, 4), p, InnerProduct::uniform(4)) -
               ComplexMatrix::Identity(4, 4)).norm(), 1e-14);
}

TEST(HermPowerTest, PowerLawsInWeightedProduct)
{
  std::mt19937_64 rng(14);
  const InnerProduct ip = random_weights(10, rng);
  // W^{-1} (HPD) is ip-self-adjoint and positive
  const ComplexMatrix m = ip.weights().cwiseInverse().cast<complex>().asDiagonal() * oracle::random_hpd(10, rng);
  const ComplexMatrix id = ComplexMatrix::Identity(10, 10);
  const ComplexMatrix half = herm_power(m, 0.5, ip);
  EXPECT_LE((half * half - m).norm(), 1e-9 * m.norm());
  EXPECT_LE((herm_power(m, 0.4, ip) * herm_power(m, -0.4, ip) - id).norm(), 1e-9 * std::sqrt(10.0));
  std::uniform_real_distribution<double> u(-1.0, 1.0);
  for (int trial = 0; trial < 6; ++trial) {
    const double a = u(rng), b = u(rng);
    const ComplexMatrix ab = herm_power(m, a + b, ip);
    EXPECT_LE((herm_power(m, a, ip) * herm_power(m, b, ip) - ab).norm(), 1e-9 * ab.norm());
  }
}

TEST(HermPowerTest, RejectsIndefinite)
{
  ComplexMatrix d = ComplexMatrix::Zero(2, 2);
  d.diagonal() << 1.0, -1.0;
  try {
    herm_power(d, 0.5, InnerProduct::uniform(2));
    FAIL() << "expected NotPositiveDefinite";
  } catch (const error& e) {
    EXPECT_EQ(e.kind(), ErrorKind::NotPositiveDefinite);
  }
}

TEST(AccretiveTest, HermitianPartSign)
{
  std::mt19937_64 rng(15);
  const InnerProduct ip = InnerProduct::uniform(8);
  EXPECT_TRUE(is_accretive(oracle::random_accretive(8, rng), ip));
  EXPECT_FALSE(is_accretive(-ComplexMatrix::Identity(8, 8), ip));
  EXPECT_NEAR(min_hermitian_part_eigenvalue(complex(0, 1) * ComplexMatrix::Identity(3, 3),
                                            InnerProduct::uniform(3)), 0.0, 1e-15);
}
