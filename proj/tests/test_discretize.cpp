#include <gtest/gtest.h>

#include <cstdio>
#include <fstream>
#include <random>

#include "fracspec/discretize.hpp"
#include "oracles.hpp"

using namespace fracspec;

namespace {

double max_abs_diff(const ComplexVector& a, const RealVector& b, Eigen::Index from = 0, Eigen::Index to = -1)
{
  if (to < 0)
    to = a.size();
  double m = 0.0;
  for (Eigen::Index i = from; i < to; ++i)
    m = std::max(m, std::abs(a[i] - b[i]));
  return m;
}

RealVector map_nodes(const Grid1D& g, double (*f)(double))
{
  RealVector v(g.n());
  for (Eigen::Index i = 0; i < g.n(); ++i)
    v[i] = f(g.node(i));
  return v;
}

bool lower_triangular(const ComplexMatrix& m)
{
  return m.triangularView<Eigen::StrictlyUpper>().toDenseMatrix().norm() == 0.0;
}

bool upper_triangular(const ComplexMatrix& m)
{
  return m.triangularView<Eigen::StrictlyLower>().toDenseMatrix().norm() == 0.0;
}

} // namespace

TEST(GridTest, SpacingAndNodes)
{
  const Grid1D g(0.0, 1.0, 9);
  EXPECT_DOUBLE_EQ(g.h(), 0.1);
  EXPECT_DOUBLE_EQ(g.node(0), 0.1);
  EXPECT_NEAR(g.node(8), 0.9, 1e-15);
  const RealVector x = g.nodes();
  for (Eigen::Index i = 1; i < x.size(); ++i)
    EXPECT_GT(x[i], x[i - 1]);
  EXPECT_THROW(Grid1D(0.0, 1.0, 3), error);
  EXPECT_THROW(Grid1D(1.0, 1.0, 8), error);
}

TEST(CoefficientTest, ParsesBuiltins)
{
  EXPECT_DOUBLE_EQ(Coefficient::parse("const:2.5")(7.0), 2.5);
  EXPECT_DOUBLE_EQ(Coefficient::parse("poly:1,2,3")(2.0), 17.0);
  EXPECT_DOUBLE_EQ(Coefficient::parse("sin")(0.5), std::sin(0.5));
  EXPECT_DOUBLE_EQ(Coefficient::parse("cos")(0.5), std::cos(0.5));
  EXPECT_DOUBLE_EQ(Coefficient::parse("wpow:2,5")(-1.0), 64.0);
  EXPECT_THROW(Coefficient::parse("tan"), error);
  EXPECT_THROW(Coefficient::parse("const:abc"), error);
  EXPECT_THROW(Coefficient::parse("const:1,2"), error);
}

TEST(CoefficientTest, CsvInterpolatesLinearly)
{
  const std::string path = ::testing::TempDir() + "coef.csv";
  {
    std::ofstream out(path);
    out << "# x,value\n0,1\n1,3\n2,2\n";
  }
  const Coefficient c = Coefficient::parse("csv:" + path);
  EXPECT_DOUBLE_EQ(c(0.5), 2.0);
  EXPECT_DOUBLE_EQ(c(1.5), 2.5);
  EXPECT_DOUBLE_EQ(c(-1.0), 1.0);
  EXPECT_DOUBLE_EQ(c(5.0), 2.0);
  std::remove(path.c_str());
  EXPECT_THROW(Coefficient::parse("csv:/nonexistent/file.csv"), error);
}

TEST(RlIntegralTest, ConstantWithExtrapolatedEdgeIsExact)
{
  for (double alpha : {0.3, 0.5, 0.9}) {
    const Grid1D g(0.0, 2.0, 200);
    const ComplexVector one = ComplexVector::Ones(g.n());
    const ComplexVector r = rl_integral_left(g, alpha, EdgeRule::Extrapolate).matrix * one;
    RealVector exact(g.n());
    for (Eigen::Index i = 0; i < g.n(); ++i)
      exact[i] = std::pow(g.node(i), alpha) / std::tgamma(alpha + 1.0);
    EXPECT_LT(max_abs_diff(r, exact), 1e-12) << alpha;
  }
}

TEST(RlIntegralTest, ConstantWithZeroEdgeConvergesAwayFromTheEdge)
{
  const double alpha = 0.5;
  double prev = 0.0;
  for (Eigen::Index n : {99, 199, 399}) {
    const Grid1D g(0.0, 1.0, n);
    const ComplexVector r = rl_integral_left(g, alpha).matrix * ComplexVector::Ones(n);
    double err = 0.0;
    for (Eigen::Index i = 0; i < n; ++i)
      if (g.node(i) >= 0.5)
        err = std::max(err, std::abs(r[i] - std::pow(g.node(i), alpha) / std::tgamma(alpha + 1.0)));
    if (prev > 0.0)
      EXPECT_LT(err, 0.75 * prev); // order >= 1 - alpha
    prev = err;
  }
  EXPECT_LT(prev, 5e-3);
}

TEST(RlIntegralTest, OrderOneIsCumulativeTrapezoid)
{
  const Grid1D g(0.0, 1.0, 50);
  const ComplexVector r = rl_integral_left(g, 1.0, EdgeRule::Extrapolate).matrix * ComplexVector::Ones(50);
  EXPECT_LT(max_abs_diff(r, g.nodes()), 1e-13);
  // trapezoid on f(t) = t^2 has the closed error h^2 x / 6
  const RealVector x = g.nodes();
  const ComplexVector q = rl_integral_left(g, 1.0).matrix * x.array().square().matrix().cast<complex>();
  RealVector expect = (x.array().cube() / 3.0 + g.h() * g.h() * x.array() / 6.0).matrix();
  EXPECT_LT(max_abs_diff(q, expect), 1e-13);
}

TEST(RlIntegralTest, LinearDataAgainstQuadratureOracle)
{
  const double alpha = 0.5;
  const Grid1D g(0.0, 1.0, 127);
  const ComplexVector r = rl_integral_left(g, alpha).matrix * g.nodes().cast<complex>();
  for (Eigen::Index i = 0; i < g.n(); i += 9) {
    const double x = g.node(i);
    // u = (x - t)^alpha removes the singularity
    const double ref = oracle::simpson([&](double u) { return (x - std::pow(u, 1.0 / alpha)) / alpha; },
                                       0.0, std::pow(x, alpha), 4000) / std::tgamma(alpha);
    EXPECT_NEAR(r[i].real(), ref, 1e-9);
    EXPECT_NEAR(ref, std::pow(x, 1.5) / std::tgamma(2.5), 1e-9);
  }
}

TEST(RlIntegralTest, RightIntegralMirrorsLeft)
{
  const double alpha = 0.7;
  const Grid1D g(0.0, 1.0, 100);
  RealVector f(g.n()), exact(g.n());
  for (Eigen::Index i = 0; i < g.n(); ++i) {
    const double x = g.node(i);
    f[i] = 1.0 - x;
    exact[i] = std::pow(1.0 - x, 1.0 + alpha) / std::tgamma(2.0 + alpha);
  }
  EXPECT_LT(max_abs_diff(rl_integral_right(g, alpha).matrix * f.cast<complex>(), exact), 1e-12);
}

TEST(RlIntegralTest, OneSidedMatricesAreTriangular)
{
  const Grid1D g(0.0, 1.0, 30);
  EXPECT_TRUE(lower_triangular(rl_integral_left(g, 0.4).matrix));
  EXPECT_TRUE(upper_triangular(rl_integral_right(g, 0.4).matrix));
  EXPECT_TRUE(upper_triangular(marchaud_right_derivative(g, 0.4).matrix));
}

TEST(RlIntegralTest, RejectsOrderOutsideRange)
{
  const Grid1D g(0.0, 1.0, 10);
  for (double a : {0.0, -0.5, 1.5}) {
    try {
      rl_integral_left(g, a);
      FAIL();
    } catch (const error& e) {
      EXPECT_EQ(e.kind(), ErrorKind::BadAlpha);
    }
  }
  EXPECT_THROW(rl_integral_right(g, 1.01), error);
}

TEST(MarchaudTest, ConstantGivesBoundaryTerm)
{
  const double alpha = 0.5;
  for (Eigen::Index n : {255, 511}) {
    const Grid1D g(0.0, 1.0, n);
    const ComplexVector r = marchaud_right_derivative(g, alpha).matrix * ComplexVector::Constant(n, 3.0);
    for (Eigen::Index i = 0; i < n; ++i) {
      const double x = g.node(i);
      if (1.0 - x < 0.25)
        continue;
      const double exact = 3.0 * std::pow(1.0 - x, -alpha) / std::tgamma(1.0 - alpha);
      // the zero boundary value only enters through the last cell
      EXPECT_NEAR(r[i].real(), exact, 4.0 * g.h() * exact);
    }
  }
}

TEST(MarchaudTest, PowerFunctionConverges)
{
  // D^alpha_{1-} (1-x)^2 = Gamma(3)/Gamma(3-alpha) (1-x)^{2-alpha}
  const double alpha = 0.5;
  double prev = 0.0;
  for (Eigen::Index n : {127, 255, 511}) {
    const Grid1D g(0.0, 1.0, n);
    RealVector f(n), exact(n);
    for (Eigen::Index i = 0; i < n; ++i) {
      const double s = 1.0 - g.node(i);
      f[i] = s * s;
      exact[i] = 2.0 / std::tgamma(3.0 - alpha) * std::pow(s, 2.0 - alpha);
    }
    const ComplexVector r = marchaud_right_derivative(g, alpha).matrix * f.cast<complex>();
    const double err = (r - exact.cast<complex>()).norm() / exact.norm();
    if (prev > 0.0)
      EXPECT_LT(err, 0.6 * prev);
    prev = err;
  }
  EXPECT_LT(prev, 1e-3);
}

TEST(MarchaudTest, LeftInverseOfRightIntegral)
{
  const double alpha = 0.5;
  const auto f = [](double x) { return x < 0.8 ? x * std::pow(0.8 - x, 3) : 0.0; };
  double prev = 0.0;
  for (Eigen::Index n : {255, 1023}) {
    const Grid1D g(0.0, 1.0, n);
    const ComplexVector fv = GridFunction::sample(g, f).values;
    const ComplexVector back =
        marchaud_right_derivative(g, alpha).matrix * (rl_integral_right(g, alpha).matrix * fv);
    const double err = (back - fv).cwiseAbs().maxCoeff() / fv.cwiseAbs().maxCoeff();
    EXPECT_LT(err, 2.0 * std::pow(g.h(), 1.0 - alpha));
    if (prev > 0.0)
      EXPECT_LT(err, prev);
    prev = err;
  }
}

TEST(MarchaudTest, SmallOrderApproachesIdentity)
{
  const Grid1D g(0.0, 1.0, 64);
  for (double alpha : {1e-3, 1e-4}) {
    const ComplexMatrix d = marchaud_right_derivative(g, alpha).matrix;
    const double dev = (d - ComplexMatrix::Identity(64, 64)).cwiseAbs().maxCoeff();
    EXPECT_LT(dev, 10.0 * alpha) << alpha;
  }
}

TEST(MarchaudTest, TruncationCapRule)
{
  const double alpha = 0.5;
  const Grid1D g(0.0, 1.0, 63);
  const double h = g.h();
  MarchaudOptions opts;
  opts.truncation_cells = 3;
  const ComplexMatrix d = marchaud_right_derivative(g, alpha, opts).matrix;
  // nodes within 3h of b: capped diagonal only
  for (Eigen::Index i = 61; i < 63; ++i) {
    const double dist = (63 - i) * h;
    EXPECT_NEAR(d(i, i).real(), (std::pow(3.0 * h, -alpha) - std::pow(dist, -alpha)) / alpha, 1e-12);
    EXPECT_EQ(d.row(i).cwiseAbs().sum(), std::abs(d(i, i)));
  }
  // no coupling to the dropped cells [x, x + 3h]
  EXPECT_EQ(d(10, 11), complex(0.0));
  EXPECT_EQ(d(10, 12), complex(0.0));
  EXPECT_NE(d(10, 13), complex(0.0));
  opts.truncation_cells = -1;
  EXPECT_THROW(marchaud_right_derivative(g, alpha, opts), error);
  EXPECT_THROW(marchaud_right_derivative(g, 1.0), error);
}

TEST(RieszTest, ConstantValue)
{
  EXPECT_NEAR(riesz_constant(0.5), 1.0 / std::sqrt(2.0 * M_PI), 1e-14);
  EXPECT_NEAR(riesz_constant(0.5), 0.398942, 1e-6);
  for (double beta : {1.0, 0.0, 2.0, -0.5}) {
    try {
      riesz_constant(beta);
      FAIL();
    } catch (const error& e) {
      EXPECT_EQ(e.kind(), ErrorKind::BadAlpha);
    }
  }
}

TEST(RieszTest, SymmetricUnderUniformWeights)
{
  const Grid1D g(-5.0, 5.0, 80);
  for (double beta : {0.4, 1.6}) {
    const ComplexMatrix m = riesz_potential(g, beta).matrix;
    EXPECT_EQ((m - m.transpose()).norm(), 0.0);
  }
}

TEST(RieszTest, SplitsIntoOneSidedIntegrals)
{
  const Grid1D g(-3.0, 3.0, 90);
  for (double beta : {0.3, 0.7, 1.4}) {
    const ComplexMatrix left = detail::left_integral_matrix(g, beta, EdgeRule::Zero);
    const ComplexMatrix sum = left + detail::flip(left);
    const ComplexMatrix expect = riesz_constant(beta) * std::tgamma(beta) * sum;
    const ComplexMatrix got = riesz_potential(g, beta).matrix;
    EXPECT_LT((got - expect).cwiseAbs().maxCoeff(), 1e-10) << beta;
    if (beta < 1.0) {
      const ComplexMatrix pub = rl_integral_left(g, beta).matrix + rl_integral_right(g, beta).matrix;
      EXPECT_LT((got - riesz_constant(beta) * std::tgamma(beta) * pub).cwiseAbs().maxCoeff(), 1e-10);
    }
  }
}

TEST(RieszTest, KernelOnGaussianMatchesQuadrature)
{
  const double beta = 0.6;
  const Grid1D g(-10.0, 10.0, 1000);
  const ComplexVector f = GridFunction::sample(g, [](double x) { return std::exp(-x * x); }).values;
  const ComplexVector r = power_kernel_matrix(g, beta) * f;
  for (Eigen::Index i : {300, 500, 650}) {
    const double x = g.node(i);
    // split at x and substitute u = |s - x|^beta
    const auto piece = [&](double sign) {
      return oracle::simpson([&](double u) {
        const double s = x + sign * std::pow(u, 1.0 / beta);
        return std::exp(-s * s) / beta;
      }, 0.0, std::pow(15.0, beta), 20000);
    };
    EXPECT_NEAR(r[i].real(), piece(1.0) + piece(-1.0), 2e-4);
  }
}

TEST(SecondDerivativeTest, SineIsSecondOrder)
{
  double prev = 0.0;
  for (Eigen::Index n : {63, 127, 255}) {
    const Grid1D g(0.0, M_PI, n);
    const ComplexVector r = second_derivative(g).matrix * map_nodes(g, [](double x) { return std::sin(x); }).cast<complex>();
    const double err = max_abs_diff(r, -map_nodes(g, [](double x) { return std::sin(x); }));
    if (prev > 0.0)
      EXPECT_NEAR(prev / err, 4.0, 0.2);
    prev = err;
  }
}

TEST(MultiplyTest, PointwiseProduct)
{
  const Grid1D g(0.0, 1.0, 12);
  const Coefficient rho = Coefficient::parse("poly:1,2");
  const ComplexVector f = GridFunction::sample(g, [](double x) { return std::cos(x); }).values;
  const ComplexVector r = multiply(g, rho).matrix * f;
  for (Eigen::Index i = 0; i < g.n(); ++i)
    EXPECT_DOUBLE_EQ(r[i].real(), (1.0 + 2.0 * g.node(i)) * std::cos(g.node(i)));
  EXPECT_THROW(multiply(g, RealVector::Ones(3)), error);
}

TEST(EllipticTest, ConstantCoefficientSpectrum)
{
  const Eigen::Index n = 200;
  const Grid1D g(0.0, M_PI, n);
  const ComplexMatrix t = elliptic_1d(g, Coefficient::constant(1.0)).matrix;
  EXPECT_LT((t + second_derivative(g).matrix).norm(), 1e-9);
  const RealVector ev = hermitian_eigen(t, g.inner_product()).values;
  const double h = g.h();
  for (int k = 1; k <= 10; ++k) {
    const double fd = 2.0 / (h * h) * (1.0 - std::cos(k * h));
    EXPECT_NEAR(ev[k - 1], fd, 1e-9 * fd);
    EXPECT_NEAR(ev[k - 1], k * k, 1e-3 * k * k * k * k);
  }
}

TEST(EllipticTest, VariableCoefficientIsSelfAdjointPositive)
{
  const Grid1D g(0.0, 2.0, 150);
  const ComplexMatrix t = elliptic_1d(g, Coefficient::parse("poly:1,0.5,0.25")).matrix;
  EXPECT_LT(adjoint_defect(t, g.inner_product()), 1e-12);
  EXPECT_GT(hermitian_eigen(t, g.inner_product()).values[0], 0.0);
}

TEST(EllipticTest, RejectsNonPositiveCoefficient)
{
  const Grid1D g(0.0, 2.0, 20);
  try {
    elliptic_1d(g, Coefficient::parse("poly:-1,1"));
    FAIL();
  } catch (const error& e) {
    EXPECT_EQ(e.kind(), ErrorKind::CoefficientBoundViolated);
    EXPECT_NE(std::string(e.what()).find("half node"), std::string::npos);
  }
}

TEST(FourthOrderTest, FormIdentityHoldsDiscretely)
{
  const Grid1D g(-4.0, 4.0, 120);
  const Coefficient a = Coefficient::parse("wpow:3,5");
  const ComplexMatrix t = fourth_order_weighted(g, a, 1.0).matrix;
  const ComplexMatrix d2 = second_derivative(g).matrix;
  const RealVector av = a.sample(g);
  const InnerProduct ip = g.inner_product();
  std::mt19937_64 rng(3);
  for (int trial = 0; trial < 5; ++trial) {
    const ComplexVector f = oracle::random_complex(120, rng).col(0);
    const ComplexVector gg = oracle::random_complex(120, rng).col(1);
    const complex lhs = ip.dot(t * f, gg);
    const ComplexVector af2 = av.cast<complex>().asDiagonal() * (d2 * f);
    const complex rhs = ip.dot(af2, d2 * gg);
    EXPECT_LE(std::abs(lhs - rhs), 1e-12 * std::abs(rhs));
  }
}

TEST(FourthOrderTest, RejectsWeakCoefficient)
{
  const Grid1D g(-4.0, 4.0, 40);
  try {
    fourth_order_weighted(g, Coefficient::parse("wpow:1,4"), 1.0);
    FAIL();
  } catch (const error& e) {
    EXPECT_EQ(e.kind(), ErrorKind::CoefficientBoundViolated);
  }
}

TEST(NormMatrixTest, H10NormOfSine)
{
  double prev = 0.0;
  for (Eigen::Index n : {99, 199}) {
    const Grid1D g(0.0, M_PI, n);
    const ComplexVector f = GridFunction::sample(g, [](double x) { return std::sin(x); }).values;
    const double err = std::abs(std::pow(h1_0_norm(g).norm(f), 2) - M_PI / 2.0);
    if (prev > 0.0)
      EXPECT_NEAR(prev / err, 4.0, 0.3);
    prev = err;
  }
  EXPECT_LT(prev, 1e-4);
}

TEST(NormMatrixTest, WeightedH2NormOfGaussian)
{
  const Grid1D g(-20.0, 20.0, 2000);
  const ComplexVector f = GridFunction::sample(g, [](double x) { return std::exp(-x * x); }).values;
  const double got = std::pow(weighted_h2_norm(g, 5.0).norm(f), 2);
  const double ref = oracle::simpson([](double x) {
    const double e = std::exp(-x * x), f2 = (4.0 * x * x - 2.0) * e;
    return e * e + f2 * f2 * std::pow(1.0 + std::abs(x), 5.0);
  }, -20.0, 20.0, 40000);
  EXPECT_NEAR(got, ref, 2e-3 * ref);
}
