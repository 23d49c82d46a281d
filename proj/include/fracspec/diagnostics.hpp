#ifndef FRACSPEC_DIAGNOSTICS_HPP
#define FRACSPEC_DIAGNOSTICS_HPP

// Spectral diagnostics: numerical range and sector, H1/H2 constants,
// sectorial factorization, s-number decay, Schatten sums, the eigenvalue
// inequality, eigenvalue asymptotics and the completeness criterion.

#include <cmath>
#include <cstdint>
#include <limits>
#include <numbers>
#include <optional>
#include <random>
#include <vector>

#include "fracspec/discretize.hpp"
#include "fracspec/numcore.hpp"
#include "fracspec/parallel.hpp"

namespace fracspec {

struct SectorEstimate {
  double vertex = 0.0;
  double semi_angle = 0.0;
  std::vector<complex> boundary; // counterclockwise
  bool sectorial() const { return semi_angle < std::numbers::pi / 2.0; }
};

/// Boundary of the numerical range by the support function: for each outward
/// normal e^{i phi} the extreme point is the Rayleigh quotient of the top
/// eigenvector of Herm(e^{-i phi} M). The vertex defaults to the smallest real
/// part on the boundary.
inline SectorEstimate numerical_range(const ComplexMatrix& m, const InnerProduct& ip, int n_angles,
                                      std::optional<double> vertex = std::nullopt)
{
  if (n_angles < 16)
    throw error(ErrorKind::InvalidArgument, "numerical_range needs at least 16 angles");
  const ComplexMatrix mt = whiten(m, ip);
  std::vector<complex> pts(static_cast<std::size_t>(n_angles));
  parallel_for(pts.size(), [&](std::size_t k) {
    const double phi = 2.0 * std::numbers::pi * static_cast<double>(k) / n_angles;
    const complex rot = std::polar(1.0, -phi);
    const ComplexMatrix h = 0.5 * (rot * mt + std::conj(rot) * mt.adjoint());
    Eigen::SelfAdjointEigenSolver<ComplexMatrix> es(h);
    if (es.info() != Eigen::Success)
      throw error(ErrorKind::NoConvergence, "numerical range eigensolver did not converge");
    const ComplexVector v = es.eigenvectors().col(h.rows() - 1);
    pts[k] = v.dot(mt * v) / v.squaredNorm();
  });
  SectorEstimate s;
  s.boundary = pts;
  double gamma = std::numeric_limits<double>::infinity();
  for (const auto& z : pts)
    gamma = std::min(gamma, z.real());
  s.vertex = vertex.value_or(gamma);
  const double scale = std::max(1.0, std::abs(s.vertex));
  for (const auto& z : pts) {
    const complex d = z - s.vertex;
    if (vertex.has_value()) {
      if (std::abs(d) > 1e-14 * scale)
        s.semi_angle = std::max(s.semi_angle, std::abs(std::arg(d)));
    } else if (d.real() > 1e-14 * scale) {
      s.semi_angle = std::max(s.semi_angle, std::abs(std::arg(d)));
    }
  }
  return s;
}

struct H1H2Report {
  double C1 = 0.0;
  double C2 = 0.0;
  double C2_sampled = 0.0; // min over random probes, always >= C2
  bool verdict = false;
};

/// C2 = min eig of P^{-1/2} Herm(W L) P^{-1/2}, C1 = ||P^{-1/2} W L P^{-1/2}||,
/// where P is the Gram matrix of the + norm and W the ip weights.
inline H1H2Report verify_H1_H2(const ComplexMatrix& l, const NormMatrix& hplus, const InnerProduct& ip,
                               int samples = 100, std::uint64_t seed = 0)
{
  detail::require_match(l, ip, "verify_H1_H2");
  if (hplus.gram.rows() != l.rows())
    throw error(ErrorKind::InvalidArgument, "verify_H1_H2: norm matrix size does not match");
  Eigen::SelfAdjointEigenSolver<ComplexMatrix> ps(0.5 * (hplus.gram + hplus.gram.adjoint()));
  if (ps.info() != Eigen::Success)
    throw error(ErrorKind::NoConvergence, "norm matrix eigensolver did not converge");
  if (!(ps.eigenvalues()(0) > 1e-14 * ps.eigenvalues().cwiseAbs().maxCoeff()))
    throw error(ErrorKind::NotPositiveDefinite, "+ norm matrix is not positive definite");
  const ComplexMatrix pinv_half = ps.eigenvectors() *
                                  ps.eigenvalues().cwiseSqrt().cwiseInverse().cast<complex>().asDiagonal() *
                                  ps.eigenvectors().adjoint();
  const ComplexMatrix s = ip.weights().cast<complex>().asDiagonal() * l;
  const ComplexMatrix ws = pinv_half * s * pinv_half;
  H1H2Report r;
  Eigen::SelfAdjointEigenSolver<ComplexMatrix> hs(0.5 * (ws + ws.adjoint()), Eigen::EigenvaluesOnly);
  if (hs.info() != Eigen::Success)
    throw error(ErrorKind::NoConvergence, "H2 eigensolver did not converge");
  r.C2 = hs.eigenvalues()(0);
  r.C1 = spectral_norm(ws);
  r.verdict = r.C2 > 0.0;
  std::mt19937_64 rng(seed);
  std::normal_distribution<double> normal;
  r.C2_sampled = std::numeric_limits<double>::infinity();
  for (int k = 0; k < samples; ++k) {
    ComplexVector f(l.rows());
    for (Eigen::Index i = 0; i < f.size(); ++i)
      f[i] = complex(normal(rng), normal(rng));
    const double num = f.dot(s * f).real();
    const double den = f.dot(hplus.gram * f).real();
    r.C2_sampled = std::min(r.C2_sampled, num / den);
  }
  return r;
}

struct SectorialFactors {
  ComplexMatrix H;          // ip-Hermitian part
  ComplexMatrix H_half;     // H^{1/2}
  ComplexMatrix H_inv_half; // H^{-1/2}
  ComplexMatrix B;          // H^{-1/2} Im(W) H^{-1/2}, ip-self-adjoint
  double reconstruction_residual = 0.0; // ||H^{1/2}(I+iB)H^{1/2} - W|| / ||W||
};

inline SectorialFactors sectorial_factorize(const ComplexMatrix& w, const InnerProduct& ip)
{
  SectorialFactors f;
  f.H = hermitian_part(w, ip);
  f.H_half = herm_power(f.H, 0.5, ip);
  f.H_inv_half = herm_power(f.H, -0.5, ip);
  f.B = f.H_inv_half * imaginary_part(w, ip) * f.H_inv_half;
  const ComplexMatrix id = ComplexMatrix::Identity(w.rows(), w.cols());
  const ComplexMatrix rebuilt = f.H_half * (id + complex(0.0, 1.0) * f.B) * f.H_half;
  f.reconstruction_residual = operator_norm(rebuilt - w, ip) / std::max(operator_norm(w, ip), 1e-300);
  return f;
}

/// Semi-angle of the smallest sector with vertex 0 containing the numerical
/// range: arctan of the largest |eigenvalue| of B.
inline double sector_angle_from_factors(const SectorialFactors& f, const InnerProduct& ip)
{
  const ComplexMatrix b = whiten(f.B, ip);
  Eigen::SelfAdjointEigenSolver<ComplexMatrix> es(0.5 * (b + b.adjoint()), Eigen::EigenvaluesOnly);
  if (es.info() != Eigen::Success)
    throw error(ErrorKind::NoConvergence, "eigensolver for B did not converge");
  return std::atan(es.eigenvalues().cwiseAbs().maxCoeff());
}

struct ResolventRealPartReport {
  double norm_re_resolvent = 0.0;
  double defect_factor_one = 0.0;  // ||Re R - H^{-1/2}(I+B^2)^{-1}H^{-1/2}||
  double defect_factor_half = 0.0; // ||Re R - (1/2) H^{-1/2}(I+B^2)^{-1}H^{-1/2}||
  double relative_factor_one() const { return defect_factor_one / std::max(norm_re_resolvent, 1e-300); }
  double relative_factor_half() const { return defect_factor_half / std::max(norm_re_resolvent, 1e-300); }
};

inline ResolventRealPartReport realpart_resolvent_check(const ComplexMatrix& w, const InnerProduct& ip)
{
  const SectorialFactors f = sectorial_factorize(w, ip);
  const ComplexMatrix re_r = hermitian_part(inverse(w), ip);
  const ComplexMatrix id = ComplexMatrix::Identity(w.rows(), w.cols());
  const ComplexMatrix formula = f.H_inv_half * inverse(id + f.B * f.B) * f.H_inv_half;
  ResolventRealPartReport r;
  r.norm_re_resolvent = operator_norm(re_r, ip);
  r.defect_factor_one = operator_norm(re_r - formula, ip);
  r.defect_factor_half = operator_norm(re_r - 0.5 * formula, ip);
  return r;
}

struct OrderFit {
  double mu = 0.0;
  double r2 = 0.0;
  Eigen::Index used = 0;
};

/// mu from the least-squares slope of log s_n against log n over the first
/// `fraction` of the values.
inline OrderFit order_estimate(const RealVector& svals, double fraction = 0.5)
{
  if (svals.size() < 16)
    throw error(ErrorKind::InvalidArgument, "order_estimate needs at least 16 singular values");
  if (!(svals.minCoeff() > 0.0))
    throw error(ErrorKind::InvalidArgument, "order_estimate needs positive singular values");
  if (svals.maxCoeff() == svals.minCoeff())
    throw error(ErrorKind::DegenerateFit, "all singular values are equal");
  const auto m = std::max<Eigen::Index>(2, static_cast<Eigen::Index>(fraction * svals.size()));
  double sx = 0, sy = 0, sxx = 0, sxy = 0, syy = 0;
  for (Eigen::Index i = 0; i < m; ++i) {
    const double x = std::log(static_cast<double>(i + 1));
    const double y = std::log(svals[i]);
    sx += x;
    sy += y;
    sxx += x * x;
    sxy += x * y;
    syy += y * y;
  }
  const double md = static_cast<double>(m);
  const double vx = sxx - sx * sx / md, vy = syy - sy * sy / md, cxy = sxy - sx * sy / md;
  if (!(vy > 0.0))
    throw error(ErrorKind::DegenerateFit, "singular values are constant over the fitted range");
  OrderFit fit;
  fit.mu = -cxy / vx;
  fit.r2 = cxy * cxy / (vx * vy);
  fit.used = m;
  return fit;
}

struct SchattenReport {
  double predicted_p = 1.0;
  bool strict = false;          // true: p must exceed predicted_p
  std::vector<double> partial;  // running sums of s_i^p at p = evaluated_p
  double evaluated_p = 1.0;
  double cauchy_tail = 0.0;     // share of the total carried by the second half
  bool cauchy_converged = false; // cauchy_tail < 1e-6
};

/// Predicted class: p = 1 for mu > 1, any p > 2/mu for mu <= 1.
inline SchattenReport schatten_classify(const RealVector& svals, double mu,
                                        std::optional<double> p = std::nullopt)
{
  if (!(mu > 0.0))
    throw error(ErrorKind::InvalidArgument, "schatten_classify needs mu > 0");
  SchattenReport r;
  if (mu > 1.0) {
    r.predicted_p = 1.0;
    r.strict = false;
  } else {
    r.predicted_p = 2.0 / mu;
    r.strict = true;
  }
  r.evaluated_p = p.value_or(r.strict ? r.predicted_p + 0.1 : r.predicted_p);
  double acc = 0.0;
  for (Eigen::Index i = 0; i < svals.size(); ++i) {
    acc += std::pow(svals[i], r.evaluated_p);
    r.partial.push_back(acc);
  }
  const std::size_t half = r.partial.size() / 2;
  const double total = r.partial.empty() ? 0.0 : r.partial.back();
  r.cauchy_tail = total > 0.0 && half > 0 ? (total - r.partial[half - 1]) / total : 0.0;
  r.cauchy_converged = r.cauchy_tail < 1e-6;
  return r;
}

struct RefinementVerdict {
  double sum_coarse = 0.0;
  double sum_fine = 0.0;
  double relative_change = 0.0;
  bool convergent = false; // change within 5%
};

/// Two-point refinement test on sum s_i^p computed at n and 2n.
inline RefinementVerdict schatten_refinement(const RealVector& coarse, const RealVector& fine, double p)
{
  RefinementVerdict v;
  v.sum_coarse = coarse.array().pow(p).sum();
  v.sum_fine = fine.array().pow(p).sum();
  v.relative_change = std::abs(v.sum_fine - v.sum_coarse) / std::max(std::abs(v.sum_fine), 1e-300);
  v.convergent = v.relative_change <= 0.05;
  return v;
}

struct InequalityProfile {
  std::vector<double> ratio; // rho_n for n = 1..N
  double sup = 0.0;
};

/// rho_n = sum_{i<=n} |lambda_i(R_W)|^p / sum_{i<=n} lambda_i(R_H)^p.
inline InequalityProfile eigenvalue_inequality(const ComplexMatrix& r_w, const ComplexMatrix& r_h,
                                               const InnerProduct& ip, double p)
{
  if (!(p >= 1.0))
    throw error(ErrorKind::InvalidArgument, "eigenvalue_inequality needs p >= 1");
  const ComplexVector lw = general_eigen(r_w);
  const RealVector lh_asc = hermitian_eigen(r_h, ip).values;
  if (!(lh_asc.minCoeff() > 0.0))
    throw error(ErrorKind::NotPositiveDefinite, "R_H must be positive");
  const Eigen::Index n = std::min(lw.size(), lh_asc.size());
  InequalityProfile prof;
  double num = 0.0, den = 0.0;
  for (Eigen::Index i = 0; i < n; ++i) {
    num += std::pow(std::abs(lw[i]), p);
    den += std::pow(lh_asc[lh_asc.size() - 1 - i], p);
    prof.ratio.push_back(num / den);
    prof.sup = std::max(prof.sup, num / den);
  }
  return prof;
}

struct AsymptoticsVerdict {
  bool pass = false;
  double slope = 0.0;     // LS slope of log(i^{mu-eps} |lambda_i|) against log i
  double max_value = 0.0; // max of i^{mu-eps} |lambda_i| over the range
};

inline AsymptoticsVerdict asymptotics_check(const ComplexVector& eigenvalues, double mu, double eps,
                                            double fraction = 0.5)
{
  if (!(eps > 0.0))
    throw error(ErrorKind::InvalidArgument, "asymptotics_check needs eps > 0");
  const auto m = std::max<Eigen::Index>(2, static_cast<Eigen::Index>(fraction * eigenvalues.size()));
  AsymptoticsVerdict v;
  double sx = 0, sy = 0, sxx = 0, sxy = 0;
  for (Eigen::Index i = 0; i < m; ++i) {
    const double idx = static_cast<double>(i + 1);
    const double a = std::pow(idx, mu - eps) * std::abs(eigenvalues[i]);
    v.max_value = std::max(v.max_value, a);
    const double x = std::log(idx), y = std::log(a);
    sx += x;
    sy += y;
    sxx += x * x;
    sxy += x * y;
  }
  const double md = static_cast<double>(m);
  v.slope = (sxy - sx * sy / md) / (sxx - sx * sx / md);
  v.pass = v.slope < 0.0;
  return v;
}

inline bool completeness_criterion(double theta, double mu)
{
  if (!(mu >= 0.0))
    throw error(ErrorKind::InvalidArgument, "completeness_criterion needs mu >= 0");
  return theta < std::numbers::pi * mu / 2.0;
}

inline bool completeness_criterion(const SectorEstimate& sector, double mu)
{
  return completeness_criterion(sector.semi_angle, mu);
}

struct MAccretiveReport {
  bool hermitian_ok = false;
  double min_hermitian_eigenvalue = 0.0;
  std::vector<double> t;
  std::vector<double> resolvent_norm_times_t; // t ||(A + t)^{-1}||, inf when singular
  std::vector<bool> resolvent_ok;
  bool pass = false;
};

inline MAccretiveReport maccretive_check(const ComplexMatrix& a, const InnerProduct& ip,
                                         const std::vector<double>& t_samples)
{
  MAccretiveReport r;
  r.min_hermitian_eigenvalue = min_hermitian_part_eigenvalue(a, ip);
  r.hermitian_ok = is_accretive(a, ip);
  bool all = true;
  for (double t : t_samples) {
    if (!(t > 0.0))
      throw error(ErrorKind::InvalidArgument, "maccretive_check needs t > 0");
    ComplexMatrix shifted = a;
    shifted.diagonal().array() += t;
    double scaled = std::numeric_limits<double>::infinity();
    try {
      scaled = t * operator_norm(inverse(shifted), ip);
    } catch (const error& e) {
      if (e.kind() != ErrorKind::IllConditioned)
        throw;
    }
    const bool ok = scaled <= 1.0 + 1e-8;
    r.t.push_back(t);
    r.resolvent_norm_times_t.push_back(scaled);
    r.resolvent_ok.push_back(ok);
    all = all && ok;
  }
  r.pass = r.hermitian_ok && all;
  return r;
}

struct ResolventSpectrum {
  ComplexVector eigenvalues; // of R = L^{-1}, descending modulus
  RealVector svals;          // ip singular values of R, descending
};

inline ResolventSpectrum resolvent_spectrum(const ComplexMatrix& l, const InnerProduct& ip)
{
  const ComplexMatrix r = inverse(l);
  return ResolventSpectrum{general_eigen(r), singular_values(r, ip)};
}

} // namespace fracspec

#endif // FRACSPEC_DIAGNOSTICS_HPP
