// Spectral picture of L = -(a f')' + rho D^alpha f on (0, 1) as the grid is refined.

#include <cstdio>

#include "fracspec/fracspec.hpp"

using namespace fracspec;

int main()
{
  std::printf("%6s %10s %10s %10s %12s %10s\n", "n", "mu", "r2", "theta", "sum s_i", "complete");
  for (Eigen::Index n : {64, 128, 256}) {
    const Grid1D g(0.0, 1.0, n);
    const KipriyanovModel m =
        build_kipriyanov_1d(g, Coefficient::parse("poly:2,1"), Coefficient::parse("const:0.5"), 0.25, 0.5);
    const InnerProduct& ip = m.L.ip;

    const ResolventSpectrum rs = resolvent_spectrum(m.L.matrix, ip);
    const OrderFit fit = order_estimate(rs.svals);
    const SchattenReport cls = schatten_classify(rs.svals, fit.mu);
    const double theta = sector_angle_from_factors(sectorial_factorize(m.L.matrix, ip), ip);

    std::printf("%6ld %10.4f %10.6f %10.2e %12.6f %10s\n", static_cast<long>(n), fit.mu, fit.r2, theta,
                cls.partial.back(), completeness_criterion(theta, fit.mu) ? "yes" : "no");
  }

  const Grid1D g(0.0, 1.0, 128);
  const KipriyanovModel m =
      build_kipriyanov_1d(g, Coefficient::parse("poly:2,1"), Coefficient::parse("const:0.5"), 0.25, 0.5);
  const ClassReport k = check_class(m.spec);
  std::printf("\nclass check: gamma_G = %.4f, threshold = %.4f, member = %s\n", k.gamma_G, k.threshold,
              k.member ? "yes" : "no");
}
