// Fractional powers of a non-normal accretive matrix, checked by A^a A^(1-a) = A.

#include <cstdio>

#include "fracspec/fracspec.hpp"

using namespace fracspec;

int main()
{
  const Eigen::Index n = 6;
  ComplexMatrix a = ComplexMatrix::Zero(n, n);
  for (Eigen::Index i = 0; i < n; ++i) {
    a(i, i) = complex(1.0 + i, 0.3 * i);
    if (i + 1 < n)
      a(i, i + 1) = 0.5;
  }
  const InnerProduct ip = InnerProduct::uniform(n);

  for (double alpha : {0.2, 0.5, 0.8}) {
    BalakrishnanConfig lo, hi;
    lo.alpha = alpha;
    hi.alpha = 1.0 - alpha;
    const ComplexMatrix p = balakrishnan_power(a, ip, lo);
    const ComplexMatrix q = balakrishnan_power(a, ip, hi);
    const ComplexMatrix inv = negative_power(a, ip, lo);
    std::printf("alpha %.1f  |A^a A^(1-a) - A| / |A| = %.2e   |A^-a A^a - I| = %.2e\n", alpha,
                relative_error(p * q, a), (inv * p - ComplexMatrix::Identity(n, n)).norm());
  }

  const ComplexVector e = general_eigen(balakrishnan_power(a, ip, BalakrishnanConfig{}));
  std::printf("\neigenvalues of A^(1/2):\n");
  for (const complex& z : e)
    std::printf("  %.6f %+.6fi\n", z.real(), z.imag());
}
