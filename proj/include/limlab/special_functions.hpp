#pragma once

#include <cstdint>

namespace limlab {

/// log Γ(x) for x > 0; reentrant (no global sign state).
double log_gamma(double x);

/// log B(a, b).
double log_beta(double a, double b);

/// log of the Poisson(mean) pmf at k, via the saddle-point form
/// −stirlerr(k) − bd0(k, mean) − ½ log(2πk), accurate to a few ulps of the
/// pmf even when mean is in the tens of thousands.
double poisson_log_pmf(std::int64_t k, double mean);

/// Chernoff bound on P(X >= x) for X ~ Poisson(mean), x > mean.
double poisson_upper_tail_bound(double x, double mean);

/// Regularized incomplete beta I_x(a, b), by the modified-Lentz continued
/// fraction with the symmetry split at x = (a + 1) / (a + b + 2).
double regularized_incomplete_beta(double a, double b, double x);

/// Standard normal cdf.
double normal_cdf(double z);

}  // namespace limlab
