#ifndef CBAL_NORMAL_HPP
#define CBAL_NORMAL_HPP

namespace cbal {

/// Standard normal density at x.
double norm_pdf(double x);

/// Density of N(mean, var) at x. var must be positive.
double norm_pdf(double x, double mean, double var);

/// Standard normal cdf, accurate to ~1e-16 relative over the full range.
double norm_cdf(double x);

/// Cdf of N(mean, var) at x. var must be positive.
double norm_cdf(double x, double mean, double var);

/// Inverse standard normal cdf on (0,1). Acklam's rational approximation
/// polished with one Halley step against the erfc-based cdf.
double norm_quantile(double p);

/// Quantile of N(mean, var). var must be positive.
double norm_quantile(double p, double mean, double var);

}  // namespace cbal

#endif
