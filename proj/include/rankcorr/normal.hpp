#pragma once

namespace rankcorr::normal {

double pdf(double x) noexcept;
double cdf(double x) noexcept;
/// Upper tail 1 - cdf(x), accurate for large x.
double sf(double x) noexcept;
/// Inverse of cdf on (0, 1).
double quantile(double p);
/// Inverse of sf on (0, 1): returns x with sf(x) = q, accurate for small q.
double upper_quantile(double q);

/// P(X > h, Y > k) for a standard bivariate normal with correlation r.
/// Absolute error below 1e-14 over the whole plane.
double bivariate_upper(double h, double k, double r);
/// P(X <= x, Y <= y) for a standard bivariate normal with correlation r.
double bivariate_cdf(double x, double y, double r);
double bivariate_pdf(double x, double y, double r) noexcept;

}  // namespace rankcorr::normal
