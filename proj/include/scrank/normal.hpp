#pragma once

#include <cmath>
#include <limits>

// Standard normal density, CDF, and quantile in double and long double.
// The long double variants exist for potential-function evaluation, where
// differences between successive values can sit many orders of magnitude
// below the values themselves.

namespace scrank {

inline constexpr double kInvSqrt2Pi = 0.39894228040143267794;
inline constexpr double kSqrt2 = 1.41421356237309504880;
inline constexpr long double kInvSqrt2PiL = 0.398942280401432677939946059934381868476L;
inline constexpr long double kSqrt2L = 1.414213562373095048801688724209698079L;

inline double std_normal_pdf(double x) {
  return kInvSqrt2Pi * std::exp(-0.5 * x * x);
}

inline long double std_normal_pdf_l(long double x) {
  return kInvSqrt2PiL * std::exp(-0.5L * x * x);
}

inline double std_normal_cdf(double x) {
  return 0.5 * std::erfc(-x / kSqrt2);
}

inline long double std_normal_cdf_l(long double x) {
  return 0.5L * std::erfc(-x / kSqrt2L);
}

namespace detail {

// Rational initial guess for the normal quantile (relative error ~1e-9),
// refined below by a Halley step to full double precision.
inline double normal_quantile_estimate(double p) {
  static constexpr double a[6] = {-3.969683028665376e+01, 2.209460984245205e+02,
                                  -2.759285104469687e+02, 1.383577518672690e+02,
                                  -3.066479806614716e+01, 2.506628277459239e+00};
  static constexpr double b[5] = {-5.447609879822406e+01, 1.615858368580409e+02,
                                  -1.556989798598866e+02, 6.680131188771972e+01,
                                  -1.328068155288572e+01};
  static constexpr double c[6] = {-7.784894002430293e-03, -3.223964580411365e-01,
                                  -2.400758277161838e+00, -2.549732539343734e+00,
                                  4.374664141464968e+00,  2.938163982698783e+00};
  static constexpr double d[4] = {7.784695709041462e-03, 3.224671290700398e-01,
                                  2.445134137142996e+00, 3.754408661907416e+00};
  constexpr double p_low = 0.02425;
  if (p < p_low) {
    const double q = std::sqrt(-2.0 * std::log(p));
    return (((((c[0] * q + c[1]) * q + c[2]) * q + c[3]) * q + c[4]) * q + c[5]) /
           ((((d[0] * q + d[1]) * q + d[2]) * q + d[3]) * q + 1.0);
  }
  if (p > 1.0 - p_low) {
    const double q = std::sqrt(-2.0 * std::log(1.0 - p));
    return -(((((c[0] * q + c[1]) * q + c[2]) * q + c[3]) * q + c[4]) * q + c[5]) /
           ((((d[0] * q + d[1]) * q + d[2]) * q + d[3]) * q + 1.0);
  }
  const double q = p - 0.5;
  const double r = q * q;
  return (((((a[0] * r + a[1]) * r + a[2]) * r + a[3]) * r + a[4]) * r + a[5]) * q /
         (((((b[0] * r + b[1]) * r + b[2]) * r + b[3]) * r + b[4]) * r + 1.0);
}

}  // namespace detail

// Inverse of std_normal_cdf. Returns -inf at 0, +inf at 1, NaN outside [0,1].
inline double std_normal_quantile(double p) {
  if (std::isnan(p) || p < 0.0 || p > 1.0) {
    return std::numeric_limits<double>::quiet_NaN();
  }
  if (p == 0.0) return -std::numeric_limits<double>::infinity();
  if (p == 1.0) return std::numeric_limits<double>::infinity();
  double x = detail::normal_quantile_estimate(p);
  // One Halley step; skipped where the density underflows (far tails,
  // where the estimate's absolute error is already negligible).
  const double f = std_normal_pdf(x);
  if (f > 0.0) {
    const double e = std_normal_cdf(x) - p;
    const double u = e / f;
    x -= u / (1.0 + 0.5 * x * u);
  }
  return x;
}

inline long double std_normal_quantile_l(long double p) {
  if (std::isnan(p) || p < 0.0L || p > 1.0L) {
    return std::numeric_limits<long double>::quiet_NaN();
  }
  if (p == 0.0L) return -std::numeric_limits<long double>::infinity();
  if (p == 1.0L) return std::numeric_limits<long double>::infinity();
  long double x = std_normal_quantile(static_cast<double>(p));
  if (!std::isfinite(x)) {
    // p rounded to 0 or 1 in double but is strictly inside (0,1).
    x = (x > 0.0L) ? 38.0L : -38.0L;
  }
  for (int pass = 0; pass < 2; ++pass) {
    const long double f = std_normal_pdf_l(x);
    if (f <= 0.0L) break;
    const long double e = std_normal_cdf_l(x) - p;
    const long double u = e / f;
    x -= u / (1.0L + 0.5L * x * u);
  }
  return x;
}

}  // namespace scrank
