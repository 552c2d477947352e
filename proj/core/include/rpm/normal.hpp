#pragma once

namespace rpm {

double normal_pdf(double z);
double normal_cdf(double z);

/// Inverse of normal_cdf by bisection; p must lie in (0, 1).
double normal_quantile(double p);

/// Median of |z| for z ~ N(0, 1), i.e. normal_quantile(0.75).
double half_normal_median();

}  // namespace rpm
