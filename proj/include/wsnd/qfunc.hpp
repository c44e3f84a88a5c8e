#pragma once

namespace wsnd {

/// Gaussian tail probability Q(x) = P(Z > x), Z ~ N(0,1).
double q_function(double x);

/// Inverse of q_function on (0,1).
///
/// Acklam's rational approximation of the normal quantile followed by one
/// Halley step against erfc. Absolute error is below 1e-12 on (1e-10, 1 - 1e-10).
/// Throws UsageError outside (0,1).
double q_inverse(double p);

} // namespace wsnd
