#pragma once

namespace gemdpde {

/// Polygamma of order 0 (digamma), 1 (trigamma) or 2 (tetragamma) for x > 0.
/// Throws std::domain_error for other orders, x <= 0 or non-finite x.
double polygamma(int order, double x);

inline double digamma(double x) { return polygamma(0, x); }
inline double trigamma(double x) { return polygamma(1, x); }
inline double tetragamma(double x) { return polygamma(2, x); }

/// log Gamma(x) for x > 0 (Lanczos, g = 7, nine coefficients).
double log_gamma(double x);

/// log B(a, b) for a, b > 0.
double log_beta(double a, double b);

inline constexpr double kEulerGamma = 0.57721566490153286060651209008240243;

}  // namespace gemdpde
