#pragma once

#include <array>
#include <functional>
#include <stdexcept>
#include <string>
#include <vector>

#include "gemdpde/gedist.hpp"

namespace gemdpde {

using Vec2 = std::array<double, 2>;

/// 2x2 matrix, row-major.
struct Mat2 {
  double a11 = 0.0, a12 = 0.0, a21 = 0.0, a22 = 0.0;

  double operator()(int i, int j) const;
  double determinant() const { return a11 * a22 - a12 * a21; }
  /// Ratio of largest to smallest singular value.
  double condition_number() const;
  /// Adjugate inverse; throws std::domain_error on a zero determinant.
  Mat2 inverse() const;
  Mat2 transpose() const { return {a11, a21, a12, a22}; }

  friend Mat2 operator*(const Mat2& l, const Mat2& r);
  friend Vec2 operator*(const Mat2& m, const Vec2& v);
  friend Mat2 operator-(const Mat2& l, const Mat2& r);
};

Mat2 outer(const Vec2& u, const Vec2& v);

/// Sandwich building blocks and covariance of sqrt(n)(theta_hat - theta).
struct AsympCov {
  Mat2 J;
  Mat2 K;
  Vec2 xi;
  Mat2 Sigma;
};

struct InfluenceCurve {
  std::vector<double> xs;
  std::vector<double> if_lambda;
  std::vector<double> if_nu;
  double alpha = 0.0;
};

/// Raised when J is singular or too ill-conditioned to invert.
class IllConditionedError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

inline constexpr double kMaxConditionNumber = 1e12;
inline constexpr double kSingularLineGap = 1e-6;

/// True where the printed J closed forms apply: nu > 1 away from
/// nu = (2+alpha)/(1+alpha).
bool j_closed_form_valid(double nu, double alpha);

/// Integral of g(x) f(x)^power over (0, inf) by adaptive Gauss-Kronrod.
/// Requires power * (nu - 1) > -1.
double integrate_density_power(const std::function<double(double)>& g, const GEParams& params,
                               double power);

/// xi_alpha = integral of u f^(1+alpha). Closed form for nu > 1, quadrature
/// for alpha/(1+alpha) < nu <= 1.
Vec2 xi_vector(const GEParams& params, double alpha);
Vec2 xi_vector_quadrature(const GEParams& params, double alpha);

/// J_alpha = integral of u u' f^(1+alpha).
Mat2 j_matrix(const GEParams& params, double alpha);
Mat2 j_matrix_closed_form(const GEParams& params, double alpha);
Mat2 j_matrix_quadrature(const GEParams& params, double alpha);

/// K_alpha = J_{2 alpha} - xi xi'.
Mat2 k_matrix(const GEParams& params, double alpha);

/// Sigma = J^-1 K J^-1 together with its ingredients.
AsympCov sandwich_sigma(const GEParams& params, double alpha);

/// (Sigma11(0)/Sigma11(alpha), Sigma22(0)/Sigma22(alpha)).
Vec2 are(const GEParams& params, double alpha);

/// J^-1 (u(x) f^alpha(x) - xi).
Vec2 influence_function(double x, const GEParams& params, double alpha);
InfluenceCurve influence_curve(const std::vector<double>& xs, const GEParams& params,
                               double alpha);

}  // namespace gemdpde
