#include "gemdpde/asymptotics.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>

#include "gemdpde/mdpde.hpp"
#include "gemdpde/quadrature.hpp"
#include "gemdpde/specfun.hpp"

namespace gemdpde {

double Mat2::operator()(int i, int j) const {
  if (i == 0) return j == 0 ? a11 : a12;
  return j == 0 ? a21 : a22;
}

double Mat2::condition_number() const {
  // singular values from the eigenvalues of A'A
  const double p = a11 * a11 + a21 * a21;
  const double q = a12 * a12 + a22 * a22;
  const double r = a11 * a12 + a21 * a22;
  const double mean = 0.5 * (p + q);
  const double disc = std::sqrt(std::max(0.0, 0.25 * (p - q) * (p - q) + r * r));
  const double smax = std::sqrt(mean + disc);
  // smin * smax = |det|; avoids cancellation in mean - disc
  const double smin = smax > 0.0 ? std::abs(determinant()) / smax : 0.0;
  return smin > 0.0 ? smax / smin : std::numeric_limits<double>::infinity();
}

Mat2 Mat2::inverse() const {
  const double det = determinant();
  if (det == 0.0 || !std::isfinite(det)) throw std::domain_error("Mat2::inverse: singular matrix");
  return {a22 / det, -a12 / det, -a21 / det, a11 / det};
}

Mat2 operator*(const Mat2& l, const Mat2& r) {
  return {l.a11 * r.a11 + l.a12 * r.a21, l.a11 * r.a12 + l.a12 * r.a22,
          l.a21 * r.a11 + l.a22 * r.a21, l.a21 * r.a12 + l.a22 * r.a22};
}

Vec2 operator*(const Mat2& m, const Vec2& v) {
  return {m.a11 * v[0] + m.a12 * v[1], m.a21 * v[0] + m.a22 * v[1]};
}

Mat2 operator-(const Mat2& l, const Mat2& r) {
  return {l.a11 - r.a11, l.a12 - r.a12, l.a21 - r.a21, l.a22 - r.a22};
}

Mat2 outer(const Vec2& u, const Vec2& v) {
  return {u[0] * v[0], u[0] * v[1], u[1] * v[0], u[1] * v[1]};
}

bool j_closed_form_valid(double nu, double alpha) {
  return nu > 1.0 && std::abs((nu - 1.0) * (1.0 + alpha) - 1.0) >= kSingularLineGap;
}

double integrate_density_power(const std::function<double(double)>& g, const GEParams& params,
                               double power) {
  const double lambda = params.lambda();
  const double exponent = power * (params.nu() - 1.0);  // f^power ~ x^exponent near 0
  if (!(exponent > -1.0)) {
    throw std::domain_error("integrate_density_power: integral diverges at the origin");
  }
  auto integrand = [&](double x) {
    if (!(x > 0.0)) return 0.0;
    const double w = std::exp(power * ge_log_pdf(x, params));
    return w == 0.0 ? 0.0 : g(x) * w;
  };

  // Near the origin substitute x = split * t^m so the integrand is O(t) at 0.
  const double split = std::numbers::ln2 / lambda;
  const double m = std::max(1.0, 2.0 / (exponent + 1.0));
  auto lower = [&](double t) {
    if (!(t > 0.0)) return 0.0;
    const double x = split * std::pow(t, m);
    return integrand(x) * split * m * std::pow(t, m - 1.0);
  };
  const double upper_end = ge_quantile(1.0 - 1e-14, params);
  constexpr double kAbs = 1e-15;
  constexpr double kRel = 1e-13;
  const QuadResult low = integrate(lower, 0.0, 1.0, kAbs, kRel);
  const QuadResult high = integrate(integrand, split, std::max(upper_end, 2.0 * split), kAbs, kRel);
  return low.value + high.value;
}

Vec2 xi_vector_quadrature(const GEParams& params, double alpha) {
  const double power = 1.0 + alpha;
  return {integrate_density_power([&](double x) { return score_vector(x, params)[0]; }, params,
                                  power),
          integrate_density_power([&](double x) { return score_vector(x, params)[1]; }, params,
                                  power)};
}

Vec2 xi_vector(const GEParams& params, double alpha) {
  if (params.nu() > 1.0) return weighted_score_integral(params, alpha);
  return xi_vector_quadrature(params, alpha);
}

Mat2 j_matrix_closed_form(const GEParams& params, double alpha) {
  const double lambda = params.lambda();
  const double nu = params.nu();
  const double a1 = 1.0 + alpha;
  const double b = nu * a1 + 1.0;          // (1+alpha) nu + 1
  const double c = a1 * (nu - 1.0) + 1.0;  // (1+alpha)(nu-1) + 1
  const double log_common = std::log(nu) * alpha + log_beta(a1, c);

  const double psi_b = digamma(b);
  const double tri_b = trigamma(b);
  const double psi_1a = digamma(1.0 + alpha);
  const double psi_2a = digamma(2.0 + alpha);
  const double psi_3a = digamma(3.0 + alpha);
  const double psi_c = digamma(c);

  const double d1 = 1.0 + psi_1a - psi_b;
  const double d2 = psi_2a - psi_b;
  const double d3 = psi_3a - psi_b;
  const double bracket11 =
      trigamma(1.0 + alpha) - tri_b + d1 * d1 -
      2.0 * (trigamma(2.0 + alpha) - tri_b + d2 + d2 * d2) +
      (nu - 1.0) * (alpha + 2.0) / ((nu - 1.0) * a1 - 1.0) * (trigamma(3.0 + alpha) - tri_b + d3 * d3);
  const double j11 = std::exp((alpha - 2.0) * std::log(lambda) + std::log(nu) + log_common) * bracket11;

  const double e = 1.0 + nu * (psi_c - psi_b);
  const double bracket22 = nu * nu * (trigamma(c) - tri_b) + e * e;
  const double j22 = std::exp(alpha * std::log(lambda) - std::log(nu) + log_common) * bracket22;

  // The last factor uses psi((1+alpha)(nu-1)) without the +1 carried by its
  // siblings; checked against quadrature, this is the correct form.
  const double bracket12 =
      1.0 + psi_1a - psi_2a + nu * ((psi_c - psi_b) * d1 - d2 * (digamma(a1 * (nu - 1.0)) - psi_b));
  const double j12 = std::exp((alpha - 1.0) * std::log(lambda) + log_common) * bracket12;
  return {j11, j12, j12, j22};
}

Mat2 j_matrix_quadrature(const GEParams& params, double alpha) {
  const double power = 1.0 + alpha;
  auto element = [&](int i, int j) {
    return integrate_density_power(
        [&](double x) {
          const auto u = score_vector(x, params);
          return u[i] * u[j];
        },
        params, power);
  };
  const double j12 = element(0, 1);
  return {element(0, 0), j12, j12, element(1, 1)};
}

Mat2 j_matrix(const GEParams& params, double alpha) {
  if (j_closed_form_valid(params.nu(), alpha)) return j_matrix_closed_form(params, alpha);
  return j_matrix_quadrature(params, alpha);
}

Mat2 k_matrix(const GEParams& params, double alpha) {
  return j_matrix(params, 2.0 * alpha) - [&] {
    const Vec2 xi = xi_vector(params, alpha);
    return outer(xi, xi);
  }();
}

AsympCov sandwich_sigma(const GEParams& params, double alpha) {
  AsympCov cov;
  cov.J = j_matrix(params, alpha);
  cov.xi = xi_vector(params, alpha);
  cov.K = j_matrix(params, 2.0 * alpha) - outer(cov.xi, cov.xi);
  const double cond = cov.J.condition_number();
  if (!(cond <= kMaxConditionNumber)) {
    throw IllConditionedError("sandwich_sigma: J has condition number " + std::to_string(cond) +
                              " at lambda=" + std::to_string(params.lambda()) +
                              ", nu=" + std::to_string(params.nu()) +
                              ", alpha=" + std::to_string(alpha));
  }
  const Mat2 j_inv = cov.J.inverse();
  Mat2 sigma = j_inv * cov.K * j_inv;
  const double off = 0.5 * (sigma.a12 + sigma.a21);
  sigma.a12 = off;
  sigma.a21 = off;
  cov.Sigma = sigma;
  return cov;
}

Vec2 are(const GEParams& params, double alpha) {
  const Mat2 s0 = sandwich_sigma(params, 0.0).Sigma;
  const Mat2 sa = sandwich_sigma(params, alpha).Sigma;
  return {s0.a11 / sa.a11, s0.a22 / sa.a22};
}

namespace {

Vec2 centered_influence(double x, const GEParams& params, double alpha, const Mat2& j_inv,
                        const Vec2& xi) {
  if (!(x > 0.0)) throw std::domain_error("influence_function: x must be positive");
  Vec2 weighted{0.0, 0.0};
  // f^alpha underflows to 0 in both tails, where u f^alpha tends to 0
  const double weight = alpha == 0.0 ? 1.0 : std::exp(alpha * ge_log_pdf(x, params));
  if (weight > 0.0) {
    const Vec2 u = score_vector(x, params);
    weighted = {u[0] * weight, u[1] * weight};
  }
  return j_inv * Vec2{weighted[0] - xi[0], weighted[1] - xi[1]};
}

}  // namespace

Vec2 influence_function(double x, const GEParams& params, double alpha) {
  return centered_influence(x, params, alpha, j_matrix(params, alpha).inverse(),
                            xi_vector(params, alpha));
}

InfluenceCurve influence_curve(const std::vector<double>& xs, const GEParams& params,
                               double alpha) {
  const Mat2 j_inv = j_matrix(params, alpha).inverse();
  const Vec2 xi = xi_vector(params, alpha);
  InfluenceCurve curve;
  curve.xs = xs;
  curve.alpha = alpha;
  curve.if_lambda.reserve(xs.size());
  curve.if_nu.reserve(xs.size());
  for (double x : xs) {
    const Vec2 v = centered_influence(x, params, alpha, j_inv, xi);
    curve.if_lambda.push_back(v[0]);
    curve.if_nu.push_back(v[1]);
  }
  return curve;
}

}  // namespace gemdpde
