#include "doctest.h"
#include "gemdpde/estimators.hpp"
#include "gemdpde/mdpde.hpp"
#include "oracles.hpp"

using namespace gemdpde;

namespace {

double oracle_int_f_power(double lambda, double nu, double alpha) {
  return oracle::integrate_0_inf(
      [&](double x) {
        return static_cast<double>(std::pow(oracle::ge_pdf(x, lambda, nu), 1.0L + alpha));
      },
      lambda);
}

}  // namespace

TEST_CASE("integral of f^(1+alpha) matches quadrature") {
  for (double lambda : {0.5, 1.0, 2.0}) {
    for (double nu : {0.6, 1.2, 1.5, 3.0}) {
      for (double alpha : {0.1, 0.2, 0.5, 1.0}) {
        if (nu <= nu_threshold(alpha) + 0.05) continue;
        INFO(lambda << " " << nu << " " << alpha);
        CHECK(oracle::rel_err(integral_density_power(GEParams(lambda, nu), alpha),
                              oracle_int_f_power(lambda, nu, alpha)) < 1e-9);
      }
    }
  }
}

TEST_CASE("integral diverges below the shape threshold") {
  CHECK(nu_threshold(1.0) == 0.5);
  CHECK(std::isinf(integral_density_power(GEParams(1, 0.5), 1.0)));
  CHECK(std::isinf(h_objective(std::vector<double>{1, 2, 3}, GEParams(1, 0.4), 1.0)));
  CHECK_THROWS_AS(estimating_equations(std::vector<double>{1, 2, 3}, GEParams(1, 0.4), 1.0),
                  std::domain_error);
}

TEST_CASE("v_alpha special cases") {
  const GEParams p(1, 1.5);
  CHECK(v_alpha(0.7, p, 0) == doctest::Approx(-ge_log_pdf(0.7, p)).epsilon(1e-15));
  for (double x : {0.1, 1.0, 3.0}) {
    CHECK(v_alpha(x, GEParams(1, 1), 1.0) == doctest::Approx(0.5 - 2 * std::exp(-x)).epsilon(1e-14));
  }
  const double want = oracle_int_f_power(1, 1.5, 0.5) - 3.0 * std::sqrt(ge_pdf(1.0, p));
  CHECK(v_alpha(1.0, p, 0.5) == doctest::Approx(want).epsilon(1e-10));
}

TEST_CASE("h_objective is the mean of v_alpha") {
  const GEParams p(1.3, 2.1);
  const std::vector<double> two{0.4, 2.5};
  for (double alpha : {0.0, 0.3, 1.0}) {
    CHECK(h_objective(two, p, alpha) ==
          doctest::Approx(0.5 * (v_alpha(0.4, p, alpha) + v_alpha(2.5, p, alpha))).epsilon(1e-14));
  }
  const Sample s = ge_sample(30, p, 3);
  CHECK(h_objective(s.values, p, 0) == doctest::Approx(-mean_log_likelihood(s.values, p)).epsilon(1e-14));
}

TEST_CASE("score vector") {
  const auto u = score_vector(2.0, GEParams(1.5, 1.0));
  CHECK(u[0] == doctest::Approx(1 / 1.5 - 2.0).epsilon(1e-15));
  CHECK(u[1] == doctest::Approx(1 + std::log(-std::expm1(-3.0))).epsilon(1e-15));
  const auto far = score_vector(200.0, GEParams(1, 1.5));
  CHECK(far[0] < -190);
  CHECK(far[1] == doctest::Approx(1 / 1.5).epsilon(1e-12));
  for (double lambda : {0.5, 2.0}) {
    for (double nu : {0.7, 1.5, 4.0}) {
      for (int k = 0; k < 2; ++k) {
        const double mean = oracle::integrate_0_inf(
            [&](double x) {
              const auto s = score_vector(x, GEParams(lambda, nu));
              return s[k] * ge_pdf(x, GEParams(lambda, nu));
            },
            lambda);
        CHECK(std::abs(mean) < 1e-9);
      }
    }
  }
}

TEST_CASE("weighted score integral matches quadrature") {
  for (double lambda : {0.5, 1.0, 2.0}) {
    for (double nu : {0.8, 1.2, 1.5, 3.0}) {
      for (double alpha : {0.0, 0.1, 0.3, 0.5, 1.0}) {
        if (nu <= nu_threshold(alpha) + 0.05) continue;
        const auto closed = weighted_score_integral(GEParams(lambda, nu), alpha);
        const double want0 = oracle::integrate_0_inf(
            [&](double x) {
              return static_cast<double>(oracle::score_lambda(x, lambda, nu) *
                                         std::pow(oracle::ge_pdf(x, lambda, nu), 1.0L + alpha));
            },
            lambda);
        const double want1 = oracle::integrate_0_inf(
            [&](double x) {
              return static_cast<double>(oracle::score_nu(x, lambda, nu) *
                                         std::pow(oracle::ge_pdf(x, lambda, nu), 1.0L + alpha));
            },
            lambda);
        INFO(lambda << " " << nu << " " << alpha);
        if (alpha == 0.0) {
          CHECK(std::abs(closed[0]) < 1e-14);
          CHECK(std::abs(closed[1]) < 1e-14);
        } else {
          CHECK(oracle::rel_err(closed[0], want0) < 1e-9);
          CHECK(oracle::rel_err(closed[1], want1) < 1e-9);
        }
      }
    }
  }
}

TEST_CASE("estimating equations match a direct evaluation") {
  const Sample s = ge_sample(20, GEParams(1, 1.5), 20);
  const double alpha = 0.3;
  const GEParams p(1.1, 1.4);
  double d0 = 0, d1 = 0;
  for (double x : s.values) {
    const double w = std::pow(ge_pdf(x, p), alpha);
    d0 += static_cast<double>(oracle::score_lambda(x, 1.1, 1.4)) * w;
    d1 += static_cast<double>(oracle::score_nu(x, 1.1, 1.4)) * w;
  }
  const double i0 = oracle::integrate_0_inf(
      [&](double x) {
        return static_cast<double>(oracle::score_lambda(x, 1.1, 1.4) *
                                   std::pow(oracle::ge_pdf(x, 1.1, 1.4), 1.3L));
      },
      1.1);
  const double i1 = oracle::integrate_0_inf(
      [&](double x) {
        return static_cast<double>(oracle::score_nu(x, 1.1, 1.4) *
                                   std::pow(oracle::ge_pdf(x, 1.1, 1.4), 1.3L));
      },
      1.1);
  const auto u = estimating_equations(s.values, p, alpha);
  CHECK(u[0] == doctest::Approx(d0 / 20 - i0).epsilon(1e-9));
  CHECK(u[1] == doctest::Approx(d1 / 20 - i1).epsilon(1e-9));
}

TEST_CASE("gradient of the objective is -(1+alpha) U_n") {
  const Sample s = ge_sample(50, GEParams(1, 1.5), 4);
  for (double lambda : {0.7, 1.0, 1.6}) {
    for (double nu : {1.2, 1.5, 2.5}) {
      for (double alpha : {0.0, 0.25, 0.8}) {
        const double h = 1e-6;
        auto H = [&](double l, double v) { return h_objective(s.values, GEParams(l, v), alpha); };
        const double g0 = (H(lambda + h, nu) - H(lambda - h, nu)) / (2 * h);
        const double g1 = (H(lambda, nu + h) - H(lambda, nu - h)) / (2 * h);
        const auto u = estimating_equations(s.values, GEParams(lambda, nu), alpha);
        CHECK(g0 == doctest::Approx(-(1 + alpha) * u[0]).epsilon(1e-6));
        CHECK(g1 == doctest::Approx(-(1 + alpha) * u[1]).epsilon(1e-6));
      }
    }
  }
}

TEST_CASE("MDPDE at alpha 0 is the MLE") {
  for (std::uint64_t seed = 1; seed <= 5; ++seed) {
    const Sample s = ge_sample(100, GEParams(1, 1.5), seed);
    const auto d = fit_mdpde(s, 0.0);
    const auto m = fit_ml(s);
    CHECK(d.params.lambda() == doctest::Approx(m.params.lambda()).epsilon(1e-6));
    CHECK(d.params.nu() == doctest::Approx(m.params.nu()).epsilon(1e-6));
  }
}

TEST_CASE("MDPDE solves its estimating equations") {
  for (double alpha : {0.1, 0.5, 1.0}) {
    const Sample s = ge_sample(100, GEParams(1, 1.5), 31);
    const auto r = fit_mdpde(s, alpha);
    CHECK(r.optim.converged);
    REQUIRE(r.alpha.has_value());
    CHECK(*r.alpha == alpha);
    const auto u = estimating_equations(s.values, r.params, alpha);
    CHECK(std::abs(u[0]) < 1e-5);
    CHECK(std::abs(u[1]) < 1e-5);
  }
}

TEST_CASE("MDPDE resists a gross outlier") {
  Sample s = ge_sample(100, GEParams(1, 1.5), 8);
  const auto clean = fit_mdpde(s, 0.5);
  for (int i = 0; i < 5; ++i) s.values[i] = 14.22;
  const auto dirty = fit_mdpde(s, 0.5);
  const auto ml = fit_ml(s);
  CHECK(std::abs(dirty.params.lambda() - clean.params.lambda()) <
        std::abs(ml.params.lambda() - clean.params.lambda()));
}

TEST_CASE("alpha selection") {
  Sample s = ge_sample(40, GEParams(1, 1.5), 3);
  const auto single = select_alpha_cvm(s, {0.3});
  CHECK(single.optimal_alpha == 0.3);
  CHECK(single.optimal_index == 0);

  for (int i = 0; i < 4; ++i) s.values[i] = 14.22;
  const std::vector<double> grid{0.0, 0.1, 0.2, 0.3, 0.5, 0.7, 1.0};
  const auto curve = select_alpha_cvm(s, grid, 2);
  CHECK(curve.alphas == grid);
  CHECK(curve.optimal_alpha > 0.0);
  for (std::size_t i = 0; i < grid.size(); ++i) {
    if (!curve.failed[i]) CHECK(curve.distances[curve.optimal_index] <= curve.distances[i]);
  }
  // the thread count does not change the curve
  const auto serial = select_alpha_cvm(s, grid, 1);
  CHECK(serial.distances == curve.distances);
}

TEST_CASE("alpha selection cvm distance is computed from leave-one-out fits") {
  const Sample s = ge_sample(12, GEParams(1, 1.5), 5);
  const auto curve = select_alpha_cvm(s, {0.2});
  const auto x = s.sorted();
  const double n = static_cast<double>(x.size());
  Sample sorted_sample;
  sorted_sample.values = x;
  const auto full = fit_mdpde(sorted_sample, 0.2);
  double sum = 0;
  for (std::size_t i = 0; i < x.size(); ++i) {
    Sample loo;
    for (std::size_t j = 0; j < x.size(); ++j)
      if (j != i) loo.values.push_back(x[j]);
    const auto r = fit_mdpde(loo, 0.2, full.params);
    const double d = (i + 1) / (n + 1) - ge_cdf(x[i], r.params);
    sum += d * d;
  }
  CHECK(curve.distances[0] == doctest::Approx(sum / n).epsilon(1e-12));
}

TEST_CASE("DpdConfig validation") {
  CHECK_THROWS(DpdConfig{-0.1, {}}.validate());
  CHECK_THROWS(DpdConfig{0.1, {0.2, 0.1}}.validate());
  CHECK_NOTHROW(DpdConfig{0.1, default_alpha_grid()}.validate());
  CHECK(default_alpha_grid().size() == 51);
  CHECK(default_alpha_grid().back() == 1.0);
}
