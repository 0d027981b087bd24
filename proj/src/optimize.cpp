#include "gemdpde/optimize.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

namespace gemdpde {

namespace {

constexpr double kEps = std::numeric_limits<double>::epsilon();
constexpr double kInf = std::numeric_limits<double>::infinity();
const double kGolden = 0.5 * (3.0 - std::sqrt(5.0));

}  // namespace

OptimResult minimize_1d(const std::function<double(double)>& objective, double lo, double hi,
                        double tol, int max_iter) {
  OptimResult result;
  if (!(lo < hi)) {
    result.message = "minimize_1d: degenerate bracket";
    return result;
  }
  double a = lo;
  double b = hi;
  double x = a + kGolden * (b - a);
  double w = x;
  double v = x;
  double fx = objective(x);
  double fw = fx;
  double fv = fx;
  double d = 0.0;
  double e = 0.0;

  auto fail = [&](double at) {
    result.argmin = {x};
    result.objective_value = fx;
    result.converged = false;
    result.message = "minimize_1d: non-finite objective at x = " + std::to_string(at);
    return result;
  };
  if (!std::isfinite(fx)) return fail(x);

  for (int iter = 1; iter <= max_iter; ++iter) {
    result.iterations = iter;
    const double mid = 0.5 * (a + b);
    const double tol1 = 4.0 * kEps * std::abs(x) + tol / 3.0;
    const double tol2 = 2.0 * tol1;
    if (std::abs(x - mid) <= tol2 - 0.5 * (b - a)) {
      result.converged = true;
      break;
    }
    bool golden = true;
    if (std::abs(e) > tol1) {
      // trial parabola through x, w, v
      double r = (x - w) * (fx - fv);
      double q = (x - v) * (fx - fw);
      double p = (x - v) * q - (x - w) * r;
      q = 2.0 * (q - r);
      if (q > 0.0) p = -p;
      q = std::abs(q);
      const double e_prev = e;
      e = d;
      if (std::abs(p) < std::abs(0.5 * q * e_prev) && p > q * (a - x) && p < q * (b - x)) {
        d = p / q;
        const double u = x + d;
        if (u - a < tol2 || b - u < tol2) d = (x < mid) ? tol1 : -tol1;
        golden = false;
      }
    }
    if (golden) {
      e = (x < mid) ? b - x : a - x;
      d = kGolden * e;
    }
    const double u = std::abs(d) >= tol1 ? x + d : x + (d > 0.0 ? tol1 : -tol1);
    const double fu = objective(u);
    if (!std::isfinite(fu)) return fail(u);
    if (fu <= fx) {
      (u < x ? b : a) = x;
      v = w; fv = fw;
      w = x; fw = fx;
      x = u; fx = fu;
    } else {
      (u < x ? a : b) = u;
      if (fu <= fw || w == x) {
        v = w; fv = fw;
        w = u; fw = fu;
      } else if (fu <= fv || v == x || v == w) {
        v = u; fv = fu;
      }
    }
  }
  result.argmin = {x};
  result.objective_value = fx;
  result.tolerance_achieved = 0.5 * (b - a);
  if (!result.converged) result.message = "minimize_1d: iteration limit reached";
  return result;
}

double root_1d(const std::function<double(double)>& fn, double lo, double hi, double tol,
               int max_iter) {
  double a = lo;
  double b = hi;
  double fa = fn(a);
  double fb = fn(b);
  if (!std::isfinite(fa) || !std::isfinite(fb)) {
    throw BracketError("root_1d: non-finite value at bracket end");
  }
  if (fa == 0.0) return a;
  if (fb == 0.0) return b;
  if ((fa > 0.0) == (fb > 0.0)) {
    throw BracketError("root_1d: no sign change on [" + std::to_string(lo) + ", " +
                       std::to_string(hi) + "]");
  }
  double c = a;
  double fc = fa;
  double d = b - a;
  double e = d;
  for (int iter = 0; iter < max_iter; ++iter) {
    if ((fb > 0.0) == (fc > 0.0)) {
      c = a; fc = fa;
      d = b - a; e = d;
    }
    if (std::abs(fc) < std::abs(fb)) {
      a = b; b = c; c = a;
      fa = fb; fb = fc; fc = fa;
    }
    const double xtol = 2.0 * kEps * std::abs(b);
    const double m = 0.5 * (c - b);
    if (std::abs(fb) <= tol || std::abs(m) <= xtol) return b;
    if (std::abs(e) >= xtol && std::abs(fa) > std::abs(fb)) {
      double p;
      double q;
      const double s = fb / fa;
      if (a == c) {
        p = 2.0 * m * s;
        q = 1.0 - s;
      } else {
        const double qa = fa / fc;
        const double r = fb / fc;
        p = s * (2.0 * m * qa * (qa - r) - (b - a) * (r - 1.0));
        q = (qa - 1.0) * (r - 1.0) * (s - 1.0);
      }
      if (p > 0.0) q = -q; else p = -p;
      if (2.0 * p < std::min(3.0 * m * q - std::abs(xtol * q), std::abs(e * q))) {
        e = d;
        d = p / q;
      } else {
        d = m; e = m;
      }
    } else {
      d = m; e = m;
    }
    a = b; fa = fb;
    b += std::abs(d) > xtol ? d : (m > 0.0 ? xtol : -xtol);
    fb = fn(b);
    if (!std::isfinite(fb)) throw BracketError("root_1d: non-finite value inside bracket");
  }
  return b;
}

namespace {

struct Vertex {
  std::array<double, 2> x;
  double f;
};

double finite_or_inf(double v) { return std::isnan(v) ? kInf : v; }

}  // namespace

OptimResult nelder_mead_2d(const Objective2d& objective, std::array<double, 2> start,
                           const NelderMeadOptions& options) {
  constexpr double kReflect = 1.0;
  constexpr double kExpand = 2.0;
  constexpr double kContract = 0.5;
  constexpr double kShrink = 0.5;

  auto eval = [&](const std::array<double, 2>& p) {
    return finite_or_inf(objective(p[0], p[1]));
  };

  OptimResult result;
  const double f0 = eval(start);
  if (!std::isfinite(f0)) {
    result.argmin = {start[0], start[1]};
    result.objective_value = f0;
    result.message = "nelder_mead_2d: objective not finite at start";
    return result;
  }

  std::array<Vertex, 3> s;
  s[0] = {start, f0};
  for (int k = 0; k < 2; ++k) {
    std::array<double, 2> p = start;
    p[k] += options.initial_step;
    s[k + 1] = {p, eval(p)};
  }
  // Stable ordering: a vertex accepted this iteration is placed after
  // existing vertices with the same value.
  auto by_value = [](const Vertex& l, const Vertex& r) { return l.f < r.f; };
  std::stable_sort(s.begin(), s.end(), by_value);

  auto diameter = [&] {
    double dmax = 0.0;
    for (int i = 1; i < 3; ++i)
      for (int k = 0; k < 2; ++k) dmax = std::max(dmax, std::abs(s[i].x[k] - s[0].x[k]));
    return dmax;
  };

  int iter = 0;
  for (; iter < options.max_iter; ++iter) {
    const double spread = s[2].f - s[0].f;
    const double diam = diameter();
    if (diam <= options.tol && (spread <= options.tol || !std::isfinite(spread))) {
      result.converged = std::isfinite(s[0].f);
      result.tolerance_achieved = std::max(diam, std::isfinite(spread) ? spread : 0.0);
      break;
    }

    std::array<double, 2> centroid{};
    for (int k = 0; k < 2; ++k) centroid[k] = 0.5 * (s[0].x[k] + s[1].x[k]);
    auto along = [&](double t) {
      return std::array<double, 2>{centroid[0] + t * (centroid[0] - s[2].x[0]),
                                   centroid[1] + t * (centroid[1] - s[2].x[1])};
    };

    const auto xr = along(kReflect);
    const double fr = eval(xr);
    Vertex accepted{};
    bool shrink = false;
    if (fr < s[0].f) {
      const auto xe = along(kReflect * kExpand);
      const double fe = eval(xe);
      accepted = fe < fr ? Vertex{xe, fe} : Vertex{xr, fr};
    } else if (fr < s[1].f) {
      accepted = {xr, fr};
    } else if (fr < s[2].f) {
      const auto xc = along(kReflect * kContract);
      const double fc = eval(xc);
      if (fc <= fr) accepted = {xc, fc}; else shrink = true;
    } else {
      const auto xcc = along(-kContract);
      const double fcc = eval(xcc);
      if (fcc < s[2].f) accepted = {xcc, fcc}; else shrink = true;
    }

    if (shrink) {
      for (int i = 1; i < 3; ++i) {
        for (int k = 0; k < 2; ++k) s[i].x[k] = s[0].x[k] + kShrink * (s[i].x[k] - s[0].x[k]);
        s[i].f = eval(s[i].x);
      }
    } else {
      s[2] = accepted;
    }
    std::stable_sort(s.begin(), s.end(), by_value);
  }

  result.iterations = iter;
  result.argmin = {s[0].x[0], s[0].x[1]};
  result.objective_value = s[0].f;
  if (!result.converged) {
    result.tolerance_achieved = std::max(diameter(), s[2].f - s[0].f);
    result.message = "nelder_mead_2d: iteration limit reached";
  }
  return result;
}

OptimResult minimize_2d(const Objective2d& objective, std::array<double, 2> start, double tol,
                        int max_iter) {
  if (!(start[0] > 0.0 && start[1] > 0.0)) {
    throw std::invalid_argument("minimize_2d: start must lie in the open positive quadrant");
  }
  auto in_logs = [&](double la, double lb) { return objective(std::exp(la), std::exp(lb)); };
  NelderMeadOptions options{tol, max_iter, 0.1};
  OptimResult first = nelder_mead_2d(in_logs, {std::log(start[0]), std::log(start[1])}, options);
  if (first.argmin.size() != 2 || !std::isfinite(first.objective_value)) {
    first.argmin = {start[0], start[1]};
    return first;
  }
  options.initial_step = 0.05;
  OptimResult second = nelder_mead_2d(in_logs, {first.argmin[0], first.argmin[1]}, options);
  second.iterations += first.iterations;
  second.argmin = {std::exp(second.argmin[0]), std::exp(second.argmin[1])};
  return second;
}

}  // namespace gemdpde
