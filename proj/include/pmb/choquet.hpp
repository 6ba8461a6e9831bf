#pragma once

#include <algorithm>
#include <cmath>
#include <vector>

#include "cdf.hpp"
#include "distortion.hpp"
#include "errors.hpp"

namespace pmb {

// Signed Choquet integral of a step CDF, evaluated exactly over the merged
// breakpoints. The integrand is h(1 - Q(x)), with the h(1) offset applied on
// the negative axis only; inserting 0 as a breakpoint keeps every segment on
// one side of the origin.
inline double choquet_step(const Distortion& d, const FiniteSupportCdf& F) {
  F.validate();
  double h1 = d(1.0);
  std::vector<double> pts(F.xs);
  pts.push_back(0.0);
  std::sort(pts.begin(), pts.end());
  pts.erase(std::unique(pts.begin(), pts.end()), pts.end());
  double total = 0.0;
  for (size_t k = 0; k + 1 < pts.size(); ++k) {
    double lo = pts[k], hi = pts[k + 1];
    double g = d(1.0 - F.at(lo));
    total += (hi - lo) * (hi <= 0.0 ? g - h1 : g);
  }
  return total;
}

inline double choquet_mixture(const Distortion& d, const std::vector<double>& w,
                              const std::vector<const FiniteSupportCdf*>& fs) {
  return choquet_step(d, mix_step(w, fs));
}

namespace detail {

struct QuadBudget {
  long long evals = 0;
  long long cap = 4000000;
};

inline double simpson(double a, double b, double fa, double fm, double fb) {
  return (b - a) / 6.0 * (fa + 4.0 * fm + fb);
}

inline double adapt(const std::function<double(double)>& f, double a, double b, double fa,
                    double fm, double fb, double whole, double tol, int depth, QuadBudget& bud) {
  double m = 0.5 * (a + b);
  double lm = 0.5 * (a + m), rm = 0.5 * (m + b);
  double flm = f(lm), frm = f(rm);
  bud.evals += 2;
  if (bud.evals > bud.cap) {
    throw NumericError("choquet_quadrature: evaluation budget exhausted", whole);
  }
  double left = simpson(a, m, fa, flm, fm);
  double right = simpson(m, b, fm, frm, fb);
  double delta = left + right - whole;
  if (depth <= 0 || std::fabs(delta) <= 15.0 * tol) {
    return left + right + delta / 15.0;
  }
  return adapt(f, a, m, fa, flm, fm, left, 0.5 * tol, depth - 1, bud) +
         adapt(f, m, b, fm, frm, fb, right, 0.5 * tol, depth - 1, bud);
}

inline double integrate(const std::function<double(double)>& f, double a, double b, double tol,
                        QuadBudget& bud) {
  if (!(b > a)) return 0.0;
  double fa = f(a), fb = f(b), fm = f(0.5 * (a + b));
  bud.evals += 3;
  double whole = simpson(a, b, fa, fm, fb);
  return adapt(f, a, b, fa, fm, fb, whole, tol, 48, bud);
}

}  // namespace detail

// Merged-breakpoint view of several step CDFs. value() equals
// choquet_step(d, mix_step(w, fs)) but reuses the per-arm cumulative tables
// across many weight vectors.
struct StepUnionEvaluator {
  std::vector<double> xs;                 // merged breakpoints including 0
  std::vector<std::vector<double>> cums;  // per arm, cumulative mass at xs[k]
  int K = 0;

  static StepUnionEvaluator build(const std::vector<const FiniteSupportCdf*>& fs) {
    StepUnionEvaluator ev;
    ev.K = static_cast<int>(fs.size());
    std::vector<double> pts{0.0};
    for (const auto* f : fs) pts.insert(pts.end(), f->xs.begin(), f->xs.end());
    std::sort(pts.begin(), pts.end());
    pts.erase(std::unique(pts.begin(), pts.end()), pts.end());
    ev.xs = std::move(pts);
    ev.cums.resize(ev.K);
    for (int i = 0; i < ev.K; ++i) {
      ev.cums[i].resize(ev.xs.size());
      for (size_t k = 0; k < ev.xs.size(); ++k) ev.cums[i][k] = fs[i]->at(ev.xs[k]);
    }
    return ev;
  }

  double value(const Distortion& d, const double* w) const {
    double h1 = d(1.0);
    double total = 0.0;
    for (size_t k = 0; k + 1 < xs.size(); ++k) {
      double q = 0.0;
      for (int i = 0; i < K; ++i) q += w[i] * cums[i][k];
      if (q > 1.0) q = 1.0;
      double g = d(1.0 - q);
      total += (xs[k + 1] - xs[k]) * (xs[k + 1] <= 0.0 ? g - h1 : g);
    }
    return total;
  }
};

// Signed Choquet integral of a continuous CDF by adaptive quadrature over its
// evaluation window, plus the closed-form contribution of the axis segments
// outside the window where Q is identically 0 or 1.
inline double choquet_quadrature(const Distortion& d, const ContinuousCdf& F,
                                 double tol = 1e-8) {
  if (!(F.b > F.a)) throw DomainError("choquet_quadrature: empty window");
  double h1 = d(1.0);
  auto clamp01 = [](double v) { return v < 0.0 ? 0.0 : (v > 1.0 ? 1.0 : v); };
  std::function<double(double)> neg = [&](double x) { return d(1.0 - clamp01(F.Q(x))) - h1; };
  std::function<double(double)> pos = [&](double x) { return d(1.0 - clamp01(F.Q(x))); };
  detail::QuadBudget bud;
  double total = 0.0;
  if (F.b < 0.0) total += (0.0 - F.b) * (d(0.0) - h1);  // Q = 1 up to the origin
  if (F.a > 0.0) total += F.a * h1;                     // Q = 0 from the origin
  if (F.a < 0.0) total += detail::integrate(neg, F.a, std::min(F.b, 0.0), 0.5 * tol, bud);
  if (F.b > 0.0) total += detail::integrate(pos, std::max(F.a, 0.0), F.b, 0.5 * tol, bud);
  return total;
}

}  // namespace pmb
