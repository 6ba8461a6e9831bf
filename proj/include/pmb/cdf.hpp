#pragma once

#include <algorithm>
#include <cassert>
#include <cmath>
#include <functional>
#include <utility>
#include <vector>

#include "errors.hpp"

namespace pmb {

// Right-continuous step CDF on a finite support set.
struct FiniteSupportCdf {
  std::vector<double> xs;   // strictly increasing support points
  std::vector<double> cum;  // cumulative mass at each point, back() == 1

  void validate() const {
    if (xs.empty() || xs.size() != cum.size()) {
      throw DomainError("step cdf: empty or mismatched support");
    }
    for (size_t i = 0; i < xs.size(); ++i) {
      if (!std::isfinite(xs[i]) || !std::isfinite(cum[i])) {
        throw DomainError("step cdf: non-finite entry");
      }
      if (i > 0 && !(xs[i] > xs[i - 1])) throw DomainError("step cdf: support not increasing");
      if (i > 0 && cum[i] < cum[i - 1] - 1e-12) throw DomainError("step cdf: mass decreasing");
    }
    if (std::fabs(cum.back() - 1.0) > 1e-9) throw DomainError("step cdf: total mass != 1");
  }

  double at(double x) const {
    auto it = std::upper_bound(xs.begin(), xs.end(), x);
    if (it == xs.begin()) return 0.0;
    return cum[static_cast<size_t>(it - xs.begin()) - 1];
  }

  double quantile(double u) const {
    for (size_t i = 0; i < xs.size(); ++i) {
      if (cum[i] >= u - 1e-15) return xs[i];
    }
    return xs.back();
  }

  double min_support() const { return xs.front(); }
  double max_support() const { return xs.back(); }
};

// Coalesces support points closer than 1e-12 and sorts; masses must be >= 0.
inline FiniteSupportCdf cdf_from_points(std::vector<std::pair<double, double>> pts) {
  if (pts.empty()) throw DomainError("step cdf: no mass points");
  std::sort(pts.begin(), pts.end());
  FiniteSupportCdf f;
  double total = 0.0;
  for (const auto& [x, m] : pts) {
    if (m < -1e-15) throw DomainError("step cdf: negative mass");
    if (!f.xs.empty() && x - f.xs.back() <= 1e-12) {
      total += m;
      f.cum.back() = total;
    } else {
      total += m;
      f.xs.push_back(x);
      f.cum.push_back(total);
    }
  }
  if (std::fabs(total - 1.0) > 1e-9) throw DomainError("step cdf: total mass != 1");
  f.cum.back() = 1.0;
  f.validate();
  return f;
}

inline FiniteSupportCdf bernoulli_cdf(double p) {
  if (p < 0.0 || p > 1.0) throw DomainError("bernoulli: p outside [0,1]");
  if (p <= 0.0) return FiniteSupportCdf{{0.0}, {1.0}};
  if (p >= 1.0) return FiniteSupportCdf{{1.0}, {1.0}};
  return FiniteSupportCdf{{0.0, 1.0}, {1.0 - p, 1.0}};
}

inline FiniteSupportCdf mix_step(const std::vector<double>& w,
                                 const std::vector<const FiniteSupportCdf*>& fs) {
  if (w.size() != fs.size() || w.empty()) throw DomainError("mix_step: size mismatch");
  std::vector<double> pts;
  for (const auto* f : fs) pts.insert(pts.end(), f->xs.begin(), f->xs.end());
  std::sort(pts.begin(), pts.end());
  FiniteSupportCdf out;
  for (double x : pts) {
    if (!out.xs.empty() && x - out.xs.back() <= 1e-12) continue;
    out.xs.push_back(x);
  }
  out.cum.resize(out.xs.size());
  for (size_t j = 0; j < out.xs.size(); ++j) {
    double c = 0.0;
    for (size_t i = 0; i < fs.size(); ++i) c += w[i] * fs[i]->at(out.xs[j] + 1e-13);
    out.cum[j] = std::min(c, 1.0);
  }
  out.cum.back() = 1.0;
  return out;
}

// W1 distance between two step CDFs: integral of |F - G| over the merged breakpoints.
inline double wasserstein1_step(const FiniteSupportCdf& F, const FiniteSupportCdf& G) {
  std::vector<double> pts;
  pts.reserve(F.xs.size() + G.xs.size());
  pts.insert(pts.end(), F.xs.begin(), F.xs.end());
  pts.insert(pts.end(), G.xs.begin(), G.xs.end());
  std::sort(pts.begin(), pts.end());
  pts.erase(std::unique(pts.begin(), pts.end()), pts.end());
  double total = 0.0;
  for (size_t k = 0; k + 1 < pts.size(); ++k) {
    total += std::fabs(F.at(pts[k]) - G.at(pts[k])) * (pts[k + 1] - pts[k]);
  }
  return total;
}

// CDF given as a callable on a finite evaluation window [a, b] that carries
// all but a negligible sliver of the mass.
struct ContinuousCdf {
  std::function<double(double)> Q;
  double a = 0.0;
  double b = 0.0;
};

}  // namespace pmb
