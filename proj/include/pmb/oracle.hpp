#pragma once

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>
#include <optional>
#include <string>
#include <vector>

#include "arms.hpp"
#include "choquet.hpp"
#include "distortion.hpp"
#include "errors.hpp"
#include "simplex.hpp"

namespace pmb {

// 1-D maximizer of h on [0,1]: dense scan, then a fine local scan
inline double argmax_h(const Distortion& d) {
  const int n = 100000;
  double best_u = 0.0, best_v = d(0.0);
  for (int i = 1; i <= n; ++i) {
    double u = static_cast<double>(i) / n;
    double v = d(u);
    if (v > best_v) {
      best_v = v;
      best_u = u;
    }
  }
  double lo = std::max(0.0, best_u - 2.0 / n), hi = std::min(1.0, best_u + 2.0 / n);
  for (int i = 0; i <= 2000; ++i) {
    double u = lo + (hi - lo) * i / 2000.0;
    double v = d(u);
    if (v > best_v) {
      best_v = v;
      best_u = u;
    }
  }
  return best_u;
}

// Utility of the mixture CDF under the true arm models. Bernoulli instances
// collapse to h of the mixture mean; step instances are evaluated exactly;
// anything else goes through quadrature on the union window.
inline double true_mixture_value(const BanditInstance& inst, const Distortion& d,
                                 const MixtureWeights& w) {
  if (static_cast<int>(w.size()) != inst.K()) {
    throw DomainError("true_mixture_value: weight size mismatch");
  }
  if (inst.all_bernoulli()) {
    double m = 0.0;
    for (int i = 0; i < inst.K(); ++i) m += w[i] * inst.arms[i].p;
    return d(std::clamp(m, 0.0, 1.0));
  }
  if (inst.all_step()) {
    std::vector<FiniteSupportCdf> cdfs;
    cdfs.reserve(inst.arms.size());
    for (const auto& a : inst.arms) cdfs.push_back(a.step_cdf());
    std::vector<const FiniteSupportCdf*> ptrs;
    for (const auto& f : cdfs) ptrs.push_back(&f);
    return choquet_mixture(d, w, ptrs);
  }
  auto [lo, hi] = inst.support_bounds();
  ContinuousCdf F;
  F.a = lo;
  F.b = hi;
  F.Q = [&inst, &w](double x) {
    double q = 0.0;
    for (int i = 0; i < inst.K(); ++i) q += w[i] * inst.arms[i].cdf_at(x);
    return q;
  };
  return choquet_quadrature(d, F, 1e-8);
}

struct MixtureValue {
  MixtureWeights alpha;
  double value = 0.0;
};

namespace detail {

inline size_t grid_argmax(const Grid& grid,
                          const std::function<double(const double*)>& score,
                          double* best_out = nullptr) {
  if (grid.size() == 0) throw DomainError("argmax over empty grid");
  size_t best = 0;
  double best_v = score(grid.row(0));
  for (size_t i = 1; i < grid.size(); ++i) {
    double v = score(grid.row(i));
    if (v > best_v) {
      best_v = v;
      best = i;
    }
  }
  if (best_out) *best_out = best_v;
  return best;
}

}  // namespace detail

// Maximizer of the induced utility over the whole simplex. Bernoulli: exact
// 1-D reduction over the mixture mean (Theorem 1 structure: the optimum mixes
// at most the two extreme-mean arms). General: coarse grid argmax followed by
// box refinements around the incumbent.
inline MixtureValue optimal_mixture(const BanditInstance& inst, const Distortion& d) {
  int K = inst.K();
  if (K < 1) throw ConfigError("optimal_mixture: instance has no arms");
  if (inst.all_bernoulli()) {
    int i_lo = 0, i_hi = 0;
    for (int i = 1; i < K; ++i) {
      if (inst.arms[i].p < inst.arms[i_lo].p) i_lo = i;
      if (inst.arms[i].p > inst.arms[i_hi].p) i_hi = i;
    }
    double p_lo = inst.arms[i_lo].p, p_hi = inst.arms[i_hi].p;
    MixtureValue out;
    out.alpha.assign(K, 0.0);
    if (p_hi - p_lo < 1e-15) {
      out.alpha[i_hi] = 1.0;
      out.value = d(p_hi);
      return out;
    }
    const int n = 100000;
    double best_m = p_lo, best_v = d(p_lo);
    for (int i = 1; i <= n; ++i) {
      double m = p_lo + (p_hi - p_lo) * i / n;
      double v = d(m);
      if (v > best_v) {
        best_v = v;
        best_m = m;
      }
    }
    double wlo = std::max(p_lo, best_m - 2.0 * (p_hi - p_lo) / n);
    double whi = std::min(p_hi, best_m + 2.0 * (p_hi - p_lo) / n);
    if (d.shape == Shape::concave || d.shape == Shape::strictly_concave) {
      for (int it = 0; it < 200; ++it) {
        double m1 = wlo + (whi - wlo) / 3.0, m2 = whi - (whi - wlo) / 3.0;
        if (d(m1) < d(m2)) {
          wlo = m1;
        } else {
          whi = m2;
        }
      }
      double m = 0.5 * (wlo + whi);
      if (d(m) > best_v) {
        best_v = d(m);
        best_m = m;
      }
    } else {
      for (int i = 0; i <= 4000; ++i) {
        double m = wlo + (whi - wlo) * i / 4000.0;
        double v = d(m);
        if (v > best_v) {
          best_v = v;
          best_m = m;
        }
      }
    }
    if (best_m <= p_lo + 1e-12) {
      out.alpha[i_lo] = 1.0;
    } else if (best_m >= p_hi - 1e-12) {
      out.alpha[i_hi] = 1.0;
    } else {
      double a = (p_hi - best_m) / (p_hi - p_lo);
      out.alpha[i_lo] = a;
      out.alpha[i_hi] = 1.0 - a;
    }
    out.value = d(best_m);
    return out;
  }

  auto score = [&](const double* w) {
    return true_mixture_value(inst, d, MixtureWeights(w, w + K));
  };
  Grid grid = enumerate_grid(GridSpec::etc(0.02, K));
  double best_v = 0.0;
  size_t bi = detail::grid_argmax(grid, score, &best_v);
  MixtureWeights b = grid.weights(bi);
  for (int ell = 1; ell <= 6; ++ell) {
    Grid g = enumerate_grid(GridSpec::cirt(ell, 10, b));
    double v = 0.0;
    size_t i = detail::grid_argmax(g, score, &v);
    if (v >= best_v) {
      best_v = v;
      b = g.weights(i);
    }
  }
  return MixtureValue{b, best_v};
}

// Multi-phase grid refinement under the true CDFs: argmax over etc(1/A), then
// L-1 recentring rounds on shrinking boxes.
inline MixtureWeights refinement_oracle(const BanditInstance& inst, const Distortion& d, int A,
                                        int L) {
  if (L < 1) throw ConfigError("refinement_oracle: L must be >= 1");
  int K = inst.K();
  auto score = [&](const double* w) {
    return true_mixture_value(inst, d, MixtureWeights(w, w + K));
  };
  Grid grid = enumerate_grid(GridSpec::etc(1.0 / A, K));
  MixtureWeights b = grid.weights(detail::grid_argmax(grid, score));
  for (int ell = 1; ell < L; ++ell) {
    Grid g = enumerate_grid(GridSpec::cirt(ell, A, b));
    b = g.weights(detail::grid_argmax(g, score));
  }
  return b;
}

struct GapReport {
  size_t grid_points = 0;
  int levels = 0;  // distinct utility levels found, capped at 3
  MixtureWeights a1, a2, a3;
  double v1 = 0.0, v2 = 0.0, v3 = 0.0;
  double delta12 = 0.0;
  std::optional<double> delta13, delta23;
  double delta01 = 0.0, delta02 = 0.0;
  MixtureWeights alpha_star;
  double v_star = 0.0;
};

// Top-3 distinct-utility grid points and the gaps between and above them.
// Values within 1e-12 of a level's top are merged into that level;
// representatives are the lexicographically smallest lattice points.
inline GapReport gap_report(const BanditInstance& inst, const Distortion& d,
                            const GridSpec& spec) {
  Grid grid = enumerate_grid(spec);
  size_t n = grid.size();
  if (n < 2) throw DomainError("gap_report: grid has fewer than two points");
  int K = inst.K();

  std::vector<double> vals(n);
  if (inst.all_bernoulli()) {
    std::vector<double> p(K);
    for (int i = 0; i < K; ++i) p[i] = inst.arms[i].p;
    for (size_t i = 0; i < n; ++i) {
      const double* w = grid.row(i);
      double m = 0.0;
      for (int j = 0; j < K; ++j) m += w[j] * p[j];
      vals[i] = d(std::clamp(m, 0.0, 1.0));
    }
  } else if (inst.all_step()) {
    std::vector<FiniteSupportCdf> cdfs;
    cdfs.reserve(inst.arms.size());
    for (const auto& a : inst.arms) cdfs.push_back(a.step_cdf());
    std::vector<const FiniteSupportCdf*> ptrs;
    for (const auto& f : cdfs) ptrs.push_back(&f);
    StepUnionEvaluator ev = StepUnionEvaluator::build(ptrs);
    for (size_t i = 0; i < n; ++i) vals[i] = ev.value(d, grid.row(i));
  } else {
    for (size_t i = 0; i < n; ++i) {
      vals[i] = true_mixture_value(inst, d, grid.weights(i));
    }
  }

  std::vector<size_t> order(n);
  for (size_t i = 0; i < n; ++i) order[i] = i;
  std::sort(order.begin(), order.end(), [&](size_t a, size_t b) {
    if (vals[a] != vals[b]) return vals[a] > vals[b];
    return a < b;
  });

  GapReport rep;
  rep.grid_points = n;
  size_t pos = 0;
  double level_v[3] = {0, 0, 0};
  size_t level_rep[3] = {0, 0, 0};
  while (pos < n && rep.levels < 3) {
    double top = vals[order[pos]];
    size_t best_idx = order[pos];
    while (pos < n && vals[order[pos]] > top - 1e-12) {
      best_idx = std::min(best_idx, order[pos]);
      ++pos;
    }
    level_v[rep.levels] = top;
    level_rep[rep.levels] = best_idx;
    ++rep.levels;
  }
  rep.a1 = grid.weights(level_rep[0]);
  rep.v1 = level_v[0];
  if (rep.levels >= 2) {
    rep.a2 = grid.weights(level_rep[1]);
    rep.v2 = level_v[1];
    rep.delta12 = rep.v1 - rep.v2;
  }
  if (rep.levels >= 3) {
    rep.a3 = grid.weights(level_rep[2]);
    rep.v3 = level_v[2];
    rep.delta13 = rep.v1 - rep.v3;
    rep.delta23 = rep.v2 - rep.v3;
  }
  MixtureValue star = optimal_mixture(inst, d);
  rep.alpha_star = star.alpha;
  rep.v_star = star.value;
  rep.delta01 = std::max(0.0, rep.v_star - rep.v1);
  if (rep.levels >= 2) rep.delta02 = std::max(0.0, rep.v_star - rep.v2);
  return rep;
}

struct BetaPoint {
  double eps = 0.0;
  double ratio = 0.0;
  bool valid = false;
  std::string note;
};

// log delta13(eps) / log eps along a decreasing eps schedule
inline std::vector<BetaPoint> beta_bar_estimate(const BanditInstance& inst, const Distortion& d,
                                                const std::vector<double>& eps_list) {
  if (eps_list.size() < 2) throw ConfigError("beta_bar_estimate: need at least two eps values");
  for (size_t i = 1; i < eps_list.size(); ++i) {
    if (!(eps_list[i] < eps_list[i - 1])) {
      throw ConfigError("beta_bar_estimate: eps_list must be strictly decreasing");
    }
  }
  std::vector<BetaPoint> out;
  for (double eps : eps_list) {
    BetaPoint pt;
    pt.eps = eps;
    GapReport rep = gap_report(inst, d, GridSpec::etc(eps, inst.K()));
    if (!rep.delta13.has_value() || *rep.delta13 <= 0.0) {
      pt.note = "delta13 absent or zero at this eps; point skipped";
    } else {
      pt.ratio = std::log(*rep.delta13) / std::log(eps);
      pt.valid = true;
    }
    out.push_back(std::move(pt));
  }
  return out;
}

struct SampleBudget {
  long long N = 0;
  double M = 0.0;
};

// Which sub-optimality gap feeds the exploration-length formula. The formula
// itself is the same; the variant names the caller's intent and drives the
// gap_report field the harness plugs in.
enum class GapVariant { delta12, delta13 };

// Exploration length N(eps) and its log-normalized form M(eps) = N / log T.
inline SampleBudget n_epsilon(int K, double L, double q, double delta_gap, double T, double eps,
                              GapVariant /*variant*/ = GapVariant::delta12) {
  if (!(delta_gap > 0.0)) throw DomainError("n_epsilon: delta_gap must be positive");
  if (!(T >= 2.0)) throw DomainError("n_epsilon: T must be >= 2");
  if (!(eps > 0.0 && eps < 1.0)) throw DomainError("n_epsilon: eps outside (0,1)");
  if (!(q > 0.0 && q <= 1.0)) throw DomainError("n_epsilon: q outside (0,1]");
  double bracket = 32.0 / std::sqrt(std::numbers::e) +
                   std::sqrt(std::log(2.0 * K * T * T * (std::pow(eps, -(K - 1.0)) + 1.0)));
  double raw = 256.0 * K * std::numbers::e * std::pow(2.0 * K * L / delta_gap, 2.0 / q) *
               bracket * bracket;
  SampleBudget b;
  b.N = raw > 4e18 ? static_cast<long long>(4e18) : static_cast<long long>(std::ceil(raw));
  b.M = raw / std::log(T);
  return b;
}

enum class EpsPolicy { etc, ucb };

inline double choose_epsilon(EpsPolicy policy, int K, double q, double beta, double T) {
  if (!(T >= 3.0)) throw ConfigError("choose_epsilon: T too small");
  double logT = std::log(T);
  double eps;
  if (policy == EpsPolicy::etc) {
    double gamma = 2.0 * beta / (2.0 * beta + q);
    eps = std::pow(std::pow(K, 2.0 + 2.0 / q) * logT / std::pow(T, gamma), q / (2.0 * beta));
  } else {
    double kappa = 1.0 / (2.0 * beta / q + 2.0);
    eps = std::pow(std::pow(K, 2.0 / q) * logT / T, kappa);
  }
  if (!std::isfinite(eps) || eps <= 0.0) throw ConfigError("choose_epsilon: degenerate result");
  return std::min(eps, 0.5);
}

struct BurnIn {
  long long T0 = 0;
  double T_eps = 0.0;
};

// Smallest t from which the per-round confidence width stays below a fixed
// fraction of the gap threshold; diagnostic only.
inline BurnIn t0_epsilon(int K, double L, double q, double delta12, double rho, double eps) {
  if (!(delta12 > 0.0 && rho > 0.0 && eps > 0.0 && L > 0.0 && q > 0.0)) {
    throw DomainError("t0_epsilon: parameters must be positive");
  }
  double rhs = (1.0 / 16.0) * std::pow(delta12 / (2.0 * K * L), 1.0 / q);
  auto width = [&](double s) {
    return (2.0 * std::sqrt(2.0 * std::numbers::e * std::log(s)) + 32.0) /
           std::sqrt(rho * s * eps);
  };
  // width is decreasing over integer s >= 1, so the threshold is a crossing point
  long long lo = 1, hi = 1;
  if (width(1.0) > rhs) {
    while (width(static_cast<double>(hi)) > rhs) {
      lo = hi;
      if (hi > (1LL << 60)) throw NumericError("t0_epsilon: threshold unreachable", 0.0);
      hi *= 2;
    }
    while (lo + 1 < hi) {
      long long mid = lo + (hi - lo) / 2;
      if (width(static_cast<double>(mid)) > rhs) {
        lo = mid;
      } else {
        hi = mid;
      }
    }
  }
  BurnIn out;
  out.T0 = hi;
  out.T_eps = (2.0 / eps) * (static_cast<double>(hi) - 1.0);
  return out;
}

}  // namespace pmb
