#pragma once

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <functional>
#include <string>
#include <vector>

#include "errors.hpp"

namespace pmb {

using MixtureWeights = std::vector<double>;

// Discretizations of the probability simplex. etc grids sit on multiples of
// eps, ucb grids on half-offset multiples, cirt grids on dyadic refinements of
// a box around a center point.
struct GridSpec {
  enum class Kind { etc, ucb, cirt, cirt_tracking };
  Kind kind = Kind::etc;
  int K = 0;
  double eps = 0.0;
  int ell = 0;
  int A = 0;
  MixtureWeights center;

  static GridSpec etc(double eps, int K) {
    check_basics(eps, K);
    GridSpec g;
    g.kind = Kind::etc;
    g.eps = eps;
    g.K = K;
    return g;
  }

  static GridSpec ucb(double eps, int K) {
    check_basics(eps, K);
    GridSpec g;
    g.kind = Kind::ucb;
    g.eps = eps;
    g.K = K;
    return g;
  }

  static GridSpec cirt(int ell, int A, MixtureWeights center) {
    check_refine(ell, A, center);
    GridSpec g;
    g.kind = Kind::cirt;
    g.ell = ell;
    g.A = A;
    g.K = static_cast<int>(center.size());
    g.center = std::move(center);
    return g;
  }

  static GridSpec cirt_tracking(int L, int A, MixtureWeights center) {
    check_refine(L, A, center);
    GridSpec g;
    g.kind = Kind::cirt_tracking;
    g.ell = L;
    g.A = A;
    g.K = static_cast<int>(center.size());
    g.center = std::move(center);
    return g;
  }

  double spacing() const {
    if (kind == Kind::etc || kind == Kind::ucb) return eps;
    return std::pow(2.0, ell) / std::pow(static_cast<double>(A), ell + 1);
  }

  double box_halfwidth() const {
    if (kind == Kind::etc || kind == Kind::ucb) return 1.0;
    return std::pow(2.0, ell - 1) / std::pow(static_cast<double>(A), ell);
  }

 private:
  static void check_basics(double eps, int K) {
    if (K < 2) throw ConfigError("grid: K must be >= 2");
    if (!(eps > 0.0 && eps <= 1.0)) throw ConfigError("grid: eps must lie in (0,1]");
  }
  static void check_refine(int ell, int A, const MixtureWeights& center) {
    if (ell < 1) throw ConfigError("grid: refinement level must be >= 1");
    if (A < 3) throw ConfigError("grid: refinement factor A must be >= 3");
    if (center.size() < 2) throw ConfigError("grid: center needs K >= 2 coordinates");
  }
};

// snaps eps so that 1/eps - K/2 is a positive integer, as the half-offset
// grid requires
inline double snap_ucb_epsilon(double eps, int K) {
  if (!(eps > 0.0 && eps <= 1.0)) throw ConfigError("snap_ucb_epsilon: eps outside (0,1]");
  long long S = std::llround(1.0 / eps - K / 2.0);
  if (S < 1) S = 1;
  return 1.0 / (static_cast<double>(S) + K / 2.0);
}

inline int phase_count(int A, double eps_target) {
  if (A <= 2) throw ConfigError("phase_count: refinement factor A must exceed 2");
  if (!(eps_target > 0.0 && eps_target < 1.0)) {
    throw ConfigError("phase_count: eps_target outside (0,1)");
  }
  int L = static_cast<int>(std::ceil(std::log(1.0 / eps_target) / std::log(A / 2.0) - 1e-12));
  return L < 1 ? 1 : L;
}

// Flat row-major storage: row(i) is the i-th grid point. Rows are emitted in
// lexicographically ascending lattice order, so the first index attaining a
// maximum is the lexicographically smallest maximizer.
struct Grid {
  int K = 0;
  std::vector<double> flat;

  size_t size() const { return K > 0 ? flat.size() / K : 0; }
  const double* row(size_t i) const { return flat.data() + i * K; }
  MixtureWeights weights(size_t i) const { return MixtureWeights(row(i), row(i) + K); }
};

namespace detail {

inline long long ipow_checked(long long base, int exp, const char* what) {
  long long r = 1;
  for (int i = 0; i < exp; ++i) {
    if (r > 2000000000000000LL / base) throw ConfigError(std::string(what) + ": grid too fine");
    r *= base;
  }
  return r;
}

// Upfront cap on emitted weights: C(units + K - 1, K - 1) rows of K doubles.
inline void check_grid_budget(double units, int K, const char* what) {
  double rows = 1.0;
  for (int j = 1; j <= K - 1; ++j) {
    rows *= (units + static_cast<double>(j)) / static_cast<double>(j);
    if (rows * K > 1e7) throw ConfigError(std::string(what) + ": grid too fine");
  }
}

// enumerate n in [lo,hi]^K with sum == S, lexicographically ascending
inline void enumerate_bounded(const std::vector<long long>& lo, const std::vector<long long>& hi,
                              long long S, const std::function<void(const std::vector<long long>&)>& emit) {
  int K = static_cast<int>(lo.size());
  std::vector<long long> suffix_lo(K + 1, 0), suffix_hi(K + 1, 0);
  for (int i = K - 1; i >= 0; --i) {
    suffix_lo[i] = suffix_lo[i + 1] + lo[i];
    suffix_hi[i] = suffix_hi[i + 1] + hi[i];
  }
  std::vector<long long> n(K, 0);
  std::function<void(int, long long)> rec = [&](int i, long long rem) {
    if (i == K - 1) {
      if (rem >= lo[i] && rem <= hi[i]) {
        n[i] = rem;
        emit(n);
      }
      return;
    }
    long long from = std::max(lo[i], rem - suffix_hi[i + 1]);
    long long to = std::min(hi[i], rem - suffix_lo[i + 1]);
    for (long long v = from; v <= to; ++v) {
      n[i] = v;
      rec(i + 1, rem - v);
    }
  };
  if (S >= suffix_lo[0] && S <= suffix_hi[0]) rec(0, S);
}

}  // namespace detail

inline Grid enumerate_grid(const GridSpec& spec) {
  Grid grid;
  grid.K = spec.K;
  const int K = spec.K;

  if (spec.kind == GridSpec::Kind::etc) {
    // first K-1 coordinates on multiples of eps, last absorbs the deficit
    long long max_units = static_cast<long long>(std::floor(1.0 / spec.eps + 1e-6));
    detail::check_grid_budget(static_cast<double>(max_units), K, "etc grid");
    std::vector<long long> n(K - 1, 0);
    std::function<void(int, long long)> rec = [&](int i, long long used) {
      if (i == K - 1) {
        double partial = 0.0;
        for (int j = 0; j < K - 1; ++j) {
          grid.flat.push_back(n[j] * spec.eps);
          partial += n[j] * spec.eps;
        }
        grid.flat.push_back(1.0 - partial);
        return;
      }
      for (long long v = 0; used + v <= max_units; ++v) {
        n[i] = v;
        rec(i + 1, used + v);
      }
    };
    rec(0, 0);
    return grid;
  }

  if (spec.kind == GridSpec::Kind::ucb) {
    double S_real = 1.0 / spec.eps - K / 2.0;
    long long S = std::llround(S_real);
    if (S < 0 || std::fabs(S_real - S) > 1e-6) {
      throw DegenerateGridError("ucb grid: 1/eps - K/2 is not a nonnegative integer");
    }
    detail::check_grid_budget(static_cast<double>(S), K, "ucb grid");
    std::vector<long long> lo(K, 0), hi(K, S);
    detail::enumerate_bounded(lo, hi, S, [&](const std::vector<long long>& n) {
      double partial = 0.0;
      for (int j = 0; j < K - 1; ++j) {
        double w = spec.eps * (n[j] + 0.5);
        grid.flat.push_back(w);
        partial += w;
      }
      grid.flat.push_back(1.0 - partial);
    });
    return grid;
  }

  long long num = detail::ipow_checked(2, spec.ell, "cirt");
  long long den = detail::ipow_checked(spec.A, spec.ell + 1, "cirt");
  double step = static_cast<double>(num) / static_cast<double>(den);
  double half = step * spec.A / 2.0;

  if (spec.kind == GridSpec::Kind::cirt) {
    bool feasible = den % num == 0;
    long long S = feasible ? den / num : std::llround(static_cast<double>(den) / num);
    std::vector<long long> lo(K), hi(K);
    for (int i = 0; i < K; ++i) {
      lo[i] = std::max<long long>(0, static_cast<long long>(
                                         std::ceil((spec.center[i] - half) / step - 1e-9)));
      hi[i] = std::min<long long>(S, static_cast<long long>(
                                         std::floor((spec.center[i] + half) / step + 1e-9)));
    }
    double cand = 1.0;
    for (int i = 0; i < K; ++i) cand *= static_cast<double>(std::max<long long>(0, hi[i] - lo[i] + 1));
    if (cand * K > 1e7) throw ConfigError("cirt grid: grid too fine");
    if (feasible) {
      detail::enumerate_bounded(lo, hi, S, [&](const std::vector<long long>& n) {
        double partial = 0.0;
        for (int j = 0; j < K - 1; ++j) {
          grid.flat.push_back(n[j] * step);
          partial += n[j] * step;
        }
        grid.flat.push_back(1.0 - partial);
      });
    }
    if (grid.flat.empty()) {
      // box holds no sum-feasible lattice point: fall back to the projection
      // of the center onto the sum constraint
      double partial = 0.0;
      for (int j = 0; j < K - 1; ++j) {
        double w = std::round(spec.center[j] / step) * step;
        grid.flat.push_back(w);
        partial += w;
      }
      grid.flat.push_back(1.0 - partial);
    }
    return grid;
  }

  // cirt_tracking
  if (den % num != 0) throw DegenerateGridError("tracking grid: spacing does not divide 1");
  long long D = den / num;
  if ((2 * D - K) % 2 != 0 || 2 * D - K < 0) {
    throw DegenerateGridError("tracking grid: half-offset sum constraint infeasible");
  }
  long long S = D - K / 2;  // K even here, otherwise the parity check throws
  std::vector<long long> lo(K), hi(K);
  for (int i = 0; i < K; ++i) {
    lo[i] = std::max<long long>(0, static_cast<long long>(
                                       std::ceil((spec.center[i] - half) / step - 0.5 - 1e-9)));
    hi[i] = std::min<long long>(S, static_cast<long long>(
                                       std::floor((spec.center[i] + half) / step - 0.5 + 1e-9)));
  }
  double cand = 1.0;
  for (int i = 0; i < K; ++i) cand *= static_cast<double>(std::max<long long>(0, hi[i] - lo[i] + 1));
  if (cand * K > 1e7) throw ConfigError("tracking grid: grid too fine");
  detail::enumerate_bounded(lo, hi, S, [&](const std::vector<long long>& n) {
    double partial = 0.0;
    for (int j = 0; j < K - 1; ++j) {
      double w = (n[j] + 0.5) * step;
      grid.flat.push_back(w);
      partial += w;
    }
    grid.flat.push_back(1.0 - partial);
  });
  if (grid.flat.empty()) {
    throw DegenerateGridError("tracking grid: box holds no feasible point");
  }
  return grid;
}

}  // namespace pmb
