#pragma once

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <numbers>
#include <string>
#include <vector>

#include "cdf.hpp"
#include "errors.hpp"
#include "rng.hpp"

namespace pmb {

inline double norm_cdf(double z) { return 0.5 * std::erfc(-z * std::numbers::sqrt2 / 2.0); }

// Acklam's rational approximation to the standard normal quantile, refined
// with one Halley step against erfc.
inline double norm_quantile(double u) {
  if (!(u > 0.0 && u < 1.0)) throw DomainError("norm_quantile: u outside (0,1)");
  static const double a[] = {-3.969683028665376e+01, 2.209460984245205e+02,
                             -2.759285104469687e+02, 1.383577518672690e+02,
                             -3.066479806614716e+01, 2.506628277459239e+00};
  static const double b[] = {-5.447609879822406e+01, 1.615858368580409e+02,
                             -1.556989798598866e+02, 6.680131188771972e+01,
                             -1.328068155288572e+01};
  static const double c[] = {-7.784894002430293e-03, -3.223964580411365e-01,
                             -2.400758277161838e+00, -2.549732539343734e+00,
                             4.374664141464968e+00,  2.938163982698783e+00};
  static const double dd[] = {7.784695709041462e-03, 3.224671290700398e-01,
                              2.445134137142996e+00, 3.754408661907416e+00};
  const double plow = 0.02425, phigh = 1.0 - plow;
  double x;
  if (u < plow) {
    double q = std::sqrt(-2.0 * std::log(u));
    x = (((((c[0] * q + c[1]) * q + c[2]) * q + c[3]) * q + c[4]) * q + c[5]) /
        ((((dd[0] * q + dd[1]) * q + dd[2]) * q + dd[3]) * q + 1.0);
  } else if (u <= phigh) {
    double q = u - 0.5, r = q * q;
    x = (((((a[0] * r + a[1]) * r + a[2]) * r + a[3]) * r + a[4]) * r + a[5]) * q /
        (((((b[0] * r + b[1]) * r + b[2]) * r + b[3]) * r + b[4]) * r + 1.0);
  } else {
    double q = std::sqrt(-2.0 * std::log(1.0 - u));
    x = -(((((c[0] * q + c[1]) * q + c[2]) * q + c[3]) * q + c[4]) * q + c[5]) /
        ((((dd[0] * q + dd[1]) * q + dd[2]) * q + dd[3]) * q + 1.0);
  }
  double e = norm_cdf(x) - u;
  double pdf = std::exp(-0.5 * x * x) / std::sqrt(2.0 * std::numbers::pi);
  double du = e / pdf;
  x -= du / (1.0 + 0.5 * x * du);
  return x;
}

struct ArmModel {
  enum class Kind { bernoulli, gaussian, shifted_exponential, finite };
  Kind kind = Kind::bernoulli;
  double p = 0.0;                 // bernoulli
  double mu = 0.0, sigma = 1.0;   // gaussian
  double c = 0.0, lambda = 1.0;   // shifted_exponential: support [c, inf)
  std::vector<double> supports;   // finite
  std::vector<double> probs;

  static ArmModel bernoulli(double p) {
    if (p < 0.0 || p > 1.0) throw ConfigError("bernoulli arm: p outside [0,1]");
    ArmModel m;
    m.kind = Kind::bernoulli;
    m.p = p;
    return m;
  }
  static ArmModel gaussian(double mu, double sigma) {
    if (!(sigma > 0.0)) throw ConfigError("gaussian arm: sigma must be positive");
    ArmModel m;
    m.kind = Kind::gaussian;
    m.mu = mu;
    m.sigma = sigma;
    return m;
  }
  static ArmModel shifted_exponential(double c, double lambda) {
    if (!(c > 0.0)) throw ConfigError("shifted_exponential arm: shift must be positive");
    if (!(lambda > 0.0)) throw ConfigError("shifted_exponential arm: rate must be positive");
    ArmModel m;
    m.kind = Kind::shifted_exponential;
    m.c = c;
    m.lambda = lambda;
    return m;
  }
  static ArmModel finite(std::vector<double> xs, std::vector<double> ps) {
    if (xs.size() != ps.size() || xs.empty()) throw ConfigError("finite arm: size mismatch");
    double tot = 0.0;
    for (double q : ps) {
      if (q < 0.0) throw ConfigError("finite arm: negative probability");
      tot += q;
    }
    if (std::fabs(tot - 1.0) > 1e-9) throw ConfigError("finite arm: probabilities must sum to 1");
    ArmModel m;
    m.kind = Kind::finite;
    m.supports = std::move(xs);
    m.probs = std::move(ps);
    return m;
  }

  bool is_step() const { return kind == Kind::bernoulli || kind == Kind::finite; }

  double sample(Rng& rng) const {
    switch (kind) {
      case Kind::bernoulli:
        return rng.uniform() < p ? 1.0 : 0.0;
      case Kind::gaussian:
        return mu + sigma * rng.gaussian();
      case Kind::shifted_exponential:
        return c - std::log(1.0 - rng.uniform()) / lambda;
      case Kind::finite: {
        double u = rng.uniform(), acc = 0.0;
        for (size_t i = 0; i < supports.size(); ++i) {
          acc += probs[i];
          if (u < acc) return supports[i];
        }
        return supports.back();
      }
    }
    return 0.0;
  }

  FiniteSupportCdf step_cdf() const {
    if (kind == Kind::bernoulli) return bernoulli_cdf(p);
    if (kind == Kind::finite) {
      std::vector<std::pair<double, double>> pts;
      for (size_t i = 0; i < supports.size(); ++i) pts.emplace_back(supports[i], probs[i]);
      return cdf_from_points(std::move(pts));
    }
    throw DomainError("step_cdf: arm is not finitely supported");
  }

  double cdf_at(double x) const {
    switch (kind) {
      case Kind::bernoulli:
        return x < 0.0 ? 0.0 : (x < 1.0 ? 1.0 - p : 1.0);
      case Kind::gaussian:
        return norm_cdf((x - mu) / sigma);
      case Kind::shifted_exponential:
        return x < c ? 0.0 : 1.0 - std::exp(-lambda * (x - c));
      case Kind::finite: {
        double acc = 0.0;
        for (size_t i = 0; i < supports.size(); ++i) {
          if (supports[i] <= x) acc += probs[i];
        }
        return acc;
      }
    }
    return 0.0;
  }

  double quantile(double u) const {
    switch (kind) {
      case Kind::bernoulli:
        return u <= 1.0 - p ? 0.0 : 1.0;
      case Kind::gaussian:
        return mu + sigma * norm_quantile(u);
      case Kind::shifted_exponential:
        return c - std::log(1.0 - std::min(u, 1.0 - 1e-16)) / lambda;
      case Kind::finite: {
        double acc = 0.0;
        for (size_t i = 0; i < supports.size(); ++i) {
          acc += probs[i];
          if (acc >= u - 1e-15) return supports[i];
        }
        return supports.back();
      }
    }
    return 0.0;
  }

  // window holding all mass up to a sliver below quadrature tolerance
  std::pair<double, double> support_bounds() const {
    switch (kind) {
      case Kind::bernoulli:
        return {0.0, 1.0};
      case Kind::gaussian:
        return {mu - 8.0 * sigma, mu + 8.0 * sigma};
      case Kind::shifted_exponential:
        return {c, c + 40.0 / lambda};
      case Kind::finite:
        return {*std::min_element(supports.begin(), supports.end()),
                *std::max_element(supports.begin(), supports.end())};
    }
    return {0.0, 1.0};
  }

  double mean() const {
    switch (kind) {
      case Kind::bernoulli:
        return p;
      case Kind::gaussian:
        return mu;
      case Kind::shifted_exponential:
        return c + 1.0 / lambda;
      case Kind::finite: {
        double s = 0.0;
        for (size_t i = 0; i < supports.size(); ++i) s += supports[i] * probs[i];
        return s;
      }
    }
    return 0.0;
  }
};

struct BanditInstance {
  std::vector<ArmModel> arms;

  int K() const { return static_cast<int>(arms.size()); }

  bool all_bernoulli() const {
    for (const auto& a : arms) {
      if (a.kind != ArmModel::Kind::bernoulli) return false;
    }
    return !arms.empty();
  }

  bool all_step() const {
    for (const auto& a : arms) {
      if (!a.is_step()) return false;
    }
    return !arms.empty();
  }

  std::pair<double, double> support_bounds() const {
    if (arms.empty()) throw ConfigError("instance has no arms");
    auto [lo, hi] = arms[0].support_bounds();
    for (const auto& a : arms) {
      auto [l, h] = a.support_bounds();
      lo = std::min(lo, l);
      hi = std::max(hi, h);
    }
    return {lo, hi};
  }
};

// Empirical reward record for one arm.
struct EmpiricalCdf {
  std::vector<double> obs;
  double sum = 0.0;
  bool all_binary = true;

  void add(double x) {
    obs.push_back(x);
    sum += x;
    if (x != 0.0 && x != 1.0) all_binary = false;
  }

  long long tau() const { return static_cast<long long>(obs.size()); }

  double mean() const {
    if (obs.empty()) throw DomainError("empirical mean of zero samples");
    return sum / static_cast<double>(obs.size());
  }

  FiniteSupportCdf snapshot() const {
    if (obs.empty()) throw DomainError("empirical snapshot of zero samples");
    if (all_binary) {
      double n = static_cast<double>(obs.size());
      FiniteSupportCdf f;
      if (sum <= 0.0) {
        f.xs = {0.0};
        f.cum = {1.0};
      } else if (sum >= n) {
        f.xs = {1.0};
        f.cum = {1.0};
      } else {
        f.xs = {0.0, 1.0};
        f.cum = {1.0 - sum / n, 1.0};
      }
      return f;
    }
    std::vector<double> xs(obs);
    std::sort(xs.begin(), xs.end());
    FiniteSupportCdf f;
    double step = 1.0 / static_cast<double>(xs.size());
    double cum = 0.0;
    for (double x : xs) {
      cum += step;
      if (!f.xs.empty() && x - f.xs.back() <= 1e-12) {
        f.cum.back() = cum;
      } else {
        f.xs.push_back(x);
        f.cum.push_back(cum);
      }
    }
    f.cum.back() = 1.0;
    return f;
  }
};

inline double concentration_radius(double tau, double logT) {
  if (!(tau >= 1.0)) throw DomainError("concentration_radius: tau must be >= 1");
  if (!(logT > 0.0)) throw DomainError("concentration_radius: log horizon must be positive");
  return 16.0 * (std::sqrt(2.0 * std::numbers::e * logT) + 32.0) / std::sqrt(tau);
}

// W1 distance between the two mixture CDFs divided by the L1 distance of the
// weights. Step instances are evaluated exactly; otherwise the integral runs
// over a merged per-arm quantile grid.
inline double mixture_w_ratio(const BanditInstance& inst, const std::vector<double>& alpha,
                              const std::vector<double>& beta, int grid_size = 100000) {
  int K = inst.K();
  if (static_cast<int>(alpha.size()) != K || static_cast<int>(beta.size()) != K) {
    throw DomainError("mixture_w_ratio: weight size mismatch");
  }
  double l1 = 0.0;
  for (int i = 0; i < K; ++i) l1 += std::fabs(alpha[i] - beta[i]);
  if (l1 < 1e-15) throw DomainError("mixture_w_ratio: identical mixtures");

  if (inst.all_step()) {
    std::vector<FiniteSupportCdf> cdfs;
    cdfs.reserve(K);
    for (const auto& a : inst.arms) cdfs.push_back(a.step_cdf());
    std::vector<const FiniteSupportCdf*> ptrs;
    for (const auto& f : cdfs) ptrs.push_back(&f);
    return wasserstein1_step(mix_step(alpha, ptrs), mix_step(beta, ptrs)) / l1;
  }

  int per_arm = std::max(grid_size / K, 8);
  std::vector<double> grid;
  grid.reserve(static_cast<size_t>(per_arm) * K);
  for (int i = 0; i < K; ++i) {
    std::vector<double> qs(per_arm);
    for (int j = 0; j < per_arm; ++j) {
      qs[j] = inst.arms[i].quantile((j + 0.5) / per_arm);
    }
    std::vector<double> merged(grid.size() + qs.size());
    std::merge(grid.begin(), grid.end(), qs.begin(), qs.end(), merged.begin());
    grid.swap(merged);
  }
  double total = 0.0, prev_x = grid[0], prev_d = 0.0;
  for (int i = 0; i < K; ++i) prev_d += (alpha[i] - beta[i]) * inst.arms[i].cdf_at(prev_x);
  prev_d = std::fabs(prev_d);
  for (size_t k = 1; k < grid.size(); ++k) {
    double x = grid[k];
    double dv = 0.0;
    for (int i = 0; i < K; ++i) dv += (alpha[i] - beta[i]) * inst.arms[i].cdf_at(x);
    dv = std::fabs(dv);
    total += 0.5 * (prev_d + dv) * (x - prev_x);
    prev_x = x;
    prev_d = dv;
  }
  return total / l1;
}

}  // namespace pmb
