#pragma once

#include <algorithm>
#include <cmath>
#include <limits>
#include <memory>
#include <optional>
#include <string>
#include <vector>

#include "arms.hpp"
#include "choquet.hpp"
#include "distortion.hpp"
#include "errors.hpp"
#include "oracle.hpp"
#include "rng.hpp"
#include "simplex.hpp"

namespace pmb {

struct PolicyConfig {
  std::string tag;  // etc | pm_ucb | ce_ucb | cirt | fixed_anytime | uniform
  long long T = 0;  // horizon; anytime policies ignore it except for stopping the loop
  double eps = 0.0;
  double rho = 0.5;
  double delta_gap = 0.0;
  GapVariant variant = GapVariant::delta12;
  int A = 4;
  double eps_target = 0.0;
  double delta = 0.05;
  double xi = 0.5;
  double q = 1.0;
  double L_h = 1.0;
  std::optional<MixtureWeights> frozen_commit;  // etc: overrides the empirical commit target
  double radius_scale = 1.0;                    // cirt: diagnostic shrink factor for tests
  bool record_steps = false;
};

struct PhaseEvent {
  long long t = 0;
  int phase = 0;
  MixtureWeights b;
};

// smallest-deficit-first arm choice toward target mixture a
inline int undersample_arm(long long t, const MixtureWeights& a,
                           const std::vector<long long>& tau) {
  int best = 0;
  double best_v = -std::numeric_limits<double>::infinity();
  for (size_t i = 0; i < a.size(); ++i) {
    double v = static_cast<double>(t) * a[i] - static_cast<double>(tau[i]);
    if (v > best_v) {
      best_v = v;
      best = static_cast<int>(i);
    }
  }
  return best;
}

// Max/min of h over a mixture-mean interval. The concave branch also covers
// monotone concave families exactly; the grid branch is the general fallback.
struct IntervalScorer {
  const Distortion* d = nullptr;
  double u_star = 1.0;
  bool concave = false;

  explicit IntervalScorer(const Distortion& dist) : d(&dist) {
    concave = dist.shape == Shape::concave || dist.shape == Shape::strictly_concave;
    u_star = dist.monotone ? 1.0 : argmax_h(dist);
  }

  double max_over(double lo, double hi) const {
    if (concave) return (*d)(std::clamp(u_star, lo, hi));
    if (d->monotone) return (*d)(hi);
    double best = -std::numeric_limits<double>::infinity();
    for (int i = 0; i <= 10000; ++i) {
      best = std::max(best, (*d)(lo + (hi - lo) * i / 10000.0));
    }
    return best;
  }

  double min_over(double lo, double hi) const {
    if (concave) return std::min((*d)(lo), (*d)(hi));
    if (d->monotone) return (*d)(lo);
    double best = std::numeric_limits<double>::infinity();
    for (int i = 0; i <= 10000; ++i) {
      best = std::min(best, (*d)(lo + (hi - lo) * i / 10000.0));
    }
    return best;
  }
};

struct Policy {
  int K = 0;
  std::vector<long long> tau;
  std::vector<EmpiricalCdf> emp;

  explicit Policy(int K_) : K(K_), tau(K_, 0), emp(K_) {}
  virtual ~Policy() = default;

  // chooses the arm for the round after t completed rounds
  virtual int step(long long t) = 0;

  virtual void observe(int arm, double x) {
    tau[arm] += 1;
    emp[arm].add(x);
  }

  virtual const std::vector<PhaseEvent>* phase_events() const { return nullptr; }
  virtual bool in_tracking() const { return false; }
  virtual MixtureWeights tracking_center() const { return {}; }
  virtual double tracking_halfwidth() const { return 0.0; }
  virtual double snapped_eps() const { return 0.0; }

 protected:
  bool all_counted() const {
    for (long long c : tau) {
      if (c == 0) return false;
    }
    return true;
  }

  std::vector<double> bernoulli_means() const {
    std::vector<double> p(K);
    for (int i = 0; i < K; ++i) p[i] = emp[i].mean();
    return p;
  }

  // empirical utility of every grid point through the step-CDF union
  std::vector<double> empirical_values(const Distortion& d, const Grid& grid) const {
    std::vector<FiniteSupportCdf> snaps;
    snaps.reserve(emp.size());
    for (const auto& e : emp) snaps.push_back(e.snapshot());
    std::vector<const FiniteSupportCdf*> ptrs;
    for (const auto& s : snaps) ptrs.push_back(&s);
    StepUnionEvaluator ev = StepUnionEvaluator::build(ptrs);
    std::vector<double> vals(grid.size());
    for (size_t i = 0; i < grid.size(); ++i) vals[i] = ev.value(d, grid.row(i));
    return vals;
  }
};

struct UniformPolicy : Policy {
  std::vector<long long> plan;

  UniformPolicy(int K_, long long T, Rng& rng) : Policy(K_), plan(K_, T / K_) {
    long long rem = T - (T / K_) * K_;
    std::vector<int> idx(K_);
    for (int i = 0; i < K_; ++i) idx[i] = i;
    for (long long j = 0; j < rem; ++j) {
      auto pick = j + static_cast<long long>(rng.below(static_cast<std::uint64_t>(K_ - j)));
      std::swap(idx[j], idx[pick]);
      plan[idx[j]] += 1;
    }
  }

  int step(long long t) override {
    int start = static_cast<int>(t % K);
    for (int k = 0; k < K; ++k) {
      int i = (start + k) % K;
      if (tau[i] < plan[i]) return i;
    }
    return start;
  }
};

struct EtcPolicy : Policy {
  const BanditInstance* inst;
  Distortion d;
  PolicyConfig cfg;
  Grid grid;
  long long N = 0, n_e = 0, explore_end = 0;
  bool committed = false;
  MixtureWeights a_commit;
  std::vector<long long> targets;

  EtcPolicy(const BanditInstance& inst_, Distortion d_, PolicyConfig cfg_)
      : Policy(inst_.K()), inst(&inst_), d(std::move(d_)), cfg(std::move(cfg_)) {
    if (cfg.T < 2) throw ConfigError("etc: horizon T must be >= 2");
    if (!(cfg.delta_gap > 0.0)) throw ConfigError("etc: delta_gap must be positive");
    grid = enumerate_grid(GridSpec::etc(cfg.eps, K));
    N = n_epsilon(K, cfg.L_h, cfg.q, cfg.delta_gap, static_cast<double>(cfg.T), cfg.eps,
                  cfg.variant)
            .N;
    if (N > cfg.T / 2) N = std::llround(0.5 * K * cfg.eps * static_cast<double>(cfg.T));
    n_e = (N + K - 1) / K;
    if (n_e < 1) n_e = 1;
    explore_end = static_cast<long long>(K) * n_e;
    if (explore_end > cfg.T) {
      throw ConfigError("etc: horizon smaller than exploration length after cap");
    }
    targets.assign(K, 0);
  }

  double snapped_eps() const override { return cfg.eps; }

  void commit() {
    if (cfg.frozen_commit) {
      a_commit = *cfg.frozen_commit;
    } else if (inst->all_bernoulli()) {
      std::vector<double> p = bernoulli_means();
      size_t best = 0;
      double best_v = -std::numeric_limits<double>::infinity();
      for (size_t i = 0; i < grid.size(); ++i) {
        const double* w = grid.row(i);
        double m = 0.0;
        for (int j = 0; j < K; ++j) m += w[j] * p[j];
        double v = d(std::clamp(m, 0.0, 1.0));
        if (v > best_v) {
          best_v = v;
          best = i;
        }
      }
      a_commit = grid.weights(best);
    } else {
      std::vector<double> vals = empirical_values(d, grid);
      size_t best = 0;
      for (size_t i = 1; i < vals.size(); ++i) {
        if (vals[i] > vals[best]) best = i;
      }
      a_commit = grid.weights(best);
    }
    for (int i = 0; i < K - 1; ++i) {
      double want = static_cast<double>(cfg.T) * a_commit[i];
      targets[i] = want > static_cast<double>(n_e) ? static_cast<long long>(std::ceil(want))
                                                   : tau[i];
    }
    committed = true;
  }

  int step(long long t) override {
    if (t < explore_end) return static_cast<int>(t % K);
    if (!committed) commit();
    for (int i = 0; i < K - 1; ++i) {
      if (tau[i] < targets[i]) return i;
    }
    return K - 1;
  }
};

struct CeUcbPolicy : Policy {
  const BanditInstance* inst;
  Distortion d;
  PolicyConfig cfg;
  double eps = 0.0;
  Grid grid;
  long long n_e = 0, explore_end = 0;
  double logT = 0.0;
  long long prev = -1;
  bool bern = false;

  CeUcbPolicy(const BanditInstance& inst_, Distortion d_, PolicyConfig cfg_)
      : Policy(inst_.K()), inst(&inst_), d(std::move(d_)), cfg(std::move(cfg_)) {
    if (cfg.T < 3) throw ConfigError("ce_ucb: horizon T must be >= 3");
    if (!(cfg.rho > 0.0 && cfg.rho < 1.0)) throw ConfigError("ce_ucb: rho outside (0,1)");
    eps = snap_ucb_epsilon(cfg.eps, K);
    grid = enumerate_grid(GridSpec::ucb(eps, K));
    n_e = static_cast<long long>(std::ceil(cfg.rho * static_cast<double>(cfg.T) * eps / 4.0));
    explore_end = static_cast<long long>(K) * n_e;
    logT = std::log(static_cast<double>(cfg.T));
    bern = inst->all_bernoulli();
  }

  double snapped_eps() const override { return eps; }

  int step(long long t) override {
    if (t < explore_end) return static_cast<int>(t % K);
    std::vector<double> radii(K);
    for (int i = 0; i < K; ++i) {
      radii[i] = concentration_radius(static_cast<double>(tau[i]), logT);
    }
    std::vector<double> emp_vals;
    std::vector<double> p;
    if (bern) {
      p = bernoulli_means();
    } else {
      emp_vals = empirical_values(d, grid);
    }
    auto score = [&](size_t i) {
      const double* w = grid.row(i);
      double bonus = 0.0;
      for (int j = 0; j < K; ++j) bonus += std::pow(w[j] * radii[j], cfg.q);
      double base;
      if (bern) {
        double m = 0.0;
        for (int j = 0; j < K; ++j) m += w[j] * p[j];
        base = d(std::clamp(m, 0.0, 1.0));
      } else {
        base = emp_vals[i];
      }
      return base + cfg.L_h * bonus;
    };
    size_t best = 0;
    double best_v = score(0);
    for (size_t i = 1; i < grid.size(); ++i) {
      double v = score(i);
      if (v > best_v) {
        best_v = v;
        best = i;
      }
    }
    if (prev >= 0 && score(static_cast<size_t>(prev)) >= best_v - 1e-12) {
      best = static_cast<size_t>(prev);
    }
    prev = static_cast<long long>(best);
    return undersample_arm(t, grid.weights(best), tau);
  }
};

struct PmUcbPolicy : Policy {
  const BanditInstance* inst;
  Distortion d;
  PolicyConfig cfg;
  IntervalScorer scorer;
  double eps = 0.0;
  Grid grid;
  long long n_e = 0, explore_end = 0;
  double logT = 0.0;
  long long prev = -1;

  PmUcbPolicy(const BanditInstance& inst_, Distortion d_, PolicyConfig cfg_)
      : Policy(inst_.K()), inst(&inst_), d(std::move(d_)), cfg(std::move(cfg_)), scorer(d) {
    if (!inst->all_bernoulli()) {
      throw ConfigError("pm_ucb requires a Bernoulli environment; use ce_ucb instead");
    }
    if (cfg.T < 3) throw ConfigError("pm_ucb: horizon T must be >= 3");
    if (!(cfg.rho > 0.0 && cfg.rho < 1.0)) throw ConfigError("pm_ucb: rho outside (0,1)");
    eps = snap_ucb_epsilon(cfg.eps, K);
    grid = enumerate_grid(GridSpec::ucb(eps, K));
    n_e = static_cast<long long>(std::ceil(cfg.rho * static_cast<double>(cfg.T) * eps / 4.0));
    explore_end = static_cast<long long>(K) * n_e;
    logT = std::log(static_cast<double>(cfg.T));
  }

  double snapped_eps() const override { return eps; }

  int step(long long t) override {
    if (t < explore_end) return static_cast<int>(t % K);
    std::vector<double> lo(K), hi(K), p = bernoulli_means();
    for (int i = 0; i < K; ++i) {
      double r = concentration_radius(static_cast<double>(tau[i]), logT);
      lo[i] = std::max(0.0, p[i] - r);
      hi[i] = std::min(1.0, p[i] + r);
    }
    auto score = [&](size_t i) {
      const double* w = grid.row(i);
      double mlo = 0.0, mhi = 0.0;
      for (int j = 0; j < K; ++j) {
        mlo += w[j] * lo[j];
        mhi += w[j] * hi[j];
      }
      return scorer.max_over(mlo, mhi);
    };
    size_t best = 0;
    double best_v = score(0);
    for (size_t i = 1; i < grid.size(); ++i) {
      double v = score(i);
      if (v > best_v) {
        best_v = v;
        best = i;
      }
    }
    if (prev >= 0 && score(static_cast<size_t>(prev)) >= best_v - 1e-12) {
      best = static_cast<size_t>(prev);
    }
    prev = static_cast<long long>(best);
    return undersample_arm(t, grid.weights(best), tau);
  }
};

struct CirtPolicy : Policy {
  const BanditInstance* inst;
  Distortion d;
  PolicyConfig cfg;
  IntervalScorer scorer;
  int L = 0;
  double delta_K = 0.0, rad_const = 0.0;
  int ell = 1;
  Grid grid;
  bool tracking = false;
  MixtureWeights b_last, b_track;
  std::vector<PhaseEvent> events;

  CirtPolicy(const BanditInstance& inst_, Distortion d_, PolicyConfig cfg_)
      : Policy(inst_.K()), inst(&inst_), d(std::move(d_)), cfg(std::move(cfg_)), scorer(d) {
    if (!inst->all_bernoulli()) throw ConfigError("cirt requires a Bernoulli environment");
    if (!(cfg.delta > 0.0 && cfg.delta < 1.0)) throw ConfigError("cirt: delta outside (0,1)");
    if (!(cfg.xi > 0.0)) throw ConfigError("cirt: xi must be positive");
    L = phase_count(cfg.A, cfg.eps_target);
    delta_K = std::pow(1.0 + cfg.delta, 1.0 / K) - 1.0;
    rad_const = 16.0 * (std::sqrt(std::numbers::e * std::log(2.0 / delta_K)) + 32.0) *
                cfg.radius_scale;
    grid = enumerate_grid(GridSpec::etc(1.0 / cfg.A, K));
  }

  const std::vector<PhaseEvent>* phase_events() const override { return &events; }
  bool in_tracking() const override { return tracking; }
  MixtureWeights tracking_center() const override { return b_last; }
  double tracking_halfwidth() const override {
    return std::pow(2.0, L - 1) / std::pow(static_cast<double>(cfg.A), L);
  }

  size_t empirical_argmax(const std::vector<double>& p) const {
    size_t best = 0;
    double best_v = -std::numeric_limits<double>::infinity();
    for (size_t i = 0; i < grid.size(); ++i) {
      const double* w = grid.row(i);
      double m = 0.0;
      for (int j = 0; j < K; ++j) m += w[j] * p[j];
      double v = d(std::clamp(m, 0.0, 1.0));
      if (v > best_v) {
        best_v = v;
        best = i;
      }
    }
    return best;
  }

  int step(long long t) override {
    long long thr = static_cast<long long>(
        std::ceil(std::pow(static_cast<double>(t) / K, 1.0 / (1.0 + cfg.xi))));
    int e_arm = -1;
    long long e_tau = std::numeric_limits<long long>::max();
    for (int i = 0; i < K; ++i) {
      if (tau[i] <= thr && tau[i] < e_tau) {
        e_arm = i;
        e_tau = tau[i];
      }
    }
    if (!all_counted()) {
      return e_arm >= 0 ? e_arm : undersample_arm(t, MixtureWeights(K, 1.0 / K), tau);
    }

    std::vector<double> p = bernoulli_means();
    MixtureWeights a_t;
    if (!tracking) {
      size_t ai = empirical_argmax(p);
      std::vector<double> lo(K), hi(K);
      for (int i = 0; i < K; ++i) {
        double r = rad_const / std::sqrt(static_cast<double>(tau[i]));
        lo[i] = std::max(0.0, p[i] - r);
        hi[i] = std::min(1.0, p[i] + r);
      }
      auto interval = [&](size_t gi, bool upper) {
        const double* w = grid.row(gi);
        double mlo = 0.0, mhi = 0.0;
        for (int j = 0; j < K; ++j) {
          mlo += w[j] * lo[j];
          mhi += w[j] * hi[j];
        }
        return upper ? scorer.max_over(mlo, mhi) : scorer.min_over(mlo, mhi);
      };
      double lcb_best = interval(ai, false);
      double ucb_rest = -std::numeric_limits<double>::infinity();
      for (size_t i = 0; i < grid.size(); ++i) {
        if (i == ai) continue;
        ucb_rest = std::max(ucb_rest, interval(i, true));
      }
      if (grid.size() > 1 && lcb_best > ucb_rest) {
        b_last = grid.weights(ai);
        events.push_back(PhaseEvent{t, ell, b_last});
        if (ell == L) {
          tracking = true;
          try {
            Grid tg = enumerate_grid(GridSpec::cirt_tracking(L, cfg.A, b_last));
            size_t bt = 0;
            double best_v = -std::numeric_limits<double>::infinity();
            for (size_t i = 0; i < tg.size(); ++i) {
              const double* w = tg.row(i);
              double m = 0.0;
              for (int j = 0; j < K; ++j) m += w[j] * p[j];
              double v = d(std::clamp(m, 0.0, 1.0));
              if (v > best_v) {
                best_v = v;
                bt = i;
              }
            }
            b_track = tg.weights(bt);
          } catch (const DegenerateGridError&) {
            b_track = b_last;  // half-offset tracking lattice infeasible for this K
          }
        } else {
          grid = enumerate_grid(GridSpec::cirt(ell, cfg.A, b_last));
          ell += 1;
        }
      }
      a_t = tracking ? b_track : grid.weights(empirical_argmax(p));
    } else {
      a_t = b_track;
    }
    if (e_arm >= 0) return e_arm;
    return undersample_arm(t, a_t, tau);
  }
};

struct FixedAnytimePolicy : Policy {
  const BanditInstance* inst;
  Distortion d;
  PolicyConfig cfg;
  int L = 0;
  Grid grid;
  bool bern = false;

  FixedAnytimePolicy(const BanditInstance& inst_, Distortion d_, PolicyConfig cfg_)
      : Policy(inst_.K()), inst(&inst_), d(std::move(d_)), cfg(std::move(cfg_)) {
    if (!(cfg.xi > 0.0)) throw ConfigError("fixed_anytime: xi must be positive");
    L = phase_count(cfg.A, cfg.eps_target);
    double spacing = std::pow(2.0, L) / std::pow(static_cast<double>(cfg.A), L + 1);
    grid = enumerate_grid(GridSpec::ucb(spacing, K));
    bern = inst->all_bernoulli();
  }

  int step(long long t) override {
    long long thr = static_cast<long long>(
        std::ceil(std::pow(static_cast<double>(t) / K, 1.0 / (1.0 + cfg.xi))));
    int e_arm = -1;
    long long e_tau = std::numeric_limits<long long>::max();
    for (int i = 0; i < K; ++i) {
      if (tau[i] <= thr && tau[i] < e_tau) {
        e_arm = i;
        e_tau = tau[i];
      }
    }
    if (!all_counted()) {
      return e_arm >= 0 ? e_arm : undersample_arm(t, MixtureWeights(K, 1.0 / K), tau);
    }
    size_t best = 0;
    double best_v = -std::numeric_limits<double>::infinity();
    if (bern) {
      std::vector<double> p = bernoulli_means();
      for (size_t i = 0; i < grid.size(); ++i) {
        const double* w = grid.row(i);
        double m = 0.0;
        for (int j = 0; j < K; ++j) m += w[j] * p[j];
        double v = d(std::clamp(m, 0.0, 1.0));
        if (v > best_v) {
          best_v = v;
          best = i;
        }
      }
    } else {
      std::vector<double> vals = empirical_values(d, grid);
      for (size_t i = 0; i < vals.size(); ++i) {
        if (vals[i] > best_v) {
          best_v = vals[i];
          best = i;
        }
      }
    }
    if (e_arm >= 0) return e_arm;
    return undersample_arm(t, grid.weights(best), tau);
  }
};

inline std::unique_ptr<Policy> make_policy(const BanditInstance& inst, const Distortion& d,
                                           const PolicyConfig& cfg, Rng& rng) {
  if (cfg.tag == "uniform") return std::make_unique<UniformPolicy>(inst.K(), cfg.T, rng);
  if (cfg.tag == "etc") return std::make_unique<EtcPolicy>(inst, d, cfg);
  if (cfg.tag == "ce_ucb") return std::make_unique<CeUcbPolicy>(inst, d, cfg);
  if (cfg.tag == "pm_ucb") return std::make_unique<PmUcbPolicy>(inst, d, cfg);
  if (cfg.tag == "cirt") return std::make_unique<CirtPolicy>(inst, d, cfg);
  if (cfg.tag == "fixed_anytime") return std::make_unique<FixedAnytimePolicy>(inst, d, cfg);
  throw ConfigError("unknown policy tag '" + cfg.tag + "'");
}

}  // namespace pmb
