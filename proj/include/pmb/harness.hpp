#pragma once

#include <atomic>
#include <chrono>
#include <cstdint>
#include <cstdio>
#include <cstdlib>
#include <cstring>
#include <fstream>
#include <mutex>
#include <sstream>
#include <string>
#include <thread>
#include <vector>

#include "arms.hpp"
#include "distortion.hpp"
#include "errors.hpp"
#include "oracle.hpp"
#include "policies.hpp"
#include "rng.hpp"

namespace pmb {

inline int harness_threads() {
  if (const char* env = std::getenv("PM_BANDITS_THREADS")) {
    int v = std::atoi(env);
    if (v > 0) return v;
  }
  unsigned hc = std::thread::hardware_concurrency();
  return hc > 0 ? static_cast<int>(hc) : 4;
}

struct RunTrace {
  std::vector<long long> tau;
  long long T = 0;
  std::uint64_t seed = 0;  // substream seed actually fed to the policy's rng
  int trial = 0;
  std::vector<PhaseEvent> events;
  bool reached_track = false;
  MixtureWeights track_center;
  double track_halfwidth = 0.0;
  std::vector<int> arms_played;     // filled only when record_steps is set
  std::vector<double> rewards_seen;  // same indexing as arms_played
};

inline RunTrace run_trial(const BanditInstance& inst, const Distortion& d,
                          const PolicyConfig& pc, std::uint64_t master_seed, int trial_index) {
  Rng rng = Rng::for_trial(master_seed, static_cast<std::uint64_t>(trial_index));
  std::unique_ptr<Policy> pol = make_policy(inst, d, pc, rng);
  RunTrace trace;
  trace.T = pc.T;
  trace.trial = trial_index;
  trace.seed = Rng::trial_seed(master_seed, static_cast<std::uint64_t>(trial_index));
  if (pc.record_steps) {
    trace.arms_played.reserve(static_cast<size_t>(pc.T));
    trace.rewards_seen.reserve(static_cast<size_t>(pc.T));
  }
  for (long long t = 0; t < pc.T; ++t) {
    int arm = pol->step(t);
    double x = inst.arms[static_cast<size_t>(arm)].sample(rng);
    pol->observe(arm, x);
    if (pc.record_steps) {
      trace.arms_played.push_back(arm);
      trace.rewards_seen.push_back(x);
    }
  }
  trace.tau = pol->tau;
  if (const auto* ev = pol->phase_events()) trace.events = *ev;
  trace.reached_track = pol->in_tracking();
  if (trace.reached_track) {
    trace.track_center = pol->tracking_center();
    trace.track_halfwidth = pol->tracking_halfwidth();
  }
  return trace;
}

// regret of the terminal allocation against the best mixture, both under the
// true arm models
inline double evaluate_regret(const RunTrace& trace, const BanditInstance& inst,
                              const Distortion& d) {
  MixtureValue star = optimal_mixture(inst, d);
  MixtureWeights w(trace.tau.size());
  for (size_t i = 0; i < w.size(); ++i) {
    w[i] = static_cast<double>(trace.tau[i]) / static_cast<double>(trace.T);
  }
  return star.value - true_mixture_value(inst, d, w);
}

struct SweepRow {
  std::string policy;
  long long T = 0;
  int trial = 0;
  double regret = 0.0;
  std::vector<long long> tau;
  std::uint64_t seed = 0;
};

struct SweepConfig {
  BanditInstance inst;
  Distortion d;
  std::vector<PolicyConfig> policies;
  std::vector<long long> horizons;
  int trials = 100;
  std::uint64_t seed = 1;
  double beta = 1.0;  // gap exponent fed to choose_epsilon when eps is unset
  bool record_steps = false;
};

struct SweepResult {
  std::vector<SweepRow> rows;
  std::vector<std::string> notes;
  MixtureWeights alpha_star;
  double v_star = 0.0;
  std::vector<PolicyConfig> resolved;  // one entry per (policy, horizon), eps and gaps filled
};

// Fills per-horizon derived quantities: eps via choose_epsilon when absent,
// ETC's gap from a gap_report on its own grid.
inline PolicyConfig resolve_policy(const SweepConfig& cfg, const PolicyConfig& base,
                                   long long T, std::vector<std::string>* notes) {
  PolicyConfig pc = base;
  pc.T = T;
  pc.record_steps = cfg.record_steps;
  auto [q, Lh] = holder_params(cfg.d, cfg.inst.support_bounds());
  pc.q = q;
  pc.L_h = Lh;
  if (pc.tag == "etc" || pc.tag == "ce_ucb" || pc.tag == "pm_ucb") {
    if (pc.eps <= 0.0) {
      pc.eps = choose_epsilon(pc.tag == "etc" ? EpsPolicy::etc : EpsPolicy::ucb, cfg.inst.K(),
                              q, cfg.beta, static_cast<double>(T));
      if (notes) {
        std::ostringstream os;
        os << pc.tag << " T=" << T << ": eps chosen as " << pc.eps;
        notes->push_back(os.str());
      }
    }
  }
  if (pc.tag == "etc" && pc.delta_gap <= 0.0) {
    GapReport rep = gap_report(cfg.inst, cfg.d, GridSpec::etc(pc.eps, cfg.inst.K()));
    if (pc.variant == GapVariant::delta13) {
      if (rep.delta13.has_value() && *rep.delta13 > 0.0) {
        pc.delta_gap = *rep.delta13;
      } else {
        pc.delta_gap = rep.delta12;
        if (notes) {
          notes->push_back("etc: delta13 absent on this grid; fell back to delta12");
        }
      }
    } else {
      pc.delta_gap = rep.delta12;
    }
    if (!(pc.delta_gap > 0.0)) {
      throw ConfigError("etc: instance has no utility gap on its grid; cannot size exploration");
    }
  }
  return pc;
}

inline SweepResult sweep(const SweepConfig& cfg) {
  if (cfg.policies.empty()) throw ConfigError("sweep: policy list is empty");
  if (cfg.trials < 1) throw ConfigError("sweep: trials must be >= 1");
  if (cfg.horizons.empty()) throw ConfigError("sweep: no horizons given");
  for (size_t i = 1; i < cfg.horizons.size(); ++i) {
    if (cfg.horizons[i] <= cfg.horizons[i - 1]) {
      throw ConfigError("sweep: horizons must be strictly increasing");
    }
  }
  SweepResult result;
  MixtureValue star = optimal_mixture(cfg.inst, cfg.d);
  result.alpha_star = star.alpha;
  result.v_star = star.value;

  struct Task {
    PolicyConfig pc;
    long long T;
    int trial;
    size_t row;
  };
  std::vector<Task> tasks;
  for (const auto& base : cfg.policies) {
    for (long long T : cfg.horizons) {
      PolicyConfig pc = resolve_policy(cfg, base, T, &result.notes);
      result.resolved.push_back(pc);
      for (int trial = 0; trial < cfg.trials; ++trial) {
        tasks.push_back(Task{pc, T, trial, tasks.size()});
      }
    }
  }
  result.rows.resize(tasks.size());

  std::atomic<size_t> next{0};
  int workers = std::min<int>(harness_threads(), static_cast<int>(tasks.size()));
  if (workers < 1) workers = 1;
  std::vector<std::thread> pool;
  std::mutex err_mu;
  std::string first_error;
  auto body = [&]() {
    for (;;) {
      size_t i = next.fetch_add(1);
      if (i >= tasks.size()) return;
      const Task& task = tasks[i];
      try {
        RunTrace tr = run_trial(cfg.inst, cfg.d, task.pc, cfg.seed, task.trial);
        MixtureWeights w(tr.tau.size());
        for (size_t j = 0; j < w.size(); ++j) {
          w[j] = static_cast<double>(tr.tau[j]) / static_cast<double>(tr.T);
        }
        SweepRow row;
        row.policy = task.pc.tag;
        row.T = task.T;
        row.trial = task.trial;
        row.regret = result.v_star - true_mixture_value(cfg.inst, cfg.d, w);
        row.tau = tr.tau;
        row.seed = tr.seed;
        result.rows[task.row] = std::move(row);
      } catch (const std::exception& e) {
        std::lock_guard<std::mutex> lk(err_mu);
        if (first_error.empty()) first_error = e.what();
        return;
      }
    }
  };
  for (int wkr = 0; wkr < workers; ++wkr) pool.emplace_back(body);
  for (auto& th : pool) th.join();
  if (!first_error.empty()) throw ConfigError(first_error);
  return result;
}

inline std::string format_double(double v) {
  char buf[64];
  std::snprintf(buf, sizeof(buf), "%.12g", v);
  return buf;
}

inline std::string sweep_csv(const SweepResult& result, int K) {
  std::ostringstream os;
  os << "policy,T,trial,regret";
  for (int i = 1; i <= K; ++i) os << ",tau_" << i;
  os << ",seed\n";
  for (const auto& row : result.rows) {
    os << row.policy << ',' << row.T << ',' << row.trial << ',' << format_double(row.regret);
    for (long long c : row.tau) os << ',' << c;
    os << ',' << row.seed << '\n';
  }
  return os.str();
}

namespace detail {

// SHA-1, enough for git-style blob hashes of config files
struct Sha1 {
  std::uint32_t h[5] = {0x67452301u, 0xEFCDAB89u, 0x98BADCFEu, 0x10325476u, 0xC3D2E1F0u};
  std::vector<unsigned char> buffer;
  std::uint64_t total = 0;

  static std::uint32_t rol(std::uint32_t v, int s) { return (v << s) | (v >> (32 - s)); }

  void block(const unsigned char* p) {
    std::uint32_t w[80];
    for (int i = 0; i < 16; ++i) {
      w[i] = (std::uint32_t(p[4 * i]) << 24) | (std::uint32_t(p[4 * i + 1]) << 16) |
             (std::uint32_t(p[4 * i + 2]) << 8) | std::uint32_t(p[4 * i + 3]);
    }
    for (int i = 16; i < 80; ++i) w[i] = rol(w[i - 3] ^ w[i - 8] ^ w[i - 14] ^ w[i - 16], 1);
    std::uint32_t a = h[0], b = h[1], c = h[2], d = h[3], e = h[4];
    for (int i = 0; i < 80; ++i) {
      std::uint32_t f, k;
      if (i < 20) {
        f = (b & c) | (~b & d);
        k = 0x5A827999u;
      } else if (i < 40) {
        f = b ^ c ^ d;
        k = 0x6ED9EBA1u;
      } else if (i < 60) {
        f = (b & c) | (b & d) | (c & d);
        k = 0x8F1BBCDCu;
      } else {
        f = b ^ c ^ d;
        k = 0xCA62C1D6u;
      }
      std::uint32_t tmp = rol(a, 5) + f + e + k + w[i];
      e = d;
      d = c;
      c = rol(b, 30);
      b = a;
      a = tmp;
    }
    h[0] += a;
    h[1] += b;
    h[2] += c;
    h[3] += d;
    h[4] += e;
  }

  void update(const unsigned char* p, size_t n) {
    total += n;
    buffer.insert(buffer.end(), p, p + n);
    size_t off = 0;
    while (buffer.size() - off >= 64) {
      block(buffer.data() + off);
      off += 64;
    }
    buffer.erase(buffer.begin(), buffer.begin() + static_cast<long>(off));
  }

  std::string hex() {
    std::uint64_t bits = total * 8;
    unsigned char pad = 0x80;
    update(&pad, 1);
    unsigned char zero = 0;
    while (buffer.size() != 56) update(&zero, 1);
    unsigned char len[8];
    for (int i = 0; i < 8; ++i) len[i] = static_cast<unsigned char>(bits >> (56 - 8 * i));
    update(len, 8);
    char out[41];
    for (int i = 0; i < 5; ++i) std::snprintf(out + 8 * i, 9, "%08x", h[i]);
    return std::string(out, 40);
  }
};

}  // namespace detail

// hash of "blob <len>\0<content>", matching git's object id for the file
inline std::string git_blob_sha1(const std::string& content) {
  detail::Sha1 sha;
  std::string header = "blob " + std::to_string(content.size());
  sha.update(reinterpret_cast<const unsigned char*>(header.data()), header.size() + 1);
  sha.update(reinterpret_cast<const unsigned char*>(content.data()), content.size());
  return sha.hex();
}

struct BenchRow {
  std::string policy;
  double threshold = 0.0;
  long long T_reached = 0;
  double seconds = 0.0;
  bool reachable = false;
};

// Doubles T from 256 until the mean terminal regret over `trials` single-threaded
// runs drops below each threshold; records the policy-execution wall time of
// the achieving batch.
inline std::vector<BenchRow> bench_time(const BanditInstance& inst, const Distortion& d,
                                        const std::vector<PolicyConfig>& policies,
                                        const std::vector<double>& thresholds, int trials,
                                        std::uint64_t seed, long long T_cap = 10000000) {
  MixtureValue star = optimal_mixture(inst, d);
  std::vector<BenchRow> out;
  for (const auto& base : policies) {
    for (double thr : thresholds) {
      BenchRow row;
      row.policy = base.tag;
      row.threshold = thr;
      for (long long T = 256; T <= T_cap; T *= 2) {
        PolicyConfig pc = base;
        pc.T = T;
        double sum_regret = 0.0;
        auto t0 = std::chrono::steady_clock::now();
        std::vector<RunTrace> traces;
        traces.reserve(static_cast<size_t>(trials));
        for (int trial = 0; trial < trials; ++trial) {
          traces.push_back(run_trial(inst, d, pc, seed, trial));
        }
        auto t1 = std::chrono::steady_clock::now();
        for (const auto& tr : traces) {
          MixtureWeights w(tr.tau.size());
          for (size_t j = 0; j < w.size(); ++j) {
            w[j] = static_cast<double>(tr.tau[j]) / static_cast<double>(tr.T);
          }
          sum_regret += star.value - true_mixture_value(inst, d, w);
        }
        double mean_regret = sum_regret / trials;
        if (mean_regret < thr) {
          row.T_reached = T;
          row.seconds = std::chrono::duration<double>(t1 - t0).count();
          row.reachable = true;
          break;
        }
      }
      out.push_back(row);
    }
  }
  return out;
}

inline void write_text_file(const std::string& path, const std::string& content) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw ConfigError("cannot open output file '" + path + "'");
  out << content;
  if (!out) throw ConfigError("failed writing output file '" + path + "'");
}

inline std::string read_text_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw ConfigError("cannot open file '" + path + "'");
  std::ostringstream os;
  os << in.rdbuf();
  return os.str();
}

}  // namespace pmb
