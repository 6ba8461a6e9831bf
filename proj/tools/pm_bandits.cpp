#include <cmath>
#include <cstdint>
#include <cstdio>
#include <cstring>
#include <iostream>
#include <map>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include <nlohmann/json.hpp>

#include "pmb/arms.hpp"
#include "pmb/config.hpp"
#include "pmb/distortion.hpp"
#include "pmb/errors.hpp"
#include "pmb/harness.hpp"
#include "pmb/oracle.hpp"
#include "pmb/svg.hpp"

namespace {

using json = nlohmann::json;

struct Args {
  std::string subcommand;
  std::string config_path;
  std::string out;
  std::string csv;
  std::string kind = "regret";
  std::optional<std::uint64_t> seed;
  std::optional<int> trials;
};

Args parse_args(int argc, char** argv) {
  if (argc < 2) {
    throw pmb::ConfigError(
        "usage: pm_bandits <run|sweep|oracle|beta|bench|plot> [--config F] [--seed N] "
        "[--trials N] [--out F] [--csv F] [--kind regret|distort|beta]");
  }
  Args a;
  a.subcommand = argv[1];
  for (int i = 2; i < argc; ++i) {
    std::string flag = argv[i];
    auto need = [&](const char* name) -> std::string {
      if (i + 1 >= argc) throw pmb::ConfigError(std::string(name) + " needs a value");
      return argv[++i];
    };
    if (flag == "--config") {
      a.config_path = need("--config");
    } else if (flag == "--seed") {
      a.seed = static_cast<std::uint64_t>(std::stoull(need("--seed")));
    } else if (flag == "--trials") {
      a.trials = std::stoi(need("--trials"));
    } else if (flag == "--out") {
      a.out = need("--out");
    } else if (flag == "--csv") {
      a.csv = need("--csv");
    } else if (flag == "--kind") {
      a.kind = need("--kind");
    } else {
      throw pmb::ConfigError("unknown flag '" + flag + "'");
    }
  }
  return a;
}

pmb::LoadedExperiment load_with_overrides(const Args& a) {
  if (a.config_path.empty()) throw pmb::ConfigError("--config is required");
  pmb::LoadedExperiment exp = pmb::load_experiment(a.config_path);
  if (a.seed) exp.sweep.seed = *a.seed;
  if (a.trials) {
    if (*a.trials < 1) throw pmb::ConfigError("--trials must be >= 1");
    exp.sweep.trials = *a.trials;
  }
  if (!a.out.empty()) exp.out_base = a.out;
  if (exp.out_base.empty()) {
    throw pmb::ConfigError("missing output path: pass --out or set 'out' in the config");
  }
  return exp;
}

json weights_json(const pmb::MixtureWeights& w) {
  json arr = json::array();
  for (double v : w) arr.push_back(v);
  return arr;
}

json sidecar_json(const pmb::LoadedExperiment& exp, const pmb::SweepResult& result) {
  json j;
  j["config_sha1"] = pmb::git_blob_sha1(exp.raw);
  j["config_echo"] = exp.raw;
  j["seed"] = exp.sweep.seed;
  j["trials"] = exp.sweep.trials;
  j["horizons"] = exp.sweep.horizons;
  j["alpha_star"] = weights_json(result.alpha_star);
  j["v_star"] = result.v_star;
  json pols = json::array();
  for (const auto& pc : result.resolved) {
    json p;
    p["tag"] = pc.tag;
    p["T"] = pc.T;
    p["eps"] = pc.eps;
    p["rho"] = pc.rho;
    p["delta_gap"] = pc.delta_gap;
    p["A"] = pc.A;
    p["eps_target"] = pc.eps_target;
    p["delta"] = pc.delta;
    p["xi"] = pc.xi;
    p["q"] = pc.q;
    p["holder_L"] = pc.L_h;
    pols.push_back(p);
  }
  j["policies"] = pols;
  j["notes"] = result.notes;
  return j;
}

int cmd_run_or_sweep(const Args& a, bool is_sweep) {
  pmb::LoadedExperiment exp = load_with_overrides(a);
  if (is_sweep && exp.sweep.horizons.size() < 2) {
    throw pmb::ConfigError("sweep needs at least two entries in experiment.horizons");
  }
  for (size_t i = 1; i < exp.sweep.horizons.size(); ++i) {
    if (exp.sweep.horizons[i] <= exp.sweep.horizons[i - 1]) {
      throw pmb::ConfigError("experiment.horizons must be strictly increasing");
    }
  }
  pmb::SweepResult result = pmb::sweep(exp.sweep);
  pmb::write_text_file(exp.out_base + ".csv", pmb::sweep_csv(result, exp.sweep.inst.K()));
  pmb::write_text_file(exp.out_base + ".json", sidecar_json(exp, result).dump(2) + "\n");
  std::cout << "wrote " << exp.out_base << ".csv (" << result.rows.size() << " rows) and "
            << exp.out_base << ".json\n";
  for (const auto& n : result.notes) std::cout << "note: " << n << "\n";
  return 0;
}

int cmd_oracle(const Args& a) {
  if (a.config_path.empty()) throw pmb::ConfigError("--config is required");
  std::string raw = pmb::read_text_file(a.config_path);
  pmb::TomlValue root = pmb::parse_toml(raw);
  pmb::BanditInstance inst = pmb::instance_from_toml(root);
  pmb::Distortion d = pmb::distortion_from_toml(root);
  double eps = pmb::toml_num_or(root, "oracle.eps", 0.1);
  pmb::GapReport rep = pmb::gap_report(inst, d, pmb::GridSpec::etc(eps, inst.K()));

  json j;
  j["config_sha1"] = pmb::git_blob_sha1(raw);
  j["grid"] = {{"kind", "etc"}, {"eps", eps}};
  j["grid_points"] = rep.grid_points;
  j["levels"] = rep.levels;
  j["a1"] = weights_json(rep.a1);
  j["v1"] = rep.v1;
  if (rep.levels >= 2) {
    j["a2"] = weights_json(rep.a2);
    j["v2"] = rep.v2;
    j["delta12"] = rep.delta12;
    j["delta02"] = rep.delta02;
  }
  if (rep.delta13.has_value()) {
    j["a3"] = weights_json(rep.a3);
    j["v3"] = rep.v3;
    j["delta13"] = *rep.delta13;
    j["delta23"] = *rep.delta23;
  } else {
    j["delta13"] = nullptr;
    j["delta23"] = nullptr;
  }
  j["delta01"] = rep.delta01;
  j["alpha_star"] = weights_json(rep.alpha_star);
  j["v_star"] = rep.v_star;

  std::string text = j.dump(2) + "\n";
  if (!a.out.empty()) {
    pmb::write_text_file(a.out, text);
    std::cout << "wrote " << a.out << "\n";
  } else {
    std::cout << text;
  }
  return 0;
}

int cmd_beta(const Args& a) {
  if (a.config_path.empty()) throw pmb::ConfigError("--config is required");
  std::string raw = pmb::read_text_file(a.config_path);
  pmb::TomlValue root = pmb::parse_toml(raw);
  pmb::BanditInstance inst = pmb::instance_from_toml(root);
  pmb::Distortion d = pmb::distortion_from_toml(root);
  const pmb::TomlValue* lst = pmb::toml_find(root, "beta.eps_list");
  if (!lst || lst->kind != pmb::TomlValue::Kind::array || lst->arr.size() < 2) {
    throw pmb::ConfigError("missing config key 'beta.eps_list' (decreasing array, >= 2 entries)");
  }
  std::vector<double> eps_list;
  for (const auto& v : lst->arr) eps_list.push_back(v.num);
  std::vector<pmb::BetaPoint> pts = pmb::beta_bar_estimate(inst, d, eps_list);
  std::ostringstream os;
  os << "family,eps,ratio,valid,note\n";
  for (const auto& pt : pts) {
    os << d.family << ',' << pmb::format_double(pt.eps) << ',' << pmb::format_double(pt.ratio)
       << ',' << (pt.valid ? 1 : 0) << ',' << pt.note << '\n';
    if (!pt.valid) std::cerr << "warning: eps=" << pt.eps << ": " << pt.note << "\n";
  }
  if (a.out.empty()) {
    std::cout << os.str();
  } else {
    pmb::write_text_file(a.out, os.str());
    std::cout << "wrote " << a.out << "\n";
  }
  return 0;
}

int cmd_bench(const Args& a) {
  if (a.config_path.empty()) throw pmb::ConfigError("--config is required");
  std::string raw = pmb::read_text_file(a.config_path);
  pmb::TomlValue root = pmb::parse_toml(raw);
  pmb::BanditInstance inst = pmb::instance_from_toml(root);
  pmb::Distortion d = pmb::distortion_from_toml(root);
  const pmb::TomlValue* lst = pmb::toml_find(root, "bench.thresholds");
  if (!lst || lst->kind != pmb::TomlValue::Kind::array || lst->arr.empty()) {
    throw pmb::ConfigError("missing config key 'bench.thresholds' (decreasing array)");
  }
  std::vector<double> thresholds;
  for (const auto& v : lst->arr) thresholds.push_back(v.num);
  for (size_t i = 1; i < thresholds.size(); ++i) {
    if (!(thresholds[i] < thresholds[i - 1])) {
      throw pmb::ConfigError("bench.thresholds must be strictly decreasing");
    }
  }
  int trials = static_cast<int>(pmb::toml_num_or(root, "bench.trials", 10));
  if (a.trials) trials = *a.trials;
  std::uint64_t seed = static_cast<std::uint64_t>(pmb::toml_num_or(root, "seed", 1));
  if (a.seed) seed = *a.seed;

  const pmb::TomlValue* pols = pmb::toml_find(root, "bench.policies");
  std::vector<std::string> tags;
  if (pols && pols->kind == pmb::TomlValue::Kind::array) {
    for (const auto& v : pols->arr) tags.push_back(v.s);
  } else {
    tags = {"cirt", "fixed_anytime"};
  }
  auto [q, Lh] = pmb::holder_params(d, inst.support_bounds());
  std::vector<pmb::PolicyConfig> cfgs;
  for (const auto& tag : tags) {
    pmb::PolicyConfig pc = pmb::policy_from_toml(root, tag);
    pc.q = q;
    pc.L_h = Lh;
    cfgs.push_back(pc);
  }
  std::vector<pmb::BenchRow> rows = pmb::bench_time(inst, d, cfgs, thresholds, trials, seed);
  std::ostringstream os;
  os << "policy,threshold,T,seconds,reachable\n";
  for (const auto& r : rows) {
    os << r.policy << ',' << pmb::format_double(r.threshold) << ',' << r.T_reached << ','
       << pmb::format_double(r.seconds) << ',' << (r.reachable ? 1 : 0) << '\n';
  }
  if (a.out.empty()) {
    std::cout << os.str();
  } else {
    pmb::write_text_file(a.out, os.str());
    std::cout << "wrote " << a.out << "\n";
  }
  return 0;
}

std::vector<std::vector<std::string>> read_csv(const std::string& path) {
  std::string text = pmb::read_text_file(path);
  std::vector<std::vector<std::string>> rows;
  std::istringstream is(text);
  std::string line;
  while (std::getline(is, line)) {
    if (line.empty()) continue;
    std::vector<std::string> cells;
    std::istringstream ls(line);
    std::string cell;
    while (std::getline(ls, cell, ',')) cells.push_back(cell);
    rows.push_back(std::move(cells));
  }
  if (rows.size() < 2) throw pmb::ConfigError("csv '" + path + "' has no data rows");
  return rows;
}

int plot_regret(const Args& a) {
  if (a.csv.empty()) throw pmb::ConfigError("plot regret needs --csv");
  auto rows = read_csv(a.csv);
  const auto& header = rows[0];
  if (header.size() < 5 || header[0] != "policy" || header[1] != "T" || header[3] != "regret") {
    throw pmb::ConfigError("csv header does not match 'policy,T,trial,regret,...'");
  }
  // (policy, T) -> regrets
  std::map<std::string, std::map<double, std::vector<double>>> groups;
  for (size_t i = 1; i < rows.size(); ++i) {
    if (rows[i].size() != header.size()) {
      throw pmb::ConfigError("csv row " + std::to_string(i + 1) + " has wrong column count");
    }
    try {
      groups[rows[i][0]][std::stod(rows[i][1])].push_back(std::stod(rows[i][3]));
    } catch (const std::exception&) {
      throw pmb::ConfigError("csv row " + std::to_string(i + 1) + " is not numeric");
    }
  }
  std::vector<pmb::PlotSeries> series;
  for (const auto& [policy, byT] : groups) {
    pmb::PlotSeries s;
    s.label = policy;
    for (const auto& [T, regs] : byT) {
      double mean = 0.0;
      for (double r : regs) mean += r;
      mean /= static_cast<double>(regs.size());
      double var = 0.0;
      for (double r : regs) var += (r - mean) * (r - mean);
      double se = regs.size() > 1
                      ? std::sqrt(var / (static_cast<double>(regs.size()) - 1.0)) /
                            std::sqrt(static_cast<double>(regs.size()))
                      : 0.0;
      s.x.push_back(T);
      s.y.push_back(mean);
      s.yerr.push_back(se);
    }
    series.push_back(std::move(s));
  }
  pmb::PlotOptions opt;
  opt.title = "Terminal regret vs horizon";
  opt.xlabel = "T";
  opt.ylabel = "mean regret";
  opt.logx = true;
  std::string out = a.out.empty() ? (a.csv + ".svg") : a.out;
  pmb::write_text_file(out, pmb::line_chart_svg(series, opt));
  std::cout << "wrote " << out << "\n";
  return 0;
}

int plot_distort(const Args& a) {
  auto add_curves = [](std::vector<pmb::PlotSeries>& series, double beta_s) {
    pmb::Distortion d = pmb::make_inverted_s(beta_s);
    struct Base {
      const char* name;
      double lo, hi;
      double (*Q)(double);
    };
    static const Base bases[] = {
        {"gaussian", -4.0, 4.0, [](double x) { return pmb::norm_cdf(x); }},
        {"exponential", 0.0, 6.0,
         [](double x) { return x <= 0.0 ? 0.0 : 1.0 - std::exp(-x); }},
        {"lognormal", 1e-4, 8.0,
         [](double x) { return x <= 0.0 ? 0.0 : pmb::norm_cdf(std::log(x)); }},
    };
    for (const auto& b : bases) {
      pmb::PlotSeries s;
      std::ostringstream label;
      label << b.name << ", beta_s=" << beta_s;
      s.label = label.str();
      for (int i = 0; i <= 400; ++i) {
        double x = b.lo + (b.hi - b.lo) * i / 400.0;
        s.x.push_back(x);
        s.y.push_back(d(1.0 - b.Q(x)));
      }
      series.push_back(std::move(s));
    }
  };
  std::vector<pmb::PlotSeries> series;
  add_curves(series, 0.5);
  add_curves(series, 2.0);
  pmb::PlotOptions opt;
  opt.title = "Distorted complement CDFs, inverted-S weighting";
  opt.xlabel = "x";
  opt.ylabel = "h(1 - Q(x))";
  std::string out = a.out.empty() ? "distort.svg" : a.out;
  pmb::write_text_file(out, pmb::line_chart_svg(series, opt));
  std::cout << "wrote " << out << "\n";
  return 0;
}

int plot_beta(const Args& a) {
  if (a.csv.empty()) throw pmb::ConfigError("plot beta needs --csv");
  auto rows = read_csv(a.csv);
  if (rows[0].size() < 4 || rows[0][0] != "family" || rows[0][1] != "eps") {
    throw pmb::ConfigError("csv header does not match 'family,eps,ratio,valid,note'");
  }
  std::map<std::string, pmb::PlotSeries> by_family;
  for (size_t i = 1; i < rows.size(); ++i) {
    if (rows[i][3] != "1") continue;
    auto& s = by_family[rows[i][0]];
    s.label = rows[i][0];
    try {
      s.x.push_back(std::stod(rows[i][1]));
      s.y.push_back(std::stod(rows[i][2]));
    } catch (const std::exception&) {
      throw pmb::ConfigError("csv row " + std::to_string(i + 1) + " is not numeric");
    }
  }
  if (by_family.empty()) throw pmb::ConfigError("no valid ratio rows in csv");
  std::vector<pmb::PlotSeries> series;
  pmb::PlotOptions opt;
  opt.title = "Gap-scaling ratio log delta13 / log eps";
  opt.xlabel = "eps";
  opt.ylabel = "ratio";
  opt.logx = true;
  // Limiting slope of log delta13 / log eps as eps -> 0; the ratio approaches
  // it from above with a 1/log(1/eps) tail, so the sanity window is loose.
  static const std::map<std::string, double> limit_slope = {
      {"mean", 1.0},
      {"mean_median", 1.0},
      {"gini", 2.0},
  };
  for (auto& [family, s] : by_family) {
    double terminal = s.y.back();
    std::ostringstream note;
    note << family << ": terminal ratio = " << pmb::format_double(terminal);
    auto it = limit_slope.find(family);
    if (it != limit_slope.end()) {
      bool inside = terminal >= it->second - 0.15 && terminal <= it->second + 1.5;
      note << ", limit " << it->second << (inside ? " (ok)" : " (OUTSIDE window)");
    }
    opt.footnotes.push_back(note.str());
    series.push_back(std::move(s));
  }
  std::string out = a.out.empty() ? (a.csv + ".svg") : a.out;
  pmb::write_text_file(out, pmb::line_chart_svg(series, opt));
  std::cout << "wrote " << out << "\n";
  return 0;
}

int dispatch(const Args& a) {
  if (a.subcommand == "run") return cmd_run_or_sweep(a, false);
  if (a.subcommand == "sweep") return cmd_run_or_sweep(a, true);
  if (a.subcommand == "oracle") return cmd_oracle(a);
  if (a.subcommand == "beta") return cmd_beta(a);
  if (a.subcommand == "bench") return cmd_bench(a);
  if (a.subcommand == "plot") {
    if (a.kind == "regret") return plot_regret(a);
    if (a.kind == "distort") return plot_distort(a);
    if (a.kind == "beta") return plot_beta(a);
    throw pmb::ConfigError("--kind must be regret, distort, or beta");
  }
  throw pmb::ConfigError("unknown subcommand '" + a.subcommand + "'");
}

}  // namespace

int main(int argc, char** argv) {
  try {
    return dispatch(parse_args(argc, argv));
  } catch (const pmb::ConfigError& e) {
    std::cerr << "config error: " << e.what() << "\n";
    return 2;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  }
}
