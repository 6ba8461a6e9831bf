#pragma once

#include <cmath>
#include <functional>
#include <optional>
#include <string>
#include <utility>

#include "errors.hpp"

namespace pmb {

enum class Shape { convex, concave, strictly_concave, neither };

// Distortion function h : [0,1] -> R with h(0) = 0. holder_q / holder_L are
// the Holder parameters of the utility functional induced by h; for families
// whose constant depends on the reward support (pht, wang_rtd) they are
// resolved by holder_params() from explicit support bounds.
struct Distortion {
  std::string family;
  double param = 0.0;
  Shape shape = Shape::neither;
  bool monotone = false;  // nondecreasing on [0,1]
  std::function<double(double)> h;
  double holder_q = -1.0;
  double holder_L = -1.0;
  bool needs_support = false;

  double operator()(double u) const {
    if (!(u >= -1e-12 && u <= 1.0 + 1e-12)) {
      throw DomainError("distortion argument outside [0,1]: " + std::to_string(u));
    }
    if (u < 0.0) u = 0.0;
    if (u > 1.0) u = 1.0;
    return h(u);
  }
};

inline double eval_h(const Distortion& d, double u) { return d(u); }

inline Distortion make_mean() {
  Distortion d;
  d.family = "mean";
  d.shape = Shape::convex;
  d.monotone = true;
  d.h = [](double u) { return u; };
  d.holder_q = 1.0;
  d.holder_L = 1.0;
  return d;
}

inline Distortion make_dual_power(double s) {
  if (s < 2.0) throw ConfigError("dual_power requires s >= 2");
  Distortion d;
  d.family = "dual_power";
  d.param = s;
  d.shape = Shape::strictly_concave;
  d.monotone = true;
  d.h = [s](double u) { return 1.0 - std::pow(1.0 - u, s); };
  d.holder_q = 1.0;
  d.holder_L = s;
  return d;
}

inline Distortion make_quadratic(double s) {
  if (s < 0.0 || s > 1.0) throw ConfigError("quadratic requires s in [0,1]");
  Distortion d;
  d.family = "quadratic";
  d.param = s;
  d.shape = s > 0.0 ? Shape::strictly_concave : Shape::convex;
  d.monotone = true;
  d.h = [s](double u) { return (1.0 + s) * u - s * u * u; };
  d.holder_q = 1.0;
  d.holder_L = 1.0 + s;
  return d;
}

inline Distortion make_cvar(double c) {
  if (c <= 0.0 || c >= 1.0) throw ConfigError("cvar requires c in (0,1)");
  Distortion d;
  d.family = "cvar";
  d.param = c;
  d.shape = Shape::concave;
  d.monotone = true;
  d.h = [c](double u) { return std::min(u / (1.0 - c), 1.0); };
  d.holder_q = 1.0;
  d.holder_L = 1.0 / (1.0 - c);
  return d;
}

inline Distortion make_pht(double s) {
  if (s <= 0.0 || s >= 1.0) throw ConfigError("pht requires s in (0,1)");
  Distortion d;
  d.family = "pht";
  d.param = s;
  d.shape = Shape::strictly_concave;
  d.monotone = true;
  d.h = [s](double u) { return std::pow(u, s); };
  d.holder_q = s;
  d.needs_support = true;
  return d;
}

inline Distortion make_mean_median() {
  Distortion d;
  d.family = "mean_median";
  d.shape = Shape::concave;
  d.monotone = false;
  d.h = [](double u) { return std::min(u, 1.0 - u); };
  d.holder_q = 1.0;
  d.holder_L = 1.0;
  return d;
}

inline Distortion make_inter_es(double c = 0.5) {
  if (c != 0.5) throw ConfigError("inter_es is only defined here for c = 1/2");
  Distortion d;
  d.family = "inter_es";
  d.param = c;
  d.shape = Shape::concave;
  d.monotone = false;
  d.h = [](double u) { return 2.0 * std::min(u, 1.0 - u); };
  d.holder_q = 1.0;
  d.holder_L = 2.0;
  return d;
}

inline Distortion make_wang_rtd() {
  Distortion d;
  d.family = "wang_rtd";
  d.shape = Shape::strictly_concave;
  d.monotone = false;
  d.h = [](double u) { return std::sqrt(u) - u; };
  d.holder_q = 0.5;
  d.needs_support = true;
  return d;
}

inline Distortion make_gini() {
  Distortion d;
  d.family = "gini";
  d.shape = Shape::strictly_concave;
  d.monotone = false;
  d.h = [](double u) { return u * (1.0 - u); };
  d.holder_q = 1.0;
  d.holder_L = 1.0;
  return d;
}

inline Distortion make_inverted_s(double beta) {
  if (beta <= 0.0) throw ConfigError("inverted_s requires beta > 0");
  Distortion d;
  d.family = "inverted_s";
  d.param = beta;
  d.shape = Shape::neither;
  d.monotone = true;
  d.h = [beta](double u) {
    if (u <= 0.0) return 0.0;  // limit of exp(-(-ln u)^beta) as u -> 0+
    if (u >= 1.0) return 1.0;
    return std::exp(-std::pow(-std::log(u), beta));
  };
  return d;
}

inline Distortion make_custom(std::function<double(double)> h, double holder_q,
                              double holder_L, Shape shape, bool monotone) {
  if (!(holder_q > 0.0 && holder_q <= 1.0)) {
    throw ConfigError("custom distortion requires holder_q in (0,1]");
  }
  if (!(holder_L > 0.0)) throw ConfigError("custom distortion requires holder_L > 0");
  Distortion d;
  d.family = "custom";
  d.shape = shape;
  d.monotone = monotone;
  d.h = std::move(h);
  d.holder_q = holder_q;
  d.holder_L = holder_L;
  return d;
}

// Holder pair (q, L) of the induced utility functional. Families whose L
// scales with the reward range need explicit support bounds [V, Z].
inline std::pair<double, double> holder_params(
    const Distortion& d, std::optional<std::pair<double, double>> support = std::nullopt) {
  if (d.needs_support) {
    if (!support) {
      throw ConfigError("holder_params: family '" + d.family + "' needs support bounds");
    }
    double len = support->second - support->first;
    if (!(len > 0.0)) throw ConfigError("holder_params: empty support interval");
    if (d.family == "pht") return {d.param, std::pow(len, 1.0 - d.param)};
    if (d.family == "wang_rtd") return {0.5, std::sqrt(len)};
  }
  if (d.holder_q <= 0.0 || d.holder_L <= 0.0) {
    throw ConfigError("holder_params: no tabulated Holder constants for '" + d.family + "'");
  }
  return {d.holder_q, d.holder_L};
}

inline Distortion make_distortion(const std::string& family, double param = 0.0) {
  if (family == "mean") return make_mean();
  if (family == "dual_power") return make_dual_power(param);
  if (family == "quadratic") return make_quadratic(param);
  if (family == "cvar") return make_cvar(param);
  if (family == "pht") return make_pht(param);
  if (family == "mean_median") return make_mean_median();
  if (family == "inter_es") return make_inter_es(param == 0.0 ? 0.5 : param);
  if (family == "wang_rtd") return make_wang_rtd();
  if (family == "gini") return make_gini();
  if (family == "inverted_s") return make_inverted_s(param);
  throw ConfigError("unknown distortion family '" + family + "'");
}

}  // namespace pmb
