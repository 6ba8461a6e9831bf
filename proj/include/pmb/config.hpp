#pragma once

#include <cctype>
#include <cmath>
#include <map>
#include <string>
#include <vector>

#include "arms.hpp"
#include "distortion.hpp"
#include "errors.hpp"
#include "harness.hpp"
#include "policies.hpp"

namespace pmb {

// Small TOML subset: [section] headers (dotted), key = value, strings,
// numbers, booleans, arrays, inline tables, # comments. Enough for the
// experiment files under configs/.
struct TomlValue {
  enum class Kind { str, num, boolean, array, table };
  Kind kind = Kind::table;
  std::string s;
  double num = 0.0;
  bool b = false;
  std::vector<TomlValue> arr;
  std::map<std::string, TomlValue> tab;
};

namespace toml {

struct Parser {
  const std::string& text;
  size_t pos = 0;

  explicit Parser(const std::string& t) : text(t) {}

  [[noreturn]] void fail(const std::string& msg) const {
    size_t line = 1;
    for (size_t i = 0; i < pos && i < text.size(); ++i) {
      if (text[i] == '\n') ++line;
    }
    throw ConfigError("config parse error at line " + std::to_string(line) + ": " + msg);
  }

  bool eof() const { return pos >= text.size(); }
  char peek() const { return text[pos]; }

  void skip_ws(bool newlines) {
    while (!eof()) {
      char ch = text[pos];
      if (ch == '#') {
        while (!eof() && text[pos] != '\n') ++pos;
      } else if (ch == ' ' || ch == '\t' || ch == '\r' || (newlines && ch == '\n')) {
        ++pos;
      } else {
        break;
      }
    }
  }

  std::string parse_key() {
    size_t start = pos;
    while (!eof() && (std::isalnum(static_cast<unsigned char>(text[pos])) || text[pos] == '_' ||
                      text[pos] == '-')) {
      ++pos;
    }
    if (pos == start) fail("expected a key");
    return text.substr(start, pos - start);
  }

  TomlValue parse_value() {
    skip_ws(false);
    if (eof()) fail("expected a value");
    char ch = peek();
    TomlValue v;
    if (ch == '"') {
      ++pos;
      v.kind = TomlValue::Kind::str;
      while (!eof() && peek() != '"') {
        v.s.push_back(text[pos]);
        ++pos;
      }
      if (eof()) fail("unterminated string");
      ++pos;
      return v;
    }
    if (ch == '[') {
      ++pos;
      v.kind = TomlValue::Kind::array;
      skip_ws(true);
      while (!eof() && peek() != ']') {
        v.arr.push_back(parse_value());
        skip_ws(true);
        if (!eof() && peek() == ',') {
          ++pos;
          skip_ws(true);
        }
      }
      if (eof()) fail("unterminated array");
      ++pos;
      return v;
    }
    if (ch == '{') {
      ++pos;
      v.kind = TomlValue::Kind::table;
      skip_ws(false);
      while (!eof() && peek() != '}') {
        std::string key = parse_key();
        skip_ws(false);
        if (eof() || peek() != '=') fail("expected '=' in inline table");
        ++pos;
        v.tab[key] = parse_value();
        skip_ws(false);
        if (!eof() && peek() == ',') {
          ++pos;
          skip_ws(false);
        }
      }
      if (eof()) fail("unterminated inline table");
      ++pos;
      return v;
    }
    if (text.compare(pos, 4, "true") == 0) {
      pos += 4;
      v.kind = TomlValue::Kind::boolean;
      v.b = true;
      return v;
    }
    if (text.compare(pos, 5, "false") == 0) {
      pos += 5;
      v.kind = TomlValue::Kind::boolean;
      v.b = false;
      return v;
    }
    size_t start = pos;
    while (!eof() && (std::isdigit(static_cast<unsigned char>(text[pos])) || text[pos] == '+' ||
                      text[pos] == '-' || text[pos] == '.' || text[pos] == 'e' ||
                      text[pos] == 'E' || text[pos] == '_')) {
      ++pos;
    }
    if (pos == start) fail("unrecognized value");
    std::string tok = text.substr(start, pos - start);
    std::string cleaned;
    for (char t : tok) {
      if (t != '_') cleaned.push_back(t);
    }
    try {
      size_t used = 0;
      v.num = std::stod(cleaned, &used);
      if (used != cleaned.size()) fail("malformed number '" + tok + "'");
    } catch (const std::exception&) {
      fail("malformed number '" + tok + "'");
    }
    v.kind = TomlValue::Kind::num;
    return v;
  }
};

}  // namespace toml

inline TomlValue parse_toml(const std::string& text) {
  toml::Parser p(text);
  TomlValue root;
  TomlValue* current = &root;
  for (;;) {
    p.skip_ws(true);
    if (p.eof()) break;
    if (p.peek() == '[') {
      ++p.pos;
      current = &root;
      for (;;) {
        std::string part = p.parse_key();
        current = &current->tab[part];
        current->kind = TomlValue::Kind::table;
        if (!p.eof() && p.peek() == '.') {
          ++p.pos;
          continue;
        }
        break;
      }
      if (p.eof() || p.peek() != ']') p.fail("unterminated section header");
      ++p.pos;
      continue;
    }
    std::string key = p.parse_key();
    p.skip_ws(false);
    if (p.eof() || p.peek() != '=') p.fail("expected '=' after key '" + key + "'");
    ++p.pos;
    current->tab[key] = p.parse_value();
  }
  return root;
}

inline const TomlValue* toml_find(const TomlValue& root, const std::string& dotted) {
  const TomlValue* cur = &root;
  size_t start = 0;
  while (start <= dotted.size()) {
    size_t dot = dotted.find('.', start);
    std::string part = dotted.substr(start, dot == std::string::npos ? dot : dot - start);
    if (cur->kind != TomlValue::Kind::table) return nullptr;
    auto it = cur->tab.find(part);
    if (it == cur->tab.end()) return nullptr;
    cur = &it->second;
    if (dot == std::string::npos) break;
    start = dot + 1;
  }
  return cur;
}

inline double toml_num(const TomlValue& root, const std::string& key) {
  const TomlValue* v = toml_find(root, key);
  if (!v || v->kind != TomlValue::Kind::num) {
    throw ConfigError("missing or non-numeric config key '" + key + "'");
  }
  return v->num;
}

inline double toml_num_or(const TomlValue& root, const std::string& key, double fallback) {
  const TomlValue* v = toml_find(root, key);
  if (!v) return fallback;
  if (v->kind != TomlValue::Kind::num) throw ConfigError("config key '" + key + "' must be a number");
  return v->num;
}

inline std::string toml_str(const TomlValue& root, const std::string& key) {
  const TomlValue* v = toml_find(root, key);
  if (!v || v->kind != TomlValue::Kind::str) {
    throw ConfigError("missing or non-string config key '" + key + "'");
  }
  return v->s;
}

inline std::string toml_str_or(const TomlValue& root, const std::string& key,
                               const std::string& fallback) {
  const TomlValue* v = toml_find(root, key);
  if (!v) return fallback;
  if (v->kind != TomlValue::Kind::str) throw ConfigError("config key '" + key + "' must be a string");
  return v->s;
}

inline ArmModel arm_from_toml(const TomlValue& t, int index) {
  std::string where = "instance.arms[" + std::to_string(index) + "]";
  if (t.kind != TomlValue::Kind::table) throw ConfigError(where + " must be an inline table");
  std::string kind = toml_str(t, "kind");
  if (kind == "bernoulli") return ArmModel::bernoulli(toml_num(t, "p"));
  if (kind == "gaussian") return ArmModel::gaussian(toml_num(t, "mu"), toml_num(t, "sigma"));
  if (kind == "shifted_exponential") {
    return ArmModel::shifted_exponential(toml_num(t, "c"), toml_num(t, "lambda"));
  }
  if (kind == "finite") {
    const TomlValue* xs = toml_find(t, "supports");
    const TomlValue* ps = toml_find(t, "probs");
    if (!xs || !ps || xs->kind != TomlValue::Kind::array || ps->kind != TomlValue::Kind::array) {
      throw ConfigError(where + ": finite arm needs 'supports' and 'probs' arrays");
    }
    std::vector<double> sup, prob;
    for (const auto& v : xs->arr) sup.push_back(v.num);
    for (const auto& v : ps->arr) prob.push_back(v.num);
    return ArmModel::finite(std::move(sup), std::move(prob));
  }
  throw ConfigError(where + ": unknown arm kind '" + kind + "'");
}

inline BanditInstance instance_from_toml(const TomlValue& root) {
  const TomlValue* arms = toml_find(root, "instance.arms");
  if (!arms || arms->kind != TomlValue::Kind::array || arms->arr.empty()) {
    throw ConfigError("missing config key 'instance.arms' (array of arm tables)");
  }
  BanditInstance inst;
  for (size_t i = 0; i < arms->arr.size(); ++i) {
    inst.arms.push_back(arm_from_toml(arms->arr[i], static_cast<int>(i)));
  }
  if (inst.K() < 2) throw ConfigError("instance.arms must list at least two arms");
  return inst;
}

inline Distortion distortion_from_toml(const TomlValue& root) {
  std::string family = toml_str(root, "distortion.family");
  double param = 0.0;
  for (const char* name : {"s", "c", "beta", "param"}) {
    const TomlValue* v = toml_find(root, std::string("distortion.") + name);
    if (v) {
      if (v->kind != TomlValue::Kind::num) {
        throw ConfigError(std::string("distortion.") + name + " must be a number");
      }
      param = v->num;
    }
  }
  return make_distortion(family, param);
}

inline PolicyConfig policy_from_toml(const TomlValue& root, const std::string& tag) {
  PolicyConfig pc;
  pc.tag = tag;
  std::string base = "policy." + tag + ".";
  pc.eps = toml_num_or(root, base + "eps", 0.0);
  pc.rho = toml_num_or(root, base + "rho", 0.5);
  pc.delta_gap = toml_num_or(root, base + "delta_gap", 0.0);
  std::string variant = toml_str_or(root, base + "delta_variant", "delta12");
  if (variant == "delta13") {
    pc.variant = GapVariant::delta13;
  } else if (variant == "delta12") {
    pc.variant = GapVariant::delta12;
  } else {
    throw ConfigError(base + "delta_variant must be 'delta12' or 'delta13'");
  }
  pc.A = static_cast<int>(toml_num_or(root, base + "A", 4));
  pc.eps_target = toml_num_or(root, base + "eps_target", 0.0);
  pc.delta = toml_num_or(root, base + "delta", 0.05);
  pc.xi = toml_num_or(root, base + "xi", 0.5);
  if ((tag == "cirt" || tag == "fixed_anytime") && pc.eps_target <= 0.0) {
    throw ConfigError("policy." + tag + ".eps_target is required");
  }
  return pc;
}

struct LoadedExperiment {
  SweepConfig sweep;
  std::string raw;
  std::string out_base;
};

inline LoadedExperiment load_experiment_text(const std::string& text) {
  TomlValue root = parse_toml(text);
  LoadedExperiment exp;
  exp.raw = text;
  exp.sweep.inst = instance_from_toml(root);
  exp.sweep.d = distortion_from_toml(root);
  exp.sweep.seed = static_cast<std::uint64_t>(toml_num_or(root, "seed", 1));
  exp.sweep.trials = static_cast<int>(toml_num_or(root, "trials", 100));
  exp.sweep.beta = toml_num_or(root, "experiment.beta", 1.0);
  exp.out_base = toml_str_or(root, "out", "");
  const TomlValue* hs = toml_find(root, "experiment.horizons");
  if (!hs || hs->kind != TomlValue::Kind::array || hs->arr.empty()) {
    throw ConfigError("missing config key 'experiment.horizons' (array of integers)");
  }
  for (const auto& v : hs->arr) {
    if (v.kind != TomlValue::Kind::num || v.num < 1) {
      throw ConfigError("experiment.horizons entries must be positive integers");
    }
    exp.sweep.horizons.push_back(static_cast<long long>(v.num));
  }
  const TomlValue* pols = toml_find(root, "experiment.policies");
  if (!pols || pols->kind != TomlValue::Kind::array || pols->arr.empty()) {
    throw ConfigError("missing config key 'experiment.policies' (array of policy tags)");
  }
  for (const auto& v : pols->arr) {
    if (v.kind != TomlValue::Kind::str) {
      throw ConfigError("experiment.policies entries must be strings");
    }
    exp.sweep.policies.push_back(policy_from_toml(root, v.s));
  }
  return exp;
}

inline LoadedExperiment load_experiment(const std::string& path) {
  LoadedExperiment exp = load_experiment_text(read_text_file(path));
  return exp;
}

}  // namespace pmb
