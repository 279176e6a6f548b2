// Copyright 2026 The qil Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//      http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#include "qil/io.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <iostream>
#include <numbers>
#include <random>
#include <sstream>

#include "json.hpp"
#include "qil/budget.hpp"
#include "qil/interferometer.hpp"
#include "qil/parallel.hpp"
#include "qil/protocols.hpp"

namespace qil {

using json = nlohmann::json;

const std::vector<std::string>& RunConfig::known_keys() {
  static const std::vector<std::string> keys = {
      "scheme",        "n_photons",      "cavity_passes", "waist_ratio",
      "detuning_ratio", "theta",         "n_theta",       "grid",
      "quantities",    "seed",           "mode",          "out",
      "format",        "fidelity_target", "epsilon_target", "trials",
      "qubits",        "chi_x",          "chi_y",         "source",
      "c00",           "c11",            "injected_error"};
  return keys;
}

namespace {

std::string trim(const std::string& s) {
  auto b = s.find_first_not_of(" \t\r");
  if (b == std::string::npos) return "";
  auto e = s.find_last_not_of(" \t\r");
  return s.substr(b, e - b + 1);
}

}  // namespace

RunConfig RunConfig::from_text(const std::string& text,
                               const std::string& source) {
  RunConfig cfg;
  std::istringstream in(text);
  std::string line;
  int number = 0;
  while (std::getline(in, line)) {
    ++number;
    std::string where = source + ":" + std::to_string(number);
    auto hash = line.find('#');
    if (hash != std::string::npos) line.erase(hash);
    line = trim(line);
    if (line.empty()) continue;
    auto eq = line.find('=');
    if (eq == std::string::npos) {
      throw ConfigError(where + ": expected key = value");
    }
    std::string key = trim(line.substr(0, eq));
    std::string value = trim(line.substr(eq + 1));
    if (key.empty()) throw ConfigError(where + ": missing key");
    if (value.empty()) throw ConfigError(where + ": missing value for '" + key + "'");
    if (cfg.has(key)) {
      throw ConfigError(where + ": duplicate key '" + key + "' (first set at " +
                        cfg.origin(key) + ")");
    }
    cfg.set(key, value, where);
  }
  return cfg;
}

RunConfig RunConfig::from_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError("cannot read config file '" + path + "'");
  std::stringstream buf;
  buf << in.rdbuf();
  return from_text(buf.str(), path);
}

void RunConfig::set(const std::string& key, const std::string& value,
                    const std::string& origin) {
  const auto& keys = known_keys();
  if (std::find(keys.begin(), keys.end(), key) == keys.end()) {
    throw ConfigError(origin + ": unknown key '" + key + "'");
  }
  entries_[key] = {value, origin};
}

void RunConfig::merge(const RunConfig& other) {
  for (const auto& [k, e] : other.entries_) entries_[k] = e;
}

bool RunConfig::has(const std::string& key) const { return entries_.count(key) > 0; }

std::string RunConfig::origin(const std::string& key) const {
  auto it = entries_.find(key);
  return it == entries_.end() ? "<default>" : it->second.origin;
}

std::string RunConfig::get_string(const std::string& key) const {
  auto it = entries_.find(key);
  if (it == entries_.end()) throw ConfigError("missing required key '" + key + "'");
  return it->second.value;
}

std::string RunConfig::get_string(const std::string& key,
                                  const std::string& fallback) const {
  return has(key) ? get_string(key) : fallback;
}

std::optional<double> RunConfig::find_double(const std::string& key) const {
  if (!has(key)) return std::nullopt;
  return get_double(key);
}

double RunConfig::get_double(const std::string& key) const {
  std::string v = get_string(key);
  try {
    std::size_t used = 0;
    double d = std::stod(v, &used);
    if (used != v.size() || !std::isfinite(d)) throw std::invalid_argument(v);
    return d;
  } catch (const std::exception&) {
    throw ConfigError(origin(key) + ": '" + key + "' expects a number, got '" + v + "'");
  }
}

std::optional<long long> RunConfig::find_integer(const std::string& key) const {
  if (!has(key)) return std::nullopt;
  return get_integer(key);
}

long long RunConfig::get_integer(const std::string& key) const {
  std::string v = get_string(key);
  try {
    std::size_t used = 0;
    long long n = std::stoll(v, &used);
    if (used != v.size()) throw std::invalid_argument(v);
    return n;
  } catch (const std::exception&) {
    // accept integral reals such as 1e3
    double d = get_double(key);
    if (d != std::floor(d) || std::abs(d) > 9e15) {
      throw ConfigError(origin(key) + ": '" + key + "' expects an integer, got '" + v + "'");
    }
    return static_cast<long long>(d);
  }
}

void RunConfig::validate() const {
  std::vector<std::string> theta_keys;
  for (const char* key : {"theta", "n_theta", "detuning_ratio"}) {
    if (has(key)) theta_keys.push_back(std::string(key) + " (" + origin(key) + ")");
  }
  if (theta_keys.size() > 1) {
    std::string list;
    for (const auto& k : theta_keys) list += (list.empty() ? "" : ", ") + k;
    throw ConfigError("theta, n_theta and detuning_ratio are mutually exclusive; got " + list);
  }
  if (has("scheme")) {
    std::string s = get_string("scheme");
    if (s != "coherent" && s != "tf" && s != "noon" && s != "tf_one_loss") {
      throw ConfigError(origin("scheme") + ": unknown scheme '" + s + "'");
    }
  }
  if (has("format")) {
    std::string f = get_string("format");
    if (f != "csv" && f != "json") {
      throw ConfigError(origin("format") + ": format must be csv or json");
    }
  }
  if (has("mode")) {
    std::string m = get_string("mode");
    if (m != "exhaustive" && m != "sampled") {
      throw ConfigError(origin("mode") + ": mode must be exhaustive or sampled");
    }
    if (m == "sampled" && !has("seed")) {
      throw ConfigError(origin("mode") + ": sampled mode requires a seed");
    }
  }
  if (has("seed")) {
    long long s = get_integer("seed");
    if (s < 0) throw ConfigError(origin("seed") + ": seed must be non-negative");
  }
  if (has("n_photons")) {
    long long n = get_integer("n_photons");
    if (n < 1 || n > 100'000'000) {
      throw ConfigError(origin("n_photons") + ": n_photons must lie in [1, 1e8]");
    }
  }
  if (has("cavity_passes") && get_double("cavity_passes") < 1.0) {
    throw ConfigError(origin("cavity_passes") + ": cavity_passes must be at least 1");
  }
  if (has("waist_ratio") && !(get_double("waist_ratio") > 0.0)) {
    throw ConfigError(origin("waist_ratio") + ": waist_ratio must be positive");
  }
  if (has("detuning_ratio")) {
    double d = get_double("detuning_ratio");
    if (!(d > 0.0 && d < 1.0)) {
      throw ConfigError(origin("detuning_ratio") + ": detuning_ratio must lie in (0, 1)");
    }
  }
  if (has("theta") && !(get_double("theta") >= 0.0)) {
    throw ConfigError(origin("theta") + ": theta must be non-negative");
  }
  for (const char* key : {"fidelity_target", "epsilon_target"}) {
    if (has(key)) {
      double v = get_double(key);
      if (!(v > 0.0 && v < 1.0)) {
        throw ConfigError(origin(key) + ": " + key + " must lie in (0, 1)");
      }
    }
  }
  if (has("trials") && get_integer("trials") < 1) {
    throw ConfigError(origin("trials") + ": trials must be at least 1");
  }
}

std::vector<double> parse_grid(const std::string& text) {
  std::vector<double> grid;
  auto number = [&](const std::string& s) {
    try {
      std::size_t used = 0;
      std::string t = trim(s);
      double d = std::stod(t, &used);
      if (used != t.size() || !std::isfinite(d)) throw std::invalid_argument(s);
      return d;
    } catch (const std::exception&) {
      throw ConfigError("grid: '" + s + "' is not a number");
    }
  };
  if (text.find(':') != std::string::npos) {
    std::vector<std::string> parts;
    std::stringstream ss(text);
    std::string part;
    while (std::getline(ss, part, ':')) parts.push_back(part);
    if (parts.size() != 3) throw ConfigError("grid: expected start:stop:count");
    double a = number(parts[0]);
    double b = number(parts[1]);
    double c = number(parts[2]);
    if (c != std::floor(c) || c < 2 || c > 1e6) {
      throw ConfigError("grid: count must be an integer >= 2");
    }
    int count = static_cast<int>(c);
    for (int i = 0; i < count; ++i) grid.push_back(a + (b - a) * i / (count - 1));
  } else {
    std::stringstream ss(text);
    std::string part;
    while (std::getline(ss, part, ',')) grid.push_back(number(part));
  }
  return grid;
}

void validate_sweep(const SweepSpec& spec) {
  if (spec.n < 1) throw ConfigError("sweep: N must be at least 1");
  if (spec.grid.size() < 2) throw ConfigError("sweep: grid needs at least 2 points");
  for (std::size_t i = 0; i < spec.grid.size(); ++i) {
    if (spec.grid[i] < 0.0) throw ConfigError("sweep: grid values must be non-negative");
    if (i > 0 && !(spec.grid[i] > spec.grid[i - 1])) {
      throw ConfigError("sweep: grid must be strictly increasing");
    }
  }
  static const std::vector<std::string> allowed = {"epsilon", "eta", "kappa", "eta_loss"};
  if (spec.quantities.empty()) throw ConfigError("sweep: no quantities requested");
  for (const auto& q : spec.quantities) {
    if (std::find(allowed.begin(), allowed.end(), q) == allowed.end()) {
      throw ConfigError("sweep: unknown quantity '" + q + "'");
    }
  }
}

std::string format_double(double v) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", v == 0.0 ? 0.0 : v);
  return buf;
}

namespace {

// Like json::dump but every floating-point value is printed with %.17g.
void dump(const json& j, std::string& out, int indent, int depth) {
  auto pad = [&](int d) { out.append(static_cast<std::size_t>(indent * d), ' '); };
  switch (j.type()) {
    case json::value_t::object: {
      if (j.empty()) {
        out += "{}";
        return;
      }
      out += "{\n";
      std::size_t i = 0;
      for (auto it = j.begin(); it != j.end(); ++it, ++i) {
        pad(depth + 1);
        out += json(it.key()).dump();
        out += ": ";
        dump(it.value(), out, indent, depth + 1);
        if (i + 1 < j.size()) out += ",";
        out += "\n";
      }
      pad(depth);
      out += "}";
      return;
    }
    case json::value_t::array: {
      if (j.empty()) {
        out += "[]";
        return;
      }
      bool flat = std::all_of(j.begin(), j.end(), [](const json& e) { return e.is_primitive(); });
      if (flat) {
        out += "[";
        for (std::size_t i = 0; i < j.size(); ++i) {
          if (i > 0) out += ", ";
          dump(j[i], out, indent, depth + 1);
        }
        out += "]";
        return;
      }
      out += "[\n";
      for (std::size_t i = 0; i < j.size(); ++i) {
        pad(depth + 1);
        dump(j[i], out, indent, depth + 1);
        if (i + 1 < j.size()) out += ",";
        out += "\n";
      }
      pad(depth);
      out += "]";
      return;
    }
    case json::value_t::number_float: {
      double v = j.get<double>();
      out += std::isfinite(v) ? format_double(v) : "null";
      return;
    }
    default:
      out += j.dump();
  }
}

std::string to_text(const json& j) {
  std::string out;
  dump(j, out, 2, 0);
  out += "\n";
  return out;
}

std::vector<std::string> split_list(const std::string& text) {
  std::vector<std::string> out;
  std::stringstream ss(text);
  std::string part;
  while (std::getline(ss, part, ',')) {
    part = trim(part);
    if (!part.empty()) out.push_back(part);
  }
  return out;
}

struct SweepRow {
  double epsilon = 0.0;
  double eta = 0.0;
  double kappa = 0.0;
  double eta_loss = 0.0;
};

std::vector<SweepRow> evaluate_sweep(const SweepSpec& spec) {
  validate_sweep(spec);
  auto wants = [&](const char* q) {
    return std::find(spec.quantities.begin(), spec.quantities.end(), q) !=
           spec.quantities.end();
  };
  bool need_tf = wants("eta") || wants("eta_loss");
  std::vector<SweepRow> rows(spec.grid.size());
  parallel_for(spec.grid.size(), [&](std::size_t i) {
    double theta = spec.grid[i] / spec.n;
    SweepRow& r = rows[i];
    r.epsilon = epsilon(spec.n, theta);
    r.kappa = kappa(spec.n, theta);
    if (need_tf) {
      ErrorRates e = error_rates(spec.n, theta);
      r.eta = e.eta;
      r.eta_loss = e.eta_loss;
    }
  });
  return rows;
}

double pick(const SweepRow& r, const std::string& q) {
  if (q == "epsilon") return r.epsilon;
  if (q == "eta") return r.eta;
  if (q == "kappa") return r.kappa;
  return r.eta_loss;
}

std::vector<std::string> ordered_quantities(const SweepSpec& spec) {
  std::vector<std::string> out;
  for (const char* q : {"epsilon", "eta", "kappa", "eta_loss"}) {
    if (std::find(spec.quantities.begin(), spec.quantities.end(), q) !=
        spec.quantities.end()) {
      out.push_back(q);
    }
  }
  return out;
}

}  // namespace

std::string sweep_csv(const SweepSpec& spec) {
  auto rows = evaluate_sweep(spec);
  auto cols = ordered_quantities(spec);
  std::string out = "N,theta,N_theta";
  for (const auto& c : cols) out += "," + c;
  out += "\n";
  for (std::size_t i = 0; i < rows.size(); ++i) {
    out += std::to_string(spec.n) + "," + format_double(spec.grid[i] / spec.n) + "," +
           format_double(spec.grid[i]);
    for (const auto& c : cols) out += "," + format_double(pick(rows[i], c));
    out += "\n";
  }
  return out;
}

std::string sweep_json(const SweepSpec& spec) {
  auto rows = evaluate_sweep(spec);
  auto cols = ordered_quantities(spec);
  json j;
  j["N"] = spec.n;
  json columns = json::array({"N", "theta", "N_theta"});
  for (const auto& c : cols) columns.push_back(c);
  j["columns"] = columns;
  json data = json::array();
  for (std::size_t i = 0; i < rows.size(); ++i) {
    json row = json::array({spec.n, spec.grid[i] / spec.n, spec.grid[i]});
    for (const auto& c : cols) row.push_back(pick(rows[i], c));
    data.push_back(row);
  }
  j["rows"] = data;
  return to_text(j);
}

namespace {

int photons(const RunConfig& c, int fallback) {
  return static_cast<int>(c.find_integer("n_photons").value_or(fallback));
}

Scheme scheme_of(const RunConfig& c) {
  std::string s = c.get_string("scheme", "noon");
  if (s == "tf_one_loss") {
    throw ConfigError(c.origin("scheme") + ": tf_one_loss is only a budget scheme");
  }
  return parse_scheme(s);
}

double theta_of(const RunConfig& c, Scheme scheme, int n) {
  if (c.has("theta")) return c.get_double("theta");
  if (c.has("n_theta")) return c.get_double("n_theta") / n;
  if (c.has("detuning_ratio")) {
    return theta_from_physics(c.find_double("waist_ratio").value_or(3.0),
                              c.get_double("detuning_ratio"));
  }
  return default_theta(scheme, n);
}

QubitAmplitudes amplitudes_of(const RunConfig& c, const std::string& key,
                              QubitAmplitudes fallback) {
  if (!c.has(key)) return fallback;
  auto parts = split_list(c.get_string(key));
  std::vector<double> v;
  for (const auto& p : parts) {
    try {
      v.push_back(std::stod(p));
    } catch (const std::exception&) {
      throw ConfigError(c.origin(key) + ": '" + key + "' has a non-numeric entry");
    }
  }
  QubitAmplitudes q;
  if (v.size() == 2) {
    q = {v[0], v[1]};
  } else if (v.size() == 4) {
    q = {{v[0], v[1]}, {v[2], v[3]}};
  } else {
    throw ConfigError(c.origin(key) + ": '" + key +
                      "' expects 'a,b' or 're0,im0,re1,im1'");
  }
  double n2 = std::norm(q.zero) + std::norm(q.one);
  if (std::abs(n2 - 1.0) > 1e-9) {
    throw ConfigError(c.origin(key) + ": '" + key + "' is not normalized");
  }
  double f = 1.0 / std::sqrt(n2);
  q.zero *= f;
  q.one *= f;
  return q;
}

Complex complex_of(const RunConfig& c, const std::string& key, Complex fallback) {
  if (!c.has(key)) return fallback;
  auto parts = split_list(c.get_string(key));
  try {
    if (parts.size() == 1) return {std::stod(parts[0]), 0.0};
    if (parts.size() == 2) return {std::stod(parts[0]), std::stod(parts[1])};
  } catch (const std::exception&) {
  }
  throw ConfigError(c.origin(key) + ": '" + key + "' expects 're' or 're,im'");
}

json amplitudes_json(const QubitState& s) {
  json a = json::array();
  for (const Complex& z : s.amplitudes()) a.push_back(json::array({z.real(), z.imag()}));
  return a;
}

json ensemble_json(const QubitEnsemble& e) {
  json out = json::array();
  for (const auto& m : e.members) {
    json member;
    member["weight"] = m.weight;
    member["amplitudes"] = amplitudes_json(m.state);
    out.push_back(member);
  }
  return out;
}

json outcome_json(const OutcomeRecord& o) {
  json r;
  r["value"] = o.value;
  r["probability"] = o.probability;
  r["subspace"] = o.subspace == Subspace::kBalanced ? "balanced" : "imbalanced";
  r["posterior"] = ensemble_json(o.posterior);
  return r;
}

template <class Fn>
CommandOutput guarded(Fn fn) {
  try {
    return fn();
  } catch (const ConfigError&) {
    throw;
  } catch (const std::invalid_argument& e) {
    throw ConfigError(e.what());
  } catch (const std::out_of_range& e) {
    throw ConfigError(e.what());
  }
}

}  // namespace

CommandOutput cmd_sweep(const RunConfig& config) {
  config.validate();
  return guarded([&] {
    SweepSpec spec;
    spec.n = photons(config, 1000);
    spec.grid = parse_grid(config.get_string("grid", "0.05:5:100"));
    if (config.has("quantities")) spec.quantities = split_list(config.get_string("quantities"));
    std::string format = config.get_string("format", "csv");
    return CommandOutput{format == "json" ? sweep_json(spec) : sweep_csv(spec), kExitOk};
  });
}

CommandOutput cmd_budget(const RunConfig& config) {
  config.validate();
  return guarded([&] {
    const int n = photons(config, 1000);
    const double m = config.find_double("cavity_passes").value_or(1.0);
    const double w = config.find_double("waist_ratio").value_or(3.0);
    const double eps = config.find_double("epsilon_target").value_or(0.01);
    const auto target = config.find_double("fidelity_target");
    const double k = budget_coupling(w);
    const double nm = n * m;

    std::vector<std::string> schemes = {"coherent", "noon", "tf", "tf_one_loss"};
    if (config.has("scheme")) schemes = {config.get_string("scheme")};

    json out;
    out["inputs"] = {{"N", n}, {"M", m}, {"waist_ratio", w}, {"epsilon_target", eps}};
    if (target) out["inputs"]["fidelity_target"] = *target;
    if (config.has("detuning_ratio")) {
      PhysicalParams p;
      p.waist_ratio = w;
      p.detuning_ratio = config.get_double("detuning_ratio");
      p.theta = theta_from_physics(w, p.detuning_ratio);
      p.n_photons = n;
      p.cavity_passes = m;
      auto warnings = p.validate();
      auto sp = p_spontaneous(p);
      out["physical"] = {{"theta", p.theta},
                         {"P_sp", sp.probability},
                         {"valid_regime", sp.valid_regime},
                         {"warnings", warnings}};
    }

    bool regime_ok = true;
    json table = json::object();
    for (const auto& name : schemes) {
      json s;
      LimitScheme ls = parse_limit_scheme(name);
      FidelityLimit lim;
      if (name == "coherent") {
        // Without an explicit M the cavity runs at the pass count the
        // epsilon target asks for.
        CavityBudget cb = cavity_passes_for_targets(eps, w);
        double mc = config.has("cavity_passes") ? m : std::max(1.0, cb.passes);
        lim = fidelity_limit(ls, n, mc, w);
        double theta = std::sqrt(-std::log(eps) / n) / mc;
        OverlapReport ov = lower_output_overlap(n, theta * mc);
        s["M"] = mc;
        s["theta_star"] = theta;
        s["err"] = eps;
        s["P_sp"] = k * n * mc * theta * theta;
        s["M_required"] = cb.passes;
        s["M_quoted"] = cb.quoted_passes ? json(*cb.quoted_passes) : json(nullptr);
        s["mean_detected_photons"] = cb.mean_detected_photons;
        s["lower_output_overlap"] = {{"exact", ov.exact},
                                     {"simulated", ov.simulated},
                                     {"quartic_form", ov.quartic_form}};
      } else if (name == "tf") {
        lim = fidelity_limit(ls, n, m, w);
        double x1 = tf_first_zero_scaled(n);
        double theta = x1 / nm;
        double err = n <= 4000 ? eta(n, x1 / n)
                               : std::pow(xi_0_legendre(n, x1 / n), 2);
        s["x1"] = x1;
        s["theta_star"] = theta;
        s["err"] = err;
        s["P_sp"] = k * x1 * x1 / nm;
      } else if (name == "tf_one_loss") {
        lim = fidelity_limit(ls, n, m, w);
        double c = eta_loss_fit_coefficient();
        double x = std::cbrt(c * nm / k);
        s["fit_coefficient"] = c;
        s["limit_coefficient"] = one_loss_limit_coefficient(w);
        s["theta_star"] = x / nm;
        s["err"] = c / x;
        s["P_sp"] = k * x * x / nm;
      } else {
        lim = fidelity_limit(ls, n, m, w);
        double theta = std::numbers::pi / (2.0 * nm);
        s["theta_star"] = theta;
        s["err"] = kappa(n, theta * m);
        s["P_sp"] = k * std::pow(std::numbers::pi / 2.0, 2) / nm;
      }
      s["f_limit"] = lim.fidelity;
      s["valid_regime"] = lim.valid_regime && s["P_sp"].get<double>() <= 1.0;
      if (target) {
        double need = photons_for_fidelity(ls, *target, m, w);
        s[name == "coherent" ? "M_for_fidelity" : "N_required"] = need;
      }
      regime_ok = regime_ok && s["valid_regime"].get<bool>();
      table[name] = s;
    }
    out["schemes"] = table;
    out["valid_regime"] = regime_ok;
    return CommandOutput{to_text(out), regime_ok ? kExitOk : kExitRegime};
  });
}

CommandOutput cmd_entangle(const RunConfig& config) {
  config.validate();
  return guarded([&] {
    const Scheme scheme = scheme_of(config);
    const int n = photons(config, 10);
    const double theta = theta_of(config, scheme, n);
    const QubitAmplitudes plus{std::sqrt(0.5), std::sqrt(0.5)};
    QubitAmplitudes x = amplitudes_of(config, "chi_x", plus);
    QubitAmplitudes y = amplitudes_of(config, "chi_y", plus);
    std::string mode = config.get_string("mode", config.has("seed") ? "sampled" : "exhaustive");
    if (mode == "exhaustive" && config.has("seed")) {
      throw ConfigError(config.origin("seed") + ": seed only applies to sampled mode");
    }

    ProtocolConfig pc;
    pc.scheme = scheme;
    pc.photons = n;
    pc.theta = theta;
    auto outcomes = entangle_pair(pure_ensemble(QubitState::product({x, y})), {0, 1}, pc);

    double lambda = balanced_weight(x, y);
    double err = false_null_rate(scheme, n, theta);
    Fidelities f = fidelities(lambda, std::min(1.0, std::max(0.0, err)));

    json out;
    out["scheme"] = scheme_name(scheme);
    out["N"] = n;
    out["theta"] = theta;
    out["N_theta"] = n * theta;
    out["Lambda"] = lambda;
    out["err"] = err;
    out["f_nul"] = f.f_nul;
    out["f_avg"] = f.f_avg;
    out["mode"] = mode;
    if (mode == "sampled") {
      std::mt19937_64 rng(static_cast<std::uint64_t>(config.get_integer("seed")));
      double u = uniform_unit(rng);
      double acc = 0.0;
      std::size_t pick_index = outcomes.size() - 1;
      double total = 0.0;
      for (const auto& o : outcomes) total += o.probability;
      for (std::size_t i = 0; i < outcomes.size(); ++i) {
        acc += outcomes[i].probability / total;
        if (u < acc) {
          pick_index = i;
          break;
        }
      }
      out["seed"] = config.get_integer("seed");
      out["outcome"] = outcome_json(outcomes[pick_index]);
    } else {
      json list = json::array();
      double total = 0.0;
      for (const auto& o : outcomes) {
        list.push_back(outcome_json(o));
        total += o.probability;
      }
      out["outcomes"] = list;
      out["total_probability"] = total;
    }
    return CommandOutput{to_text(out), kExitOk};
  });
}

namespace {

json protocol_json(const ProtocolResult& r) {
  json out;
  out["theta"] = r.theta;
  out["average_fidelity"] = r.average_fidelity;
  out["minimum_fidelity"] = r.minimum_fidelity;
  json branches = json::array();
  for (const auto& b : r.branches) {
    json jb;
    jb["probability"] = b.probability;
    jb["fidelity"] = b.fidelity;
    jb["transcript"] = b.transcript;
    jb["final_state"] = ensemble_json(b.final_state);
    branches.push_back(jb);
  }
  out["branches"] = branches;
  return out;
}

QubitAmplitudes random_source(std::mt19937_64& rng) {
  double polar = std::acos(1.0 - 2.0 * uniform_unit(rng));
  double azimuth = 2.0 * std::numbers::pi * uniform_unit(rng);
  return {std::cos(polar / 2.0), std::polar(std::sin(polar / 2.0), azimuth)};
}

}  // namespace

CommandOutput cmd_protocol(const std::string& kind, const RunConfig& config) {
  config.validate();
  if (kind != "teleport" && kind != "ghz" && kind != "swap") {
    throw ConfigError("unknown protocol '" + kind + "' (teleport, ghz, swap)");
  }
  return guarded([&] {
    ProtocolConfig pc;
    pc.scheme = scheme_of(config);
    pc.photons = photons(config, 10);
    if (config.has("injected_error")) {
      pc.injected_error = config.get_double("injected_error");
    } else {
      pc.theta = theta_of(config, pc.scheme, pc.photons);
    }
    const long long trials = config.find_integer("trials").value_or(1);
    std::string mode = config.get_string("mode", "exhaustive");
    if (trials > 1 && !config.has("seed")) {
      throw ConfigError(config.origin("trials") + ": batch trials need a seed");
    }
    if (trials == 1 && mode == "exhaustive" && config.has("seed") && !config.has("mode")) {
      mode = "sampled";
    }
    if (trials == 1 && mode == "exhaustive" && config.has("seed")) {
      throw ConfigError(config.origin("seed") + ": seed only applies to sampled mode or batch trials");
    }
    std::mt19937_64 rng(static_cast<std::uint64_t>(config.find_integer("seed").value_or(0)));

    auto run_once = [&](std::optional<std::uint64_t> seed,
                        std::optional<QubitAmplitudes> source) {
      ProtocolConfig c = pc;
      c.seed = seed;
      if (kind == "teleport") {
        QubitAmplitudes s = source ? *source
                                   : amplitudes_of(config, "source", {1.0, 0.0});
        return teleport(s, c);
      }
      if (kind == "ghz") {
        return ghz(static_cast<int>(config.find_integer("qubits").value_or(3)), c);
      }
      Complex c00 = complex_of(config, "c00", std::sqrt(0.5));
      Complex c11 = complex_of(config, "c11", std::sqrt(0.5));
      return swap_entanglement(c00, c11, c);
    };

    json out;
    out["protocol"] = kind;
    out["scheme"] = scheme_name(pc.scheme);
    out["N"] = pc.photons;
    out["mode"] = mode;
    if (trials == 1) {
      std::optional<std::uint64_t> seed;
      if (mode == "sampled") seed = static_cast<std::uint64_t>(config.get_integer("seed"));
      ProtocolResult r = run_once(seed, std::nullopt);
      out["result"] = protocol_json(r);
    } else {
      out["trials"] = trials;
      json per = json::array();
      double sum = 0.0;
      double worst = 1.0;
      for (long long t = 0; t < trials; ++t) {
        std::optional<QubitAmplitudes> source;
        if (kind == "teleport") source = random_source(rng);
        std::optional<std::uint64_t> seed;
        if (mode == "sampled") seed = rng();
        ProtocolResult r = run_once(seed, source);
        json row;
        row["average_fidelity"] = r.average_fidelity;
        row["minimum_fidelity"] = r.minimum_fidelity;
        if (source) {
          row["source"] = json::array({json::array({source->zero.real(), source->zero.imag()}),
                                       json::array({source->one.real(), source->one.imag()})});
        }
        per.push_back(row);
        sum += r.average_fidelity;
        worst = std::min(worst, r.minimum_fidelity);
      }
      out["mean_fidelity"] = sum / trials;
      out["min_fidelity"] = worst;
      out["per_trial"] = per;
    }
    return CommandOutput{to_text(out), kExitOk};
  });
}

void write_output(const std::string& text, const std::string& path) {
  if (path.empty() || path == "-") {
    std::cout << text;
    std::cout.flush();
    return;
  }
  std::ofstream out(path, std::ios::binary);
  if (!out) throw ConfigError("cannot open output file '" + path + "'");
  out << text;
  if (!out) throw ConfigError("failed writing output file '" + path + "'");
}

}  // namespace qil
