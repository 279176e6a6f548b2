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

#include <cstdlib>
#include <iostream>
#include <map>
#include <string>

#include "CLI11.hpp"
#include "qil/io.hpp"

namespace {

struct Flags {
  std::string config_path;
  std::map<std::string, std::string> values;  // config key -> flag value
  std::string out;
};

void add_flags(CLI::App* cmd, Flags& flags) {
  struct Spec {
    const char* flag;
    const char* key;
    const char* help;
  };
  static const Spec specs[] = {
      {"--scheme", "scheme", "coherent, tf or noon (budget also accepts tf_one_loss)"},
      {"--n-photons", "n_photons", "photon number N"},
      {"--cavity-passes", "cavity_passes", "cavity passes M"},
      {"--waist-ratio", "waist_ratio", "beam waist over wavelength"},
      {"--detuning-ratio", "detuning_ratio", "Gamma / Delta; sets theta"},
      {"--theta", "theta", "single-photon phase"},
      {"--n-theta", "n_theta", "N theta; sets theta"},
      {"--grid", "grid", "N theta grid, start:stop:count or a list"},
      {"--quantities", "quantities", "comma list of epsilon,eta,kappa,eta_loss"},
      {"--seed", "seed", "RNG seed"},
      {"--mode", "mode", "exhaustive or sampled"},
      {"--format", "format", "csv or json"},
      {"--fidelity-target", "fidelity_target", "fidelity to budget for"},
      {"--epsilon-target", "epsilon_target", "coherent false-null target"},
      {"--trials", "trials", "batch size for protocol runs"},
      {"--qubits", "qubits", "GHZ size"},
      {"--chi-x", "chi_x", "qubit x amplitudes, a,b or re,im,re,im"},
      {"--chi-y", "chi_y", "qubit y amplitudes"},
      {"--source", "source", "teleport source amplitudes"},
      {"--c00", "c00", "swap input amplitude on |00>"},
      {"--c11", "c11", "swap input amplitude on |11>"},
      {"--injected-error", "injected_error", "false-null rate to realize"},
  };
  for (const auto& s : specs) {
    std::string key = s.key;
    cmd->add_option_function<std::string>(
        s.flag, [&flags, key](const std::string& v) { flags.values[key] = v; }, s.help);
  }
  cmd->add_option("--config", flags.config_path, "key = value configuration file");
  cmd->add_option("--out", flags.out, "output path (stdout when omitted)");
}

qil::RunConfig build_config(const Flags& flags) {
  qil::RunConfig cfg;
  if (!flags.config_path.empty()) cfg = qil::RunConfig::from_file(flags.config_path);
  qil::RunConfig overrides;
  for (const auto& [key, value] : flags.values) {
    std::string name = key;
    for (char& c : name) {
      if (c == '_') c = '-';
    }
    overrides.set(key, value, "--" + name);
  }
  cfg.merge(overrides);
  return cfg;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"qil: interferometric qubit entanglement simulator"};
  app.require_subcommand(1);

  Flags sweep_flags, budget_flags, entangle_flags, protocol_flags;
  std::string protocol_kind;
  auto* sweep = app.add_subcommand("sweep", "error rates over an N theta grid");
  auto* budget = app.add_subcommand("budget", "photon and emission budget table");
  auto* entangle = app.add_subcommand("entangle", "outcomes of one entangling run");
  auto* protocol = app.add_subcommand("protocol", "teleport, ghz or swap");
  add_flags(sweep, sweep_flags);
  add_flags(budget, budget_flags);
  add_flags(entangle, entangle_flags);
  add_flags(protocol, protocol_flags);
  protocol->add_option("kind", protocol_kind, "teleport, ghz or swap")->required();

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    int code = app.exit(e);
    return code == 0 ? qil::kExitOk : qil::kExitConfig;
  }

  const Flags* flags = sweep->parsed()      ? &sweep_flags
                       : budget->parsed()   ? &budget_flags
                       : entangle->parsed() ? &entangle_flags
                                            : &protocol_flags;
  try {
    qil::RunConfig config = build_config(*flags);
    qil::CommandOutput result;
    if (sweep->parsed()) {
      result = qil::cmd_sweep(config);
    } else if (budget->parsed()) {
      result = qil::cmd_budget(config);
    } else if (entangle->parsed()) {
      result = qil::cmd_entangle(config);
    } else {
      result = qil::cmd_protocol(protocol_kind, config);
    }
    std::string out = flags->out;
    if (out.empty() && config.has("out")) out = config.get_string("out");
    qil::write_output(result.text, out);
    if (result.exit_code == qil::kExitRegime) {
      std::cerr << "qil: regime violation, see valid_regime in the output\n";
    }
    return result.exit_code;
  } catch (const qil::ConfigError& e) {
    std::cerr << "qil: config error: " << e.what() << "\n";
    return qil::kExitConfig;
  } catch (const std::exception& e) {
    std::cerr << "qil: " << e.what() << "\n";
    return 1;
  }
}
