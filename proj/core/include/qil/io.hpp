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

#pragma once

#include <map>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

namespace qil {

// Invalid user input: unknown keys, malformed values, conflicting settings.
class ConfigError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// Key/value settings with the place each value came from ("file:line" or
// "--flag"), so diagnostics can point at the offending input.
class RunConfig {
 public:
  static const std::vector<std::string>& known_keys();

  // key = value lines; '#' starts a comment. Throws ConfigError.
  static RunConfig from_file(const std::string& path);
  static RunConfig from_text(const std::string& text,
                             const std::string& source = "<config>");

  void set(const std::string& key, const std::string& value,
           const std::string& origin);
  // Values from `other` replace ours.
  void merge(const RunConfig& other);

  bool has(const std::string& key) const;
  std::string origin(const std::string& key) const;
  std::string get_string(const std::string& key) const;
  std::string get_string(const std::string& key, const std::string& fallback) const;
  double get_double(const std::string& key) const;
  std::optional<double> find_double(const std::string& key) const;
  long long get_integer(const std::string& key) const;
  std::optional<long long> find_integer(const std::string& key) const;

  // Cross-key checks shared by every command.
  void validate() const;

 private:
  struct Entry {
    std::string value;
    std::string origin;
  };
  std::map<std::string, Entry> entries_;
};

enum class OutputFormat { kCsv, kJson };

struct SweepSpec {
  int n = 1000;
  std::vector<double> grid;  // N theta values, strictly increasing
  std::vector<std::string> quantities = {"epsilon", "eta", "kappa", "eta_loss"};
};

// "a:b:count" (inclusive endpoints) or "v1,v2,...". Throws ConfigError.
std::vector<double> parse_grid(const std::string& text);
void validate_sweep(const SweepSpec& spec);

struct CommandOutput {
  std::string text;
  int exit_code = 0;
};

inline constexpr int kExitOk = 0;
inline constexpr int kExitConfig = 2;
inline constexpr int kExitRegime = 3;

// %.17g, the format used for every number the tools print.
std::string format_double(double v);

std::string sweep_csv(const SweepSpec& spec);
std::string sweep_json(const SweepSpec& spec);

CommandOutput cmd_sweep(const RunConfig& config);
CommandOutput cmd_budget(const RunConfig& config);
CommandOutput cmd_entangle(const RunConfig& config);
CommandOutput cmd_protocol(const std::string& kind, const RunConfig& config);

// Writes to `path`, or stdout when path is empty or "-". Throws ConfigError
// when the file cannot be written.
void write_output(const std::string& text, const std::string& path);

}  // namespace qil
