#pragma once

#include <cstdint>
#include <map>
#include <set>
#include <string>
#include <vector>

#include "fraclab/metrics_types.hpp"

namespace fraclab {

/// Flat key=value configuration with [section] prefixes; JSON files with one
/// flat object are accepted as an alternative. Typed getters record which
/// keys a suite understands so unknown keys can be rejected afterwards.
class ConfigMap {
 public:
  static ConfigMap from_file(const std::string& path);
  static ConfigMap from_text(const std::string& text);

  void set(const std::string& key, const std::string& value);
  bool has(const std::string& key) const;

  double get_double(const std::string& key, double fallback) const;
  std::int64_t get_int(const std::string& key, std::int64_t fallback) const;
  std::uint64_t get_u64(const std::string& key, std::uint64_t fallback) const;
  std::string get_string(const std::string& key, const std::string& fallback) const;
  bool get_bool(const std::string& key, bool fallback) const;
  std::vector<double> get_list(const std::string& key,
                               const std::vector<double>& fallback) const;

  /// Throws listing any key no getter ever touched.
  void reject_unknown() const;
  const std::map<std::string, std::string>& entries() const { return kv_; }

 private:
  std::map<std::string, std::string> kv_;
  mutable std::set<std::string> touched_;
};

struct NamedEstimate {
  std::string name;
  Estimate est;
};

struct NamedSlope {
  std::string name;
  SlopeFit fit;
};

struct Check {
  std::string name;
  bool pass = false;
  std::string detail;
};

struct ExperimentReport {
  std::string suite;
  std::string tool_version;
  std::uint64_t seed = 0;
  int workers = 0;
  std::map<std::string, std::string> config_echo;
  std::map<std::string, double> constants;  // kernel/Girsanov constants in use
  std::vector<NamedEstimate> quantities;
  std::vector<NamedSlope> slopes;
  std::vector<Check> checks;
  std::vector<std::string> notes;
  std::size_t members = 0;
  std::size_t attrition = 0;  // flagged members (numeric aborts)
  bool passed = true;
  /// Wall clock is printed to the console, never serialized: report files are
  /// byte-identical across reruns.
  double wall_clock_s = 0.0;

  std::string to_json_string() const;
};

std::vector<std::string> list_suites();

/// Runs a suite by id. out_dir empty: nothing is written; otherwise the JSON
/// report and the suite's CSV tables land there. Exit-code semantics are the
/// caller's job (report.passed).
ExperimentReport run_experiment(const std::string& suite, ConfigMap cfg,
                                const std::string& out_dir = "");

}  // namespace fraclab
