#include "fraclab/harness.hpp"

#include <chrono>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <stdexcept>

#include <json.hpp>

#include "fraclab/version.hpp"

namespace fraclab {

namespace {

std::string trim(const std::string& s) {
  auto start = s.begin();
  while (start != s.end() && std::isspace(static_cast<unsigned char>(*start))) ++start;
  auto end = s.end();
  while (end != start && std::isspace(static_cast<unsigned char>(*(end - 1)))) --end;
  return std::string(start, end);
}

}  // namespace

ConfigMap ConfigMap::from_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("config: cannot open " + path);
  std::stringstream buf;
  buf << in.rdbuf();
  return from_text(buf.str());
}

ConfigMap ConfigMap::from_text(const std::string& text) {
  ConfigMap cfg;
  const std::string body = trim(text);
  if (!body.empty() && body.front() == '{') {
    const auto j = nlohmann::json::parse(body);
    if (!j.is_object()) throw std::runtime_error("config: JSON must be an object");
    for (const auto& [key, value] : j.items()) {
      if (value.is_string())
        cfg.set(key, value.get<std::string>());
      else
        cfg.set(key, value.dump());
    }
    return cfg;
  }
  std::istringstream in(body);
  std::string line, section;
  while (std::getline(in, line)) {
    line = trim(line);
    if (line.empty() || line[0] == '#' || line[0] == ';') continue;
    if (line.front() == '[' && line.back() == ']') {
      section = trim(line.substr(1, line.size() - 2));
      continue;
    }
    const auto pos = line.find('=');
    if (pos == std::string::npos)
      throw std::runtime_error("config: expected key = value, got '" + line + "'");
    std::string key = trim(line.substr(0, pos));
    if (!section.empty()) key = section + "." + key;
    cfg.set(key, trim(line.substr(pos + 1)));
  }
  return cfg;
}

void ConfigMap::set(const std::string& key, const std::string& value) {
  kv_[key] = value;
}

bool ConfigMap::has(const std::string& key) const {
  touched_.insert(key);
  return kv_.count(key) > 0;
}

double ConfigMap::get_double(const std::string& key, double fallback) const {
  touched_.insert(key);
  auto it = kv_.find(key);
  if (it == kv_.end()) return fallback;
  return std::stod(it->second);
}

std::int64_t ConfigMap::get_int(const std::string& key, std::int64_t fallback) const {
  touched_.insert(key);
  auto it = kv_.find(key);
  if (it == kv_.end()) return fallback;
  return std::stoll(it->second);
}

std::uint64_t ConfigMap::get_u64(const std::string& key, std::uint64_t fallback) const {
  touched_.insert(key);
  auto it = kv_.find(key);
  if (it == kv_.end()) return fallback;
  return std::stoull(it->second);
}

std::string ConfigMap::get_string(const std::string& key,
                                  const std::string& fallback) const {
  touched_.insert(key);
  auto it = kv_.find(key);
  return it == kv_.end() ? fallback : it->second;
}

bool ConfigMap::get_bool(const std::string& key, bool fallback) const {
  touched_.insert(key);
  auto it = kv_.find(key);
  if (it == kv_.end()) return fallback;
  const std::string v = it->second;
  if (v == "true" || v == "1" || v == "yes") return true;
  if (v == "false" || v == "0" || v == "no") return false;
  throw std::runtime_error("config: bad boolean for " + key + ": " + v);
}

std::vector<double> ConfigMap::get_list(const std::string& key,
                                        const std::vector<double>& fallback) const {
  touched_.insert(key);
  auto it = kv_.find(key);
  if (it == kv_.end()) return fallback;
  std::vector<double> out;
  std::string item;
  std::istringstream in(it->second);
  while (std::getline(in, item, ',')) {
    item = trim(item);
    if (item.empty()) continue;
    if (item.front() == '[') item.erase(0, 1);
    if (!item.empty() && item.back() == ']') item.pop_back();
    item = trim(item);
    if (!item.empty()) out.push_back(std::stod(item));
  }
  if (out.empty()) throw std::runtime_error("config: empty list for " + key);
  return out;
}

void ConfigMap::reject_unknown() const {
  std::string unknown;
  for (const auto& [key, value] : kv_)
    if (!touched_.count(key)) unknown += (unknown.empty() ? "" : ", ") + key;
  if (!unknown.empty())
    throw std::runtime_error("config: unknown keys rejected: " + unknown);
}

std::string ExperimentReport::to_json_string() const {
  nlohmann::json j;
  j["schema"] = "fraclab-report-v1";
  j["suite"] = suite;
  j["tool_version"] = tool_version;
  j["seed"] = seed;
  j["workers"] = workers;
  j["members"] = members;
  j["attrition"] = attrition;
  j["passed"] = passed;
  j["config"] = config_echo;
  j["constants"] = constants;
  nlohmann::json qs = nlohmann::json::array();
  for (const auto& q : quantities)
    qs.push_back({{"name", q.name},
                  {"value", q.est.value},
                  {"stderr", q.est.stderr_},
                  {"n", q.est.n}});
  j["quantities"] = qs;
  nlohmann::json ss = nlohmann::json::array();
  for (const auto& s : slopes)
    ss.push_back({{"name", s.name},
                  {"xs", s.fit.xs},
                  {"ys", s.fit.ys},
                  {"slope", s.fit.slope},
                  {"intercept", s.fit.intercept},
                  {"stderr", s.fit.stderr_},
                  {"r2", s.fit.r2}});
  j["slopes"] = ss;
  nlohmann::json cs = nlohmann::json::array();
  for (const auto& c : checks)
    cs.push_back({{"name", c.name}, {"pass", c.pass}, {"detail", c.detail}});
  j["checks"] = cs;
  j["notes"] = notes;
  return j.dump(2) + "\n";
}

namespace detail {
void run_suite(const std::string& suite, const ConfigMap& cfg, ExperimentReport& rep,
               const std::string& out_dir);
std::vector<std::string> suite_ids();
}  // namespace detail

std::vector<std::string> list_suites() { return detail::suite_ids(); }

ExperimentReport run_experiment(const std::string& suite, ConfigMap cfg,
                                const std::string& out_dir) {
  ExperimentReport rep;
  rep.suite = suite;
  rep.tool_version = kVersion;
  rep.seed = cfg.get_u64("seed", 7);
  rep.workers = static_cast<int>(cfg.get_int("workers", 0));
  for (const auto& [key, value] : cfg.entries()) rep.config_echo[key] = value;

  const auto start = std::chrono::steady_clock::now();
  detail::run_suite(suite, cfg, rep, out_dir);
  cfg.reject_unknown();
  rep.wall_clock_s =
      std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();

  for (const auto& c : rep.checks)
    if (!c.pass) rep.passed = false;
  if (rep.members > 0 && rep.attrition * 100 > rep.members) rep.passed = false;

  if (!out_dir.empty()) {
    std::filesystem::create_directories(out_dir);
    std::ofstream out(out_dir + "/" + suite + ".report.json", std::ios::binary);
    out << rep.to_json_string();
  }
  return rep;
}

}  // namespace fraclab
