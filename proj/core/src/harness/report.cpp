#include <algorithm>
#include <cstdio>
#include <cstdlib>
#include <stdexcept>

#include "report_json.hpp"
#include "strainsense/harness/report.hpp"
#include "strainsense/version.hpp"

namespace strainsense::harness {
namespace {

using nlohmann::json;

bool is_tagged(const json& node) {
  return node.is_object() && node.size() == 2 && node.contains("value") &&
         node.contains("unit") && node.at("unit").is_string() &&
         (node.at("value").is_number() || node.at("value").is_null());
}

void check_tags(const json& node, const std::string& path) {
  if (is_tagged(node)) return;
  if (node.is_number()) throw std::logic_error("report field '" + path + "' has no unit tag");
  if (node.is_object()) {
    for (const auto& [key, value] : node.items()) check_tags(value, path + "/" + key);
  } else if (node.is_array()) {
    for (std::size_t i = 0; i < node.size(); ++i) check_tags(node[i], path + "/" + std::to_string(i));
  }
}

std::string csv_field(const std::string& s) {
  if (s.find_first_of(",\"\n") == std::string::npos) return s;
  std::string out = "\"";
  for (const char c : s) {
    if (c == '"') out += '"';
    out += c;
  }
  return out + "\"";
}

void flatten(const json& node, const std::string& path, std::string& out) {
  if (is_tagged(node)) {
    const json& v = node.at("value");
    out += csv_field(path) + "," + (v.is_null() ? std::string("nan") : format_sci(v.get<double>())) +
           "," + csv_field(node.at("unit").get<std::string>()) + "\n";
  } else if (node.is_object()) {
    for (const auto& [key, value] : node.items()) {
      flatten(value, path.empty() ? key : path + "." + key, out);
    }
  } else if (node.is_array()) {
    for (std::size_t i = 0; i < node.size(); ++i) {
      flatten(node[i], path + "[" + std::to_string(i) + "]", out);
    }
  } else if (node.is_string()) {
    out += csv_field(path) + "," + csv_field(node.get<std::string>()) + ",text\n";
  } else if (node.is_boolean()) {
    out += csv_field(path) + "," + (node.get<bool>() ? "true" : "false") + ",flag\n";
  }
}

}  // namespace

std::string format_sci(double value) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.8e", value);
  return buf;
}

unsigned worker_count_from_env() {
  const char* raw = std::getenv(kWorkersEnv);
  if (raw == nullptr || *raw == '\0') return 1;
  char* end = nullptr;
  const long v = std::strtol(raw, &end, 10);
  if (*end != '\0' || v < 1 || v > 1024) {
    throw ConfigError(std::string(kWorkersEnv) + "='" + raw + "' is not a worker count in [1, 1024]");
  }
  return static_cast<unsigned>(v);
}

void require_unit_tags(std::string_view json_text) {
  check_tags(json::parse(json_text), "");
}

std::string flatten_report_csv(std::string_view json_text) {
  std::string out = "field,value,unit\n";
  flatten(json::parse(json_text), "", out);
  return out;
}

namespace detail {

json provenance(const RunConfig& config) {
  return json{{"config_hash", config_hash(config)},
              {"artifact_version", std::string(kVersion)},
              {"generator", "strainsense"}};
}

std::string dump_report(const json& report) {
  check_tags(report, "");
  return report.dump(2) + "\n";
}

std::string per_strain_unit(std::string_view base, StrainUnit unit) {
  return std::string(base) + (unit == StrainUnit::per_strain ? "_per_strain" : "_per_microstrain");
}

}  // namespace detail
}  // namespace strainsense::harness
