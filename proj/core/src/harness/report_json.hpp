#pragma once

// Private JSON helpers for the report emitters.

#include <string>

#include "json.hpp"
#include "strainsense/harness/config.hpp"

namespace strainsense::harness::detail {

using nlohmann::json;

inline json quantity(double value, std::string unit) {
  return json{{"value", value}, {"unit", std::move(unit)}};
}

inline json count(long long value) { return quantity(static_cast<double>(value), "count"); }

/// Config hash, artifact version and generator name.
json provenance(const RunConfig& config);

/// Serializes a report, after checking every number carries a unit tag.
std::string dump_report(const json& report);

/// Unit label for a value per strain or per microstrain.
std::string per_strain_unit(std::string_view base, StrainUnit unit);

}  // namespace strainsense::harness::detail
