#pragma once

// Figure data: SQL / Heisenberg scaling table and the g1 contour grid.

#include <cstddef>
#include <string>
#include <vector>

#include "strainsense/harness/config.hpp"
#include "strainsense/metrology.hpp"

namespace strainsense::harness {

inline constexpr int kScalingMarkerN = 10;
inline constexpr std::size_t kMaxContourPoints = 10'000'000;

struct ScalingTable {
  std::vector<metrology::ScalingRow> normalized;
  double single_shot = 0.0;  ///< sensitivity_single of the config, strain
};

ScalingTable scaling_table(const RunConfig& config);

/// Columns N,sql_normalized,hl_normalized,sql_physical,hl_physical,marker.
/// Physical columns are in strain per shot; the N = 10 row is marked.
std::string run_scaling_sweep(const RunConfig& config);
std::string scaling_sweep_json(const RunConfig& config);

struct ContourPoint {
  std::string kind;           ///< "grid" or "marker:<label>"
  double g0_over_2pi = 0.0;   ///< Hz
  double chi_eps = 0.0;       ///< Hz per declared strain unit
  double g1_over_2pi = 0.0;   ///< Hz per declared strain unit
};

/// Grid over the sweep's g0 and chi_eps axes (defaults when the config has
/// no sweep), g0 outer, followed by marker rows. The nominal marker is the
/// config's own (g0, chi_eps) unless a marker labelled "nominal" is given.
/// omega_q0 may be overridden through sweep.fixed. Throws ResourceError
/// above kMaxContourPoints grid points.
std::vector<ContourPoint> g1_contour_points(const RunConfig& config, unsigned workers = 1);

/// Columns point_kind,g0_over_2pi_hz,chi_eps_hz_per_<unit>,g1_over_2pi_hz_per_<unit>.
std::string run_g1_contour(const RunConfig& config, unsigned workers = 1);
std::string g1_contour_json(const RunConfig& config, unsigned workers = 1);

}  // namespace strainsense::harness
