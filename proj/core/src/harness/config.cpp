#include "strainsense/harness/config.hpp"

#include <cmath>
#include <cstdio>
#include <fstream>
#include <set>
#include <sstream>

#include "json.hpp"
#include "strainsense/units.hpp"
#include "toml.hpp"

namespace strainsense::harness {
namespace {

using nlohmann::json;

[[noreturn]] void fail(const std::string& where, const std::string& what) {
  throw ConfigError(where + ": " + what);
}

void check_keys(const json& obj, const std::string& where, std::set<std::string> allowed) {
  if (!obj.is_object()) fail(where, "expected a table/object");
  for (const auto& [key, value] : obj.items()) {
    (void)value;
    if (!allowed.contains(key)) fail(where, "unknown key '" + key + "'");
  }
}

double get_number(const json& obj, const std::string& where, const char* key) {
  if (!obj.contains(key)) fail(where, std::string("missing '") + key + "'");
  const json& v = obj.at(key);
  if (!v.is_number()) fail(where + "." + key, "expected a number");
  const double d = v.get<double>();
  if (!std::isfinite(d)) fail(where + "." + key, "not finite");
  return d;
}

double get_number_or(const json& obj, const std::string& where, const char* key, double dflt) {
  return obj.contains(key) ? get_number(obj, where, key) : dflt;
}

std::int64_t get_integer_or(const json& obj, const std::string& where, const char* key,
                            std::int64_t dflt) {
  if (!obj.contains(key)) return dflt;
  const json& v = obj.at(key);
  if (!v.is_number_integer()) fail(where + "." + key, "expected an integer");
  return v.get<std::int64_t>();
}

std::string get_string_or(const json& obj, const std::string& where, const char* key,
                          std::string dflt) {
  if (!obj.contains(key)) return dflt;
  const json& v = obj.at(key);
  if (!v.is_string()) fail(where + "." + key, "expected a string");
  return v.get<std::string>();
}

// toml++ tree to nlohmann::json, keeping integers and floats apart.
json toml_to_json(const toml::node& node) {
  if (const auto* t = node.as_table()) {
    json out = json::object();
    for (const auto& [k, v] : *t) out[std::string(k.str())] = toml_to_json(v);
    return out;
  }
  if (const auto* a = node.as_array()) {
    json out = json::array();
    for (const auto& v : *a) out.push_back(toml_to_json(v));
    return out;
  }
  if (const auto* v = node.as_integer()) return json(v->get());
  if (const auto* v = node.as_floating_point()) return json(v->get());
  if (const auto* v = node.as_boolean()) return json(v->get());
  if (const auto* v = node.as_string()) return json(v->get());
  throw ConfigError("toml: dates and times are not part of the schema");
}

FrequencyUnit parse_frequency_unit(const std::string& s) {
  if (s == "hz_over_2pi") return FrequencyUnit::hz_over_2pi;
  if (s == "rad_s") return FrequencyUnit::rad_s;
  fail("units.frequency", "expected 'hz_over_2pi' or 'rad_s', got '" + s + "'");
}

homodyne::StateKind parse_state_kind(const std::string& s) {
  if (s == "single") return homodyne::StateKind::single;
  if (s == "ghz") return homodyne::StateKind::ghz;
  fail("experiment.state_kind", "expected 'single' or 'ghz', got '" + s + "'");
}

AxisScale parse_scale(const std::string& s, const std::string& where) {
  if (s == "linear") return AxisScale::linear;
  if (s == "log") return AxisScale::log;
  fail(where, "expected 'linear' or 'log', got '" + s + "'");
}

RunConfig from_json(const json& root) {
  check_keys(root, "config",
             {"units", "transmon", "coupling", "homodyne", "n_qubits", "experiment", "scaling",
              "sweep", "output"});
  RunConfig cfg;

  if (root.contains("units")) {
    const json& u = root.at("units");
    check_keys(u, "units", {"frequency", "strain"});
    cfg.frequency_unit = parse_frequency_unit(get_string_or(u, "units", "frequency", "hz_over_2pi"));
    try {
      cfg.strain_unit = parse_strain_unit(get_string_or(u, "units", "strain", "per_strain"));
    } catch (const ConfigError& e) {
      fail("units.strain", e.what());
    }
  }

  if (root.contains("transmon")) {
    const json& t = root.at("transmon");
    check_keys(t, "transmon", {"e_c", "e_j0", "beta", "n_g", "charge_cutoff"});
    TransmonSection ts;
    ts.e_c = get_number(t, "transmon", "e_c");
    ts.e_j0 = get_number(t, "transmon", "e_j0");
    ts.beta = get_number(t, "transmon", "beta");
    ts.n_g = get_number_or(t, "transmon", "n_g", 0.0);
    ts.charge_cutoff = static_cast<int>(
        get_integer_or(t, "transmon", "charge_cutoff", transmon::kDefaultChargeCutoff));
    cfg.transmon = ts;
  }

  if (!root.contains("coupling")) fail("config", "missing [coupling]");
  {
    const json& c = root.at("coupling");
    check_keys(c, "coupling", {"g0", "omega_q0", "omega_r", "chi_eps", "tau_s"});
    cfg.coupling.g0 = get_number(c, "coupling", "g0");
    cfg.coupling.omega_q0 = get_number(c, "coupling", "omega_q0");
    cfg.coupling.omega_r = get_number(c, "coupling", "omega_r");
    cfg.coupling.chi_eps = get_number(c, "coupling", "chi_eps");
    cfg.coupling.tau_s = get_number(c, "coupling", "tau_s");
  }

  if (root.contains("homodyne")) {
    const json& h = root.at("homodyne");
    check_keys(h, "homodyne", {"sigma_x", "seed", "shots", "nu"});
    cfg.homodyne.sigma_x = get_number_or(h, "homodyne", "sigma_x", cfg.homodyne.sigma_x);
    if (h.contains("seed")) {
      const json& s = h.at("seed");
      if (s.is_number_unsigned()) {
        cfg.homodyne.seed = s.get<std::uint64_t>();
      } else if (s.is_number_integer() && s.get<std::int64_t>() >= 0) {
        cfg.homodyne.seed = static_cast<std::uint64_t>(s.get<std::int64_t>());
      } else {
        fail("homodyne.seed", "expected a non-negative integer");
      }
    }
    cfg.homodyne.shots = get_integer_or(h, "homodyne", "shots", cfg.homodyne.shots);
    cfg.homodyne.nu = get_number_or(h, "homodyne", "nu", cfg.homodyne.nu);
  }

  cfg.n_qubits = static_cast<int>(get_integer_or(root, "config", "n_qubits", cfg.n_qubits));

  if (root.contains("experiment")) {
    const json& e = root.at("experiment");
    check_keys(e, "experiment", {"true_strain", "repetitions", "state_kind", "visibility"});
    cfg.experiment.true_strain = get_number_or(e, "experiment", "true_strain", 0.0);
    cfg.experiment.repetitions =
        static_cast<int>(get_integer_or(e, "experiment", "repetitions", cfg.experiment.repetitions));
    cfg.experiment.state_kind = parse_state_kind(get_string_or(e, "experiment", "state_kind", "ghz"));
    cfg.experiment.visibility = get_number_or(e, "experiment", "visibility", 1.0);
  }

  if (root.contains("scaling")) {
    const json& s = root.at("scaling");
    check_keys(s, "scaling", {"n_max"});
    cfg.scaling_n_max = static_cast<int>(get_integer_or(s, "scaling", "n_max", cfg.scaling_n_max));
  }

  if (root.contains("sweep")) {
    const json& s = root.at("sweep");
    check_keys(s, "sweep", {"axes", "fixed", "markers"});
    SweepSpec spec;
    if (s.contains("axes")) {
      if (!s.at("axes").is_array()) fail("sweep.axes", "expected an array");
      for (const json& a : s.at("axes")) {
        check_keys(a, "sweep.axes", {"name", "min", "max", "points", "scale"});
        AxisSpec axis;
        axis.name = get_string_or(a, "sweep.axes", "name", "");
        axis.min = get_number(a, "sweep.axes", "min");
        axis.max = get_number(a, "sweep.axes", "max");
        axis.points = static_cast<int>(get_integer_or(a, "sweep.axes", "points", 2));
        axis.scale = parse_scale(get_string_or(a, "sweep.axes", "scale", "linear"), "sweep.axes.scale");
        spec.axes.push_back(axis);
      }
    }
    if (s.contains("fixed")) {
      const json& f = s.at("fixed");
      if (!f.is_object()) fail("sweep.fixed", "expected a table/object");
      for (const auto& [key, value] : f.items()) {
        (void)value;
        spec.fixed[key] = get_number(f, "sweep.fixed", key.c_str());
      }
    }
    if (s.contains("markers")) {
      if (!s.at("markers").is_array()) fail("sweep.markers", "expected an array");
      for (const json& m : s.at("markers")) {
        check_keys(m, "sweep.markers", {"label", "g0", "chi_eps"});
        spec.markers.push_back(MarkerSpec{get_string_or(m, "sweep.markers", "label", "marker"),
                                          get_number(m, "sweep.markers", "g0"),
                                          get_number(m, "sweep.markers", "chi_eps")});
      }
    }
    cfg.sweep = spec;
  }

  if (root.contains("output")) {
    const json& o = root.at("output");
    check_keys(o, "output", {"path", "format"});
    cfg.output_path = get_string_or(o, "output", "path", "");
    try {
      if (o.contains("format")) {
        cfg.output_format = parse_output_format(get_string_or(o, "output", "format", ""));
      }
    } catch (const ConfigError& e) {
      fail("output.format", e.what());
    }
  }

  cfg.validate();
  return cfg;
}

json to_json_value(const RunConfig& cfg) {
  json root;
  root["units"] = {{"frequency", std::string(to_string(cfg.frequency_unit))},
                   {"strain", std::string(to_string(cfg.strain_unit))}};
  if (cfg.transmon) {
    const TransmonSection& t = *cfg.transmon;
    root["transmon"] = {{"e_c", t.e_c},   {"e_j0", t.e_j0},
                        {"beta", t.beta}, {"n_g", t.n_g},
                        {"charge_cutoff", t.charge_cutoff}};
  }
  const CouplingSection& c = cfg.coupling;
  root["coupling"] = {{"g0", c.g0},           {"omega_q0", c.omega_q0}, {"omega_r", c.omega_r},
                      {"chi_eps", c.chi_eps}, {"tau_s", c.tau_s}};
  root["homodyne"] = {{"sigma_x", cfg.homodyne.sigma_x},
                      {"seed", cfg.homodyne.seed},
                      {"shots", cfg.homodyne.shots},
                      {"nu", cfg.homodyne.nu}};
  root["n_qubits"] = cfg.n_qubits;
  root["experiment"] = {
      {"true_strain", cfg.experiment.true_strain},
      {"repetitions", cfg.experiment.repetitions},
      {"state_kind", cfg.experiment.state_kind == homodyne::StateKind::ghz ? "ghz" : "single"},
      {"visibility", cfg.experiment.visibility}};
  root["scaling"] = {{"n_max", cfg.scaling_n_max}};
  if (cfg.sweep) {
    json axes = json::array();
    for (const AxisSpec& a : cfg.sweep->axes) {
      axes.push_back({{"name", a.name},
                      {"min", a.min},
                      {"max", a.max},
                      {"points", a.points},
                      {"scale", a.scale == AxisScale::log ? "log" : "linear"}});
    }
    json fixed = json::object();
    for (const auto& [k, v] : cfg.sweep->fixed) fixed[k] = v;
    json markers = json::array();
    for (const MarkerSpec& m : cfg.sweep->markers) {
      markers.push_back({{"label", m.label}, {"g0", m.g0}, {"chi_eps", m.chi_eps}});
    }
    root["sweep"] = {{"axes", axes}, {"fixed", fixed}, {"markers", markers}};
  }
  root["output"] = {{"path", cfg.output_path}};
  if (cfg.output_format) root["output"]["format"] = std::string(to_string(*cfg.output_format));
  return root;
}

}  // namespace

std::string_view to_string(FrequencyUnit u) {
  return u == FrequencyUnit::hz_over_2pi ? "hz_over_2pi" : "rad_s";
}

std::string_view to_string(StrainUnit u) {
  return u == StrainUnit::per_strain ? "per_strain" : "per_microstrain";
}

std::string_view to_string(OutputFormat f) { return f == OutputFormat::csv ? "csv" : "json"; }

StrainUnit parse_strain_unit(std::string_view text) {
  if (text == "per_strain" || text == "per-strain") return StrainUnit::per_strain;
  if (text == "per_microstrain" || text == "per-microstrain") return StrainUnit::per_microstrain;
  throw ConfigError("unknown strain unit '" + std::string(text) +
                    "' (expected per-strain or per-microstrain)");
}

OutputFormat parse_output_format(std::string_view text) {
  if (text == "csv") return OutputFormat::csv;
  if (text == "json") return OutputFormat::json;
  throw ConfigError("unknown output format '" + std::string(text) + "' (expected csv or json)");
}

std::vector<double> AxisSpec::values() const {
  std::vector<double> out(static_cast<std::size_t>(points));
  for (int i = 0; i < points; ++i) {
    const double t = static_cast<double>(i) / (points - 1);
    out[static_cast<std::size_t>(i)] =
        scale == AxisScale::log ? std::exp(std::log(min) + t * (std::log(max) - std::log(min)))
                                : min + t * (max - min);
  }
  out.front() = min;
  out.back() = max;
  return out;
}

void SweepSpec::validate() const {
  std::set<std::string> seen;
  for (const AxisSpec& a : axes) {
    const std::string where = "sweep axis '" + a.name + "'";
    if (a.name.empty()) throw ConfigError("sweep axis without a name");
    if (!seen.insert(a.name).second) throw ConfigError(where + " appears twice");
    if (a.points < 2) throw ConfigError(where + ": points must be >= 2");
    if (!(a.max > a.min)) throw ConfigError(where + ": max must exceed min");
    if (a.scale == AxisScale::log && !(a.min > 0.0)) {
      throw ConfigError(where + ": log axis needs positive bounds");
    }
  }
}

const AxisSpec* SweepSpec::axis(std::string_view name) const {
  for (const AxisSpec& a : axes) {
    if (a.name == name) return &a;
  }
  return nullptr;
}

void RunConfig::validate() const {
  try {
    coupling_params().validate();
    homodyne_model().validate();
    if (auto tp = transmon_params()) tp->validate();
  } catch (const strainsense::Error& e) {
    throw ConfigError(e.what());
  }
  if (n_qubits < 1) throw ConfigError("n_qubits must be >= 1");
  if (!(homodyne.nu > 0.0)) throw ConfigError("homodyne.nu must be > 0");
  if (experiment.repetitions < 1) throw ConfigError("experiment.repetitions must be >= 1");
  if (!(experiment.visibility > 0.0 && experiment.visibility <= 1.0)) {
    throw ConfigError("experiment.visibility must lie in (0, 1]");
  }
  if (scaling_n_max < 2) throw ConfigError("scaling.n_max must be >= 2");
  if (sweep) sweep->validate();
}

double RunConfig::frequency_scale() const {
  return frequency_unit == FrequencyUnit::hz_over_2pi ? units::kTwoPi : 1.0;
}

double RunConfig::strain_scale() const {
  return strain_unit == StrainUnit::per_strain ? 1.0 : 1.0 / units::kMicrostrain;
}

dynamics::CouplingParams RunConfig::coupling_params() const {
  const double f = frequency_scale();
  dynamics::CouplingParams cp;
  cp.g0 = coupling.g0 * f;
  cp.omega_q0 = coupling.omega_q0 * f;
  cp.omega_r = coupling.omega_r * f;
  cp.chi_eps = coupling.chi_eps * f * strain_scale();
  cp.tau = coupling.tau_s;
  cp.g1 = dynamics::CouplingParams::gradient(cp.g0, cp.omega_q0, cp.chi_eps);
  return cp;
}

std::optional<transmon::TransmonParams> RunConfig::transmon_params() const {
  if (!transmon) return std::nullopt;
  const double f = frequency_scale();
  return transmon::TransmonParams{transmon->e_c * f, transmon->e_j0 * f,
                                  transmon->beta * strain_scale(), transmon->n_g,
                                  transmon->charge_cutoff};
}

homodyne::HomodyneModel RunConfig::homodyne_model() const {
  return homodyne::HomodyneModel{homodyne.sigma_x, homodyne.seed, homodyne.shots};
}

double RunConfig::true_strain() const {
  // A strain written in microstrain units converts with the inverse factor.
  return experiment.true_strain / strain_scale();
}

TransmonSection default_transmon_section() {
  return TransmonSection{0.25e9, 12.5e9, 100.0, 0.0, transmon::kDefaultChargeCutoff};
}

RunConfig worked_example_config() {
  RunConfig cfg;
  cfg.frequency_unit = FrequencyUnit::hz_over_2pi;
  cfg.strain_unit = StrainUnit::per_strain;
  cfg.coupling = CouplingSection{50e6, 5e9, 7e9, 50e6, 100e-9};
  cfg.homodyne = HomodyneSection{homodyne::kSigmaStandardQuantumLimit, 20240501, 10000, 1e5};
  cfg.n_qubits = 10;
  cfg.transmon = default_transmon_section();
  return cfg;
}

RunConfig vacuum_noise_config() {
  RunConfig cfg = worked_example_config();
  cfg.homodyne.sigma_x = homodyne::kSigmaVacuum;
  return cfg;
}

SweepSpec default_contour_sweep() {
  SweepSpec spec;
  spec.axes.push_back(AxisSpec{"g0", 10e6, 200e6, 101, AxisScale::log});
  spec.axes.push_back(AxisSpec{"chi_eps", 10e6, 500e6, 101, AxisScale::log});
  return spec;
}

RunConfig parse_config(std::string_view text, ConfigFormat format) {
  json root;
  if (format == ConfigFormat::json) {
    try {
      root = json::parse(text);
    } catch (const json::parse_error& e) {
      throw ConfigError(std::string("json: ") + e.what());
    }
  } else {
    try {
      const toml::table table = toml::parse(text);
      root = toml_to_json(table);
    } catch (const toml::parse_error& e) {
      std::ostringstream msg;
      msg << "toml: " << e.description() << " at line " << e.source().begin.line;
      throw ConfigError(msg.str());
    }
  }
  return from_json(root);
}

RunConfig load_config(const std::filesystem::path& path) {
  const std::string ext = path.extension().string();
  ConfigFormat format;
  if (ext == ".json") {
    format = ConfigFormat::json;
  } else if (ext == ".toml") {
    format = ConfigFormat::toml;
  } else {
    throw ConfigError(path.string() + ": expected a .json or .toml file");
  }
  std::ifstream in(path, std::ios::binary);
  if (!in) throw IoError(path.string() + ": cannot open for reading");
  std::ostringstream buf;
  buf << in.rdbuf();
  try {
    return parse_config(buf.str(), format);
  } catch (const ConfigError& e) {
    throw ConfigError(path.string() + ": " + e.what());
  }
}

std::string to_json(const RunConfig& config) { return to_json_value(config).dump(2); }

std::string config_hash(const RunConfig& config) {
  const std::string text = to_json_value(config).dump();
  std::uint64_t h = 14695981039346656037ULL;
  for (const unsigned char ch : text) {
    h ^= ch;
    h *= 1099511628211ULL;
  }
  char out[17];
  std::snprintf(out, sizeof out, "%016llx", static_cast<unsigned long long>(h));
  return out;
}

}  // namespace strainsense::harness
