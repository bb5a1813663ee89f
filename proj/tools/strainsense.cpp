// strainsense command-line tool.
//
// Exit codes: 0 success, 1 I/O failure, 2 configuration error,
// 3 numeric-guard error raised by the library.

#include <cstdint>
#include <fstream>
#include <functional>
#include <iostream>
#include <optional>
#include <string>

#include "CLI11.hpp"
#include "strainsense/errors.hpp"
#include "strainsense/harness/audit.hpp"
#include "strainsense/harness/config.hpp"
#include "strainsense/harness/experiment.hpp"
#include "strainsense/harness/report.hpp"
#include "strainsense/harness/sweeps.hpp"
#include "strainsense/version.hpp"

namespace {

namespace h = strainsense::harness;

struct Options {
  std::string config_path;
  std::optional<std::uint64_t> seed;
  std::string out;
  std::string format;
  std::string units;
};

h::RunConfig resolve_config(const Options& opt) {
  h::RunConfig cfg = opt.config_path.empty() ? h::worked_example_config()
                                             : h::load_config(opt.config_path);
  if (opt.seed) cfg.homodyne.seed = *opt.seed;
  if (!opt.units.empty()) cfg.strain_unit = h::parse_strain_unit(opt.units);
  cfg.validate();
  return cfg;
}

h::OutputFormat resolve_format(const Options& opt, const h::RunConfig& cfg,
                               h::OutputFormat fallback) {
  if (!opt.format.empty()) return h::parse_output_format(opt.format);
  return cfg.output_format.value_or(fallback);
}

void emit(const std::string& text, const Options& opt, const h::RunConfig& cfg) {
  const std::string path = !opt.out.empty() ? opt.out : cfg.output_path;
  if (path.empty() || path == "-") {
    std::cout << text;
    return;
  }
  std::ofstream file(path, std::ios::binary | std::ios::trunc);
  if (!file) throw strainsense::IoError(path + ": cannot open for writing");
  file << text;
  if (!file.flush()) throw strainsense::IoError(path + ": write failed");
}

// JSON text for reports that are natively JSON; CSV flattens it.
std::string as_format(const std::string& json_text, h::OutputFormat format) {
  return format == h::OutputFormat::json ? json_text : h::flatten_report_csv(json_text);
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Strain sensing with a transmon register and homodyne readout"};
  app.set_version_flag("--version", std::string(strainsense::kVersion));
  app.require_subcommand(1);
  app.fallthrough();

  Options opt;
  app.add_option("--config", opt.config_path, "Run configuration (.json or .toml)");
  app.add_option("--seed", opt.seed, "Override homodyne.seed");
  app.add_option("--out", opt.out, "Output file (default: stdout)");
  app.add_option("--format", opt.format, "Output format")->check(CLI::IsMember({"csv", "json"}));
  app.add_option("--units", opt.units, "Unit of chi_eps and beta")
      ->check(CLI::IsMember({"per-strain", "per-microstrain"}));

  std::function<void()> action;
  auto command = [&](const char* name, const char* help, std::function<void()> fn) {
    app.add_subcommand(name, help)->callback([&action, fn] { action = fn; });
  };

  command("audit", "Recompute the worked numerical example under every unit reading", [&] {
    const h::RunConfig cfg = resolve_config(opt);
    const h::AuditReport report = h::run_reproduce_audit(cfg);
    emit(resolve_format(opt, cfg, h::OutputFormat::json) == h::OutputFormat::json
             ? h::audit_json(report, cfg)
             : h::audit_csv(report),
         opt, cfg);
  });
  command("scaling", "SQL and Heisenberg sensitivity versus qubit number", [&] {
    const h::RunConfig cfg = resolve_config(opt);
    emit(resolve_format(opt, cfg, h::OutputFormat::csv) == h::OutputFormat::csv
             ? h::run_scaling_sweep(cfg)
             : h::scaling_sweep_json(cfg),
         opt, cfg);
  });
  command("contour", "g1 over a (g0, chi_eps) grid", [&] {
    const h::RunConfig cfg = resolve_config(opt);
    const unsigned workers = h::worker_count_from_env();
    emit(resolve_format(opt, cfg, h::OutputFormat::csv) == h::OutputFormat::csv
             ? h::run_g1_contour(cfg, workers)
             : h::g1_contour_json(cfg, workers),
         opt, cfg);
  });
  command("estimate", "Monte Carlo homodyne strain estimation", [&] {
    const h::RunConfig cfg = resolve_config(opt);
    const h::EstimationExperiment result =
        h::run_estimation_experiment(cfg, h::worker_count_from_env());
    emit(as_format(h::estimation_report_json(result, cfg),
                   resolve_format(opt, cfg, h::OutputFormat::json)),
         opt, cfg);
  });
  command("transmon", "Charge-basis spectrum and strain susceptibility", [&] {
    const h::RunConfig cfg = resolve_config(opt);
    emit(as_format(h::transmon_report_json(cfg), resolve_format(opt, cfg, h::OutputFormat::json)),
         opt, cfg);
  });
  command("qfi", "Quantum Fisher information and Cramer-Rao bounds for GHZ registers", [&] {
    const h::RunConfig cfg = resolve_config(opt);
    emit(as_format(h::qfi_report_json(cfg), resolve_format(opt, cfg, h::OutputFormat::json)),
         opt, cfg);
  });
  command("ramsey", "Ramsey readout deviation and phase response", [&] {
    const h::RunConfig cfg = resolve_config(opt);
    emit(as_format(h::ramsey_report_json(h::default_ramsey_characterization(cfg), cfg),
                   resolve_format(opt, cfg, h::OutputFormat::json)),
         opt, cfg);
  });

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : 2;
  }

  try {
    action();
  } catch (const strainsense::ConfigError& e) {
    std::cerr << "config error: " << e.what() << "\n";
    return 2;
  } catch (const strainsense::Error& e) {
    std::cerr << "numeric guard: " << e.what() << "\n";
    return 3;
  } catch (const strainsense::IoError& e) {
    std::cerr << "i/o error: " << e.what() << "\n";
    return 1;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  }
  return 0;
}
