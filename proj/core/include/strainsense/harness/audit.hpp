#pragma once

// Reproduction audit of the worked numerical example. Every printed number
// is recomputed from the configured inputs under two readings of the strain
// susceptibility unit and two quadrature-noise conventions; the audit
// reports mismatches and never throws on them.

#include <string>
#include <vector>

#include "strainsense/harness/config.hpp"

namespace strainsense::harness {

inline constexpr double kAuditMatchTolerance = 0.05;

struct AuditInterpretation {
  std::string name;
  StrainUnit chi_unit = StrainUnit::per_strain;
  double sigma_x = 1.0;
};

struct AuditEntry {
  std::string interpretation;
  double recomputed = 0.0;          ///< in the row's unit
  double discrepancy_factor = 0.0;  ///< recomputed / printed
  bool match = false;               ///< |factor - 1| <= kAuditMatchTolerance
  double identity_residual = 0.0;   ///< |delta g1 tau N - sigma_X| / sigma_X
};

struct AuditRow {
  std::string step;      ///< unique key
  std::string kind;      ///< input, chain or figure
  std::string citation;  ///< printed value with its printed unit
  double printed_value = 0.0;
  std::string unit;      ///< unit of printed_value and every recomputed value
  int n_qubits = 1;
  std::vector<AuditEntry> entries;
  bool matched_any = false;
};

/// The printed arithmetic redone on the printed operands.
struct ArithmeticCheck {
  std::string step;
  std::string expression;
  double printed = 0.0;
  double recomputed = 0.0;
  std::string unit;
  double discrepancy_factor = 0.0;
  bool match = false;
};

struct AuditReport {
  std::vector<AuditInterpretation> interpretations;
  std::vector<AuditRow> rows;
  std::vector<ArithmeticCheck> arithmetic;
  std::vector<std::string> notes;
  std::vector<std::string> unmatched_steps;  ///< chain/figure rows no reading reproduces
  double max_identity_residual = 0.0;
  std::string verdict;  ///< "reproduced" or "not_reproduced"
};

AuditReport run_reproduce_audit(const RunConfig& config = worked_example_config());

std::string audit_json(const AuditReport& report, const RunConfig& config);

/// One line per (row, interpretation).
std::string audit_csv(const AuditReport& report);

}  // namespace strainsense::harness
