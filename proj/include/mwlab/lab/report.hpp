#pragma once

// Experiment reports: per-instance rows, exact checks, fitted constants and a
// verdict; written as CSV plus a JSON mirror.

#include <string>
#include <vector>

namespace mwlab::lab {

enum class Verdict { pass, warn, fail };
std::string verdict_name(Verdict v);

/// An exact check: passes iff value <= tolerance (value is a residual or an
/// excess, worst case over instances).
struct Check {
  std::string name;
  double value = 0.0;
  double tolerance = 0.0;
  bool passed = true;
  friend bool operator==(const Check&, const Check&) = default;
};

/// max over instances of LHS / RHS, one value per depth; stable iff finite,
/// positive and max / min < limit.
struct FittedConstant {
  std::string name;
  std::vector<int> depths;
  std::vector<double> values;
  double drift = 1.0;
  bool finite = true;
  bool stable = true;
  friend bool operator==(const FittedConstant&, const FittedConstant&) = default;
};

struct ReportRow {
  int instance = 0;
  int dimension = 1;
  int depth = 0;
  std::vector<double> values;
  std::string witness;  // hash of the norm witness, "-" when none
  friend bool operator==(const ReportRow&, const ReportRow&) = default;
};

struct ExperimentReport {
  std::string suite;
  std::vector<std::string> columns;
  std::vector<ReportRow> rows;
  std::vector<Check> checks;
  std::vector<FittedConstant> constants;
  Verdict verdict = Verdict::pass;
  std::string fingerprint;
  std::string config;          // canonical JSON echo
  double runtime_seconds = 0;  // reported on the console only

  /// Adds or tightens a check: keeps the worst value seen under one name.
  void check(const std::string& name, double value, double tolerance);
  /// Recomputes the verdict from checks and constants.
  void finalize();
  bool operator==(const ExperimentReport& other) const;
};

/// FittedConstant from per-depth maxima.
FittedConstant fit_constant(const std::string& name, const std::vector<int>& depths,
                            const std::vector<double>& values, double limit);

std::string to_csv(const ExperimentReport& report);
std::string to_json(const ExperimentReport& report);
ExperimentReport report_from_json(const std::string& text);

/// Writes <stem>.csv and <stem>.json under a directory, or to explicit paths.
void write_report(const ExperimentReport& report, const std::string& csv_path, const std::string& json_path);

/// FNV-1a of the raw bytes of a double array, as 16 hex digits.
std::string hash_values(const double* data, std::size_t count);

std::string environment_fingerprint();

}  // namespace mwlab::lab
