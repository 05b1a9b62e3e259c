#include "mwlab/lab/report.hpp"

#include "mwlab/common.hpp"

#include <json.hpp>

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <cstring>
#include <fstream>
#include <limits>

namespace mwlab::lab {

using nlohmann::json;

std::string verdict_name(Verdict v) {
  switch (v) {
    case Verdict::pass:
      return "PASS";
    case Verdict::warn:
      return "WARN";
    case Verdict::fail:
      return "FAIL";
  }
  return "FAIL";
}

namespace {

Verdict verdict_from(const std::string& s) {
  if (s == "PASS") return Verdict::pass;
  if (s == "WARN") return Verdict::warn;
  if (s == "FAIL") return Verdict::fail;
  throw ConfigError("report: unknown verdict '" + s + "'");
}

std::string format_double(double x) {
  char buffer[64];
  std::snprintf(buffer, sizeof buffer, "%.17g", x);
  return buffer;
}

json number(double x) {
  if (std::isfinite(x)) return x;
  if (std::isnan(x)) return "nan";
  return x > 0 ? "inf" : "-inf";
}

double to_number(const json& j) {
  if (j.is_number()) return j.get<double>();
  const auto s = j.get<std::string>();
  if (s == "nan") return std::numeric_limits<double>::quiet_NaN();
  if (s == "inf") return std::numeric_limits<double>::infinity();
  if (s == "-inf") return -std::numeric_limits<double>::infinity();
  throw ConfigError("report: bad number '" + s + "'");
}

json numbers(const std::vector<double>& xs) {
  json out = json::array();
  for (double x : xs) out.push_back(number(x));
  return out;
}

std::vector<double> to_numbers(const json& j) {
  std::vector<double> out;
  for (const json& x : j) out.push_back(to_number(x));
  return out;
}

bool same(double a, double b) { return a == b || (std::isnan(a) && std::isnan(b)); }

bool same(const std::vector<double>& a, const std::vector<double>& b) {
  if (a.size() != b.size()) return false;
  for (std::size_t i = 0; i < a.size(); ++i)
    if (!same(a[i], b[i])) return false;
  return true;
}

}  // namespace

void ExperimentReport::check(const std::string& name, double value, double tolerance) {
  for (Check& c : checks) {
    if (c.name != name) continue;
    if (std::isnan(value) || value > c.value) c.value = value;
    c.tolerance = tolerance;
    c.passed = c.value <= c.tolerance;
    return;
  }
  checks.push_back({name, value, tolerance, value <= tolerance});
}

void ExperimentReport::finalize() {
  verdict = Verdict::pass;
  for (const Check& c : checks)
    if (!c.passed) verdict = Verdict::fail;
  for (const FittedConstant& f : constants) {
    if (!f.finite) verdict = Verdict::fail;
    if (!f.stable && verdict == Verdict::pass) verdict = Verdict::warn;
  }
}

bool ExperimentReport::operator==(const ExperimentReport& o) const {
  if (suite != o.suite || columns != o.columns || verdict != o.verdict || fingerprint != o.fingerprint ||
      config != o.config || rows.size() != o.rows.size() || checks.size() != o.checks.size() ||
      constants.size() != o.constants.size())
    return false;
  for (std::size_t i = 0; i < rows.size(); ++i) {
    const auto &a = rows[i], &b = o.rows[i];
    if (a.instance != b.instance || a.dimension != b.dimension || a.depth != b.depth || a.witness != b.witness ||
        !same(a.values, b.values))
      return false;
  }
  for (std::size_t i = 0; i < checks.size(); ++i) {
    const auto &a = checks[i], &b = o.checks[i];
    if (a.name != b.name || !same(a.value, b.value) || !same(a.tolerance, b.tolerance) || a.passed != b.passed)
      return false;
  }
  for (std::size_t i = 0; i < constants.size(); ++i) {
    const auto &a = constants[i], &b = o.constants[i];
    if (a.name != b.name || a.depths != b.depths || !same(a.values, b.values) || !same(a.drift, b.drift) ||
        a.finite != b.finite || a.stable != b.stable)
      return false;
  }
  return true;
}

FittedConstant fit_constant(const std::string& name, const std::vector<int>& depths,
                            const std::vector<double>& values, double limit) {
  FittedConstant out;
  out.name = name;
  out.depths = depths;
  out.values = values;
  out.finite = !values.empty();
  for (double v : values) out.finite = out.finite && std::isfinite(v) && v > 0.0;
  if (!out.finite) {
    out.drift = std::numeric_limits<double>::infinity();
    out.stable = false;
    return out;
  }
  const auto [lo, hi] = std::minmax_element(values.begin(), values.end());
  out.drift = *hi / *lo;
  out.stable = out.drift < limit;
  return out;
}

std::string to_csv(const ExperimentReport& r) {
  std::string out = "suite,instance,dimension,depth";
  for (const auto& c : r.columns) out += "," + c;
  out += ",witness\n";
  for (const ReportRow& row : r.rows) {
    out += r.suite + "," + std::to_string(row.instance) + "," + std::to_string(row.dimension) + "," +
           std::to_string(row.depth);
    for (double v : row.values) out += "," + format_double(v);
    out += "," + row.witness + "\n";
  }
  return out;
}

std::string to_json(const ExperimentReport& r) {
  json rows = json::array();
  for (const ReportRow& row : r.rows)
    rows.push_back({{"instance", row.instance},
                    {"dimension", row.dimension},
                    {"depth", row.depth},
                    {"values", numbers(row.values)},
                    {"witness", row.witness}});
  json checks = json::array();
  for (const Check& c : r.checks)
    checks.push_back(
        {{"name", c.name}, {"value", number(c.value)}, {"tolerance", number(c.tolerance)}, {"passed", c.passed}});
  json constants = json::array();
  for (const FittedConstant& f : r.constants)
    constants.push_back({{"name", f.name},
                         {"depths", f.depths},
                         {"values", numbers(f.values)},
                         {"drift", number(f.drift)},
                         {"finite", f.finite},
                         {"stable", f.stable}});
  const json j = {{"suite", r.suite},
                  {"columns", r.columns},
                  {"rows", rows},
                  {"checks", checks},
                  {"constants", constants},
                  {"verdict", verdict_name(r.verdict)},
                  {"fingerprint", r.fingerprint},
                  {"config", json::parse(r.config.empty() ? "{}" : r.config)}};
  return j.dump(1) + "\n";
}

ExperimentReport report_from_json(const std::string& text) {
  ExperimentReport r;
  try {
    const json j = json::parse(text);
    r.suite = j.at("suite").get<std::string>();
    r.columns = j.at("columns").get<std::vector<std::string>>();
    for (const json& row : j.at("rows"))
      r.rows.push_back({row.at("instance").get<int>(), row.at("dimension").get<int>(), row.at("depth").get<int>(),
                        to_numbers(row.at("values")), row.at("witness").get<std::string>()});
    for (const json& c : j.at("checks"))
      r.checks.push_back({c.at("name").get<std::string>(), to_number(c.at("value")), to_number(c.at("tolerance")),
                          c.at("passed").get<bool>()});
    for (const json& f : j.at("constants"))
      r.constants.push_back({f.at("name").get<std::string>(), f.at("depths").get<std::vector<int>>(),
                             to_numbers(f.at("values")), to_number(f.at("drift")), f.at("finite").get<bool>(),
                             f.at("stable").get<bool>()});
    r.verdict = verdict_from(j.at("verdict").get<std::string>());
    r.fingerprint = j.at("fingerprint").get<std::string>();
    r.config = j.at("config").dump();
  } catch (const json::exception& e) {
    throw ConfigError(std::string("report: malformed JSON (") + e.what() + ")");
  }
  return r;
}

void write_report(const ExperimentReport& report, const std::string& csv_path, const std::string& json_path) {
  auto write = [](const std::string& path, const std::string& text) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw ConfigError("cannot write '" + path + "'");
    out << text;
  };
  if (!csv_path.empty()) write(csv_path, to_csv(report));
  if (!json_path.empty()) write(json_path, to_json(report));
}

std::string hash_values(const double* data, std::size_t count) {
  std::uint64_t h = 0xcbf29ce484222325ull;
  const auto* bytes = reinterpret_cast<const unsigned char*>(data);
  for (std::size_t i = 0; i < count * sizeof(double); ++i) {
    h ^= bytes[i];
    h *= 0x100000001b3ull;
  }
  char buffer[17];
  std::snprintf(buffer, sizeof buffer, "%016llx", static_cast<unsigned long long>(h));
  return buffer;
}

std::string environment_fingerprint() {
  std::string out;
#if defined(__clang__)
  out += "clang-" + std::to_string(__clang_major__) + "." + std::to_string(__clang_minor__);
#elif defined(__GNUC__)
  out += "gcc-" + std::to_string(__GNUC__) + "." + std::to_string(__GNUC_MINOR__);
#else
  out += "unknown-compiler";
#endif
  out += " eigen-" + std::to_string(EIGEN_WORLD_VERSION) + "." + std::to_string(EIGEN_MAJOR_VERSION) + "." +
         std::to_string(EIGEN_MINOR_VERSION);
  out += sizeof(void*) == 8 ? " 64-bit" : " 32-bit";
  return out;
}

}  // namespace mwlab::lab
