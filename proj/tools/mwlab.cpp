// mwlab: command-line front end of the matrix-weight laboratory.

#include "mwlab/bmo.hpp"
#include "mwlab/io.hpp"
#include "mwlab/lab/config.hpp"
#include "mwlab/lab/report.hpp"
#include "mwlab/lab/suites.hpp"
#include "mwlab/norms.hpp"
#include "mwlab/weights.hpp"

#include <CLI11.hpp>

#include <cstdio>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <sstream>

namespace {

using namespace mwlab;
using namespace mwlab::lab;

struct Common {
  std::string config;
  std::uint64_t seed = 0;
  int depth = -1;
  std::string out;
  bool seed_set = false;
};

void add_common(CLI::App* app, Common& c) {
  app->add_option("--config", c.config, "JSON configuration file");
  app->add_option("--seed", c.seed, "base seed (overrides the config)");
  app->add_option("--depth", c.depth, "grid depth L (overrides the config)")->check(CLI::Range(0, 12));
  app->add_option("--out", c.out, "output directory for reports");
}

std::string read_text(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError("cannot open config file '" + path + "'");
  std::stringstream buffer;
  buffer << in.rdbuf();
  return buffer.str();
}

/// --depth L shifts the depth list so that it starts at L.
void override_depth(ExperimentConfig& c, int depth) {
  if (depth < 0) return;
  const int delta = depth - c.depths.front();
  for (int& d : c.depths) d += delta;
}

ExperimentConfig single_config(const Common& common, const std::string& suite = "identities") {
  ExperimentConfig c = default_config(suite);
  if (!common.config.empty()) c = apply_json(c, read_text(common.config));
  if (common.seed_set) c.seed = common.seed;
  override_depth(c, common.depth);
  validate(c);
  return c;
}

struct Instance {
  GridSpec grid;
  MatrixWeight u, v;
  MatrixField b;
};

Instance instance_of(const ExperimentConfig& c, const std::string& weight_path, const std::string& v_path,
                     const std::string& symbol_path) {
  Instance in;
  in.grid = GridSpec{c.dimension, c.depths.front()};
  in.u = weight_path.empty() ? generate_weight(in.grid, c.n, c.u, derive_seed(c.seed, 1), c.p)
                             : read_weight_table(weight_path);
  in.grid = in.u.grid();
  in.v = v_path.empty() ? generate_weight(in.grid, in.u.size(), c.v, derive_seed(c.seed, 2), c.p)
                        : read_weight_table(v_path);
  in.b = symbol_path.empty() ? generate_symbol(in.grid, in.u.size(), c.b, derive_seed(c.seed, 3))
                             : read_matrix_table(symbol_path);
  return in;
}

Czo parse_czo(const std::string& name) {
  if (name == "hilbert") return Czo::hilbert();
  if (name == "riesz1") return Czo::riesz(0);
  if (name == "riesz2") return Czo::riesz(1);
  throw ConfigError("unknown operator '" + name + "' (hilbert, riesz1, riesz2)");
}

NormOptions norm_options(const ExperimentConfig& c) {
  NormOptions o;
  o.restarts = c.norm.restarts;
  o.max_iterations = c.norm.max_iterations;
  o.ascent_iterations = c.norm.ascent_iterations;
  o.tolerance = c.norm.tolerance;
  o.seed = derive_seed(c.seed, 99);
  return o;
}

void print_estimate(const char* what, const NormEstimate& e) {
  std::printf("%s %.17g (%s, %d iterations, residual %.3g)\n", what, e.value, e.mode_name().c_str(), e.iterations,
              e.residual);
}

int run_verify(const Common& common, const std::string& target) {
  std::vector<ExperimentConfig> plan;
  if (target == "all") {
    plan = common.config.empty() ? default_plan() : load_config_file(common.config, "all");
  } else {
    plan = common.config.empty() ? std::vector<ExperimentConfig>{default_config(target)}
                                 : load_config_file(common.config, target);
  }
  for (auto& c : plan) {
    if (common.seed_set) c.seed = common.seed;
    override_depth(c, common.depth);
    validate(c);
  }
  if (!common.out.empty()) std::filesystem::create_directories(common.out);
  bool ok = true;
  for (const auto& c : plan) {
    const ExperimentReport r = run_suite(c);
    std::string csv = c.csv, json = c.json;
    if (!common.out.empty()) {
      const auto stem = std::filesystem::path(common.out) / report_stem(c);
      if (csv.empty()) csv = stem.string() + ".csv";
      if (json.empty()) json = stem.string() + ".json";
    }
    write_report(r, csv, json);
    std::printf("%-16s %s  %.1fs\n", report_stem(c).c_str(), verdict_name(r.verdict).c_str(), r.runtime_seconds);
    for (const Check& k : r.checks)
      if (!k.passed) std::printf("  check failed: %s (%.3g > %.3g)\n", k.name.c_str(), k.value, k.tolerance);
    for (const FittedConstant& f : r.constants)
      if (!f.stable) std::printf("  constant unstable: %s (drift %.3g)\n", f.name.c_str(), f.drift);
    ok = ok && r.verdict == Verdict::pass;
  }
  return ok ? 0 : 1;
}

int run_report(const std::string& path, const Common& common) {
  const ExperimentReport r = report_from_json(read_text(path));
  std::printf("suite %s: %s, %zu rows\n", r.suite.c_str(), verdict_name(r.verdict).c_str(), r.rows.size());
  for (const Check& k : r.checks)
    std::printf("  check %-40s %.3g <= %.3g %s\n", k.name.c_str(), k.value, k.tolerance, k.passed ? "ok" : "FAILED");
  for (const FittedConstant& f : r.constants) {
    std::printf("  constant %-40s", f.name.c_str());
    for (double v : f.values) std::printf(" %.6g", v);
    std::printf("  drift %.3g%s\n", f.drift, f.stable ? "" : " UNSTABLE");
  }
  if (!common.out.empty()) {
    std::filesystem::create_directories(common.out);
    const auto stem = std::filesystem::path(common.out) / std::filesystem::path(path).stem();
    write_report(r, stem.string() + ".csv", "");
  }
  return r.verdict == Verdict::pass ? 0 : 1;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Numerical laboratory for two-matrix-weighted commutators"};
  app.require_subcommand(1);

  Common common;
  std::string weight_path, v_path, symbol_path, op_name = "hilbert";
  double p_override = 0.0;
  bool dual = false;

  auto* ap = app.add_subcommand("ap", "matrix A_p characteristic of a weight");
  add_common(ap, common);
  ap->add_option("--weight", weight_path, "weight table (default: generated from the config)");
  ap->add_option("-p", p_override, "exponent (overrides the config)");
  ap->add_flag("--dual", dual, "evaluate the dual averaging order");

  auto* bmo = app.add_subcommand("bmo", "BMO_{V,U}^p and tilde BMO of a symbol");
  add_common(bmo, common);
  bmo->add_option("--u", weight_path, "weight table U");
  bmo->add_option("--v", v_path, "weight table V");
  bmo->add_option("--symbol", symbol_path, "symbol table B");
  bmo->add_option("-p", p_override, "exponent");

  auto* opnorm = app.add_subcommand("opnorm", "||T||_{L^p(U) -> L^p(V)} of a Hilbert/Riesz transform");
  add_common(opnorm, common);
  opnorm->add_option("--u", weight_path, "weight table U");
  opnorm->add_option("--v", v_path, "weight table V");
  opnorm->add_option("--operator", op_name, "hilbert | riesz1 | riesz2");
  opnorm->add_option("-p", p_override, "exponent");

  auto* comm = app.add_subcommand("commutator", "||[M_B, T]||_{L^p(U) -> L^p(V)}");
  add_common(comm, common);
  comm->add_option("--u", weight_path, "weight table U");
  comm->add_option("--v", v_path, "weight table V");
  comm->add_option("--symbol", symbol_path, "symbol table B");
  comm->add_option("--operator", op_name, "hilbert | riesz1 | riesz2");
  comm->add_option("-p", p_override, "exponent");

  std::string target;
  auto* verify = app.add_subcommand("verify", "run a verification suite, or all of them");
  add_common(verify, common);
  verify->add_option("suite", target, "suite name or 'all'")->required();

  std::string report_path;
  auto* report = app.add_subcommand("report", "summarise a JSON report (and re-emit its CSV with --out)");
  add_common(report, common);
  report->add_option("path", report_path, "JSON report")->required();

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : 2;
  }

  try {
    for (auto* sub : {ap, bmo, opnorm, comm, verify, report})
      if (sub->count("--seed")) common.seed_set = true;

    if (*verify) {
      if (target != "all") default_config(target);
      return run_verify(common, target);
    }
    if (*report) return run_report(report_path, common);

    ExperimentConfig c = single_config(common);
    if (p_override != 0.0) {
      c.p = p_override;
      validate(c);
    }
    const Instance in = instance_of(c, weight_path, v_path, symbol_path);
    const CubeFamily cubes = CubeFamily::all_shifts(in.grid);
    if (*ap) {
      const CubeSup s = ap_characteristic(in.u, c.p, cubes, dual);
      std::printf("[W]_A_p %.17g at %s\n", s.value, cubes.describe(s.argmax).c_str());
    } else if (*bmo) {
      const BmoValue a = bmo_vu(in.b, in.u, in.v, c.p, cubes);
      const BmoValue t = bmo_tilde(in.b, in.u, in.v, c.p, cubes, Orientation::primal);
      const BmoValue d = bmo_tilde(in.b, in.u, in.v, c.p, cubes, Orientation::dual);
      std::printf("bmo_vu %.17g\ntilde_primal %.17g\ntilde_dual %.17g\n", a.value, t.value, d.value);
    } else if (*opnorm) {
      const LinearOperator t = LinearOperator::czo(in.grid, in.u.size(), parse_czo(op_name));
      const NormEstimate e = c.p == 2.0 ? opnorm_p2(t, in.u, in.v, norm_options(c))
                                        : opnorm_lower(t, in.u, in.v, c.p, norm_options(c));
      print_estimate("norm", e);
    } else if (*comm) {
      print_estimate("norm", commutator_norm(in.b, parse_czo(op_name), in.u, in.v, c.p, norm_options(c)));
    }
    return 0;
  } catch (const ConfigError& e) {
    std::fprintf(stderr, "config error: %s\n", e.what());
    return 2;
  } catch (const SizeError& e) {
    std::fprintf(stderr, "config error: %s\n", e.what());
    return 2;
  } catch (const WeightError& e) {
    std::fprintf(stderr, "invalid weight at cell %d: %s\n", e.cell(), e.what());
    return 1;
  } catch (const std::exception& e) {
    std::fprintf(stderr, "error: %s\n", e.what());
    return 1;
  }
}
