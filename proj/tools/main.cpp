// postlie: validate splittings, solve isospectral flows, run the identity suites.
//
// Exit codes: 0 success, 1 check failed / not validated / bounds exceeded,
// 2 parse or validation error, 3 solver error.

#include <CLI11.hpp>
#include <fmt/format.h>

#include <cstdio>
#include <filesystem>
#include <iostream>
#include <optional>

#include "postlie/error.hpp"
#include "postlie/io.hpp"
#include "postlie/random.hpp"
#include "postlie/verify.hpp"

using namespace postlie;

namespace {

enum Exit { kOk = 0, kFailed = 1, kInputError = 2, kSolverError = 3 };

struct Options {
  std::string spec_file, problem_file, preset_name, method, out, format = "json", algebra = "sl2";
  std::string suite;
  std::optional<std::size_t> order, degree;
  std::optional<double> tol, h;
  std::uint64_t seed = 42;
  std::size_t samples = kDefaultValidationSamples;
  bool exact = false;
};

void emit(const std::string& out, const std::string& text) {
  if (out.empty())
    std::cout << text;
  else
    write_text_file(out, text);
}

int cmd_validate(const Options& o) {
  const SplittingSpec spec = spec_from_json(read_json_file(o.spec_file));
  if (o.samples == 0) throw ValidationError("--samples must be positive");
  const std::size_t n = spec.dim();
  Rng rng(o.seed);
  ValidationReport report;
  if (o.exact) {
    SamplePairs<Rational> pairs;
    for (std::size_t i = 0; i < o.samples; ++i) pairs.emplace_back(rng.rational_matrix(n), rng.rational_matrix(n));
    report = validate_splitting(spec, pairs);
  } else {
    SamplePairs<double> pairs;
    for (std::size_t i = 0; i < o.samples; ++i) pairs.emplace_back(rng.real_matrix(n), rng.real_matrix(n));
    report = validate_splitting(spec, pairs, o.tol.value_or(kDefaultValidationTol));
  }
  report.seed = o.seed;
  emit(o.out, dump_json(to_json(report)));
  return report.validated ? kOk : kFailed;
}

struct Bounds {
  double spectral_drift = 1e-10;
  double lax_defect = 1.0;
};

std::filesystem::path strip_extension(const std::string& out) {
  std::filesystem::path p(out);
  if (p.extension() == ".json" || p.extension() == ".csv") p.replace_extension();
  return p;
}

int cmd_solve(const Options& o) {
  if (o.problem_file.empty() == o.preset_name.empty()) throw ValidationError("give exactly one of --problem and --preset");
  Bounds bounds;
  FlowProblem problem = [&] {
    if (o.problem_file.empty()) return preset(o.preset_name);
    const Json doc = read_json_file(o.problem_file);
    if (doc.contains("bounds")) {
      const Json& b = doc["bounds"];
      if (b.contains("spectral_drift")) bounds.spectral_drift = b["spectral_drift"].get<double>();
      if (b.contains("lax_defect")) bounds.lax_defect = b["lax_defect"].get<double>();
    }
    return problem_from_json(doc);
  }();
  if (!o.method.empty()) problem.method = parse_flow_method(o.method);
  if (o.h) problem.tol.rk4_step = *o.h;
  if (o.order) problem.tol.magnus_order = *o.order;
  if (o.tol) problem.tol.chi_tol = *o.tol;
  if (!(problem.tol.rk4_step > 0.0)) throw ValidationError("--h must be positive");
  if (problem.tol.magnus_order < 1) throw ValidationError("--order must be at least 1");
  problem.validate();

  const FlowTrajectory traj = solve(problem);
  Json json = to_json(traj);
  json["bounds"] = {{"spectral_drift", bounds.spectral_drift}, {"lax_defect", bounds.lax_defect}};
  const double drift = json["max_spectral_drift"].get<double>();
  const double defect = json["max_lax_defect"].get<double>();
  const bool within = drift <= bounds.spectral_drift && defect <= bounds.lax_defect;
  json["within_bounds"] = within;

  if (o.out.empty()) {
    std::cout << (o.format == "csv" ? to_csv(traj) : dump_json(json));
  } else {
    const auto base = strip_extension(o.out);
    write_text_file(base.string() + ".json", dump_json(json));
    write_text_file(base.string() + ".csv", to_csv(traj));
  }
  if (!within)
    std::cerr << fmt::format("bounds exceeded: spectral drift {:.3e} (bound {:.1e}), Lax defect {:.3e} (bound {:.1e})\n",
                             drift, bounds.spectral_drift, defect, bounds.lax_defect);
  return within ? kOk : kFailed;
}

int cmd_verify(const Options& o) {
  VerifyOptions v;
  v.seed = o.seed;
  if (o.order) v.order = *o.order;
  if (o.degree) v.degree = *o.degree;
  v.algebra = o.algebra;
  v.tol = o.tol;
  const VerifyReport report = run_verify(o.suite, v);
  const std::string json = dump_json(to_json(report));
  if (o.out.empty()) {
    std::cout << (o.format == "json" ? json : to_text(report));
  } else {
    write_text_file(o.out, json);
    std::cout << to_text(report);
  }
  return report.passed() ? kOk : kFailed;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"post-Lie splittings, factorizations and isospectral flows"};
  app.set_help_flag("--help", "print this help and exit");
  app.require_subcommand(1);
  Options o;

  auto* validate = app.add_subcommand("validate", "certify a splitting against the Yang-Baxter identities");
  validate->add_option("--spec", o.spec_file, "splitting JSON")->required();
  validate->add_option("--samples", o.samples, "random pairs")->capture_default_str();
  validate->add_option("--seed", o.seed)->capture_default_str();
  validate->add_option("--tol", o.tol, "numeric tolerance (default 1e-10)");
  validate->add_flag("--exact", o.exact, "rational samples, exact residuals");
  validate->add_option("--out", o.out, "report path (default stdout)");

  auto* solve_cmd = app.add_subcommand("solve", "integrate da/dt = [a, pi+(a)]");
  solve_cmd->add_option("--problem", o.problem_file, "flow problem JSON");
  solve_cmd->add_option("--preset", o.preset_name, "toda5, qrflow4 or triangular3");
  solve_cmd->add_option("--method", o.method, "factorized, rk4 or magnus_series");
  solve_cmd->add_option("--h", o.h, "RK4 step");
  solve_cmd->add_option("--order", o.order, "truncation order of the series solver");
  solve_cmd->add_option("--tol", o.tol, "fixed-point tolerance");
  solve_cmd->add_option("--out", o.out, "writes <out>.json and <out>.csv");
  solve_cmd->add_option("--format", o.format, "stdout format")->check(CLI::IsMember({"json", "csv"}));

  auto* verify = app.add_subcommand("verify", "run identity suites");
  verify->add_option("suite", o.suite, "postlie, chi, magnus, hopf, star, flow or all")
      ->required()
      ->check(CLI::IsMember(verify_suites()));
  verify->add_option("--order", o.order, "series order for chi/magnus (default 6)");
  verify->add_option("--degree", o.degree, "filtration degree for hopf (default 6)");
  verify->add_option("--algebra", o.algebra, "sl2, gl2 or gl3")->capture_default_str();
  verify->add_option("--seed", o.seed)->capture_default_str();
  verify->add_option("--tol", o.tol, "override numeric thresholds");
  verify->add_option("--out", o.out, "JSON report path");
  verify->add_option("--format", o.format, "stdout format when --out is absent")
      ->check(CLI::IsMember({"json", "text"}));
  verify->callback([&] {
    if (verify->count("--format") == 0) o.format = "text";
  });

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return kInputError;
  }

  try {
    if (validate->parsed()) return cmd_validate(o);
    if (solve_cmd->parsed()) return cmd_solve(o);
    return cmd_verify(o);
  } catch (const ParseError& e) {
    std::cerr << "parse error: " << e.what() << '\n';
    return kInputError;
  } catch (const ValidationError& e) {
    std::cerr << "invalid input: " << e.what() << '\n';
    return kInputError;
  } catch (const DimensionError& e) {
    std::cerr << "invalid input: " << e.what() << '\n';
    return kInputError;
  } catch (const UnsupportedSpecError& e) {
    std::cerr << "invalid input: " << e.what() << '\n';
    return kInputError;
  } catch (const nlohmann::json::exception& e) {
    std::cerr << "parse error: " << e.what() << '\n';
    return kInputError;
  } catch (const Error& e) {
    std::cerr << "solver error: " << e.what() << '\n';
    return kSolverError;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kSolverError;
  }
}
