#include <filesystem>
#include <iostream>
#include <map>
#include <string>

#include "CLI11.hpp"
#include "ilg/driver.hpp"
#include "ilg/oracle.hpp"
#include "ilg/report.hpp"

namespace {

using namespace ilg;

SchemeKind parse_scheme(const std::string& name) {
  if (name == "zarantonello") return SchemeKind::Zarantonello;
  if (name == "kacanov") return SchemeKind::Kacanov;
  if (name == "newton") return SchemeKind::Newton;
  throw CLI::ValidationError("--scheme", "unknown scheme '" + name + "'");
}

ManufacturedProblem parse_problem(const std::string& name) {
  if (name == "smooth") return smooth_problem();
  if (name == "singular") return singular_problem();
  throw CLI::ValidationError("--problem", "unknown problem '" + name + "'");
}

double default_delta(SchemeKind kind, const std::string& problem) {
  if (kind == SchemeKind::Zarantonello) return problem == "singular" ? 0.5 : 0.85;
  return 1.0;
}

struct Preset {
  std::string problem;
  double lambda;
  double theta;
};

const std::map<std::string, Preset>& presets() {
  static const std::map<std::string, Preset> p{
      {"fig1a", {"smooth", 0.5, 0.5}},    {"fig1b", {"smooth", 0.5, 0.0}},
      {"fig2a", {"smooth", 0.1, 0.5}},    {"fig2b", {"smooth", 0.001, 0.5}},
      {"fig3a", {"singular", 0.5, 0.5}},  {"fig3b", {"singular", 0.5, 0.0}},
      {"fig4a", {"singular", 0.1, 0.5}},  {"fig4b", {"singular", 0.001, 0.5}},
  };
  return p;
}

int cmd_run(const std::string& problem_name, const std::string& scheme_name_arg, double delta,
            double lambda, double theta, double eps_tol, int max_elements,
            const std::string& out_dir) {
  const ManufacturedProblem prob = parse_problem(problem_name);
  ILGConfig cfg;
  cfg.scheme.kind = parse_scheme(scheme_name_arg);
  cfg.scheme.delta = delta > 0.0 ? delta : default_delta(cfg.scheme.kind, problem_name);
  cfg.lambda = lambda;
  cfg.theta = theta;
  cfg.eps_tol = eps_tol;
  cfg.max_elements = max_elements;

  std::filesystem::create_directories(out_dir);
  const RunRecord record = run(cfg, prob);
  write_record_csv(record, std::filesystem::path(out_dir) / "record.csv");
  const std::vector<NamedRecord> named{{scheme_name_arg, &record}};
  write_convergence_svg(named, std::filesystem::path(out_dir) / "convergence.svg");
  write_iterations_svg(named, std::filesystem::path(out_dir) / "iterations.svg");

  std::cout << "levels: " << record.levels.size()
            << "  final elements: " << record.levels.back().n_elements
            << "  final estimator: " << record.levels.back().estimator
            << "  final error: " << record.levels.back().h1_error << "\n";
  if (record.exact_solution_found) std::cout << "exact discrete solution found\n";
  return 0;
}

int cmd_experiment(const std::string& name, int max_elements, const std::string& out_root) {
  const auto it = presets().find(name);
  if (it == presets().end())
    throw CLI::ValidationError("--name", "unknown experiment '" + name + "'");
  const Preset& preset = it->second;

  const std::filesystem::path dir = std::filesystem::path(out_root) / name;
  std::filesystem::create_directories(dir);

  std::vector<RunRecord> records;
  std::vector<std::string> labels;
  for (SchemeKind kind :
       {SchemeKind::Zarantonello, SchemeKind::Kacanov, SchemeKind::Newton}) {
    ILGConfig cfg;
    cfg.scheme.kind = kind;
    cfg.scheme.delta = default_delta(kind, preset.problem);
    cfg.lambda = preset.lambda;
    cfg.theta = preset.theta;
    cfg.max_elements = max_elements;
    std::cout << "running " << scheme_name(kind) << " on " << preset.problem
              << " (lambda=" << preset.lambda << ", theta=" << preset.theta << ")...\n";
    records.push_back(run(cfg, parse_problem(preset.problem)));
    labels.push_back(scheme_name(kind));
  }
  std::vector<NamedRecord> named;
  for (std::size_t i = 0; i < records.size(); ++i) {
    write_record_csv(records[i], dir / ("record_" + labels[i] + ".csv"));
    named.push_back({labels[i], &records[i]});
  }
  write_convergence_svg(named, dir / "convergence.svg");
  write_iterations_svg(named, dir / "iterations.svg");
  std::cout << "wrote " << (dir / "convergence.svg").string() << "\n";
  return 0;
}

int cmd_verify(bool quick) {
  const std::vector<CheckResult> results = verify_suite(quick);
  print_report(results, std::cout);
  return all_passed(results) ? 0 : 1;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Adaptive iterative linearized FEM solver for quasilinear diffusion"};
  app.require_subcommand(1);

  std::string problem = "smooth";
  std::string scheme = "kacanov";
  double delta = 0.0;  // 0 = scheme default
  double lambda = 0.5;
  double theta = 0.5;
  double eps_tol = 0.0;
  int max_elements = 200000;
  std::string out_dir = "out";

  CLI::App* run_cmd = app.add_subcommand("run", "run one adaptive computation");
  run_cmd->add_option("--problem", problem, "smooth | singular");
  run_cmd->add_option("--scheme", scheme, "zarantonello | kacanov | newton");
  run_cmd->add_option("--delta", delta, "step size / damping (0 = scheme default)");
  run_cmd->add_option("--lambda", lambda, "adaptivity parameter");
  run_cmd->add_option("--theta", theta, "Doerfler parameter (0 = uniform)");
  run_cmd->add_option("--eps-tol", eps_tol, "estimator stopping tolerance");
  run_cmd->add_option("--max-elements", max_elements, "element budget");
  run_cmd->add_option("--out", out_dir, "output directory");

  std::string experiment_name;
  std::string exp_out = "out";
  int exp_budget = 200000;
  CLI::App* exp_cmd = app.add_subcommand("experiment", "run a preset (all three schemes)");
  exp_cmd->add_option("--name", experiment_name, "fig1a|fig1b|fig2a|fig2b|fig3a|fig3b|fig4a|fig4b")
      ->required();
  exp_cmd->add_option("--max-elements", exp_budget, "element budget");
  exp_cmd->add_option("--out", exp_out, "output root directory");

  bool quick = false;
  CLI::App* verify_cmd = app.add_subcommand("verify", "run the empirical theory checks");
  verify_cmd->add_flag("--quick", quick, "smaller meshes and traces");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : 2;
  }

  try {
    if (run_cmd->parsed())
      return cmd_run(problem, scheme, delta, lambda, theta, eps_tol, max_elements, out_dir);
    if (exp_cmd->parsed()) return cmd_experiment(experiment_name, exp_budget, exp_out);
    if (verify_cmd->parsed()) return cmd_verify(quick);
  } catch (const CLI::ValidationError& e) {
    std::cerr << e.what() << "\n";
    return 2;
  } catch (const std::invalid_argument& e) {
    std::cerr << "invalid arguments: " << e.what() << "\n";
    return 2;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  }
  return 2;
}
