#include <CLI11.hpp>
#include <nlohmann/json.hpp>

#include <cerrno>
#include <cmath>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include "eigencov/estimators.hpp"
#include "eigencov/experiments.hpp"
#include "eigencov/gaussian.hpp"
#include "eigencov/isotonic.hpp"
#include "eigencov/penalty.hpp"
#include "eigencov/spectra.hpp"

namespace {

using eigencov::EigengapKind;
using eigencov::Method;

constexpr int kExitOk = 0;
constexpr int kExitBadInput = 2;
constexpr int kExitSolverFailure = 3;
constexpr int kExitPsaGuard = 4;

bool parse_double_strict(const std::string& token, double& out) {
  const char* begin = token.c_str();
  char* end = nullptr;
  errno = 0;
  out = std::strtod(begin, &end);
  if (end == begin || errno == ERANGE) return false;
  while (*end == ' ' || *end == '\t' || *end == '\r') ++end;
  return *end == '\0';
}

std::vector<double> parse_value_list(const std::string& text) {
  std::vector<double> values;
  std::stringstream ss(text);
  std::string token;
  while (std::getline(ss, token, ',')) {
    double v = 0.0;
    if (!parse_double_strict(token, v)) {
      throw std::invalid_argument("non-numeric value '" + token + "'");
    }
    values.push_back(v);
  }
  if (values.empty()) {
    throw std::invalid_argument("empty value list");
  }
  return values;
}

Eigen::VectorXd to_vector(const std::vector<double>& values) {
  return Eigen::Map<const Eigen::VectorXd>(values.data(),
                                           static_cast<Eigen::Index>(values.size()));
}

EigengapKind parse_delta(const std::string& name) {
  if (name == "relative") return EigengapKind::Relative;
  if (name == "absolute") return EigengapKind::Absolute;
  throw std::invalid_argument("unknown delta '" + name + "' (expected relative|absolute)");
}

/// alpha flag accepts bic, aic or a literal constant.
struct AlphaFlag {
  eigencov::AlphaRule rule = eigencov::AlphaRule::Bic;
  double fixed = 0.0;

  static AlphaFlag parse(const std::string& text) {
    AlphaFlag a;
    if (text == "bic") {
      a.rule = eigencov::AlphaRule::Bic;
    } else if (text == "aic") {
      a.rule = eigencov::AlphaRule::Aic;
    } else {
      a.rule = eigencov::AlphaRule::Fixed;
      if (!parse_double_strict(text, a.fixed) || a.fixed < 0.0) {
        throw std::invalid_argument("alpha must be bic, aic or a non-negative number");
      }
    }
    return a;
  }

  double resolve(long n) const {
    switch (rule) {
      case eigencov::AlphaRule::Bic:
        return std::log(static_cast<double>(n));
      case eigencov::AlphaRule::Aic:
        return 2.0;
      case eigencov::AlphaRule::Fixed:
        return fixed;
    }
    return 0.0;
  }
};

eigencov::Dataset read_csv_dataset(const std::string& path, bool center) {
  std::ifstream in(path);
  if (!in) {
    throw std::invalid_argument("cannot open input file '" + path + "'");
  }
  std::vector<std::vector<double>> rows;
  std::string line;
  while (std::getline(in, line)) {
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line.empty()) continue;
    std::vector<double> row;
    std::stringstream ss(line);
    std::string token;
    while (std::getline(ss, token, ',')) {
      double v = 0.0;
      if (!parse_double_strict(token, v)) {
        throw std::invalid_argument("non-numeric field '" + token + "' in " + path);
      }
      row.push_back(v);
    }
    if (!rows.empty() && row.size() != rows.front().size()) {
      throw std::invalid_argument("ragged rows in " + path);
    }
    rows.push_back(std::move(row));
  }
  if (rows.empty()) {
    throw std::invalid_argument("no data rows in " + path);
  }
  Eigen::MatrixXd x(rows.size(), rows.front().size());
  for (std::size_t i = 0; i < rows.size(); ++i) {
    for (std::size_t j = 0; j < rows.front().size(); ++j) {
      x(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(j)) = rows[i][j];
    }
  }
  if (center) {
    x.rowwise() -= x.colwise().mean();
  }
  return eigencov::Dataset(std::move(x));
}

struct EstimateArgs {
  std::string input;
  std::string output;
  std::string method;
  std::string alpha = "bic";
  std::string delta = "relative";
  double eps = 1e-10;
  bool center = false;
  bool full = false;
};

int run_estimate(const EstimateArgs& args) {
  Method method;
  AlphaFlag alpha_flag;
  EigengapKind kind;
  std::optional<eigencov::Dataset> data;
  try {
    method = eigencov::method_from_name(args.method);
    alpha_flag = AlphaFlag::parse(args.alpha);
    kind = parse_delta(args.delta);
    data.emplace(read_csv_dataset(args.input, args.center));
  } catch (const std::exception& ex) {
    std::cerr << "error: " << ex.what() << "\n";
    return kExitBadInput;
  }

  const double alpha = alpha_flag.resolve(data->n());
  if (method == Method::Psa && data->p() > eigencov::kDefaultCompositionGuard) {
    std::cerr << "error: psa requires p <= " << eigencov::kDefaultCompositionGuard
              << " (got p = " << data->p() << ")\n";
    return kExitPsaGuard;
  }

  eigencov::SolverConfig cfg;
  cfg.eps = args.eps;

  std::optional<eigencov::CovarianceModel> model;
  try {
    switch (method) {
      case Method::Scm:
        model.emplace(eigencov::scm(*data));
        break;
      case Method::LedoitWolf:
        model.emplace(eigencov::ledoit_wolf(*data));
        break;
      case Method::Psa:
        model.emplace(eigencov::psa_exact(*data, alpha));
        break;
      case Method::Escp:
        model.emplace(eigencov::escp(*data, alpha, kind, cfg));
        break;
    }
  } catch (const std::invalid_argument& ex) {
    std::cerr << "error: " << ex.what() << "\n";
    return kExitBadInput;
  } catch (const std::exception& ex) {
    std::cerr << "error: estimation failed: " << ex.what() << "\n";
    return kExitSolverFailure;
  }

  nlohmann::json out;
  out["method"] = eigencov::method_name(method);
  out["n"] = data->n();
  out["p"] = data->p();
  out["alpha"] = alpha;
  out["eigenvalues"] = std::vector<double>(
      model->eigenvalues.data(), model->eigenvalues.data() + model->eigenvalues.size());
  out["composition"] = model->composition.parts();
  out["dim"] = model->dim();
  if (args.full) {
    std::vector<double> q;
    q.reserve(static_cast<std::size_t>(model->p()) * model->p());
    for (Eigen::Index i = 0; i < model->p(); ++i) {
      for (Eigen::Index j = 0; j < model->p(); ++j) {
        q.push_back(model->eigenvectors(i, j));
      }
    }
    out["eigenvectors"] = std::move(q);
  }
  try {
    eigencov::write_text_file(args.output, out.dump(2) + "\n");
  } catch (const std::exception& ex) {
    std::cerr << "error: " << ex.what() << "\n";
    return kExitBadInput;
  }
  return kExitOk;
}

struct ExperimentArgs {
  std::string preset;
  long n = 0;
  int p = 0;
  std::string spectrum;
  int reps = 10;
  std::uint64_t seed = 0;
  std::string methods = "scm,lw,psa,escp";
  std::string alpha = "bic";
  std::string delta = "relative";
  std::string outdir = ".";
  int jobs = 1;
};

Eigen::VectorXd load_spectrum_arg(const std::string& arg, int p) {
  std::vector<double> values;
  if (std::filesystem::exists(arg)) {
    std::ifstream in(arg);
    std::string token;
    while (in >> token) {
      std::stringstream ss(token);
      std::string field;
      while (std::getline(ss, field, ',')) {
        if (field.empty()) continue;
        double v = 0.0;
        if (!parse_double_strict(field, v)) {
          throw std::invalid_argument("non-numeric spectrum entry '" + field + "'");
        }
        values.push_back(v);
      }
    }
    if (values.empty()) {
      throw std::invalid_argument("spectrum file '" + arg + "' holds no values");
    }
  } else {
    values = parse_value_list(arg);
  }
  if (static_cast<int>(values.size()) != p) {
    throw std::invalid_argument("spectrum length " + std::to_string(values.size()) +
                                " does not match p = " + std::to_string(p));
  }
  Eigen::VectorXd v = to_vector(values);
  for (Eigen::Index j = 0; j < v.size(); ++j) {
    if (!(v[j] > 0.0) || (j > 0 && v[j - 1] < v[j])) {
      throw std::invalid_argument("spectrum must be ordered-decreasing and positive");
    }
  }
  return v;
}

int run_experiment(const ExperimentArgs& args) {
  eigencov::Scenario scenario;
  try {
    if (!args.preset.empty()) {
      if (args.preset.size() != 1) {
        throw std::invalid_argument("preset must be one of a, b, c");
      }
      scenario = eigencov::make_preset(args.preset[0]);
    } else {
      if (args.n < 1 || args.p < 1 || args.spectrum.empty()) {
        throw std::invalid_argument("without --preset, --n, --p and --spectrum are required");
      }
      scenario.name = "custom";
      scenario.n = args.n;
      scenario.p = args.p;
      scenario.population_spectrum = load_spectrum_arg(args.spectrum, args.p);
    }
    if (args.reps < 1) {
      throw std::invalid_argument("--reps must be >= 1");
    }
    if (args.jobs < 1) {
      throw std::invalid_argument("--jobs must be >= 1");
    }
    scenario.repetitions = args.reps;
    scenario.seed = args.seed;
    scenario.kind = parse_delta(args.delta);

    const AlphaFlag alpha_flag = AlphaFlag::parse(args.alpha);
    scenario.alpha_rule = alpha_flag.rule;
    scenario.alpha_fixed = alpha_flag.fixed;

    scenario.methods.clear();
    std::stringstream ss(args.methods);
    std::string token;
    while (std::getline(ss, token, ',')) {
      scenario.methods.push_back(eigencov::method_from_name(token));
    }
    if (scenario.methods.empty()) {
      throw std::invalid_argument("--methods must name at least one method");
    }
  } catch (const std::exception& ex) {
    std::cerr << "error: " << ex.what() << "\n";
    return kExitBadInput;
  }

  try {
    const eigencov::ScenarioResult result = eigencov::run_scenario(scenario, args.jobs);
    const std::filesystem::path dir(args.outdir);
    std::filesystem::create_directories(dir);
    eigencov::write_text_file((dir / "results.csv").string(),
                              eigencov::results_csv(result));
    eigencov::write_text_file((dir / "summary.json").string(),
                              eigencov::summary_json(result));
    eigencov::write_text_file(
        (dir / "scree.csv").string(),
        eigencov::scree_csv(eigencov::scree_data(result, scenario.population_spectrum)));
    std::cout << "scenario " << scenario.name << ": n=" << scenario.n
              << " p=" << scenario.p << " reps=" << scenario.repetitions
              << " alpha=" << result.alpha << "\n";
    std::cout << eigencov::summary_table(result);
    return kExitOk;
  } catch (const std::exception& ex) {
    std::cerr << "error: " << ex.what() << "\n";
    return 1;
  }
}

int run_pava(const std::string& values_arg, std::optional<double> eps) {
  std::vector<double> values;
  try {
    values = parse_value_list(values_arg);
    if (eps && (!(*eps > 0.0) || !(*eps < 1.0))) {
      throw std::invalid_argument("--eps must satisfy 0 < eps < 1");
    }
  } catch (const std::exception& ex) {
    std::cerr << "error: " << ex.what() << "\n";
    return kExitBadInput;
  }
  Eigen::VectorXd projected;
  if (eps) {
    projected = eigencov::project_box_monotone(to_vector(values), *eps).projected.values();
  } else {
    projected = eigencov::pava_decreasing(to_vector(values));
  }
  nlohmann::json out =
      std::vector<double>(projected.data(), projected.data() + projected.size());
  std::cout << out.dump() << "\n";
  return kExitOk;
}

int run_penalty(const std::string& values_arg, const std::string& delta) {
  Eigen::VectorXd lambda;
  EigengapKind kind;
  try {
    kind = parse_delta(delta);
    lambda = to_vector(parse_value_list(values_arg));
    eigencov::Spectrum check(lambda);  // ordered-decreasing positive required
  } catch (const std::exception& ex) {
    std::cerr << "error: " << ex.what() << "\n";
    return kExitBadInput;
  }
  const double value = eigencov::penalty_value(lambda, kind);
  const Eigen::VectorXd grad = eigencov::penalty_gradient(lambda, kind);
  nlohmann::json out;
  out["value"] = value;
  out["gradient"] = std::vector<double>(grad.data(), grad.data() + grad.size());
  std::cout << out.dump() << "\n";
  return kExitOk;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Covariance estimation via eigenvalue equalization: SCM, Ledoit-Wolf, "
               "exact stratified model selection (psa) and projected gradient descent "
               "on the monotone cone (escp)."};
  app.require_subcommand(1);

  EstimateArgs est;
  CLI::App* estimate = app.add_subcommand("estimate", "Fit one estimator to a CSV dataset");
  estimate->add_option("--input", est.input, "n x p CSV, no header, one sample per row")
      ->required();
  estimate->add_option("--method", est.method, "scm|lw|psa|escp")->required();
  estimate->add_option("--alpha", est.alpha, "bic|aic|<float> (default bic)");
  estimate->add_option("--delta", est.delta, "relative|absolute (default relative)");
  estimate->add_option("--eps", est.eps, "box bound for escp (default 1e-10)");
  estimate->add_flag("--center", est.center, "subtract the sample mean (divisor n)");
  estimate->add_flag("--full", est.full, "include eigenvectors (row-major) in the JSON");
  estimate->add_option("--output", est.output, "output model JSON path")->required();

  ExperimentArgs exp;
  CLI::App* experiment =
      app.add_subcommand("experiment", "Run a synthetic comparison of the estimators");
  experiment->add_option("--preset", exp.preset, "a|b|c");
  experiment->add_option("--n", exp.n, "samples per repetition");
  experiment->add_option("--p", exp.p, "dimension");
  experiment->add_option("--spectrum", exp.spectrum,
                         "population spectrum: comma list or file");
  experiment->add_option("--reps", exp.reps, "repetitions (default 10)");
  experiment->add_option("--seed", exp.seed, "RNG seed (default 0)");
  experiment->add_option("--methods", exp.methods, "comma list (default scm,lw,psa,escp)");
  experiment->add_option("--alpha", exp.alpha, "bic|aic|<float> (default bic)");
  experiment->add_option("--delta", exp.delta, "relative|absolute (default relative)");
  experiment->add_option("--outdir", exp.outdir, "output directory (default .)");
  experiment->add_option("--jobs", exp.jobs, "max concurrent fits (default 1)");

  std::string pava_values;
  std::optional<double> pava_eps;
  double pava_eps_raw = 0.0;
  CLI::App* pava = app.add_subcommand("pava", "Project values onto the decreasing cone");
  pava->add_option("--values", pava_values, "comma-separated values")->required();
  CLI::Option* eps_opt =
      pava->add_option("--eps", pava_eps_raw, "also clamp to [eps, 1/eps]");

  std::string penalty_values;
  std::string penalty_delta = "relative";
  CLI::App* penalty =
      app.add_subcommand("penalty", "Evaluate the eigengap penalty and its gradient");
  penalty->add_option("--values", penalty_values, "ordered-decreasing positive values")
      ->required();
  penalty->add_option("--delta", penalty_delta, "relative|absolute (default relative)");

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return kExitBadInput;
  }

  if (estimate->parsed()) return run_estimate(est);
  if (experiment->parsed()) return run_experiment(exp);
  if (pava->parsed()) {
    if (eps_opt->count() > 0) pava_eps = pava_eps_raw;
    return run_pava(pava_values, pava_eps);
  }
  if (penalty->parsed()) return run_penalty(penalty_values, penalty_delta);
  return kExitBadInput;
}
