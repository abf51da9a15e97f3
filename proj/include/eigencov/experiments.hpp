#pragma once

#include <Eigen/Core>

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "eigencov/estimators.hpp"
#include "eigencov/model.hpp"
#include "eigencov/penalty.hpp"
#include "eigencov/solver.hpp"

namespace eigencov {

enum class AlphaRule { Bic, Aic, Fixed };

/// One synthetic setting: population covariance diag(population_spectrum)
/// (optionally rotated by a seeded orthogonal frame), n samples per
/// repetition, and the estimators to compare.
struct Scenario {
  std::string name = "custom";
  long n = 1;
  int p = 1;
  Eigen::VectorXd population_spectrum;  // length p, ordered-decreasing positive
  int repetitions = 10;
  std::uint64_t seed = 0;
  AlphaRule alpha_rule = AlphaRule::Bic;
  double alpha_fixed = 0.0;
  std::vector<Method> methods;
  EigengapKind kind = EigengapKind::Relative;
  int psa_guard = kDefaultCompositionGuard;
  SolverConfig solver;
  bool rotate = false;  // rotate the population by a seeded orthogonal matrix
};

/// The three built-in settings:
///   a: n=40,  p=20,  identity spectrum
///   b: n=200, p=100, identity spectrum
///   c: n=400, p=200, spectrum (10 x80, 1 x80, 0.1 x40)
Scenario make_preset(char which);

double resolve_alpha(const Scenario& scenario);

/// Deterministic counter-based Gaussian stream: the value at (key, index)
/// never depends on evaluation order, so repetitions parallelize race-free.
double gaussian_draw(std::uint64_t key, std::uint64_t index);
std::uint64_t stream_key(std::uint64_t seed, std::uint64_t rep_index);

/// X = Z diag(sqrt(population_spectrum)) with Z i.i.d. standard normal keyed
/// on (seed, rep_index); zero mean. Bitwise identical for identical inputs.
Dataset sample_gaussian(const Scenario& scenario, int rep_index);

/// Squared Frobenius distance to the diagonal population covariance,
/// divided by p.
double frobenius_error(const CovarianceModel& model,
                       const Eigen::VectorXd& population_spectrum);
/// Same against an arbitrary dense population covariance.
double frobenius_error_dense(const CovarianceModel& model,
                             const Eigen::MatrixXd& population);

/// One (method, repetition) fit.
struct CellResult {
  Method method = Method::Scm;
  int rep = 0;
  bool ok = false;
  std::string error;
  double lp_raw = 0.0;
  double lp_per_np = 0.0;  // lp_raw / (n p) * 100
  double lf = 0.0;
  long dim = 0;
  double seconds = 0.0;
  Eigen::VectorXd spectrum;
};

struct MetricSummary {
  double mean = 0.0;
  double median = 0.0;
  double stddev = 0.0;
};

struct MethodSummary {
  Method method = Method::Scm;
  bool available = true;  // false when PSA is excluded by the guard
  int fits = 0;
  int errors = 0;
  MetricSummary lp_raw, lp_per_np, lp_table, lf, dim, seconds;
};

struct ScenarioResult {
  Scenario scenario;
  double alpha = 0.0;
  std::vector<CellResult> cells;  // ordered by (method, rep)
  std::vector<MethodSummary> summaries;

  const MethodSummary* summary_for(Method m) const;
  std::vector<const CellResult*> cells_for(Method m) const;
};

/// Runs every requested (method, repetition) pair. Individual fit failures
/// are recorded per cell and do not abort the sweep. PSA is marked
/// unavailable (no cells) when p exceeds the guard. With jobs > 1 the cells
/// run concurrently; outputs are independent of scheduling.
ScenarioResult run_scenario(const Scenario& scenario, int jobs = 1);

struct ScreeRow {
  std::string series;
  int index = 0;
  double eigenvalue = 0.0;
};

/// Index-vs-eigenvalue series for the population spectrum and the mean
/// estimated spectrum of each method, suitable for plotting.
std::vector<ScreeRow> scree_data(const ScenarioResult& result,
                                 const Eigen::VectorXd& population_spectrum);

/// results CSV: columns scenario,method,rep,Lp_raw,Lp_per_np,LF,dim,seconds.
std::string results_csv(const ScenarioResult& result);
/// scree CSV: columns series,index,eigenvalue.
std::string scree_csv(const std::vector<ScreeRow>& rows);
/// Scenario echo plus per-method mean/median/std of every metric.
std::string summary_json(const ScenarioResult& result);
/// Human-readable per-method mean table.
std::string summary_table(const ScenarioResult& result);

void write_text_file(const std::string& path, const std::string& content);

}  // namespace eigencov
