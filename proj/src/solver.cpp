#include "eigencov/solver.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>
#include <stdexcept>

namespace eigencov {

namespace {

bool close_enough(double prev, double next, double rel_tol) {
  return std::abs(prev - next) <= rel_tol * (1.0 + std::abs(prev));
}

}  // namespace

std::pair<BoxedSpectrum, SolverTrace> escp_spectrum(const Eigen::VectorXd& ell, long n,
                                                    double alpha, EigengapKind kind,
                                                    const SolverConfig& cfg) {
  if (n < 1) {
    throw std::invalid_argument("sample count must be >= 1");
  }
  if (alpha < 0.0) {
    throw std::invalid_argument("alpha must be >= 0");
  }
  for (Eigen::Index j = 0; j + 1 < ell.size(); ++j) {
    if (ell[j] < ell[j + 1]) {
      throw std::invalid_argument("sample spectrum must be non-increasing");
    }
  }
  if (ell.size() >= 1 && ell[ell.size() - 1] < 0.0) {
    throw std::invalid_argument("sample spectrum must be non-negative");
  }

  const GaussianObjective obj{ell, n, alpha, kind};

  // Initialization: projected sample spectrum, so n < p (zero eigenvalues)
  // starts feasible.
  ProjectionResult init = project_box_monotone(ell, cfg.eps);
  Eigen::VectorXd lambda = init.projected.values();
  double f = objective(lambda, obj);

  SolverTrace trace;
  trace.initial_objective = f;
  trace.status = SolveStatus::MaxIterations;

  double prev_step = cfg.initial_step;
  for (int iter = 0; iter < cfg.max_iters; ++iter) {
    const Eigen::VectorXd grad = objective_gradient(lambda, obj);
    if (!grad.allFinite()) {
      std::ostringstream msg;
      msg << "non-finite gradient at iteration " << iter << " (alpha=" << alpha
          << ", n=" << n << ", p=" << lambda.size() << ")";
      throw std::runtime_error(msg.str());
    }

    // Warm-started backtracking: resume near the last accepted step instead
    // of re-shrinking from initial_step every iteration.
    double beta = std::min(cfg.initial_step, 4.0 * prev_step);
    bool accepted = false;
    Eigen::VectorXd candidate;
    int pooled_blocks = 0;
    double f_candidate = 0.0;
    int backtracks = 0;
    bool fixed_point = false;

    for (; backtracks <= cfg.max_backtracks; ++backtracks) {
      ProjectionResult proj = project_box_monotone(lambda - beta * grad, cfg.eps);
      candidate = proj.projected.values();
      if ((candidate.array() == lambda.array()).all()) {
        // The projected step does not move: stationary for this beta, and
        // shrinking beta only pins it further.
        fixed_point = true;
        break;
      }
      const double decrease = grad.dot(lambda - candidate);
      f_candidate = objective(candidate, obj);
      if (decrease >= 0.0 && f_candidate <= f - cfg.armijo_c * decrease) {
        accepted = true;
        pooled_blocks = proj.blocks.block_count();
        break;
      }
      beta *= cfg.backtrack_factor;
    }

    if (fixed_point) {
      trace.status = SolveStatus::Converged;
      break;
    }
    if (!accepted) {
      trace.status = SolveStatus::LineSearchStalled;
      break;
    }

    lambda = std::move(candidate);
    trace.iterations.push_back(IterationRecord{f_candidate, beta, backtracks, pooled_blocks});
    prev_step = beta;

    const bool done = close_enough(f, f_candidate, cfg.rel_obj_tol);
    f = f_candidate;
    if (done) {
      trace.status = SolveStatus::Converged;
      break;
    }
  }

  return {BoxedSpectrum(std::move(lambda), cfg.eps), std::move(trace)};
}

CovarianceModel estimate_covariance(const Dataset& data, double alpha, EigengapKind kind,
                                    const SolverConfig& cfg) {
  const Eigen::MatrixXd s = sample_covariance(data);
  EigenDecomposition eig = eigh_descending(s);
  // Rounding can leave tiny negative eigenvalues on a PSD matrix.
  Eigen::VectorXd ell = eig.eigenvalues.cwiseMax(0.0);
  auto [spectrum, trace] = escp_spectrum(ell, data.n(), alpha, kind, cfg);
  Eigen::VectorXd lambda = spectrum.values();
  Composition composition = composition_of(lambda, 1e-12);
  return CovarianceModel{std::move(eig.eigenvectors), std::move(lambda),
                         std::move(composition), Method::Escp};
}

}  // namespace eigencov
