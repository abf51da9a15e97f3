#pragma once

#include <Eigen/Core>

#include <utility>
#include <vector>

#include "eigencov/gaussian.hpp"
#include "eigencov/isotonic.hpp"
#include "eigencov/model.hpp"
#include "eigencov/penalty.hpp"

namespace eigencov {

/// Projected gradient descent parameters. The backtracking line search and
/// the stopping rule are artifact choices; none of these constants alter the
/// objective being minimized.
struct SolverConfig {
  double eps = 1e-10;          // box bound of the constraint cone
  int max_iters = 5000;
  double rel_obj_tol = 1e-10;  // relative objective-change stopping rule
  double initial_step = 1.0;
  double backtrack_factor = 0.5;
  double armijo_c = 1e-4;
  int max_backtracks = 60;
};

enum class SolveStatus {
  Converged,          // relative objective change below tolerance, or fixed point
  MaxIterations,      // budget exhausted; result is still feasible and monotone
  LineSearchStalled,  // no acceptable step within max_backtracks
};

struct IterationRecord {
  double objective;  // value after the accepted step
  double step;       // accepted step size beta
  int backtracks;    // shrinks performed before acceptance
  int blocks;        // pooled blocks of the projected iterate
};

struct SolverTrace {
  double initial_objective = 0.0;
  std::vector<IterationRecord> iterations;  // accepted steps only, objective non-increasing
  SolveStatus status = SolveStatus::Converged;

  bool converged() const { return status != SolveStatus::MaxIterations; }
};

/// Minimizes the penalized spectral objective over the bounded monotone cone
/// by projected gradient descent with a backtracking projected line search.
/// Starts from the projection of the sample spectrum (which handles zero
/// sample eigenvalues), iterates lambda <- proj(lambda - beta g) with beta
/// accepted under the sufficient-decrease rule
///   f(proj) <= f(lambda) - armijo_c * <g, lambda - proj>,
/// and stops on relative objective change below rel_obj_tol. Deterministic.
/// Throws std::runtime_error when the gradient turns NaN/Inf.
std::pair<BoxedSpectrum, SolverTrace> escp_spectrum(const Eigen::VectorXd& ell, long n,
                                                    double alpha, EigengapKind kind,
                                                    const SolverConfig& cfg = {});

/// Sample covariance, ordered eigendecomposition, spectral solve, and
/// reassembly Sigma = Q diag(lambda) Q^T. The eigenvector frame of S is kept
/// untouched; only the spectrum moves.
CovarianceModel estimate_covariance(const Dataset& data, double alpha, EigengapKind kind,
                                    const SolverConfig& cfg = {});

}  // namespace eigencov
