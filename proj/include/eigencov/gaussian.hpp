#pragma once

#include <Eigen/Core>

#include "eigencov/model.hpp"
#include "eigencov/penalty.hpp"

namespace eigencov {

/// The spectral penalized objective sum_j (ln l_j + ell_j / l_j)
/// + (alpha/n) * penalty. Sample eigenvalues ell may contain zeros
/// (n < p); the objective stays finite for lambda bounded below.
struct GaussianObjective {
  Eigen::VectorXd sample_spectrum;  // non-increasing, entries >= 0
  long n = 1;
  double alpha = 0.0;
  EigengapKind kind = EigengapKind::Relative;
};

double objective(const Eigen::VectorXd& lambda, const GaussianObjective& obj);

/// Entry j: (lambda_j - ell_j) / lambda_j^2 + (alpha/n) * penalty gradient.
Eigen::VectorXd objective_gradient(const Eigen::VectorXd& lambda,
                                   const GaussianObjective& obj);

/// Full unnormalized model-selection score
///   -2 ln L + alpha * dim
///     = n (p ln(2 pi) + sum_j ln l_j + tr(diag(l)^-1 Q^T S Q)) + alpha * dim,
/// with dim taken from the model's reported composition. Throws when the
/// model is singular (any eigenvalue <= 0).
double penalized_likelihood_score(const CovarianceModel& model, const Dataset& data,
                                  double alpha);

}  // namespace eigencov
