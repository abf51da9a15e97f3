#include "eigencov/gaussian.hpp"

#include <cmath>
#include <numbers>
#include <stdexcept>

namespace eigencov {

double objective(const Eigen::VectorXd& lambda, const GaussianObjective& obj) {
  if (lambda.size() != obj.sample_spectrum.size()) {
    throw std::invalid_argument("lambda and sample spectrum sizes differ");
  }
  double likelihood = 0.0;
  for (Eigen::Index j = 0; j < lambda.size(); ++j) {
    likelihood += std::log(lambda[j]) + obj.sample_spectrum[j] / lambda[j];
  }
  const double weight = obj.alpha / static_cast<double>(obj.n);
  return likelihood + weight * penalty_value(lambda, obj.kind);
}

Eigen::VectorXd objective_gradient(const Eigen::VectorXd& lambda,
                                   const GaussianObjective& obj) {
  if (lambda.size() != obj.sample_spectrum.size()) {
    throw std::invalid_argument("lambda and sample spectrum sizes differ");
  }
  const double weight = obj.alpha / static_cast<double>(obj.n);
  Eigen::VectorXd grad = penalty_gradient(lambda, obj.kind) * weight;
  for (Eigen::Index j = 0; j < lambda.size(); ++j) {
    grad[j] += (lambda[j] - obj.sample_spectrum[j]) / (lambda[j] * lambda[j]);
  }
  return grad;
}

double penalized_likelihood_score(const CovarianceModel& model, const Dataset& data,
                                  double alpha) {
  const Eigen::Index p = model.p();
  if (data.p() != p) {
    throw std::invalid_argument("model and dataset dimensions differ");
  }
  if ((model.eigenvalues.array() <= 0.0).any()) {
    throw std::invalid_argument("penalized_likelihood_score requires a non-singular model");
  }
  const Eigen::MatrixXd s = sample_covariance(data);
  // tr(diag(l)^-1 Q^T S Q) needs only the diagonal of the rotated matrix.
  double trace_term = 0.0;
  for (Eigen::Index j = 0; j < p; ++j) {
    const Eigen::VectorXd q = model.eigenvectors.col(j);
    trace_term += q.dot(s * q) / model.eigenvalues[j];
  }
  double log_det = 0.0;
  for (Eigen::Index j = 0; j < p; ++j) {
    log_det += std::log(model.eigenvalues[j]);
  }
  const double n = static_cast<double>(data.n());
  const double two_pi = 2.0 * std::numbers::pi;
  const double neg2_log_lik =
      n * (static_cast<double>(p) * std::log(two_pi) + log_det + trace_term);
  return neg2_log_lik + alpha * static_cast<double>(model.dim());
}

}  // namespace eigencov
