#include "eigencov/estimators.hpp"

#include <cmath>
#include <limits>
#include <numbers>
#include <stdexcept>
#include <utility>
#include <vector>

namespace eigencov {

namespace {

Eigen::VectorXd clamped_sample_spectrum(const EigenDecomposition& eig) {
  return eig.eigenvalues.cwiseMax(0.0);
}

}  // namespace

CovarianceModel scm(const Dataset& data) {
  EigenDecomposition eig = eigh_descending(sample_covariance(data));
  Eigen::VectorXd ell = clamped_sample_spectrum(eig);
  Composition composition = composition_of(ell, 0.0);
  return CovarianceModel{std::move(eig.eigenvectors), std::move(ell), std::move(composition),
                         Method::Scm};
}

CovarianceModel ledoit_wolf(const Dataset& data) {
  if (data.n() < 2) {
    throw std::invalid_argument("ledoit_wolf requires n >= 2");
  }
  const Eigen::MatrixXd s = sample_covariance(data);
  const double n = static_cast<double>(data.n());
  const double p = static_cast<double>(data.p());

  const double m = s.trace() / p;
  Eigen::MatrixXd centered = s;
  centered.diagonal().array() -= m;
  const double d2 = centered.squaredNorm() / p;

  if (d2 == 0.0) {
    // S is already isotropic; nothing to shrink.
    CovarianceModel model = scm(data);
    model.method = Method::LedoitWolf;
    return model;
  }

  // sum_k |x_k x_k^T - S|_F^2 = sum_k |x_k|^4 - n |S|_F^2 since sum x_k x_k^T = nS.
  const double sum_fourth = data.x().rowwise().squaredNorm().array().square().sum();
  const double bbar2 = (sum_fourth - n * s.squaredNorm()) / (n * n * p);
  const double b2 = std::min(bbar2, d2);
  const double a2 = d2 - b2;

  EigenDecomposition eig = eigh_descending(s);
  Eigen::VectorXd ell = clamped_sample_spectrum(eig);
  Eigen::VectorXd shrunk = (a2 / d2) * ell;
  shrunk.array() += (b2 / d2) * m;
  Composition composition = composition_of(shrunk, 1e-12);
  return CovarianceModel{std::move(eig.eigenvectors), std::move(shrunk),
                         std::move(composition), Method::LedoitWolf};
}

CovarianceModel psa_exact(const Dataset& data, double alpha, int p_max_guard) {
  const int p = static_cast<int>(data.p());
  if (p > p_max_guard) {
    throw std::invalid_argument("psa_exact: p = " + std::to_string(p) +
                                " exceeds the exhaustive-enumeration guard " +
                                std::to_string(p_max_guard));
  }
  EigenDecomposition eig = eigh_descending(sample_covariance(data));
  const Eigen::VectorXd ell = clamped_sample_spectrum(eig);

  std::vector<double> prefix(static_cast<std::size_t>(p) + 1, 0.0);
  for (int j = 0; j < p; ++j) {
    prefix[j + 1] = prefix[j] + ell[j];
  }

  const double n = static_cast<double>(data.n());
  const double const_term =
      n * static_cast<double>(p) * (std::log(2.0 * std::numbers::pi) + 1.0);

  // For block-averaged spectra the trace term collapses to p exactly, so the
  // score per candidate only needs the block log-means.
  double best_score = std::numeric_limits<double>::infinity();
  long best_dim = std::numeric_limits<long>::max();
  std::vector<int> best_parts;

  for_each_composition(
      p,
      [&](const Composition& gamma) {
        double log_term = 0.0;
        int start = 0;
        for (int part : gamma.parts()) {
          const double mean = (prefix[start + part] - prefix[start]) / part;
          if (!(mean > 0.0)) {
            log_term = std::numeric_limits<double>::infinity();
            break;
          }
          log_term += part * std::log(mean);
          start += part;
        }
        if (!std::isfinite(log_term)) {
          return;  // stratum infeasible: a block of zero sample eigenvalues
        }
        const long dim = stratum_dimension(gamma);
        const double score = const_term + n * log_term + alpha * static_cast<double>(dim);
        if (score < best_score || (score == best_score && dim < best_dim)) {
          best_score = score;
          best_dim = dim;
          best_parts = gamma.parts();
        }
      },
      p_max_guard);

  if (best_parts.empty()) {
    throw std::runtime_error("psa_exact: every stratum was infeasible (all-zero spectrum?)");
  }

  Composition gamma(best_parts, p);
  Eigen::VectorXd averaged(p);
  int start = 0;
  for (int part : gamma.parts()) {
    const double mean = (prefix[start + part] - prefix[start]) / part;
    for (int j = 0; j < part; ++j) {
      averaged[start + j] = mean;
    }
    start += part;
  }
  return CovarianceModel{std::move(eig.eigenvectors), std::move(averaged), std::move(gamma),
                         Method::Psa};
}

CovarianceModel escp(const Dataset& data, double alpha, EigengapKind kind,
                     const SolverConfig& cfg) {
  return estimate_covariance(data, alpha, kind, cfg);
}

}  // namespace eigencov
