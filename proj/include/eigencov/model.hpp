#pragma once

#include <Eigen/Core>

#include <string>

#include "eigencov/spectra.hpp"

namespace eigencov {

enum class Method { Scm, LedoitWolf, Psa, Escp };

std::string method_name(Method m);
Method method_from_name(const std::string& name);

/// n x p sample matrix, rows are samples. Zero-mean generation is assumed;
/// centering, when requested, happens at load time.
class Dataset {
public:
  explicit Dataset(Eigen::MatrixXd x);

  const Eigen::MatrixXd& x() const { return x_; }
  Eigen::Index n() const { return x_.rows(); }
  Eigen::Index p() const { return x_.cols(); }

private:
  Eigen::MatrixXd x_;
};

/// S = (1/n) X^T X under the row-sample orientation.
Eigen::MatrixXd sample_covariance(const Dataset& data);

/// Eigendecomposition of a symmetric matrix with eigenvalues sorted
/// descending and columns of the frame matched to that order.
struct EigenDecomposition {
  Eigen::VectorXd eigenvalues;
  Eigen::MatrixXd eigenvectors;
};
EigenDecomposition eigh_descending(const Eigen::MatrixXd& symmetric);

/// Estimated covariance in spectral form: Sigma = Q diag(lambda) Q^T with Q
/// orthogonal and lambda ordered-decreasing, plus the reported eigenvalue
/// multiplicities.
struct CovarianceModel {
  Eigen::MatrixXd eigenvectors;  // p x p orthogonal frame
  Eigen::VectorXd eigenvalues;   // descending, >= 0
  Composition composition;
  Method method;

  Eigen::Index p() const { return eigenvalues.size(); }
  long dim() const { return stratum_dimension(composition); }
  Eigen::MatrixXd matrix() const;
};

}  // namespace eigencov
