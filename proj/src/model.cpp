#include "eigencov/model.hpp"

#include <Eigen/Eigenvalues>

#include <stdexcept>

namespace eigencov {

std::string method_name(Method m) {
  switch (m) {
    case Method::Scm:
      return "scm";
    case Method::LedoitWolf:
      return "lw";
    case Method::Psa:
      return "psa";
    case Method::Escp:
      return "escp";
  }
  throw std::logic_error("unknown method");
}

Method method_from_name(const std::string& name) {
  if (name == "scm") return Method::Scm;
  if (name == "lw") return Method::LedoitWolf;
  if (name == "psa") return Method::Psa;
  if (name == "escp") return Method::Escp;
  throw std::invalid_argument("unknown method '" + name + "' (expected scm|lw|psa|escp)");
}

Dataset::Dataset(Eigen::MatrixXd x) : x_(std::move(x)) {
  if (x_.rows() < 1 || x_.cols() < 1) {
    throw std::invalid_argument("dataset must have n >= 1 rows and p >= 1 columns");
  }
  if (!x_.allFinite()) {
    throw std::invalid_argument("dataset entries must be finite");
  }
}

Eigen::MatrixXd sample_covariance(const Dataset& data) {
  const double n = static_cast<double>(data.n());
  return (data.x().transpose() * data.x()) / n;
}

EigenDecomposition eigh_descending(const Eigen::MatrixXd& symmetric) {
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> solver(symmetric);
  if (solver.info() != Eigen::Success) {
    throw std::runtime_error("eigendecomposition failed");
  }
  const Eigen::Index p = symmetric.rows();
  EigenDecomposition out;
  out.eigenvalues = solver.eigenvalues().reverse();
  out.eigenvectors.resize(p, p);
  for (Eigen::Index j = 0; j < p; ++j) {
    out.eigenvectors.col(j) = solver.eigenvectors().col(p - 1 - j);
  }
  return out;
}

Eigen::MatrixXd CovarianceModel::matrix() const {
  return eigenvectors * eigenvalues.asDiagonal() * eigenvectors.transpose();
}

}  // namespace eigencov
