#include "eigencov/penalty.hpp"

#include <stdexcept>

namespace eigencov {

double eigengap(double a, double b, EigengapKind kind) {
  switch (kind) {
    case EigengapKind::Relative:
      return (a - b) / a;
    case EigengapKind::Absolute:
      return a - b;
  }
  throw std::logic_error("unknown eigengap kind");
}

double penalty_value(const Eigen::VectorXd& lambda, EigengapKind kind) {
  const Eigen::Index p = lambda.size();
  double total = 0.0;
  for (Eigen::Index s = 0; s + 1 < p; ++s) {
    total += eigengap(lambda[s], lambda[s + 1], kind);
    for (Eigen::Index t = s + 1; t < p; ++t) {
      total += eigengap(lambda[s], lambda[t], kind);
    }
  }
  return total;
}

Eigen::VectorXd penalty_gradient(const Eigen::VectorXd& lambda, EigengapKind kind) {
  const Eigen::Index p = lambda.size();
  Eigen::VectorXd grad = Eigen::VectorXd::Zero(p);
  for (Eigen::Index s = 0; s + 1 < p; ++s) {
    for (Eigen::Index t = s + 1; t < p; ++t) {
      const double w = (t == s + 1) ? 2.0 : 1.0;  // adjacent pairs appear in both sums
      if (kind == EigengapKind::Relative) {
        grad[s] += w * lambda[t] / (lambda[s] * lambda[s]);
        grad[t] -= w / lambda[s];
      } else {
        grad[s] += w;
        grad[t] -= w;
      }
    }
  }
  return grad;
}

}  // namespace eigencov
