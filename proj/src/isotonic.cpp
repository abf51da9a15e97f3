#include "eigencov/isotonic.hpp"

#include <cmath>
#include <stdexcept>
#include <vector>

namespace eigencov {

Eigen::VectorXd pava_decreasing(const Eigen::VectorXd& x) {
  const Eigen::Index p = x.size();
  if (p < 1) {
    throw std::invalid_argument("pava_decreasing requires length >= 1");
  }
  if (!x.allFinite()) {
    throw std::invalid_argument("pava_decreasing requires finite entries");
  }

  // Stack of merged blocks. Means stay exact on feasible inputs because a
  // singleton block's mean is its entry and ties are never merged.
  std::vector<double> sum;
  std::vector<double> mean;
  std::vector<Eigen::Index> len;
  sum.reserve(p);
  mean.reserve(p);
  len.reserve(p);

  for (Eigen::Index i = 0; i < p; ++i) {
    sum.push_back(x[i]);
    mean.push_back(x[i]);
    len.push_back(1);
    // Merge while the ordering y_prev >= y_cur is strictly violated.
    while (sum.size() >= 2 && mean[mean.size() - 2] < mean.back()) {
      const double s = sum[sum.size() - 2] + sum.back();
      const Eigen::Index l = len[len.size() - 2] + len.back();
      sum.pop_back();
      mean.pop_back();
      len.pop_back();
      sum.back() = s;
      len.back() = l;
      mean.back() = s / static_cast<double>(l);
    }
  }

  Eigen::VectorXd out(p);
  Eigen::Index pos = 0;
  for (std::size_t b = 0; b < mean.size(); ++b) {
    for (Eigen::Index k = 0; k < len[b]; ++k) {
      out[pos++] = mean[b];
    }
  }
  return out;
}

ProjectionResult project_box_monotone(const Eigen::VectorXd& x, double eps) {
  if (!(eps > 0.0) || !(eps < 1.0)) {
    throw std::invalid_argument("project_box_monotone requires 0 < eps < 1");
  }
  Eigen::VectorXd y = pava_decreasing(x);
  const double hi = 1.0 / eps;
  int clipped_low = 0;
  int clipped_high = 0;
  for (Eigen::Index i = 0; i < y.size(); ++i) {
    if (y[i] < eps) {
      y[i] = eps;
      ++clipped_low;
    } else if (y[i] > hi) {
      y[i] = hi;
      ++clipped_high;
    }
  }
  Composition blocks = composition_of(y, 0.0);
  return ProjectionResult{BoxedSpectrum(std::move(y), eps), std::move(blocks), clipped_low,
                          clipped_high};
}

}  // namespace eigencov
