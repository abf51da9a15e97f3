#pragma once

#include <Eigen/Core>

#include "eigencov/spectra.hpp"

namespace eigencov {

/// Result of projecting onto the bounded monotone cone
/// {1/eps >= y_1 >= ... >= y_p >= eps}.
struct ProjectionResult {
  BoxedSpectrum projected;
  Composition blocks;  // exact-equality runs of the projected vector
  int clipped_low = 0;
  int clipped_high = 0;
};

/// Euclidean projection of x onto the non-increasing cone
/// {y : y_1 >= y_2 >= ... >= y_p}. Pool Adjacent Violators, single forward
/// pass with back-merging, O(p). Output is piecewise constant with block
/// values equal to block means of x. Already-feasible inputs are returned
/// bit-for-bit unchanged.
Eigen::VectorXd pava_decreasing(const Eigen::VectorXd& x);

/// Exact Euclidean projection onto the box-bounded monotone cone:
/// PAVA followed by clamping to [eps, 1/eps] (exact for interval
/// constraints). Requires 0 < eps < 1.
ProjectionResult project_box_monotone(const Eigen::VectorXd& x, double eps);

}  // namespace eigencov
