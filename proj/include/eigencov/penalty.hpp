#pragma once

#include <Eigen/Core>

namespace eigencov {

/// Eigengap measure on ordered pairs a >= b > 0.
/// Relative: (a - b) / a, scale-invariant. Absolute: a - b.
/// Both vanish iff a = b and extend smoothly across ties, so the closed-form
/// gradient is valid on the whole ordered domain.
enum class EigengapKind { Relative, Absolute };

double eigengap(double a, double b, EigengapKind kind);

/// Sum over s of delta(l_s, l_{s+1}) + sum_{t > s} delta(l_s, l_t).
/// Adjacent pairs contribute twice (once in each sum); the double count is
/// part of the penalty definition. O(p^2). Input is expected
/// ordered-decreasing positive; gaps use the index orientation, so slightly
/// perturbed inputs evaluate the smooth extension.
double penalty_value(const Eigen::VectorXd& lambda, EigengapKind kind);

/// Gradient of penalty_value with respect to lambda. Relative gaps:
/// d/da = b/a^2, d/db = -1/a. Absolute gaps: d/da = 1, d/db = -1.
Eigen::VectorXd penalty_gradient(const Eigen::VectorXd& lambda, EigengapKind kind);

}  // namespace eigencov
