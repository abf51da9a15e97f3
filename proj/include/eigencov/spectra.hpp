#pragma once

#include <Eigen/Core>

#include <functional>
#include <vector>

namespace eigencov {

inline constexpr int kDefaultCompositionGuard = 20;

/// Ordered-decreasing vector of strictly positive eigenvalues.
/// Validates on construction: length >= 1, every entry > 0, non-increasing.
class Spectrum {
public:
  explicit Spectrum(Eigen::VectorXd values);

  const Eigen::VectorXd& values() const { return values_; }
  Eigen::Index size() const { return values_.size(); }
  double operator[](Eigen::Index i) const { return values_[i]; }

private:
  Eigen::VectorXd values_;
};

/// Spectrum constrained to the box [eps, 1/eps].
class BoxedSpectrum {
public:
  BoxedSpectrum(Eigen::VectorXd values, double eps);

  const Eigen::VectorXd& values() const { return values_; }
  double eps() const { return eps_; }
  Eigen::Index size() const { return values_.size(); }

private:
  Eigen::VectorXd values_;
  double eps_;
};

/// Integer tuple (gamma_1, ..., gamma_d) of block sizes summing to the
/// ambient dimension p. Encodes eigenvalue multiplicities from the largest
/// eigenvalue block down.
class Composition {
public:
  Composition(std::vector<int> parts, int ambient);

  const std::vector<int>& parts() const { return parts_; }
  int ambient() const { return ambient_; }
  int block_count() const { return static_cast<int>(parts_.size()); }

  bool operator==(const Composition& other) const {
    return ambient_ == other.ambient_ && parts_ == other.parts_;
  }

private:
  std::vector<int> parts_;
  int ambient_;
};

/// Dimension of the manifold of symmetric positive-definite matrices whose
/// eigenvalue multiplicities are gamma: d + (p^2 - sum gamma_k^2) / 2.
long stratum_dimension(const Composition& gamma);

/// Visits every composition of p exactly once, in lexicographic order by
/// parts: (1,1,1), (1,2), (2,1), (3) for p = 3. Streaming form so callers
/// scoring all 2^(p-1) candidates need not materialize them.
void for_each_composition(int p, const std::function<void(const Composition&)>& visit,
                          int p_max_guard = kDefaultCompositionGuard);

/// All 2^(p-1) compositions of p in lexicographic order by parts.
/// Throws std::invalid_argument when p exceeds the guard (exponential
/// enumeration) or p < 1.
std::vector<Composition> enumerate_compositions(int p,
                                                int p_max_guard = kDefaultCompositionGuard);

/// Groups adjacent eigenvalues into blocks when the relative gap
/// (l_s - l_{s+1}) / l_s is <= rel_tol; returns block sizes. With
/// rel_tol = 0 the blocks are exact-equality runs. Zero entries are grouped
/// by exact equality (the relative gap is undefined there).
Composition composition_of(const Eigen::VectorXd& spectrum, double rel_tol);
Composition composition_of(const Spectrum& spectrum, double rel_tol);

/// Number of covariance parameters written as eigengap counts:
/// 1 + #{s < p : l_s != l_{s+1}} + #{s < t : l_s != l_t}.
/// Equals stratum_dimension(composition_of(spectrum, 0)).
long l0_dimension(const Spectrum& spectrum);

/// Same count through a caller-supplied gap function with
/// delta(a, b) = 0 iff a = b.
long l0_dimension(const Spectrum& spectrum,
                  const std::function<double(double, double)>& delta);

}  // namespace eigencov
