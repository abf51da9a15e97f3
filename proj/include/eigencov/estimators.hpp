#pragma once

#include "eigencov/model.hpp"
#include "eigencov/solver.hpp"

namespace eigencov {

/// Sample covariance matrix S = (1/n) X^T X, eigendecomposed descending.
/// Composition is the exact-equality runs of the spectrum (generically all
/// singletons).
CovarianceModel scm(const Dataset& data);

/// Linear shrinkage of S toward m I with the analytically estimated
/// intensity (zero-mean convention):
///   m = tr(S)/p, d^2 = |S - mI|_F^2 / p,
///   bbar^2 = (1/n^2) sum_k |x_k x_k^T - S|_F^2 / p,
///   b^2 = min(bbar^2, d^2), a^2 = d^2 - b^2,
///   Sigma = (b^2/d^2) m I + (a^2/d^2) S.
/// Shares S's eigenvectors; the eigenvalue map is affine and
/// order-preserving. Degenerate d^2 = 0 returns S unchanged. Requires n >= 2.
CovarianceModel ledoit_wolf(const Dataset& data);

/// Exact stratified model selection: enumerates all 2^(p-1) compositions,
/// block-averages the sample eigenvalues per candidate, scores each with the
/// exact penalized likelihood -2 ln L + alpha * dim, and returns the argmin.
/// Ties break toward smaller dimension, then lexicographically smaller
/// parts. Throws when p exceeds the guard.
CovarianceModel psa_exact(const Dataset& data, double alpha,
                          int p_max_guard = kDefaultCompositionGuard);

/// The l1-relaxed estimator: delegates to the projected gradient solver.
CovarianceModel escp(const Dataset& data, double alpha, EigengapKind kind,
                     const SolverConfig& cfg = {});

}  // namespace eigencov
