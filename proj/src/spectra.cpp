#include "eigencov/spectra.hpp"

#include <cmath>
#include <stdexcept>
#include <string>

namespace eigencov {

namespace {

void check_ordered_positive(const Eigen::VectorXd& v) {
  if (v.size() < 1) {
    throw std::invalid_argument("spectrum must have length >= 1");
  }
  for (Eigen::Index i = 0; i < v.size(); ++i) {
    if (!(v[i] > 0.0) || !std::isfinite(v[i])) {
      throw std::invalid_argument("spectrum entries must be finite and strictly positive");
    }
    if (i > 0 && v[i - 1] < v[i]) {
      throw std::invalid_argument("spectrum must be non-increasing");
    }
  }
}

}  // namespace

Spectrum::Spectrum(Eigen::VectorXd values) : values_(std::move(values)) {
  check_ordered_positive(values_);
}

BoxedSpectrum::BoxedSpectrum(Eigen::VectorXd values, double eps)
    : values_(std::move(values)), eps_(eps) {
  if (!(eps > 0.0) || !(eps < 1.0)) {
    throw std::invalid_argument("eps must satisfy 0 < eps < 1");
  }
  check_ordered_positive(values_);
  if (values_[0] > 1.0 / eps_ || values_[values_.size() - 1] < eps_) {
    throw std::invalid_argument("spectrum exceeds the [eps, 1/eps] box");
  }
}

Composition::Composition(std::vector<int> parts, int ambient)
    : parts_(std::move(parts)), ambient_(ambient) {
  if (parts_.empty()) {
    throw std::invalid_argument("composition must have at least one part");
  }
  long sum = 0;
  for (int part : parts_) {
    if (part < 1) {
      throw std::invalid_argument("composition parts must be >= 1");
    }
    sum += part;
  }
  if (sum != ambient_) {
    throw std::invalid_argument("composition parts must sum to the ambient dimension");
  }
}

long stratum_dimension(const Composition& gamma) {
  const long p = gamma.ambient();
  long sum_sq = 0;
  for (int part : gamma.parts()) {
    sum_sq += static_cast<long>(part) * part;
  }
  // p^2 and sum gamma_k^2 have equal parity, so the division is exact.
  return gamma.block_count() + (p * p - sum_sq) / 2;
}

namespace {

void visit_compositions(int remaining, std::vector<int>& prefix, int p,
                        const std::function<void(const Composition&)>& visit) {
  if (remaining == 0) {
    visit(Composition(prefix, p));
    return;
  }
  for (int first = 1; first <= remaining; ++first) {
    prefix.push_back(first);
    visit_compositions(remaining - first, prefix, p, visit);
    prefix.pop_back();
  }
}

}  // namespace

void for_each_composition(int p, const std::function<void(const Composition&)>& visit,
                          int p_max_guard) {
  if (p < 1) {
    throw std::invalid_argument("p must be >= 1");
  }
  if (p > p_max_guard) {
    throw std::invalid_argument("refusing exponential enumeration of 2^" +
                                std::to_string(p - 1) + " compositions (p = " +
                                std::to_string(p) + " exceeds guard " +
                                std::to_string(p_max_guard) + ")");
  }
  std::vector<int> prefix;
  prefix.reserve(p);
  visit_compositions(p, prefix, p, visit);
}

std::vector<Composition> enumerate_compositions(int p, int p_max_guard) {
  std::vector<Composition> out;
  if (p >= 1 && p <= p_max_guard) {
    out.reserve(1ULL << (p - 1));
  }
  for_each_composition(p, [&out](const Composition& c) { out.push_back(c); }, p_max_guard);
  return out;
}

Composition composition_of(const Eigen::VectorXd& spectrum, double rel_tol) {
  if (spectrum.size() < 1) {
    throw std::invalid_argument("spectrum must have length >= 1");
  }
  if (rel_tol < 0.0) {
    throw std::invalid_argument("rel_tol must be >= 0");
  }
  std::vector<int> parts;
  int run = 1;
  for (Eigen::Index s = 0; s + 1 < spectrum.size(); ++s) {
    const double a = spectrum[s];
    const double b = spectrum[s + 1];
    bool same;
    if (a == b) {
      same = true;
    } else if (a > 0.0) {
      same = (a - b) / a <= rel_tol;
    } else {
      same = false;
    }
    if (same) {
      ++run;
    } else {
      parts.push_back(run);
      run = 1;
    }
  }
  parts.push_back(run);
  return Composition(std::move(parts), static_cast<int>(spectrum.size()));
}

Composition composition_of(const Spectrum& spectrum, double rel_tol) {
  return composition_of(spectrum.values(), rel_tol);
}

long l0_dimension(const Spectrum& spectrum) {
  return l0_dimension(spectrum, [](double a, double b) { return a - b; });
}

long l0_dimension(const Spectrum& spectrum,
                  const std::function<double(double, double)>& delta) {
  const Eigen::VectorXd& v = spectrum.values();
  const Eigen::Index p = v.size();
  long adjacent = 0;
  long all_pairs = 0;
  for (Eigen::Index s = 0; s + 1 < p; ++s) {
    if (delta(v[s], v[s + 1]) != 0.0) {
      ++adjacent;
    }
    for (Eigen::Index t = s + 1; t < p; ++t) {
      if (delta(v[s], v[t]) != 0.0) {
        ++all_pairs;
      }
    }
  }
  return 1 + adjacent + all_pairs;
}

}  // namespace eigencov
