#include <doctest.h>

#include <set>
#include <stdexcept>
#include <vector>

#include "eigencov/spectra.hpp"
#include "support/oracles.hpp"

using eigencov::Composition;
using eigencov::Spectrum;

namespace {

Eigen::VectorXd vec(std::initializer_list<double> values) {
  Eigen::VectorXd v(static_cast<Eigen::Index>(values.size()));
  Eigen::Index i = 0;
  for (double x : values) v[i++] = x;
  return v;
}

}  // namespace

TEST_CASE("spectrum invariants are enforced") {
  CHECK_NOTHROW(Spectrum(vec({3.0, 2.0, 2.0, 1.0})));
  CHECK_THROWS_AS(Spectrum(vec({1.0, 2.0})), std::invalid_argument);
  CHECK_THROWS_AS(Spectrum(vec({1.0, 0.0})), std::invalid_argument);
  CHECK_THROWS_AS(Spectrum(Eigen::VectorXd()), std::invalid_argument);
}

TEST_CASE("composition invariants are enforced") {
  CHECK_NOTHROW(Composition({2, 1}, 3));
  CHECK_THROWS_AS(Composition({2, 2}, 3), std::invalid_argument);
  CHECK_THROWS_AS(Composition({0, 3}, 3), std::invalid_argument);
  CHECK_THROWS_AS(Composition({}, 0), std::invalid_argument);
}

TEST_CASE("stratum dimension anchors") {
  CHECK(eigencov::stratum_dimension(Composition({80, 80, 40}, 200)) == 12803);
  CHECK(eigencov::stratum_dimension(Composition(std::vector<int>(20, 1), 20)) == 210);
  CHECK(eigencov::stratum_dimension(Composition({200}, 200)) == 1);
  CHECK(eigencov::stratum_dimension(Composition({7}, 7)) == 1);
}

TEST_CASE("stratum dimension extremes") {
  for (int p = 1; p <= 12; ++p) {
    CHECK(eigencov::stratum_dimension(Composition(std::vector<int>(p, 1), p)) ==
          p * (p + 1) / 2);
    CHECK(eigencov::stratum_dimension(Composition({p}, p)) == 1);
  }
}

TEST_CASE("composition enumeration: counts, order, uniqueness") {
  auto c1 = eigencov::enumerate_compositions(1);
  REQUIRE(c1.size() == 1);
  CHECK(c1[0].parts() == std::vector<int>{1});

  auto c3 = eigencov::enumerate_compositions(3);
  REQUIRE(c3.size() == 4);
  CHECK(c3[0].parts() == std::vector<int>({1, 1, 1}));
  CHECK(c3[1].parts() == std::vector<int>({1, 2}));
  CHECK(c3[2].parts() == std::vector<int>({2, 1}));
  CHECK(c3[3].parts() == std::vector<int>({3}));

  auto c10 = eigencov::enumerate_compositions(10);
  CHECK(c10.size() == 512);
  std::set<std::vector<int>> unique;
  for (const auto& c : c10) {
    unique.insert(c.parts());
    long sum = 0;
    for (int part : c.parts()) sum += part;
    CHECK(sum == 10);
  }
  CHECK(unique.size() == 512);
}

TEST_CASE("composition enumeration is guarded against exponential blowup") {
  CHECK_THROWS_WITH_AS(eigencov::enumerate_compositions(21),
                       doctest::Contains("exponential"), std::invalid_argument);
  CHECK_THROWS_AS(eigencov::enumerate_compositions(0), std::invalid_argument);
  CHECK_NOTHROW(eigencov::enumerate_compositions(25, 25));
}

TEST_CASE("compositions biject with subsets of cut positions") {
  // Each composition of p corresponds to one subset of the p-1 gaps.
  for (int p = 1; p <= 10; ++p) {
    auto all = eigencov::enumerate_compositions(p);
    CHECK(all.size() == (1ULL << (p - 1)));
    std::set<unsigned long> masks;
    for (const auto& c : all) {
      unsigned long mask = 0;
      int pos = 0;
      for (std::size_t k = 0; k + 1 < c.parts().size(); ++k) {
        pos += c.parts()[k];
        mask |= 1UL << (pos - 1);
      }
      masks.insert(mask);
    }
    CHECK(masks.size() == all.size());
  }
}

TEST_CASE("composition_of groups by relative gaps") {
  CHECK(eigencov::composition_of(vec({5, 5, 2}), 0.0).parts() == std::vector<int>({2, 1}));
  CHECK(eigencov::composition_of(vec({1, 1, 1, 1}), 0.0).parts() == std::vector<int>({4}));
  CHECK(eigencov::composition_of(vec({10.0, 9.999999, 1.0}), 1e-6).parts() ==
        std::vector<int>({2, 1}));
  // zero runs group by exact equality
  CHECK(eigencov::composition_of(vec({2, 0, 0}), 1e-12).parts() ==
        std::vector<int>({1, 2}));
  CHECK_THROWS_AS(eigencov::composition_of(vec({2, 1}), -1.0), std::invalid_argument);
}

TEST_CASE("l0 dimension examples") {
  CHECK(eigencov::l0_dimension(Spectrum(vec({3, 3, 1}))) == 4);
  CHECK(eigencov::l0_dimension(Spectrum(vec({2, 2, 2, 2}))) == 1);
  CHECK(eigencov::l0_dimension(Spectrum(vec({9, 5, 3, 1}))) == 10);
}

TEST_CASE("l0 dimension accepts any vanishing-iff-equal gap function") {
  const Spectrum s(vec({4, 4, 2, 1}));
  const long base = eigencov::l0_dimension(s);
  CHECK(base == eigencov::l0_dimension(s, [](double a, double b) { return (a - b) / a; }));
  CHECK(base ==
        eigencov::l0_dimension(s, [](double a, double b) { return a == b ? 0.0 : 7.5; }));
}

TEST_CASE("eigengap identity holds for every composition up to p = 10") {
  for (int p = 1; p <= 10; ++p) {
    for (const auto& gamma : eigencov::enumerate_compositions(p)) {
      const Spectrum s(oracles::spectrum_with_multiplicities(gamma.parts()));
      CHECK(eigencov::l0_dimension(s) == eigencov::stratum_dimension(gamma));
      CHECK(eigencov::composition_of(s.values(), 0.0).parts() == gamma.parts());
    }
  }
}

TEST_CASE("composition_of(0) + stratum_dimension equals l0_dimension on random spectra") {
  std::mt19937_64 rng(41);
  for (int trial = 0; trial < 50; ++trial) {
    const int p = 1 + static_cast<int>(rng() % 12);
    Eigen::VectorXd v(p);
    double value = 1.0 + static_cast<double>(rng() % 5);
    for (int j = 0; j < p; ++j) {
      v[j] = value;
      if (rng() % 2 == 0) value -= 0.25 * (1 + static_cast<double>(rng() % 3));
    }
    // iterate descending but possibly with ties; keep positive
    if (v[p - 1] <= 0) v.array() += 1.0 - v[p - 1];
    const Spectrum s(v);
    CHECK(eigencov::l0_dimension(s) ==
          eigencov::stratum_dimension(eigencov::composition_of(s, 0.0)));
  }
}
