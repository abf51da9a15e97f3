#include <doctest.h>

#include <nlohmann/json.hpp>

#include <cmath>
#include <sstream>

#include "eigencov/experiments.hpp"

using eigencov::Method;
using eigencov::Scenario;

namespace {

Scenario small_scenario() {
  Scenario s;
  s.name = "unit";
  s.n = 30;
  s.p = 4;
  s.population_spectrum = Eigen::VectorXd::Ones(4);
  s.repetitions = 3;
  s.seed = 99;
  s.methods = {Method::Scm, Method::LedoitWolf, Method::Psa, Method::Escp};
  return s;
}

}  // namespace

TEST_CASE("sampling is bitwise deterministic per (seed, rep)") {
  const Scenario s = small_scenario();
  const auto a = eigencov::sample_gaussian(s, 1);
  const auto b = eigencov::sample_gaussian(s, 1);
  CHECK((a.x().array() == b.x().array()).all());

  const auto c = eigencov::sample_gaussian(s, 2);
  CHECK_FALSE((a.x().array() == c.x().array()).all());

  Scenario other = s;
  other.seed = 100;
  const auto d = eigencov::sample_gaussian(other, 1);
  CHECK_FALSE((a.x().array() == d.x().array()).all());
}

TEST_CASE("sampled column variances concentrate on the population spectrum") {
  Scenario s;
  s.n = 10000;
  s.p = 3;
  s.population_spectrum = Eigen::VectorXd::Constant(3, 2.5);
  s.seed = 5;
  const auto data = eigencov::sample_gaussian(s, 0);
  for (int j = 0; j < 3; ++j) {
    const double var = data.x().col(j).squaredNorm() / 10000.0;
    CHECK(var == doctest::Approx(2.5).epsilon(0.05));
  }
}

TEST_CASE("frobenius error hand values") {
  eigencov::CovarianceModel identity{Eigen::MatrixXd::Identity(4, 4),
                                     Eigen::VectorXd::Ones(4),
                                     eigencov::Composition({4}, 4), Method::Scm};
  CHECK(eigencov::frobenius_error(identity, Eigen::VectorXd::Ones(4)) == 0.0);

  eigencov::CovarianceModel twice{Eigen::MatrixXd::Identity(4, 4),
                                  Eigen::VectorXd::Constant(4, 2.0),
                                  eigencov::Composition({4}, 4), Method::Scm};
  CHECK(eigencov::frobenius_error(twice, Eigen::VectorXd::Ones(4)) == doctest::Approx(1.0));
  CHECK_THROWS_AS(eigencov::frobenius_error(twice, Eigen::VectorXd::Ones(3)),
                  std::invalid_argument);
}

TEST_CASE("run_scenario fills one cell per (method, rep)") {
  const Scenario s = small_scenario();
  const auto result = eigencov::run_scenario(s);
  CHECK(result.cells.size() == 4 * 3);
  for (const auto& cell : result.cells) {
    CHECK(cell.ok);
    CHECK(cell.lf >= 0.0);
    CHECK(cell.dim >= 1);
    CHECK(cell.dim <= 4 * 5 / 2);
    CHECK(cell.spectrum.size() == 4);
  }
  CHECK(result.alpha == doctest::Approx(std::log(30.0)));
  // psa is the exact minimizer of the score it shares with escp/scm
  const auto* psa = result.summary_for(Method::Psa);
  const auto* escp = result.summary_for(Method::Escp);
  const auto* scm = result.summary_for(Method::Scm);
  REQUIRE(psa != nullptr);
  REQUIRE(escp != nullptr);
  REQUIRE(scm != nullptr);
  CHECK(psa->lp_raw.mean <= escp->lp_raw.mean + 1e-8);
  CHECK(psa->lp_raw.mean <= scm->lp_raw.mean + 1e-8);
}

TEST_CASE("empty method list yields an empty result") {
  Scenario s = small_scenario();
  s.methods.clear();
  const auto result = eigencov::run_scenario(s);
  CHECK(result.cells.empty());
  CHECK(result.summaries.empty());
}

TEST_CASE("psa is marked unavailable above the guard") {
  Scenario s = small_scenario();
  s.p = 25;
  s.population_spectrum = Eigen::VectorXd::Ones(25);
  s.repetitions = 1;
  const auto result = eigencov::run_scenario(s);
  const auto* psa = result.summary_for(Method::Psa);
  REQUIRE(psa != nullptr);
  CHECK_FALSE(psa->available);
  CHECK(psa->fits == 0);
  CHECK(result.cells_for(Method::Psa).empty());
  // the other methods still ran
  CHECK(result.cells.size() == 3);
}

TEST_CASE("statistical outputs are bitwise reproducible across runs and jobs") {
  const Scenario s = small_scenario();
  const auto r1 = eigencov::run_scenario(s, 1);
  const auto r2 = eigencov::run_scenario(s, 3);
  REQUIRE(r1.cells.size() == r2.cells.size());
  for (std::size_t i = 0; i < r1.cells.size(); ++i) {
    CHECK(r1.cells[i].method == r2.cells[i].method);
    CHECK(r1.cells[i].rep == r2.cells[i].rep);
    CHECK(r1.cells[i].lp_raw == r2.cells[i].lp_raw);
    CHECK(r1.cells[i].lf == r2.cells[i].lf);
    CHECK(r1.cells[i].dim == r2.cells[i].dim);
    CHECK((r1.cells[i].spectrum.array() == r2.cells[i].spectrum.array()).all());
  }
}

TEST_CASE("rotation leaves the errors unchanged up to numerics") {
  Scenario plain = small_scenario();
  plain.p = 5;
  plain.population_spectrum = Eigen::VectorXd(5);
  plain.population_spectrum << 4, 2, 2, 1, 0.5;
  plain.repetitions = 2;
  Scenario rotated = plain;
  rotated.rotate = true;

  const auto r_plain = eigencov::run_scenario(plain);
  const auto r_rot = eigencov::run_scenario(rotated);
  REQUIRE(r_plain.cells.size() == r_rot.cells.size());
  for (std::size_t i = 0; i < r_plain.cells.size(); ++i) {
    CHECK(r_plain.cells[i].lf == doctest::Approx(r_rot.cells[i].lf).epsilon(1e-6));
    CHECK(r_plain.cells[i].lp_raw ==
          doctest::Approx(r_rot.cells[i].lp_raw).epsilon(1e-9));
  }
}

TEST_CASE("results csv has the pinned schema") {
  Scenario s = small_scenario();
  s.repetitions = 2;
  s.methods = {Method::Scm, Method::Escp};
  const auto result = eigencov::run_scenario(s);
  const std::string csv = eigencov::results_csv(result);

  std::istringstream lines(csv);
  std::string line;
  REQUIRE(std::getline(lines, line));
  CHECK(line == "scenario,method,rep,Lp_raw,Lp_per_np,LF,dim,seconds");
  int rows = 0;
  while (std::getline(lines, line)) {
    ++rows;
    CHECK(std::count(line.begin(), line.end(), ',') == 7);
    CHECK(line.rfind("unit,", 0) == 0);
  }
  CHECK(rows == 4);
}

TEST_CASE("scree data starts from the population and covers each method") {
  Scenario s = small_scenario();
  s.methods = {Method::Scm};
  s.repetitions = 2;
  const auto result = eigencov::run_scenario(s);
  const auto rows = eigencov::scree_data(result, s.population_spectrum);
  REQUIRE(rows.size() == 8);
  for (int j = 0; j < 4; ++j) {
    CHECK(rows[j].series == "population");
    CHECK(rows[j].index == j);
    CHECK(rows[j].eigenvalue == 1.0);
  }
  for (int j = 0; j < 4; ++j) {
    CHECK(rows[4 + j].series == "scm");
  }
  const std::string csv = eigencov::scree_csv(rows);
  CHECK(csv.rfind("series,index,eigenvalue\n", 0) == 0);
}

TEST_CASE("summary json echoes the scenario and carries the statistics") {
  const Scenario s = small_scenario();
  const auto result = eigencov::run_scenario(s);
  const auto j = nlohmann::json::parse(eigencov::summary_json(result));
  CHECK(j["scenario"]["n"] == 30);
  CHECK(j["scenario"]["p"] == 4);
  CHECK(j["scenario"]["alpha_rule"] == "bic");
  CHECK(j["scenario"]["seed"] == 99);
  for (const char* name : {"scm", "lw", "psa", "escp"}) {
    REQUIRE(j["methods"].contains(name));
    CHECK(j["methods"][name]["available"] == true);
    CHECK(j["methods"][name]["errors"] == 0);
    CHECK(j["methods"][name]["mean"].contains("LF"));
    CHECK(j["methods"][name]["median"].contains("dim"));
    CHECK(j["methods"][name]["std"].contains("Lp_raw"));
  }
}

TEST_CASE("alpha rules resolve as documented") {
  Scenario s = small_scenario();
  s.alpha_rule = eigencov::AlphaRule::Bic;
  CHECK(eigencov::resolve_alpha(s) == doctest::Approx(std::log(30.0)));
  s.alpha_rule = eigencov::AlphaRule::Aic;
  CHECK(eigencov::resolve_alpha(s) == 2.0);
  s.alpha_rule = eigencov::AlphaRule::Fixed;
  s.alpha_fixed = 0.75;
  CHECK(eigencov::resolve_alpha(s) == 0.75);
}

TEST_CASE("presets match their published settings") {
  const Scenario a = eigencov::make_preset('a');
  CHECK(a.n == 40);
  CHECK(a.p == 20);
  CHECK(a.population_spectrum.size() == 20);
  CHECK(a.population_spectrum.minCoeff() == 1.0);

  const Scenario b = eigencov::make_preset('b');
  CHECK(b.n == 200);
  CHECK(b.p == 100);

  const Scenario c = eigencov::make_preset('c');
  CHECK(c.n == 400);
  CHECK(c.p == 200);
  CHECK(c.population_spectrum[0] == 10.0);
  CHECK(c.population_spectrum[100] == 1.0);
  CHECK(c.population_spectrum[199] == doctest::Approx(0.1));

  CHECK_THROWS_AS(eigencov::make_preset('z'), std::invalid_argument);
}
