#include "eigencov/experiments.hpp"

#include <Eigen/QR>

#include <algorithm>
#include <atomic>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <limits>
#include <numbers>
#include <sstream>
#include <stdexcept>
#include <thread>

#include <nlohmann/json.hpp>

#include "eigencov/gaussian.hpp"

namespace eigencov {

namespace {

constexpr double kNan = std::numeric_limits<double>::quiet_NaN();

std::uint64_t splitmix64(std::uint64_t z) {
  z += 0x9e3779b97f4a7c15ULL;
  z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
  z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
  return z ^ (z >> 31);
}

double uniform_open(std::uint64_t bits) {
  // 53-bit mantissa mapped into (0, 1]; keeps log() finite in Box-Muller.
  return static_cast<double>((bits >> 11) + 1) * 0x1.0p-53;
}

std::string format_double(double v) {
  char buf[64];
  std::snprintf(buf, sizeof(buf), "%.17g", v);
  return buf;
}

}  // namespace

std::uint64_t stream_key(std::uint64_t seed, std::uint64_t rep_index) {
  return splitmix64(splitmix64(seed) ^ (rep_index + 0x6a09e667f3bcc909ULL));
}

double gaussian_draw(std::uint64_t key, std::uint64_t index) {
  const double u1 = uniform_open(splitmix64(key ^ splitmix64(2 * index)));
  const double u2 = uniform_open(splitmix64(key ^ splitmix64(2 * index + 1)));
  return std::sqrt(-2.0 * std::log(u1)) * std::cos(2.0 * std::numbers::pi * u2);
}

Scenario make_preset(char which) {
  Scenario s;
  s.methods = {Method::Scm, Method::LedoitWolf, Method::Psa, Method::Escp};
  switch (which) {
    case 'a':
      s.name = "a";
      s.n = 40;
      s.p = 20;
      s.population_spectrum = Eigen::VectorXd::Ones(20);
      break;
    case 'b':
      s.name = "b";
      s.n = 200;
      s.p = 100;
      s.population_spectrum = Eigen::VectorXd::Ones(100);
      break;
    case 'c': {
      s.name = "c";
      s.n = 400;
      s.p = 200;
      Eigen::VectorXd spectrum(200);
      spectrum.segment(0, 80).setConstant(10.0);
      spectrum.segment(80, 80).setConstant(1.0);
      spectrum.segment(160, 40).setConstant(0.1);
      s.population_spectrum = spectrum;
      // The spread between the smallest and largest eigenvalues makes the
      // descent step tiny (curvature ~ 1/lambda^2), so this setting needs a
      // far larger iteration budget than the defaults to pool the blocks.
      s.solver.max_iters = 150000;
      s.solver.rel_obj_tol = 1e-12;
      break;
    }
    default:
      throw std::invalid_argument("unknown preset (expected a, b or c)");
  }
  return s;
}

double resolve_alpha(const Scenario& scenario) {
  switch (scenario.alpha_rule) {
    case AlphaRule::Bic:
      return std::log(static_cast<double>(scenario.n));
    case AlphaRule::Aic:
      return 2.0;
    case AlphaRule::Fixed:
      return scenario.alpha_fixed;
  }
  throw std::logic_error("unknown alpha rule");
}

namespace {

Eigen::MatrixXd rotation_frame(const Scenario& scenario) {
  // Seeded orthogonal frame shared by every repetition; sign-fixed so the QR
  // output is unique. Uses a dedicated stream id outside the rep range.
  const std::uint64_t key = stream_key(scenario.seed, 0x726f746174ULL);
  Eigen::MatrixXd g(scenario.p, scenario.p);
  for (int i = 0; i < scenario.p; ++i) {
    for (int j = 0; j < scenario.p; ++j) {
      g(i, j) = gaussian_draw(key, static_cast<std::uint64_t>(i) * scenario.p + j);
    }
  }
  Eigen::HouseholderQR<Eigen::MatrixXd> qr(g);
  Eigen::MatrixXd q = qr.householderQ();
  Eigen::MatrixXd r = qr.matrixQR().triangularView<Eigen::Upper>();
  for (int j = 0; j < scenario.p; ++j) {
    if (r(j, j) < 0.0) {
      q.col(j) = -q.col(j);
    }
  }
  return q;
}

}  // namespace

Dataset sample_gaussian(const Scenario& scenario, int rep_index) {
  if (scenario.population_spectrum.size() != scenario.p) {
    throw std::invalid_argument("population spectrum length must equal p");
  }
  const std::uint64_t key = stream_key(scenario.seed, static_cast<std::uint64_t>(rep_index));
  const Eigen::VectorXd scale = scenario.population_spectrum.cwiseSqrt();
  Eigen::MatrixXd x(scenario.n, scenario.p);
  for (long i = 0; i < scenario.n; ++i) {
    for (int j = 0; j < scenario.p; ++j) {
      const std::uint64_t idx = static_cast<std::uint64_t>(i) * scenario.p + j;
      x(i, j) = gaussian_draw(key, idx) * scale[j];
    }
  }
  if (scenario.rotate) {
    x = x * rotation_frame(scenario).transpose();
  }
  return Dataset(std::move(x));
}

double frobenius_error(const CovarianceModel& model,
                       const Eigen::VectorXd& population_spectrum) {
  if (model.p() != population_spectrum.size()) {
    throw std::invalid_argument("model and population dimensions differ");
  }
  Eigen::MatrixXd diff = model.matrix();
  diff.diagonal() -= population_spectrum;
  return diff.squaredNorm() / static_cast<double>(model.p());
}

double frobenius_error_dense(const CovarianceModel& model,
                             const Eigen::MatrixXd& population) {
  if (model.p() != population.rows() || population.rows() != population.cols()) {
    throw std::invalid_argument("model and population dimensions differ");
  }
  return (model.matrix() - population).squaredNorm() / static_cast<double>(model.p());
}

namespace {

CovarianceModel fit_method(Method method, const Dataset& data, double alpha,
                           const Scenario& scenario) {
  switch (method) {
    case Method::Scm:
      return scm(data);
    case Method::LedoitWolf:
      return ledoit_wolf(data);
    case Method::Psa:
      return psa_exact(data, alpha, scenario.psa_guard);
    case Method::Escp:
      return escp(data, alpha, scenario.kind, scenario.solver);
  }
  throw std::logic_error("unknown method");
}

CellResult run_cell(const Scenario& scenario, Method method, int rep, double alpha,
                    const std::optional<Eigen::MatrixXd>& population_dense) {
  CellResult cell;
  cell.method = method;
  cell.rep = rep;
  cell.lp_raw = cell.lp_per_np = cell.lf = kNan;
  cell.dim = -1;
  try {
    const Dataset data = sample_gaussian(scenario, rep);
    const auto start = std::chrono::steady_clock::now();
    CovarianceModel model = fit_method(method, data, alpha, scenario);
    const auto stop = std::chrono::steady_clock::now();
    cell.seconds = std::chrono::duration<double>(stop - start).count();
    cell.lp_raw = penalized_likelihood_score(model, data, alpha);
    cell.lp_per_np =
        cell.lp_raw / (static_cast<double>(scenario.n) * scenario.p) * 100.0;
    cell.lf = population_dense ? frobenius_error_dense(model, *population_dense)
                               : frobenius_error(model, scenario.population_spectrum);
    cell.dim = model.dim();
    cell.spectrum = model.eigenvalues;
    cell.ok = true;
  } catch (const std::exception& ex) {
    cell.ok = false;
    cell.error = ex.what();
  }
  return cell;
}

MetricSummary summarize(std::vector<double> values) {
  MetricSummary out;
  if (values.empty()) {
    out.mean = out.median = out.stddev = kNan;
    return out;
  }
  const double n = static_cast<double>(values.size());
  double sum = 0.0;
  for (double v : values) sum += v;
  out.mean = sum / n;
  double ss = 0.0;
  for (double v : values) ss += (v - out.mean) * (v - out.mean);
  out.stddev = std::sqrt(ss / n);
  std::sort(values.begin(), values.end());
  const std::size_t mid = values.size() / 2;
  out.median = (values.size() % 2 == 1) ? values[mid]
                                        : 0.5 * (values[mid - 1] + values[mid]);
  return out;
}

double lp_table_scale(double lp_raw, const Scenario& scenario) {
  // Per-sample score without the Gaussian 2*pi constant; the scale Table-style
  // summaries are quoted on.
  return lp_raw / static_cast<double>(scenario.n) -
         scenario.p * std::log(2.0 * std::numbers::pi);
}

MethodSummary summarize_method(const Scenario& scenario, Method method, bool available,
                               const std::vector<CellResult>& cells) {
  MethodSummary s;
  s.method = method;
  s.available = available;
  std::vector<double> lp, lpnp, lpt, lf, dim, sec;
  for (const CellResult& c : cells) {
    if (c.method != method) continue;
    ++s.fits;
    if (!c.ok) {
      ++s.errors;
      continue;
    }
    lp.push_back(c.lp_raw);
    lpnp.push_back(c.lp_per_np);
    lpt.push_back(lp_table_scale(c.lp_raw, scenario));
    lf.push_back(c.lf);
    dim.push_back(static_cast<double>(c.dim));
    sec.push_back(c.seconds);
  }
  s.lp_raw = summarize(std::move(lp));
  s.lp_per_np = summarize(std::move(lpnp));
  s.lp_table = summarize(std::move(lpt));
  s.lf = summarize(std::move(lf));
  s.dim = summarize(std::move(dim));
  s.seconds = summarize(std::move(sec));
  return s;
}

}  // namespace

const MethodSummary* ScenarioResult::summary_for(Method m) const {
  for (const MethodSummary& s : summaries) {
    if (s.method == m) return &s;
  }
  return nullptr;
}

std::vector<const CellResult*> ScenarioResult::cells_for(Method m) const {
  std::vector<const CellResult*> out;
  for (const CellResult& c : cells) {
    if (c.method == m) out.push_back(&c);
  }
  return out;
}

ScenarioResult run_scenario(const Scenario& scenario, int jobs) {
  if (scenario.repetitions < 1) {
    throw std::invalid_argument("repetitions must be >= 1");
  }
  ScenarioResult result;
  result.scenario = scenario;
  result.alpha = resolve_alpha(scenario);

  std::optional<Eigen::MatrixXd> population_dense;
  if (scenario.rotate) {
    const Eigen::MatrixXd q = rotation_frame(scenario);
    population_dense = q * scenario.population_spectrum.asDiagonal() * q.transpose();
  }

  struct Task {
    Method method;
    int rep;
  };
  std::vector<Task> tasks;
  std::vector<Method> active;
  for (Method m : scenario.methods) {
    const bool available = (m != Method::Psa) || (scenario.p <= scenario.psa_guard);
    if (!available) continue;
    active.push_back(m);
    for (int rep = 0; rep < scenario.repetitions; ++rep) {
      tasks.push_back(Task{m, rep});
    }
  }

  std::vector<CellResult> cells(tasks.size());
  const int workers = std::max(1, std::min<int>(jobs, static_cast<int>(tasks.size())));
  if (workers == 1) {
    for (std::size_t t = 0; t < tasks.size(); ++t) {
      cells[t] = run_cell(scenario, tasks[t].method, tasks[t].rep, result.alpha,
                          population_dense);
    }
  } else {
    std::atomic<std::size_t> next{0};
    auto worker = [&]() {
      for (;;) {
        const std::size_t t = next.fetch_add(1);
        if (t >= tasks.size()) break;
        cells[t] = run_cell(scenario, tasks[t].method, tasks[t].rep, result.alpha,
                            population_dense);
      }
    };
    std::vector<std::thread> pool;
    pool.reserve(workers);
    for (int w = 0; w < workers; ++w) pool.emplace_back(worker);
    for (std::thread& th : pool) th.join();
  }
  result.cells = std::move(cells);

  for (Method m : scenario.methods) {
    const bool available = std::find(active.begin(), active.end(), m) != active.end();
    result.summaries.push_back(summarize_method(scenario, m, available, result.cells));
  }
  return result;
}

std::vector<ScreeRow> scree_data(const ScenarioResult& result,
                                 const Eigen::VectorXd& population_spectrum) {
  std::vector<ScreeRow> rows;
  for (Eigen::Index j = 0; j < population_spectrum.size(); ++j) {
    rows.push_back(ScreeRow{"population", static_cast<int>(j), population_spectrum[j]});
  }
  for (Method m : result.scenario.methods) {
    Eigen::VectorXd mean = Eigen::VectorXd::Zero(population_spectrum.size());
    int count = 0;
    for (const CellResult* c : result.cells_for(m)) {
      if (c->ok && c->spectrum.size() == mean.size()) {
        mean += c->spectrum;
        ++count;
      }
    }
    if (count == 0) continue;
    mean /= static_cast<double>(count);
    for (Eigen::Index j = 0; j < mean.size(); ++j) {
      rows.push_back(ScreeRow{method_name(m), static_cast<int>(j), mean[j]});
    }
  }
  return rows;
}

std::string results_csv(const ScenarioResult& result) {
  std::ostringstream out;
  out << "scenario,method,rep,Lp_raw,Lp_per_np,LF,dim,seconds\n";
  for (const CellResult& c : result.cells) {
    out << result.scenario.name << ',' << method_name(c.method) << ',' << c.rep << ',';
    if (c.ok) {
      out << format_double(c.lp_raw) << ',' << format_double(c.lp_per_np) << ','
          << format_double(c.lf) << ',' << c.dim << ',';
    } else {
      out << "nan,nan,nan,nan,";
    }
    out << format_double(c.seconds) << '\n';
  }
  return out.str();
}

std::string scree_csv(const std::vector<ScreeRow>& rows) {
  std::ostringstream out;
  out << "series,index,eigenvalue\n";
  for (const ScreeRow& r : rows) {
    out << r.series << ',' << r.index << ',' << format_double(r.eigenvalue) << '\n';
  }
  return out.str();
}

namespace {

nlohmann::json metric_json(const MetricSummary& m) {
  return nlohmann::json{{"mean", m.mean}, {"median", m.median}, {"std", m.stddev}};
}

std::string alpha_rule_name(AlphaRule rule) {
  switch (rule) {
    case AlphaRule::Bic:
      return "bic";
    case AlphaRule::Aic:
      return "aic";
    case AlphaRule::Fixed:
      return "fixed";
  }
  return "?";
}

}  // namespace

std::string summary_json(const ScenarioResult& result) {
  const Scenario& sc = result.scenario;
  nlohmann::json j;
  j["scenario"] = {{"name", sc.name},
                   {"n", sc.n},
                   {"p", sc.p},
                   {"repetitions", sc.repetitions},
                   {"seed", sc.seed},
                   {"alpha_rule", alpha_rule_name(sc.alpha_rule)},
                   {"alpha", result.alpha},
                   {"delta", sc.kind == EigengapKind::Relative ? "relative" : "absolute"},
                   {"rotate", sc.rotate}};
  std::vector<std::string> method_names;
  for (Method m : sc.methods) method_names.push_back(method_name(m));
  j["scenario"]["methods"] = method_names;
  j["scenario"]["population_spectrum"] = std::vector<double>(
      sc.population_spectrum.data(), sc.population_spectrum.data() + sc.p);

  nlohmann::json methods = nlohmann::json::object();
  for (const MethodSummary& s : result.summaries) {
    nlohmann::json entry;
    entry["available"] = s.available;
    entry["fits"] = s.fits;
    entry["errors"] = s.errors;
    if (s.available && s.fits > s.errors) {
      entry["mean"] = {{"Lp_raw", s.lp_raw.mean},     {"Lp_per_np", s.lp_per_np.mean},
                       {"Lp_table", s.lp_table.mean}, {"LF", s.lf.mean},
                       {"dim", s.dim.mean},           {"seconds", s.seconds.mean}};
      entry["median"] = {{"Lp_raw", s.lp_raw.median},     {"Lp_per_np", s.lp_per_np.median},
                         {"Lp_table", s.lp_table.median}, {"LF", s.lf.median},
                         {"dim", s.dim.median},           {"seconds", s.seconds.median}};
      entry["std"] = {{"Lp_raw", s.lp_raw.stddev},     {"Lp_per_np", s.lp_per_np.stddev},
                      {"Lp_table", s.lp_table.stddev}, {"LF", s.lf.stddev},
                      {"dim", s.dim.stddev},           {"seconds", s.seconds.stddev}};
    }
    methods[method_name(s.method)] = std::move(entry);
  }
  j["methods"] = std::move(methods);
  return j.dump(2) + "\n";
}

std::string summary_table(const ScenarioResult& result) {
  std::ostringstream out;
  char line[160];
  std::snprintf(line, sizeof(line), "%-6s %12s %12s %12s %10s %10s\n", "method",
                "Lp_table", "Lp_raw", "LF", "dim", "seconds");
  out << line;
  for (const MethodSummary& s : result.summaries) {
    if (!s.available) {
      std::snprintf(line, sizeof(line), "%-6s %12s %12s %12s %10s %10s\n",
                    method_name(s.method).c_str(), "--", "--", "--", "--", "--");
      out << line;
      continue;
    }
    std::snprintf(line, sizeof(line), "%-6s %12.4g %12.6g %12.4g %10.5g %10.4g\n",
                  method_name(s.method).c_str(), s.lp_table.mean, s.lp_raw.mean, s.lf.mean,
                  s.dim.mean, s.seconds.mean);
    out << line;
  }
  return out.str();
}

void write_text_file(const std::string& path, const std::string& content) {
  std::ofstream out(path, std::ios::binary);
  if (!out) {
    throw std::runtime_error("cannot open '" + path + "' for writing");
  }
  out << content;
  if (!out) {
    throw std::runtime_error("failed writing '" + path + "'");
  }
}

}  // namespace eigencov
