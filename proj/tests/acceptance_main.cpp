// Acceptance suite: one pass/fail line per criterion, exit code = number of
// failed criteria. Run via `ctest -R acceptance` or directly:
//   ./build/tests/acceptance_tests
//
// The campaigns pin every grid, tolerance, and threshold in code; nothing is
// configurable from the outside.

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <map>
#include <sstream>
#include <string>
#include <vector>

#include "pll/harness.hpp"
#include "pll/losses.hpp"
#include "pll/rng.hpp"

using namespace pll;

namespace {

struct CriterionResult {
  bool pass = false;
  std::string detail;
};

double seconds_since(std::chrono::steady_clock::time_point start) {
  return std::chrono::duration<double>(std::chrono::steady_clock::now() - start)
      .count();
}

std::string read_file(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) return {};
  std::ostringstream buffer;
  buffer << in.rdbuf();
  return buffer.str();
}

double stream_radius_for(int num_classes, int dim) {
  return 2.0 * std::sqrt(static_cast<double>(num_classes) *
                         static_cast<double>(dim));
}

std::vector<int> set_sizes_for(int num_classes) {
  std::vector<int> sizes{1, 2, num_classes - 1};
  std::sort(sizes.begin(), sizes.end());
  sizes.erase(std::unique(sizes.begin(), sizes.end()), sizes.end());
  return sizes;
}

// --- criterion 1: separable-case mistake bound conformance ---------------

CriterionResult criterion_theorem1() {
  const auto start = std::chrono::steady_clock::now();
  std::vector<SynthesisSpec> specs;
  std::uint64_t seed = 1000;
  for (const int k : {3, 5, 10})
    for (const int d : {5, 20})
      for (const int s : set_sizes_for(k))
        for (const double gamma : {0.1, 0.5})
          for (int i = 0; i < 20; ++i) {
            SynthesisSpec spec;
            spec.num_classes = k;
            spec.dim = d;
            spec.num_examples = 5000;
            spec.set_size = s;
            spec.margin = gamma;
            spec.radius = stream_radius_for(k, d);
            spec.seed = seed++;
            specs.push_back(spec);
          }

  const auto cells = mistake_campaign(specs, {}, LearnerSpec{}, 0);
  long passed = 0;
  double worst_ratio = 0.0;
  std::string first_error;
  for (const auto& cell : cells) {
    if (!cell.error.empty() && first_error.empty()) first_error = cell.error;
    if (cell.pass) ++passed;
    if (cell.error.empty() && cell.report.bound_value > 0.0)
      worst_ratio = std::max(
          worst_ratio, static_cast<double>(cell.mistakes) / cell.report.bound_value);
  }
  const double elapsed = seconds_since(start);

  CriterionResult result;
  result.pass = passed == static_cast<long>(cells.size()) && elapsed < 60.0;
  char buf[256];
  std::snprintf(buf, sizeof(buf),
                "%ld/%zu cells, worst mistakes/bound %.3f, %.1fs (budget 60s)%s%s",
                passed, cells.size(), worst_ratio, elapsed,
                first_error.empty() ? "" : ", first error: ",
                first_error.c_str());
  result.detail = buf;
  return result;
}

// --- criterion 2: non-separable mistake bound conformance ----------------

CriterionResult criterion_theorem2() {
  const auto start = std::chrono::steady_clock::now();
  std::vector<SynthesisSpec> specs;
  std::uint64_t seed = 2000;
  for (const int k : {3, 5, 10})
    for (const int d : {5, 20})
      for (const int s : set_sizes_for(k))
        for (const double noise : {0.05, 0.2})
          for (int i = 0; i < 20; ++i) {
            SynthesisSpec spec;
            spec.kind = GeneratorKind::NoisySynthetic;
            spec.num_classes = k;
            spec.dim = d;
            spec.num_examples = 5000;
            spec.set_size = s;
            spec.margin = 0.1;
            spec.radius = stream_radius_for(k, d);
            spec.noise_rate = noise;
            spec.seed = seed++;
            specs.push_back(spec);
          }

  const std::vector<double> eval_gammas{0.1, 0.5, 1.0};
  const auto cells = mistake_campaign(specs, eval_gammas, LearnerSpec{}, 0);
  long passed = 0;
  double worst_ratio = 0.0;
  std::string first_error;
  for (const auto& cell : cells) {
    if (!cell.error.empty() && first_error.empty()) first_error = cell.error;
    if (cell.pass) ++passed;
    if (cell.error.empty() && cell.report.bound_value > 0.0)
      worst_ratio = std::max(
          worst_ratio, static_cast<double>(cell.mistakes) / cell.report.bound_value);
  }
  const double elapsed = seconds_since(start);

  CriterionResult result;
  result.pass = passed == static_cast<long>(cells.size());
  char buf[256];
  std::snprintf(buf, sizeof(buf),
                "%ld/%zu cells (3 margins each), worst mistakes/bound %.3f, %.1fs%s%s",
                passed, cells.size(), worst_ratio, elapsed,
                first_error.empty() ? "" : ", first error: ",
                first_error.c_str());
  result.detail = buf;
  return result;
}

// --- criteria 3 and 4: regret conformance and the ball invariant ---------

struct RegretOutcome {
  CriterionResult regret;
  CriterionResult ball;
};

RegretOutcome criteria_regret_and_ball() {
  const auto start = std::chrono::steady_clock::now();
  std::vector<SynthesisSpec> specs;
  std::uint64_t seed = 3000;
  for (const long rounds : {1000L, 10000L})
    for (int i = 0; i < 10; ++i) {
      SynthesisSpec spec;
      spec.num_classes = 5;
      spec.dim = 10;
      spec.num_examples = rounds;
      spec.set_size = 2;
      spec.margin = 0.05;
      spec.radius = 2.0;
      spec.seed = seed++;
      specs.push_back(spec);
    }

  const std::vector<double> lambdas{0.1, 1.0};
  const auto cells = regret_campaign(specs, lambdas, 500, 0);
  long passed = 0;
  double worst_margin = -1e300;
  double max_excess = 0.0;
  std::string first_error;
  for (const auto& cell : cells) {
    if (!cell.error.empty() && first_error.empty()) first_error = cell.error;
    if (cell.pass) ++passed;
    if (cell.error.empty()) {
      worst_margin = std::max(worst_margin, cell.regret / cell.report.bound_value);
      max_excess = std::max(max_excess, cell.max_ball_excess);
    }
  }
  const double elapsed = seconds_since(start);

  RegretOutcome outcome;
  outcome.regret.pass =
      passed == static_cast<long>(cells.size()) && elapsed < 120.0;
  char buf[256];
  std::snprintf(buf, sizeof(buf),
                "%ld/%zu cells, worst regret/bound %.3f, %.1fs (budget 120s)%s%s",
                passed, cells.size(), worst_margin, elapsed,
                first_error.empty() ? "" : ", first error: ",
                first_error.c_str());
  outcome.regret.detail = buf;

  outcome.ball.pass = first_error.empty() && max_excess <= 1e-12;
  std::snprintf(buf, sizeof(buf), "max ||W|| excess over 1/sqrt(lambda): %.3g",
                max_excess);
  outcome.ball.detail = buf;
  return outcome;
}

// --- criterion 5: singleton-trajectory equivalence ------------------------

CriterionResult criterion_singleton() {
  const LearnerSpec base;
  int checked = 0;
  for (std::uint64_t seed = 5000; seed < 5010; ++seed) {
    SynthesisSpec spec;
    spec.num_classes = 4;
    spec.dim = 6;
    spec.num_examples = 200;
    spec.set_size = 1;
    spec.margin = 0.05;
    spec.radius = stream_radius_for(4, 6);
    spec.seed = seed;
    const auto stream = generate_separable(spec).stream;

    // Full weight trajectories of the six learners.
    std::vector<std::vector<WeightMatrix>> trajectories;
    for (const Algorithm a :
         {Algorithm::AvgPerceptron, Algorithm::MaxPerceptron,
          Algorithm::ExactPerceptron, Algorithm::AvgPegasos,
          Algorithm::MaxPegasos, Algorithm::ExactPegasos}) {
      LearnerConfig config;
      config.algorithm = a;
      config.num_classes = spec.num_classes;
      config.dim = spec.dim;
      config.eta = 1.0;
      config.lambda = 0.5;
      OnlineLearner learner(config);
      std::vector<WeightMatrix> trajectory;
      trajectory.reserve(stream.size());
      for (const auto& example : stream.items) {
        learner.step(example.x, example.candidates, example.true_label);
        trajectory.push_back(learner.weights());
      }
      trajectories.push_back(std::move(trajectory));
    }

    // Distinct bitwise equality classes over the six trajectories.
    std::vector<int> representative;
    for (const auto& trajectory : trajectories) {
      bool found = false;
      for (const int r : representative)
        if (trajectories[static_cast<std::size_t>(r)] == trajectory) {
          found = true;
          break;
        }
      if (!found)
        representative.push_back(static_cast<int>(&trajectory - trajectories.data()));
    }
    const bool perceptrons_equal = trajectories[0] == trajectories[1] &&
                                   trajectories[0] == trajectories[2];
    const bool pegasos_equal = trajectories[3] == trajectories[4] &&
                               trajectories[3] == trajectories[5];
    if (representative.size() != 2 || !perceptrons_equal || !pegasos_equal) {
      CriterionResult result;
      result.detail = "stream seed " + std::to_string(seed) + " produced " +
                      std::to_string(representative.size()) +
                      " distinct trajectories";
      return result;
    }
    ++checked;
  }
  return {true, std::to_string(checked) + " streams, 2 bitwise classes each"};
}

// --- criterion 6: surrogate-loss properties --------------------------------

CriterionResult criterion_surrogates() {
  Rng rng(6000);
  const int trials = 100000;
  long zero_implies = 0, order = 0, convexity = 0, derivative = 0;
  long smooth_points = 0;
  const double h = 1e-6;

  for (int it = 0; it < trials; ++it) {
    const int dim = 1 + static_cast<int>(rng.uniform_below(8));
    const int num_classes = 2 + static_cast<int>(rng.uniform_below(7));
    WeightMatrix w(dim, num_classes);
    for (auto& e : w.data()) e = rng.normal();
    FeatureVector x(static_cast<std::size_t>(dim));
    for (auto& e : x) e = rng.normal();
    std::vector<int> pool(static_cast<std::size_t>(num_classes));
    for (int c = 1; c <= num_classes; ++c) pool[static_cast<std::size_t>(c - 1)] = c;
    const int set_size = 1 + static_cast<int>(rng.uniform_below(
        static_cast<std::uint64_t>(num_classes - 1)));
    const CandidateLabelSet candidates(
        rng.sample_without_replacement(pool, set_size));

    // (a) zero surrogate forces a candidate prediction.
    const int predicted = predict(w, x);
    if (aph_loss(w, x, candidates) == 0.0 &&
        ambiguous_loss(predicted, candidates) != 0)
      ++zero_implies;
    if (mph_loss(w, x, candidates) == 0.0 &&
        ambiguous_loss(predicted, candidates) != 0)
      ++zero_implies;

    // (b) the max surrogate never exceeds the average one.
    if (mph_loss(w, x, candidates) > aph_loss(w, x, candidates)) ++order;

    // (c) subgradient inequality of the convex surrogate.
    WeightMatrix w_other(dim, num_classes);
    for (auto& e : w_other.data()) e = rng.normal();
    WeightMatrix diff = w_other;
    diff.add_scaled(w, -1.0);
    const double rhs = aph_loss(w, x, candidates) +
                       frobenius_dot(aph_subgradient(w, x, candidates), diff);
    if (aph_loss(w_other, x, candidates) < rhs - 1e-9) ++convexity;

    // (d) central differences at verified-smooth points.
    const auto scores = score(w, x);
    const auto top_two_gap = [&](const std::vector<int>& labels) {
      double best = -1e300, second = -1e300;
      for (const int cls : labels) {
        const double s = scores[static_cast<std::size_t>(cls - 1)];
        if (s > best) {
          second = best;
          best = s;
        } else if (s > second) {
          second = s;
        }
      }
      return labels.size() < 2 ? 1.0 : best - second;
    };
    const auto complement = complement_of(candidates, num_classes);
    if (top_two_gap(complement) <= 1e-3) continue;
    if (top_two_gap(candidates.labels()) <= 1e-3) continue;
    if (std::abs(avg_margin(w, x, candidates) - 1.0) <= 1e-3) continue;
    if (std::abs(max_margin(w, x, candidates) - 1.0) <= 1e-3) continue;
    ++smooth_points;

    WeightMatrix direction(dim, num_classes);
    for (auto& e : direction.data()) e = rng.normal();
    WeightMatrix plus = w, minus = w;
    plus.add_scaled(direction, h);
    minus.add_scaled(direction, -h);
    const double fd_avg =
        (aph_loss(plus, x, candidates) - aph_loss(minus, x, candidates)) /
        (2.0 * h);
    if (std::abs(fd_avg - frobenius_dot(aph_subgradient(w, x, candidates),
                                        direction)) > 1e-5)
      ++derivative;
    const double fd_max =
        (mph_loss(plus, x, candidates) - mph_loss(minus, x, candidates)) /
        (2.0 * h);
    if (std::abs(fd_max - frobenius_dot(mph_subgradient(w, x, candidates),
                                        direction)) > 1e-5)
      ++derivative;
  }

  CriterionResult result;
  result.pass =
      zero_implies == 0 && order == 0 && convexity == 0 && derivative == 0;
  char buf[256];
  std::snprintf(buf, sizeof(buf),
                "%d triples: violations a=%ld b=%ld c=%ld d=%ld (%ld smooth "
                "points differentiated)",
                trials, zero_implies, order, convexity, derivative,
                smooth_points);
  result.detail = buf;
  return result;
}

// --- criterion 7: protocol reproduction on the bundled tables -------------

CriterionResult criterion_protocol() {
  const auto start = std::chrono::steady_clock::now();
  const std::filesystem::path data_dir(PLL_DATA_DIR);
  const std::filesystem::path tmp =
      std::filesystem::temp_directory_path() / "pll_acceptance_curves";

  std::string detail;
  bool pass = true;
  for (const char* name : {"ecoli_like.csv", "dermatology_like.csv"}) {
    // The dermatology-shaped table mixes 0..3 grades with a raw age column;
    // subgradient learners want comparable feature scales there.
    const bool scale = std::string_view(name) == "dermatology_like.csv";
    Dataset dataset = load_dataset_file(data_dir / name, DataFormat::Csv);
    if (scale) dataset = min_max_scale(dataset);
    const double chance = 1.0 - 1.0 / static_cast<double>(dataset.num_classes);

    ExperimentConfig config;
    config.dataset = &dataset;
    for (const Algorithm a :
         {Algorithm::AvgPerceptron, Algorithm::MaxPerceptron,
          Algorithm::AvgPegasos, Algorithm::MaxPegasos}) {
      LearnerSpec learner;
      learner.algorithm = a;
      learner.eta = 1.0;
      learner.lambda = 0.05;
      config.learners.push_back(learner);
    }
    config.set_sizes = {2, 4};
    config.runs = 100;
    config.base_seed = 42;
    const auto curves = run_experiment(config);

    for (const auto& [key, curve] : curves) {
      if (curve.true_error.back() >= chance) {
        pass = false;
        detail += key.first + " s=" + std::to_string(key.second) + " on " +
                  dataset.name + " at chance (" +
                  std::to_string(curve.true_error.back()) + "); ";
      }
    }

    // Byte reproducibility of the emitted curves under the fixed seed.
    std::filesystem::remove_all(tmp);
    const auto first = emit_curves(curves, config, tmp / "a");
    const auto second = emit_curves(run_experiment(config), config, tmp / "b");
    if (read_file(first.manifest) != read_file(second.manifest)) {
      pass = false;
      detail += std::string(name) + " manifest not reproducible; ";
    }
    for (std::size_t i = 0; i < first.curve_files.size(); ++i)
      if (read_file(first.curve_files[i]) != read_file(second.curve_files[i])) {
        pass = false;
        detail += std::string(name) + " curves not reproducible; ";
        break;
      }

    // Qualitative trend, recorded but not gated: more distractors should
    // not make the problem easier.
    for (const Algorithm a :
         {Algorithm::AvgPerceptron, Algorithm::MaxPerceptron,
          Algorithm::AvgPegasos, Algorithm::MaxPegasos}) {
      const std::string token(algorithm_name(a));
      const double e2 = curves.at({token, 2}).true_error.back();
      const double e4 = curves.at({token, 4}).true_error.back();
      std::printf("      trend %s %s: final error s=2 %.4f, s=4 %.4f (%s)\n",
                  dataset.name.c_str(), token.c_str(), e2, e4,
                  e4 >= e2 ? "echoes" : "reversed");
    }
  }
  std::filesystem::remove_all(tmp);

  char buf[128];
  std::snprintf(buf, sizeof(buf),
                "2 datasets x 4 learners x {2,4}, 100 runs, %.1fs",
                seconds_since(start));
  return {pass, pass ? std::string(buf) : detail};
}

// --- criterion 8: parser golden files --------------------------------------

CriterionResult criterion_golden() {
  const std::filesystem::path fixtures(PLL_FIXTURE_DIR);
  const auto libsvm =
      load_dataset_file(fixtures / "mini.libsvm", DataFormat::Libsvm);
  const auto csv = load_dataset_file(fixtures / "mini.csv", DataFormat::Csv);
  const bool libsvm_ok =
      dataset_snapshot(libsvm) == read_file(fixtures / "mini.libsvm.golden");
  const bool csv_ok =
      dataset_snapshot(csv) == read_file(fixtures / "mini.csv.golden");
  CriterionResult result;
  result.pass = libsvm_ok && csv_ok;
  result.detail = std::string("libsvm ") + (libsvm_ok ? "exact" : "MISMATCH") +
                  ", csv " + (csv_ok ? "exact" : "MISMATCH");
  return result;
}

void report(int index, const char* name, const CriterionResult& result,
            int* failures) {
  std::printf("[%d/8] %-34s %s (%s)\n", index, name,
              result.pass ? "PASS" : "FAIL", result.detail.c_str());
  std::fflush(stdout);
  if (!result.pass) ++*failures;
}

}  // namespace

int main() {
  int failures = 0;
  report(1, "separable mistake bound", criterion_theorem1(), &failures);
  report(2, "non-separable mistake bound", criterion_theorem2(), &failures);
  const auto regret = criteria_regret_and_ball();
  report(3, "regret bound", regret.regret, &failures);
  report(4, "projection ball invariant", regret.ball, &failures);
  report(5, "singleton equivalence", criterion_singleton(), &failures);
  report(6, "surrogate loss properties", criterion_surrogates(), &failures);
  report(7, "protocol reproduction", criterion_protocol(), &failures);
  report(8, "parser golden files", criterion_golden(), &failures);
  if (failures == 0)
    std::printf("all acceptance criteria passed\n");
  else
    std::printf("%d acceptance criteria FAILED\n", failures);
  return failures;
}
