// Copyright 2026 The pllearn Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#ifndef PLL_HARNESS_HPP
#define PLL_HARNESS_HPP

#include <filesystem>
#include <map>
#include <optional>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include "pll/bounds.hpp"
#include "pll/dataset.hpp"
#include "pll/learners.hpp"
#include "pll/stream.hpp"

namespace pll {

// Learner description without the stream-dependent shape; the harness fills
// in K and d per source.
struct LearnerSpec {
  Algorithm algorithm = Algorithm::AvgPerceptron;
  double eta = 1.0;
  double lambda = 1.0;
  bool always_shrink = false;
  bool negate_updates = false;

  LearnerConfig to_config(int num_classes, int dim) const;
};

// Repeated-runs experiment: for every (learner, set size) pair, `runs`
// independent runs are made with substream seeds base_seed + run_index; the
// per-trial cumulative error rates are averaged pointwise across runs.
struct ExperimentConfig {
  const Dataset* dataset = nullptr;          // exactly one source is set
  std::optional<SynthesisSpec> synthetic;
  std::vector<LearnerSpec> learners;
  std::vector<int> set_sizes;
  int runs = 100;
  long rounds = 0;         // 0: one pass over the dataset / synthetic T
  std::uint64_t base_seed = 0;
  bool shuffle = false;    // reshuffle example order inside each run
  int threads = 0;         // 0: hardware concurrency

  std::string source_name() const;
};

struct ErrorCurve {
  // Point t (0-based index, trial t+1) is the mean over runs of the
  // cumulative error rate against the true label up to that trial.
  std::vector<double> true_error;
  // Same, against candidate-set membership (the ambiguous loss).
  std::vector<double> ambiguous_error;
  int runs = 0;
  std::string fingerprint;
};

using CurveKey = std::pair<std::string, int>;  // (learner token, set size)

std::map<CurveKey, ErrorCurve> run_experiment(const ExperimentConfig& config);

// One bound-conformance measurement: a generated stream, the learner's
// mistake and update counts on it, and the evaluated bound.
struct ConformanceCell {
  SynthesisSpec spec;
  double eval_gamma = 0.0;  // margin the bound was evaluated at
  long mistakes = 0;
  long updates = 0;
  BoundReport report;
  bool pass = false;
  std::string error;  // nonempty when generation failed; campaign continues
};

// Separable specs yield one cell each, checked against the separable-case
// bound at the certificate margin. Noisy specs yield one cell per entry of
// `eval_gammas`, checked against the non-separable bound computed from the
// generating reference matrix.
std::vector<ConformanceCell> mistake_campaign(
    std::span<const SynthesisSpec> specs, std::span<const double> eval_gammas,
    const LearnerSpec& learner, int threads = 0);

// One regret-conformance measurement for the regularized learner.
struct RegretCell {
  SynthesisSpec spec;
  double lambda = 0.0;
  double regret = 0.0;
  // max over trials of ||W^t|| - 1/sqrt(lambda), checked after every trial.
  double max_ball_excess = 0.0;
  BoundReport report;
  bool pass = false;
  std::string error;
};

std::vector<RegretCell> regret_campaign(std::span<const SynthesisSpec> specs,
                                        std::span<const double> lambdas,
                                        int comparator_epochs = 500,
                                        int threads = 0);

// Writes one CSV per curve (`<learner>_s<size>.csv`, header
// `trial,avg_true_error,avg_ambiguous_error`) plus manifest.csv listing the
// emitted files; the effective configuration is echoed as a leading comment
// line of the manifest.
struct EmittedFiles {
  std::vector<std::filesystem::path> curve_files;
  std::filesystem::path manifest;
};

EmittedFiles emit_curves(const std::map<CurveKey, ErrorCurve>& curves,
                         const ExperimentConfig& config,
                         const std::filesystem::path& out_dir);

}  // namespace pll

#endif  // PLL_HARNESS_HPP
