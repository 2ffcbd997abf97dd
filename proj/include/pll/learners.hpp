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

#ifndef PLL_LEARNERS_HPP
#define PLL_LEARNERS_HPP

#include <cstdint>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "pll/losses.hpp"
#include "pll/model.hpp"

namespace pll {

// The six step-wise online learners. The partial-label variants differ only
// in which surrogate drives the update (average vs. max prediction hinge)
// and whether the update is a plain subgradient step (Perceptron family) or
// a shrink-step-project iteration on the regularized objective (Pegasos
// family). The exact-label baselines are the same machinery restricted to
// singleton candidate sets.
enum class Algorithm {
  AvgPerceptron,
  MaxPerceptron,
  AvgPegasos,
  MaxPegasos,
  ExactPerceptron,
  ExactPegasos,
};

bool is_pegasos(Algorithm a);
bool is_exact(Algorithm a);
bool uses_max_loss(Algorithm a);

// Kebab-case token used by the CLI and in emitted manifests,
// e.g. "avg-perceptron".
std::string_view algorithm_name(Algorithm a);
Algorithm algorithm_from_name(std::string_view name);  // throws on unknown

struct LearnerConfig {
  Algorithm algorithm = Algorithm::AvgPerceptron;
  int num_classes = 0;
  int dim = 0;
  double eta = 1.0;     // Perceptron step size, must be > 0
  double lambda = 1.0;  // Pegasos regularization constant, must be > 0
  // Pegasos zero-loss trials leave the weights untouched. Setting this runs
  // the shrink-and-project step on those trials as well (the behavior of the
  // original exact-label solver), for comparison experiments.
  bool always_shrink = false;
  // Test hook: flips the sign of every loss-driven update. Used as a
  // negative control by `bounds-check --break-update`.
  bool negate_updates = false;

  void validate() const;  // throws std::invalid_argument
};

struct TrialRecord {
  long trial = 0;          // 1-based trial index
  int predicted = 0;       // argmax prediction from the pre-update weights
  int ambiguous_loss = 0;  // 1 iff predicted lies outside the candidate set
  int true_label_loss = 0; // 1 iff predicted differs from the hidden label
  double surrogate = 0.0;  // hinge loss value at the pre-update weights
  // (lambda/2)||W||^2 + surrogate at the pre-update weights for the Pegasos
  // family; equal to the surrogate for the Perceptron family (no
  // regularizer).
  double objective = 0.0;
  bool update_applied = false;  // true iff surrogate > 0
};

// Single-owner mutable learner state. Weights start at zero (which also
// satisfies the Pegasos ball constraint); the trial counter starts at 1.
class OnlineLearner {
 public:
  explicit OnlineLearner(const LearnerConfig& config);

  // One online trial: predict from the current weights, then reveal the
  // candidate set, compute the surrogate, and update. `true_label` is used
  // only to fill the record's evaluation fields. Exact-label learners
  // require a singleton candidate set.
  TrialRecord step(const FeatureVector& x, const CandidateLabelSet& candidates,
                   int true_label);

  const WeightMatrix& weights() const { return weights_; }
  long trial() const { return trial_; }
  const LearnerConfig& config() const { return config_; }

 private:
  LearnerConfig config_;
  WeightMatrix weights_;
  long trial_ = 1;
};

// Drives a learner over a stream. Exact-label learners are fed the singleton
// {true_label} instead of the stream's candidate set. Pure function of its
// inputs: identical inputs give byte-identical records.
std::vector<TrialRecord> run_sequence(const LearnerConfig& config,
                                      std::span<const LabeledExample> stream);

}  // namespace pll

#endif  // PLL_LEARNERS_HPP
