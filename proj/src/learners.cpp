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

#include "pll/learners.hpp"

#include <cmath>
#include <stdexcept>

namespace pll {

bool is_pegasos(Algorithm a) {
  return a == Algorithm::AvgPegasos || a == Algorithm::MaxPegasos ||
         a == Algorithm::ExactPegasos;
}

bool is_exact(Algorithm a) {
  return a == Algorithm::ExactPerceptron || a == Algorithm::ExactPegasos;
}

bool uses_max_loss(Algorithm a) {
  return a == Algorithm::MaxPerceptron || a == Algorithm::MaxPegasos;
}

std::string_view algorithm_name(Algorithm a) {
  switch (a) {
    case Algorithm::AvgPerceptron: return "avg-perceptron";
    case Algorithm::MaxPerceptron: return "max-perceptron";
    case Algorithm::AvgPegasos: return "avg-pegasos";
    case Algorithm::MaxPegasos: return "max-pegasos";
    case Algorithm::ExactPerceptron: return "exact-perceptron";
    case Algorithm::ExactPegasos: return "exact-pegasos";
  }
  throw std::invalid_argument("algorithm_name: unknown algorithm");
}

Algorithm algorithm_from_name(std::string_view name) {
  if (name == "avg-perceptron") return Algorithm::AvgPerceptron;
  if (name == "max-perceptron") return Algorithm::MaxPerceptron;
  if (name == "avg-pegasos") return Algorithm::AvgPegasos;
  if (name == "max-pegasos") return Algorithm::MaxPegasos;
  if (name == "exact-perceptron") return Algorithm::ExactPerceptron;
  if (name == "exact-pegasos") return Algorithm::ExactPegasos;
  throw std::invalid_argument("unknown learner name: " + std::string(name));
}

void LearnerConfig::validate() const {
  if (num_classes < 2)
    throw std::invalid_argument("LearnerConfig: need at least 2 classes");
  if (dim < 1) throw std::invalid_argument("LearnerConfig: dim must be >= 1");
  if (is_pegasos(algorithm)) {
    if (!(lambda > 0.0) || !std::isfinite(lambda))
      throw std::invalid_argument("LearnerConfig: lambda must be > 0");
  } else {
    if (!(eta > 0.0) || !std::isfinite(eta))
      throw std::invalid_argument("LearnerConfig: eta must be > 0");
  }
}

OnlineLearner::OnlineLearner(const LearnerConfig& config) : config_(config) {
  config_.validate();
  weights_ = WeightMatrix(config_.dim, config_.num_classes);
}

TrialRecord OnlineLearner::step(const FeatureVector& x,
                                const CandidateLabelSet& candidates,
                                int true_label) {
  if (is_exact(config_.algorithm) && candidates.size() != 1)
    throw std::invalid_argument(
        "step: exact-label learner requires a singleton candidate set");
  validate_candidates(candidates, config_.num_classes);

  const auto scores = score(weights_, x);

  TrialRecord rec;
  rec.trial = trial_;
  rec.predicted = argmax_all(scores);
  rec.ambiguous_loss = ambiguous_loss(rec.predicted, candidates);
  rec.true_label_loss = rec.predicted != true_label ? 1 : 0;

  const bool max_loss = uses_max_loss(config_.algorithm);
  const double margin = max_loss ? max_margin_from_scores(scores, candidates)
                                 : avg_margin_from_scores(scores, candidates);
  rec.surrogate = margin < 1.0 ? 1.0 - margin : 0.0;
  rec.update_applied = rec.surrogate > 0.0;

  const bool pegasos = is_pegasos(config_.algorithm);
  rec.objective = pegasos
                      ? 0.5 * config_.lambda * frobenius_norm_squared(weights_) +
                            rec.surrogate
                      : rec.surrogate;

  const double direction = config_.negate_updates ? 1.0 : -1.0;
  if (!pegasos) {
    if (rec.update_applied) {
      const auto grad = max_loss
                            ? mph_subgradient_from_scores(scores, x, candidates)
                            : aph_subgradient_from_scores(scores, x, candidates);
      weights_.add_scaled(grad, direction * config_.eta);
    }
  } else {
    const double eta_t = 1.0 / (config_.lambda * static_cast<double>(trial_));
    if (rec.update_applied) {
      const auto grad = max_loss
                            ? mph_subgradient_from_scores(scores, x, candidates)
                            : aph_subgradient_from_scores(scores, x, candidates);
      weights_.scale(1.0 - eta_t * config_.lambda);
      weights_.add_scaled(grad, direction * eta_t);
      weights_ = project_to_ball(weights_, config_.lambda);
    } else if (config_.always_shrink) {
      weights_.scale(1.0 - eta_t * config_.lambda);
      weights_ = project_to_ball(weights_, config_.lambda);
    }
  }

  ++trial_;
  return rec;
}

std::vector<TrialRecord> run_sequence(const LearnerConfig& config,
                                      std::span<const LabeledExample> stream) {
  OnlineLearner learner(config);
  std::vector<TrialRecord> records;
  records.reserve(stream.size());
  const bool exact = is_exact(config.algorithm);
  for (const auto& example : stream) {
    if (exact) {
      records.push_back(learner.step(example.x,
                                     CandidateLabelSet({example.true_label}),
                                     example.true_label));
    } else {
      records.push_back(
          learner.step(example.x, example.candidates, example.true_label));
    }
  }
  return records;
}

}  // namespace pll
