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

#include "pll/losses.hpp"

#include <stdexcept>

namespace pll {

namespace {

// Mean of scores over the candidate set, summed in ascending label order.
double mean_over(std::span<const double> scores,
                 const CandidateLabelSet& candidates) {
  double sum = 0.0;
  for (const int cls : candidates) sum += scores[static_cast<std::size_t>(cls - 1)];
  return sum / static_cast<double>(candidates.size());
}

// Best complement class: lowest index attaining max_{j not in Y} score_j.
int argmax_complement(std::span<const double> scores,
                      const CandidateLabelSet& candidates) {
  const int num_classes = static_cast<int>(scores.size());
  int best = 0;
  double best_score = 0.0;
  auto it = candidates.begin();
  for (int cls = 1; cls <= num_classes; ++cls) {
    if (it != candidates.end() && *it == cls) {
      ++it;
      continue;
    }
    const double s = scores[static_cast<std::size_t>(cls - 1)];
    if (best == 0 || s > best_score) {
      best = cls;
      best_score = s;
    }
  }
  return best;  // 0 never reached: complement checked nonempty by callers
}

}  // namespace

void validate_candidates(const CandidateLabelSet& candidates, int num_classes) {
  if (candidates.max_label() > num_classes)
    throw std::invalid_argument("losses: class index exceeds K");
  if (candidates.size() >= num_classes)
    throw std::invalid_argument(
        "losses: candidate set covers all classes, complement is empty");
}

int ambiguous_loss(int predicted, const CandidateLabelSet& candidates) {
  return candidates.contains(predicted) ? 0 : 1;
}

double avg_margin_from_scores(std::span<const double> scores,
                              const CandidateLabelSet& candidates) {
  const int j = argmax_complement(scores, candidates);
  return mean_over(scores, candidates) - scores[static_cast<std::size_t>(j - 1)];
}

double max_margin_from_scores(std::span<const double> scores,
                              const CandidateLabelSet& candidates) {
  const int i = argmax_over(scores, candidates.labels());
  const int j = argmax_complement(scores, candidates);
  return scores[static_cast<std::size_t>(i - 1)] -
         scores[static_cast<std::size_t>(j - 1)];
}

double avg_margin(const WeightMatrix& w, const FeatureVector& x,
                  const CandidateLabelSet& candidates) {
  validate_candidates(candidates, w.num_classes());
  const auto scores = score(w, x);
  return avg_margin_from_scores(scores, candidates);
}

double max_margin(const WeightMatrix& w, const FeatureVector& x,
                  const CandidateLabelSet& candidates) {
  validate_candidates(candidates, w.num_classes());
  const auto scores = score(w, x);
  return max_margin_from_scores(scores, candidates);
}

double aph_loss(const WeightMatrix& w, const FeatureVector& x,
                const CandidateLabelSet& candidates) {
  const double m = avg_margin(w, x, candidates);
  return m < 1.0 ? 1.0 - m : 0.0;
}

double mph_loss(const WeightMatrix& w, const FeatureVector& x,
                const CandidateLabelSet& candidates) {
  const double m = max_margin(w, x, candidates);
  return m < 1.0 ? 1.0 - m : 0.0;
}

GradientMatrix aph_subgradient_from_scores(std::span<const double> scores,
                                           const FeatureVector& x,
                                           const CandidateLabelSet& candidates) {
  const int num_classes = static_cast<int>(scores.size());
  const int dim = static_cast<int>(x.size());
  GradientMatrix grad(dim, num_classes);
  const double m = avg_margin_from_scores(scores, candidates);
  if (m >= 1.0) return grad;

  const double inv_size = 1.0 / static_cast<double>(candidates.size());
  for (const int cls : candidates) {
    auto col = grad.column(cls);
    for (int i = 0; i < dim; ++i)
      col[static_cast<std::size_t>(i)] = -x[static_cast<std::size_t>(i)] * inv_size;
  }
  const int j = argmax_complement(scores, candidates);
  auto col = grad.column(j);
  for (int i = 0; i < dim; ++i)
    col[static_cast<std::size_t>(i)] = x[static_cast<std::size_t>(i)];
  return grad;
}

GradientMatrix mph_subgradient_from_scores(std::span<const double> scores,
                                           const FeatureVector& x,
                                           const CandidateLabelSet& candidates) {
  const int num_classes = static_cast<int>(scores.size());
  const int dim = static_cast<int>(x.size());
  GradientMatrix grad(dim, num_classes);
  const double m = max_margin_from_scores(scores, candidates);
  if (m >= 1.0) return grad;

  const int i_best = argmax_over(scores, candidates.labels());
  const int j_best = argmax_complement(scores, candidates);
  auto neg = grad.column(i_best);
  auto pos = grad.column(j_best);
  for (int i = 0; i < dim; ++i) {
    neg[static_cast<std::size_t>(i)] = -x[static_cast<std::size_t>(i)];
    pos[static_cast<std::size_t>(i)] = x[static_cast<std::size_t>(i)];
  }
  return grad;
}

GradientMatrix aph_subgradient(const WeightMatrix& w, const FeatureVector& x,
                               const CandidateLabelSet& candidates) {
  validate_candidates(candidates, w.num_classes());
  const auto scores = score(w, x);
  return aph_subgradient_from_scores(scores, x, candidates);
}

GradientMatrix mph_subgradient(const WeightMatrix& w, const FeatureVector& x,
                               const CandidateLabelSet& candidates) {
  validate_candidates(candidates, w.num_classes());
  const auto scores = score(w, x);
  return mph_subgradient_from_scores(scores, x, candidates);
}

std::vector<int> complement_of(const CandidateLabelSet& candidates,
                               int num_classes) {
  validate_candidates(candidates, num_classes);
  std::vector<int> out;
  out.reserve(static_cast<std::size_t>(num_classes - candidates.size()));
  auto it = candidates.begin();
  for (int cls = 1; cls <= num_classes; ++cls) {
    if (it != candidates.end() && *it == cls) {
      ++it;
      continue;
    }
    out.push_back(cls);
  }
  return out;
}

}  // namespace pll
