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

#ifndef PLL_LOSSES_HPP
#define PLL_LOSSES_HPP

#include <span>

#include "pll/model.hpp"

namespace pll {

// Per-class subgradient of a surrogate loss, same shape as the weight matrix
// it was taken at: column k holds the partial derivative block for class k.
using GradientMatrix = WeightMatrix;

// Ambiguous 0-1 loss: 1 iff the predicted class lies outside the candidate
// set.
int ambiguous_loss(int predicted, const CandidateLabelSet& candidates);

// Signed margins of the two separability notions. Both are
//   (aggregate of scores over Y) - (max score over the complement of Y),
// with aggregate = mean for the average variant and max for the max variant.
// The complement is taken within 1..K; it must be nonempty (|Y| <= K-1),
// otherwise std::invalid_argument is thrown.
double avg_margin(const WeightMatrix& w, const FeatureVector& x,
                  const CandidateLabelSet& candidates);
double max_margin(const WeightMatrix& w, const FeatureVector& x,
                  const CandidateLabelSet& candidates);

// Margin evaluation on precomputed scores (same tie-break and arithmetic).
double avg_margin_from_scores(std::span<const double> scores,
                              const CandidateLabelSet& candidates);
double max_margin_from_scores(std::span<const double> scores,
                              const CandidateLabelSet& candidates);

// Average prediction hinge loss:
//   [1 - (1/|Y|) sum_{i in Y} <w_i,x> + max_{j not in Y} <w_j,x>]_+
// Computed as [1 - avg_margin]_+ so the loss-positivity gate and the
// subgradient's margin test agree bit for bit.
double aph_loss(const WeightMatrix& w, const FeatureVector& x,
                const CandidateLabelSet& candidates);

// Max prediction hinge loss:
//   [1 - max_{i in Y} <w_i,x> + max_{j not in Y} <w_j,x>]_+
double mph_loss(const WeightMatrix& w, const FeatureVector& x,
                const CandidateLabelSet& candidates);

// Subgradient of the average prediction hinge loss. Zero matrix when the
// margin is >= 1; otherwise column k is -x/|Y| for k in Y, +x for the single
// complement class with the highest score (lowest index on ties), and zero
// for every other column.
GradientMatrix aph_subgradient(const WeightMatrix& w, const FeatureVector& x,
                               const CandidateLabelSet& candidates);

// Subgradient of the max prediction hinge loss. Zero matrix when the margin
// is >= 1; otherwise -x on the best-scoring column inside Y and +x on the
// best-scoring column of the complement (lowest index on ties).
GradientMatrix mph_subgradient(const WeightMatrix& w, const FeatureVector& x,
                               const CandidateLabelSet& candidates);

// Subgradients built from already-computed scores (the learner's hot path).
// Bitwise identical to the matrix-based forms above.
GradientMatrix aph_subgradient_from_scores(std::span<const double> scores,
                                           const FeatureVector& x,
                                           const CandidateLabelSet& candidates);
GradientMatrix mph_subgradient_from_scores(std::span<const double> scores,
                                           const FeatureVector& x,
                                           const CandidateLabelSet& candidates);

// Throws std::invalid_argument unless indices fit in 1..K and the complement
// of the set is nonempty (|Y| <= K-1).
void validate_candidates(const CandidateLabelSet& candidates, int num_classes);

// Classes of 1..K not in `candidates`. Throws if the complement is empty.
std::vector<int> complement_of(const CandidateLabelSet& candidates,
                               int num_classes);

}  // namespace pll

#endif  // PLL_LOSSES_HPP
