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

#ifndef PLL_BOUNDS_HPP
#define PLL_BOUNDS_HPP

#include <functional>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include "pll/learners.hpp"
#include "pll/model.hpp"

namespace pll {

// Witness that a stream is linearly separable in the partial-label sense:
// a unit-Frobenius reference matrix and the margin it certifies. `gamma` is
// always the recomputed minimum margin over the emitted stream, never the
// requested target.
struct SeparabilityCertificate {
  enum class Kind { Average, Max };
  WeightMatrix w_star;
  double gamma = 0.0;
  Kind kind = Kind::Average;
};

// An evaluated closed-form bound together with every intermediate constant,
// serializable as one `key=value` line per entry for golden-file tests.
struct BoundReport {
  enum class Theorem { T1, T2, T3 };
  Theorem theorem = Theorem::T1;
  double bound_value = 0.0;
  std::vector<std::pair<std::string, double>> constants;

  double constant(const std::string& name) const;  // throws if absent
  std::string to_text() const;
};

// R = max_t ||x^t||. Throws on an empty stream.
double stream_radius(std::span<const LabeledExample> stream);

// c = min_t |Y^t|. Throws on an empty stream.
int min_label_set_size(std::span<const LabeledExample> stream);

// Separable-case mistake bound: 2/gamma^2 + (1/c + 1) R^2/gamma^2.
BoundReport theorem1_bound(double gamma, double radius, int min_set_size);

// Non-separable mistake bound evaluated against a unit-norm reference matrix
// at a fixed gamma. Per-example deviations d^t = max{0, gamma - avg margin}
// aggregate into D^2 = sum (|Y^t| d^t)^2; with k = 1/c + 1 the bound is
//   2 Z^2/gamma^2 + 2 k (R^2 + Delta^2) / (gamma/Z)^2,
// Delta = [(D^2 + k D^2 R^2)/k]^{1/4}, Z = sqrt(1 + D^2/Delta^2).
// When D = 0 the stream is separable at this gamma and the bound value
// falls back to the separable-case formula.
BoundReport theorem2_bound(std::span<const LabeledExample> stream,
                           const WeightMatrix& w_ref, double gamma);

// Regret bound for the regularized learner over T trials:
//   G^2 ln T / (lambda T),  G = sqrt(lambda) + sqrt(1 + 1/c) R.
BoundReport theorem3_bound(double lambda, double radius, int min_set_size,
                           long num_trials);

// Average online objective of a recorded trajectory minus the average
// objective of a fixed comparator matrix, both under the average prediction
// hinge loss:
//   (1/T) sum_t f(W^t, x^t, Y^t) - (1/T) sum_t f(W_star, x^t, Y^t),
// f(W, x, Y) = (lambda/2)||W||^2 + L_APH(W, x, Y). The trajectory term is
// read from the records' objective field. May be negative when the
// comparator is suboptimal for this trajectory; reported as-is.
double empirical_regret(std::span<const TrialRecord> records,
                        std::span<const LabeledExample> stream, double lambda,
                        const WeightMatrix& w_star);

// Full-batch projected subgradient descent on
//   F(W) = (lambda/2)||W||^2 + (1/T) sum_t L_APH(W, x^t, Y^t),
// used as the fixed-comparator oracle for regret evaluation. Starts from
// zero, projects onto the lambda-ball each epoch, and returns the best
// iterate seen; the recorded trace holds the best objective so far per
// epoch, so it is nonincreasing by construction.
struct BatchComparatorResult {
  WeightMatrix w;
  std::vector<double> objective_trace;
};

using StepSchedule = std::function<double(int epoch)>;  // epoch counts from 1

// `num_classes` is passed explicitly: the span alone cannot distinguish a
// class that never appears in a candidate set from one that does not exist,
// and the complement of Y depends on it.
BatchComparatorResult batch_comparator(std::span<const LabeledExample> stream,
                                       int num_classes, double lambda,
                                       int epochs,
                                       const StepSchedule& step = {});

}  // namespace pll

#endif  // PLL_BOUNDS_HPP
