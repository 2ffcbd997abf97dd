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

#ifndef PLL_MODEL_HPP
#define PLL_MODEL_HPP

#include <span>
#include <vector>

namespace pll {

// Class indices are 1-based (1..K) everywhere in the public API; feature
// positions are plain 0-based vector offsets. Ingestion maps arbitrary
// external labels onto the contiguous 1..K range.
using FeatureVector = std::vector<double>;

// Candidate label set Y: sorted, unique class indices. The true label of an
// example is guaranteed to be a member. The complement (relative to 1..K)
// must be nonempty wherever a loss is evaluated, i.e. |Y| <= K-1 there.
class CandidateLabelSet {
 public:
  CandidateLabelSet() = default;
  // Throws std::invalid_argument on an empty set, duplicates, or an index < 1.
  explicit CandidateLabelSet(std::vector<int> labels);
  CandidateLabelSet(std::initializer_list<int> labels);

  int size() const { return static_cast<int>(labels_.size()); }
  bool contains(int cls) const;
  const std::vector<int>& labels() const { return labels_; }
  auto begin() const { return labels_.begin(); }
  auto end() const { return labels_.end(); }
  int max_label() const { return labels_.back(); }

  bool operator==(const CandidateLabelSet&) const = default;

 private:
  std::vector<int> labels_;
};

// Dense K-column linear model state: column k holds the weight vector of
// class k. Storage is column-major, d rows by K columns.
class WeightMatrix {
 public:
  WeightMatrix() = default;
  // Zero-initialized d x K matrix. Throws on d < 1 or K < 2.
  WeightMatrix(int dim, int num_classes);

  int dim() const { return dim_; }
  int num_classes() const { return num_classes_; }

  double& at(int row, int cls) { return data_[offset(row, cls)]; }
  double at(int row, int cls) const { return data_[offset(row, cls)]; }

  std::span<double> column(int cls);
  std::span<const double> column(int cls) const;

  std::span<const double> data() const { return data_; }
  std::span<double> data() { return data_; }

  // this += alpha * other. Shapes must match.
  void add_scaled(const WeightMatrix& other, double alpha);
  void scale(double alpha);

  bool operator==(const WeightMatrix&) const = default;

 private:
  std::size_t offset(int row, int cls) const {
    return static_cast<std::size_t>(cls - 1) * static_cast<std::size_t>(dim_) +
           static_cast<std::size_t>(row);
  }

  int dim_ = 0;
  int num_classes_ = 0;
  std::vector<double> data_;
};

// One stream element: instance, its candidate label set, and the hidden true
// label (used only for evaluation, never shown to a learner).
struct LabeledExample {
  FeatureVector x;
  CandidateLabelSet candidates;
  int true_label = 0;
};

// Per-class scores <w_i, x>, i = 1..K. Throws on dimension mismatch.
std::vector<double> score(const WeightMatrix& w, const FeatureVector& x);

// argmax_i <w_i, x> over all classes; ties break to the lowest class index.
int predict(const WeightMatrix& w, const FeatureVector& x);

// argmax over an explicit set of class indices, lowest index on ties.
// `set` must be nonempty with indices in [1, K].
int argmax_in_set(const WeightMatrix& w, const FeatureVector& x,
                  const CandidateLabelSet& set);

// Same argmax, working on precomputed scores. `labels` must be nonempty,
// sorted ascending, indices in [1, scores.size()].
int argmax_over(std::span<const double> scores, std::span<const int> labels);

// Lowest class index attaining the maximum of a full score vector.
int argmax_all(std::span<const double> scores);

double frobenius_norm(const WeightMatrix& w);
double frobenius_norm_squared(const WeightMatrix& w);

// Frobenius inner product <a, b>.
double frobenius_dot(const WeightMatrix& a, const WeightMatrix& b);

// Projection onto the ball {W : ||W|| <= 1/sqrt(lambda)}. A matrix already
// inside the ball is returned unchanged; otherwise it is scaled down, with
// the scale nudged by ulps until the recomputed norm is inside, so the
// operation is exactly idempotent. Throws on lambda <= 0.
WeightMatrix project_to_ball(const WeightMatrix& w, double lambda);

}  // namespace pll

#endif  // PLL_MODEL_HPP
