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

#include "pll/model.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>
#include <string>

namespace pll {

CandidateLabelSet::CandidateLabelSet(std::vector<int> labels)
    : labels_(std::move(labels)) {
  if (labels_.empty())
    throw std::invalid_argument("CandidateLabelSet: set must be nonempty");
  std::sort(labels_.begin(), labels_.end());
  if (labels_.front() < 1)
    throw std::invalid_argument("CandidateLabelSet: class indices start at 1");
  if (std::adjacent_find(labels_.begin(), labels_.end()) != labels_.end())
    throw std::invalid_argument("CandidateLabelSet: duplicate class index");
}

CandidateLabelSet::CandidateLabelSet(std::initializer_list<int> labels)
    : CandidateLabelSet(std::vector<int>(labels)) {}

bool CandidateLabelSet::contains(int cls) const {
  return std::binary_search(labels_.begin(), labels_.end(), cls);
}

WeightMatrix::WeightMatrix(int dim, int num_classes)
    : dim_(dim), num_classes_(num_classes) {
  if (dim < 1) throw std::invalid_argument("WeightMatrix: dim must be >= 1");
  if (num_classes < 2)
    throw std::invalid_argument("WeightMatrix: need at least 2 classes");
  data_.assign(static_cast<std::size_t>(dim) * static_cast<std::size_t>(num_classes),
               0.0);
}

std::span<double> WeightMatrix::column(int cls) {
  return std::span<double>(data_).subspan(offset(0, cls),
                                          static_cast<std::size_t>(dim_));
}

std::span<const double> WeightMatrix::column(int cls) const {
  return std::span<const double>(data_).subspan(offset(0, cls),
                                                static_cast<std::size_t>(dim_));
}

void WeightMatrix::add_scaled(const WeightMatrix& other, double alpha) {
  if (other.dim_ != dim_ || other.num_classes_ != num_classes_)
    throw std::invalid_argument("WeightMatrix::add_scaled: shape mismatch");
  for (std::size_t i = 0; i < data_.size(); ++i) data_[i] += alpha * other.data_[i];
}

void WeightMatrix::scale(double alpha) {
  for (auto& e : data_) e *= alpha;
}

std::vector<double> score(const WeightMatrix& w, const FeatureVector& x) {
  if (static_cast<int>(x.size()) != w.dim())
    throw std::invalid_argument(
        "score: dimension mismatch, model expects d=" + std::to_string(w.dim()) +
        " but instance has d=" + std::to_string(x.size()));
  std::vector<double> scores(static_cast<std::size_t>(w.num_classes()));
  for (int k = 1; k <= w.num_classes(); ++k) {
    const auto col = w.column(k);
    double s = 0.0;
    for (int i = 0; i < w.dim(); ++i) s += col[static_cast<std::size_t>(i)] * x[static_cast<std::size_t>(i)];
    scores[static_cast<std::size_t>(k - 1)] = s;
  }
  return scores;
}

int argmax_over(std::span<const double> scores, std::span<const int> labels) {
  if (labels.empty())
    throw std::invalid_argument("argmax_over: empty label set");
  int best = labels[0];
  double best_score = scores[static_cast<std::size_t>(best - 1)];
  for (std::size_t i = 1; i < labels.size(); ++i) {
    const int cls = labels[i];
    if (cls < 1 || static_cast<std::size_t>(cls) > scores.size())
      throw std::invalid_argument("argmax_over: class index out of range");
    const double s = scores[static_cast<std::size_t>(cls - 1)];
    if (s > best_score) {
      best = cls;
      best_score = s;
    }
  }
  return best;
}

int argmax_all(std::span<const double> scores) {
  if (scores.empty()) throw std::invalid_argument("argmax_all: empty scores");
  int best = 1;
  double best_score = scores[0];
  for (std::size_t i = 1; i < scores.size(); ++i) {
    if (scores[i] > best_score) {
      best = static_cast<int>(i) + 1;
      best_score = scores[i];
    }
  }
  return best;
}

int predict(const WeightMatrix& w, const FeatureVector& x) {
  const auto scores = score(w, x);
  return argmax_all(scores);
}

int argmax_in_set(const WeightMatrix& w, const FeatureVector& x,
                  const CandidateLabelSet& set) {
  if (set.max_label() > w.num_classes())
    throw std::invalid_argument("argmax_in_set: class index exceeds K");
  const auto scores = score(w, x);
  return argmax_over(scores, set.labels());
}

double frobenius_norm_squared(const WeightMatrix& w) {
  double sum = 0.0;
  for (const double e : w.data()) sum += e * e;
  return sum;
}

double frobenius_norm(const WeightMatrix& w) {
  return std::sqrt(frobenius_norm_squared(w));
}

double frobenius_dot(const WeightMatrix& a, const WeightMatrix& b) {
  if (a.dim() != b.dim() || a.num_classes() != b.num_classes())
    throw std::invalid_argument("frobenius_dot: shape mismatch");
  double sum = 0.0;
  const auto da = a.data();
  const auto db = b.data();
  for (std::size_t i = 0; i < da.size(); ++i) sum += da[i] * db[i];
  return sum;
}

WeightMatrix project_to_ball(const WeightMatrix& w, double lambda) {
  if (!(lambda > 0.0))
    throw std::invalid_argument("project_to_ball: lambda must be > 0");
  const double target = 1.0 / std::sqrt(lambda);
  const double norm = frobenius_norm(w);
  if (!(norm > target)) return w;  // includes norm == 0
  double factor = target / norm;
  WeightMatrix out = w;
  out.scale(factor);
  // Rounding can leave the rescaled norm a hair above the target; nudge the
  // factor down ulp by ulp until the recomputed norm is inside. This makes
  // the projection exactly idempotent.
  while (frobenius_norm(out) > target) {
    factor = std::nextafter(factor, 0.0);
    out = w;
    out.scale(factor);
  }
  return out;
}

}  // namespace pll
