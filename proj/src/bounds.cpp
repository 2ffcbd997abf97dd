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

#include "pll/bounds.hpp"

#include <cmath>
#include <cstdio>
#include <stdexcept>

#include "pll/losses.hpp"

namespace pll {

namespace {

double euclidean_norm(const FeatureVector& x) {
  double sum = 0.0;
  for (const double e : x) sum += e * e;
  return std::sqrt(sum);
}

std::string format_double(double v) {
  char buf[40];
  std::snprintf(buf, sizeof(buf), "%.17g", v);
  return buf;
}

const char* theorem_tag(BoundReport::Theorem t) {
  switch (t) {
    case BoundReport::Theorem::T1: return "T1";
    case BoundReport::Theorem::T2: return "T2";
    case BoundReport::Theorem::T3: return "T3";
  }
  return "?";
}

}  // namespace

double BoundReport::constant(const std::string& name) const {
  for (const auto& [key, value] : constants)
    if (key == name) return value;
  throw std::invalid_argument("BoundReport: no constant named " + name);
}

std::string BoundReport::to_text() const {
  std::string out;
  out += "theorem=";
  out += theorem_tag(theorem);
  out += '\n';
  out += "bound=" + format_double(bound_value) + '\n';
  for (const auto& [key, value] : constants)
    out += key + "=" + format_double(value) + '\n';
  return out;
}

double stream_radius(std::span<const LabeledExample> stream) {
  if (stream.empty())
    throw std::invalid_argument("stream_radius: empty stream");
  double radius = 0.0;
  for (const auto& example : stream)
    radius = std::max(radius, euclidean_norm(example.x));
  return radius;
}

int min_label_set_size(std::span<const LabeledExample> stream) {
  if (stream.empty())
    throw std::invalid_argument("min_label_set_size: empty stream");
  int c = stream[0].candidates.size();
  for (const auto& example : stream)
    c = std::min(c, example.candidates.size());
  return c;
}

BoundReport theorem1_bound(double gamma, double radius, int min_set_size) {
  if (!(gamma > 0.0))
    throw std::invalid_argument("theorem1_bound: gamma must be > 0");
  if (radius < 0.0)
    throw std::invalid_argument("theorem1_bound: radius must be >= 0");
  if (min_set_size < 1)
    throw std::invalid_argument("theorem1_bound: min set size must be >= 1");
  const double c = static_cast<double>(min_set_size);
  const double gamma_sq = gamma * gamma;
  BoundReport report;
  report.theorem = BoundReport::Theorem::T1;
  report.bound_value =
      2.0 / gamma_sq + (1.0 / c + 1.0) * radius * radius / gamma_sq;
  report.constants = {{"gamma", gamma}, {"R", radius}, {"c", c}};
  return report;
}

BoundReport theorem2_bound(std::span<const LabeledExample> stream,
                           const WeightMatrix& w_ref, double gamma) {
  if (stream.empty())
    throw std::invalid_argument("theorem2_bound: empty stream");
  if (!(gamma > 0.0))
    throw std::invalid_argument("theorem2_bound: gamma must be > 0");
  if (std::abs(frobenius_norm(w_ref) - 1.0) > 1e-9)
    throw std::invalid_argument(
        "theorem2_bound: reference matrix must have unit Frobenius norm");

  const double radius = stream_radius(stream);
  const int c = min_label_set_size(stream);
  double deviation_sq = 0.0;  // D^2
  for (const auto& example : stream) {
    const double margin = avg_margin(w_ref, example.x, example.candidates);
    const double d_t = std::max(0.0, gamma - margin);
    const double weighted = static_cast<double>(example.candidates.size()) * d_t;
    deviation_sq += weighted * weighted;
  }

  BoundReport report;
  report.theorem = BoundReport::Theorem::T2;
  if (deviation_sq == 0.0) {
    // Separable at this gamma w.r.t. w_ref; reduces to the separable case.
    const BoundReport t1 = theorem1_bound(gamma, radius, c);
    report.bound_value = t1.bound_value;
    report.constants = {{"gamma", gamma}, {"R", radius},
                        {"c", static_cast<double>(c)}, {"D", 0.0},
                        {"K_const", 1.0 / static_cast<double>(c) + 1.0},
                        {"T", static_cast<double>(stream.size())}};
    return report;
  }

  const double k_const = 1.0 / static_cast<double>(c) + 1.0;
  const double radius_sq = radius * radius;
  const double delta = std::pow(
      (deviation_sq + k_const * deviation_sq * radius_sq) / k_const, 0.25);
  const double z = std::sqrt(1.0 + deviation_sq / (delta * delta));
  const double gamma_sq = gamma * gamma;
  report.bound_value = 2.0 * z * z / gamma_sq +
                       2.0 * k_const * (radius_sq + delta * delta) * z * z /
                           gamma_sq;
  report.constants = {{"gamma", gamma},
                      {"R", radius},
                      {"c", static_cast<double>(c)},
                      {"D", std::sqrt(deviation_sq)},
                      {"K_const", k_const},
                      {"Delta", delta},
                      {"Z", z},
                      {"T", static_cast<double>(stream.size())}};
  return report;
}

BoundReport theorem3_bound(double lambda, double radius, int min_set_size,
                           long num_trials) {
  if (!(lambda > 0.0))
    throw std::invalid_argument("theorem3_bound: lambda must be > 0");
  if (radius < 0.0)
    throw std::invalid_argument("theorem3_bound: radius must be >= 0");
  if (min_set_size < 1)
    throw std::invalid_argument("theorem3_bound: min set size must be >= 1");
  if (num_trials < 2)
    throw std::invalid_argument("theorem3_bound: need at least 2 trials");
  const double c = static_cast<double>(min_set_size);
  const double t = static_cast<double>(num_trials);
  const double g = std::sqrt(lambda) + std::sqrt(1.0 + 1.0 / c) * radius;
  BoundReport report;
  report.theorem = BoundReport::Theorem::T3;
  report.bound_value = g * g * std::log(t) / (lambda * t);
  report.constants = {{"lambda", lambda}, {"R", radius}, {"c", c},
                      {"T", t},           {"G", g}};
  return report;
}

double empirical_regret(std::span<const TrialRecord> records,
                        std::span<const LabeledExample> stream, double lambda,
                        const WeightMatrix& w_star) {
  if (records.size() != stream.size())
    throw std::invalid_argument(
        "empirical_regret: records and stream lengths differ");
  if (records.empty())
    throw std::invalid_argument("empirical_regret: empty inputs");

  const double t = static_cast<double>(records.size());
  double trajectory_sum = 0.0;
  for (const auto& rec : records) trajectory_sum += rec.objective;

  const double reg_term = 0.5 * lambda * frobenius_norm_squared(w_star);
  double comparator_sum = 0.0;
  for (const auto& example : stream)
    comparator_sum += reg_term + aph_loss(w_star, example.x, example.candidates);

  return trajectory_sum / t - comparator_sum / t;
}

BatchComparatorResult batch_comparator(std::span<const LabeledExample> stream,
                                       int num_classes, double lambda,
                                       int epochs, const StepSchedule& step) {
  if (stream.empty())
    throw std::invalid_argument("batch_comparator: empty stream");
  if (!(lambda > 0.0))
    throw std::invalid_argument("batch_comparator: lambda must be > 0");
  if (epochs < 1)
    throw std::invalid_argument("batch_comparator: epochs must be >= 1");
  if (num_classes < 2)
    throw std::invalid_argument("batch_comparator: need at least 2 classes");
  for (const auto& example : stream)
    validate_candidates(example.candidates, num_classes);
  const StepSchedule schedule =
      step ? step
           : StepSchedule([lambda](int epoch) {
               return 1.0 / (lambda * static_cast<double>(epoch));
             });

  const int dim = static_cast<int>(stream[0].x.size());
  const double inv_t = 1.0 / static_cast<double>(stream.size());
  WeightMatrix current(dim, num_classes);
  WeightMatrix best = current;
  double best_objective = 0.0;
  std::vector<double> trace;
  trace.reserve(static_cast<std::size_t>(epochs) + 1);

  // Evaluates F and accumulates the averaged loss subgradient in one pass.
  const auto evaluate = [&](const WeightMatrix& w, WeightMatrix* grad) {
    double loss_sum = 0.0;
    for (const auto& example : stream) {
      const auto scores = score(w, example.x);
      const double margin = avg_margin_from_scores(scores, example.candidates);
      if (margin < 1.0) {
        loss_sum += 1.0 - margin;
        if (grad != nullptr) {
          const auto g =
              aph_subgradient_from_scores(scores, example.x, example.candidates);
          grad->add_scaled(g, inv_t);
        }
      }
    }
    return 0.5 * lambda * frobenius_norm_squared(w) + loss_sum * inv_t;
  };

  for (int epoch = 1; epoch <= epochs; ++epoch) {
    WeightMatrix grad(dim, num_classes);
    const double objective = evaluate(current, &grad);
    grad.add_scaled(current, lambda);  // regularizer term of the gradient
    if (epoch == 1 || objective < best_objective) {
      best_objective = objective;
      best = current;
    }
    trace.push_back(best_objective);

    current.add_scaled(grad, -schedule(epoch));
    current = project_to_ball(current, lambda);
  }
  const double final_objective = evaluate(current, nullptr);
  if (final_objective < best_objective) {
    best_objective = final_objective;
    best = current;
  }
  trace.push_back(best_objective);

  return {std::move(best), std::move(trace)};
}

}  // namespace pll
