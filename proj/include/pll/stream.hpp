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

#ifndef PLL_STREAM_HPP
#define PLL_STREAM_HPP

#include <cstdint>
#include <filesystem>
#include <string>
#include <string_view>
#include <vector>

#include "pll/bounds.hpp"
#include "pll/dataset.hpp"
#include "pll/model.hpp"

namespace pll {

// An ordered partial-label stream. Every example carries the hidden true
// label inside its candidate set, and every candidate set has exactly
// `set_size` labels.
struct PartialLabelStream {
  std::vector<LabeledExample> items;
  std::uint64_t seed = 0;
  int set_size = 0;
  int num_classes = 0;
  int dim = 0;
  std::string generator;  // provenance, recorded in the serialized header

  std::size_t size() const { return items.size(); }
};

enum class GeneratorKind { FromDataset, SeparableSynthetic, NoisySynthetic };

struct SynthesisSpec {
  GeneratorKind kind = GeneratorKind::SeparableSynthetic;
  int num_classes = 0;
  int dim = 0;
  long num_examples = 0;   // T
  int set_size = 1;        // |Y| of every emitted example
  double margin = 0.1;     // accept threshold for the synthetic kinds
  double radius = 1.0;     // instances are sampled on a sphere of this radius
  double noise_rate = 0.0; // label corruption fraction, noisy kind only
  std::uint64_t seed = 0;

  void validate() const;  // throws std::invalid_argument
};

// Attaches a candidate set to every dataset example: Y is the true label
// plus set_size-1 distinct distractors drawn uniformly without replacement
// from the other classes (ascending pool order, one draw block per example
// in dataset order). With `shuffle` the assembled stream order is then
// Fisher-Yates shuffled by the same generator. Deterministic in
// (dataset, set_size, seed, shuffle).
PartialLabelStream synthesize_partial_labels(const Dataset& dataset,
                                             int set_size, std::uint64_t seed,
                                             bool shuffle);

// Rejection-samples a stream that is average linearly separable with margin
// at least spec.margin, certified by a unit-Frobenius reference matrix drawn
// first: instances are uniform on the radius sphere, the true label is the
// reference argmax, and an example is kept only when its average margin
// clears the threshold. Fails with std::runtime_error when the acceptance
// rate over a million attempts drops below 1e-4 (advice: lower the margin or
// the set size). The certificate margin is recomputed from the emitted
// stream.
struct SeparableSynthesis {
  PartialLabelStream stream;
  SeparabilityCertificate certificate;
  long attempts = 0;  // rejection-sampling attempts consumed
};
SeparableSynthesis generate_separable(const SynthesisSpec& spec);

// Same acceptance machinery, then a noise_rate fraction of accepted examples
// has the true label replaced by a uniformly drawn other label and the
// candidate set rebuilt around it, so the stream violates average
// separability with respect to w_star. Corruption draws come from a derived
// substream, leaving the main stream untouched: noise_rate 0 reproduces
// generate_separable byte for byte.
struct NoisySynthesis {
  PartialLabelStream stream;
  WeightMatrix w_star;
  long corrupted = 0;
  long attempts = 0;
};
NoisySynthesis generate_noisy(const SynthesisSpec& spec);

// CSV serialization. Two header lines (a `# key=value ...` metadata line and
// the column names), then one row per example:
//   t,y_true,labels,features
// with labels and features semicolon-joined and doubles printed round-trip
// exact.
std::string stream_to_csv(const PartialLabelStream& stream);
PartialLabelStream stream_from_csv(std::string_view text);
void save_stream_csv(const PartialLabelStream& stream,
                     const std::filesystem::path& path);
PartialLabelStream load_stream_csv(const std::filesystem::path& path);

// Weight matrix file form: first line `d,K`, then d rows of K
// comma-separated values.
std::string weight_matrix_to_csv(const WeightMatrix& w);
WeightMatrix weight_matrix_from_csv(std::string_view text);
void save_weight_matrix_csv(const WeightMatrix& w,
                            const std::filesystem::path& path);
WeightMatrix load_weight_matrix_csv(const std::filesystem::path& path);

}  // namespace pll

#endif  // PLL_STREAM_HPP
