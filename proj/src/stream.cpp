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

#include "pll/stream.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <sstream>
#include <stdexcept>

#include "pll/losses.hpp"
#include "pll/rng.hpp"

namespace pll {

namespace {

constexpr std::uint64_t kNoiseSubstreamSalt = 0x9e3779b97f4a7c15ULL;

std::string format_double(double v) {
  char buf[40];
  std::snprintf(buf, sizeof(buf), "%.17g", v);
  return buf;
}

// Ascending pool of classes in 1..K excluding `skip`.
std::vector<int> other_classes(int num_classes, int skip) {
  std::vector<int> pool;
  pool.reserve(static_cast<std::size_t>(num_classes) - 1);
  for (int cls = 1; cls <= num_classes; ++cls)
    if (cls != skip) pool.push_back(cls);
  return pool;
}

CandidateLabelSet build_candidate_set(int true_label, int num_classes,
                                      int set_size, Rng& rng) {
  std::vector<int> labels{true_label};
  if (set_size > 1) {
    auto distractors =
        rng.sample_without_replacement(other_classes(num_classes, true_label),
                                       set_size - 1);
    labels.insert(labels.end(), distractors.begin(), distractors.end());
  }
  return CandidateLabelSet(std::move(labels));
}

WeightMatrix sample_unit_reference(int dim, int num_classes, Rng& rng) {
  WeightMatrix w(dim, num_classes);
  double norm = 0.0;
  do {
    for (int cls = 1; cls <= num_classes; ++cls) {
      auto col = w.column(cls);
      for (auto& e : col) e = rng.normal();
    }
    norm = frobenius_norm(w);
  } while (norm == 0.0);
  w.scale(1.0 / norm);
  return w;
}

// Kind-specific provenance tokens only; seed, set size, and shape are
// serialized from the stream fields themselves.
std::string spec_note(const char* kind, const SynthesisSpec& spec) {
  std::ostringstream oss;
  oss << "kind=" << kind << " gamma=" << format_double(spec.margin)
      << " radius=" << format_double(spec.radius)
      << " noise=" << format_double(spec.noise_rate);
  return oss.str();
}

// Shared rejection loop of the two synthetic generators. `corrupt` is
// invoked on each accepted example; it is a no-op for the separable kind.
template <typename CorruptFn>
PartialLabelStream rejection_sample(const SynthesisSpec& spec,
                                    const WeightMatrix& w_star, Rng& rng,
                                    long* attempts_out, CorruptFn&& corrupt) {
  PartialLabelStream stream;
  stream.seed = spec.seed;
  stream.set_size = spec.set_size;
  stream.num_classes = spec.num_classes;
  stream.dim = spec.dim;
  stream.items.reserve(static_cast<std::size_t>(spec.num_examples));

  long attempts = 0;
  long accepted = 0;
  while (accepted < spec.num_examples) {
    ++attempts;
    FeatureVector x = rng.on_sphere(spec.dim, spec.radius);
    const auto scores = score(w_star, x);
    const int true_label = argmax_all(scores);
    CandidateLabelSet candidates =
        build_candidate_set(true_label, spec.num_classes, spec.set_size, rng);
    const double margin = avg_margin_from_scores(scores, candidates);
    if (margin >= spec.margin) {
      LabeledExample example{std::move(x), std::move(candidates), true_label};
      corrupt(example);
      stream.items.push_back(std::move(example));
      ++accepted;
    }
    if (attempts % 1000000 == 0 &&
        static_cast<double>(accepted) / static_cast<double>(attempts) < 1e-4) {
      throw std::runtime_error(
          "stream generation: acceptance rate below 1e-4 after " +
          std::to_string(attempts) +
          " attempts; lower the margin or the set size");
    }
  }
  if (attempts_out != nullptr) *attempts_out = attempts;
  return stream;
}

std::vector<std::string_view> split_on(std::string_view text, char delim) {
  std::vector<std::string_view> parts;
  std::size_t start = 0;
  while (true) {
    std::size_t end = text.find(delim, start);
    if (end == std::string_view::npos) {
      parts.push_back(text.substr(start));
      break;
    }
    parts.push_back(text.substr(start, end - start));
    start = end + 1;
  }
  return parts;
}

double parse_double_or_throw(std::string_view token, const char* what) {
  const std::string buf(token);
  char* end = nullptr;
  const double v = std::strtod(buf.c_str(), &end);
  if (buf.empty() || end != buf.c_str() + buf.size())
    throw std::runtime_error(std::string("stream parse error: bad ") + what +
                             " '" + buf + "'");
  return v;
}

long parse_long_or_throw(std::string_view token, const char* what) {
  const std::string buf(token);
  char* end = nullptr;
  const long v = std::strtol(buf.c_str(), &end, 10);
  if (buf.empty() || end != buf.c_str() + buf.size())
    throw std::runtime_error(std::string("stream parse error: bad ") + what +
                             " '" + buf + "'");
  return v;
}

}  // namespace

void SynthesisSpec::validate() const {
  if (num_classes < 2)
    throw std::invalid_argument("SynthesisSpec: need at least 2 classes");
  if (dim < 1) throw std::invalid_argument("SynthesisSpec: dim must be >= 1");
  if (num_examples < 1)
    throw std::invalid_argument("SynthesisSpec: need at least 1 example");
  if (set_size < 1 || set_size > num_classes - 1)
    throw std::invalid_argument(
        "SynthesisSpec: set size must lie in [1, K-1]");
  if (kind != GeneratorKind::FromDataset) {
    if (!(margin > 0.0) || !std::isfinite(margin))
      throw std::invalid_argument("SynthesisSpec: margin must be > 0");
    if (!(radius > 0.0) || !std::isfinite(radius))
      throw std::invalid_argument("SynthesisSpec: radius must be > 0");
  }
  if (!(noise_rate >= 0.0) || noise_rate >= 1.0)
    throw std::invalid_argument("SynthesisSpec: noise rate must lie in [0,1)");
}

PartialLabelStream synthesize_partial_labels(const Dataset& dataset,
                                             int set_size, std::uint64_t seed,
                                             bool shuffle) {
  if (dataset.size() == 0)
    throw std::invalid_argument("synthesize_partial_labels: empty dataset");
  if (set_size < 1 || set_size > dataset.num_classes - 1)
    throw std::invalid_argument(
        "synthesize_partial_labels: set size must lie in [1, K-1], got " +
        std::to_string(set_size) + " with K=" +
        std::to_string(dataset.num_classes));

  Rng rng(seed);
  PartialLabelStream stream;
  stream.seed = seed;
  stream.set_size = set_size;
  stream.num_classes = dataset.num_classes;
  stream.dim = dataset.dim;
  stream.generator = "kind=dataset name=" + dataset.name +
                     " shuffle=" + (shuffle ? "1" : "0");
  stream.items.reserve(dataset.size());
  for (std::size_t r = 0; r < dataset.size(); ++r) {
    const int y = dataset.labels[r];
    stream.items.push_back(LabeledExample{
        dataset.features[r],
        build_candidate_set(y, dataset.num_classes, set_size, rng), y});
  }
  if (shuffle) rng.shuffle(stream.items);
  return stream;
}

SeparableSynthesis generate_separable(const SynthesisSpec& spec) {
  SynthesisSpec checked = spec;
  checked.kind = GeneratorKind::SeparableSynthetic;
  checked.noise_rate = 0.0;
  checked.validate();

  Rng rng(checked.seed);
  WeightMatrix w_star =
      sample_unit_reference(checked.dim, checked.num_classes, rng);
  long attempts = 0;
  PartialLabelStream stream =
      rejection_sample(checked, w_star, rng, &attempts, [](LabeledExample&) {});
  stream.generator = spec_note("separable", checked);

  // Recomputed margin is authoritative; by construction it is >= the target.
  double gamma = avg_margin(w_star, stream.items[0].x, stream.items[0].candidates);
  for (const auto& example : stream.items)
    gamma = std::min(gamma, avg_margin(w_star, example.x, example.candidates));

  SeparabilityCertificate certificate{std::move(w_star), gamma,
                                      SeparabilityCertificate::Kind::Average};
  return {std::move(stream), std::move(certificate), attempts};
}

NoisySynthesis generate_noisy(const SynthesisSpec& spec) {
  SynthesisSpec checked = spec;
  checked.kind = GeneratorKind::NoisySynthetic;
  checked.validate();

  Rng rng(checked.seed);
  Rng corrupt_rng(checked.seed ^ kNoiseSubstreamSalt);
  WeightMatrix w_star =
      sample_unit_reference(checked.dim, checked.num_classes, rng);

  long corrupted = 0;
  long attempts = 0;
  PartialLabelStream stream = rejection_sample(
      checked, w_star, rng, &attempts, [&](LabeledExample& example) {
        if (checked.noise_rate <= 0.0) return;
        if (corrupt_rng.uniform() >= checked.noise_rate) return;
        const auto pool = other_classes(checked.num_classes, example.true_label);
        const int flipped = pool[static_cast<std::size_t>(
            corrupt_rng.uniform_below(pool.size()))];
        example.true_label = flipped;
        example.candidates = build_candidate_set(flipped, checked.num_classes,
                                                 checked.set_size, corrupt_rng);
        ++corrupted;
      });
  stream.generator = spec_note("noisy", checked);
  return {std::move(stream), std::move(w_star), corrupted, attempts};
}

std::string stream_to_csv(const PartialLabelStream& stream) {
  std::string out;
  out += "# " + (stream.generator.empty() ? std::string("kind=unknown")
                                          : stream.generator);
  out += " seed=" + std::to_string(stream.seed);
  out += " set_size=" + std::to_string(stream.set_size);
  out += " k=" + std::to_string(stream.num_classes);
  out += " d=" + std::to_string(stream.dim);
  out += " n=" + std::to_string(stream.size());
  out += '\n';
  out += "t,y_true,labels,features\n";
  long t = 1;
  for (const auto& example : stream.items) {
    out += std::to_string(t++) + ',' + std::to_string(example.true_label) + ',';
    const auto& labels = example.candidates.labels();
    for (std::size_t i = 0; i < labels.size(); ++i) {
      if (i > 0) out += ';';
      out += std::to_string(labels[i]);
    }
    out += ',';
    for (std::size_t i = 0; i < example.x.size(); ++i) {
      if (i > 0) out += ';';
      out += format_double(example.x[i]);
    }
    out += '\n';
  }
  return out;
}

PartialLabelStream stream_from_csv(std::string_view text) {
  const auto lines = split_on(text, '\n');
  if (lines.size() < 2 || lines[0].substr(0, 2) != "# ")
    throw std::runtime_error(
        "stream parse error: missing '# key=value' metadata line");
  if (lines[1] != "t,y_true,labels,features")
    throw std::runtime_error("stream parse error: bad column header");

  PartialLabelStream stream;
  std::string note;
  for (const auto token : split_on(lines[0].substr(2), ' ')) {
    const auto eq = token.find('=');
    const auto key = eq == std::string_view::npos ? std::string_view()
                                                  : token.substr(0, eq);
    const auto value = eq == std::string_view::npos ? std::string_view()
                                                    : token.substr(eq + 1);
    if (key == "seed") {
      stream.seed = static_cast<std::uint64_t>(
          std::strtoull(std::string(value).c_str(), nullptr, 10));
    } else if (key == "set_size") {
      stream.set_size = static_cast<int>(parse_long_or_throw(value, "set_size"));
    } else if (key == "k") {
      stream.num_classes = static_cast<int>(parse_long_or_throw(value, "k"));
    } else if (key == "d") {
      stream.dim = static_cast<int>(parse_long_or_throw(value, "d"));
    } else if (key == "n") {
      // row count, re-derived from the data rows
    } else {
      if (!note.empty()) note += ' ';
      note += std::string(token);
    }
  }
  stream.generator = std::move(note);
  if (stream.num_classes < 2 || stream.dim < 1 || stream.set_size < 1)
    throw std::runtime_error("stream parse error: incomplete metadata line");

  for (std::size_t li = 2; li < lines.size(); ++li) {
    if (lines[li].empty()) continue;
    const auto fields = split_on(lines[li], ',');
    if (fields.size() != 4)
      throw std::runtime_error("stream parse error at data line " +
                               std::to_string(li - 1) + ": expected 4 fields");
    LabeledExample example;
    example.true_label =
        static_cast<int>(parse_long_or_throw(fields[1], "true label"));
    std::vector<int> labels;
    for (const auto tok : split_on(fields[2], ';'))
      labels.push_back(static_cast<int>(parse_long_or_throw(tok, "label")));
    example.candidates = CandidateLabelSet(std::move(labels));
    for (const auto tok : split_on(fields[3], ';'))
      example.x.push_back(parse_double_or_throw(tok, "feature"));

    if (static_cast<int>(example.x.size()) != stream.dim)
      throw std::runtime_error("stream parse error at data line " +
                               std::to_string(li - 1) +
                               ": feature count differs from d");
    if (example.candidates.size() != stream.set_size)
      throw std::runtime_error("stream parse error at data line " +
                               std::to_string(li - 1) +
                               ": candidate set size differs from set_size");
    validate_candidates(example.candidates, stream.num_classes);
    if (!example.candidates.contains(example.true_label))
      throw std::runtime_error("stream parse error at data line " +
                               std::to_string(li - 1) +
                               ": true label outside the candidate set");
    stream.items.push_back(std::move(example));
  }
  if (stream.items.empty())
    throw std::runtime_error("stream parse error: no data rows");
  return stream;
}

void save_stream_csv(const PartialLabelStream& stream,
                     const std::filesystem::path& path) {
  std::ofstream out(path, std::ios::binary);
  if (!out)
    throw std::runtime_error("cannot open for writing: " + path.string());
  out << stream_to_csv(stream);
  if (!out) throw std::runtime_error("write failed: " + path.string());
}

PartialLabelStream load_stream_csv(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw std::runtime_error("cannot open stream file: " + path.string());
  std::ostringstream buffer;
  buffer << in.rdbuf();
  return stream_from_csv(buffer.str());
}

std::string weight_matrix_to_csv(const WeightMatrix& w) {
  std::string out = std::to_string(w.dim()) + ',' +
                    std::to_string(w.num_classes()) + '\n';
  for (int row = 0; row < w.dim(); ++row) {
    for (int cls = 1; cls <= w.num_classes(); ++cls) {
      if (cls > 1) out += ',';
      out += format_double(w.at(row, cls));
    }
    out += '\n';
  }
  return out;
}

WeightMatrix weight_matrix_from_csv(std::string_view text) {
  const auto lines = split_on(text, '\n');
  if (lines.empty())
    throw std::runtime_error("weight matrix parse error: empty input");
  const auto header = split_on(lines[0], ',');
  if (header.size() != 2)
    throw std::runtime_error("weight matrix parse error: bad 'd,K' header");
  const int dim = static_cast<int>(parse_long_or_throw(header[0], "d"));
  const int num_classes = static_cast<int>(parse_long_or_throw(header[1], "K"));
  WeightMatrix w(dim, num_classes);
  int row = 0;
  for (std::size_t li = 1; li < lines.size(); ++li) {
    if (lines[li].empty()) continue;
    if (row >= dim)
      throw std::runtime_error("weight matrix parse error: too many rows");
    const auto fields = split_on(lines[li], ',');
    if (static_cast<int>(fields.size()) != num_classes)
      throw std::runtime_error("weight matrix parse error: row " +
                               std::to_string(row + 1) + " has " +
                               std::to_string(fields.size()) + " fields");
    for (int cls = 1; cls <= num_classes; ++cls)
      w.at(row, cls) =
          parse_double_or_throw(fields[static_cast<std::size_t>(cls - 1)], "weight");
    ++row;
  }
  if (row != dim)
    throw std::runtime_error("weight matrix parse error: expected " +
                             std::to_string(dim) + " rows, got " +
                             std::to_string(row));
  return w;
}

void save_weight_matrix_csv(const WeightMatrix& w,
                            const std::filesystem::path& path) {
  std::ofstream out(path, std::ios::binary);
  if (!out)
    throw std::runtime_error("cannot open for writing: " + path.string());
  out << weight_matrix_to_csv(w);
  if (!out) throw std::runtime_error("write failed: " + path.string());
}

WeightMatrix load_weight_matrix_csv(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in)
    throw std::runtime_error("cannot open weight matrix file: " + path.string());
  std::ostringstream buffer;
  buffer << in.rdbuf();
  return weight_matrix_from_csv(buffer.str());
}

}  // namespace pll
