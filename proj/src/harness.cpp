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

#include "pll/harness.hpp"

#include <atomic>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <functional>
#include <mutex>
#include <sstream>
#include <stdexcept>
#include <thread>

#include "pll/losses.hpp"
#include "pll/rng.hpp"

namespace pll {

namespace {

constexpr std::uint64_t kCycleSubstreamSalt = 0xda942042e4dd58b5ULL;

int resolve_threads(int threads) {
  if (threads > 0) return threads;
  const unsigned hw = std::thread::hardware_concurrency();
  return hw == 0 ? 1 : static_cast<int>(hw);
}

// Runs fn(0..count-1) across at most `threads` workers. Tasks own disjoint
// output slots, so scheduling cannot affect results.
void parallel_for(std::size_t count, int threads,
                  const std::function<void(std::size_t)>& fn) {
  const int workers =
      std::min<std::size_t>(static_cast<std::size_t>(resolve_threads(threads)),
                            count == 0 ? 1 : count);
  if (workers <= 1) {
    for (std::size_t i = 0; i < count; ++i) fn(i);
    return;
  }
  std::atomic<std::size_t> next{0};
  std::vector<std::thread> pool;
  std::exception_ptr error;
  std::mutex error_mutex;
  pool.reserve(static_cast<std::size_t>(workers));
  for (int w = 0; w < workers; ++w) {
    pool.emplace_back([&] {
      while (true) {
        const std::size_t i = next.fetch_add(1);
        if (i >= count) return;
        try {
          fn(i);
        } catch (...) {
          std::scoped_lock lock(error_mutex);
          if (!error) error = std::current_exception();
        }
      }
    });
  }
  for (auto& t : pool) t.join();
  if (error) std::rethrow_exception(error);
}

struct RunCurves {
  std::vector<double> true_error;
  std::vector<double> ambiguous_error;
};

RunCurves cumulative_curves(std::span<const TrialRecord> records) {
  RunCurves out;
  out.true_error.reserve(records.size());
  out.ambiguous_error.reserve(records.size());
  long true_count = 0;
  long ambiguous_count = 0;
  for (std::size_t t = 0; t < records.size(); ++t) {
    true_count += records[t].true_label_loss;
    ambiguous_count += records[t].ambiguous_loss;
    const double denom = static_cast<double>(t + 1);
    out.true_error.push_back(static_cast<double>(true_count) / denom);
    out.ambiguous_error.push_back(static_cast<double>(ambiguous_count) / denom);
  }
  return out;
}

// Pairwise tree sum over [lo, hi); the fixed reduction shape makes parallel
// and serial aggregation byte-identical.
std::vector<double> tree_sum(const std::vector<const std::vector<double>*>& curves,
                             std::size_t lo, std::size_t hi) {
  if (hi - lo == 1) return *curves[lo];
  const std::size_t mid = lo + (hi - lo) / 2;
  std::vector<double> left = tree_sum(curves, lo, mid);
  const std::vector<double> right = tree_sum(curves, mid, hi);
  for (std::size_t i = 0; i < left.size(); ++i) left[i] += right[i];
  return left;
}

std::vector<double> average_curves(const std::vector<std::vector<double>>& per_run) {
  std::vector<const std::vector<double>*> ptrs;
  ptrs.reserve(per_run.size());
  for (const auto& c : per_run) ptrs.push_back(&c);
  std::vector<double> sum = tree_sum(ptrs, 0, ptrs.size());
  const double inv = 1.0 / static_cast<double>(per_run.size());
  for (auto& v : sum) v *= inv;
  return sum;
}

std::string format_double(double v) {
  char buf[40];
  std::snprintf(buf, sizeof(buf), "%.12g", v);
  return buf;
}

// The per-run stream for a dataset source: fresh candidate sets each run,
// cycling with reshuffled order when more rounds than examples are asked
// for.
std::vector<LabeledExample> dataset_run_stream(const Dataset& dataset,
                                               int set_size,
                                               std::uint64_t run_seed,
                                               bool shuffle, long rounds) {
  PartialLabelStream stream =
      synthesize_partial_labels(dataset, set_size, run_seed, shuffle);
  std::vector<LabeledExample> items = std::move(stream.items);
  const long n = static_cast<long>(items.size());
  if (rounds <= n) {
    items.resize(static_cast<std::size_t>(rounds));
    return items;
  }
  Rng cycle_rng(run_seed ^ kCycleSubstreamSalt);
  std::vector<LabeledExample> extended = items;
  extended.reserve(static_cast<std::size_t>(rounds));
  while (static_cast<long>(extended.size()) < rounds) {
    std::vector<std::size_t> order(items.size());
    for (std::size_t i = 0; i < order.size(); ++i) order[i] = i;
    cycle_rng.shuffle(order);
    for (const std::size_t i : order) {
      if (static_cast<long>(extended.size()) >= rounds) break;
      extended.push_back(items[i]);
    }
  }
  return extended;
}

std::vector<LabeledExample> synthetic_run_stream(const SynthesisSpec& base,
                                                 int set_size,
                                                 std::uint64_t run_seed,
                                                 long rounds) {
  SynthesisSpec spec = base;
  spec.set_size = set_size;
  spec.seed = run_seed;
  spec.num_examples = rounds;
  if (spec.kind == GeneratorKind::NoisySynthetic)
    return std::move(generate_noisy(spec).stream.items);
  return std::move(generate_separable(spec).stream.items);
}

}  // namespace

LearnerConfig LearnerSpec::to_config(int num_classes, int dim) const {
  LearnerConfig config;
  config.algorithm = algorithm;
  config.num_classes = num_classes;
  config.dim = dim;
  config.eta = eta;
  config.lambda = lambda;
  config.always_shrink = always_shrink;
  config.negate_updates = negate_updates;
  return config;
}

std::string ExperimentConfig::source_name() const {
  if (dataset != nullptr) return dataset->name;
  if (synthetic.has_value())
    return synthetic->kind == GeneratorKind::NoisySynthetic ? "synthetic-noisy"
                                                            : "synthetic-separable";
  return "unset";
}

std::map<CurveKey, ErrorCurve> run_experiment(const ExperimentConfig& config) {
  if ((config.dataset == nullptr) == !config.synthetic.has_value())
    throw std::invalid_argument(
        "run_experiment: exactly one of dataset/synthetic must be set");
  if (config.learners.empty())
    throw std::invalid_argument("run_experiment: no learners given");
  if (config.set_sizes.empty())
    throw std::invalid_argument("run_experiment: no set sizes given");
  if (config.runs < 1)
    throw std::invalid_argument("run_experiment: runs must be >= 1");

  const int num_classes = config.dataset != nullptr
                              ? config.dataset->num_classes
                              : config.synthetic->num_classes;
  const int dim =
      config.dataset != nullptr ? config.dataset->dim : config.synthetic->dim;
  long rounds = config.rounds;
  if (rounds == 0)
    rounds = config.dataset != nullptr
                 ? static_cast<long>(config.dataset->size())
                 : config.synthetic->num_examples;
  if (rounds < 1)
    throw std::invalid_argument("run_experiment: rounds must be >= 1");
  for (const int s : config.set_sizes)
    if (s < 1 || s > num_classes - 1)
      throw std::invalid_argument(
          "run_experiment: set size " + std::to_string(s) +
          " outside [1, K-1] with K=" + std::to_string(num_classes));

  std::map<CurveKey, ErrorCurve> curves;
  for (const auto& learner : config.learners) {
    const LearnerConfig learner_config = learner.to_config(num_classes, dim);
    learner_config.validate();
    for (const int set_size : config.set_sizes) {
      std::vector<std::vector<double>> true_runs(
          static_cast<std::size_t>(config.runs));
      std::vector<std::vector<double>> ambiguous_runs(
          static_cast<std::size_t>(config.runs));
      parallel_for(
          static_cast<std::size_t>(config.runs), config.threads,
          [&](std::size_t run) {
            const std::uint64_t run_seed =
                config.base_seed + static_cast<std::uint64_t>(run);
            const std::vector<LabeledExample> items =
                config.dataset != nullptr
                    ? dataset_run_stream(*config.dataset, set_size, run_seed,
                                         config.shuffle, rounds)
                    : synthetic_run_stream(*config.synthetic, set_size,
                                           run_seed, rounds);
            const auto records = run_sequence(learner_config, items);
            RunCurves rc = cumulative_curves(records);
            true_runs[run] = std::move(rc.true_error);
            ambiguous_runs[run] = std::move(rc.ambiguous_error);
          });

      ErrorCurve curve;
      curve.true_error = average_curves(true_runs);
      curve.ambiguous_error = average_curves(ambiguous_runs);
      curve.runs = config.runs;
      std::ostringstream fp;
      fp << "learner=" << algorithm_name(learner.algorithm)
         << " s=" << set_size << " runs=" << config.runs << " T=" << rounds
         << " seed=" << config.base_seed << " eta=" << learner.eta
         << " lambda=" << learner.lambda
         << " shuffle=" << (config.shuffle ? 1 : 0)
         << " source=" << config.source_name();
      curve.fingerprint = fp.str();
      curves.emplace(CurveKey{std::string(algorithm_name(learner.algorithm)),
                              set_size},
                     std::move(curve));
    }
  }
  return curves;
}

std::vector<ConformanceCell> mistake_campaign(
    std::span<const SynthesisSpec> specs, std::span<const double> eval_gammas,
    const LearnerSpec& learner, int threads) {
  // Cell list is laid out up front so parallel workers fill disjoint slots.
  std::vector<ConformanceCell> cells;
  std::vector<std::size_t> spec_of_cell;
  for (std::size_t i = 0; i < specs.size(); ++i) {
    const auto& spec = specs[i];
    const std::size_t per_spec =
        spec.kind == GeneratorKind::NoisySynthetic
            ? std::max<std::size_t>(eval_gammas.size(), 1)
            : 1;
    for (std::size_t g = 0; g < per_spec; ++g) {
      ConformanceCell cell;
      cell.spec = spec;
      cells.push_back(std::move(cell));
      spec_of_cell.push_back(i);
    }
  }

  // One generated stream and learner run per spec, shared by its cells.
  parallel_for(specs.size(), threads, [&](std::size_t i) {
    const auto& spec = specs[i];
    std::vector<std::size_t> my_cells;
    for (std::size_t c = 0; c < cells.size(); ++c)
      if (spec_of_cell[c] == i) my_cells.push_back(c);
    try {
      PartialLabelStream stream;
      WeightMatrix w_star;
      double certificate_gamma = 0.0;
      if (spec.kind == GeneratorKind::NoisySynthetic) {
        auto generated = generate_noisy(spec);
        stream = std::move(generated.stream);
        w_star = std::move(generated.w_star);
      } else {
        auto generated = generate_separable(spec);
        stream = std::move(generated.stream);
        w_star = std::move(generated.certificate.w_star);
        certificate_gamma = generated.certificate.gamma;
      }
      const auto records = run_sequence(
          learner.to_config(spec.num_classes, spec.dim), stream.items);
      long mistakes = 0;
      long updates = 0;
      for (const auto& rec : records) {
        mistakes += rec.ambiguous_loss;
        updates += rec.update_applied ? 1 : 0;
      }
      for (std::size_t slot = 0; slot < my_cells.size(); ++slot) {
        ConformanceCell& cell = cells[my_cells[slot]];
        cell.mistakes = mistakes;
        cell.updates = updates;
        if (spec.kind == GeneratorKind::NoisySynthetic) {
          cell.eval_gamma = eval_gammas.empty() ? spec.margin : eval_gammas[slot];
          cell.report = theorem2_bound(stream.items, w_star, cell.eval_gamma);
        } else {
          cell.eval_gamma = certificate_gamma;
          cell.report = theorem1_bound(certificate_gamma,
                                       stream_radius(stream.items),
                                       min_label_set_size(stream.items));
        }
        cell.pass = static_cast<double>(mistakes) <= cell.report.bound_value;
      }
    } catch (const std::exception& e) {
      for (const std::size_t c : my_cells) {
        cells[c].error = e.what();
        cells[c].pass = false;
      }
    }
  });
  return cells;
}

std::vector<RegretCell> regret_campaign(std::span<const SynthesisSpec> specs,
                                        std::span<const double> lambdas,
                                        int comparator_epochs, int threads) {
  std::vector<RegretCell> cells;
  for (const auto& spec : specs)
    for (const double lambda : lambdas) {
      RegretCell cell;
      cell.spec = spec;
      cell.lambda = lambda;
      cells.push_back(std::move(cell));
    }

  parallel_for(cells.size(), threads, [&](std::size_t i) {
    RegretCell& cell = cells[i];
    try {
      const auto spec = cell.spec;
      const PartialLabelStream stream =
          spec.kind == GeneratorKind::NoisySynthetic
              ? generate_noisy(spec).stream
              : generate_separable(spec).stream;

      LearnerConfig config;
      config.algorithm = Algorithm::AvgPegasos;
      config.num_classes = spec.num_classes;
      config.dim = spec.dim;
      config.lambda = cell.lambda;
      OnlineLearner learner(config);

      const double ball_radius = 1.0 / std::sqrt(cell.lambda);
      std::vector<TrialRecord> records;
      records.reserve(stream.size());
      double max_excess = 0.0;
      for (const auto& example : stream.items) {
        records.push_back(
            learner.step(example.x, example.candidates, example.true_label));
        max_excess = std::max(
            max_excess, frobenius_norm(learner.weights()) - ball_radius);
      }
      cell.max_ball_excess = max_excess;

      const auto comparator = batch_comparator(
          stream.items, spec.num_classes, cell.lambda, comparator_epochs);
      cell.regret =
          empirical_regret(records, stream.items, cell.lambda, comparator.w);
      cell.report =
          theorem3_bound(cell.lambda, stream_radius(stream.items),
                         min_label_set_size(stream.items),
                         static_cast<long>(stream.size()));
      cell.pass = cell.regret <= cell.report.bound_value;
    } catch (const std::exception& e) {
      cell.error = e.what();
      cell.pass = false;
    }
  });
  return cells;
}

EmittedFiles emit_curves(const std::map<CurveKey, ErrorCurve>& curves,
                         const ExperimentConfig& config,
                         const std::filesystem::path& out_dir) {
  std::error_code ec;
  std::filesystem::create_directories(out_dir, ec);
  if (ec)
    throw std::runtime_error("emit_curves: cannot create directory " +
                             out_dir.string() + ": " + ec.message());

  EmittedFiles emitted;
  std::ostringstream manifest;
  manifest << "# config:";
  for (const auto& learner : config.learners)
    manifest << " learner=" << algorithm_name(learner.algorithm)
             << "(eta=" << learner.eta << ",lambda=" << learner.lambda << ")";
  manifest << " runs=" << config.runs << " seed=" << config.base_seed
           << " shuffle=" << (config.shuffle ? 1 : 0)
           << " source=" << config.source_name() << '\n';
  manifest << "file,learner,set_size,runs,T,seed,dataset\n";

  for (const auto& [key, curve] : curves) {
    const auto& [learner, set_size] = key;
    const std::string filename =
        learner + "_s" + std::to_string(set_size) + ".csv";
    const std::filesystem::path path = out_dir / filename;
    std::ofstream out(path, std::ios::binary);
    if (!out)
      throw std::runtime_error("emit_curves: cannot open " + path.string());
    out << "trial,avg_true_error,avg_ambiguous_error\n";
    for (std::size_t t = 0; t < curve.true_error.size(); ++t)
      out << (t + 1) << ',' << format_double(curve.true_error[t]) << ','
          << format_double(curve.ambiguous_error[t]) << '\n';
    if (!out)
      throw std::runtime_error("emit_curves: write failed for " + path.string());
    emitted.curve_files.push_back(path);

    manifest << filename << ',' << learner << ',' << set_size << ','
             << curve.runs << ',' << curve.true_error.size() << ','
             << config.base_seed << ',' << config.source_name() << '\n';
  }

  emitted.manifest = out_dir / "manifest.csv";
  std::ofstream out(emitted.manifest, std::ios::binary);
  if (!out)
    throw std::runtime_error("emit_curves: cannot open " +
                             emitted.manifest.string());
  out << manifest.str();
  if (!out)
    throw std::runtime_error("emit_curves: write failed for " +
                             emitted.manifest.string());
  return emitted;
}

}  // namespace pll
