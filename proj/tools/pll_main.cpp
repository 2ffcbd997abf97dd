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

// pll: online multiclass classification from partially labeled streams.
//
// Subcommands:
//   run           repeated-runs experiment emitting error-curve CSVs
//   synth         write a partial-label stream CSV
//   bounds-check  mistake-bound conformance campaign
//   regret-check  regret-bound conformance campaign
//   inspect       summarize a stream file
//
// Exit codes: 0 success, 1 runtime or check failure, 2 usage/config error.

#include <cmath>
#include <cstdio>
#include <fstream>
#include <map>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "pll/harness.hpp"

namespace {

using namespace pll;

struct DataOpts {
  std::string path;
  std::string format = "csv";
  int label_col = -1;
  std::string delimiter = ",";
  long max_rows = 0;
  bool scale = false;
};

// Flat `key=value` config files, one option per line, `#` comments. Applied
// after command-line parsing; any flag given on the command line wins over
// the file.
void apply_config_file(CLI::App* cmd, const std::string& path) {
  std::ifstream in(path);
  if (!in)
    throw std::invalid_argument("cannot open config file: " + path);
  std::string line;
  long line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    const auto first = line.find_first_not_of(" \t");
    if (first == std::string::npos || line[first] == '#') continue;
    const auto eq = line.find('=');
    if (eq == std::string::npos)
      throw std::invalid_argument("config file " + path + " line " +
                                  std::to_string(line_no) +
                                  ": expected key=value");
    const std::string key = line.substr(first, eq - first);
    const std::string value = line.substr(eq + 1);
    auto* option = cmd->get_option_no_throw("--" + key);
    if (option == nullptr || key == "config")
      throw std::invalid_argument("config file " + path + " line " +
                                  std::to_string(line_no) +
                                  ": unknown key '" + key + "'");
    if (option->count() > 0) continue;  // command line wins
    option->add_result(value);
    option->run_callback();
  }
}

void add_data_options(CLI::App* cmd, DataOpts* opts) {
  cmd->add_option("--data", opts->path, "Dataset file to ingest");
  cmd->add_option("--format", opts->format, "Dataset format: csv or libsvm")
      ->check(CLI::IsMember({"csv", "libsvm"}))
      ->capture_default_str();
  cmd->add_option("--label-col", opts->label_col,
                  "CSV label column, 0-based; negative counts from the end")
      ->capture_default_str();
  cmd->add_option("--delimiter", opts->delimiter, "CSV field delimiter")
      ->capture_default_str();
  cmd->add_option("--max-rows", opts->max_rows,
                  "Keep only the first N rows (0 = all)")
      ->capture_default_str();
  cmd->add_flag("--scale", opts->scale, "Min-max scale features to [0,1]");
}

Dataset load_data(const DataOpts& opts) {
  if (opts.delimiter.size() != 1)
    throw std::invalid_argument("--delimiter must be a single character");
  Dataset dataset = load_dataset_file(
      opts.path, opts.format == "libsvm" ? DataFormat::Libsvm : DataFormat::Csv,
      opts.label_col, opts.delimiter[0], opts.max_rows);
  if (opts.scale) dataset = min_max_scale(dataset);
  return dataset;
}

double auto_radius(int num_classes, int dim) {
  return 2.0 * std::sqrt(static_cast<double>(num_classes) *
                         static_cast<double>(dim));
}

const char* verdict(bool pass) { return pass ? "PASS" : "FAIL"; }

// ---------------------------------------------------------------- run ----

struct RunOpts {
  DataOpts data;
  std::string synthetic;  // "", "separable", "noisy"
  std::vector<std::string> learners{"avg-perceptron", "max-perceptron",
                                    "avg-pegasos", "max-pegasos"};
  std::vector<int> set_sizes{2};
  int runs = 100;
  long rounds = 0;
  double eta = 1.0;
  double lambda = 0.1;
  bool always_shrink = false;
  std::uint64_t seed = 0;
  bool shuffle = false;
  int threads = 0;
  std::string out;
  // Synthetic source parameters.
  int k = 0;
  int d = 0;
  double gamma = 0.1;
  double radius = 0.0;  // 0: auto
  double noise = 0.1;
};

int cmd_run(const RunOpts& opts) {
  if (opts.out.empty()) throw std::invalid_argument("--out is required");
  if (opts.data.path.empty() == opts.synthetic.empty())
    throw std::invalid_argument(
        "exactly one of --data and --synthetic must be given");

  Dataset dataset;
  ExperimentConfig config;
  if (!opts.data.path.empty()) {
    dataset = load_data(opts.data);
    config.dataset = &dataset;
  } else {
    SynthesisSpec spec;
    spec.kind = opts.synthetic == "noisy" ? GeneratorKind::NoisySynthetic
                                          : GeneratorKind::SeparableSynthetic;
    spec.num_classes = opts.k;
    spec.dim = opts.d;
    spec.num_examples = opts.rounds > 0 ? opts.rounds : 1000;
    spec.margin = opts.gamma;
    spec.radius = opts.radius > 0.0 ? opts.radius : auto_radius(opts.k, opts.d);
    spec.noise_rate = opts.synthetic == "noisy" ? opts.noise : 0.0;
    spec.seed = opts.seed;
    spec.set_size = 1;  // per-cell set sizes below
    spec.validate();
    config.synthetic = spec;
  }

  for (const auto& name : opts.learners) {
    LearnerSpec learner;
    learner.algorithm = algorithm_from_name(name);
    learner.eta = opts.eta;
    learner.lambda = opts.lambda;
    learner.always_shrink = opts.always_shrink;
    config.learners.push_back(learner);
  }
  config.set_sizes = opts.set_sizes;
  config.runs = opts.runs;
  config.rounds = opts.rounds;
  config.base_seed = opts.seed;
  config.shuffle = opts.shuffle;
  config.threads = opts.threads;

  const auto curves = run_experiment(config);
  const auto emitted = emit_curves(curves, config, opts.out);
  for (const auto& file : emitted.curve_files)
    std::printf("wrote %s\n", file.string().c_str());
  std::printf("wrote %s\n", emitted.manifest.string().c_str());
  return 0;
}

// -------------------------------------------------------------- synth ----

struct SynthOpts {
  DataOpts data;
  std::string kind = "separable";
  int k = 5;
  int d = 10;
  long rounds = 1000;
  int set_size = 2;
  double gamma = 0.1;
  double radius = 0.0;
  double noise = 0.1;
  std::uint64_t seed = 0;
  bool shuffle = false;
  std::string out;
  std::string wstar_out;
};

int cmd_synth(const SynthOpts& opts) {
  if (opts.out.empty()) throw std::invalid_argument("--out is required");
  PartialLabelStream stream;
  if (opts.kind == "from-data") {
    if (opts.data.path.empty())
      throw std::invalid_argument("--kind from-data requires --data");
    const Dataset dataset = load_data(opts.data);
    stream = synthesize_partial_labels(dataset, opts.set_size, opts.seed,
                                       opts.shuffle);
    if (!opts.wstar_out.empty())
      throw std::invalid_argument(
          "--wstar-out applies to synthetic kinds only");
  } else {
    SynthesisSpec spec;
    spec.kind = opts.kind == "noisy" ? GeneratorKind::NoisySynthetic
                                     : GeneratorKind::SeparableSynthetic;
    spec.num_classes = opts.k;
    spec.dim = opts.d;
    spec.num_examples = opts.rounds;
    spec.set_size = opts.set_size;
    spec.margin = opts.gamma;
    spec.radius = opts.radius > 0.0 ? opts.radius : auto_radius(opts.k, opts.d);
    spec.noise_rate = opts.kind == "noisy" ? opts.noise : 0.0;
    spec.seed = opts.seed;
    spec.validate();
    if (spec.kind == GeneratorKind::NoisySynthetic) {
      auto result = generate_noisy(spec);
      stream = std::move(result.stream);
      if (!opts.wstar_out.empty())
        save_weight_matrix_csv(result.w_star, opts.wstar_out);
    } else {
      auto result = generate_separable(spec);
      stream = std::move(result.stream);
      std::printf("certificate margin: %.6g\n", result.certificate.gamma);
      if (!opts.wstar_out.empty())
        save_weight_matrix_csv(result.certificate.w_star, opts.wstar_out);
    }
  }
  save_stream_csv(stream, opts.out);
  std::printf("wrote %s (n=%zu, k=%d, d=%d, s=%d)\n", opts.out.c_str(),
              stream.size(), stream.num_classes, stream.dim, stream.set_size);
  if (!opts.wstar_out.empty())
    std::printf("wrote %s\n", opts.wstar_out.c_str());
  return 0;
}

// ------------------------------------------------------- bounds-check ----

struct BoundsCheckOpts {
  std::vector<int> k_grid{3, 5};
  std::vector<int> d_grid{5, 10};
  std::vector<int> s_grid{1, 2};
  std::vector<double> gamma_grid{0.1, 0.5};
  std::vector<double> eval_gammas{0.1, 0.5, 1.0};
  long rounds = 1000;
  int seeds = 3;
  std::uint64_t seed = 7;
  double radius = 0.0;
  double noise = 0.0;
  double eta = 1.0;
  int threads = 0;
  bool break_update = false;
};

int cmd_bounds_check(const BoundsCheckOpts& opts) {
  for (const double g : opts.gamma_grid)
    if (!(g > 0.0)) throw std::invalid_argument("--gamma-grid entries must be > 0");
  if (opts.rounds < 1) throw std::invalid_argument("--rounds must be >= 1");
  if (opts.seeds < 1) throw std::invalid_argument("--seeds must be >= 1");
  if (opts.noise < 0.0 || opts.noise >= 1.0)
    throw std::invalid_argument("--noise must lie in [0,1)");

  std::vector<SynthesisSpec> specs;
  std::uint64_t next_seed = opts.seed;
  for (const int k : opts.k_grid)
    for (const int d : opts.d_grid)
      for (const int s : opts.s_grid) {
        if (s < 1 || s > k - 1) continue;  // infeasible grid cell
        for (const double gamma : opts.gamma_grid)
          for (int i = 0; i < opts.seeds; ++i) {
            SynthesisSpec spec;
            spec.kind = opts.noise > 0.0 ? GeneratorKind::NoisySynthetic
                                         : GeneratorKind::SeparableSynthetic;
            spec.num_classes = k;
            spec.dim = d;
            spec.num_examples = opts.rounds;
            spec.set_size = s;
            spec.margin = gamma;
            spec.radius = opts.radius > 0.0 ? opts.radius : auto_radius(k, d);
            spec.noise_rate = opts.noise;
            spec.seed = next_seed++;
            specs.push_back(spec);
          }
      }
  if (specs.empty())
    throw std::invalid_argument("bounds-check: the grid has no feasible cell");

  LearnerSpec learner;
  learner.eta = opts.eta;
  learner.negate_updates = opts.break_update;
  const std::vector<double> eval =
      opts.noise > 0.0 ? opts.eval_gammas : std::vector<double>{};
  const auto cells = mistake_campaign(specs, eval, learner, opts.threads);

  std::printf("%4s %4s %4s %10s %7s %12s %10s %10s %10s %14s  %s\n", "k", "d",
              "s", "gamma_gen", "noise", "seed", "eval_gamma", "mistakes",
              "updates", "bound", "result");
  long passed = 0;
  for (const auto& cell : cells) {
    if (!cell.error.empty()) {
      std::printf("%4d %4d %4d %10.3g %7.3g %12llu %10s %10s %10s %14s  FAIL (%s)\n",
                  cell.spec.num_classes, cell.spec.dim, cell.spec.set_size,
                  cell.spec.margin, cell.spec.noise_rate,
                  static_cast<unsigned long long>(cell.spec.seed), "-", "-",
                  "-", "-", cell.error.c_str());
      continue;
    }
    std::printf("%4d %4d %4d %10.3g %7.3g %12llu %10.3g %10ld %10ld %14.6g  %s\n",
                cell.spec.num_classes, cell.spec.dim, cell.spec.set_size,
                cell.spec.margin, cell.spec.noise_rate,
                static_cast<unsigned long long>(cell.spec.seed),
                cell.eval_gamma, cell.mistakes, cell.updates,
                cell.report.bound_value, verdict(cell.pass));
    passed += cell.pass ? 1 : 0;
  }
  std::printf("%ld/%zu cells passed\n", passed, cells.size());
  return passed == static_cast<long>(cells.size()) ? 0 : 1;
}

// ------------------------------------------------------- regret-check ----

struct RegretCheckOpts {
  std::vector<double> lambda_grid{0.1, 1.0};
  std::vector<long> rounds_grid{1000};
  int seeds = 3;
  std::uint64_t seed = 7;
  int k = 5;
  int d = 10;
  int s = 2;
  double gamma = 0.05;
  double radius = 2.0;
  int epochs = 500;
  int threads = 0;
};

int cmd_regret_check(const RegretCheckOpts& opts) {
  for (const double lambda : opts.lambda_grid)
    if (!(lambda > 0.0))
      throw std::invalid_argument("--lambda-grid entries must be > 0");
  for (const long t : opts.rounds_grid)
    if (t < 2) throw std::invalid_argument("--rounds-grid entries must be >= 2");
  if (opts.seeds < 1) throw std::invalid_argument("--seeds must be >= 1");
  if (opts.epochs < 1) throw std::invalid_argument("--epochs must be >= 1");

  std::vector<SynthesisSpec> specs;
  std::uint64_t next_seed = opts.seed;
  for (const long rounds : opts.rounds_grid)
    for (int i = 0; i < opts.seeds; ++i) {
      SynthesisSpec spec;
      spec.num_classes = opts.k;
      spec.dim = opts.d;
      spec.num_examples = rounds;
      spec.set_size = opts.s;
      spec.margin = opts.gamma;
      spec.radius = opts.radius;
      spec.seed = next_seed++;
      spec.validate();
      specs.push_back(spec);
    }

  const auto cells =
      regret_campaign(specs, opts.lambda_grid, opts.epochs, opts.threads);

  std::printf("%4s %4s %4s %8s %8s %12s %12s %10s %14s %14s  %s\n", "k", "d",
              "s", "T", "lambda", "seed", "regret", "G", "lnT/(lambdaT)",
              "bound", "result");
  long passed = 0;
  for (const auto& cell : cells) {
    if (!cell.error.empty()) {
      std::printf("%4d %4d %4d %8ld %8.3g %12llu %12s %10s %14s %14s  FAIL (%s)\n",
                  cell.spec.num_classes, cell.spec.dim, cell.spec.set_size,
                  cell.spec.num_examples, cell.lambda,
                  static_cast<unsigned long long>(cell.spec.seed), "-", "-",
                  "-", "-", cell.error.c_str());
      continue;
    }
    const double t = cell.report.constant("T");
    const double rate = std::log(t) / (cell.lambda * t);
    std::printf("%4d %4d %4d %8ld %8.3g %12llu %12.5g %10.5g %14.6g %14.6g  %s\n",
                cell.spec.num_classes, cell.spec.dim, cell.spec.set_size,
                cell.spec.num_examples, cell.lambda,
                static_cast<unsigned long long>(cell.spec.seed), cell.regret,
                cell.report.constant("G"), rate, cell.report.bound_value,
                verdict(cell.pass));
    passed += cell.pass ? 1 : 0;
  }
  std::printf("%ld/%zu cells passed\n", passed, cells.size());
  return passed == static_cast<long>(cells.size()) ? 0 : 1;
}

// ------------------------------------------------------------ inspect ----

struct InspectOpts {
  std::string file;
  std::string wstar;
};

int cmd_inspect(const InspectOpts& opts) {
  const PartialLabelStream stream = load_stream_csv(opts.file);
  std::printf("k: %d\n", stream.num_classes);
  std::printf("d: %d\n", stream.dim);
  std::printf("n: %zu\n", stream.size());
  std::printf("set_size: %d\n", stream.set_size);
  std::printf("c: %d\n", min_label_set_size(stream.items));
  std::printf("R: %.17g\n", stream_radius(stream.items));
  std::printf("seed: %llu\n", static_cast<unsigned long long>(stream.seed));
  std::printf("generator: %s\n", stream.generator.c_str());

  std::map<int, long> histogram;
  for (const auto& example : stream.items) ++histogram[example.true_label];
  std::printf("label histogram:\n");
  for (const auto& [label, count] : histogram)
    std::printf("  %d: %ld\n", label, count);

  if (!opts.wstar.empty()) {
    const WeightMatrix w_star = load_weight_matrix_csv(opts.wstar);
    double min_margin = 1e300, max_margin_seen = -1e300, sum = 0.0;
    for (const auto& example : stream.items) {
      const double m = avg_margin(w_star, example.x, example.candidates);
      min_margin = std::min(min_margin, m);
      max_margin_seen = std::max(max_margin_seen, m);
      sum += m;
    }
    std::printf("avg-margin vs wstar: min=%.6g mean=%.6g max=%.6g\n",
                min_margin, sum / static_cast<double>(stream.size()),
                max_margin_seen);
  }
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"online multiclass classification from partial-label streams"};
  app.require_subcommand(1);

  RunOpts run_opts;
  std::string run_config;
  auto* run = app.add_subcommand(
      "run", "Repeated-runs experiment emitting error-curve CSVs");
  run->add_option("--config", run_config,
                  "Flat key=value config file; flags override");
  add_data_options(run, &run_opts.data);
  run->add_option("--synthetic", run_opts.synthetic,
                  "Use a synthetic source: separable or noisy")
      ->check(CLI::IsMember({"separable", "noisy"}));
  run->add_option("--learners", run_opts.learners,
                  "Comma-separated learner list (avg-perceptron, "
                  "max-perceptron, avg-pegasos, max-pegasos, "
                  "exact-perceptron, exact-pegasos)")
      ->delimiter(',')
      ->capture_default_str();
  run->add_option("--set-sizes", run_opts.set_sizes,
                  "Comma-separated candidate-set sizes")
      ->delimiter(',')
      ->capture_default_str();
  run->add_option("--runs", run_opts.runs, "Independent runs to average")
      ->capture_default_str();
  run->add_option("--rounds", run_opts.rounds,
                  "Trials per run (0 = one pass over the dataset)")
      ->capture_default_str();
  run->add_option("--eta", run_opts.eta, "Perceptron step size")
      ->capture_default_str();
  run->add_option("--lambda", run_opts.lambda, "Pegasos regularization")
      ->capture_default_str();
  run->add_flag("--always-shrink", run_opts.always_shrink,
                "Pegasos: shrink and project on zero-loss trials too");
  run->add_option("--seed", run_opts.seed, "Base seed; run r uses seed+r")
      ->capture_default_str();
  run->add_flag("--shuffle", run_opts.shuffle,
                "Shuffle example order inside each run");
  run->add_option("--threads", run_opts.threads,
                  "Worker threads (0 = hardware)")
      ->capture_default_str();
  run->add_option("--out", run_opts.out, "Output directory");
  run->add_option("--k", run_opts.k, "Synthetic: number of classes");
  run->add_option("--d", run_opts.d, "Synthetic: feature dimension");
  run->add_option("--gamma", run_opts.gamma, "Synthetic: target margin")
      ->capture_default_str();
  run->add_option("--radius", run_opts.radius,
                  "Synthetic: instance norm (0 = 2*sqrt(k*d))")
      ->capture_default_str();
  run->add_option("--noise", run_opts.noise, "Synthetic noisy: corruption rate")
      ->capture_default_str();

  SynthOpts synth_opts;
  std::string synth_config;
  auto* synth =
      app.add_subcommand("synth", "Write a partial-label stream CSV");
  synth->add_option("--config", synth_config,
                    "Flat key=value config file; flags override");
  add_data_options(synth, &synth_opts.data);
  synth->add_option("--kind", synth_opts.kind,
                    "separable, noisy, or from-data")
      ->check(CLI::IsMember({"separable", "noisy", "from-data"}))
      ->capture_default_str();
  synth->add_option("--k", synth_opts.k, "Number of classes")
      ->capture_default_str();
  synth->add_option("--d", synth_opts.d, "Feature dimension")
      ->capture_default_str();
  synth->add_option("--rounds", synth_opts.rounds, "Examples to emit")
      ->capture_default_str();
  synth->add_option("--set-size", synth_opts.set_size, "Candidate-set size")
      ->capture_default_str();
  synth->add_option("--gamma", synth_opts.gamma, "Target margin")
      ->capture_default_str();
  synth->add_option("--radius", synth_opts.radius,
                    "Instance norm (0 = 2*sqrt(k*d))")
      ->capture_default_str();
  synth->add_option("--noise", synth_opts.noise, "Noisy: corruption rate")
      ->capture_default_str();
  synth->add_option("--seed", synth_opts.seed, "Seed")->capture_default_str();
  synth->add_flag("--shuffle", synth_opts.shuffle,
                  "from-data: shuffle example order");
  synth->add_option("--out", synth_opts.out, "Output stream file");
  synth->add_option("--wstar-out", synth_opts.wstar_out,
                    "Also write the generating reference matrix");

  BoundsCheckOpts bounds_opts;
  std::string bounds_config;
  auto* bounds = app.add_subcommand(
      "bounds-check", "Mistake-bound conformance campaign");
  bounds->add_option("--config", bounds_config,
                     "Flat key=value config file; flags override");
  bounds->add_option("--k-grid", bounds_opts.k_grid, "Class counts")
      ->delimiter(',')
      ->capture_default_str();
  bounds->add_option("--d-grid", bounds_opts.d_grid, "Dimensions")
      ->delimiter(',')
      ->capture_default_str();
  bounds->add_option("--s-grid", bounds_opts.s_grid,
                     "Set sizes (cells with s > k-1 are skipped)")
      ->delimiter(',')
      ->capture_default_str();
  bounds->add_option("--gamma-grid", bounds_opts.gamma_grid,
                     "Generation margins")
      ->delimiter(',')
      ->capture_default_str();
  bounds->add_option("--eval-gammas", bounds_opts.eval_gammas,
                     "Noisy mode: margins the bound is evaluated at")
      ->delimiter(',')
      ->capture_default_str();
  bounds->add_option("--rounds", bounds_opts.rounds, "Trials per stream")
      ->capture_default_str();
  bounds->add_option("--seeds", bounds_opts.seeds, "Seeds per cell")
      ->capture_default_str();
  bounds->add_option("--seed", bounds_opts.seed, "Base seed")
      ->capture_default_str();
  bounds->add_option("--radius", bounds_opts.radius,
                     "Instance norm (0 = 2*sqrt(k*d))")
      ->capture_default_str();
  bounds->add_option("--noise", bounds_opts.noise,
                     "Corruption rate; > 0 switches to the non-separable "
                     "bound against the generating reference")
      ->capture_default_str();
  bounds->add_option("--eta", bounds_opts.eta, "Perceptron step size")
      ->capture_default_str();
  bounds->add_option("--threads", bounds_opts.threads,
                     "Worker threads (0 = hardware)")
      ->capture_default_str();
  bounds->add_flag("--break-update", bounds_opts.break_update,
                   "Negative control: flip the update sign");

  RegretCheckOpts regret_opts;
  std::string regret_config;
  auto* regret = app.add_subcommand(
      "regret-check", "Regret-bound conformance campaign");
  regret->add_option("--config", regret_config,
                     "Flat key=value config file; flags override");
  regret->add_option("--lambda-grid", regret_opts.lambda_grid,
                     "Regularization constants")
      ->delimiter(',')
      ->capture_default_str();
  regret->add_option("--rounds-grid", regret_opts.rounds_grid, "Trial counts")
      ->delimiter(',')
      ->capture_default_str();
  regret->add_option("--seeds", regret_opts.seeds, "Seeds per cell")
      ->capture_default_str();
  regret->add_option("--seed", regret_opts.seed, "Base seed")
      ->capture_default_str();
  regret->add_option("--k", regret_opts.k, "Classes")->capture_default_str();
  regret->add_option("--d", regret_opts.d, "Dimension")->capture_default_str();
  regret->add_option("--s", regret_opts.s, "Candidate-set size")
      ->capture_default_str();
  regret->add_option("--gamma", regret_opts.gamma, "Generation margin")
      ->capture_default_str();
  regret->add_option("--radius", regret_opts.radius, "Instance norm")
      ->capture_default_str();
  regret->add_option("--epochs", regret_opts.epochs,
                     "Batch-comparator epochs")
      ->capture_default_str();
  regret->add_option("--threads", regret_opts.threads,
                     "Worker threads (0 = hardware)")
      ->capture_default_str();

  InspectOpts inspect_opts;
  auto* inspect = app.add_subcommand("inspect", "Summarize a stream file");
  inspect->add_option("file", inspect_opts.file, "Stream CSV")->required();
  inspect->add_option("--wstar", inspect_opts.wstar,
                      "Reference matrix file for margin statistics");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : 2;
  }

  try {
    if (run->parsed() && !run_config.empty())
      apply_config_file(run, run_config);
    if (synth->parsed() && !synth_config.empty())
      apply_config_file(synth, synth_config);
    if (bounds->parsed() && !bounds_config.empty())
      apply_config_file(bounds, bounds_config);
    if (regret->parsed() && !regret_config.empty())
      apply_config_file(regret, regret_config);
  } catch (const CLI::Error& e) {
    std::fprintf(stderr, "config error: %s\n", e.what());
    return 2;
  } catch (const std::invalid_argument& e) {
    std::fprintf(stderr, "config error: %s\n", e.what());
    return 2;
  }

  try {
    if (run->parsed()) return cmd_run(run_opts);
    if (synth->parsed()) return cmd_synth(synth_opts);
    if (bounds->parsed()) return cmd_bounds_check(bounds_opts);
    if (regret->parsed()) return cmd_regret_check(regret_opts);
    if (inspect->parsed()) return cmd_inspect(inspect_opts);
  } catch (const std::invalid_argument& e) {
    std::fprintf(stderr, "config error: %s\n", e.what());
    return 2;
  } catch (const std::exception& e) {
    std::fprintf(stderr, "error: %s\n", e.what());
    return 1;
  }
  return 2;
}
