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

#ifndef PLL_DATASET_HPP
#define PLL_DATASET_HPP

#include <filesystem>
#include <string>
#include <string_view>
#include <vector>

#include "pll/model.hpp"

namespace pll {

// Fully ingested multiclass dataset: dense feature rows and labels remapped
// onto 1..K. `label_names[k-1]` is the original token of class k; original
// labels are ordered numerically when every token parses as a number and
// lexicographically otherwise.
struct Dataset {
  std::string name;
  std::vector<FeatureVector> features;
  std::vector<int> labels;  // 1..K, aligned with features
  int num_classes = 0;
  int dim = 0;
  std::vector<std::string> label_names;
  std::string provenance;

  std::size_t size() const { return features.size(); }
};

enum class DataFormat { Libsvm, Csv };

// Parses `label idx:val idx:val ...` lines with 1-based feature indices;
// missing indices densify to 0. Throws std::runtime_error with a line number
// on malformed input, and on fewer than two classes.
Dataset parse_libsvm(std::string_view text, std::string name = "libsvm");

// Parses a rectangular delimited table. `label_column` is 0-based; negative
// values count from the end (-1 = last column). A header row is detected by
// any non-numeric feature cell in the first row and skipped. Throws
// std::runtime_error with a row number on ragged rows, non-numeric or
// non-finite features, and on fewer than two classes.
Dataset parse_csv(std::string_view text, int label_column = -1,
                  char delimiter = ',', std::string name = "csv");

// Reads a whole file and dispatches on format. `max_rows` > 0 keeps only the
// first rows of the raw file (libsvm lines or csv data rows) before parsing.
Dataset load_dataset_file(const std::filesystem::path& path, DataFormat format,
                          int label_column = -1, char delimiter = ',',
                          long max_rows = 0);

// Per-feature min-max rescaling to [0, 1]; a constant feature maps to 0.
Dataset min_max_scale(const Dataset& dataset);

// Canonical text form of a dataset, used by golden-file tests.
std::string dataset_snapshot(const Dataset& dataset);

}  // namespace pll

#endif  // PLL_DATASET_HPP
