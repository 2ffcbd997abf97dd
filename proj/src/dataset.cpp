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

#include "pll/dataset.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <map>
#include <sstream>
#include <stdexcept>

namespace pll {

namespace {

std::vector<std::string_view> split_lines(std::string_view text) {
  std::vector<std::string_view> lines;
  std::size_t start = 0;
  while (start <= text.size()) {
    std::size_t end = text.find('\n', start);
    if (end == std::string_view::npos) end = text.size();
    std::string_view line = text.substr(start, end - start);
    if (!line.empty() && line.back() == '\r') line.remove_suffix(1);
    lines.push_back(line);
    if (end == text.size()) break;
    start = end + 1;
  }
  return lines;
}

bool is_blank(std::string_view line) {
  return line.find_first_not_of(" \t") == std::string_view::npos;
}

std::vector<std::string_view> split_fields(std::string_view line, char delim) {
  std::vector<std::string_view> fields;
  std::size_t start = 0;
  while (true) {
    std::size_t end = line.find(delim, start);
    if (end == std::string_view::npos) {
      fields.push_back(line.substr(start));
      break;
    }
    fields.push_back(line.substr(start, end - start));
    start = end + 1;
  }
  return fields;
}

std::string_view trim(std::string_view s) {
  while (!s.empty() && (s.front() == ' ' || s.front() == '\t')) s.remove_prefix(1);
  while (!s.empty() && (s.back() == ' ' || s.back() == '\t')) s.remove_suffix(1);
  return s;
}

bool parse_double(std::string_view token, double* out) {
  if (token.empty()) return false;
  const std::string buf(token);
  char* end = nullptr;
  const double v = std::strtod(buf.c_str(), &end);
  if (end != buf.c_str() + buf.size()) return false;
  *out = v;
  return true;
}

bool parse_long(std::string_view token, long* out) {
  if (token.empty()) return false;
  const std::string buf(token);
  char* end = nullptr;
  const long v = std::strtol(buf.c_str(), &end, 10);
  if (end != buf.c_str() + buf.size()) return false;
  *out = v;
  return true;
}

// Remaps original label tokens onto 1..K. Tokens are ordered numerically
// when all of them parse as numbers, lexicographically otherwise; the sorted
// order defines class indices.
void remap_labels(const std::vector<std::string>& raw, Dataset* dataset) {
  std::vector<std::string> distinct = raw;
  std::sort(distinct.begin(), distinct.end());
  distinct.erase(std::unique(distinct.begin(), distinct.end()), distinct.end());
  if (distinct.size() < 2)
    throw std::runtime_error("dataset '" + dataset->name +
                             "': need at least 2 distinct labels, found " +
                             std::to_string(distinct.size()));

  bool all_numeric = true;
  std::vector<double> values(distinct.size());
  for (std::size_t i = 0; i < distinct.size(); ++i) {
    if (!parse_double(distinct[i], &values[i])) {
      all_numeric = false;
      break;
    }
  }
  if (all_numeric) {
    std::vector<std::size_t> order(distinct.size());
    for (std::size_t i = 0; i < order.size(); ++i) order[i] = i;
    std::sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) {
      if (values[a] != values[b]) return values[a] < values[b];
      return distinct[a] < distinct[b];
    });
    std::vector<std::string> sorted;
    sorted.reserve(distinct.size());
    for (const std::size_t i : order) sorted.push_back(distinct[i]);
    distinct = std::move(sorted);
  }

  std::map<std::string, int> index;
  for (std::size_t i = 0; i < distinct.size(); ++i)
    index[distinct[i]] = static_cast<int>(i) + 1;

  dataset->label_names = distinct;
  dataset->num_classes = static_cast<int>(distinct.size());
  dataset->labels.reserve(raw.size());
  for (const auto& token : raw) dataset->labels.push_back(index.at(token));
}

std::string format_double(double v) {
  char buf[40];
  std::snprintf(buf, sizeof(buf), "%.17g", v);
  return buf;
}

}  // namespace

Dataset parse_libsvm(std::string_view text, std::string name) {
  Dataset dataset;
  dataset.name = std::move(name);
  dataset.provenance = "libsvm";

  std::vector<std::string> raw_labels;
  std::vector<std::vector<std::pair<long, double>>> sparse_rows;
  long max_index = 0;

  const auto lines = split_lines(text);
  for (std::size_t li = 0; li < lines.size(); ++li) {
    const std::string_view line = lines[li];
    if (is_blank(line)) continue;
    const long line_no = static_cast<long>(li) + 1;

    std::istringstream iss{std::string(line)};
    std::string token;
    if (!(iss >> token))
      throw std::runtime_error("libsvm parse error at line " +
                               std::to_string(line_no) + ": missing label");
    raw_labels.push_back(token);

    std::vector<std::pair<long, double>> row;
    while (iss >> token) {
      const std::size_t colon = token.find(':');
      if (colon == std::string::npos)
        throw std::runtime_error("libsvm parse error at line " +
                                 std::to_string(line_no) +
                                 ": expected index:value, got '" + token + "'");
      long index = 0;
      double value = 0.0;
      if (!parse_long(token.substr(0, colon), &index) || index < 1)
        throw std::runtime_error("libsvm parse error at line " +
                                 std::to_string(line_no) +
                                 ": bad feature index in '" + token + "'");
      if (!parse_double(token.substr(colon + 1), &value) || !std::isfinite(value))
        throw std::runtime_error("libsvm parse error at line " +
                                 std::to_string(line_no) +
                                 ": bad feature value in '" + token + "'");
      for (const auto& [seen, unused] : row) {
        (void)unused;
        if (seen == index)
          throw std::runtime_error("libsvm parse error at line " +
                                   std::to_string(line_no) +
                                   ": duplicate feature index " +
                                   std::to_string(index));
      }
      row.emplace_back(index, value);
      max_index = std::max(max_index, index);
    }
    sparse_rows.push_back(std::move(row));
  }

  if (sparse_rows.empty())
    throw std::runtime_error("libsvm parse error: empty input");
  if (max_index == 0)
    throw std::runtime_error("libsvm parse error: no features in any row");

  dataset.dim = static_cast<int>(max_index);
  dataset.features.reserve(sparse_rows.size());
  for (const auto& row : sparse_rows) {
    FeatureVector dense(static_cast<std::size_t>(max_index), 0.0);
    for (const auto& [index, value] : row)
      dense[static_cast<std::size_t>(index - 1)] = value;
    dataset.features.push_back(std::move(dense));
  }
  remap_labels(raw_labels, &dataset);
  return dataset;
}

Dataset parse_csv(std::string_view text, int label_column, char delimiter,
                  std::string name) {
  Dataset dataset;
  dataset.name = std::move(name);
  dataset.provenance = "csv";

  const auto lines = split_lines(text);
  std::vector<std::pair<long, std::vector<std::string_view>>> rows;
  for (std::size_t li = 0; li < lines.size(); ++li) {
    if (is_blank(lines[li])) continue;
    rows.emplace_back(static_cast<long>(li) + 1, split_fields(lines[li], delimiter));
  }
  if (rows.empty()) throw std::runtime_error("csv parse error: empty input");

  const std::size_t width = rows[0].second.size();
  if (width < 2)
    throw std::runtime_error("csv parse error: need a label and at least one "
                             "feature column");
  std::size_t label_idx;
  if (label_column < 0) {
    if (static_cast<std::size_t>(-label_column) > width)
      throw std::runtime_error("csv parse error: label column out of range");
    label_idx = width - static_cast<std::size_t>(-label_column);
  } else {
    if (static_cast<std::size_t>(label_column) >= width)
      throw std::runtime_error("csv parse error: label column out of range");
    label_idx = static_cast<std::size_t>(label_column);
  }

  // Header row: any feature cell of the first row that is not a number.
  std::size_t first_data = 0;
  for (std::size_t f = 0; f < width; ++f) {
    if (f == label_idx) continue;
    double unused;
    if (!parse_double(trim(rows[0].second[f]), &unused)) {
      first_data = 1;
      break;
    }
  }
  if (first_data >= rows.size())
    throw std::runtime_error("csv parse error: header only, no data rows");

  std::vector<std::string> raw_labels;
  dataset.dim = static_cast<int>(width) - 1;
  for (std::size_t r = first_data; r < rows.size(); ++r) {
    const auto& [line_no, fields] = rows[r];
    if (fields.size() != width)
      throw std::runtime_error("csv parse error at row " +
                               std::to_string(line_no) + ": expected " +
                               std::to_string(width) + " fields, got " +
                               std::to_string(fields.size()));
    FeatureVector x;
    x.reserve(width - 1);
    for (std::size_t f = 0; f < width; ++f) {
      const std::string_view cell = trim(fields[f]);
      if (f == label_idx) {
        raw_labels.emplace_back(cell);
        continue;
      }
      double value = 0.0;
      if (!parse_double(cell, &value))
        throw std::runtime_error("csv parse error at row " +
                                 std::to_string(line_no) +
                                 ": non-numeric feature '" + std::string(cell) +
                                 "'");
      if (!std::isfinite(value))
        throw std::runtime_error("csv parse error at row " +
                                 std::to_string(line_no) +
                                 ": non-finite feature value");
      x.push_back(value);
    }
    dataset.features.push_back(std::move(x));
  }
  remap_labels(raw_labels, &dataset);
  return dataset;
}

Dataset load_dataset_file(const std::filesystem::path& path, DataFormat format,
                          int label_column, char delimiter, long max_rows) {
  std::ifstream in(path, std::ios::binary);
  if (!in)
    throw std::runtime_error("cannot open dataset file: " + path.string());
  std::ostringstream buffer;
  buffer << in.rdbuf();
  const std::string text = buffer.str();

  Dataset dataset =
      format == DataFormat::Libsvm
          ? parse_libsvm(text, path.filename().string())
          : parse_csv(text, label_column, delimiter, path.filename().string());
  dataset.provenance += " file=" + path.string();

  if (max_rows > 0 && static_cast<std::size_t>(max_rows) < dataset.size()) {
    // Keep the first rows; remap again so labels stay a bijection onto 1..K
    // even when the cap drops a class entirely. The feature width of the
    // full file is retained.
    std::vector<std::string> raw;
    raw.reserve(static_cast<std::size_t>(max_rows));
    for (long r = 0; r < max_rows; ++r)
      raw.push_back(
          dataset.label_names[static_cast<std::size_t>(dataset.labels[static_cast<std::size_t>(r)]) - 1]);
    Dataset capped;
    capped.name = dataset.name;
    capped.dim = dataset.dim;
    capped.provenance =
        dataset.provenance + " max_rows=" + std::to_string(max_rows);
    capped.features.assign(dataset.features.begin(),
                           dataset.features.begin() + max_rows);
    remap_labels(raw, &capped);
    return capped;
  }
  return dataset;
}

Dataset min_max_scale(const Dataset& dataset) {
  Dataset scaled = dataset;
  if (dataset.features.empty()) return scaled;
  const std::size_t dim = static_cast<std::size_t>(dataset.dim);
  std::vector<double> lo(dim, 0.0);
  std::vector<double> hi(dim, 0.0);
  for (std::size_t f = 0; f < dim; ++f) {
    lo[f] = hi[f] = dataset.features[0][f];
    for (const auto& x : dataset.features) {
      lo[f] = std::min(lo[f], x[f]);
      hi[f] = std::max(hi[f], x[f]);
    }
  }
  for (auto& x : scaled.features)
    for (std::size_t f = 0; f < dim; ++f)
      x[f] = hi[f] > lo[f] ? (x[f] - lo[f]) / (hi[f] - lo[f]) : 0.0;
  scaled.name += "[scaled]";  // preprocessing shows up in every manifest
  scaled.provenance += " min-max-scaled";
  return scaled;
}

std::string dataset_snapshot(const Dataset& dataset) {
  std::string out;
  out += "name=" + dataset.name + '\n';
  out += "d=" + std::to_string(dataset.dim) + '\n';
  out += "K=" + std::to_string(dataset.num_classes) + '\n';
  out += "labels=";
  for (std::size_t i = 0; i < dataset.label_names.size(); ++i) {
    if (i > 0) out += ',';
    out += dataset.label_names[i] + "->" + std::to_string(i + 1);
  }
  out += '\n';
  out += "n=" + std::to_string(dataset.size()) + '\n';
  for (std::size_t r = 0; r < dataset.size(); ++r) {
    out += "row=" + std::to_string(r + 1) +
           " y=" + std::to_string(dataset.labels[r]) + " x=";
    for (std::size_t f = 0; f < dataset.features[r].size(); ++f) {
      if (f > 0) out += ',';
      out += format_double(dataset.features[r][f]);
    }
    out += '\n';
  }
  return out;
}

}  // namespace pll
