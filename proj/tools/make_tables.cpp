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

// Regenerates the bundled benchmark tables under data/. The two tables are
// synthetic stand-ins shaped like the UCI Ecoli (336 x 7, 8 classes) and
// Dermatology (366 x 34, 6 classes) tables, including their class-count
// imbalance, so experiments run offline with realistic shapes. Gaussian
// class blobs, fixed seeds, deterministic output.

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <string>
#include <vector>

#include "pll/rng.hpp"

namespace {

struct Row {
  std::string label;
  std::vector<double> values;
};

void write_csv(const std::filesystem::path& path,
               const std::vector<std::string>& header, std::vector<Row> rows,
               pll::Rng& rng, int decimals) {
  rng.shuffle(rows);
  std::ofstream out(path, std::ios::binary);
  if (!out) {
    std::fprintf(stderr, "cannot open %s\n", path.string().c_str());
    std::exit(1);
  }
  for (std::size_t i = 0; i < header.size(); ++i)
    out << (i > 0 ? "," : "") << header[i];
  out << '\n';
  char buf[40];
  for (const auto& row : rows) {
    for (const double v : row.values) {
      std::snprintf(buf, sizeof(buf), "%.*f", decimals, v);
      out << buf << ',';
    }
    out << row.label << '\n';
  }
}

void make_ecoli_like(const std::filesystem::path& path) {
  // 8 classes with the Ecoli class-count imbalance, 7 features in [0, 1].
  const std::vector<int> counts{143, 77, 52, 35, 20, 5, 2, 2};
  const int dim = 7;
  pll::Rng rng(20260808);

  std::vector<std::vector<double>> means;
  for (std::size_t k = 0; k < counts.size(); ++k) {
    std::vector<double> mean(dim);
    for (auto& m : mean) m = 0.2 + 0.6 * rng.uniform();
    means.push_back(std::move(mean));
  }

  std::vector<Row> rows;
  for (std::size_t k = 0; k < counts.size(); ++k) {
    for (int r = 0; r < counts[k]; ++r) {
      Row row;
      row.label = "c" + std::to_string(k + 1);
      row.values.resize(dim);
      for (int f = 0; f < dim; ++f)
        row.values[static_cast<std::size_t>(f)] = std::clamp(
            means[k][static_cast<std::size_t>(f)] + 0.11 * rng.normal(), 0.0,
            1.0);
      rows.push_back(std::move(row));
    }
  }

  std::vector<std::string> header;
  for (int f = 1; f <= dim; ++f) header.push_back("f" + std::to_string(f));
  header.push_back("class");
  write_csv(path, header, std::move(rows), rng, 4);
}

void make_dermatology_like(const std::filesystem::path& path) {
  // 6 classes with the Dermatology class-count imbalance, 33 graded
  // attributes in {0..3} plus an age column that is mildly class-correlated.
  const std::vector<int> counts{112, 61, 72, 49, 52, 20};
  const int graded = 33;
  pll::Rng rng(20260809);

  std::vector<std::vector<double>> means;
  for (std::size_t k = 0; k < counts.size(); ++k) {
    std::vector<double> mean(graded);
    // Roughly half the attributes are markers pinned near 0 or 3 for the
    // class, the rest sit mid-range.
    for (auto& m : mean)
      m = rng.uniform() < 0.5 ? (rng.uniform() < 0.5 ? 0.3 : 2.7)
                              : 1.0 + rng.uniform();
    means.push_back(std::move(mean));
  }

  std::vector<Row> rows;
  for (std::size_t k = 0; k < counts.size(); ++k) {
    for (int r = 0; r < counts[k]; ++r) {
      Row row;
      row.label = std::to_string(k + 1);
      row.values.resize(graded + 1);
      for (int f = 0; f < graded; ++f) {
        const double v = means[k][static_cast<std::size_t>(f)] + 0.55 * rng.normal();
        row.values[static_cast<std::size_t>(f)] =
            std::clamp(std::round(v), 0.0, 3.0);
      }
      row.values[graded] = std::clamp(
          std::round(18.0 + 9.0 * static_cast<double>(k) + 6.0 * rng.normal()),
          10.0, 74.0);  // age 10..74
      rows.push_back(std::move(row));
    }
  }

  std::vector<std::string> header;
  for (int f = 1; f <= graded; ++f) header.push_back("a" + std::to_string(f));
  header.push_back("age");
  header.push_back("class");
  write_csv(path, header, std::move(rows), rng, 0);
}

}  // namespace

int main(int argc, char** argv) {
  const std::filesystem::path out_dir = argc > 1 ? argv[1] : "data";
  std::filesystem::create_directories(out_dir);
  make_ecoli_like(out_dir / "ecoli_like.csv");
  make_dermatology_like(out_dir / "dermatology_like.csv");
  std::printf("wrote %s and %s\n",
              (out_dir / "ecoli_like.csv").string().c_str(),
              (out_dir / "dermatology_like.csv").string().c_str());
  return 0;
}
