#include <cmath>
#include <stdexcept>

#include "doctest.h"
#include "pll/model.hpp"
#include "pll/rng.hpp"
#include "test_util.hpp"

using namespace pll;
using pll::testing::make_weights;
using pll::testing::random_vector;
using pll::testing::random_weights;

TEST_SUITE_BEGIN("model");

TEST_CASE("score of zero weights is all zeros") {
  WeightMatrix w(2, 3);
  const auto scores = score(w, {1.0, 5.0});
  CHECK(scores == std::vector<double>{0.0, 0.0, 0.0});
}

TEST_CASE("score evaluates per-class inner products") {
  const auto w = make_weights({{1.0}, {0.5}, {-1.0}});
  const auto scores = score(w, {2.0});
  CHECK(scores == std::vector<double>{2.0, 1.0, -2.0});
}

TEST_CASE("score with basis columns projects the instance") {
  const auto w = make_weights({{1, 0, 0}, {0, 1, 0}, {0, 0, 1}});
  CHECK(score(w, {3.0, 1.0, 2.0}) == std::vector<double>{3.0, 1.0, 2.0});
}

TEST_CASE("score rejects a dimension mismatch and names both sizes") {
  WeightMatrix w(3, 2);
  CHECK_THROWS_WITH_AS(score(w, {1.0, 2.0}),
                       doctest::Contains("d=3"), std::invalid_argument);
}

TEST_CASE("predict breaks ties to the lowest class") {
  WeightMatrix zeros(2, 4);
  CHECK(predict(zeros, {7.0, -3.0}) == 1);

  const auto w = make_weights({{1.0}, {0.5}, {-1.0}});
  CHECK(predict(w, {2.0}) == 1);

  const auto tied = make_weights({{0.0}, {5.0}, {5.0}});
  CHECK(predict(tied, {1.0}) == 2);
}

TEST_CASE("argmax over an explicit set") {
  const auto w = make_weights({{1.0}, {0.5}, {-1.0}});
  const FeatureVector x{2.0};  // scores [2, 1, -2]
  CHECK(argmax_in_set(w, x, CandidateLabelSet{2, 3}) == 2);
  CHECK(argmax_in_set(w, x, CandidateLabelSet{3}) == 3);

  WeightMatrix zeros(1, 3);
  CHECK(argmax_in_set(zeros, {1.0}, CandidateLabelSet{3, 1}) == 1);
}

TEST_CASE("candidate set construction rejects bad input") {
  CHECK_THROWS_AS(CandidateLabelSet(std::vector<int>{}), std::invalid_argument);
  CHECK_THROWS_AS((CandidateLabelSet{1, 1}), std::invalid_argument);
  CHECK_THROWS_AS((CandidateLabelSet{0, 2}), std::invalid_argument);
}

TEST_CASE("frobenius norm") {
  CHECK(frobenius_norm(WeightMatrix(2, 3)) == 0.0);

  auto single = WeightMatrix(1, 2);
  single.at(0, 1) = 3.0;
  CHECK(frobenius_norm(single) == 3.0);

  CHECK(frobenius_norm(make_weights({{3, 0}, {0, 4}})) == 5.0);
}

TEST_CASE("projection scales into the ball") {
  // ||W|| = 2, lambda = 1: scaled by 1/2.
  const auto w = make_weights({{2.0}, {0.0}});
  const auto projected = project_to_ball(w, 1.0);
  CHECK(projected.at(0, 1) == doctest::Approx(1.0));
  CHECK(frobenius_norm(projected) == doctest::Approx(1.0));

  // Already inside: unchanged, bitwise.
  const auto small = make_weights({{0.5}, {0.0}});
  CHECK(project_to_ball(small, 1.0) == small);

  // lambda = 4: target 1/2, unit matrix scaled by 1/2.
  const auto unit = make_weights({{1.0}, {0.0}});
  const auto half = project_to_ball(unit, 4.0);
  CHECK(frobenius_norm(half) == doctest::Approx(0.5));

  CHECK_THROWS_AS(project_to_ball(w, 0.0), std::invalid_argument);
  CHECK_THROWS_AS(project_to_ball(w, -1.0), std::invalid_argument);
}

TEST_CASE("zero matrix passes through the projection") {
  const WeightMatrix zeros(3, 4);
  CHECK(project_to_ball(zeros, 0.25) == zeros);
}

TEST_CASE("predict agrees with argmax over the full label set") {
  Rng rng(11);
  for (int it = 0; it < 2000; ++it) {
    const int dim = 1 + static_cast<int>(rng.uniform_below(6));
    const int num_classes = 2 + static_cast<int>(rng.uniform_below(7));
    const auto w = random_weights(rng, dim, num_classes);
    const auto x = random_vector(rng, dim);
    std::vector<int> all(static_cast<std::size_t>(num_classes));
    for (int c = 1; c <= num_classes; ++c) all[static_cast<std::size_t>(c - 1)] = c;
    CHECK(predict(w, x) == argmax_in_set(w, x, CandidateLabelSet(all)));
  }
}

TEST_CASE("projection is exactly idempotent") {
  Rng rng(12);
  for (int it = 0; it < 20000; ++it) {
    const int dim = 1 + static_cast<int>(rng.uniform_below(8));
    const int num_classes = 2 + static_cast<int>(rng.uniform_below(9));
    const auto w = random_weights(rng, dim, num_classes,
                                  std::exp(3.0 * rng.normal()));
    const double lambda = std::exp(2.0 * rng.normal());
    const auto once = project_to_ball(w, lambda);
    const auto twice = project_to_ball(once, lambda);
    REQUIRE(twice == once);
  }
}

TEST_CASE("projected norm never exceeds the ball radius") {
  Rng rng(13);
  for (int it = 0; it < 100000; ++it) {
    const int dim = 1 + static_cast<int>(rng.uniform_below(5));
    const int num_classes = 2 + static_cast<int>(rng.uniform_below(5));
    const auto w = random_weights(rng, dim, num_classes,
                                  std::exp(2.0 * rng.normal()));
    const double lambda = 0.01 + 10.0 * rng.uniform();
    const double target = 1.0 / std::sqrt(lambda);
    REQUIRE(frobenius_norm(project_to_ball(w, lambda)) <= target + 1e-12);
  }
}

TEST_CASE("score is linear in the instance") {
  Rng rng(14);
  for (int it = 0; it < 2000; ++it) {
    const int dim = 1 + static_cast<int>(rng.uniform_below(6));
    const int num_classes = 2 + static_cast<int>(rng.uniform_below(6));
    const auto w = random_weights(rng, dim, num_classes);
    const auto x1 = random_vector(rng, dim);
    const auto x2 = random_vector(rng, dim);
    const double a = rng.normal();
    const double b = rng.normal();
    FeatureVector combined(static_cast<std::size_t>(dim));
    for (int i = 0; i < dim; ++i)
      combined[static_cast<std::size_t>(i)] =
          a * x1[static_cast<std::size_t>(i)] + b * x2[static_cast<std::size_t>(i)];
    const auto lhs = score(w, combined);
    const auto s1 = score(w, x1);
    const auto s2 = score(w, x2);
    for (int k = 0; k < num_classes; ++k) {
      const double expected = a * s1[static_cast<std::size_t>(k)] +
                              b * s2[static_cast<std::size_t>(k)];
      const double scale = std::max(1.0, std::abs(expected));
      REQUIRE(std::abs(lhs[static_cast<std::size_t>(k)] - expected) <=
              1e-9 * scale);
    }
  }
}

TEST_SUITE_END();
