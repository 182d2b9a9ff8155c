#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <vector>

#include "dek/error.hpp"
#include "dek/gower.hpp"
#include "test_util.hpp"

using namespace dek;

TEST_CASE("hand-evaluated example") {
  const Schema s = testutil::make_schema(2, {3});
  const std::vector<double> widths{1.0, 1.0};
  const MixedPoint a{{0.2, 0.8}, {0}};
  const MixedPoint b{{0.5, 0.8}, {2}};
  CHECK(gower_distance(a.view(), b.view(), s, widths) == doctest::Approx(1.3 / 3.0).epsilon(1e-14));
  CHECK(gower_distance(a.view(), a.view(), s, widths) == 0.0);
}

TEST_CASE("one categorical mismatch of two columns") {
  const Schema s = testutil::make_schema(1, {2});
  const std::vector<double> widths{4.0};
  const MixedPoint a{{1.0}, {0}};
  const MixedPoint b{{1.0}, {1}};
  CHECK(gower_distance(a.view(), b.view(), s, widths) == 0.5);
}

TEST_CASE("zero range contributes nothing") {
  const Schema s = testutil::make_schema(2, {});
  const std::vector<double> widths{0.0, 2.0};
  const MixedPoint a{{7.0, 0.0}, {}};
  const MixedPoint b{{9.0, 1.0}, {}};
  CHECK(gower_distance(a.view(), b.view(), s, widths) == 0.25);
}

TEST_CASE("shape mismatch is rejected") {
  const Schema s = testutil::make_schema(2, {3});
  const std::vector<double> widths{1.0, 1.0};
  const MixedPoint a{{0.2}, {0}};
  const MixedPoint b{{0.5, 0.8}, {2}};
  CHECK_THROWS_AS(gower_distance(a.view(), b.view(), s, widths), Error);
  CHECK_THROWS_AS(gower_distance(b.view(), b.view(), s, std::vector<double>{1.0}), Error);
}

TEST_CASE("pairwise matrix matches the double-loop oracle") {
  Rng rng(2024);
  const Dataset ds = testutil::random_dataset(rng, 30, 3, {2, 3, 4});
  const auto rows = testutil::rows_of(ds);
  const auto expected = oracle::matrix(rows, testutil::widths_of(rows));
  for (std::size_t jobs : {1u, 4u}) {
    const DistanceMatrix m = pairwise_matrix(ds, jobs);
    REQUIRE(m.size() == 30);
    for (std::size_t i = 0; i < 30; ++i)
      for (std::size_t j = 0; j < 30; ++j) CHECK(std::fabs(m(i, j) - expected[i][j]) <= 1e-12);
  }
  CHECK(pairwise_matrix(ds, 1).values() == pairwise_matrix(ds, 3).values());
}

TEST_CASE("degenerate matrices") {
  const Schema s = testutil::make_schema(1, {2});
  const Dataset one(s, 1, {0.3}, {1});
  CHECK(pairwise_matrix(one).values() == std::vector<double>{0.0});
  const Dataset same(s, 3, {0.3, 0.3, 0.3}, {1, 1, 1});
  CHECK(pairwise_matrix(same).values() == std::vector<double>(9, 0.0));
}

TEST_CASE("metric properties on random points") {
  Rng rng(99);
  const Dataset ds = testutil::random_dataset(rng, 60, 5, {2, 3, 5, 2});
  const auto& w = ds.range_widths();
  for (std::size_t i = 0; i < ds.size(); ++i)
    for (std::size_t j = 0; j < ds.size(); ++j) {
      const double dij = gower_unchecked(ds.row(i), ds.row(j), w);
      CHECK(dij == gower_unchecked(ds.row(j), ds.row(i), w));
      CHECK(dij >= 0.0);
      CHECK(dij <= 1.0);
      for (std::size_t k = 0; k < ds.size(); k += 7)
        CHECK(dij <= gower_unchecked(ds.row(i), ds.row(k), w) + gower_unchecked(ds.row(k), ds.row(j), w) + 1e-12);
    }
}
