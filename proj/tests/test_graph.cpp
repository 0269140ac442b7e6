#include <gtest/gtest.h>

#include <algorithm>
#include <numeric>

#include "oracle_values.hpp"
#include "test_util.hpp"

using namespace arenareward;

TEST(Adjacency, TwoObjectNormalizedExample) {
  const std::vector<Vec3> p{{0, 0, 0}, {2300, 0, 0}};
  const auto m = build_adjacency(p, SelfConnection::Normalized, {});
  EXPECT_NEAR(m(0, 0), oracle::kAdjacencyDiag, 1e-12);
  EXPECT_NEAR(m(0, 1), oracle::kAdjacencyOff, 1e-12);
  EXPECT_NEAR(m(0, 0), 1.2449, 1e-4);
  EXPECT_NEAR(m(0, 1), 0.7550, 1e-4);
  EXPECT_NEAR((m(0, 0) + m(0, 1)) / 2.0, 1.0, 1e-15);
}

TEST(Adjacency, TwoObjectUnitLiteral) {
  const std::vector<Vec3> p{{0, 0, 0}, {2300, 0, 0}};
  const auto m = build_adjacency(p, SelfConnection::Unit, {});
  EXPECT_EQ(m(0, 0), 1.0);
  EXPECT_NEAR(m(0, 1), 2.0, 1e-15);
}

TEST(Adjacency, TwoObjectUnitFullRow) {
  const std::vector<Vec3> p{{0, 0, 0}, {2300, 0, 0}};
  const auto m = build_adjacency(p, SelfConnection::Unit, {}, AdjacencyReading::FullRow);
  EXPECT_EQ(m(0, 0), 1.0);
  EXPECT_NEAR(m(0, 1), oracle::kAdjacencyOff, 1e-12);
}

TEST(Adjacency, CoincidentObjects) {
  const std::vector<Vec3> p{{5, 5, 5}, {5, 5, 5}};
  const auto m = build_adjacency(p, SelfConnection::Normalized, {});
  for (double v : m.values) EXPECT_EQ(v, 1.0);
}

TEST(Adjacency, RandomSetProperties) {
  std::mt19937_64 rng(40);
  std::uniform_int_distribution<int> n(2, 9);
  std::uniform_real_distribution<double> shape(0.3, 3.0);
  for (int it = 0; it < 1000; ++it) {
    std::vector<Vec3> p(static_cast<std::size_t>(n(rng)));
    for (auto& v : p) v = testutil::random_vec(rng, -5000, 5000);
    const DistanceShape sh{shape(rng), shape(rng)};
    const auto a = build_adjacency(p, SelfConnection::Unit, sh);
    const auto b = build_adjacency(p, SelfConnection::Normalized, sh);
    for (std::size_t i = 0; i < p.size(); ++i) {
      EXPECT_EQ(a(i, i), 1.0);
      const auto row = b.row(i);
      EXPECT_NEAR(std::accumulate(row.begin(), row.end(), 0.0) / static_cast<double>(row.size()), 1.0, 1e-12);
      EXPECT_EQ(std::max_element(row.begin(), row.end()) - row.begin(), static_cast<std::ptrdiff_t>(i));
      // Row scaling breaks symmetry, but dividing by the diagonal recovers the
      // symmetric kernel.
      for (std::size_t j = 0; j < p.size(); ++j)
        EXPECT_NEAR(b(i, j) / b(i, i), b(j, i) / b(j, j), 1e-12);
    }
  }
}

TEST(Adjacency, TranslationInvariant) {
  std::mt19937_64 rng(41);
  for (int it = 0; it < 200; ++it) {
    std::vector<Vec3> p(5), q(5);
    const Vec3 shift = testutil::random_vec(rng, -1000, 1000);
    for (std::size_t i = 0; i < 5; ++i) {
      p[i] = testutil::random_vec(rng, -3000, 3000);
      q[i] = p[i] + shift;
    }
    const auto a = build_adjacency(p, SelfConnection::Normalized, {});
    const auto b = build_adjacency(q, SelfConnection::Normalized, {});
    for (std::size_t k = 0; k < a.values.size(); ++k) EXPECT_NEAR(a.values[k], b.values[k], 1e-9);
  }
}

TEST(Adjacency, StateOverloadPutsBallFirst) {
  const auto s = load_state(testutil::data_path("state_two_objects.json"));
  const auto m = build_adjacency(s, SelfConnection::Normalized, {});
  EXPECT_EQ(m.size, 2u);
  EXPECT_NEAR(m(0, 1), oracle::kAdjacencyOff, 1e-12);
}

TEST(Adjacency, Errors) {
  EXPECT_THROW(build_adjacency(std::vector<Vec3>{}, SelfConnection::Unit, {}), ParameterError);
  EXPECT_THROW(build_adjacency(std::vector<Vec3>{{0, 0, 0}}, SelfConnection::Unit, {0.0, 1.0}), ParameterError);
}
