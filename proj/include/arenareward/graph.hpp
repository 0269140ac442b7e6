#pragma once

#include <cstddef>
#include <span>
#include <vector>

#include "arenareward/arena.hpp"
#include "arenareward/components.hpp"

namespace arenareward {

enum class SelfConnection {
  Unit,        // self weight fixed at 1, only neighbours are normalized
  Normalized,  // self weight normalized with the rest of the row
};

// How the unit-self variant averages a row. Literal divides the off-diagonal
// sum by N as printed; FullRow averages the whole row including the self
// weight.
enum class AdjacencyReading { Literal, FullRow };

/// Dense row-major adjacency over N objects built from the parameterized
/// distance kernel with the car speed cap as normalizer.
struct AdjacencyMatrix {
  SelfConnection variant = SelfConnection::Normalized;
  DistanceShape shape;
  std::size_t size = 0;
  std::vector<double> values;

  double operator()(std::size_t i, std::size_t j) const { return values[i * size + j]; }
  double& operator()(std::size_t i, std::size_t j) { return values[i * size + j]; }

  std::vector<double> row(std::size_t i) const {
    return {values.begin() + static_cast<std::ptrdiff_t>(i * size),
            values.begin() + static_cast<std::ptrdiff_t>((i + 1) * size)};
  }
};

inline AdjacencyMatrix build_adjacency(std::span<const Vec3> positions, SelfConnection variant,
                                       const DistanceShape& shape,
                                       AdjacencyReading reading = AdjacencyReading::Literal) {
  if (positions.empty()) throw ParameterError("adjacency needs at least one object");
  shape.validate();
  constexpr double kNormalizer = 2300.0;
  const std::size_t n = positions.size();
  AdjacencyMatrix m{variant, shape, n, std::vector<double>(n * n)};
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = 0; j < n; ++j)
      m(i, j) = (i == j) ? 1.0 : parameterized_distance((positions[j] - positions[i]).norm(), kNormalizer, shape);

  const double count = static_cast<double>(n);
  for (std::size_t i = 0; i < n; ++i) {
    double sum = 0.0;
    for (std::size_t j = 0; j < n; ++j)
      if (variant == SelfConnection::Normalized || reading == AdjacencyReading::FullRow || j != i) sum += m(i, j);
    const double mean = sum / count;
    if (mean == 0.0) continue;  // isolated row (N == 1 under the literal reading)
    for (std::size_t j = 0; j < n; ++j)
      if (variant == SelfConnection::Normalized || j != i) m(i, j) /= mean;
  }
  return m;
}

inline AdjacencyMatrix build_adjacency(const GameState& state, SelfConnection variant, const DistanceShape& shape,
                                       AdjacencyReading reading = AdjacencyReading::Literal) {
  std::vector<Vec3> positions{state.ball.position};
  for (const auto& p : state.players) positions.push_back(p.body.position);
  return build_adjacency(positions, variant, shape, reading);
}

}  // namespace arenareward
