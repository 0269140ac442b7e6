#pragma once

// Generated by tests/oracle/derive_values.py; do not edit by hand.

namespace oracle {

inline constexpr double kB2gVelocityExample = 0.49928596993433433;
inline constexpr double kP2bVelocityHalfBack = -0.5;
inline constexpr double kDistanceAt2300 = 0.6065306597126334;
inline constexpr double kDistanceAt2300Density2 = 0.7788007830714049;
inline constexpr double kDdGoalLineUnit = 0.5740074125998693;
inline constexpr double kDdGoalLineLucy = 1.7631163419723925;
inline constexpr double kKrcNinetyTen = 0.30000000000000004;
inline constexpr double kShapingDiscounted = -0.010000000000000009;
inline constexpr double kAdjacencyRowMean = 0.8032653298563167;
inline constexpr double kAdjacencyDiag = 1.2449186624037092;
inline constexpr double kAdjacencyOff = 0.7550813375962909;

// Lucy potential per player of data/state_2v2.json, then team-spirit distributed.
inline constexpr double kFixturePotential[] = {2.4263851697022334, 1.7622435950188282, 0.3615856460656546, 0.09303906186063621};
inline constexpr double kFixtureDistributed[] = {2.099451579536577, 1.6345524772581932, -1.7730107239256288, -1.9609933328691416};

}  // namespace oracle
