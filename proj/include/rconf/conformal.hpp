#pragma once
// Conformal machinery on top of the half-mass score: leave-one-out bags,
// non-conformity scores, p-values, and membership in the prediction region.
//
// For a sample {X_1..X_n} and candidate z, the bags are
//   B_i = ({X_1..X_n} u {z}) \ {X_i}   for i <= n,   B_{n+1} = {X_1..X_n},
// each of size n, and R_i is the majority-radius score of X_i (resp. z)
// against its bag.

#include <cstddef>
#include <vector>

#include "rconf/geometry.hpp"
#include "rconf/grid.hpp"

namespace rconf {

/// Leave-one-out non-conformity scores R_1..R_{n+1}; the last entry is the
/// candidate's score.
struct ScoreVector {
  std::vector<double> scores;

  std::size_t size() const { return scores.size(); }
  double candidate_score() const { return scores.back(); }
};

/// Exact conformal p-value as an integer fraction count/(n+1).
struct PValue {
  std::size_t count = 0;  // #{i : R_i >= R_{n+1}}, includes i = n+1
  std::size_t total = 0;  // n + 1

  double value() const { return static_cast<double>(count) / static_cast<double>(total); }
};

struct ConformalConfig {
  double alpha = 0.1;  // miscoverage level in (0,1)
};

void validate_alpha(double alpha);

/// Majority-radius score of z against a bag: the smallest radius covering a
/// strict majority of the bag, computed as the (floor(n/2)+1)-NN distance.
double nonconformity_score(const Dataset& bag, const Point& z);

/// Literal min over majority subsets of the max distance, by subset
/// enumeration. Oracle implementation; |bag| <= 20.
double brute_force_score(const Dataset& bag, const Point& z);

/// All n+1 leave-one-out scores for candidate z against data.
ScoreVector leave_one_out_scores(const Dataset& data, const Point& z);
ScoreVector leave_one_out_scores(const Dataset& data, std::span<const double> z);

/// p_z = #{i : R_i >= R_{n+1}} / (n+1); always >= 1/(n+1).
PValue conformal_p_value(const Dataset& data, const Point& z);
PValue conformal_p_value(const Dataset& data, std::span<const double> z);

/// z is in the prediction region iff p_z > alpha (strict).
bool region_membership(const Dataset& data, const Point& z, const ConformalConfig& cfg);
bool region_membership(const Dataset& data, std::span<const double> z, const ConformalConfig& cfg);

/// Pointwise region membership over every grid node.
GridMask region_on_grid(const Dataset& data, const GridSpec& grid, const ConformalConfig& cfg);

}  // namespace rconf
