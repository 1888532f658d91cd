#pragma once
// Population-side targets: the half-mass functional delta_P of a reference
// distribution, the level beta_alpha capturing mass 1 - alpha, membership
// in the population central set Q_beta, and the two set-discrepancy
// estimators (symmetric-difference probability, grid Hausdorff distance).

#include <cstdint>
#include <span>
#include <string>
#include <vector>

#include "rconf/distributions.hpp"
#include "rconf/grid.hpp"

namespace rconf {

/// Evaluation route for population quantities when several exist.
enum class MeasureMethod { automatic, analytic, monte_carlo };

/// Monte Carlo controls for the fallback paths. The seed pins the fixed
/// evaluation sample, so every result is reproducible by construction.
struct MeasureOptions {
  MeasureMethod method = MeasureMethod::automatic;
  std::size_t samples = 100000;
  std::uint64_t seed = 0x52434f4e46ull;
};

/// beta_alpha = inf{beta : P(Q_beta) >= 1 - alpha} plus its provenance.
struct PopulationLevel {
  double beta_alpha = 0.0;
  double alpha = 0.0;
  std::string method;       // "analytic" or "monte-carlo"
  std::size_t samples = 0;  // quantile draws (monte-carlo only)
  std::uint64_t seed = 0;   // quantile-draw seed (monte-carlo only)
};

/// A Monte Carlo proportion with its binomial standard error.
struct Estimate {
  double value = 0.0;
  double std_error = 0.0;
  std::size_t trials = 0;
};

/// delta_{P,m}(x) = inf{r > 0 : P(B(x,r)) > m}. Uses the distribution's
/// closed form when it has one, else bisection on the analytic ball mass,
/// else bisection against a fixed seeded sample with the final bracket
/// resolved exactly to the sample order statistic. m in [0, 1).
double delta_p(std::span<const double> x, const ReferenceDistribution& dist, double m,
               const MeasureOptions& opts = {});
double delta_p(const Point& x, const ReferenceDistribution& dist, double m,
               const MeasureOptions& opts = {});

/// delta_p at many points; the Monte Carlo path shares one evaluation
/// sample across points and returns values identical to per-point calls.
std::vector<double> delta_p_many(const Dataset& points, const ReferenceDistribution& dist,
                                 double m, const MeasureOptions& opts = {});

/// Analytic where the distribution has a closed form, otherwise the lower
/// empirical (1-alpha)-quantile of delta_P over opts.samples seeded draws
/// (at least 100). opts.method forces one route.
PopulationLevel beta_alpha(const ReferenceDistribution& dist, double alpha,
                           const MeasureOptions& opts = {});

/// x in Q_beta  <=>  delta_{P,1/2}(x) <= beta.
bool q_population_membership(std::span<const double> x, const ReferenceDistribution& dist,
                             double beta, const MeasureOptions& opts = {});
bool q_population_membership(const Point& x, const ReferenceDistribution& dist, double beta,
                             const MeasureOptions& opts = {});

/// Population central set evaluated on every grid node. The Monte Carlo
/// evaluation sample (when one is needed) is drawn once for the whole grid.
GridMask q_population_on_grid(const ReferenceDistribution& dist, const GridSpec& grid,
                              double beta, const MeasureOptions& opts = {});

/// P(X in gamma^alpha(sample) symdiff Q_{beta_alpha}): each trial draws a
/// fresh size-n sample plus one test point from its own derived stream and
/// compares conformal-region membership against population-set membership
/// at level.beta_alpha. trials >= 100.
Estimate sym_diff_probability(const ReferenceDistribution& dist, std::size_t n, double alpha,
                              std::size_t trials, std::uint64_t seed,
                              const PopulationLevel& level, const MeasureOptions& opts = {});

/// Convenience overload computing beta_alpha itself with default options.
Estimate sym_diff_probability(const ReferenceDistribution& dist, std::size_t n, double alpha,
                              std::size_t trials, std::uint64_t seed);

/// Hausdorff distance between the true-node sets of two masks on the same
/// grid, Euclidean metric. Errors if the grids differ or a mask is empty.
double hausdorff_distance_grid(const GridMask& a, const GridMask& b, const GridSpec& grid);

}  // namespace rconf
