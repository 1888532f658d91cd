#include "rconf/population.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>
#include <utility>

#include "rconf/conformal.hpp"
#include "rconf/parallel.hpp"
#include "rconf/random.hpp"

namespace rconf {

namespace {

constexpr std::uint64_t kQuantileTag = 1;
constexpr std::uint64_t kMeasureTag = 2;
constexpr std::uint64_t kTrialTag = 3;

void check_mass_fraction(double m) {
  if (!(m >= 0.0) || !(m < 1.0)) {
    throw std::invalid_argument("delta_p: mass fraction m must lie in [0, 1)");
  }
}

void check_dim(std::span<const double> x, const ReferenceDistribution& dist) {
  if (x.size() != dist.dim()) {
    throw std::invalid_argument("population: point dimension does not match distribution");
  }
}

// Smallest count that exceeds m * N; robust to m * N landing on an integer.
std::size_t majority_count(double m, std::size_t N) {
  const double mn = m * static_cast<double>(N);
  auto c = static_cast<std::size_t>(std::floor(mn)) + 1;
  return std::min(c, N);
}

// inf{r > 0 : mass(r) > m} by bisection against a nondecreasing analytic
// ball mass. Correct at jumps too: the invariant mass(lo) <= m < mass(hi)
// brackets the boundary of the up-set {r : mass(r) > m}.
double analytic_delta(std::span<const double> x, const ReferenceDistribution& dist, double m) {
  const auto mass = [&](double r) { return *dist.ball_mass(x, r); };
  if (mass(0.0) > m) return 0.0;
  double hi = std::max(dist.typical_scale(), 1e-9);
  int guard = 0;
  while (!(mass(hi) > m)) {
    hi *= 2.0;
    if (++guard > 200) throw std::runtime_error("delta_p: ball mass never exceeds m");
  }
  double lo = 0.0;
  const double tol = 1e-11 * std::max(1.0, hi);
  while (hi - lo > tol) {
    const double mid = 0.5 * (lo + hi);
    if (mass(mid) > m) {
      hi = mid;
    } else {
      lo = mid;
    }
  }
  return 0.5 * (lo + hi);
}

bool has_analytic_mass(const ReferenceDistribution& dist) {
  const Point probe = dist.center_hint();
  return dist.ball_mass(probe, 0.0).has_value();
}

bool has_delta_closed_form(const ReferenceDistribution& dist, double m) {
  const Point probe = dist.center_hint();
  return dist.delta_closed_form(probe, m).has_value();
}

struct FixedSample {
  std::vector<double> flat;  // N x d, row-major
  std::size_t n = 0;
  std::size_t d = 0;

  std::span<const double> row(std::size_t i) const { return {flat.data() + i * d, d}; }
};

FixedSample draw_fixed_sample(const ReferenceDistribution& dist, const MeasureOptions& opts) {
  if (opts.samples == 0) {
    throw std::invalid_argument("population: monte-carlo path needs a positive sample size");
  }
  FixedSample s;
  s.n = opts.samples;
  s.d = dist.dim();
  s.flat.resize(s.n * s.d);
  RandomStream rs(derive_seed(opts.seed, {kMeasureTag}));
  for (std::size_t i = 0; i < s.n; ++i) {
    dist.sample_into(rs, std::span<double>(s.flat.data() + i * s.d, s.d));
  }
  return s;
}

// The kmin-th smallest distance from x to the fixed sample. Bisection to
// width 1e-4 against the (monotone) empirical ball mass, then the final
// bracket is resolved by rank selection, so the result is exactly the
// sample order statistic.
double mc_delta(std::span<const double> x, const FixedSample& s, double m) {
  const std::size_t kmin = majority_count(m, s.n);
  std::vector<double> sq(s.n);
  double max_sq = 0.0;
  for (std::size_t i = 0; i < s.n; ++i) {
    sq[i] = squared_distance(x, s.row(i));
    max_sq = std::max(max_sq, sq[i]);
  }
  const auto count_le = [&](double r) {
    const double t = squared_radius_threshold(r);
    std::size_t c = 0;
    for (double v : sq) c += (v <= t) ? 1 : 0;
    return c;
  };
  if (count_le(0.0) >= kmin) return 0.0;
  double lo = 0.0;
  double hi = std::sqrt(max_sq) + 1.0;
  while (hi - lo > 1e-4) {
    const double mid = 0.5 * (lo + hi);
    if (count_le(mid) >= kmin) {
      hi = mid;
    } else {
      lo = mid;
    }
  }
  const double tlo = squared_radius_threshold(lo);
  const double thi = squared_radius_threshold(hi);
  std::vector<double> bracket;
  std::size_t below = 0;
  for (double v : sq) {
    if (v <= tlo) {
      ++below;
    } else if (v <= thi) {
      bracket.push_back(v);
    }
  }
  const std::size_t rank = kmin - below;  // in [1, bracket.size()] by the invariant
  std::nth_element(bracket.begin(), bracket.begin() + static_cast<std::ptrdiff_t>(rank - 1),
                   bracket.end());
  return std::sqrt(bracket[rank - 1]);
}

// Membership evaluator for Q_beta that fixes its route (and Monte Carlo
// sample, when one is needed) once, so grid sweeps and trial loops do not
// re-draw it per query.
class QMembership {
 public:
  QMembership(const ReferenceDistribution& dist, double beta, const MeasureOptions& opts)
      : dist_(dist), beta_(beta) {
    if (!(beta >= 0.0)) {
      throw std::invalid_argument("q_population_membership: beta must be >= 0");
    }
    if (opts.method != MeasureMethod::monte_carlo && has_delta_closed_form(dist, 0.5)) {
      route_ = Route::closed_form;
      return;
    }
    if (opts.method != MeasureMethod::monte_carlo && has_analytic_mass(dist)) {
      route_ = Route::analytic_mass;
      return;
    }
    if (opts.method == MeasureMethod::analytic) {
      throw std::invalid_argument(
          "q_population_membership: no analytic route for this distribution");
    }
    route_ = Route::monte_carlo;
    sample_ = draw_fixed_sample(dist, opts);
    kmin_ = majority_count(0.5, sample_.n);
    threshold_ = squared_radius_threshold(beta);
  }

  bool operator()(std::span<const double> x) const {
    switch (route_) {
      case Route::closed_form:
        return *dist_.delta_closed_form(x, 0.5) <= beta_;
      case Route::analytic_mass:
        // delta <= beta iff the closed beta-ball already holds mass >= 1/2
        // (exact for continuous mass away from flat stretches at the level).
        return *dist_.ball_mass(x, beta_) >= 0.5;
      case Route::monte_carlo:
      default: {
        std::size_t c = 0;
        for (std::size_t i = 0; i < sample_.n; ++i) {
          if (squared_distance(x, sample_.row(i)) <= threshold_) {
            if (++c >= kmin_) return true;
          }
        }
        return false;
      }
    }
  }

 private:
  enum class Route { closed_form, analytic_mass, monte_carlo };

  const ReferenceDistribution& dist_;
  double beta_;
  Route route_ = Route::closed_form;
  FixedSample sample_;
  std::size_t kmin_ = 0;
  double threshold_ = 0.0;
};

}  // namespace

double delta_p(std::span<const double> x, const ReferenceDistribution& dist, double m,
               const MeasureOptions& opts) {
  check_dim(x, dist);
  check_mass_fraction(m);
  if (opts.method != MeasureMethod::monte_carlo) {
    if (const auto d = dist.delta_closed_form(x, m)) return *d;
    if (has_analytic_mass(dist)) return analytic_delta(x, dist, m);
    if (opts.method == MeasureMethod::analytic) {
      throw std::invalid_argument("delta_p: no analytic route for this distribution");
    }
  }
  const FixedSample s = draw_fixed_sample(dist, opts);
  return mc_delta(x, s, m);
}

double delta_p(const Point& x, const ReferenceDistribution& dist, double m,
               const MeasureOptions& opts) {
  return delta_p(std::span<const double>(x), dist, m, opts);
}

std::vector<double> delta_p_many(const Dataset& points, const ReferenceDistribution& dist,
                                 double m, const MeasureOptions& opts) {
  check_mass_fraction(m);
  std::vector<double> out(points.size());
  if (points.empty()) return out;
  if (points.dim() != dist.dim()) {
    throw std::invalid_argument("population: point dimension does not match distribution");
  }
  if (opts.method != MeasureMethod::monte_carlo) {
    if (has_delta_closed_form(dist, m)) {
      parallel_for(static_cast<std::int64_t>(points.size()), [&](std::int64_t i) {
        out[static_cast<std::size_t>(i)] =
            *dist.delta_closed_form(points[static_cast<std::size_t>(i)], m);
      });
      return out;
    }
    if (has_analytic_mass(dist)) {
      parallel_for(static_cast<std::int64_t>(points.size()), [&](std::int64_t i) {
        out[static_cast<std::size_t>(i)] =
            analytic_delta(points[static_cast<std::size_t>(i)], dist, m);
      });
      return out;
    }
    if (opts.method == MeasureMethod::analytic) {
      throw std::invalid_argument("delta_p: no analytic route for this distribution");
    }
  }
  const FixedSample s = draw_fixed_sample(dist, opts);
  parallel_for(static_cast<std::int64_t>(points.size()), [&](std::int64_t i) {
    out[static_cast<std::size_t>(i)] = mc_delta(points[static_cast<std::size_t>(i)], s, m);
  });
  return out;
}

PopulationLevel beta_alpha(const ReferenceDistribution& dist, double alpha,
                           const MeasureOptions& opts) {
  validate_alpha(alpha);
  if (opts.method != MeasureMethod::monte_carlo) {
    if (const auto b = dist.beta_alpha_closed_form(alpha)) {
      return PopulationLevel{*b, alpha, "analytic", 0, 0};
    }
    if (opts.method == MeasureMethod::analytic) {
      throw std::invalid_argument("beta_alpha: no analytic form for this distribution");
    }
  }
  if (opts.samples < 100) {
    throw std::invalid_argument("beta_alpha: monte-carlo mode needs at least 100 samples");
  }
  const std::size_t M = opts.samples;
  Dataset draws(dist.dim());
  {
    RandomStream rs(derive_seed(opts.seed, {kQuantileTag}));
    std::vector<double> buf(dist.dim());
    for (std::size_t j = 0; j < M; ++j) {
      dist.sample_into(rs, std::span<double>(buf));
      draws.add(std::span<const double>(buf));
    }
  }
  MeasureOptions inner = opts;
  inner.method = MeasureMethod::automatic;
  inner.seed = derive_seed(opts.seed, {kMeasureTag});
  std::vector<double> deltas = delta_p_many(draws, dist, 0.5, inner);
  // Lower quantile: the smallest order statistic with rank/M >= 1 - alpha.
  // Written as M - floor(alpha M) so rounding in (1 - alpha) * M cannot
  // shift the rank.
  auto rank = M - static_cast<std::size_t>(std::floor(alpha * static_cast<double>(M)));
  rank = std::clamp<std::size_t>(rank, 1, M);
  std::nth_element(deltas.begin(), deltas.begin() + static_cast<std::ptrdiff_t>(rank - 1),
                   deltas.end());
  return PopulationLevel{deltas[rank - 1], alpha, "monte-carlo", M, opts.seed};
}

bool q_population_membership(std::span<const double> x, const ReferenceDistribution& dist,
                             double beta, const MeasureOptions& opts) {
  check_dim(x, dist);
  return QMembership(dist, beta, opts)(x);
}

bool q_population_membership(const Point& x, const ReferenceDistribution& dist, double beta,
                             const MeasureOptions& opts) {
  return q_population_membership(std::span<const double>(x), dist, beta, opts);
}

GridMask q_population_on_grid(const ReferenceDistribution& dist, const GridSpec& grid,
                              double beta, const MeasureOptions& opts) {
  if (grid.dim() != dist.dim()) {
    throw std::invalid_argument("population: grid dimension does not match distribution");
  }
  const QMembership member(dist, beta, opts);
  return evaluate_on_grid(grid, [&](std::span<const double> x) { return member(x); });
}

Estimate sym_diff_probability(const ReferenceDistribution& dist, std::size_t n, double alpha,
                              std::size_t trials, std::uint64_t seed,
                              const PopulationLevel& level, const MeasureOptions& opts) {
  validate_alpha(alpha);
  if (n == 0) throw std::invalid_argument("sym_diff_probability: n must be >= 1");
  if (trials < 100) throw std::invalid_argument("sym_diff_probability: trials must be >= 100");
  const std::size_t d = dist.dim();
  const ConformalConfig cfg{alpha};
  const QMembership member(dist, level.beta_alpha, opts);
  std::vector<std::uint8_t> disagree(trials, 0);
  parallel_for(static_cast<std::int64_t>(trials), [&](std::int64_t t) {
    RandomStream rs(derive_seed(seed, {kTrialTag, static_cast<std::uint64_t>(t)}));
    Dataset data(d);
    std::vector<double> buf(d);
    for (std::size_t i = 0; i < n; ++i) {
      dist.sample_into(rs, std::span<double>(buf));
      data.add(std::span<const double>(buf));
    }
    dist.sample_into(rs, std::span<double>(buf));
    const std::span<const double> x(buf);
    const bool in_region = region_membership(data, x, cfg);
    const bool in_population = member(x);
    disagree[static_cast<std::size_t>(t)] = (in_region != in_population) ? 1 : 0;
  });
  std::size_t c = 0;
  for (auto v : disagree) c += v;
  const double p = static_cast<double>(c) / static_cast<double>(trials);
  const double se = std::sqrt(p * (1.0 - p) / static_cast<double>(trials));
  return Estimate{p, se, trials};
}

Estimate sym_diff_probability(const ReferenceDistribution& dist, std::size_t n, double alpha,
                              std::size_t trials, std::uint64_t seed) {
  const PopulationLevel level = beta_alpha(dist, alpha, MeasureOptions{});
  return sym_diff_probability(dist, n, alpha, trials, seed, level, MeasureOptions{});
}

double hausdorff_distance_grid(const GridMask& a, const GridMask& b, const GridSpec& grid) {
  if (a.spec != grid || b.spec != grid) {
    throw std::invalid_argument("hausdorff_distance_grid: masks must share the given grid");
  }
  const std::size_t total = grid.total_nodes();
  if (a.values.size() != total || b.values.size() != total) {
    throw std::invalid_argument("hausdorff_distance_grid: mask length does not match grid");
  }
  const std::size_t d = grid.dim();
  const auto collect = [&](const GridMask& mask) {
    std::vector<double> coords;
    std::vector<std::size_t> idx;
    for (std::size_t j = 0; j < total; ++j) {
      if (mask.values[j]) {
        const Point p = grid.node(j);
        coords.insert(coords.end(), p.begin(), p.end());
        idx.push_back(j);
      }
    }
    return std::pair(std::move(coords), std::move(idx));
  };
  const auto [ca, ia] = collect(a);
  const auto [cb, ib] = collect(b);
  if (ia.empty() || ib.empty()) {
    throw std::invalid_argument("hausdorff_distance_grid: empty mask has no Hausdorff distance");
  }
  const auto directed_sq = [&](const std::vector<double>& from, const std::vector<std::size_t>& fi,
                               const std::vector<double>& to, const GridMask& to_mask) {
    double worst = 0.0;
    for (std::size_t i = 0; i < fi.size(); ++i) {
      if (to_mask.values[fi[i]]) continue;  // shared node, distance 0
      const std::span<const double> p(from.data() + i * d, d);
      double best = std::numeric_limits<double>::infinity();
      for (std::size_t j = 0; j * d < to.size(); ++j) {
        best = std::min(best, squared_distance(p, {to.data() + j * d, d}));
      }
      worst = std::max(worst, best);
    }
    return worst;
  };
  const double h = std::max(directed_sq(ca, ia, cb, b), directed_sq(cb, ib, ca, a));
  return std::sqrt(h);
}

}  // namespace rconf
