#pragma once
// Reference distributions the population-side machinery can sample from.
// Each kind optionally exposes an analytic closed-ball mass P(B(x,r)) and,
// for the simplest kinds, closed forms for the half-mass functional and
// the population level beta_alpha; everything else falls back to seeded
// Monte Carlo in population.hpp.

#include <cstdint>
#include <memory>
#include <optional>
#include <span>
#include <string_view>
#include <vector>

#include "rconf/geometry.hpp"
#include "rconf/random.hpp"

namespace rconf {

class ReferenceDistribution {
 public:
  virtual ~ReferenceDistribution() = default;

  virtual std::size_t dim() const = 0;
  virtual std::string_view kind() const = 0;

  /// Draws one point into out (size dim()).
  virtual void sample_into(RandomStream& rs, std::span<double> out) const = 0;

  /// P(B(x,r)) for the closed ball, when an analytic expression exists.
  virtual std::optional<double> ball_mass(std::span<const double> x, double r) const {
    (void)x;
    (void)r;
    return std::nullopt;
  }

  /// Closed form for delta_{P,m}(x) where one exists.
  virtual std::optional<double> delta_closed_form(std::span<const double> x, double m) const {
    (void)x;
    (void)m;
    return std::nullopt;
  }

  /// Closed form for beta_alpha where one exists.
  virtual std::optional<double> beta_alpha_closed_form(double alpha) const {
    (void)alpha;
    return std::nullopt;
  }

  /// A rough per-axis scale (used to pick Monte Carlo search boxes).
  virtual double typical_scale() const = 0;
  /// A representative center (used with typical_scale for bounding boxes).
  virtual Point center_hint() const = 0;
};

using DistributionPtr = std::shared_ptr<const ReferenceDistribution>;

DistributionPtr make_point_mass(Point center);
DistributionPtr make_uniform_interval(double a, double b);
DistributionPtr make_uniform_ball(Point center, double radius);
/// Gaussian with full covariance; cov must be symmetric positive definite.
DistributionPtr make_gaussian(Point mean, const std::vector<std::vector<double>>& cov);
/// Isotropic convenience: covariance sd^2 * I.
DistributionPtr make_gaussian(Point mean, double sd);
DistributionPtr make_gaussian_mixture(std::vector<double> weights,
                                      std::vector<DistributionPtr> components);
/// Standard multivariate Student-t with df degrees of freedom.
DistributionPtr make_student_t(double df, std::size_t dim);
/// Huber-style mixture (1-fraction) base + fraction outliers; fraction < 1/2
/// keeps the half-mass functional anchored to the base mass.
DistributionPtr make_contaminated(DistributionPtr base, double fraction, DistributionPtr outlier);

/// n i.i.d. draws; deterministic given (dist, n, seed).
Dataset sample(const ReferenceDistribution& dist, std::size_t n, std::uint64_t seed);

}  // namespace rconf
