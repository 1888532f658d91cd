#pragma once
// Empirical central sets at level beta: the half-mass sublevel set Q̂_beta
// (points covered by at least floor(n/2)+1 of the balls B(x_i, beta)), its
// dual S_beta (threshold ceil(n/2)), and a conservative inner proxy built
// from local k-NN radii around the sample points.

#include <cstddef>
#include <vector>

#include "rconf/geometry.hpp"
#include "rconf/grid.hpp"

namespace rconf {

/// Local radii D_i: the k-th order statistic of {||x_i - x_j|| : j != i}.
struct ProxyRadii {
  std::vector<double> d_locals;
  std::size_t k = 0;
};

/// A ball certified to lie inside Q̂_beta: center x_i, radius beta - D_i.
struct CertifiedBall {
  std::size_t index = 0;  // sample index of the center
  double radius = 0.0;    // beta - D_i > 0
};

/// t(y) = #{i : ||y - x_i|| <= beta}, with closed balls.
std::size_t cover_count(const Point& y, const Dataset& data, double beta);
std::size_t cover_count(std::span<const double> y, const Dataset& data, double beta);

/// y in Q̂_beta  <=>  cover_count >= floor(n/2)+1  <=>  half_mass_radius(y) <= beta.
bool q_hat_membership(const Point& y, const Dataset& data, double beta);
bool q_hat_membership(std::span<const double> y, const Dataset& data, double beta);

/// y in S_beta  <=>  cover_count >= ceil(n/2). Equals Q̂_beta for odd n.
bool s_hat_membership(const Point& y, const Dataset& data, double beta);
bool s_hat_membership(std::span<const double> y, const Dataset& data, double beta);

/// Oracle: exists a subset I with |I| >= floor(n/2)+1 and y in every
/// B(x_i, beta), i in I, by literal enumeration. n <= 15.
bool q_hat_brute_force(const Point& y, const Dataset& data, double beta);

/// D_i for every sample point; requires 1 <= k <= n-1. Duplicates of x_i's
/// location at other indices count (D_i may be 0).
ProxyRadii knn_local_radii(const Dataset& data, std::size_t k);

/// Balls B(x_i, beta - D_i) for indices with beta > D_i (strict); each is
/// contained in the cover-count set at threshold k+1.
std::vector<CertifiedBall> certified_balls(const Dataset& data, double beta,
                                           const ProxyRadii& radii);

/// y is in the conservative proxy iff some certified ball contains it.
bool proxy_membership(const Point& y, const Dataset& data, double beta, std::size_t k);
bool proxy_membership(std::span<const double> y, const Dataset& data,
                      const std::vector<CertifiedBall>& balls);

/// Heuristic empirical level for Q̂ matched to the conformal region at
/// miscoverage alpha: the ceil((1-alpha)(n+1))-th order statistic (clamped
/// to n) of the in-sample half-mass radii {r_k(X_i)}. A diagnostic, not a
/// calibrated identity.
double empirical_level(const Dataset& data, double alpha);

GridMask q_hat_on_grid(const Dataset& data, const GridSpec& grid, double beta);
GridMask s_hat_on_grid(const Dataset& data, const GridSpec& grid, double beta);
GridMask proxy_on_grid(const Dataset& data, const GridSpec& grid, double beta, std::size_t k);

}  // namespace rconf
