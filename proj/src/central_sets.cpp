#include "rconf/central_sets.hpp"

#include <algorithm>
#include <bit>
#include <cmath>
#include <stdexcept>

#include "rconf/conformal.hpp"

namespace rconf {

std::size_t cover_count(std::span<const double> y, const Dataset& data, double beta) {
  if (data.empty()) throw std::invalid_argument("cover_count: empty dataset");
  if (beta < 0.0) throw std::invalid_argument("cover_count: beta must be >= 0");
  return count_within(y, data, beta);
}

std::size_t cover_count(const Point& y, const Dataset& data, double beta) {
  return cover_count(std::span<const double>(y), data, beta);
}

bool q_hat_membership(std::span<const double> y, const Dataset& data, double beta) {
  return cover_count(y, data, beta) >= majority_rank(data.size()).k;
}

bool q_hat_membership(const Point& y, const Dataset& data, double beta) {
  return q_hat_membership(std::span<const double>(y), data, beta);
}

bool s_hat_membership(std::span<const double> y, const Dataset& data, double beta) {
  const std::size_t n = data.size();
  if (n == 0) throw std::invalid_argument("s_hat_membership: empty dataset");
  const std::size_t threshold = (n + 1) / 2;  // ceil(n/2)
  return cover_count(y, data, beta) >= threshold;
}

bool s_hat_membership(const Point& y, const Dataset& data, double beta) {
  return s_hat_membership(std::span<const double>(y), data, beta);
}

bool q_hat_brute_force(const Point& y, const Dataset& data, double beta) {
  const std::size_t n = data.size();
  if (n == 0) throw std::invalid_argument("q_hat_brute_force: empty dataset");
  if (n > 15) {
    throw std::invalid_argument(
        "q_hat_brute_force: dataset too large for subset enumeration; use q_hat_membership");
  }
  if (y.size() != data.dim()) throw std::invalid_argument("q_hat_brute_force: dimension mismatch");
  if (beta < 0.0) throw std::invalid_argument("q_hat_brute_force: beta must be >= 0");

  const std::size_t k = majority_rank(n).k;
  std::vector<bool> inside(n);
  for (std::size_t i = 0; i < n; ++i) {
    inside[i] = euclidean_distance(std::span<const double>(y), data[i]) <= beta;
  }
  // Enumerate subsets; accept if some I with |I| >= k has y in every ball.
  for (std::uint32_t mask = 1; mask < (1u << n); ++mask) {
    if (static_cast<std::size_t>(std::popcount(mask)) < k) continue;
    bool all = true;
    for (std::size_t i = 0; i < n && all; ++i) {
      if ((mask >> i) & 1u) all = inside[i];
    }
    if (all) return true;
  }
  return false;
}

ProxyRadii knn_local_radii(const Dataset& data, std::size_t k) {
  const std::size_t n = data.size();
  if (n < 2) throw std::invalid_argument("knn_local_radii: need at least two points");
  if (k < 1 || k >= n) throw std::invalid_argument("knn_local_radii: require 1 <= k <= n-1");

  ProxyRadii out;
  out.k = k;
  out.d_locals.resize(n);
  std::vector<double> sq(n - 1);
  for (std::size_t i = 0; i < n; ++i) {
    std::size_t w = 0;
    for (std::size_t j = 0; j < n; ++j) {
      if (j == i) continue;
      sq[w++] = squared_distance(data[i], data[j]);
    }
    std::nth_element(sq.begin(), sq.begin() + static_cast<std::ptrdiff_t>(k - 1), sq.end());
    out.d_locals[i] = std::sqrt(sq[k - 1]);
  }
  return out;
}

std::vector<CertifiedBall> certified_balls(const Dataset& data, double beta,
                                           const ProxyRadii& radii) {
  if (radii.d_locals.size() != data.size()) {
    throw std::invalid_argument("certified_balls: radii/dataset size mismatch");
  }
  std::vector<CertifiedBall> balls;
  for (std::size_t i = 0; i < data.size(); ++i) {
    // Strict beta > D_i; a zero-radius ball is not certified.
    if (beta > radii.d_locals[i]) {
      balls.push_back(CertifiedBall{i, beta - radii.d_locals[i]});
    }
  }
  return balls;
}

bool proxy_membership(std::span<const double> y, const Dataset& data,
                      const std::vector<CertifiedBall>& balls) {
  for (const CertifiedBall& b : balls) {
    if (euclidean_distance(y, data[b.index]) <= b.radius) return true;
  }
  return false;
}

bool proxy_membership(const Point& y, const Dataset& data, double beta, std::size_t k) {
  const auto radii = knn_local_radii(data, k);
  return proxy_membership(std::span<const double>(y), data, certified_balls(data, beta, radii));
}

double empirical_level(const Dataset& data, double alpha) {
  const std::size_t n = data.size();
  if (n == 0) throw std::invalid_argument("empirical_level: empty dataset");
  validate_alpha(alpha);
  std::vector<double> r(n);
  for (std::size_t i = 0; i < n; ++i) r[i] = half_mass_radius(data[i], data);
  std::size_t rank = static_cast<std::size_t>(
      std::ceil((1.0 - alpha) * static_cast<double>(n + 1)));
  rank = std::clamp<std::size_t>(rank, 1, n);
  std::nth_element(r.begin(), r.begin() + static_cast<std::ptrdiff_t>(rank - 1), r.end());
  return r[rank - 1];
}

GridMask q_hat_on_grid(const Dataset& data, const GridSpec& grid, double beta) {
  if (grid.dim() != data.dim()) throw std::invalid_argument("q_hat_on_grid: dimension mismatch");
  return evaluate_on_grid(grid, [&](std::span<const double> y) {
    return q_hat_membership(y, data, beta);
  });
}

GridMask s_hat_on_grid(const Dataset& data, const GridSpec& grid, double beta) {
  if (grid.dim() != data.dim()) throw std::invalid_argument("s_hat_on_grid: dimension mismatch");
  return evaluate_on_grid(grid, [&](std::span<const double> y) {
    return s_hat_membership(y, data, beta);
  });
}

GridMask proxy_on_grid(const Dataset& data, const GridSpec& grid, double beta, std::size_t k) {
  if (grid.dim() != data.dim()) throw std::invalid_argument("proxy_on_grid: dimension mismatch");
  const auto radii = knn_local_radii(data, k);
  const auto balls = certified_balls(data, beta, radii);
  return evaluate_on_grid(grid, [&](std::span<const double> y) {
    return proxy_membership(y, data, balls);
  });
}

}  // namespace rconf
