#include "rconf/conformal.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>

namespace rconf {

void validate_alpha(double alpha) {
  if (!(alpha > 0.0) || !(alpha < 1.0)) {
    throw std::invalid_argument("alpha must lie in (0,1)");
  }
}

double nonconformity_score(const Dataset& bag, const Point& z) {
  if (bag.empty()) throw std::invalid_argument("nonconformity_score: empty bag");
  return kth_nn_radius(z, bag, majority_rank(bag.size()).k);
}

double brute_force_score(const Dataset& bag, const Point& z) {
  const std::size_t n = bag.size();
  if (n == 0) throw std::invalid_argument("brute_force_score: empty bag");
  if (n > 20) {
    throw std::invalid_argument(
        "brute_force_score: bag too large for subset enumeration; use nonconformity_score");
  }
  if (z.size() != bag.dim()) throw std::invalid_argument("brute_force_score: dimension mismatch");

  const std::size_t k = majority_rank(n).k;
  std::vector<double> dist(n);
  for (std::size_t i = 0; i < n; ++i) {
    dist[i] = euclidean_distance(std::span<const double>(z), bag[i]);
  }

  // The min over |I| > n/2 is attained on subsets of size exactly k.
  std::vector<std::size_t> idx(k);
  for (std::size_t i = 0; i < k; ++i) idx[i] = i;
  double best = std::numeric_limits<double>::infinity();
  for (;;) {
    double mx = 0.0;
    for (std::size_t i : idx) mx = std::max(mx, dist[i]);
    best = std::min(best, mx);
    // Next k-combination of {0..n-1} in lexicographic order.
    std::size_t j = k;
    while (j-- > 0) {
      if (idx[j] != j + n - k) {
        ++idx[j];
        for (std::size_t l = j + 1; l < k; ++l) idx[l] = idx[l - 1] + 1;
        break;
      }
      if (j == 0) return best;
    }
  }
}

ScoreVector leave_one_out_scores(const Dataset& data, std::span<const double> z) {
  const std::size_t n = data.size();
  if (n == 0) throw std::invalid_argument("leave_one_out_scores: empty dataset");
  const std::size_t d = data.dim();
  if (z.size() != d) throw std::invalid_argument("leave_one_out_scores: dimension mismatch");

  // Augmented points X_1..X_n, z. Every bag B_i leaves point i out, so
  // R_i is the k-th order statistic of row i of the pairwise distances,
  // diagonal excluded. Each bag has size n and shares k = floor(n/2)+1.
  std::vector<double> aug(data.flat());
  aug.insert(aug.end(), z.begin(), z.end());
  const std::size_t m = n + 1;
  const std::size_t k = majority_rank(n).k;

  auto row_of = [&](std::size_t i) {
    return std::span<const double>(aug.data() + i * d, d);
  };

  ScoreVector out;
  out.scores.resize(m);
  std::vector<double> sq(n);
  for (std::size_t i = 0; i < m; ++i) {
    const auto pi = row_of(i);
    std::size_t w = 0;
    for (std::size_t j = 0; j < m; ++j) {
      if (j == i) continue;
      sq[w++] = squared_distance(pi, row_of(j));
    }
    std::nth_element(sq.begin(), sq.begin() + static_cast<std::ptrdiff_t>(k - 1), sq.end());
    out.scores[i] = std::sqrt(sq[k - 1]);
  }
  return out;
}

ScoreVector leave_one_out_scores(const Dataset& data, const Point& z) {
  return leave_one_out_scores(data, std::span<const double>(z));
}

PValue conformal_p_value(const Dataset& data, std::span<const double> z) {
  const ScoreVector r = leave_one_out_scores(data, z);
  const double rz = r.candidate_score();
  std::size_t count = 0;
  for (double ri : r.scores) {
    if (ri >= rz) ++count;  // non-strict; i = n+1 counts itself
  }
  return PValue{count, r.size()};
}

PValue conformal_p_value(const Dataset& data, const Point& z) {
  return conformal_p_value(data, std::span<const double>(z));
}

bool region_membership(const Dataset& data, std::span<const double> z,
                       const ConformalConfig& cfg) {
  validate_alpha(cfg.alpha);
  const PValue p = conformal_p_value(data, z);
  // p_z > alpha  <=>  count > alpha (n+1); the rank form avoids rounding
  // the fraction before the comparison.
  return static_cast<double>(p.count) > cfg.alpha * static_cast<double>(p.total);
}

bool region_membership(const Dataset& data, const Point& z, const ConformalConfig& cfg) {
  return region_membership(data, std::span<const double>(z), cfg);
}

GridMask region_on_grid(const Dataset& data, const GridSpec& grid, const ConformalConfig& cfg) {
  if (grid.dim() != data.dim()) {
    throw std::invalid_argument("region_on_grid: grid dimension must match data dimension");
  }
  validate_alpha(cfg.alpha);
  return evaluate_on_grid(grid, [&](std::span<const double> y) {
    return region_membership(data, y, cfg);
  });
}

}  // namespace rconf
