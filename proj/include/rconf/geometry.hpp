#pragma once
// Points, datasets, Euclidean distances, and the half-mass radius: the
// distance from a point to its (floor(n/2)+1)-nearest sample neighbour,
// i.e. the smallest radius whose closed ball captures a strict majority
// of the sample.

#include <cstddef>
#include <span>
#include <vector>

namespace rconf {

using Point = std::vector<double>;

/// Ordered multiset of d-dimensional points carrying the empirical measure
/// (each point has mass 1/n; duplicates count with multiplicity).
class Dataset {
 public:
  Dataset() = default;
  explicit Dataset(std::size_t dim) : dim_(dim) {}
  Dataset(std::size_t dim, std::vector<double> flat);

  /// Appends a point; all points must share the dataset dimension and
  /// every coordinate must be finite.
  void add(const Point& p);
  void add(std::span<const double> p);

  std::size_t size() const { return n_; }
  std::size_t dim() const { return dim_; }
  bool empty() const { return n_ == 0; }

  std::span<const double> operator[](std::size_t i) const {
    return {flat_.data() + i * dim_, dim_};
  }
  Point point(std::size_t i) const;

  const std::vector<double>& flat() const { return flat_; }
  std::vector<double>& mutable_flat() { return flat_; }

 private:
  std::size_t dim_ = 0;
  std::size_t n_ = 0;
  std::vector<double> flat_;
};

/// The majority rank k = floor(n/2) + 1, the smallest integer > n/2.
struct MajorityRank {
  std::size_t n = 0;
  std::size_t k = 0;
};

/// k = floor(n/2) + 1. Errors on n = 0 (an empty bag has no majority).
MajorityRank majority_rank(std::size_t n);

double squared_distance(std::span<const double> a, std::span<const double> b);

/// Euclidean norm of a - b; errors on dimension mismatch.
double euclidean_distance(const Point& a, const Point& b);
double euclidean_distance(std::span<const double> a, std::span<const double> b);

/// k-th smallest of {||z - x_i||}, counting multiplicities. 1 <= k <= n.
double kth_nn_radius(const Point& z, const Dataset& data, std::size_t k);
double kth_nn_radius(std::span<const double> z, const Dataset& data, std::size_t k);

/// Empirical half-mass radius: inf{r > 0 : P_n(B(z,r)) > 1/2}, which equals
/// the majority-rank nearest-neighbour distance.
double half_mass_radius(const Point& z, const Dataset& data);
double half_mass_radius(std::span<const double> z, const Dataset& data);

/// Largest double t with sqrt(t) <= r, so that comparing squared distances
/// against t reproduces the closed-ball test dist <= r exactly.
double squared_radius_threshold(double r);

/// #{i : ||y - x_i|| <= r} with closed balls; exact, computed in squared
/// space via squared_radius_threshold.
std::size_t count_within(std::span<const double> y, const Dataset& data, double r);

}  // namespace rconf
