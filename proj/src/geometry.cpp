#include "rconf/geometry.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>

namespace rconf {

Dataset::Dataset(std::size_t dim, std::vector<double> flat) : dim_(dim), flat_(std::move(flat)) {
  if (dim_ == 0) throw std::invalid_argument("Dataset: dimension must be >= 1");
  if (flat_.size() % dim_ != 0) {
    throw std::invalid_argument("Dataset: flat size is not a multiple of the dimension");
  }
  for (double v : flat_) {
    if (!std::isfinite(v)) throw std::invalid_argument("Dataset: non-finite coordinate");
  }
  n_ = flat_.size() / dim_;
}

void Dataset::add(const Point& p) { add(std::span<const double>(p)); }

void Dataset::add(std::span<const double> p) {
  if (dim_ == 0) {
    if (p.empty()) throw std::invalid_argument("Dataset: points must have dimension >= 1");
    dim_ = p.size();
  }
  if (p.size() != dim_) throw std::invalid_argument("Dataset: point dimension mismatch");
  for (double v : p) {
    if (!std::isfinite(v)) throw std::invalid_argument("Dataset: non-finite coordinate");
  }
  flat_.insert(flat_.end(), p.begin(), p.end());
  ++n_;
}

Point Dataset::point(std::size_t i) const {
  auto row = (*this)[i];
  return Point(row.begin(), row.end());
}

MajorityRank majority_rank(std::size_t n) {
  if (n == 0) throw std::invalid_argument("majority_rank: empty bag has no majority");
  return MajorityRank{n, n / 2 + 1};
}

double squared_distance(std::span<const double> a, std::span<const double> b) {
  double s = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) {
    const double d = a[i] - b[i];
    s += d * d;
  }
  return s;
}

double euclidean_distance(std::span<const double> a, std::span<const double> b) {
  if (a.size() != b.size()) {
    throw std::invalid_argument("euclidean_distance: dimension mismatch");
  }
  return std::sqrt(squared_distance(a, b));
}

double euclidean_distance(const Point& a, const Point& b) {
  return euclidean_distance(std::span<const double>(a), std::span<const double>(b));
}

double kth_nn_radius(std::span<const double> z, const Dataset& data, std::size_t k) {
  const std::size_t n = data.size();
  if (n == 0) throw std::invalid_argument("kth_nn_radius: empty dataset");
  if (k < 1 || k > n) throw std::invalid_argument("kth_nn_radius: k out of range");
  if (z.size() != data.dim()) throw std::invalid_argument("kth_nn_radius: dimension mismatch");

  // Ranks are preserved under squaring, so select in squared space and take
  // one square root at the end. sqrt is monotone and correctly rounded,
  // hence the result is bit-identical to selecting among sqrt'ed distances.
  std::vector<double> sq(n);
  for (std::size_t i = 0; i < n; ++i) sq[i] = squared_distance(z, data[i]);
  std::nth_element(sq.begin(), sq.begin() + static_cast<std::ptrdiff_t>(k - 1), sq.end());
  return std::sqrt(sq[k - 1]);
}

double kth_nn_radius(const Point& z, const Dataset& data, std::size_t k) {
  return kth_nn_radius(std::span<const double>(z), data, k);
}

double half_mass_radius(std::span<const double> z, const Dataset& data) {
  return kth_nn_radius(z, data, majority_rank(data.size()).k);
}

double half_mass_radius(const Point& z, const Dataset& data) {
  return half_mass_radius(std::span<const double>(z), data);
}

double squared_radius_threshold(double r) {
  if (r < 0.0) return -1.0;  // empty closed ball
  double t = r * r;
  while (std::sqrt(t) > r) t = std::nextafter(t, 0.0);
  for (;;) {
    const double u = std::nextafter(t, std::numeric_limits<double>::infinity());
    if (std::sqrt(u) <= r) {
      t = u;
    } else {
      break;
    }
  }
  return t;
}

std::size_t count_within(std::span<const double> y, const Dataset& data, double r) {
  if (y.size() != data.dim()) throw std::invalid_argument("count_within: dimension mismatch");
  const double t = squared_radius_threshold(r);
  std::size_t c = 0;
  const std::size_t n = data.size();
  for (std::size_t i = 0; i < n; ++i) {
    if (squared_distance(y, data[i]) <= t) ++c;
  }
  return c;
}

}  // namespace rconf
