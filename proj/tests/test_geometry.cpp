#include <algorithm>
#include <cmath>
#include <stdexcept>
#include <vector>

#include "doctest.h"
#include "rconf/geometry.hpp"
#include "rconf/random.hpp"

using namespace rconf;

namespace {

Dataset make_1d(std::initializer_list<double> xs) {
  Dataset d(1);
  for (double x : xs) d.add(Point{x});
  return d;
}

Dataset random_dataset(RandomStream& rs, std::size_t n, std::size_t dim, double spread) {
  Dataset d(dim);
  Point p(dim);
  for (std::size_t i = 0; i < n; ++i) {
    for (auto& c : p) c = rs.uniform(-spread, spread);
    d.add(p);
  }
  return d;
}

}  // namespace

TEST_CASE("euclidean_distance basics") {
  CHECK(euclidean_distance(Point{0, 0}, Point{0, 0}) == 0.0);
  CHECK(euclidean_distance(Point{0, 0}, Point{3, 4}) == 5.0);
  CHECK(euclidean_distance(Point{1}, Point{-2}) == 3.0);
  CHECK(euclidean_distance(Point{3, 4}, Point{0, 0}) ==
        euclidean_distance(Point{0, 0}, Point{3, 4}));
  CHECK_THROWS_AS(euclidean_distance(Point{0}, Point{0, 0}), std::invalid_argument);
}

TEST_CASE("majority_rank formula and error") {
  CHECK(majority_rank(1).k == 1);
  CHECK(majority_rank(2).k == 2);
  CHECK(majority_rank(3).k == 2);
  CHECK(majority_rank(4).k == 3);
  CHECK(majority_rank(5).k == 3);
  CHECK(majority_rank(100).k == 51);
  CHECK(majority_rank(101).k == 51);
  CHECK_THROWS_AS(majority_rank(0), std::invalid_argument);
  // k is always a strict majority
  for (std::size_t n = 1; n <= 64; ++n) {
    auto mr = majority_rank(n);
    CHECK(2 * mr.k > n);
    CHECK(2 * (mr.k - 1) <= n);
  }
}

TEST_CASE("kth_nn_radius worked examples") {
  CHECK(kth_nn_radius(Point{0}, make_1d({0}), 1) == 0.0);
  CHECK(kth_nn_radius(Point{0}, make_1d({-1, 1, 3}), 2) == 1.0);

  Dataset d2(2);
  d2.add(Point{3, 4});
  d2.add(Point{0, 1});
  d2.add(Point{6, 8});
  CHECK(kth_nn_radius(Point{0, 0}, d2, 1) == 1.0);
  CHECK(kth_nn_radius(Point{0, 0}, d2, 2) == 5.0);
  CHECK(kth_nn_radius(Point{0, 0}, d2, 3) == 10.0);

  CHECK_THROWS_AS(kth_nn_radius(Point{0}, make_1d({1, 2}), 0), std::invalid_argument);
  CHECK_THROWS_AS(kth_nn_radius(Point{0}, make_1d({1, 2}), 3), std::invalid_argument);
  CHECK_THROWS_AS(kth_nn_radius(Point{0}, Dataset(1), 1), std::invalid_argument);
}

TEST_CASE("kth_nn_radius ties count with multiplicity") {
  auto d = make_1d({1, 1, 1, 2});
  CHECK(kth_nn_radius(Point{0}, d, 1) == 1.0);
  CHECK(kth_nn_radius(Point{0}, d, 3) == 1.0);
  CHECK(kth_nn_radius(Point{0}, d, 4) == 2.0);
}

TEST_CASE("half_mass_radius worked examples") {
  CHECK(half_mass_radius(Point{5}, make_1d({5})) == 0.0);
  CHECK(half_mass_radius(Point{0}, make_1d({0, 2})) == 2.0);
  CHECK(half_mass_radius(Point{0}, make_1d({-1, 0, 1})) == 1.0);
  CHECK_THROWS_AS(half_mass_radius(Point{0}, Dataset(1)), std::invalid_argument);
}

TEST_CASE("half_mass_radius equals majority-rank NN distance") {
  RandomStream rs(101);
  for (int it = 0; it < 200; ++it) {
    std::size_t n = 1 + rs.below(30);
    std::size_t dim = 1 + rs.below(3);
    auto d = random_dataset(rs, n, dim, 5.0);
    Point z(dim);
    for (auto& c : z) c = rs.uniform(-5.0, 5.0);
    CHECK(half_mass_radius(z, d) == kth_nn_radius(z, d, majority_rank(n).k));
  }
}

TEST_CASE("kth_nn_radius monotone in k") {
  RandomStream rs(102);
  for (int it = 0; it < 100; ++it) {
    std::size_t n = 2 + rs.below(20);
    auto d = random_dataset(rs, n, 2, 3.0);
    Point z{rs.uniform(-3.0, 3.0), rs.uniform(-3.0, 3.0)};
    double prev = 0.0;
    for (std::size_t k = 1; k <= n; ++k) {
      double r = kth_nn_radius(z, d, k);
      CHECK(r >= prev);
      prev = r;
    }
  }
}

TEST_CASE("empirical-measure consistency of the returned radius") {
  // At r = half_mass_radius(z): at least k points within r, fewer than k strictly inside.
  RandomStream rs(103);
  for (int it = 0; it < 200; ++it) {
    std::size_t n = 1 + rs.below(25);
    auto d = random_dataset(rs, n, 2, 4.0);
    Point z{rs.uniform(-4.0, 4.0), rs.uniform(-4.0, 4.0)};
    double r = half_mass_radius(z, d);
    std::size_t k = majority_rank(n).k;
    std::size_t at_most = 0, strictly = 0;
    for (std::size_t i = 0; i < n; ++i) {
      double dist = euclidean_distance(std::span<const double>(z), d[i]);
      if (dist <= r) ++at_most;
      if (dist < r) ++strictly;
    }
    CHECK(at_most >= k);
    CHECK(strictly <= k - 1);
  }
}

TEST_CASE("half-mass radius is 1-Lipschitz in the query point") {
  RandomStream rs(104);
  for (int it = 0; it < 200; ++it) {
    std::size_t n = 1 + rs.below(20);
    auto d = random_dataset(rs, n, 3, 2.0);
    Point a{rs.uniform(-2.0, 2.0), rs.uniform(-2.0, 2.0), rs.uniform(-2.0, 2.0)};
    Point b{rs.uniform(-2.0, 2.0), rs.uniform(-2.0, 2.0), rs.uniform(-2.0, 2.0)};
    double gap = std::abs(half_mass_radius(a, d) - half_mass_radius(b, d));
    // tiny slack for the final sqrt rounding
    CHECK(gap <= euclidean_distance(a, b) * (1.0 + 1e-12) + 1e-12);
  }
}

TEST_CASE("outlier invariance: moving minority points farther away changes nothing") {
  RandomStream rs(105);
  for (int it = 0; it < 50; ++it) {
    std::size_t n = 5 + 2 * rs.below(8);  // odd sizes
    auto d = random_dataset(rs, n, 2, 1.0);
    Point z{0.0, 0.0};
    double r = half_mass_radius(z, d);
    std::size_t k = majority_rank(n).k;

    // indices sorted by distance to z; the n-k farthest are the replaceable minority
    std::vector<std::size_t> idx(n);
    for (std::size_t i = 0; i < n; ++i) idx[i] = i;
    std::sort(idx.begin(), idx.end(), [&](std::size_t a, std::size_t b) {
      return squared_distance(z, d[a]) < squared_distance(z, d[b]);
    });
    Dataset moved = d;
    for (std::size_t j = k; j < n; ++j) {
      std::size_t i = idx[j];
      double push = 100.0 + static_cast<double>(j);
      moved.mutable_flat()[i * 2] = push;
      moved.mutable_flat()[i * 2 + 1] = push;
    }
    CHECK(half_mass_radius(z, moved) == r);
  }
}

TEST_CASE("rigid motions that are exact in floating point preserve radii") {
  RandomStream rs(106);
  for (int it = 0; it < 50; ++it) {
    std::size_t n = 1 + rs.below(15);
    auto d = random_dataset(rs, n, 2, 3.0);
    Point z{rs.uniform(-3.0, 3.0), rs.uniform(-3.0, 3.0)};
    double r = half_mass_radius(z, d);

    // coordinate swap
    Dataset swapped(2);
    for (std::size_t i = 0; i < n; ++i) swapped.add(Point{d[i][1], d[i][0]});
    CHECK(half_mass_radius(Point{z[1], z[0]}, swapped) == r);

    // sign flip of the first axis
    Dataset flipped(2);
    for (std::size_t i = 0; i < n; ++i) flipped.add(Point{-d[i][0], d[i][1]});
    CHECK(half_mass_radius(Point{-z[0], z[1]}, flipped) == r);
  }
}

TEST_CASE("squared_radius_threshold reproduces the closed-ball test exactly") {
  RandomStream rs(107);
  for (int it = 0; it < 2000; ++it) {
    double r = rs.uniform(0.0, 10.0);
    double t = squared_radius_threshold(r);
    CHECK(std::sqrt(t) <= r);
    double up = std::nextafter(t, std::numeric_limits<double>::infinity());
    CHECK(std::sqrt(up) > r);
  }
  CHECK(squared_radius_threshold(0.0) == 0.0);
}

TEST_CASE("count_within agrees with direct distance comparisons") {
  RandomStream rs(108);
  for (int it = 0; it < 200; ++it) {
    std::size_t n = 1 + rs.below(20);
    auto d = random_dataset(rs, n, 2, 2.0);
    Point y{rs.uniform(-2.0, 2.0), rs.uniform(-2.0, 2.0)};
    double r = rs.uniform(0.0, 3.0);
    std::size_t direct = 0;
    for (std::size_t i = 0; i < n; ++i) {
      if (euclidean_distance(std::span<const double>(y), d[i]) <= r) ++direct;
    }
    CHECK(count_within(y, d, r) == direct);
  }
}

TEST_CASE("Dataset validates dimensions and finiteness") {
  Dataset d(2);
  CHECK_THROWS_AS(d.add(Point{1.0}), std::invalid_argument);
  CHECK_THROWS_AS(d.add(Point{1.0, std::numeric_limits<double>::infinity()}),
                  std::invalid_argument);
  CHECK_THROWS_AS(d.add(Point{std::nan(""), 0.0}), std::invalid_argument);
  d.add(Point{1.0, 2.0});
  CHECK(d.size() == 1);
  CHECK(d.point(0) == Point{1.0, 2.0});
}
