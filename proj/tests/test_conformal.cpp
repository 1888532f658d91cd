#include <stdexcept>
#include <vector>

#include "doctest.h"
#include "rconf/conformal.hpp"
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

TEST_CASE("nonconformity_score worked examples") {
  CHECK(nonconformity_score(make_1d({4}), Point{1}) == 3.0);
  CHECK(nonconformity_score(make_1d({0, 2}), Point{0}) == 2.0);
  CHECK(nonconformity_score(make_1d({-1, 1, 3}), Point{0}) == 1.0);
  CHECK_THROWS_AS(nonconformity_score(Dataset(1), Point{0}), std::invalid_argument);
}

TEST_CASE("brute_force_score worked examples and guard") {
  CHECK(brute_force_score(make_1d({0, 2}), Point{0}) == 2.0);
  CHECK(brute_force_score(make_1d({-1, 1, 3}), Point{0}) == 1.0);
  CHECK(brute_force_score(make_1d({7}), Point{7}) == 0.0);
  Dataset big(1);
  for (int i = 0; i < 21; ++i) big.add(Point{static_cast<double>(i)});
  CHECK_THROWS_AS(brute_force_score(big, Point{0}), std::invalid_argument);
}

TEST_CASE("selection score equals subset-enumeration score on random instances") {
  RandomStream rs(201);
  for (int it = 0; it < 300; ++it) {
    std::size_t n = 1 + rs.below(12);
    std::size_t dim = 1 + rs.below(3);
    auto bag = random_dataset(rs, n, dim, 4.0);
    Point z(dim);
    for (auto& c : z) c = rs.uniform(-4.0, 4.0);
    CHECK(nonconformity_score(bag, z) == brute_force_score(bag, z));
  }
}

TEST_CASE("leave_one_out_scores worked examples") {
  auto s0 = leave_one_out_scores(make_1d({0}), Point{0});
  CHECK(s0.scores == std::vector<double>{0.0, 0.0});

  auto s1 = leave_one_out_scores(make_1d({0, 10}), Point{5});
  CHECK(s1.scores == std::vector<double>{10.0, 10.0, 5.0});
  CHECK(s1.candidate_score() == 5.0);

  auto s2 = leave_one_out_scores(make_1d({0, 10}), Point{20});
  CHECK(s2.scores == std::vector<double>{20.0, 10.0, 20.0});

  CHECK_THROWS_AS(leave_one_out_scores(make_1d({0}), Point{0, 0}), std::invalid_argument);
}

TEST_CASE("every leave-one-out bag has size n") {
  // Cross-check each R_i against an explicitly rebuilt bag.
  RandomStream rs(202);
  for (int it = 0; it < 40; ++it) {
    std::size_t n = 1 + rs.below(10);
    auto d = random_dataset(rs, n, 2, 3.0);
    Point z{rs.uniform(-3.0, 3.0), rs.uniform(-3.0, 3.0)};
    auto sv = leave_one_out_scores(d, z);
    REQUIRE(sv.size() == n + 1);
    for (std::size_t i = 0; i < n; ++i) {
      Dataset bag(2);
      for (std::size_t j = 0; j < n; ++j) {
        if (j != i) bag.add(d.point(j));
      }
      bag.add(z);
      CHECK(sv.scores[i] == nonconformity_score(bag, d.point(i)));
    }
    CHECK(sv.scores[n] == nonconformity_score(d, z));
  }
}

TEST_CASE("conformal_p_value worked examples") {
  auto p0 = conformal_p_value(make_1d({0}), Point{0});
  CHECK(p0.count == 2);
  CHECK(p0.total == 2);
  CHECK(p0.value() == 1.0);

  auto p1 = conformal_p_value(make_1d({0, 10}), Point{5});
  CHECK(p1.count == 3);
  CHECK(p1.total == 3);

  auto p2 = conformal_p_value(make_1d({0, 10}), Point{20});
  CHECK(p2.count == 2);
  CHECK(p2.total == 3);
  CHECK(p2.value() == doctest::Approx(2.0 / 3.0));
}

TEST_CASE("p-value granularity and lower bound") {
  RandomStream rs(203);
  for (int it = 0; it < 200; ++it) {
    std::size_t n = 1 + rs.below(15);
    auto d = random_dataset(rs, n, 2, 3.0);
    Point z{rs.uniform(-6.0, 6.0), rs.uniform(-6.0, 6.0)};
    auto p = conformal_p_value(d, z);
    CHECK(p.total == n + 1);
    CHECK(p.count >= 1);  // the candidate counts itself
    CHECK(p.count <= n + 1);
  }
}

TEST_CASE("p-values are invariant under permutations of the data") {
  RandomStream rs(204);
  for (int it = 0; it < 50; ++it) {
    std::size_t n = 2 + rs.below(10);
    auto d = random_dataset(rs, n, 2, 3.0);
    Point z{rs.uniform(-3.0, 3.0), rs.uniform(-3.0, 3.0)};
    auto base = conformal_p_value(d, z);
    auto perm = rs.permutation(n);
    Dataset shuffled(2);
    for (std::size_t i : perm) shuffled.add(d.point(i));
    auto p = conformal_p_value(shuffled, z);
    CHECK(p.count == base.count);
    CHECK(p.total == base.total);
  }
}

TEST_CASE("validate_alpha rejects out-of-range levels") {
  CHECK_THROWS_AS(validate_alpha(0.0), std::invalid_argument);
  CHECK_THROWS_AS(validate_alpha(1.0), std::invalid_argument);
  CHECK_THROWS_AS(validate_alpha(-0.1), std::invalid_argument);
  CHECK_THROWS_AS(validate_alpha(1.5), std::invalid_argument);
  CHECK_NOTHROW(validate_alpha(0.5));
}

TEST_CASE("region_membership worked examples") {
  auto d = make_1d({0, 10});
  CHECK(region_membership(d, Point{20}, {.alpha = 0.5}));
  CHECK_FALSE(region_membership(d, Point{20}, {.alpha = 0.7}));
  CHECK(region_membership(make_1d({0}), Point{0}, {.alpha = 0.99}));
}

TEST_CASE("regions are nested in alpha") {
  RandomStream rs(205);
  for (int it = 0; it < 100; ++it) {
    std::size_t n = 1 + rs.below(12);
    auto d = random_dataset(rs, n, 2, 3.0);
    Point z{rs.uniform(-5.0, 5.0), rs.uniform(-5.0, 5.0)};
    double lo = rs.uniform(0.01, 0.5);
    double hi = rs.uniform(lo, 0.99);
    // membership at the larger alpha implies membership at the smaller
    if (region_membership(d, z, {.alpha = hi})) {
      CHECK(region_membership(d, z, {.alpha = lo}));
    }
  }
}

TEST_CASE("region_on_grid matches pointwise membership") {
  auto d = make_1d({0, 10});
  GridSpec grid({5.0}, {20.0}, {2});
  auto mask = region_on_grid(d, grid, {.alpha = 0.5});
  REQUIRE(mask.values.size() == 2);
  CHECK(mask.values[0] == 1);  // p = 1
  CHECK(mask.values[1] == 1);  // p = 2/3
  CHECK(mask.count_true() == 2);

  GridSpec grid2({-1.0}, {1.0}, {3});
  auto mask2 = region_on_grid(make_1d({0}), grid2, {.alpha = 0.5});
  for (std::size_t j = 0; j < mask2.values.size(); ++j) {
    CHECK(static_cast<bool>(mask2.values[j]) ==
          region_membership(make_1d({0}), grid2.node(j), {.alpha = 0.5}));
  }
}

TEST_CASE("grid construction rejects degenerate axes") {
  CHECK_THROWS_AS(GridSpec({0.0}, {1.0}, {1}), std::invalid_argument);
  CHECK_THROWS_AS(GridSpec({0.0}, {1.0}, {2, 2}), std::invalid_argument);
  CHECK_THROWS_AS(GridSpec({1.0}, {0.0}, {2}), std::invalid_argument);
}
