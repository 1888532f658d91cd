#include "rconf/grid.hpp"

#include <cmath>
#include <functional>
#include <stdexcept>

#include "rconf/parallel.hpp"

namespace rconf {

GridSpec::GridSpec(std::vector<double> lo_, std::vector<double> hi_,
                   std::vector<std::size_t> counts_)
    : lo(std::move(lo_)), hi(std::move(hi_)), counts(std::move(counts_)) {
  if (lo.empty() || lo.size() != hi.size() || lo.size() != counts.size()) {
    throw std::invalid_argument("GridSpec: lo/hi/counts must share a dimension >= 1");
  }
  for (std::size_t a = 0; a < lo.size(); ++a) {
    if (!std::isfinite(lo[a]) || !std::isfinite(hi[a]) || !(lo[a] < hi[a])) {
      throw std::invalid_argument("GridSpec: each axis needs finite lo < hi");
    }
    if (counts[a] < 2) throw std::invalid_argument("GridSpec: node counts must be >= 2 per axis");
  }
}

std::size_t GridSpec::total_nodes() const {
  std::size_t t = 1;
  for (std::size_t c : counts) t *= c;
  return t;
}

std::vector<double> GridSpec::spacing() const {
  std::vector<double> s(dim());
  for (std::size_t a = 0; a < dim(); ++a) {
    s[a] = (hi[a] - lo[a]) / static_cast<double>(counts[a] - 1);
  }
  return s;
}

Point GridSpec::node(std::size_t j) const {
  Point p(dim());
  // Last axis fastest.
  for (std::size_t a = dim(); a-- > 0;) {
    const std::size_t idx = j % counts[a];
    j /= counts[a];
    p[a] = lo[a] + (hi[a] - lo[a]) * (static_cast<double>(idx) / static_cast<double>(counts[a] - 1));
  }
  return p;
}

std::size_t GridMask::count_true() const {
  std::size_t c = 0;
  for (std::uint8_t v : values) c += v;
  return c;
}

double GridMask::volume_fraction() const {
  if (values.empty()) return 0.0;
  return static_cast<double>(count_true()) / static_cast<double>(values.size());
}

GridMask evaluate_on_grid(const GridSpec& grid,
                          const std::function<bool(std::span<const double>)>& member) {
  const std::size_t total = grid.total_nodes();
  if (total == 0) throw std::invalid_argument("evaluate_on_grid: grid has no nodes");
  GridMask mask{grid, std::vector<std::uint8_t>(total, 0)};
  parallel_for(static_cast<std::int64_t>(total), [&](std::int64_t j) {
    const Point p = grid.node(static_cast<std::size_t>(j));
    mask.values[static_cast<std::size_t>(j)] = member(p) ? 1 : 0;
  });
  return mask;
}

}  // namespace rconf
