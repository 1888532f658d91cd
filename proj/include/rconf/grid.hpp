#pragma once
// Rectangular evaluation grids and boolean membership masks over them.

#include <cstddef>
#include <cstdint>
#include <functional>
#include <vector>

#include "rconf/geometry.hpp"

namespace rconf {

/// Axis-aligned box with per-axis node counts (>= 2 per axis). Nodes are
/// evenly spaced and include both box ends; linear indexing is row-major
/// with the last axis fastest.
struct GridSpec {
  std::vector<double> lo;
  std::vector<double> hi;
  std::vector<std::size_t> counts;

  GridSpec() = default;
  GridSpec(std::vector<double> lo_, std::vector<double> hi_, std::vector<std::size_t> counts_);

  std::size_t dim() const { return lo.size(); }
  std::size_t total_nodes() const;
  /// Node spacing along each axis: (hi - lo) / (counts - 1).
  std::vector<double> spacing() const;
  /// Coordinates of the node with linear index j.
  Point node(std::size_t j) const;

  bool operator==(const GridSpec&) const = default;
};

/// Boolean membership of every grid node in some set.
struct GridMask {
  GridSpec spec;
  std::vector<std::uint8_t> values;  // one per node, 0 or 1

  std::size_t count_true() const;
  /// Fraction of true nodes (a grid estimate of relative volume).
  double volume_fraction() const;
};

/// Evaluates a pointwise predicate on every node. Parallel across nodes;
/// the mask is identical for any thread count.
GridMask evaluate_on_grid(const GridSpec& grid,
                          const std::function<bool(std::span<const double>)>& member);

}  // namespace rconf
