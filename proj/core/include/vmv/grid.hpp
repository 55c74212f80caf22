#pragma once

#include <cstddef>
#include <optional>
#include <span>
#include <vector>

namespace vmv {

/// Time grid 0 = t_0 < t_1 < ... < t_M = T discretising the triangle
/// {0 <= s < t <= T}.
class TriGrid {
 public:
  /// Uniform grid with 2^level cells on [0, horizon].
  static TriGrid dyadic(int level, double horizon = 1.0);
  /// Explicit nodes; must start at 0 and increase strictly.
  static TriGrid from_nodes(std::vector<double> nodes);

  std::size_t cells() const { return nodes_.size() - 1; }
  double node(std::size_t i) const { return nodes_[i]; }
  double width(std::size_t k) const { return nodes_[k + 1] - nodes_[k]; }
  double horizon() const { return nodes_.back(); }
  std::span<const double> nodes() const { return nodes_; }
  std::optional<int> level() const { return level_; }

  bool operator==(const TriGrid& other) const { return nodes_ == other.nodes_; }

 private:
  TriGrid(std::vector<double> nodes, std::optional<int> level);
  std::vector<double> nodes_;
  std::optional<int> level_;
};

/// Packed storage of a strictly lower-triangular table v[i][j], j < i <= M.
class TriTable {
 public:
  TriTable() = default;
  explicit TriTable(std::size_t cells, double fill = 0.0)
      : cells_(cells), data_(cells * (cells + 1) / 2, fill) {}

  static std::size_t offset(std::size_t i) { return i * (i - 1) / 2; }

  std::size_t cells() const { return cells_; }
  double operator()(std::size_t i, std::size_t j) const { return data_[offset(i) + j]; }
  double& operator()(std::size_t i, std::size_t j) { return data_[offset(i) + j]; }
  /// Row i as a contiguous span over j = 0..i-1.
  std::span<const double> row(std::size_t i) const { return {data_.data() + offset(i), i}; }
  std::span<double> row(std::size_t i) { return {data_.data() + offset(i), i}; }
  std::span<const double> data() const { return data_; }
  std::span<double> data() { return data_; }

 private:
  std::size_t cells_ = 0;
  std::vector<double> data_;
};

}  // namespace vmv
