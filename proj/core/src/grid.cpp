#include "vmv/grid.hpp"

#include <cmath>
#include <stdexcept>

namespace vmv {

TriGrid::TriGrid(std::vector<double> nodes, std::optional<int> level)
    : nodes_(std::move(nodes)), level_(level) {}

TriGrid TriGrid::dyadic(int level, double horizon) {
  if (level < 0 || level > 24) throw std::invalid_argument("TriGrid: level must lie in [0, 24]");
  if (!(horizon > 0.0) || !std::isfinite(horizon))
    throw std::invalid_argument("TriGrid: horizon must be positive");
  const std::size_t m = std::size_t{1} << level;
  std::vector<double> nodes(m + 1);
  for (std::size_t i = 0; i <= m; ++i) nodes[i] = horizon * std::ldexp(static_cast<double>(i), -level);
  return TriGrid(std::move(nodes), level);
}

TriGrid TriGrid::from_nodes(std::vector<double> nodes) {
  if (nodes.size() < 2) throw std::invalid_argument("TriGrid: need at least one cell");
  if (nodes.front() != 0.0) throw std::invalid_argument("TriGrid: first node must be 0");
  for (std::size_t i = 1; i < nodes.size(); ++i) {
    if (!(nodes[i] > nodes[i - 1]) || !std::isfinite(nodes[i]))
      throw std::invalid_argument("TriGrid: nodes must increase strictly");
  }
  return TriGrid(std::move(nodes), std::nullopt);
}

}  // namespace vmv
