#pragma once

#include <cstddef>
#include <span>
#include <vector>

namespace vmv {

/// Minimum-cost perfect matching on an n x n row-major cost matrix
/// (Hungarian method with potentials, O(n^3)). Returns col[row].
std::vector<std::size_t> min_cost_assignment(std::span<const double> cost, std::size_t n);

}  // namespace vmv
