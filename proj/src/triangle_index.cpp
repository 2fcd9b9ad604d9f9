#include "phonograph/triangle_index.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>
#include <string>

#include "phonograph/error.hpp"

namespace phonograph {
namespace {

__extension__ typedef unsigned __int128 Wide;

EdgeIndex narrow(Wide v) {
  if (v > std::numeric_limits<EdgeIndex>::max()) throw std::overflow_error("edge count exceeds 64 bits");
  return static_cast<EdgeIndex>(v);
}

// S_{r-1}: edges in rows before r; 0 for r == 0.
EdgeIndex row_start(NodeIndex r, NodeIndex n) {
  return r == 0 ? 0 : prefix_count(r - 1, n);
}

}  // namespace

EdgeIndex num_edges(NodeIndex n) {
  if (n < 2) return 0;
  return narrow(static_cast<Wide>(n) * (n - 1) / 2);
}

EdgeIndex prefix_count(NodeIndex r, NodeIndex n) {
  if (n < 2 || r > n - 2) {
    throw UsageError("row " + std::to_string(r) + " out of range for n=" + std::to_string(n));
  }
  // (n-1)(r+1) - r(r+1)/2
  const Wide r1 = static_cast<Wide>(r) + 1;
  return narrow(static_cast<Wide>(n - 1) * r1 - static_cast<Wide>(r) * r1 / 2);
}

NodeIndex row_of(EdgeIndex idx, NodeIndex n) {
  if (idx >= num_edges(n)) {
    throw UsageError("edge index " + std::to_string(idx) + " out of range for n=" + std::to_string(n));
  }
  const double z = static_cast<double>(n) - 0.5;
  const double disc = std::max(0.0, z * z - 2.0 * static_cast<double>(idx));
  const double estimate = std::floor(z - std::sqrt(disc));
  NodeIndex r = estimate <= 0.0 ? 0 : std::min<NodeIndex>(static_cast<NodeIndex>(estimate), n - 2);
  while (r > 0 && row_start(r, n) > idx) --r;
  while (prefix_count(r, n) <= idx) ++r;
  return r;
}

NodeIndex col_of(EdgeIndex idx, NodeIndex n, NodeIndex r) {
  if (idx >= num_edges(n) || r > n - 2) {
    throw UsageError("edge index " + std::to_string(idx) + " out of range for n=" + std::to_string(n));
  }
  const auto start = row_start(r, n);
  if (idx < start || idx >= prefix_count(r, n)) {
    throw UsageError("edge " + std::to_string(idx) + " is not in row " + std::to_string(r));
  }
  return r + 1 + (idx - start);
}

RowCol edge_at(EdgeIndex idx, NodeIndex n) {
  const auto r = row_of(idx, n);
  return {r, col_of(idx, n, r)};
}

EdgeIndex index_of(NodeIndex r, NodeIndex c, NodeIndex n) {
  if (!(r < c && c < n)) {
    throw UsageError("need r < c < n, got (" + std::to_string(r) + ", " + std::to_string(c) +
                     ") with n=" + std::to_string(n));
  }
  return row_start(r, n) + (c - r - 1);
}

NodeIndex nodes_for_edge_budget(std::uint64_t budget_bytes, std::uint64_t bytes_per_edge) {
  if (budget_bytes == 0 || bytes_per_edge == 0) throw UsageError("budget and bytes per edge must be positive");
  const auto edges = budget_bytes / bytes_per_edge;
  const double estimate = 0.5 + std::sqrt(0.25 + 2.0 * static_cast<double>(edges));
  auto n = static_cast<NodeIndex>(std::max(1.0, std::floor(estimate)));
  while (n > 1 && num_edges(n) > edges) --n;
  while (num_edges(n + 1) <= edges) ++n;
  return n;
}

std::uint64_t plan_block_width(std::uint64_t max_word_length, std::uint64_t shared_mem_bytes,
                               std::uint64_t max_threads) {
  if (max_word_length == 0 || max_threads == 0) throw UsageError("word length and thread cap must be positive");
  const auto per_thread = (max_word_length + 1) * (max_word_length + 1);
  if (per_thread > shared_mem_bytes) throw UsageError("word too long for block planning");
  return std::min(max_threads, shared_mem_bytes / per_thread);
}

}  // namespace phonograph
