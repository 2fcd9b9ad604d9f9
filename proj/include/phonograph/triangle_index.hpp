#pragma once

#include <cstdint>

namespace phonograph {

// Row-major enumeration of the strict upper triangle of an n x n adjacency
// matrix: (0,1), (0,2), ..., (0,n-1), (1,2), ..., (n-2,n-1). Edge index k is
// also the byte offset of that edge in a store payload. Rows run 0..n-2.

using EdgeIndex = std::uint64_t;
using NodeIndex = std::uint64_t;

struct RowCol {
  NodeIndex row;
  NodeIndex col;

  friend bool operator==(const RowCol&, const RowCol&) = default;
};

/// n(n-1)/2. Throws std::overflow_error if the count does not fit 64 bits.
EdgeIndex num_edges(NodeIndex n);

/// Number of edges in rows 0..r inclusive. Requires n >= 2 and r <= n-2.
EdgeIndex prefix_count(NodeIndex r, NodeIndex n);

/// Row holding edge `idx`. The closed-form square-root estimate is corrected
/// with exact integer bracketing, so the result never depends on rounding.
NodeIndex row_of(EdgeIndex idx, NodeIndex n);

/// Column of edge `idx`, given its row. Throws if `r` does not hold `idx`.
NodeIndex col_of(EdgeIndex idx, NodeIndex n, NodeIndex r);

RowCol edge_at(EdgeIndex idx, NodeIndex n);

/// Inverse of edge_at(). Requires r < c < n.
EdgeIndex index_of(NodeIndex r, NodeIndex c, NodeIndex n);

/// Largest n whose edge count fits `budget_bytes` at `bytes_per_edge`.
NodeIndex nodes_for_edge_budget(std::uint64_t budget_bytes, std::uint64_t bytes_per_edge = 1);

/// Largest block width u <= max_threads with u * (q+1)^2 bytes of score
/// matrices fitting in `shared_mem_bytes`.
std::uint64_t plan_block_width(std::uint64_t max_word_length, std::uint64_t shared_mem_bytes,
                               std::uint64_t max_threads = 1024);

}  // namespace phonograph
