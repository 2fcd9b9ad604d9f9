#pragma once

#include <cstddef>
#include <cstdint>
#include <vector>

#include "phonograph/aligner.hpp"
#include "phonograph/corpus.hpp"
#include "phonograph/edge_store.hpp"
#include "phonograph/triangle_index.hpp"

namespace phonograph {

/// Bounds on every optimal score reachable by words of length <= q.
struct ScoreBounds {
  std::int64_t lowest;
  std::int64_t highest;
};

ScoreBounds score_bounds(std::size_t max_length, const ScoringScheme& scheme);

/// Checks that all pairwise scores fit a signed byte and returns the maximum
/// word length q. Throws DataError naming the violated bound.
std::size_t preflight_range_check(const std::vector<EncodedWord>& words, const ScoringScheme& scheme);

struct ComputePlan {
  static constexpr EdgeIndex kDefaultChunkSize = 65536;

  EdgeIndex chunk_size = kDefaultChunkSize;
  unsigned worker_count = 1;

  /// Chunk k covers [k * chunk_size, min((k+1) * chunk_size, edges)).
  [[nodiscard]] EdgeIndex num_chunks(EdgeIndex edges) const {
    return (edges + chunk_size - 1) / chunk_size;
  }
};

struct ComputeStats {
  EdgeIndex edges_written = 0;
  double wall_time = 0.0;  // seconds
  int min_score = 0;
  int max_score = 0;
  double mean_score = 0.0;
};

/// Scores every word pair (r < c) and writes the results to `sink` in
/// row-major edge order.
///
/// Workers claim contiguous chunks of edge indices and compute them into
/// private buffers; the calling thread commits buffers strictly in chunk
/// order, so the output is independent of worker count and chunk size.
/// Runs preflight_range_check() first.
ComputeStats compute_all_pairs(const std::vector<EncodedWord>& words, const ScoringScheme& scheme,
                               EdgeSink& sink, const ComputePlan& plan);

}  // namespace phonograph
