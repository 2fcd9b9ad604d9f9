#include "phonograph/pairwise_engine.hpp"

#include <algorithm>
#include <atomic>
#include <chrono>
#include <condition_variable>
#include <exception>
#include <limits>
#include <mutex>
#include <optional>
#include <string>
#include <thread>

#include "phonograph/error.hpp"

namespace phonograph {
namespace {

struct ChunkResult {
  std::vector<std::int8_t> weights;
  std::int64_t sum = 0;
  int min = std::numeric_limits<int>::max();
  int max = std::numeric_limits<int>::min();
};

void compute_chunk(const std::vector<EncodedWord>& words, const ScoringScheme& scheme,
                   ScoreWorkspace& workspace, EdgeIndex first, EdgeIndex last, ChunkResult& out) {
  const NodeIndex n = words.size();
  out.weights.resize(static_cast<std::size_t>(last - first));
  auto [r, c] = edge_at(first, n);
  for (EdgeIndex k = 0; k < last - first; ++k) {
    const int s = workspace.score(words[r].phonemes, words[c].phonemes, scheme);
    out.weights[k] = static_cast<std::int8_t>(s);
    out.sum += s;
    out.min = std::min(out.min, s);
    out.max = std::max(out.max, s);
    if (++c == n) {
      ++r;
      c = r + 1;
    }
  }
}

}  // namespace

ScoreBounds score_bounds(std::size_t max_length, const ScoringScheme& scheme) {
  const auto q = static_cast<std::int64_t>(max_length);
  const std::int64_t smax = scheme.max_similarity();
  const std::int64_t gap = scheme.gap();
  ScoreBounds b{};
  if (gap <= 0) {
    // Every column of a global alignment is a symbol pair or a gap; at most q
    // pairs, and gaps only lower the score. The all-gap alignment bounds the
    // optimum from below.
    b.highest = q * std::max<std::int64_t>(smax, 0);
    b.lowest = 2 * q * gap;
  } else {
    b.highest = 2 * q * std::max(smax, gap);
    b.lowest = 0;
  }
  return b;
}

std::size_t preflight_range_check(const std::vector<EncodedWord>& words, const ScoringScheme& scheme) {
  if (words.empty()) throw DataError("no words to compare");
  const auto q = max_word_length(words);
  if (q == 0) throw DataError("empty phoneme sequence in corpus");
  const auto b = score_bounds(q, scheme);
  std::string problems;
  if (b.lowest < std::numeric_limits<std::int8_t>::min()) {
    problems += " lowest possible score " + std::to_string(b.lowest) + " < -128 (q=" + std::to_string(q) +
                ", gap=" + std::to_string(scheme.gap()) + ");";
  }
  if (b.highest > std::numeric_limits<std::int8_t>::max()) {
    problems += " highest possible score " + std::to_string(b.highest) + " > 127 (q=" + std::to_string(q) +
                ", max similarity=" + std::to_string(scheme.max_similarity()) + ");";
  }
  if (!problems.empty()) throw DataError("scores may overflow 8 bits:" + problems);
  return q;
}

ComputeStats compute_all_pairs(const std::vector<EncodedWord>& words, const ScoringScheme& scheme,
                               EdgeSink& sink, const ComputePlan& plan) {
  if (plan.chunk_size == 0 || plan.worker_count == 0) throw UsageError("chunk size and worker count must be positive");
  const auto q = preflight_range_check(words, scheme);
  const auto start = std::chrono::steady_clock::now();
  const NodeIndex n = words.size();
  const EdgeIndex edges = num_edges(n);
  const EdgeIndex chunks = plan.num_chunks(edges);
  const unsigned workers = static_cast<unsigned>(std::min<EdgeIndex>(plan.worker_count, std::max<EdgeIndex>(chunks, 1)));
  // Bounded look-ahead so finished-but-uncommitted buffers stay O(workers).
  const EdgeIndex window = 2 * static_cast<EdgeIndex>(workers);

  std::mutex mu;
  std::condition_variable ready_cv;
  std::condition_variable window_cv;
  std::vector<std::optional<ChunkResult>> ready(static_cast<std::size_t>(std::min(window, std::max<EdgeIndex>(chunks, 1))));
  EdgeIndex committed = 0;
  bool abort = false;
  std::exception_ptr worker_error;
  std::atomic<EdgeIndex> next_chunk{0};

  auto worker = [&] {
    ScoreWorkspace workspace(q);
    try {
      while (true) {
        const EdgeIndex k = next_chunk.fetch_add(1);
        if (k >= chunks) return;
        {
          std::unique_lock lock(mu);
          window_cv.wait(lock, [&] { return abort || k < committed + ready.size(); });
          if (abort) return;
        }
        ChunkResult result;
        const EdgeIndex first = k * plan.chunk_size;
        compute_chunk(words, scheme, workspace, first, std::min(first + plan.chunk_size, edges), result);
        {
          std::lock_guard lock(mu);
          ready[k % ready.size()] = std::move(result);
        }
        ready_cv.notify_all();
      }
    } catch (...) {
      {
        std::lock_guard lock(mu);
        if (!worker_error) worker_error = std::current_exception();
        abort = true;
      }
      ready_cv.notify_all();
      window_cv.notify_all();
    }
  };

  ComputeStats stats;
  std::int64_t sum = 0;
  int lo = std::numeric_limits<int>::max();
  int hi = std::numeric_limits<int>::min();
  std::vector<std::jthread> pool;
  pool.reserve(workers);
  for (unsigned i = 0; i < workers; ++i) pool.emplace_back(worker);

  try {
    for (EdgeIndex k = 0; k < chunks; ++k) {
      ChunkResult result;
      {
        std::unique_lock lock(mu);
        auto& slot = ready[k % ready.size()];
        ready_cv.wait(lock, [&] { return abort || slot.has_value(); });
        if (abort) break;
        result = std::move(*slot);
        slot.reset();
      }
      sink.write(result.weights);
      stats.edges_written += result.weights.size();
      sum += result.sum;
      lo = std::min(lo, result.min);
      hi = std::max(hi, result.max);
      {
        std::lock_guard lock(mu);
        committed = k + 1;
      }
      window_cv.notify_all();
    }
  } catch (...) {
    {
      std::lock_guard lock(mu);
      abort = true;
    }
    window_cv.notify_all();
    pool.clear();
    throw;
  }
  pool.clear();
  if (worker_error) std::rethrow_exception(worker_error);

  if (stats.edges_written > 0) {
    stats.min_score = lo;
    stats.max_score = hi;
    stats.mean_score = static_cast<double>(sum) / static_cast<double>(stats.edges_written);
  }
  stats.wall_time = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
  return stats;
}

}  // namespace phonograph
