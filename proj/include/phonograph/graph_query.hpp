#pragma once

#include <cstddef>
#include <cstdint>
#include <filesystem>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "phonograph/corpus.hpp"
#include "phonograph/edge_store.hpp"

namespace phonograph {

using WordId = std::uint32_t;

struct Neighbor {
  WordId id;
  double weight;  // normalized

  friend bool operator==(const Neighbor&, const Neighbor&) = default;
};

struct WeightRange {
  double lo;
  double hi;

  [[nodiscard]] bool contains(double w) const noexcept { return lo <= w && w <= hi; }
};

/// Undirected graph over a subset of corpus words. Node IDs are corpus word
/// indices; adjacency lists are sorted by neighbour ID and contain no
/// self-loops.
class GraphView {
 public:
  GraphView() = default;

  /// Builds from undirected edges (u != v), each listed once.
  GraphView(WeightRange filter, std::vector<std::tuple<WordId, WordId, double>> edges);

  [[nodiscard]] const WeightRange& filter() const noexcept { return filter_; }
  [[nodiscard]] const std::vector<WordId>& nodes() const noexcept { return nodes_; }
  [[nodiscard]] std::size_t node_count() const noexcept { return nodes_.size(); }
  [[nodiscard]] std::size_t edge_count() const noexcept { return edge_count_; }
  [[nodiscard]] bool empty() const noexcept { return nodes_.empty(); }
  [[nodiscard]] bool contains(WordId id) const;

  /// Throws UsageError if `id` is not in the view.
  [[nodiscard]] std::span<const Neighbor> neighbors(WordId id) const;

  /// Each undirected edge once as (u, v, weight) with u < v, sorted.
  [[nodiscard]] std::vector<std::tuple<WordId, WordId, double>> edges() const;

 private:
  [[nodiscard]] std::optional<std::size_t> local(WordId id) const;

  WeightRange filter_{0.0, 0.0};
  std::vector<WordId> nodes_;               // sorted
  std::vector<std::size_t> offsets_;        // CSR, size nodes_ + 1
  std::vector<Neighbor> adjacency_;
  std::size_t edge_count_ = 0;
};

/// Keeps the edges whose normalized weight lies in [lo, hi] (inclusive) and
/// the nodes touching them. One streaming pass over the store.
GraphView filter_view(const EdgeStore& store, const std::vector<EncodedWord>& words, double lo, double hi);

/// Induced subgraph on every node within `depth` hops of `seed`.
GraphView ego_network(const GraphView& view, WordId seed, unsigned depth);
GraphView ego_network(const GraphView& view, const std::vector<EncodedWord>& words,
                      std::string_view seed_word, unsigned depth);

struct Path {
  std::vector<WordId> nodes;

  [[nodiscard]] std::size_t hops() const noexcept { return nodes.empty() ? 0 : nodes.size() - 1; }
};

/// Minimum-hop path by breadth-first search, expanding neighbours in
/// ascending ID order. nullopt when the endpoints are disconnected.
std::optional<Path> shortest_path(const GraphView& view, WordId from, WordId to);
std::optional<Path> shortest_path(const GraphView& view, const std::vector<EncodedWord>& words,
                                  std::string_view from, std::string_view to);

/// Hop distances from `source` to every node of the view (-1 if unreachable),
/// indexed like view.nodes().
std::vector<int> hop_distances(const GraphView& view, WordId source);

/// Gephi spreadsheet import: `Id,Label` nodes and
/// `Source,Target,Weight,Type` edges, weights to two decimals.
std::string nodes_csv(const GraphView& view, const std::vector<EncodedWord>& words);
std::string edges_csv(const GraphView& view);
void export_csv(const GraphView& view, const std::vector<EncodedWord>& words,
                const std::filesystem::path& nodes_path, const std::filesystem::path& edges_path);

/// Static undirected GEXF 1.3 with a `weight` per edge.
std::string gexf(const GraphView& view, const std::vector<EncodedWord>& words);
void export_gexf(const GraphView& view, const std::vector<EncodedWord>& words, const std::filesystem::path& path);

}  // namespace phonograph
