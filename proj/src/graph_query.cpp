#include "phonograph/graph_query.hpp"

#include <algorithm>
#include <charconv>
#include <deque>
#include <limits>
#include <tuple>

#include "file_io.hpp"
#include "phonograph/error.hpp"

namespace phonograph {
namespace {

std::string format_weight(double w) {
  char buf[64];
  const auto [ptr, ec] = std::to_chars(buf, buf + sizeof buf, w, std::chars_format::fixed, 2);
  return std::string(buf, ptr);
}

std::string csv_field(std::string_view s) {
  if (s.find_first_of(",\"\r\n") == std::string_view::npos) return std::string(s);
  std::string out = "\"";
  for (const char ch : s) {
    if (ch == '"') out += '"';
    out += ch;
  }
  out += '"';
  return out;
}

std::string xml_escape(std::string_view s) {
  std::string out;
  for (const char ch : s) {
    switch (ch) {
      case '&': out += "&amp;"; break;
      case '<': out += "&lt;"; break;
      case '>': out += "&gt;"; break;
      case '"': out += "&quot;"; break;
      case '\'': out += "&apos;"; break;
      default: out += ch;
    }
  }
  return out;
}

const std::string& label_of(const std::vector<EncodedWord>& words, WordId id) {
  if (id >= words.size()) throw DataError("node " + std::to_string(id) + " has no word");
  return words[id].word;
}

WordId resolve_word(const std::vector<EncodedWord>& words, std::string_view word) {
  const auto idx = find_word(words, word);
  if (!idx) throw UsageError("unknown word \"" + std::string(word) + "\"");
  return static_cast<WordId>(*idx);
}

}  // namespace

// ---------------------------------------------------------------------------
// GraphView

GraphView::GraphView(WeightRange filter, std::vector<std::tuple<WordId, WordId, double>> edges)
    : filter_(filter), edge_count_(edges.size()) {
  nodes_.reserve(edges.size() * 2);
  for (const auto& [u, v, w] : edges) {
    if (u == v) throw DataError("self-loop on node " + std::to_string(u));
    nodes_.push_back(u);
    nodes_.push_back(v);
  }
  std::sort(nodes_.begin(), nodes_.end());
  nodes_.erase(std::unique(nodes_.begin(), nodes_.end()), nodes_.end());
  nodes_.shrink_to_fit();

  offsets_.assign(nodes_.size() + 1, 0);
  for (const auto& [u, v, w] : edges) {
    ++offsets_[*local(u) + 1];
    ++offsets_[*local(v) + 1];
  }
  for (std::size_t i = 1; i < offsets_.size(); ++i) offsets_[i] += offsets_[i - 1];
  adjacency_.resize(offsets_.back());
  auto fill = offsets_;
  for (const auto& [u, v, w] : edges) {
    const auto lu = *local(u);
    const auto lv = *local(v);
    adjacency_[fill[lu]++] = {v, w};
    adjacency_[fill[lv]++] = {u, w};
  }
  for (std::size_t i = 0; i < nodes_.size(); ++i) {
    std::sort(adjacency_.begin() + static_cast<std::ptrdiff_t>(offsets_[i]),
              adjacency_.begin() + static_cast<std::ptrdiff_t>(offsets_[i + 1]),
              [](const Neighbor& a, const Neighbor& b) { return a.id < b.id; });
  }
}

std::optional<std::size_t> GraphView::local(WordId id) const {
  const auto it = std::lower_bound(nodes_.begin(), nodes_.end(), id);
  if (it == nodes_.end() || *it != id) return std::nullopt;
  return static_cast<std::size_t>(it - nodes_.begin());
}

bool GraphView::contains(WordId id) const { return local(id).has_value(); }

std::span<const Neighbor> GraphView::neighbors(WordId id) const {
  const auto l = local(id);
  if (!l) throw UsageError("node " + std::to_string(id) + " is not in the view");
  return {adjacency_.data() + offsets_[*l], offsets_[*l + 1] - offsets_[*l]};
}

std::vector<std::tuple<WordId, WordId, double>> GraphView::edges() const {
  std::vector<std::tuple<WordId, WordId, double>> out;
  out.reserve(edge_count_);
  for (std::size_t i = 0; i < nodes_.size(); ++i) {
    for (std::size_t k = offsets_[i]; k < offsets_[i + 1]; ++k) {
      if (nodes_[i] < adjacency_[k].id) out.emplace_back(nodes_[i], adjacency_[k].id, adjacency_[k].weight);
    }
  }
  return out;
}

// ---------------------------------------------------------------------------
// Queries

GraphView filter_view(const EdgeStore& store, const std::vector<EncodedWord>& words, double lo, double hi) {
  if (!(lo <= hi)) throw UsageError("filter needs lo <= hi");
  if (!store.manifest().complete) throw DataError("filter requires a complete store");
  store.check_words(words);
  if (words.size() > std::numeric_limits<WordId>::max()) throw DataError("too many words for a graph view");

  std::vector<std::size_t> lengths;
  lengths.reserve(words.size());
  for (const auto& w : words) lengths.push_back(w.phonemes.size());

  const WeightRange range{lo, hi};
  std::vector<std::tuple<WordId, WordId, double>> kept;
  store.scan_edges([&](NodeIndex r, NodeIndex c, int score) {
    const auto w = normalize(score, lengths[r], lengths[c]);
    if (range.contains(w)) kept.emplace_back(static_cast<WordId>(r), static_cast<WordId>(c), w);
  });
  return GraphView(range, std::move(kept));
}

std::vector<int> hop_distances(const GraphView& view, WordId source) {
  const auto& nodes = view.nodes();
  const auto index = [&](WordId id) {
    return static_cast<std::size_t>(std::lower_bound(nodes.begin(), nodes.end(), id) - nodes.begin());
  };
  std::vector<int> dist(nodes.size(), -1);
  if (!view.contains(source)) throw UsageError("node " + std::to_string(source) + " is not in the view");
  std::deque<WordId> queue{source};
  dist[index(source)] = 0;
  while (!queue.empty()) {
    const auto u = queue.front();
    queue.pop_front();
    const auto du = dist[index(u)];
    for (const auto& nb : view.neighbors(u)) {
      auto& dv = dist[index(nb.id)];
      if (dv < 0) {
        dv = du + 1;
        queue.push_back(nb.id);
      }
    }
  }
  return dist;
}

GraphView ego_network(const GraphView& view, WordId seed, unsigned depth) {
  if (depth == 0) throw UsageError("ego depth must be at least 1");
  if (!view.contains(seed)) {
    throw DataError("seed node " + std::to_string(seed) + " has no edge in the weight range");
  }
  const auto dist = hop_distances(view, seed);
  const auto& nodes = view.nodes();
  std::vector<WordId> members;
  for (std::size_t i = 0; i < nodes.size(); ++i) {
    if (dist[i] >= 0 && static_cast<unsigned>(dist[i]) <= depth) members.push_back(nodes[i]);
  }
  std::vector<std::tuple<WordId, WordId, double>> edges;
  for (const auto u : members) {
    for (const auto& nb : view.neighbors(u)) {
      if (u < nb.id && std::binary_search(members.begin(), members.end(), nb.id)) {
        edges.emplace_back(u, nb.id, nb.weight);
      }
    }
  }
  return GraphView(view.filter(), std::move(edges));
}

GraphView ego_network(const GraphView& view, const std::vector<EncodedWord>& words,
                      std::string_view seed_word, unsigned depth) {
  const auto seed = resolve_word(words, seed_word);
  if (!view.contains(seed)) {
    throw DataError("seed \"" + std::string(seed_word) + "\" has no edge in the weight range");
  }
  return ego_network(view, seed, depth);
}

std::optional<Path> shortest_path(const GraphView& view, WordId from, WordId to) {
  if (!view.contains(from)) throw UsageError("node " + std::to_string(from) + " is not in the view");
  if (!view.contains(to)) throw UsageError("node " + std::to_string(to) + " is not in the view");
  if (from == to) return Path{{from}};

  const auto& nodes = view.nodes();
  const auto index = [&](WordId id) {
    return static_cast<std::size_t>(std::lower_bound(nodes.begin(), nodes.end(), id) - nodes.begin());
  };
  constexpr auto kUnseen = std::numeric_limits<WordId>::max();
  std::vector<WordId> parent(nodes.size(), kUnseen);
  parent[index(from)] = from;
  std::deque<WordId> queue{from};
  while (!queue.empty()) {
    const auto u = queue.front();
    queue.pop_front();
    for (const auto& nb : view.neighbors(u)) {
      auto& p = parent[index(nb.id)];
      if (p != kUnseen) continue;
      p = u;
      if (nb.id == to) {
        Path path;
        for (auto v = to; v != from; v = parent[index(v)]) path.nodes.push_back(v);
        path.nodes.push_back(from);
        std::reverse(path.nodes.begin(), path.nodes.end());
        return path;
      }
      queue.push_back(nb.id);
    }
  }
  return std::nullopt;
}

std::optional<Path> shortest_path(const GraphView& view, const std::vector<EncodedWord>& words,
                                  std::string_view from, std::string_view to) {
  const auto a = resolve_word(words, from);
  const auto b = resolve_word(words, to);
  for (const auto& [id, w] : {std::pair{a, from}, std::pair{b, to}}) {
    if (!view.contains(id)) throw DataError("\"" + std::string(w) + "\" has no edge in the weight range");
  }
  return shortest_path(view, a, b);
}

// ---------------------------------------------------------------------------
// Export

std::string nodes_csv(const GraphView& view, const std::vector<EncodedWord>& words) {
  std::string out = "Id,Label\n";
  for (const auto id : view.nodes()) {
    out += std::to_string(id) + "," + csv_field(label_of(words, id)) + "\n";
  }
  return out;
}

std::string edges_csv(const GraphView& view) {
  std::string out = "Source,Target,Weight,Type\n";
  for (const auto& [u, v, w] : view.edges()) {
    out += std::to_string(u) + "," + std::to_string(v) + "," + format_weight(w) + ",Undirected\n";
  }
  return out;
}

void export_csv(const GraphView& view, const std::vector<EncodedWord>& words,
                const std::filesystem::path& nodes_path, const std::filesystem::path& edges_path) {
  if (view.empty()) throw DataError("nothing to export: view is empty");
  detail::write_text_file(nodes_path, nodes_csv(view, words));
  detail::write_text_file(edges_path, edges_csv(view));
}

std::string gexf(const GraphView& view, const std::vector<EncodedWord>& words) {
  std::string out =
      "<?xml version=\"1.0\" encoding=\"UTF-8\"?>\n"
      "<gexf xmlns=\"http://gexf.net/1.3\" version=\"1.3\">\n"
      "  <graph mode=\"static\" defaultedgetype=\"undirected\">\n"
      "    <nodes>\n";
  for (const auto id : view.nodes()) {
    out += "      <node id=\"" + std::to_string(id) + "\" label=\"" + xml_escape(label_of(words, id)) + "\"/>\n";
  }
  out += "    </nodes>\n    <edges>\n";
  std::size_t k = 0;
  for (const auto& [u, v, w] : view.edges()) {
    out += "      <edge id=\"" + std::to_string(k++) + "\" source=\"" + std::to_string(u) + "\" target=\"" +
           std::to_string(v) + "\" weight=\"" + format_weight(w) + "\"/>\n";
  }
  out += "    </edges>\n  </graph>\n</gexf>\n";
  return out;
}

void export_gexf(const GraphView& view, const std::vector<EncodedWord>& words, const std::filesystem::path& path) {
  if (view.empty()) throw DataError("nothing to export: view is empty");
  detail::write_text_file(path, gexf(view, words));
}

}  // namespace phonograph
