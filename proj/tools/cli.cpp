#include "cli.hpp"

#include <filesystem>
#include <iomanip>
#include <optional>
#include <ostream>
#include <sstream>
#include <stdexcept>
#include <thread>

#include <CLI11.hpp>

#include "phonograph/aligner.hpp"
#include "phonograph/corpus.hpp"
#include "phonograph/edge_store.hpp"
#include "phonograph/error.hpp"
#include "phonograph/graph_query.hpp"
#include "phonograph/pairwise_engine.hpp"
#include "phonograph/triangle_index.hpp"

namespace phonograph::cli {
namespace {

namespace fs = std::filesystem;

struct IngestArgs {
  std::string corpus;
  std::size_t limit = 0;
  std::string out;
  std::vector<std::string> digraphs = IpaTokenizer::default_digraphs();
};

struct ComputeArgs {
  std::string words;
  std::optional<int> match;
  std::optional<int> mismatch;
  std::optional<int> gap;
  std::string scheme;
  std::string inventory;
  unsigned workers = std::max(1U, std::thread::hardware_concurrency());
  std::uint64_t chunk_size = ComputePlan::kDefaultChunkSize;
  std::string out;
};

struct QueryArgs {
  std::string store;
  std::string words;
  bool force = false;
};

struct HistArgs : QueryArgs {
  bool normalized = false;
};

struct EgoArgs : QueryArgs {
  std::string word;
  unsigned depth = 3;
  double lo = 0;
  double hi = 100;
  std::string out;
  bool gexf = false;
};

struct PathArgs : QueryArgs {
  std::string from;
  std::string to;
  double lo = 0;
  double hi = 100;
};

struct InfoArgs {
  std::string store;
  std::optional<std::uint64_t> nodes;
  std::optional<std::uint64_t> budget;
  std::uint64_t bytes_per_edge = 1;
  std::optional<std::uint64_t> max_word_length;
  std::uint64_t shared_mem = 49152;
};

fs::path sibling_with_extension(const fs::path& words_path, const std::string& ext) {
  auto p = words_path;
  p.replace_extension(ext);
  return p;
}

std::string fixed(double v, int digits) {
  std::ostringstream s;
  s << std::fixed << std::setprecision(digits) << v;
  return s.str();
}

// ---------------------------------------------------------------------------

int cmd_ingest(const IngestArgs& a, std::ostream& out) {
  const IpaTokenizer tokenizer(a.digraphs);
  const auto rows = load_corpus(a.corpus, a.limit ? std::optional{a.limit} : std::nullopt);
  const auto inventory = build_inventory(rows, tokenizer);
  const auto words = encode_corpus(rows, inventory, tokenizer);
  const fs::path words_path = a.out + ".words";
  const fs::path inventory_path = a.out + ".inventory";
  save_words(words_path, words);
  inventory.save(inventory_path);
  out << "words\t" << words.size() << "\n"
      << "phonemes\t" << inventory.size() << "\n"
      << "max_length\t" << max_word_length(words) << "\n"
      << "wrote\t" << words_path.string() << "\n"
      << "wrote\t" << inventory_path.string() << "\n";
  return kOk;
}

ScoringScheme resolve_scheme(const ComputeArgs& a) {
  SchemeFile file;
  if (!a.scheme.empty()) file = SchemeFile::load(a.scheme);
  if (a.match) file.match = *a.match;
  if (a.mismatch) file.mismatch = *a.mismatch;
  if (a.gap) file.gap = *a.gap;
  if (file.overrides.empty()) return ScoringScheme(file.match, file.mismatch, file.gap);
  const fs::path inv = a.inventory.empty() ? sibling_with_extension(a.words, ".inventory") : fs::path(a.inventory);
  return file.resolve(PhonemeInventory::load(inv));
}

int cmd_compute(const ComputeArgs& a, std::ostream& out) {
  const auto words = load_words(a.words);
  const auto scheme = resolve_scheme(a);
  const auto q = preflight_range_check(words, scheme);

  ComputePlan plan;
  plan.worker_count = a.workers;
  plan.chunk_size = a.chunk_size;
  EdgeStoreWriter writer(a.out, EdgeStoreManifest::for_corpus(words, scheme));
  const auto stats = compute_all_pairs(words, scheme, writer, plan);
  writer.finish();

  out << "n\t" << words.size() << "\n"
      << "num_edges\t" << stats.edges_written << "\n"
      << "max_length\t" << q << "\n"
      << "workers\t" << plan.worker_count << "\n"
      << "min_score\t" << stats.min_score << "\n"
      << "max_score\t" << stats.max_score << "\n"
      << "mean_score\t" << fixed(stats.mean_score, 4) << "\n"
      << "seconds\t" << fixed(stats.wall_time, 3) << "\n"
      << "payload\t" << writer.paths().payload.string() << "\n";
  return kOk;
}

struct Loaded {
  EdgeStore store;
  std::vector<EncodedWord> words;
};

Loaded load_query_inputs(const QueryArgs& a) {
  auto store = EdgeStore::open(a.store, a.force);
  auto words = load_words(a.words);
  store.check_words(words);
  return {std::move(store), std::move(words)};
}

int cmd_hist(const HistArgs& a, std::ostream& out) {
  const auto in = load_query_inputs(a);
  out << histogram(in.store, in.words, a.normalized).to_text();
  return kOk;
}

int cmd_ego(const EgoArgs& a, std::ostream& out) {
  if (a.lo > a.hi) throw UsageError("--min must not exceed --max");
  const auto in = load_query_inputs(a);
  const auto view = filter_view(in.store, in.words, a.lo, a.hi);
  const auto ego = ego_network(view, in.words, a.word, a.depth);
  const auto prefix = a.out.empty() ? a.word + ".ego" : a.out;
  export_csv(ego, in.words, prefix + ".nodes.csv", prefix + ".edges.csv");
  if (a.gexf) export_gexf(ego, in.words, prefix + ".gexf");
  out << "nodes\t" << ego.node_count() << "\n"
      << "edges\t" << ego.edge_count() << "\n"
      << "wrote\t" << prefix << ".nodes.csv\n"
      << "wrote\t" << prefix << ".edges.csv\n";
  if (a.gexf) out << "wrote\t" << prefix << ".gexf\n";
  return kOk;
}

int cmd_path(const PathArgs& a, std::ostream& out) {
  if (a.lo > a.hi) throw UsageError("--min must not exceed --max");
  const auto in = load_query_inputs(a);
  const auto view = filter_view(in.store, in.words, a.lo, a.hi);
  const auto path = shortest_path(view, in.words, a.from, a.to);
  if (!path) {
    out << "no path between " << a.from << " and " << a.to << "\n";
    return kOk;
  }
  for (std::size_t i = 0; i < path->nodes.size(); ++i) {
    if (i) out << " -> ";
    out << in.words[path->nodes[i]].word;
  }
  out << "\nhops\t" << path->hops() << "\n";
  return kOk;
}

int cmd_info(const InfoArgs& a, std::ostream& out) {
  if (a.store.empty() && !a.nodes && !a.budget && !a.max_word_length) {
    throw UsageError("info needs a store path, --nodes, --budget or --max-word-length");
  }
  if (!a.store.empty()) {
    const auto store = EdgeStore::open(a.store, true);
    out << store.manifest().serialize();
  }
  if (a.nodes) {
    const auto edges = num_edges(*a.nodes);
    out << "nodes\t" << *a.nodes << "\n"
        << "num_edges\t" << edges << "\n"
        << "payload_bytes\t" << edges << "\n"
        << "payload_gib\t" << fixed(static_cast<double>(edges) / (1024.0 * 1024.0 * 1024.0), 2) << "\n";
  }
  if (a.budget) {
    const auto n = nodes_for_edge_budget(*a.budget, a.bytes_per_edge);
    out << "budget_bytes\t" << *a.budget << "\n"
        << "max_nodes\t" << n << "\n"
        << "num_edges\t" << num_edges(n) << "\n";
  }
  if (a.max_word_length) {
    out << "block_width\t" << plan_block_width(*a.max_word_length, a.shared_mem) << "\n";
  }
  return kOk;
}

void add_query_options(CLI::App* cmd, QueryArgs& a) {
  cmd->add_option("store", a.store, "Edge store (<name> or <name>.nwedges)")->required();
  cmd->add_option("--words", a.words, "Words file the store was computed from")->required();
  cmd->add_flag("--force", a.force, "Read an incomplete store");
}

}  // namespace

int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  CLI::App app{"Phonetic similarity graphs from IPA transcriptions"};
  app.require_subcommand(1);
  app.set_version_flag("--version", "phonograph 1.0");

  IngestArgs ingest;
  auto* c_ingest = app.add_subcommand("ingest", "Tokenize and encode a word/IPA/frequency TSV");
  c_ingest->add_option("corpus", ingest.corpus, "Corpus TSV")->required();
  c_ingest->add_option("--limit", ingest.limit, "Keep the N most frequent words")->check(CLI::PositiveNumber);
  c_ingest->add_option("--out", ingest.out, "Output prefix")->required();
  c_ingest->add_option("--digraphs", ingest.digraphs, "Multi-symbol phonemes")->delimiter(',');

  ComputeArgs compute;
  auto* c_compute = app.add_subcommand("compute", "Score all word pairs into an edge store");
  c_compute->add_option("words", compute.words, "Words file from ingest")->required();
  c_compute->add_option("--match", compute.match, "Match score (default 1)");
  c_compute->add_option("--mismatch", compute.mismatch, "Mismatch score (default -1)");
  c_compute->add_option("--gap", compute.gap, "Gap penalty (default -1)");
  c_compute->add_option("--scheme", compute.scheme, "Scheme file with optional per-pair overrides");
  c_compute->add_option("--inventory", compute.inventory, "Inventory for scheme overrides");
  c_compute->add_option("--workers", compute.workers, "Worker threads")->check(CLI::PositiveNumber);
  c_compute->add_option("--chunk-size", compute.chunk_size, "Edges per work unit")->check(CLI::PositiveNumber);
  c_compute->add_option("--out", compute.out, "Store name")->required();

  HistArgs hist;
  auto* c_hist = app.add_subcommand("hist", "Histogram of edge weights");
  add_query_options(c_hist, hist);
  c_hist->add_flag("--normalized", hist.normalized, "Bin 100*score/max(len) instead of raw scores");

  EgoArgs ego;
  auto* c_ego = app.add_subcommand("ego", "Export the ego-network of a word as Gephi CSV");
  add_query_options(c_ego, ego);
  c_ego->add_option("--word", ego.word, "Seed word")->required();
  c_ego->add_option("--depth", ego.depth, "Hops from the seed")->check(CLI::PositiveNumber);
  c_ego->add_option("--min", ego.lo, "Lowest normalized weight kept");
  c_ego->add_option("--max", ego.hi, "Highest normalized weight kept");
  c_ego->add_option("--out", ego.out, "Output prefix (default <word>.ego)");
  c_ego->add_flag("--gexf", ego.gexf, "Also write <prefix>.gexf");

  PathArgs path;
  auto* c_path = app.add_subcommand("path", "Shortest hop path between two words");
  add_query_options(c_path, path);
  c_path->add_option("--from", path.from, "Start word")->required();
  c_path->add_option("--to", path.to, "End word")->required();
  c_path->add_option("--min", path.lo, "Lowest normalized weight kept");
  c_path->add_option("--max", path.hi, "Highest normalized weight kept");

  InfoArgs info;
  auto* c_info = app.add_subcommand("info", "Edge/node geometry and store manifests");
  c_info->add_option("store", info.store, "Edge store to describe");
  c_info->add_option("--nodes", info.nodes, "Report edges and payload size for n nodes");
  c_info->add_option("--budget", info.budget, "Largest node count fitting this many bytes");
  c_info->add_option("--bytes-per-edge", info.bytes_per_edge, "Bytes per stored edge")->check(CLI::PositiveNumber);
  c_info->add_option("--max-word-length", info.max_word_length, "Plan a block width for this q");
  c_info->add_option("--shared-mem", info.shared_mem, "Shared memory per block in bytes");

  std::vector<const char*> argv;
  argv.reserve(args.size());
  for (const auto& s : args) argv.push_back(s.c_str());
  try {
    app.parse(static_cast<int>(argv.size()), argv.data());
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e, out, err);
    return code == 0 ? kOk : kUsage;
  }

  try {
    if (*c_ingest) return cmd_ingest(ingest, out);
    if (*c_compute) return cmd_compute(compute, out);
    if (*c_hist) return cmd_hist(hist, out);
    if (*c_ego) return cmd_ego(ego, out);
    if (*c_path) return cmd_path(path, out);
    if (*c_info) return cmd_info(info, out);
  } catch (const UsageError& e) {
    err << "error: " << e.what() << "\n";
    return kUsage;
  } catch (const IoError& e) {
    err << "error: " << e.what() << "\n";
    return kIo;
  } catch (const fs::filesystem_error& e) {
    err << "error: " << e.what() << "\n";
    return kIo;
  } catch (const std::exception& e) {
    err << "error: " << e.what() << "\n";
    return kData;
  }
  return kUsage;
}

}  // namespace phonograph::cli
