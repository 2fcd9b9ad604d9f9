#include "cli.hpp"

#include <gtest/gtest.h>

#include <sstream>

#include "phonograph/edge_store.hpp"
#include "test_support.hpp"

namespace phonograph {
namespace {

using testing::TempDir;

struct Result {
  int code;
  std::string out;
  std::string err;
};

Result run(std::vector<std::string> args) {
  args.insert(args.begin(), "phonograph");
  std::ostringstream out, err;
  const int code = cli::run(args, out, err);
  return {code, out.str(), err.str()};
}

class CliPipeline : public ::testing::Test {
 protected:
  void SetUp() override {
    const auto ingest = run({"ingest", testing::data_path("mini_corpus.tsv").string(), "--out", prefix()});
    ASSERT_EQ(ingest.code, 0) << ingest.err;
    const auto compute = run({"compute", words(), "--out", store()});
    ASSERT_EQ(compute.code, 0) << compute.err;
  }

  std::string prefix() const { return (dir / "mini").string(); }
  std::string words() const { return prefix() + ".words"; }
  std::string store() const { return (dir / "mini").string(); }

  TempDir dir;
};

TEST_F(CliPipeline, IngestWritesWordsAndInventory) {
  EXPECT_TRUE(std::filesystem::exists(dir / "mini.words"));
  EXPECT_TRUE(std::filesystem::exists(dir / "mini.inventory"));
  EXPECT_TRUE(std::filesystem::exists(dir / "mini.nwedges"));
  EXPECT_EQ(std::filesystem::file_size(dir / "mini.nwedges"), 91u);
  const auto loaded = load_words(words());
  ASSERT_EQ(loaded.size(), 14u);
  EXPECT_EQ(loaded.front().word, "maison");
  EXPECT_EQ(loaded[9].word, "nuance");
}

TEST_F(CliPipeline, HistCountsEveryEdge) {
  const auto raw = run({"hist", store(), "--words", words()});
  ASSERT_EQ(raw.code, 0) << raw.err;
  EXPECT_NE(raw.out.find("total\t91\n"), std::string::npos) << raw.out;
  const auto norm = run({"hist", store(), "--words", words(), "--normalized"});
  ASSERT_EQ(norm.code, 0) << norm.err;
  EXPECT_NE(norm.out.find("# normalized"), std::string::npos);
}

TEST_F(CliPipeline, EgoWritesGephiFiles) {
  const auto out = (dir / "ego").string();
  const auto r = run({"ego", store(), "--words", words(), "--word", "puisant", "--depth", "1", "--min", "50",
                      "--out", out, "--gexf"});
  ASSERT_EQ(r.code, 0) << r.err;
  const auto edges = testing::read_file(out + ".edges.csv");
  EXPECT_EQ(edges.rfind("Source,Target,Weight,Type\n", 0), 0u);
  EXPECT_NE(edges.find(",66.67,Undirected"), std::string::npos) << edges;
  EXPECT_NE(testing::read_file(out + ".nodes.csv").find("épuisant"), std::string::npos);
  EXPECT_TRUE(std::filesystem::exists(out + ".gexf"));
}

TEST_F(CliPipeline, PathAndMissingPath) {
  const auto r = run({"path", store(), "--words", words(), "--from", "porter", "--to", "porté"});
  ASSERT_EQ(r.code, 0) << r.err;
  EXPECT_EQ(r.out, "porter -> porté\nhops\t1\n");

  const auto none = run({"path", store(), "--words", words(), "--from", "porter", "--to", "maison",
                         "--min", "40", "--max", "100"});
  EXPECT_EQ(none.code, 0) << none.err;
  EXPECT_EQ(none.out, "no path between porter and maison\n");

  const auto isolated = run({"path", store(), "--words", words(), "--from", "porter", "--to", "maison",
                             "--min", "90", "--max", "100"});
  EXPECT_EQ(isolated.code, cli::kData);
  EXPECT_NE(isolated.err.find("\"maison\""), std::string::npos);

  EXPECT_NE(run({"path", store(), "--words", words(), "--from", "porter", "--to", "zzz"}).code, 0);
}

TEST_F(CliPipeline, InfoShowsManifest) {
  const auto r = run({"info", store()});
  ASSERT_EQ(r.code, 0) << r.err;
  EXPECT_NE(r.out.find("complete\ttrue"), std::string::npos) << r.out;
  EXPECT_NE(r.out.find("num_edges\t91"), std::string::npos);
}

TEST_F(CliPipeline, WorkerCountDoesNotChangePayload) {
  const auto s1 = (dir / "w1").string();
  const auto s8 = (dir / "w8").string();
  ASSERT_EQ(run({"compute", words(), "--workers", "1", "--out", s1}).code, 0);
  ASSERT_EQ(run({"compute", words(), "--workers", "8", "--chunk-size", "5", "--out", s8}).code, 0);
  EXPECT_EQ(testing::read_file(s1 + ".nwedges"), testing::read_file(s8 + ".nwedges"));
  EXPECT_EQ(EdgeStore::open(s1).manifest().payload_digest, EdgeStore::open(s8).manifest().payload_digest);
}

TEST_F(CliPipeline, SchemeFileOverrides) {
  testing::write_file(dir / "scheme.txt", "# custom\nmatch 2\ngap -2\ns z 1\n");
  const auto s = (dir / "custom").string();
  const auto r = run({"compute", words(), "--scheme", (dir / "scheme.txt").string(), "--out", s});
  ASSERT_EQ(r.code, 0) << r.err;
  const auto m = EdgeStore::open(s).manifest();
  EXPECT_EQ(m.match, 2);
  EXPECT_EQ(m.gap, -2);
  EXPECT_NE(m.scheme_hash, EdgeStore::open(store()).manifest().scheme_hash);
}

TEST_F(CliPipeline, WrongWordsFileRejected) {
  const auto other = (dir / "other").string();
  ASSERT_EQ(run({"ingest", testing::data_path("mini_corpus.tsv").string(), "--limit", "5", "--out", other}).code, 0);
  EXPECT_EQ(run({"hist", store(), "--words", other + ".words"}).code, cli::kData);
}

TEST(Cli, ExitCodes) {
  TempDir dir;
  EXPECT_EQ(run({"ingest", (dir / "missing.tsv").string(), "--out", (dir / "x").string()}).code, cli::kIo);
  EXPECT_EQ(run({"ingest", testing::data_path("mini_corpus.tsv").string(), "--limit", "0", "--out",
                 (dir / "x").string()}).code,
            cli::kUsage);
  EXPECT_EQ(run({"bogus"}).code, cli::kUsage);
  EXPECT_EQ(run({"info"}).code, cli::kUsage);
  EXPECT_EQ(run({"--help"}).code, cli::kOk);

  testing::write_file(dir / "bad.tsv", "word\tipa\nfoo\n");
  EXPECT_EQ(run({"ingest", (dir / "bad.tsv").string(), "--out", (dir / "b").string()}).code, cli::kData);
}

TEST(Cli, OverflowSchemeRefusedBeforeWriting) {
  TempDir dir;
  std::string ipa(70, 'a');
  testing::write_file(dir / "long.tsv", "long\t" + ipa + "\t1\nshort\tb\t1\n");
  ASSERT_EQ(run({"ingest", (dir / "long.tsv").string(), "--out", (dir / "l").string()}).code, 0);
  const auto r = run({"compute", (dir / "l.words").string(), "--gap", "-2", "--out", (dir / "l").string()});
  EXPECT_EQ(r.code, cli::kData);
  EXPECT_NE(r.err.find("overflow"), std::string::npos) << r.err;
  EXPECT_FALSE(std::filesystem::exists(dir / "l.nwedges.manifest"));
}

TEST(Cli, InfoGeometry) {
  const auto nodes = run({"info", "--nodes", "600000"});
  ASSERT_EQ(nodes.code, 0) << nodes.err;
  EXPECT_NE(nodes.out.find("num_edges\t179999700000\n"), std::string::npos) << nodes.out;
  const auto budget = run({"info", "--budget", "6000000000"});
  ASSERT_EQ(budget.code, 0) << budget.err;
  EXPECT_NE(budget.out.find("max_nodes\t109545\n"), std::string::npos) << budget.out;
  const auto block = run({"info", "--max-word-length", "25"});
  EXPECT_NE(block.out.find("block_width\t72\n"), std::string::npos) << block.out;
}

}  // namespace
}  // namespace phonograph
