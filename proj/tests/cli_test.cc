// Copyright 2026 The relwmd Authors.
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#include "commands.h"

#include <gtest/gtest.h>

#include <filesystem>
#include <fstream>
#include <random>
#include <sstream>

#include "relwmd/cache.h"

namespace relwmd::cli {
namespace {

namespace fs = std::filesystem;

class CliTest : public ::testing::Test {
 protected:
  void SetUp() override {
    const auto* info = ::testing::UnitTest::GetInstance()->current_test_info();
    dir_ = fs::temp_directory_path() / (std::string("relwmd_cli_") + info->name());
    fs::remove_all(dir_);
    fs::create_directories(dir_);
  }
  void TearDown() override { fs::remove_all(dir_); }

  std::string file(const std::string& name, const std::string& contents) {
    const fs::path p = dir_ / name;
    std::ofstream(p, std::ios::binary) << contents;
    return p.string();
  }
  std::string path(const std::string& name) const { return (dir_ / name).string(); }

  static std::string slurp(const std::string& p) {
    std::ifstream in(p, std::ios::binary);
    std::stringstream ss;
    ss << in.rdbuf();
    return ss.str();
  }

  int call(std::vector<std::string> args) {
    out_.str("");
    err_.str("");
    return run(args, out_, err_);
  }

  // Words a, b, c, d on a line at 0, 3, 1, 2.
  std::string toy_embeddings() { return file("toy.txt", "4 1\na 0\nb 3\nc 1\nd 2\n"); }
  std::string toy_docs() { return file("docs.txt", "a b\nc c c c c c c c c d\n"); }

  std::string ten_words() {
    std::mt19937_64 rng(5);
    std::normal_distribution<double> g;
    std::string s = "10 3\n";
    for (int w = 0; w < 10; ++w) {
      s += "w" + std::to_string(w);
      for (int k = 0; k < 3; ++k) s += " " + std::to_string(g(rng));
      s += "\n";
    }
    return file("ten.txt", s);
  }

  static double value_of(const std::string& csv_line) {
    return std::stod(csv_line.substr(csv_line.rfind(',') + 1));
  }

  fs::path dir_;
  std::ostringstream out_;
  std::ostringstream err_;
};

TEST_F(CliTest, BuildCacheExact) {
  const std::string emb = ten_words();
  ASSERT_EQ(call({"build-cache", "--embeddings", emb, "--r", "2", "--exact", "--out",
                  path("c.bin")}),
            0)
      << err_.str();
  const RelatedCache c = load_cache(path("c.bin"));
  EXPECT_EQ(c.num_words(), 10u);
  for (WordId w = 0; w < 10; ++w) EXPECT_EQ(c.neighbors(w).size(), 2u);
  EXPECT_NE(out_.str().find("n=10"), std::string::npos);
  EXPECT_NE(out_.str().find("r=2"), std::string::npos);
  EXPECT_NE(out_.str().find("c_max="), std::string::npos);
  EXPECT_NE(out_.str().find("elapsed_seconds="), std::string::npos);
}

TEST_F(CliTest, BuildCacheIsReproducible) {
  const std::string emb = ten_words();
  for (const char* name : {"a.bin", "b.bin"}) {
    ASSERT_EQ(call({"build-cache", "--embeddings", emb, "--r", "3", "--clustered", "--seed", "4",
                    "--out", path(name)}),
              0)
        << err_.str();
  }
  EXPECT_NE(out_.str().find("k=2"), std::string::npos) << out_.str();
  EXPECT_EQ(slurp(path("a.bin")), slurp(path("b.bin")));
}

TEST_F(CliTest, ClusteredWithOneClusterMatchesExact) {
  const std::string emb =
      file("five.txt", "5 2\nv 0 0\nw 1 0\nx 0 2\ny 3 3\nz -1 4\n");
  ASSERT_EQ(call({"build-cache", "--embeddings", emb, "--r", "2", "--out", path("e.bin")}), 0);
  ASSERT_EQ(call({"build-cache", "--embeddings", emb, "--r", "2", "--clustered",
                  "--kmeans-iters", "5", "--out", path("c.bin")}),
            0);
  EXPECT_NE(out_.str().find("k=1"), std::string::npos);
  const RelatedCache e = load_cache(path("e.bin"));
  const RelatedCache c = load_cache(path("c.bin"));
  EXPECT_EQ(e.c_max(), c.c_max());
  for (WordId w = 0; w < 5; ++w) {
    EXPECT_TRUE(std::equal(e.neighbors(w).begin(), e.neighbors(w).end(),
                           c.neighbors(w).begin(), c.neighbors(w).end()));
  }
}

TEST_F(CliTest, DistToyValues) {
  const std::string emb = toy_embeddings();
  const std::string docs = toy_docs();
  ASSERT_EQ(call({"dist", "--embeddings", emb, "--docs", docs, "--metric", "wmd"}), 0)
      << err_.str();
  const std::string line = out_.str();
  EXPECT_EQ(line.rfind("0,1,", 0), 0u);
  EXPECT_NEAR(value_of(line), 1.4, 1e-12);

  ASSERT_EQ(call({"dist", "--embeddings", emb, "--docs", docs, "--metric", "rwmd"}), 0);
  EXPECT_NEAR(value_of(out_.str()), 1.0, 1e-15);

  const std::string pairs = file("pairs.txt", "0 0\n1 1\n1 0\n");
  for (const char* metric :
       {"wcd", "cosine", "wmd", "rwmd", "rwmd-l", "rel-wmd", "rel-rwmd", "rel-rwmd-l"}) {
    ASSERT_EQ(call({"dist", "--embeddings", emb, "--docs", docs, "--metric", metric, "--r", "1",
                    "--pairs", pairs}),
              0)
        << metric << ": " << err_.str();
    std::istringstream lines(out_.str());
    std::string l;
    std::getline(lines, l);
    EXPECT_EQ(value_of(l), 0.0) << metric;
    std::getline(lines, l);
    EXPECT_EQ(value_of(l), 0.0) << metric;
  }
}

TEST_F(CliTest, DistValuesUseSeventeenDigits) {
  const std::string emb = file("e.txt", "3 1\na 0\nb 1\nc 0.1\n");
  const std::string docs = file("d.txt", "a\nc\n");
  ASSERT_EQ(call({"dist", "--embeddings", emb, "--docs", docs, "--metric", "wcd"}), 0);
  EXPECT_EQ(out_.str(), "0,1,0.10000000000000001\n");
}

TEST_F(CliTest, DistRelMetricNeedsCache) {
  const std::string out = path("d.csv");
  EXPECT_EQ(call({"dist", "--embeddings", toy_embeddings(), "--docs", toy_docs(), "--metric",
                  "rel-rwmd", "--out", out}),
            kExitUsage);
  EXPECT_NE(err_.str().find("--cache"), std::string::npos) << err_.str();
  EXPECT_FALSE(fs::exists(out));
  EXPECT_FALSE(fs::exists(out + ".tmp"));
}

TEST_F(CliTest, DistWithPrebuiltCache) {
  const std::string emb = toy_embeddings();
  const std::string docs = toy_docs();
  ASSERT_EQ(call({"build-cache", "--embeddings", emb, "--corpus", docs, "--r", "1", "--out",
                  path("c.bin")}),
            0);
  ASSERT_EQ(call({"dist", "--embeddings", emb, "--docs", docs, "--metric", "rel-rwmd-l",
                  "--cache", path("c.bin")}),
            0)
      << err_.str();
  const double with_file = value_of(out_.str());
  ASSERT_EQ(call({"dist", "--embeddings", emb, "--docs", docs, "--metric", "rel-rwmd-l", "--r",
                  "1"}),
            0);
  EXPECT_EQ(value_of(out_.str()), with_file);

  const std::string small = file("small.txt", "a\n");
  EXPECT_EQ(call({"dist", "--embeddings", emb, "--docs", small, "--metric", "rel-rwmd",
                  "--cache", path("c.bin")}),
            kExitUsage);
  EXPECT_NE(err_.str().find("--cache"), std::string::npos);
}

TEST_F(CliTest, UsageErrorsNameTheFlag) {
  const std::string emb = toy_embeddings();
  const std::string docs = toy_docs();
  EXPECT_NE(call({"dist", "--embeddings", emb, "--docs", docs, "--metric", "emd"}), 0);
  EXPECT_NE(err_.str().find("--metric"), std::string::npos) << err_.str();
  EXPECT_NE(call({"build-cache", "--embeddings", emb, "--r", "0", "--out", path("x")}), 0);
  EXPECT_NE(err_.str().find("--r"), std::string::npos) << err_.str();
  EXPECT_NE(call({"dist", "--embeddings", path("missing.txt"), "--docs", docs}), 0);
  EXPECT_NE(err_.str().find("--embeddings"), std::string::npos) << err_.str();
  EXPECT_NE(call({"build-cache", "--embeddings", emb, "--exact", "--clustered", "--out",
                  path("x")}),
            0);
  EXPECT_NE(call({}), 0);
  EXPECT_FALSE(fs::exists(path("x")));
}

TEST_F(CliTest, MalformedInputFailsWithoutOutput) {
  const std::string emb = file("bad.txt", "2 2\na 1 2\nb 1\n");
  EXPECT_EQ(call({"dist", "--embeddings", emb, "--docs", toy_docs(), "--out", path("o.csv")}),
            kExitFailure);
  EXPECT_NE(err_.str().find("line 3"), std::string::npos) << err_.str();
  EXPECT_FALSE(fs::exists(path("o.csv")));
}

TEST_F(CliTest, ConfigFileWithFlagOverride) {
  const std::string emb = toy_embeddings();
  const std::string docs = toy_docs();
  const std::string cfg = file("run.toml", "[dist]\nmetric = \"rwmd\"\n");
  ASSERT_EQ(call({"--config", cfg, "dist", "--embeddings", emb, "--docs", docs}), 0)
      << err_.str();
  EXPECT_NEAR(value_of(out_.str()), 1.0, 1e-15);
  ASSERT_EQ(call({"--config", cfg, "dist", "--embeddings", emb, "--docs", docs, "--metric",
                  "wmd"}),
            0);
  EXPECT_NEAR(value_of(out_.str()), 1.4, 1e-12);
}

std::string two_topic_corpus(std::mt19937_64& rng, int docs) {
  std::string s;
  std::uniform_int_distribution<int> pick(0, 4);
  for (int i = 0; i < docs; ++i) {
    const bool sports = i % 2 == 0;
    s += sports ? "sports\t" : "tech\t";
    for (int t = 0; t < 5; ++t) s += (sports ? "s" : "t") + std::to_string(pick(rng)) + " ";
    s += "\n";
  }
  return s;
}

TEST_F(CliTest, KnnReports) {
  std::string e = "10 2\n";
  for (int w = 0; w < 5; ++w) e += "s" + std::to_string(w) + " " + std::to_string(w * 0.1) + " 0\n";
  for (int w = 0; w < 5; ++w) e += "t" + std::to_string(w) + " 5 " + std::to_string(w * 0.1) + "\n";
  const std::string emb = file("e.txt", e);
  std::mt19937_64 rng(3);
  const std::string train = file("train.txt", two_topic_corpus(rng, 20));
  const std::string test = file("test.txt", two_topic_corpus(rng, 10));

  ASSERT_EQ(call({"knn", "--embeddings", emb, "--train", train, "--test", test, "--k", "3",
                  "--select-r", "--r-grid", "1,2", "--folds", "2", "--report", "json", "--out",
                  path("r.json")}),
            0)
      << err_.str();
  const std::string json = slurp(path("r.json"));
  for (const char* key : {"\"metric\": \"rel-rwmd-l\"", "\"params\"", "\"test_error_pct\": 0.0",
                          "\"preprocess_seconds\"", "\"eval_seconds\"", "\"chosen_r\": 1",
                          "\"cv_errors\""}) {
    EXPECT_NE(json.find(key), std::string::npos) << key << "\n" << json;
  }

  ASSERT_EQ(call({"knn", "--embeddings", emb, "--train", train, "--test", test, "--k", "3",
                  "--metric", "wcd", "--report", "csv"}),
            0)
      << err_.str();
  EXPECT_EQ(out_.str().rfind("metric,test_error_pct,", 0), 0u) << out_.str();
  EXPECT_NE(out_.str().find("\nwcd,0,10,0,,"), std::string::npos) << out_.str();

  EXPECT_NE(call({"knn", "--embeddings", emb, "--train", train, "--test", test, "--r", "2",
                  "--select-r"}),
            0);
}

TEST_F(CliTest, Triplets) {
  const std::string emb = toy_embeddings();
  const std::string docs = file("docs.txt", "a\nc\nb\n");
  const std::string trip = file("t.txt", "0 1 2\n0 2 1\n");
  ASSERT_EQ(call({"triplets", "--embeddings", emb, "--docs", docs, "--triplets", trip,
                  "--metric", "wmd"}),
            0)
      << err_.str();
  EXPECT_NE(out_.str().find("\"test_error_pct\": 50.0"), std::string::npos) << out_.str();
  const std::string bad = file("bad.txt", "0 1 7\n");
  EXPECT_EQ(call({"triplets", "--embeddings", emb, "--docs", docs, "--triplets", bad,
                  "--metric", "wmd"}),
            kExitUsage);
  EXPECT_NE(err_.str().find("--triplets"), std::string::npos);
}

TEST_F(CliTest, FigureDataAnchor) {
  const std::string emb = file("e.txt", "3 1\nx 0\ny 5\nz 2\n");
  ASSERT_EQ(call({"figure-data", "--embeddings", emb, "--anchor", "x"}), 0) << err_.str();
  EXPECT_EQ(out_.str(), "rank,word,distance\n1,z,2\n2,y,5\n");
  EXPECT_EQ(call({"figure-data", "--embeddings", emb, "--anchor", "w"}), kExitUsage);
  EXPECT_NE(err_.str().find("--anchor"), std::string::npos);
}

TEST_F(CliTest, FigureDataHistogramIsUnimodalForUniformCube) {
  std::mt19937_64 rng(9);
  std::uniform_real_distribution<double> u(0.0, 1.0);
  std::string s = "400 10\n";
  for (int w = 0; w < 400; ++w) {
    s += "w" + std::to_string(w);
    for (int k = 0; k < 10; ++k) s += " " + std::to_string(u(rng));
    s += "\n";
  }
  const std::string emb = file("cube.txt", s);
  ASSERT_EQ(call({"figure-data", "--embeddings", emb, "--bins", "12"}), 0) << err_.str();
  std::istringstream lines(out_.str());
  std::string l;
  std::getline(lines, l);
  EXPECT_EQ(l, "bin_lo,bin_hi,count");
  std::vector<double> counts;
  double total = 0.0;
  while (std::getline(lines, l)) {
    counts.push_back(value_of(l));
    total += counts.back();
  }
  ASSERT_EQ(counts.size(), 12u);
  EXPECT_EQ(total, 400.0 * 399.0 / 2.0);
  const auto peak = std::max_element(counts.begin(), counts.end()) - counts.begin();
  const double tol = 0.005 * total;
  for (long b = 1; b <= peak; ++b) EXPECT_GE(counts[b], counts[b - 1] - tol);
  for (long b = peak + 1; b < 12; ++b) EXPECT_LE(counts[b], counts[b - 1] + tol);

  // Subsampled mode is deterministic for a seed.
  ASSERT_EQ(call({"figure-data", "--embeddings", emb, "--max-pairs", "1000", "--seed", "2"}), 0);
  const std::string first = out_.str();
  ASSERT_EQ(call({"figure-data", "--embeddings", emb, "--max-pairs", "1000", "--seed", "2"}), 0);
  EXPECT_EQ(out_.str(), first);
}

TEST_F(CliTest, BinaryEmbeddings) {
  // Binary layout: header line, then "token " followed by d little-endian floats.
  std::string bytes = "2 2\n";
  const float a[2] = {0.0f, 0.0f};
  const float b[2] = {3.0f, 4.0f};
  bytes += "a ";
  bytes.append(reinterpret_cast<const char*>(a), sizeof(a));
  bytes += "\nb ";
  bytes.append(reinterpret_cast<const char*>(b), sizeof(b));
  bytes += "\n";
  const std::string emb = file("e.bin", bytes);
  const std::string docs = file("d.txt", "a\nb\n");
  ASSERT_EQ(call({"dist", "--embeddings", emb, "--format", "binary", "--docs", docs, "--metric",
                  "wmd"}),
            0)
      << err_.str();
  EXPECT_EQ(out_.str(), "0,1,5\n");
}

}  // namespace
}  // namespace relwmd::cli
