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

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <limits>
#include <memory>
#include <optional>
#include <random>
#include <sstream>

#include "CLI11.hpp"
#include "json.hpp"
#include "relwmd/parallel.h"
#include "relwmd/relwmd.h"

namespace relwmd::cli {

namespace {

namespace fs = std::filesystem;
using Clock = std::chrono::steady_clock;
using Json = nlohmann::ordered_json;

double seconds_since(Clock::time_point start) {
  return std::chrono::duration<double>(Clock::now() - start).count();
}

std::string full_precision(double v) {
  char buf[40];
  std::snprintf(buf, sizeof(buf), "%.17g", v);
  return buf;
}

// Writes to a sibling temporary file and renames it into place on
// commit(). Anything not committed is removed, so a failed run leaves no
// partial file behind. An empty path writes to `fallback`.
class Output {
 public:
  Output(std::string path, std::ostream& fallback, bool binary = false)
      : path_(std::move(path)), fallback_(fallback) {
    if (path_.empty()) return;
    tmp_ = path_ + ".tmp";
    file_ = std::make_unique<std::ofstream>(
        tmp_, binary ? std::ios::binary | std::ios::trunc : std::ios::trunc);
    if (!*file_) throw UsageError("--out: cannot write " + path_);
  }
  Output(const Output&) = delete;
  Output& operator=(const Output&) = delete;
  ~Output() {
    if (file_ && !committed_) {
      file_.reset();
      std::error_code ec;
      fs::remove(tmp_, ec);
    }
  }

  std::ostream& stream() { return file_ ? *file_ : fallback_; }

  void commit() {
    if (!file_) {
      fallback_.flush();
      return;
    }
    file_->close();
    if (!*file_) throw std::runtime_error("write failed: " + path_);
    fs::rename(tmp_, path_);
    committed_ = true;
  }

 private:
  std::string path_;
  std::string tmp_;
  std::ostream& fallback_;
  std::unique_ptr<std::ofstream> file_;
  bool committed_ = false;
};

struct EmbeddingOptions {
  std::string path;
  std::string format = "text";
  bool normalize = false;
};

struct CacheOptions {
  std::optional<std::size_t> r;
  bool clustered = false;
  unsigned kmeans_iters = kDefaultKmeansIters;
  std::uint64_t seed = 0;
  std::string cache_path;
};

struct Common {
  unsigned threads = 0;
  std::size_t pull_budget_mb = kDefaultPullBudgetBytes >> 20;
  std::string out;
  std::string report = "json";
};

void add_embedding_options(CLI::App* app, EmbeddingOptions& e) {
  app->add_option("--embeddings", e.path, "Embedding file (word2vec text or binary)")
      ->required()
      ->check(CLI::ExistingFile);
  app->add_option("--format", e.format, "Embedding file format: text or binary")
      ->capture_default_str()
      ->check(CLI::IsMember({"text", "txt", "binary", "bin"}));
  app->add_flag("--normalize", e.normalize, "Scale every embedding to unit length");
}

void add_cache_options(CLI::App* app, CacheOptions& c, bool with_file) {
  app->add_option("--r", c.r, "Related words kept per vocabulary word")
      ->check(CLI::PositiveNumber);
  auto* clustered = app->add_flag("--clustered", c.clustered,
                                  "Build the cache within k-means clusters");
  auto* exact = app->add_flag("--exact", "Build the cache over the whole vocabulary (default)");
  exact->excludes(clustered);
  app->add_option("--kmeans-iters", c.kmeans_iters, "k-means iterations for --clustered")
      ->capture_default_str()
      ->check(CLI::PositiveNumber);
  app->add_option("--seed", c.seed, "Random seed")->capture_default_str();
  if (with_file) {
    app->add_option("--cache", c.cache_path, "Prebuilt cache file from build-cache")
        ->check(CLI::ExistingFile);
  }
}

void add_common_options(CLI::App* app, Common& c, bool with_report) {
  app->add_option("--threads", c.threads, "Worker threads (0 = all cores)")
      ->capture_default_str();
  app->add_option("--out", c.out, "Output file (default: standard output)");
  if (with_report) {
    app->add_option("--report", c.report, "Report format: json or csv")
        ->capture_default_str()
        ->check(CLI::IsMember({"json", "csv"}));
  }
}

Embeddings load_embedding_file(const EmbeddingOptions& e) {
  const auto format = parse_embedding_format(e.format);
  if (!format) throw UsageError("--format: unknown format " + e.format);
  return load_embeddings(e.path, *format);
}

// Embeddings restricted to the words the corpora use, with the corpora
// rewritten to the new ids. Ids keep the embedding file's order.
EmbeddingMatrix restrict_to_corpora(const Embeddings& full, std::vector<Corpus*> corpora,
                                    bool normalize) {
  std::vector<const Corpus*> view(corpora.begin(), corpora.end());
  const auto keep = used_words(view);
  auto restricted = restrict_embeddings(full, keep);
  for (Corpus* c : corpora) {
    for (auto& d : c->docs) d = d.remapped(restricted.old_to_new);
  }
  if (normalize) restricted.embeddings.matrix.normalize_rows();
  return std::move(restricted.embeddings.matrix);
}

Metric metric_or_throw(const std::string& name) {
  const auto m = parse_metric(name);
  if (!m) throw UsageError("--metric: unknown metric " + name);
  return *m;
}

RelatedCache build_cache(const EmbeddingMatrix& emb, const CacheOptions& c, std::size_t r,
                         unsigned threads) {
  if (emb.rows() < 2) throw UsageError("--embeddings: need at least two words to build a cache");
  return c.clustered ? build_cache_clustered(emb, r, c.kmeans_iters, c.seed, threads)
                     : build_cache_exact(emb, r, threads);
}

RelatedCache load_matching_cache(const std::string& path, const EmbeddingMatrix& emb) {
  RelatedCache cache = load_cache(path);
  if (cache.num_words() != emb.rows()) {
    throw UsageError("--cache: built over " + std::to_string(cache.num_words()) +
                     " words but the corpus vocabulary has " + std::to_string(emb.rows()) +
                     "; rebuild it with build-cache --corpus for the same corpora");
  }
  return cache;
}

// Cache for commands that need exactly one r.
std::optional<RelatedCache> fixed_cache(Metric metric, const EmbeddingMatrix& emb,
                                        const CacheOptions& c, unsigned threads) {
  if (!needs_cache(metric)) return std::nullopt;
  if (!c.cache_path.empty()) return load_matching_cache(c.cache_path, emb);
  if (!c.r) {
    throw UsageError("--cache: metric " + std::string(metric_name(metric)) +
                     " needs a related-word cache; pass --cache or --r");
  }
  return build_cache(emb, c, *c.r, threads);
}

Json cache_params(const CacheOptions& c) {
  Json p;
  p["cache_mode"] = c.clustered ? "clustered" : "exact";
  if (c.clustered) p["kmeans_iters"] = c.kmeans_iters;
  p["seed"] = c.seed;
  if (!c.cache_path.empty()) p["cache"] = c.cache_path;
  return p;
}

void write_report(std::ostream& out, const std::string& format, Metric metric,
                  const Json& params, const EvalReport& rep) {
  if (format == "csv") {
    out << "metric,test_error_pct,evaluated,failures,chosen_r,preprocess_seconds,"
           "eval_seconds,selection_seconds\n";
    out << metric_name(metric) << ',' << full_precision(rep.test_error) << ',' << rep.evaluated
        << ',' << rep.failures << ','
        << (rep.chosen_r ? std::to_string(*rep.chosen_r) : std::string()) << ','
        << full_precision(rep.preprocess_seconds) << ',' << full_precision(rep.eval_seconds)
        << ',' << full_precision(rep.selection_seconds) << '\n';
    return;
  }
  Json j;
  j["metric"] = metric_name(metric);
  j["params"] = params;
  j["test_error_pct"] = rep.test_error;
  j["evaluated"] = rep.evaluated;
  j["failures"] = rep.failures;
  j["chosen_r"] = rep.chosen_r ? Json(*rep.chosen_r) : Json(nullptr);
  if (!rep.cv_errors.empty()) {
    Json cv = Json::array();
    for (const auto& [r, e] : rep.cv_errors) cv.push_back({{"r", r}, {"error_pct", e}});
    j["cv_errors"] = cv;
  }
  if (!rep.confusion.empty()) j["confusion"] = rep.confusion;
  if (!rep.warnings.empty()) j["warnings"] = rep.warnings;
  j["preprocess_seconds"] = rep.preprocess_seconds;
  j["eval_seconds"] = rep.eval_seconds;
  j["selection_seconds"] = rep.selection_seconds;
  out << j.dump(2) << '\n';
}

// --- build-cache ----------------------------------------------------------

struct BuildCacheArgs {
  EmbeddingOptions emb;
  CacheOptions cache;
  Common common;
  std::vector<std::string> corpora;
};

void run_build_cache(const BuildCacheArgs& a, std::ostream& out) {
  if (a.common.out.empty()) throw UsageError("--out: build-cache needs an output path");
  const std::size_t r = a.cache.r.value_or(16);
  const Embeddings full = load_embedding_file(a.emb);
  EmbeddingMatrix emb;
  if (a.corpora.empty()) {
    emb = full.matrix;
    if (a.emb.normalize) emb.normalize_rows();
  } else {
    std::vector<Corpus> loaded;
    for (const auto& path : a.corpora) loaded.push_back(load_unlabeled_corpus(path, full.vocab));
    std::vector<Corpus*> ptrs;
    for (auto& c : loaded) ptrs.push_back(&c);
    emb = restrict_to_corpora(full, ptrs, a.emb.normalize);
  }

  const auto start = Clock::now();
  const RelatedCache cache = build_cache(emb, a.cache, r, a.common.threads);
  const double elapsed = seconds_since(start);

  Output file(a.common.out, out, true);
  write_cache(file.stream(), cache);
  file.commit();

  out << "n=" << cache.num_words() << '\n' << "r=" << cache.r() << '\n';
  out << "mode=" << (cache.info().clustered ? "clustered" : "exact") << '\n';
  if (cache.info().clustered) out << "k=" << cache.info().k << '\n';
  out << "c_max=" << full_precision(cache.c_max()) << '\n';
  if (cache.info().c_max_fallback) out << "c_max_fallback=1\n";
  out << "elapsed_seconds=" << full_precision(elapsed) << '\n';
}

// --- dist -----------------------------------------------------------------

struct DistArgs {
  EmbeddingOptions emb;
  CacheOptions cache;
  Common common;
  std::string docs;
  std::string pairs;
  std::string metric = "wmd";
};

std::vector<std::pair<std::size_t, std::size_t>> read_pairs(const std::string& path,
                                                            std::size_t n) {
  std::vector<std::pair<std::size_t, std::size_t>> out;
  if (path.empty()) {
    for (std::size_t i = 0; i < n; ++i) {
      for (std::size_t j = i + 1; j < n; ++j) out.emplace_back(i, j);
    }
    return out;
  }
  std::ifstream in(path);
  if (!in) throw UsageError("--pairs: cannot open " + path);
  std::string line;
  std::size_t line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    std::istringstream fields(line);
    long long i = 0;
    long long j = 0;
    std::string rest;
    if (!(fields >> i)) {
      if (line.find_first_not_of(" \t\r") == std::string::npos) continue;
      throw ParseError(path + ": line " + std::to_string(line_no) + ": expected \"i j\"");
    }
    if (!(fields >> j) || (fields >> rest) || i < 0 || j < 0) {
      throw ParseError(path + ": line " + std::to_string(line_no) + ": expected \"i j\"");
    }
    if (static_cast<std::size_t>(i) >= n || static_cast<std::size_t>(j) >= n) {
      throw ParseError(path + ": line " + std::to_string(line_no) +
                       ": document index out of range");
    }
    out.emplace_back(static_cast<std::size_t>(i), static_cast<std::size_t>(j));
  }
  return out;
}

void run_dist(const DistArgs& a, std::ostream& out) {
  const Metric metric = metric_or_throw(a.metric);
  const Embeddings full = load_embedding_file(a.emb);
  Corpus docs = load_unlabeled_corpus(a.docs, full.vocab);
  if (docs.docs.empty()) throw UsageError("--docs: no documents in " + a.docs);
  const EmbeddingMatrix emb = restrict_to_corpora(full, {&docs}, a.emb.normalize);
  const auto pairs = read_pairs(a.pairs, docs.size());
  const auto cache = fixed_cache(metric, emb, a.cache, a.common.threads);
  const PairwiseEvaluator eval(metric, docs.docs, &emb, cache ? &*cache : nullptr,
                               {a.common.pull_budget_mb << 20, a.common.threads});
  std::vector<double> values(pairs.size());
  parallel_for(pairs.size(), a.common.threads,
               [&](std::size_t p) { values[p] = eval(pairs[p].first, pairs[p].second); });

  Output file(a.common.out, out);
  auto& s = file.stream();
  for (std::size_t p = 0; p < pairs.size(); ++p) {
    s << pairs[p].first << ',' << pairs[p].second << ',' << full_precision(values[p]) << '\n';
  }
  file.commit();
}

// --- knn ------------------------------------------------------------------

struct KnnArgs {
  EmbeddingOptions emb;
  CacheOptions cache;
  Common common;
  std::string train;
  std::string test;
  std::string metric = "rel-rwmd-l";
  std::size_t k = 19;
  std::vector<std::size_t> r_grid = {1, 2, 4, 8, 16, 32, 64, 128};
  std::size_t folds = 5;
  double cv_slack = 1.0;
  bool select_r = false;
};

void run_knn(const KnnArgs& a, std::ostream& out) {
  KnnConfig cfg;
  cfg.metric = metric_or_throw(a.metric);
  cfg.k = a.k;
  cfg.r_grid = a.r_grid;
  cfg.folds = a.folds;
  cfg.cv_slack = a.cv_slack;
  cfg.seed = a.cache.seed;
  cfg.threads = a.common.threads;
  cfg.pull_budget_bytes = a.common.pull_budget_mb << 20;
  try {
    cfg.validate();
  } catch (const std::invalid_argument& e) {
    throw UsageError(std::string("--r-grid/--k/--folds: ") + e.what());
  }
  if (a.select_r && !a.cache.cache_path.empty()) {
    throw UsageError("--select-r: cannot select r with a prebuilt --cache");
  }

  const Embeddings full = load_embedding_file(a.emb);
  Corpus train = load_labeled_corpus(a.train, full.vocab, Split::kTrain);
  Corpus test = load_labeled_corpus(a.test, full.vocab, Split::kTest, train.class_names);
  if (train.docs.empty()) throw UsageError("--train: no documents in " + a.train);
  const EmbeddingMatrix emb = restrict_to_corpora(full, {&train, &test}, a.emb.normalize);

  CacheBuilder builder;
  std::optional<std::size_t> fixed_r;
  std::optional<RelatedCache> file_cache;
  if (needs_cache(cfg.metric)) {
    if (!a.cache.cache_path.empty()) {
      file_cache = load_matching_cache(a.cache.cache_path, emb);
      fixed_r = file_cache->r();
      builder = [&](std::size_t) { return *file_cache; };
    } else {
      builder = [&](std::size_t r) { return build_cache(emb, a.cache, r, cfg.threads); };
      if (!a.select_r) fixed_r = a.cache.r;
    }
  }

  const EvalReport rep = run_classification(train, test, cfg, &emb, builder, fixed_r);

  Json params = cache_params(a.cache);
  params["k"] = cfg.k;
  if (needs_cache(cfg.metric) && !fixed_r) {
    params["r_grid"] = cfg.r_grid;
    params["folds"] = cfg.folds;
    params["cv_slack"] = cfg.cv_slack;
  }
  params["train"] = a.train;
  params["test"] = a.test;
  params["normalize"] = a.emb.normalize;

  Output file(a.common.out, out);
  write_report(file.stream(), a.common.report, cfg.metric, params, rep);
  file.commit();
}

// --- triplets -------------------------------------------------------------

struct TripletArgs {
  EmbeddingOptions emb;
  CacheOptions cache;
  Common common;
  std::string docs;
  std::string triplets;
  std::string metric = "rel-rwmd-l";
};

void run_triplet_command(const TripletArgs& a, std::ostream& out) {
  const Metric metric = metric_or_throw(a.metric);
  const Embeddings full = load_embedding_file(a.emb);
  Corpus docs = load_unlabeled_corpus(a.docs, full.vocab);
  const TripletSet triplets = load_triplets(a.triplets);
  try {
    validate_triplets(triplets, docs.size());
  } catch (const std::out_of_range& e) {
    throw UsageError(std::string("--triplets: ") + e.what());
  }
  if (docs.docs.empty()) throw UsageError("--docs: no documents in " + a.docs);
  const EmbeddingMatrix emb = restrict_to_corpora(full, {&docs}, a.emb.normalize);

  const auto pre_start = Clock::now();
  const auto cache = fixed_cache(metric, emb, a.cache, a.common.threads);
  const PairwiseEvaluator eval(metric, docs.docs, &emb, cache ? &*cache : nullptr,
                               {a.common.pull_budget_mb << 20, a.common.threads});
  const double preprocess = seconds_since(pre_start);

  EvalReport rep = run_triplets(triplets, docs.size(),
                                [&](std::size_t x, std::size_t y) { return eval(x, y); },
                                a.common.threads);
  rep.preprocess_seconds = preprocess;
  if (cache) rep.chosen_r = cache->r();

  Json params = cache_params(a.cache);
  params["docs"] = a.docs;
  params["triplets"] = a.triplets;
  params["normalize"] = a.emb.normalize;

  Output file(a.common.out, out);
  write_report(file.stream(), a.common.report, metric, params, rep);
  file.commit();
}

// --- figure-data ----------------------------------------------------------

struct FigureArgs {
  EmbeddingOptions emb;
  Common common;
  std::string anchor;
  std::size_t bins = 40;
  std::uint64_t max_pairs = 5'000'000;
  std::uint64_t seed = 0;
};

void run_figure_data(const FigureArgs& a, std::ostream& out) {
  Embeddings full = load_embedding_file(a.emb);
  if (a.emb.normalize) full.matrix.normalize_rows();
  const EmbeddingMatrix& m = full.matrix;
  const std::size_t n = m.rows();

  if (!a.anchor.empty()) {
    const auto id = full.vocab.find(a.anchor);
    if (!id) throw UsageError("--anchor: \"" + a.anchor + "\" is not in the vocabulary");
    std::vector<Neighbor> row;
    for (std::size_t j = 0; j < n; ++j) {
      if (j != *id) row.push_back({static_cast<WordId>(j), ground_distance(m, *id, static_cast<WordId>(j))});
    }
    std::sort(row.begin(), row.end(), closer);
    Output file(a.common.out, out);
    auto& s = file.stream();
    s << "rank,word,distance\n";
    for (std::size_t t = 0; t < row.size(); ++t) {
      s << (t + 1) << ',' << full.vocab.token(row[t].word) << ','
        << full_precision(row[t].distance) << '\n';
    }
    file.commit();
    return;
  }

  if (n < 2) throw UsageError("--embeddings: need at least two words for a histogram");
  if (a.bins == 0) throw UsageError("--bins: must be >= 1");
  const std::uint64_t all_pairs = static_cast<std::uint64_t>(n) * (n - 1) / 2;
  std::vector<double> d;
  if (all_pairs <= a.max_pairs) {
    d.reserve(all_pairs);
    for (std::size_t i = 0; i < n; ++i) {
      for (std::size_t j = i + 1; j < n; ++j) {
        d.push_back(ground_distance(m, static_cast<WordId>(i), static_cast<WordId>(j)));
      }
    }
  } else {
    std::mt19937_64 rng(a.seed);
    std::uniform_int_distribution<std::size_t> pick(0, n - 1);
    d.reserve(a.max_pairs);
    while (d.size() < a.max_pairs) {
      const auto i = static_cast<WordId>(pick(rng));
      const auto j = static_cast<WordId>(pick(rng));
      if (i != j) d.push_back(ground_distance(m, i, j));
    }
  }
  const auto [lo_it, hi_it] = std::minmax_element(d.begin(), d.end());
  const double lo = *lo_it;
  const double width = (*hi_it - lo) / static_cast<double>(a.bins);
  std::vector<std::uint64_t> counts(a.bins, 0);
  for (double x : d) {
    auto b = width > 0.0 ? static_cast<std::size_t>((x - lo) / width) : 0;
    ++counts[std::min(b, a.bins - 1)];
  }
  Output file(a.common.out, out);
  auto& s = file.stream();
  s << "bin_lo,bin_hi,count\n";
  for (std::size_t b = 0; b < a.bins; ++b) {
    s << full_precision(lo + width * static_cast<double>(b)) << ','
      << full_precision(lo + width * static_cast<double>(b + 1)) << ',' << counts[b] << '\n';
  }
  file.commit();
}

}  // namespace

int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  CLI::App app{"Document distances with related-word caches"};
  app.name("relwmd");
  app.set_config("--config", "", "Read options from a TOML/INI file; flags override it");
  app.require_subcommand(1);

  BuildCacheArgs bc;
  auto* build = app.add_subcommand("build-cache", "Build a related-word cache file");
  add_embedding_options(build, bc.emb);
  add_cache_options(build, bc.cache, false);
  add_common_options(build, bc.common, false);
  build->add_option("--corpus", bc.corpora,
                    "Restrict the vocabulary to words used by these corpora (repeatable)")
      ->check(CLI::ExistingFile);

  DistArgs da;
  auto* dist = app.add_subcommand("dist", "Print pairwise document distances as i,j,value");
  add_embedding_options(dist, da.emb);
  add_cache_options(dist, da.cache, true);
  add_common_options(dist, da.common, false);
  dist->add_option("--docs", da.docs, "Documents, one per line")
      ->required()
      ->check(CLI::ExistingFile);
  dist->add_option("--pairs", da.pairs, "Index pairs \"i j\" per line (default: all i<j)")
      ->check(CLI::ExistingFile);
  dist->add_option("--metric", da.metric, "Distance metric")->capture_default_str();
  dist->add_option("--pull-budget-mb", da.common.pull_budget_mb,
                   "Memory cap for dense pull matrices")
      ->capture_default_str();

  KnnArgs ka;
  auto* knn = app.add_subcommand("knn", "k-NN classification error on a train/test split");
  add_embedding_options(knn, ka.emb);
  add_cache_options(knn, ka.cache, true);
  add_common_options(knn, ka.common, true);
  knn->add_option("--train", ka.train, "Labeled training documents (label<TAB>text)")
      ->required()
      ->check(CLI::ExistingFile);
  knn->add_option("--test", ka.test, "Labeled test documents")
      ->required()
      ->check(CLI::ExistingFile);
  knn->add_option("--metric", ka.metric, "Distance metric")->capture_default_str();
  knn->add_option("--k", ka.k, "Neighbors in the vote")
      ->capture_default_str()
      ->check(CLI::PositiveNumber);
  auto* select = knn->add_flag("--select-r", ka.select_r,
                               "Choose r by cross-validation (default without --r)");
  select->excludes(knn->get_option("--r"));
  knn->add_option("--r-grid", ka.r_grid, "Candidate r values for --select-r")
      ->capture_default_str()
      ->delimiter(',');
  knn->add_option("--folds", ka.folds, "Cross-validation folds")->capture_default_str();
  knn->add_option("--cv-slack", ka.cv_slack,
                  "Percentage points above the best CV error still accepted")
      ->capture_default_str();
  knn->add_option("--pull-budget-mb", ka.common.pull_budget_mb,
                  "Memory cap for dense pull matrices")
      ->capture_default_str();

  TripletArgs ta;
  auto* trip = app.add_subcommand("triplets", "Triplet error: dist(a,b) < dist(a,c)");
  add_embedding_options(trip, ta.emb);
  add_cache_options(trip, ta.cache, true);
  add_common_options(trip, ta.common, true);
  trip->add_option("--docs", ta.docs, "Documents, one per line")
      ->required()
      ->check(CLI::ExistingFile);
  trip->add_option("--triplets", ta.triplets, "Triplets \"a b c\" per line")
      ->required()
      ->check(CLI::ExistingFile);
  trip->add_option("--metric", ta.metric, "Distance metric")->capture_default_str();
  trip->add_option("--pull-budget-mb", ta.common.pull_budget_mb,
                   "Memory cap for dense pull matrices")
      ->capture_default_str();

  FigureArgs fa;
  auto* fig = app.add_subcommand("figure-data", "Word distance distributions as CSV");
  add_embedding_options(fig, fa.emb);
  add_common_options(fig, fa.common, false);
  fig->add_option("--anchor", fa.anchor, "Sorted distances from this word to all others");
  fig->add_option("--bins", fa.bins, "Histogram bins")->capture_default_str();
  fig->add_option("--max-pairs", fa.max_pairs, "Sample pairs above this count")
      ->capture_default_str();
  fig->add_option("--seed", fa.seed, "Sampling seed")->capture_default_str();

  std::vector<std::string> reversed(args.rbegin(), args.rend());
  try {
    app.parse(reversed);
  } catch (const CLI::ParseError& e) {
    return app.exit(e, out, err);
  }

  try {
    if (*build) run_build_cache(bc, out);
    if (*dist) run_dist(da, out);
    if (*knn) run_knn(ka, out);
    if (*trip) run_triplet_command(ta, out);
    if (*fig) run_figure_data(fa, out);
  } catch (const UsageError& e) {
    err << "error: " << e.what() << '\n';
    return kExitUsage;
  } catch (const std::exception& e) {
    err << "error: " << e.what() << '\n';
    return kExitFailure;
  }
  return kExitOk;
}

}  // namespace relwmd::cli
