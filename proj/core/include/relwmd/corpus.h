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

#ifndef RELWMD_CORPUS_H_
#define RELWMD_CORPUS_H_

#include <cstddef>
#include <cstdint>
#include <filesystem>
#include <iosfwd>
#include <optional>
#include <span>
#include <stdexcept>
#include <string>
#include <string_view>
#include <unordered_map>
#include <utility>
#include <vector>

#include "relwmd/embeddings.h"

namespace relwmd {

class EmptyDocumentError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// Normalized bag-of-words. Words are distinct and strictly increasing;
// weights[i] == counts[i] / total().
class Document {
 public:
  Document() = default;

  // Merges duplicate ids and sorts. Zero counts are ignored. Throws
  // EmptyDocumentError when nothing remains.
  static Document from_counts(std::vector<std::pair<WordId, std::uint64_t>> counts);

  std::span<const WordId> words() const { return words_; }
  std::span<const std::uint64_t> counts() const { return counts_; }
  std::span<const double> weights() const { return weights_; }
  std::uint64_t total() const { return total_; }
  std::size_t size() const { return words_.size(); }
  bool empty() const { return words_.empty(); }

  // O(1) expected membership probe; returns the position in words().
  std::optional<std::size_t> position(WordId w) const {
    auto it = index_.find(w);
    if (it == index_.end()) return std::nullopt;
    return it->second;
  }
  bool contains(WordId w) const { return index_.contains(w); }

  // Rewrites word ids through `old_to_new`; words mapped to kNoWord are
  // dropped and the document is renormalized.
  Document remapped(std::span<const WordId> old_to_new) const;

  friend bool operator==(const Document& a, const Document& b) {
    return a.words_ == b.words_ && a.counts_ == b.counts_;
  }

 private:
  std::vector<WordId> words_;
  std::vector<std::uint64_t> counts_;
  std::vector<double> weights_;
  std::uint64_t total_ = 0;
  std::unordered_map<WordId, std::uint32_t> index_;
};

// Out-of-vocabulary tokens are dropped before normalization.
Document to_nbow(std::span<const std::string_view> tokens, const Vocabulary& vocab);
Document to_nbow(std::string_view text, const Vocabulary& vocab);

using ClassId = std::uint32_t;
enum class Split : std::uint8_t { kTrain, kTest };

struct Corpus {
  std::vector<Document> docs;
  // Empty for unlabeled collections; otherwise one entry per document.
  std::vector<ClassId> labels;
  std::vector<std::string> class_names;
  std::vector<Split> split;

  std::size_t size() const { return docs.size(); }
  bool labeled() const { return !labels.empty(); }
  std::size_t num_classes() const { return class_names.size(); }
};

struct Triplet {
  std::size_t a = 0;
  std::size_t b = 0;  // (a, b) is the related pair
  std::size_t c = 0;
};
using TripletSet = std::vector<Triplet>;

// "label<TAB>token token ..." per line. `class_names` seeds the label
// interning so that train and test files share class ids.
Corpus read_labeled_corpus(std::istream& in, const Vocabulary& vocab,
                           Split split = Split::kTrain,
                           std::vector<std::string> class_names = {});
Corpus load_labeled_corpus(const std::filesystem::path& path,
                           const Vocabulary& vocab, Split split = Split::kTrain,
                           std::vector<std::string> class_names = {});

// One document per line, no label field. A leading "label<TAB>" is
// tolerated and ignored.
Corpus read_unlabeled_corpus(std::istream& in, const Vocabulary& vocab);
Corpus load_unlabeled_corpus(const std::filesystem::path& path,
                             const Vocabulary& vocab);

TripletSet read_triplets(std::istream& in);
TripletSet load_triplets(const std::filesystem::path& path);

// Throws std::out_of_range naming the first bad triple.
void validate_triplets(const TripletSet& triplets, std::size_t num_docs);

// Word ids used by any document, ascending.
std::vector<WordId> used_words(std::span<const Corpus* const> corpora);

}  // namespace relwmd

#endif  // RELWMD_CORPUS_H_
