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

#ifndef RELWMD_EMBEDDINGS_H_
#define RELWMD_EMBEDDINGS_H_

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
#include <vector>

namespace relwmd {

using WordId = std::uint32_t;

// Raised for malformed input files. The message names the offending
// line (text formats) or byte offset (binary formats).
class ParseError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// Token <-> word id bijection. Tokens are compared byte-exact.
class Vocabulary {
 public:
  Vocabulary() = default;

  // Throws std::invalid_argument on duplicate tokens.
  explicit Vocabulary(std::vector<std::string> tokens);

  // Appends `token` and returns its id, or std::nullopt if already present.
  std::optional<WordId> add(std::string token);

  std::optional<WordId> find(std::string_view token) const;
  const std::string& token(WordId id) const { return tokens_.at(id); }
  std::size_t size() const { return tokens_.size(); }
  const std::vector<std::string>& tokens() const { return tokens_; }

 private:
  struct Hash {
    using is_transparent = void;
    std::size_t operator()(std::string_view s) const {
      return std::hash<std::string_view>{}(s);
    }
  };
  std::vector<std::string> tokens_;
  std::unordered_map<std::string, WordId, Hash, std::equal_to<>> index_;
};

// Row-major n x d matrix of word vectors, held in double precision.
class EmbeddingMatrix {
 public:
  EmbeddingMatrix() = default;

  // Throws std::invalid_argument if data.size() != n * d or any entry is
  // not finite.
  EmbeddingMatrix(std::size_t n, std::size_t d, std::vector<double> data);

  std::size_t rows() const { return n_; }
  std::size_t dim() const { return d_; }

  std::span<const double> row(WordId id) const {
    return {data_.data() + static_cast<std::size_t>(id) * d_, d_};
  }
  const std::vector<double>& data() const { return data_; }

  // Scales every row to unit L2 norm; zero rows are left untouched.
  void normalize_rows();

 private:
  std::size_t n_ = 0;
  std::size_t d_ = 0;
  std::vector<double> data_;
};

// Euclidean distance between two rows. Exactly symmetric, zero on the
// diagonal. Throws std::out_of_range for ids >= rows().
double ground_distance(const EmbeddingMatrix& emb, WordId i, WordId j);

// Unchecked variant for inner loops.
inline double squared_distance(std::span<const double> a,
                               std::span<const double> b) {
  double acc = 0.0;
  for (std::size_t k = 0; k < a.size(); ++k) {
    const double diff = a[k] - b[k];
    acc += diff * diff;
  }
  return acc;
}

struct Embeddings {
  Vocabulary vocab;
  EmbeddingMatrix matrix;
};

enum class EmbeddingFormat { kText, kBinary };

std::optional<EmbeddingFormat> parse_embedding_format(std::string_view name);

// Reads a word2vec file. Duplicate tokens keep their first occurrence.
// The header count is an upper bound when duplicates are skipped.
Embeddings load_embeddings(const std::filesystem::path& path,
                           EmbeddingFormat format);
Embeddings read_embeddings_text(std::istream& in);
Embeddings read_embeddings_binary(std::istream& in);

// Full-precision text writer; read_embeddings_text() reproduces the
// values bit-for-bit.
void write_embeddings_text(std::ostream& out, const Embeddings& emb);
void write_embeddings_binary(std::ostream& out, const Embeddings& emb);

// Keeps only the listed words, in the given order. The returned vector maps
// each old id to its new id, or to kNoWord when dropped.
inline constexpr WordId kNoWord = static_cast<WordId>(-1);

struct RestrictedEmbeddings {
  Embeddings embeddings;
  std::vector<WordId> old_to_new;
};
RestrictedEmbeddings restrict_embeddings(const Embeddings& emb,
                                         std::span<const WordId> keep);

}  // namespace relwmd

#endif  // RELWMD_EMBEDDINGS_H_
