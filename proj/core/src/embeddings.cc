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

#include "relwmd/embeddings.h"

#include <bit>
#include <charconv>
#include <cmath>
#include <fstream>
#include <istream>
#include <ostream>

namespace relwmd {

namespace {

std::string line_error(std::size_t line_no, const std::string& what) {
  return "line " + std::to_string(line_no) + ": " + what;
}

// Splits on runs of ASCII whitespace.
std::vector<std::string_view> split_ws(std::string_view s) {
  std::vector<std::string_view> out;
  std::size_t i = 0;
  while (i < s.size()) {
    while (i < s.size() && (s[i] == ' ' || s[i] == '\t' || s[i] == '\r')) ++i;
    std::size_t j = i;
    while (j < s.size() && s[j] != ' ' && s[j] != '\t' && s[j] != '\r') ++j;
    if (j > i) out.push_back(s.substr(i, j - i));
    i = j;
  }
  return out;
}

template <typename T>
bool parse_number(std::string_view s, T& out) {
  const char* end = s.data() + s.size();
  auto [ptr, ec] = std::from_chars(s.data(), end, out);
  return ec == std::errc() && ptr == end;
}

struct Header {
  std::size_t n = 0;
  std::size_t d = 0;
};

Header parse_header(const std::string& line) {
  const auto fields = split_ws(line);
  Header h;
  if (fields.size() != 2 || !parse_number(fields[0], h.n) ||
      !parse_number(fields[1], h.d) || h.n == 0 || h.d == 0) {
    throw ParseError(line_error(1, "malformed header, expected \"n d\""));
  }
  return h;
}

Embeddings finish(Vocabulary vocab, std::size_t d, std::vector<double> data) {
  const std::size_t n = vocab.size();
  return Embeddings{std::move(vocab), EmbeddingMatrix(n, d, std::move(data))};
}

}  // namespace

Vocabulary::Vocabulary(std::vector<std::string> tokens) {
  tokens_.reserve(tokens.size());
  for (auto& t : tokens) {
    if (!add(std::move(t))) {
      throw std::invalid_argument("duplicate token in vocabulary");
    }
  }
}

std::optional<WordId> Vocabulary::add(std::string token) {
  if (index_.contains(token)) return std::nullopt;
  const auto id = static_cast<WordId>(tokens_.size());
  index_.emplace(token, id);
  tokens_.push_back(std::move(token));
  return id;
}

std::optional<WordId> Vocabulary::find(std::string_view token) const {
  auto it = index_.find(token);
  if (it == index_.end()) return std::nullopt;
  return it->second;
}

EmbeddingMatrix::EmbeddingMatrix(std::size_t n, std::size_t d,
                                 std::vector<double> data)
    : n_(n), d_(d), data_(std::move(data)) {
  if (data_.size() != n * d) {
    throw std::invalid_argument("embedding data size does not match n*d");
  }
  for (double v : data_) {
    if (!std::isfinite(v)) {
      throw std::invalid_argument("embedding matrix has a non-finite entry");
    }
  }
}

void EmbeddingMatrix::normalize_rows() {
  for (std::size_t i = 0; i < n_; ++i) {
    double* r = data_.data() + i * d_;
    double norm = 0.0;
    for (std::size_t k = 0; k < d_; ++k) norm += r[k] * r[k];
    norm = std::sqrt(norm);
    if (norm == 0.0) continue;
    for (std::size_t k = 0; k < d_; ++k) r[k] /= norm;
  }
}

double ground_distance(const EmbeddingMatrix& emb, WordId i, WordId j) {
  if (i >= emb.rows() || j >= emb.rows()) {
    throw std::out_of_range("word id out of range");
  }
  return std::sqrt(squared_distance(emb.row(i), emb.row(j)));
}

std::optional<EmbeddingFormat> parse_embedding_format(std::string_view name) {
  if (name == "text" || name == "txt") return EmbeddingFormat::kText;
  if (name == "binary" || name == "bin") return EmbeddingFormat::kBinary;
  return std::nullopt;
}

Embeddings read_embeddings_text(std::istream& in) {
  std::string line;
  if (!std::getline(in, line)) throw ParseError(line_error(1, "missing header"));
  const Header h = parse_header(line);

  Vocabulary vocab;
  std::vector<double> data;
  data.reserve(h.n * h.d);
  std::vector<double> row(h.d);

  std::size_t line_no = 1;
  std::size_t rows_seen = 0;
  while (std::getline(in, line)) {
    ++line_no;
    const auto fields = split_ws(line);
    if (fields.empty()) continue;
    if (rows_seen == h.n) {
      throw ParseError(line_error(line_no, "more rows than the header declares"));
    }
    if (fields.size() != h.d + 1) {
      throw ParseError(line_error(
          line_no, "expected " + std::to_string(h.d) + " values, found " +
                       std::to_string(fields.size() - 1)));
    }
    for (std::size_t k = 0; k < h.d; ++k) {
      if (!parse_number(fields[k + 1], row[k])) {
        throw ParseError(line_error(line_no, "bad number \"" +
                                                 std::string(fields[k + 1]) +
                                                 "\""));
      }
      if (!std::isfinite(row[k])) {
        throw ParseError(line_error(line_no, "non-finite value"));
      }
    }
    ++rows_seen;
    if (vocab.add(std::string(fields[0]))) {
      data.insert(data.end(), row.begin(), row.end());
    }
  }
  if (rows_seen != h.n) {
    throw ParseError(line_error(line_no, "expected " + std::to_string(h.n) +
                                             " rows, found " +
                                             std::to_string(rows_seen)));
  }
  return finish(std::move(vocab), h.d, std::move(data));
}

Embeddings read_embeddings_binary(std::istream& in) {
  static_assert(std::endian::native == std::endian::little,
                "binary embedding reader assumes a little-endian host");
  std::string line;
  if (!std::getline(in, line)) throw ParseError("offset 0: missing header");
  const Header h = parse_header(line);

  Vocabulary vocab;
  std::vector<double> data;
  data.reserve(h.n * h.d);
  std::vector<float> raw(h.d);

  for (std::size_t w = 0; w < h.n; ++w) {
    std::string token;
    int ch = in.get();
    while (ch == '\n' || ch == ' ' || ch == '\r') ch = in.get();
    while (ch != EOF && ch != ' ') {
      token.push_back(static_cast<char>(ch));
      ch = in.get();
    }
    const auto offset = static_cast<long long>(in.tellg());
    if (ch == EOF || token.empty()) {
      throw ParseError("offset " + std::to_string(offset) + ": truncated at word " +
                       std::to_string(w));
    }
    in.read(reinterpret_cast<char*>(raw.data()),
            static_cast<std::streamsize>(h.d * sizeof(float)));
    if (!in) {
      throw ParseError("offset " + std::to_string(offset) +
                       ": truncated vector for \"" + token + "\"");
    }
    for (float v : raw) {
      if (!std::isfinite(v)) {
        throw ParseError("offset " + std::to_string(offset) +
                         ": non-finite value for \"" + token + "\"");
      }
    }
    if (vocab.add(std::move(token))) {
      data.insert(data.end(), raw.begin(), raw.end());
    }
  }
  return finish(std::move(vocab), h.d, std::move(data));
}

Embeddings load_embeddings(const std::filesystem::path& path,
                           EmbeddingFormat format) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw ParseError("cannot open " + path.string());
  try {
    return format == EmbeddingFormat::kText ? read_embeddings_text(in)
                                            : read_embeddings_binary(in);
  } catch (const ParseError& e) {
    throw ParseError(path.string() + ": " + e.what());
  }
}

void write_embeddings_text(std::ostream& out, const Embeddings& emb) {
  const auto& m = emb.matrix;
  out << m.rows() << ' ' << m.dim() << '\n';
  char buf[64];
  for (std::size_t i = 0; i < m.rows(); ++i) {
    out << emb.vocab.token(static_cast<WordId>(i));
    for (double v : m.row(static_cast<WordId>(i))) {
      auto [ptr, ec] = std::to_chars(buf, buf + sizeof(buf), v);
      out << ' ' << std::string_view(buf, static_cast<std::size_t>(ptr - buf));
    }
    out << '\n';
  }
}

void write_embeddings_binary(std::ostream& out, const Embeddings& emb) {
  const auto& m = emb.matrix;
  out << m.rows() << ' ' << m.dim() << '\n';
  std::vector<float> raw(m.dim());
  for (std::size_t i = 0; i < m.rows(); ++i) {
    out << emb.vocab.token(static_cast<WordId>(i)) << ' ';
    const auto r = m.row(static_cast<WordId>(i));
    for (std::size_t k = 0; k < r.size(); ++k) raw[k] = static_cast<float>(r[k]);
    out.write(reinterpret_cast<const char*>(raw.data()),
              static_cast<std::streamsize>(raw.size() * sizeof(float)));
    out << '\n';
  }
}

RestrictedEmbeddings restrict_embeddings(const Embeddings& emb,
                                         std::span<const WordId> keep) {
  const std::size_t d = emb.matrix.dim();
  RestrictedEmbeddings out;
  out.old_to_new.assign(emb.vocab.size(), kNoWord);
  std::vector<double> data;
  data.reserve(keep.size() * d);
  for (WordId old_id : keep) {
    if (old_id >= emb.vocab.size()) {
      throw std::out_of_range("restrict_embeddings: word id out of range");
    }
    auto new_id = out.embeddings.vocab.add(emb.vocab.token(old_id));
    if (!new_id) continue;
    out.old_to_new[old_id] = *new_id;
    const auto r = emb.matrix.row(old_id);
    data.insert(data.end(), r.begin(), r.end());
  }
  const std::size_t n = out.embeddings.vocab.size();
  out.embeddings.matrix = EmbeddingMatrix(n, d, std::move(data));
  return out;
}

}  // namespace relwmd
