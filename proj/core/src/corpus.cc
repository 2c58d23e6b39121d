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

#include "relwmd/corpus.h"

#include <algorithm>
#include <charconv>
#include <fstream>
#include <istream>

namespace relwmd {

namespace {

std::vector<std::string_view> tokenize(std::string_view s) {
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

std::string at_line(std::size_t line_no, const std::string& what) {
  return "line " + std::to_string(line_no) + ": " + what;
}

std::ifstream open_or_throw(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw ParseError("cannot open " + path.string());
  return in;
}

}  // namespace

Document Document::from_counts(
    std::vector<std::pair<WordId, std::uint64_t>> counts) {
  std::sort(counts.begin(), counts.end());
  Document doc;
  for (const auto& [w, c] : counts) {
    if (c == 0) continue;
    if (!doc.words_.empty() && doc.words_.back() == w) {
      doc.counts_.back() += c;
    } else {
      doc.words_.push_back(w);
      doc.counts_.push_back(c);
    }
    doc.total_ += c;
  }
  if (doc.words_.empty()) {
    throw EmptyDocumentError("document has no in-vocabulary tokens");
  }
  doc.weights_.resize(doc.words_.size());
  doc.index_.reserve(doc.words_.size());
  const auto total = static_cast<double>(doc.total_);
  for (std::size_t i = 0; i < doc.words_.size(); ++i) {
    doc.weights_[i] = static_cast<double>(doc.counts_[i]) / total;
    doc.index_.emplace(doc.words_[i], static_cast<std::uint32_t>(i));
  }
  return doc;
}

Document Document::remapped(std::span<const WordId> old_to_new) const {
  std::vector<std::pair<WordId, std::uint64_t>> counts;
  counts.reserve(words_.size());
  for (std::size_t i = 0; i < words_.size(); ++i) {
    if (words_[i] >= old_to_new.size()) continue;
    const WordId w = old_to_new[words_[i]];
    if (w != kNoWord) counts.emplace_back(w, counts_[i]);
  }
  return from_counts(std::move(counts));
}

Document to_nbow(std::span<const std::string_view> tokens,
                 const Vocabulary& vocab) {
  std::vector<std::pair<WordId, std::uint64_t>> counts;
  counts.reserve(tokens.size());
  for (auto t : tokens) {
    if (auto id = vocab.find(t)) counts.emplace_back(*id, 1);
  }
  return Document::from_counts(std::move(counts));
}

Document to_nbow(std::string_view text, const Vocabulary& vocab) {
  const auto tokens = tokenize(text);
  return to_nbow(std::span<const std::string_view>(tokens), vocab);
}

Corpus read_labeled_corpus(std::istream& in, const Vocabulary& vocab,
                           Split split, std::vector<std::string> class_names) {
  Corpus corpus;
  corpus.class_names = std::move(class_names);
  std::unordered_map<std::string, ClassId> class_ids;
  for (std::size_t i = 0; i < corpus.class_names.size(); ++i) {
    class_ids.emplace(corpus.class_names[i], static_cast<ClassId>(i));
  }

  std::string line;
  std::size_t line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line.empty()) throw ParseError(at_line(line_no, "empty line"));
    const auto tab = line.find('\t');
    if (tab == std::string::npos) {
      throw ParseError(at_line(line_no, "missing tab between label and text"));
    }
    std::string label = line.substr(0, tab);
    Document doc;
    try {
      doc = to_nbow(std::string_view(line).substr(tab + 1), vocab);
    } catch (const EmptyDocumentError&) {
      throw ParseError(at_line(line_no, "document has no in-vocabulary tokens"));
    }
    auto [it, inserted] =
        class_ids.emplace(label, static_cast<ClassId>(corpus.class_names.size()));
    if (inserted) corpus.class_names.push_back(std::move(label));
    corpus.docs.push_back(std::move(doc));
    corpus.labels.push_back(it->second);
    corpus.split.push_back(split);
  }
  return corpus;
}

Corpus load_labeled_corpus(const std::filesystem::path& path,
                           const Vocabulary& vocab, Split split,
                           std::vector<std::string> class_names) {
  auto in = open_or_throw(path);
  try {
    return read_labeled_corpus(in, vocab, split, std::move(class_names));
  } catch (const ParseError& e) {
    throw ParseError(path.string() + ": " + e.what());
  }
}

Corpus read_unlabeled_corpus(std::istream& in, const Vocabulary& vocab) {
  Corpus corpus;
  std::string line;
  std::size_t line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    std::string_view text = line;
    if (const auto tab = text.find('\t'); tab != std::string_view::npos) {
      text.remove_prefix(tab + 1);
    }
    try {
      corpus.docs.push_back(to_nbow(text, vocab));
    } catch (const EmptyDocumentError&) {
      throw ParseError(at_line(line_no, "document has no in-vocabulary tokens"));
    }
    corpus.split.push_back(Split::kTest);
  }
  return corpus;
}

Corpus load_unlabeled_corpus(const std::filesystem::path& path,
                             const Vocabulary& vocab) {
  auto in = open_or_throw(path);
  try {
    return read_unlabeled_corpus(in, vocab);
  } catch (const ParseError& e) {
    throw ParseError(path.string() + ": " + e.what());
  }
}

TripletSet read_triplets(std::istream& in) {
  TripletSet out;
  std::string line;
  std::size_t line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    const auto fields = tokenize(line);
    if (fields.empty()) continue;
    if (fields.size() != 3) {
      throw ParseError(at_line(line_no, "expected three document indices"));
    }
    std::size_t v[3];
    for (int k = 0; k < 3; ++k) {
      const char* end = fields[k].data() + fields[k].size();
      auto [ptr, ec] = std::from_chars(fields[k].data(), end, v[k]);
      if (ec != std::errc() || ptr != end) {
        throw ParseError(at_line(line_no, "non-integer field \"" +
                                              std::string(fields[k]) + "\""));
      }
    }
    if (v[0] == v[1] || v[0] == v[2] || v[1] == v[2]) {
      throw ParseError(at_line(line_no, "triplet indices must be distinct"));
    }
    out.push_back({v[0], v[1], v[2]});
  }
  return out;
}

TripletSet load_triplets(const std::filesystem::path& path) {
  auto in = open_or_throw(path);
  try {
    return read_triplets(in);
  } catch (const ParseError& e) {
    throw ParseError(path.string() + ": " + e.what());
  }
}

void validate_triplets(const TripletSet& triplets, std::size_t num_docs) {
  for (std::size_t t = 0; t < triplets.size(); ++t) {
    const auto& x = triplets[t];
    if (x.a >= num_docs || x.b >= num_docs || x.c >= num_docs) {
      throw std::out_of_range("triplet " + std::to_string(t) +
                              " references a document index >= " +
                              std::to_string(num_docs));
    }
  }
}

std::vector<WordId> used_words(std::span<const Corpus* const> corpora) {
  std::vector<WordId> words;
  for (const Corpus* c : corpora) {
    for (const auto& d : c->docs) {
      words.insert(words.end(), d.words().begin(), d.words().end());
    }
  }
  std::sort(words.begin(), words.end());
  words.erase(std::unique(words.begin(), words.end()), words.end());
  return words;
}

}  // namespace relwmd
