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

#include <array>
#include <bit>
#include <charconv>
#include <cstring>
#include <fstream>
#include <istream>
#include <ostream>

#include "relwmd/cache.h"

namespace relwmd {

namespace {

static_assert(std::endian::native == std::endian::little,
              "cache files are little-endian");

constexpr std::array<char, 8> kMagic = {'R', 'W', 'M', 'D', 'C', 'A', 'C', 'H'};
constexpr std::uint32_t kVersion = 1;
constexpr std::uint32_t kFlagClustered = 1u << 0;
constexpr std::uint32_t kFlagFallback = 1u << 1;

template <typename T>
void put(std::ostream& out, T v) {
  out.write(reinterpret_cast<const char*>(&v), sizeof(T));
}

template <typename T>
T get(std::istream& in) {
  T v{};
  in.read(reinterpret_cast<char*>(&v), sizeof(T));
  if (!in) {
    throw ParseError("cache file truncated near offset " +
                     std::to_string(static_cast<long long>(in.tellg())));
  }
  return v;
}

std::string full_precision(double v) {
  char buf[64];
  auto [ptr, ec] = std::to_chars(buf, buf + sizeof(buf), v);
  return std::string(buf, ptr);
}

}  // namespace

void write_cache(std::ostream& out, const RelatedCache& cache) {
  const auto& info = cache.info();
  out.write(kMagic.data(), kMagic.size());
  put<std::uint32_t>(out, kVersion);
  put<std::uint64_t>(out, cache.num_words());
  put<std::uint64_t>(out, cache.r());
  std::uint32_t flags = 0;
  if (info.clustered) flags |= kFlagClustered;
  if (info.c_max_fallback) flags |= kFlagFallback;
  put<std::uint32_t>(out, flags);
  put<double>(out, cache.c_max());
  put<std::uint64_t>(out, info.k);
  put<std::uint32_t>(out, info.kmeans_iters);
  put<std::uint64_t>(out, info.seed);
  put<double>(out, info.accumulated_sum);
  put<std::uint64_t>(out, info.accumulated_count);
  put<double>(out, info.sampled_sum);
  put<std::uint64_t>(out, info.sampled_count);
  for (std::size_t w = 0; w < cache.num_words(); ++w) {
    const auto list = cache.neighbors(static_cast<WordId>(w));
    put<std::uint32_t>(out, static_cast<std::uint32_t>(list.size()));
    for (const auto& nb : list) {
      put<std::uint32_t>(out, nb.word);
      put<double>(out, nb.distance);
    }
  }
}

RelatedCache read_cache(std::istream& in) {
  std::array<char, 8> magic{};
  in.read(magic.data(), magic.size());
  if (!in || magic != kMagic) throw ParseError("offset 0: not a relwmd cache file");
  const auto version = get<std::uint32_t>(in);
  if (version != kVersion) {
    throw ParseError("unsupported cache version " + std::to_string(version));
  }
  const auto n = get<std::uint64_t>(in);
  const auto r = get<std::uint64_t>(in);
  const auto flags = get<std::uint32_t>(in);
  const auto c_max = get<double>(in);
  CacheInfo info;
  info.clustered = (flags & kFlagClustered) != 0;
  info.c_max_fallback = (flags & kFlagFallback) != 0;
  info.k = get<std::uint64_t>(in);
  info.kmeans_iters = get<std::uint32_t>(in);
  info.seed = get<std::uint64_t>(in);
  info.accumulated_sum = get<double>(in);
  info.accumulated_count = get<std::uint64_t>(in);
  info.sampled_sum = get<double>(in);
  info.sampled_count = get<std::uint64_t>(in);

  std::vector<std::vector<Neighbor>> lists(n);
  for (auto& list : lists) {
    const auto count = get<std::uint32_t>(in);
    if (count > r) throw ParseError("cache list longer than r");
    list.resize(count);
    for (auto& nb : list) {
      nb.word = get<std::uint32_t>(in);
      nb.distance = get<double>(in);
      if (nb.word >= n) throw ParseError("cache neighbor id out of range");
    }
  }
  return RelatedCache(r, std::move(lists), c_max, info);
}

void save_cache(const std::filesystem::path& path, const RelatedCache& cache) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw std::runtime_error("cannot write " + path.string());
  write_cache(out, cache);
  if (!out) throw std::runtime_error("write failed: " + path.string());
}

RelatedCache load_cache(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw ParseError("cannot open " + path.string());
  try {
    return read_cache(in);
  } catch (const ParseError& e) {
    throw ParseError(path.string() + ": " + e.what());
  }
}

void dump_cache_text(std::ostream& out, const RelatedCache& cache,
                     const Vocabulary* vocab) {
  const auto& info = cache.info();
  out << "n " << cache.num_words() << "\nr " << cache.r() << "\nc_max "
      << full_precision(cache.c_max()) << "\nmode "
      << (info.clustered ? "clustered" : "exact") << "\nk " << info.k
      << "\nfallback " << (info.c_max_fallback ? 1 : 0) << "\naccumulated "
      << full_precision(info.accumulated_sum) << ' ' << info.accumulated_count
      << "\nsampled " << full_precision(info.sampled_sum) << ' '
      << info.sampled_count << '\n';
  auto name = [&](WordId w) {
    return vocab ? vocab->token(w) : std::to_string(w);
  };
  for (std::size_t w = 0; w < cache.num_words(); ++w) {
    out << name(static_cast<WordId>(w));
    for (const auto& nb : cache.neighbors(static_cast<WordId>(w))) {
      out << ' ' << name(nb.word) << ':' << full_precision(nb.distance);
    }
    out << '\n';
  }
}

}  // namespace relwmd
