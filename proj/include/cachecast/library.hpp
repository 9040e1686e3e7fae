#pragma once

#include <cmath>
#include <cstdint>
#include <stdexcept>
#include <string>
#include <vector>

#include "cachecast/combinatorics.hpp"
#include "cachecast/rng.hpp"

namespace cachecast {

// Bit sequences are stored one bit per byte; delivery payloads at desk scale
// are a few kilobits, so clarity wins over packing.
using BitString = std::vector<std::uint8_t>;

inline BitString random_bits(Rng& rng, long long n) {
  BitString b(static_cast<std::size_t>(n));
  for (auto& x : b) x = static_cast<std::uint8_t>(rng.next_u64() & 1u);
  return b;
}

inline void xor_range(BitString& dst, long long dst_off, const BitString& src,
                      long long src_off, long long len) {
  for (long long i = 0; i < len; ++i) {
    dst[static_cast<std::size_t>(dst_off + i)] ^=
        src[static_cast<std::size_t>(src_off + i)];
  }
}

struct LibraryParams {
  int files = 0;             // N
  long long file_bits = 0;   // F
  double cache_files = 0.0;  // M, in units of files

  double mu() const { return files > 0 ? cache_files / files : 0.0; }
};

// Subpacketization plan: replication factor and the index sets that name the
// subfiles W_{i,T}.
struct CacheScheme {
  int configs = 0;      // L cache configurations
  int replication = 0;  // t' = L * M / N
  std::vector<std::vector<int>> index_sets;  // all t'-subsets of [L], lex order

  std::uint64_t subfile_count() const { return binomial(configs, replication); }
};

inline CacheScheme subpacketize(const LibraryParams& p, int configs) {
  if (configs <= 0) throw std::invalid_argument("subpacketize: configs must be positive");
  if (p.files <= 0) throw std::invalid_argument("subpacketize: params.files must be positive");
  const double t_real = static_cast<double>(configs) * p.cache_files / p.files;
  const double t_round = std::round(t_real);
  if (std::abs(t_real - t_round) > 1e-9 || t_round < 0.0 ||
      t_round > static_cast<double>(configs)) {
    throw std::invalid_argument(
        "subpacketize: L*M/N must be an integer in [0, L]; got L=" +
        std::to_string(configs) + " M=" + std::to_string(p.cache_files) +
        " N=" + std::to_string(p.files));
  }
  CacheScheme s;
  s.configs = configs;
  s.replication = static_cast<int>(t_round);
  s.index_sets = k_subsets(configs, s.replication);
  return s;
}

struct SubfileId {
  int file = 0;
  int index_set = 0;  // lexicographic rank within CacheScheme::index_sets

  bool operator==(const SubfileId&) const = default;
  auto operator<=>(const SubfileId&) const = default;
};

// Contents of cache configuration `config`: every subfile whose index set
// contains the configuration, for every file.
inline std::vector<SubfileId> build_cache_configuration(const CacheScheme& s,
                                                        int config,
                                                        const LibraryParams& p) {
  if (config < 0 || config >= s.configs) {
    throw std::invalid_argument("build_cache_configuration: config out of range");
  }
  std::vector<SubfileId> out;
  for (int r = 0; r < static_cast<int>(s.index_sets.size()); ++r) {
    if (!subset_contains(s.index_sets[r], config)) continue;
    for (int f = 0; f < p.files; ++f) out.push_back({f, r});
  }
  return out;
}

struct CacheAssignment {
  int users = 0;
  int configs = 0;
  std::vector<int> group_of;              // user -> configuration
  std::vector<std::vector<int>> members;  // configuration -> ascending users

  bool operator==(const CacheAssignment&) const = default;
};

// Independent uniform config per user, as a decentralized placement would draw.
inline CacheAssignment assign_caches(int users, int configs, std::uint64_t seed) {
  if (users < 0 || configs <= 0) throw std::invalid_argument("assign_caches: bad sizes");
  CacheAssignment a;
  a.users = users;
  a.configs = configs;
  a.group_of.resize(users);
  a.members.assign(configs, {});
  Rng rng(seed);
  for (int k = 0; k < users; ++k) {
    int g = static_cast<int>(rng.uniform_int(static_cast<std::uint64_t>(configs)));
    a.group_of[k] = g;
    a.members[g].push_back(k);
  }
  return a;
}

using DemandVector = std::vector<int>;  // user -> demanded file

inline DemandVector worst_case_demands(int users, int files) {
  DemandVector d(users);
  for (int k = 0; k < users; ++k) d[k] = k % files;
  return d;
}

// Concrete file contents, deterministically derived from a seed.
struct FileLibrary {
  LibraryParams params;
  std::vector<BitString> files;
};

inline FileLibrary make_random_library(const LibraryParams& p, std::uint64_t seed) {
  FileLibrary lib;
  lib.params = p;
  Rng rng(seed);
  lib.files.reserve(p.files);
  for (int f = 0; f < p.files; ++f) lib.files.push_back(random_bits(rng, p.file_bits));
  return lib;
}

// Bits of subfile W_{file, T} where T has the given rank among `pieces` equal
// slices. Requires file_bits divisible by the piece count.
inline long long subfile_bits(const LibraryParams& p, std::uint64_t pieces) {
  if (pieces == 0) throw std::invalid_argument("subfile_bits: zero pieces");
  if (p.file_bits % static_cast<long long>(pieces) != 0) {
    throw std::invalid_argument("file_bits=" + std::to_string(p.file_bits) +
                                " not divisible by subfile count " +
                                std::to_string(pieces));
  }
  return p.file_bits / static_cast<long long>(pieces);
}

inline BitString subfile_slice(const FileLibrary& lib, std::uint64_t pieces,
                               int file, int rank) {
  const long long len = subfile_bits(lib.params, pieces);
  const long long off = len * rank;
  const BitString& src = lib.files.at(static_cast<std::size_t>(file));
  return BitString(src.begin() + off, src.begin() + off + len);
}

}  // namespace cachecast
