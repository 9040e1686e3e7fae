#pragma once

#include <algorithm>
#include <map>
#include <stdexcept>
#include <string>
#include <vector>

#include "cachecast/combinatorics.hpp"
#include "cachecast/library.hpp"

namespace cachecast {

// Descriptor of a contiguous bit range inside one subfile.
struct SegmentRef {
  SubfileId subfile;
  long long offset = 0;
  long long length = 0;

  bool operator==(const SegmentRef&) const = default;
};

struct MessageComponent {
  int user = 0;
  SegmentRef seg;

  bool operator==(const MessageComponent&) const = default;
};

// One multicast XOR transmission. Per covered configuration the message
// carries an ordered concatenation of user segments; the payload is the XOR
// of those concatenations, zero-padded to the longest.
struct XorMessage {
  std::vector<int> subset;  // configurations S covered by this XOR
  BitString payload;
  std::map<int, std::vector<MessageComponent>> parts;  // config -> components
  std::map<int, long long> recipient_bits;             // user -> segment bits
};

// The slice of a message a helper forwards to one user, with the message
// descriptors passed along verbatim.
struct ForwardedPortion {
  std::vector<int> subset;
  long long portion_offset = 0;  // bit position of the slice inside the payload
  BitString bits;
  std::map<int, std::vector<MessageComponent>> parts;
};

class DecodeError : public std::runtime_error {
 public:
  DecodeError(std::vector<int> subset, long long lo, long long hi)
      : std::runtime_error(format(subset, lo, hi)),
        subset_(std::move(subset)),
        lo_(lo),
        hi_(hi) {}

  const std::vector<int>& subset() const { return subset_; }
  long long range_lo() const { return lo_; }
  long long range_hi() const { return hi_; }

 private:
  static std::string format(const std::vector<int>& subset, long long lo, long long hi) {
    std::string s = "decode failed: missing bits [" + std::to_string(lo) + ", " +
                    std::to_string(hi) + ") of the message for S={";
    for (std::size_t i = 0; i < subset.size(); ++i) {
      if (i) s += ",";
      s += std::to_string(subset[i]);
    }
    s += "}";
    return s;
  }

  std::vector<int> subset_;
  long long lo_ = 0;
  long long hi_ = 0;
};

namespace detail {

inline BitString segment_bits(const FileLibrary& lib, std::uint64_t pieces,
                              const SegmentRef& seg) {
  const long long sub_len = subfile_bits(lib.params, pieces);
  if (seg.offset < 0 || seg.length < 0 || seg.offset + seg.length > sub_len) {
    throw std::invalid_argument("segment range outside its subfile");
  }
  BitString whole = subfile_slice(lib, pieces, seg.subfile.file, seg.subfile.index_set);
  return BitString(whole.begin() + seg.offset, whole.begin() + seg.offset + seg.length);
}

}  // namespace detail

// Build the XOR message for configuration subset S from per-user segments.
// `helper_users` bounds who may appear; `group_of` maps users to
// configurations. Components are concatenated per configuration in ascending
// (user, offset) order.
inline XorMessage encode_group_xor(const FileLibrary& lib, const CacheScheme& scheme,
                                   const std::vector<int>& helper_users,
                                   const std::vector<int>& group_of,
                                   std::vector<MessageComponent> segments,
                                   const std::vector<int>& subset) {
  XorMessage msg;
  msg.subset = subset;
  std::stable_sort(segments.begin(), segments.end(),
                   [](const MessageComponent& a, const MessageComponent& b) {
                     if (a.user != b.user) return a.user < b.user;
                     return a.seg.offset < b.seg.offset;
                   });
  for (const auto& c : segments) {
    if (std::find(helper_users.begin(), helper_users.end(), c.user) == helper_users.end()) {
      throw std::invalid_argument("encode_group_xor: user " + std::to_string(c.user) +
                                  " is not served by this helper");
    }
    const int g = group_of.at(static_cast<std::size_t>(c.user));
    if (!subset_contains(subset, g)) {
      throw std::invalid_argument("encode_group_xor: segment of configuration " +
                                  std::to_string(g) + " outside S");
    }
    msg.parts[g].push_back(c);
    msg.recipient_bits[c.user] += c.seg.length;
  }
  long long payload_len = 0;
  for (const auto& [g, comps] : msg.parts) {
    long long len = 0;
    for (const auto& c : comps) len += c.seg.length;
    payload_len = std::max(payload_len, len);
  }
  msg.payload.assign(static_cast<std::size_t>(payload_len), 0);
  const std::uint64_t pieces = scheme.subfile_count();
  for (const auto& [g, comps] : msg.parts) {
    long long pos = 0;
    for (const auto& c : comps) {
      BitString bits = detail::segment_bits(lib, pieces, c.seg);
      xor_range(msg.payload, pos, bits, 0, c.seg.length);
      pos += c.seg.length;
    }
  }
  return msg;
}

// Slice of `msg` covering every segment of `user` (contiguous by the ordering
// invariant), plus the descriptors needed to cache interference out.
inline ForwardedPortion forward_portion(const XorMessage& msg, int user,
                                        const std::vector<int>& group_of) {
  const int g = group_of.at(static_cast<std::size_t>(user));
  auto it = msg.parts.find(g);
  if (it == msg.parts.end()) {
    throw std::invalid_argument("forward_portion: user's configuration not in message");
  }
  long long pos = 0, lo = -1, hi = -1;
  for (const auto& c : it->second) {
    if (c.user == user) {
      if (lo < 0) lo = pos;
      hi = pos + c.seg.length;
    }
    pos += c.seg.length;
  }
  if (lo < 0) throw std::invalid_argument("forward_portion: user has no segment in message");
  ForwardedPortion p;
  p.subset = msg.subset;
  p.portion_offset = lo;
  p.bits.assign(msg.payload.begin() + lo, msg.payload.begin() + hi);
  p.parts = msg.parts;
  return p;
}

using UserCache = std::map<SubfileId, BitString>;

// Prefetched contents of one cache configuration.
inline UserCache build_user_cache(const FileLibrary& lib, const CacheScheme& scheme,
                                  int config) {
  UserCache cache;
  for (const SubfileId& id : build_cache_configuration(scheme, config, lib.params)) {
    cache[id] = subfile_slice(lib, scheme.subfile_count(), id.file, id.index_set);
  }
  return cache;
}

// Reconstruct the demanded file from cached subfiles plus forwarded portions.
// Every needed subfile must be fully covered by received segments; gaps raise
// DecodeError naming the message subset and missing bit range.
inline BitString decode_at_user(const CacheScheme& scheme, const LibraryParams& params,
                                int user, int group, int demand, const UserCache& cache,
                                const std::vector<ForwardedPortion>& received) {
  const std::uint64_t pieces = scheme.subfile_count();
  const long long sub_len = subfile_bits(params, pieces);
  BitString file;
  file.reserve(static_cast<std::size_t>(params.file_bits));
  for (int r = 0; r < static_cast<int>(scheme.index_sets.size()); ++r) {
    const std::vector<int>& T = scheme.index_sets[r];
    if (subset_contains(T, group)) {
      auto it = cache.find(SubfileId{demand, r});
      if (it == cache.end()) {
        throw std::runtime_error("decode_at_user: cache missing a prefetched subfile");
      }
      file.insert(file.end(), it->second.begin(), it->second.end());
      continue;
    }
    const std::vector<int> S = subset_with(T, group);
    BitString buf(static_cast<std::size_t>(sub_len), 0);
    std::vector<std::uint8_t> covered(static_cast<std::size_t>(sub_len), 0);
    for (const ForwardedPortion& p : received) {
      if (p.subset != S) continue;
      auto pit = p.parts.find(group);
      if (pit == p.parts.end()) continue;
      long long pos = 0;
      for (const MessageComponent& c : pit->second) {
        if (c.user != user) {
          pos += c.seg.length;
          continue;
        }
        if (c.seg.subfile != SubfileId{demand, r}) {
          throw std::runtime_error("decode_at_user: portion names an unexpected subfile");
        }
        if (pos < p.portion_offset ||
            pos + c.seg.length > p.portion_offset + static_cast<long long>(p.bits.size())) {
          throw std::runtime_error("decode_at_user: forwarded slice does not cover segment");
        }
        BitString seg(p.bits.begin() + (pos - p.portion_offset),
                      p.bits.begin() + (pos - p.portion_offset) + c.seg.length);
        // Cache out every other configuration's contribution overlapping
        // [pos, pos + length) of the payload.
        for (const auto& [other, comps] : p.parts) {
          if (other == group) continue;
          long long q = 0;
          for (const MessageComponent& oc : comps) {
            const long long lo = std::max(pos, q);
            const long long hi = std::min(pos + c.seg.length, q + oc.seg.length);
            if (lo < hi) {
              auto cit = cache.find(oc.seg.subfile);
              if (cit == cache.end()) {
                throw std::runtime_error(
                    "decode_at_user: interference subfile absent from cache");
              }
              xor_range(seg, lo - pos, cit->second, oc.seg.offset + (lo - q), hi - lo);
            }
            q += oc.seg.length;
          }
        }
        if (c.seg.offset + c.seg.length > sub_len) {
          throw std::runtime_error("decode_at_user: segment outside subfile");
        }
        for (long long i = 0; i < c.seg.length; ++i) {
          buf[static_cast<std::size_t>(c.seg.offset + i)] = seg[static_cast<std::size_t>(i)];
          covered[static_cast<std::size_t>(c.seg.offset + i)] = 1;
        }
        pos += c.seg.length;
      }
    }
    for (long long i = 0; i < sub_len; ++i) {
      if (!covered[static_cast<std::size_t>(i)]) {
        long long j = i;
        while (j < sub_len && !covered[static_cast<std::size_t>(j)]) ++j;
        throw DecodeError(S, i, j);
      }
    }
    file.insert(file.end(), buf.begin(), buf.end());
  }
  return file;
}

// Canonical one-user-per-configuration XOR multicast: one message per
// (t+1)-subset of users, each XORing whole subfiles.
inline std::vector<XorMessage> man_xor_messages(const FileLibrary& lib,
                                                const DemandVector& demands, int t) {
  const int users = static_cast<int>(demands.size());
  if (t < 0 || t > users) throw std::invalid_argument("man_xor_messages: t outside [0, K]");
  std::vector<XorMessage> out;
  if (t == users) return out;
  const std::uint64_t pieces = binomial(users, t);
  const long long len = subfile_bits(lib.params, pieces);
  std::vector<int> identity(users);
  for (int k = 0; k < users; ++k) identity[k] = k;
  CacheScheme user_scheme;
  user_scheme.configs = users;
  user_scheme.replication = t;
  user_scheme.index_sets = k_subsets(users, t);
  for (const std::vector<int>& S : k_subsets(users, t + 1)) {
    std::vector<MessageComponent> segs;
    for (int k : S) {
      const int rank = static_cast<int>(subset_rank(subset_without(S, k), users));
      segs.push_back({k, SegmentRef{{demands[k], rank}, 0, len}});
    }
    out.push_back(encode_group_xor(lib, user_scheme, S, identity, segs, S));
  }
  return out;
}

// Worst-case normalized delivery load of the one-user-per-configuration
// scheme: (K - t) / (1 + t) subfile units of F bits each over the shared link.
inline double man_load(int users, int t) {
  if (t < 0 || t > users) throw std::invalid_argument("man_load: t outside [0, K]");
  return static_cast<double>(users - t) / static_cast<double>(1 + t);
}

}  // namespace cachecast
