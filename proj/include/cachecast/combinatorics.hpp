#pragma once

#include <cstdint>
#include <stdexcept>
#include <vector>

namespace cachecast {

// C(n, k) in exact integer arithmetic. Out-of-range k yields 0.
inline std::uint64_t binomial(int n, int k) {
  if (k < 0 || k > n || n < 0) return 0;
  if (n > 62) throw std::invalid_argument("binomial: n too large for exact 64-bit evaluation");
  if (k > n - k) k = n - k;
  std::uint64_t r = 1;
  for (int i = 1; i <= k; ++i) {
    r = r * static_cast<std::uint64_t>(n - k + i) / static_cast<std::uint64_t>(i);
  }
  return r;
}

// All k-element subsets of {0,...,n-1} in lexicographic order, each sorted ascending.
inline std::vector<std::vector<int>> k_subsets(int n, int k) {
  std::vector<std::vector<int>> out;
  if (k < 0 || k > n) return out;
  out.reserve(static_cast<std::size_t>(binomial(n, k)));
  std::vector<int> cur(k);
  for (int i = 0; i < k; ++i) cur[i] = i;
  if (k == 0) {
    out.push_back({});
    return out;
  }
  while (true) {
    out.push_back(cur);
    int i = k - 1;
    while (i >= 0 && cur[i] == n - k + i) --i;
    if (i < 0) break;
    ++cur[i];
    for (int j = i + 1; j < k; ++j) cur[j] = cur[j - 1] + 1;
  }
  return out;
}

// Lexicographic rank of a sorted k-subset of {0,...,n-1} within k_subsets(n, k).
inline std::uint64_t subset_rank(const std::vector<int>& subset, int n) {
  const int k = static_cast<int>(subset.size());
  std::uint64_t rank = 0;
  int prev = -1;
  for (int i = 0; i < k; ++i) {
    for (int v = prev + 1; v < subset[i]; ++v) {
      rank += binomial(n - 1 - v, k - 1 - i);
    }
    prev = subset[i];
  }
  return rank;
}

inline bool subset_contains(const std::vector<int>& subset, int v) {
  for (int x : subset) {
    if (x == v) return true;
    if (x > v) return false;
  }
  return false;
}

// Sorted subset minus one element (which must be present).
inline std::vector<int> subset_without(const std::vector<int>& subset, int v) {
  std::vector<int> out;
  out.reserve(subset.size());
  bool found = false;
  for (int x : subset) {
    if (x == v) {
      found = true;
      continue;
    }
    out.push_back(x);
  }
  if (!found) throw std::invalid_argument("subset_without: element not in subset");
  return out;
}

// Sorted subset plus one element (which must be absent).
inline std::vector<int> subset_with(const std::vector<int>& subset, int v) {
  std::vector<int> out;
  out.reserve(subset.size() + 1);
  bool placed = false;
  for (int x : subset) {
    if (x == v) throw std::invalid_argument("subset_with: element already in subset");
    if (!placed && x > v) {
      out.push_back(v);
      placed = true;
    }
    out.push_back(x);
  }
  if (!placed) out.push_back(v);
  return out;
}

}  // namespace cachecast
