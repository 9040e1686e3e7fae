#pragma once

#include <algorithm>
#include <cstdint>
#include <numeric>
#include <stdexcept>
#include <vector>

#include "cachecast/combinatorics.hpp"

namespace cachecast {

// Per-group user schedule: one row per caching group, one column per delivery
// round. Empty cells are -1. Static arrays are left-justified; dynamic append
// with a column floor can leave holes in earlier columns.
struct DeliveryArray {
  int group_count = 0;
  std::vector<int> row_group;           // row index -> caching group id
  std::vector<std::vector<int>> cells;  // [row][column] = user id or -1

  int columns() const { return cells.empty() ? 0 : static_cast<int>(cells[0].size()); }

  int row_of_group(int ell) const {
    for (int r = 0; r < static_cast<int>(row_group.size()); ++r) {
      if (row_group[r] == ell) return r;
    }
    throw std::invalid_argument("row_of_group: unknown group");
  }

  std::vector<int> occupancies() const {
    std::vector<int> occ(row_group.size(), 0);
    for (std::size_t r = 0; r < cells.size(); ++r) {
      for (int cell : cells[r]) occ[r] += cell >= 0 ? 1 : 0;
    }
    return occ;
  }

  int present_count(int col) const {
    int n = 0;
    for (const auto& row : cells) n += row[col] >= 0 ? 1 : 0;
    return n;
  }

  // (group, user) pairs of one column, by ascending row.
  std::vector<std::pair<int, int>> column_users(int col) const {
    std::vector<std::pair<int, int>> out;
    for (std::size_t r = 0; r < cells.size(); ++r) {
      if (cells[r][col] >= 0) out.emplace_back(row_group[r], cells[r][col]);
    }
    return out;
  }

  bool empty_from(int col) const {
    for (int j = col; j < columns(); ++j) {
      if (present_count(j) > 0) return false;
    }
    return true;
  }

  // Place user k of group ell in the leftmost column >= min_col whose row is
  // free, extending the array when every such column is taken.
  void append_user(int user, int ell, int min_col = 0) {
    const int r = row_of_group(ell);
    for (int j = std::max(min_col, 0); j < columns(); ++j) {
      if (cells[r][j] < 0) {
        cells[r][j] = user;
        return;
      }
    }
    for (auto& row : cells) row.push_back(-1);
    cells[r][columns() - 1] = user;
  }
};

// Rows hold the groups sorted by occupancy (largest first, ties by group id),
// users within a row ascending, rows left-justified and padded with -1.
inline DeliveryArray build_delivery_array(const std::vector<std::vector<int>>& members) {
  const int L = static_cast<int>(members.size());
  DeliveryArray arr;
  arr.group_count = L;
  std::vector<int> order(L);
  std::iota(order.begin(), order.end(), 0);
  std::stable_sort(order.begin(), order.end(), [&](int a, int b) {
    if (members[a].size() != members[b].size()) return members[a].size() > members[b].size();
    return a < b;
  });
  std::size_t cols = 0;
  for (const auto& g : members) cols = std::max(cols, g.size());
  arr.row_group = order;
  arr.cells.assign(L, std::vector<int>(cols, -1));
  for (int r = 0; r < L; ++r) {
    std::vector<int> users = members[order[r]];
    std::sort(users.begin(), users.end());
    for (std::size_t j = 0; j < users.size(); ++j) arr.cells[r][j] = users[j];
  }
  return arr;
}

// XOR packets needed to serve one round with `present` distinct groups.
inline std::uint64_t round_xor_count(int present, int L, int t_prime) {
  if (present < 0 || present > L) throw std::invalid_argument("round_xor_count: bad present count");
  return binomial(L, t_prime + 1) - binomial(L - present, t_prime + 1);
}

// Exact slot count of a full multiround delivery with the given occupancies.
inline std::uint64_t multiround_slots(std::vector<int> occupancies, int L, int t_prime) {
  if (static_cast<int>(occupancies.size()) != L) {
    throw std::invalid_argument("multiround_slots: need one occupancy per group");
  }
  std::sort(occupancies.begin(), occupancies.end(), std::greater<int>());
  std::uint64_t slots = 0;
  for (int r = 1; r <= L; ++r) {
    slots += static_cast<std::uint64_t>(occupancies[r - 1]) * binomial(L - r, t_prime);
  }
  return slots;
}

// Normalized load: slots divided by the subpacketization count.
inline double multiround_load(const std::vector<int>& occupancies, int L, int t_prime) {
  return static_cast<double>(multiround_slots(occupancies, L, t_prime)) /
         static_cast<double>(binomial(L, t_prime));
}

using EpochTable = std::vector<std::uint64_t>;

// Cumulative slot counts at which each column of the array completes.
inline EpochTable delivery_epochs(const DeliveryArray& arr, int t_prime) {
  EpochTable epochs;
  std::uint64_t acc = 0;
  for (int j = 0; j < arr.columns(); ++j) {
    acc += round_xor_count(arr.present_count(j), arr.group_count, t_prime);
    epochs.push_back(acc);
  }
  return epochs;
}

inline std::uint64_t array_slots(const DeliveryArray& arr, int t_prime) {
  EpochTable e = delivery_epochs(arr, t_prime);
  return e.empty() ? 0 : e.back();
}

}  // namespace cachecast
