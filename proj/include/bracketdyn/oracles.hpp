#pragma once

#include <cstddef>
#include <cstdint>
#include <optional>
#include <span>
#include <stdexcept>
#include <utility>
#include <vector>

#include "bracketdyn/paren.hpp"
#include "bracketdyn/plain_forest.hpp"

namespace bracketdyn::oracle {

// Deletions are always allowed. Between two strings an insertion is the
// same as a deletion on the other side, so only substitution changes ed.
struct EditCosts {
  bool allow_substitution = true;
  bool allow_insertion = true;

  static EditCosts full() { return {true, true}; }
  static EditCosts deletion_only() { return {false, false}; }
};

inline constexpr std::size_t kEdCap = 6000;
inline constexpr std::size_t kDedCap = 400;
inline constexpr std::size_t kTedCap = 4000;
inline constexpr std::size_t kAlignmentNodeCap = 60;

class CapExceeded : public std::length_error {
 public:
  using std::length_error::length_error;
};

std::size_t ed_exact(std::span<const Symbol> x, std::span<const Symbol> y, EditCosts costs);
std::size_t ed_exact(ParenView x, ParenView y, EditCosts costs);

// Cubic interval DP over pairings.
std::size_t ded_exact(ParenView x, EditCosts costs);

// Zhang-Shasha. Relabel costs 1, or 2 when substitution is disabled.
std::size_t ted_exact(const PlainForest& f, const PlainForest& g, EditCosts costs = EditCosts::full());

// Minimum cost over all tree alignments of str(f) and str(g), by enumeration.
std::size_t min_tree_alignment(const PlainForest& f, const PlainForest& g);

struct HeavyLight {
  std::vector<int> size;
  std::vector<int> heavy_depth;
  std::vector<bool> heavy;  // edge to the parent is heavy
};

// parent[v] = -1 for roots; any node order.
HeavyLight heavy_light_reference(std::span<const int> parent);

// Maximal [i, e] with every character height above h, or nothing when h(i) <= h.
std::optional<std::pair<std::size_t, std::size_t>> range_query_reference(
    std::span<const std::int64_t> char_heights, std::size_t i, std::int64_t h);

inline std::size_t floor_log2(std::uint64_t v) {
  std::size_t r = 0;
  while (v >>= 1) ++r;
  return r;
}

}  // namespace bracketdyn::oracle
