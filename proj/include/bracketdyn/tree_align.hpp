#pragma once

#include <cstddef>
#include <utility>
#include <vector>

#include "bracketdyn/paren.hpp"
#include "bracketdyn/plain_forest.hpp"

namespace bracketdyn {

// Alignment of X (length nx) and Y (length ny) stored as its diagonal steps:
// matches are strictly increasing in both coordinates.
struct Alignment {
  std::size_t nx = 0, ny = 0;
  std::vector<std::pair<std::size_t, std::size_t>> matches;

  // Unit-step path from (0,0) to (nx,ny); deletions in X come before those in Y.
  std::vector<std::pair<std::size_t, std::size_t>> path() const;
  // Throws std::invalid_argument when the path breaks the step rule.
  static Alignment from_path(const std::vector<std::pair<std::size_t, std::size_t>>& path);
  static Alignment identity(std::size_t n);
  bool valid() const;
  // Non-diagonal steps plus mismatched diagonal steps.
  std::size_t cost(ParenView x, ParenView y) const;
  friend bool operator==(const Alignment&, const Alignment&) = default;
};

// Mismatched diagonal steps become a deletion on each side.
Alignment drop_substitutions(const Alignment& a, ParenView x, ParenView y);
// Optimal deletion-only alignment by the longest common subsequence DP.
Alignment optimal_deletion_alignment(ParenView x, ParenView y);

// Positions and heavy-light structure of a preorder forest.
struct ForestIndex {
  explicit ForestIndex(const PlainForest& f);
  std::size_t size() const { return parent.size(); }
  bool contains(int u, int v) const { return open[u] <= open[v] && close[v] <= close[u]; }
  bool proper_ancestor(int u, int v) const { return u != v && contains(u, v); }

  std::vector<int> parent;
  std::vector<std::size_t> open, close;
  std::vector<int> node_at;  // node owning each string position
  std::vector<int> sub_size, heavy_depth, heavy_child;
};

// |o(v) - o(v2)| + |c(v) - c(v2)|.
std::size_t width(const ForestIndex& f, int v, int v2);

enum class NodeClass { tree_aligned, deleted, partially_deleted, single_branch, multi_branch };
const char* to_string(NodeClass c);

struct NodeRef {
  int side = 0;  // 0 for F, 1 for G
  int node = -1;
  friend bool operator==(const NodeRef&, const NodeRef&) = default;
};

struct Chain {
  bool closing = false;
  std::vector<NodeRef> nodes;
};

struct MisalignmentReport {
  std::vector<NodeClass> f, g;
  std::vector<Chain> chains;
  std::vector<std::vector<NodeRef>> extended;
  std::size_t misaligned() const;
};

// Chains follow exact matches; classes use every diagonal step.
MisalignmentReport classify(const Alignment& a, const PlainForest& f, const PlainForest& g);

// Every node is either fully deleted or has both parentheses aligned to the
// twins of a single node.
bool is_tree_alignment(const Alignment& a, const PlainForest& f, const PlainForest& g);

struct RepairStats {
  std::size_t light_matches = 0;   // first case
  std::size_t deletions = 0;       // second case
  std::size_t cleanup = 0;         // nodes still misaligned after the heavy path sweep
  std::size_t fallbacks = 0;       // first case rejected by a structural check
  std::size_t locality_violations = 0;
};

// f and g carry modified labels. Substitutions are dropped first.
Alignment tree_align_repair(const Alignment& a, const PlainForest& f, const PlainForest& g,
                            RepairStats* stats = nullptr, bool check_locality = false);

struct SqrtResult {
  std::size_t ed = 0;           // full edit distance of the modified strings
  std::size_t ed_deletion = 0;  // cost of the optimal deletion-only alignment
  std::size_t repaired_cost = 0;
  std::size_t ted_upper = 0;    // repaired_cost / 2
  Alignment alignment;          // repaired, over the modified strings
  RepairStats stats;
};

SqrtResult static_sqrt_pipeline(const PlainForest& f, const PlainForest& g);

// Two forests whose modified strings are a few edits apart although every
// tree alignment deletes two blocks of `block` nodes (default ceil(sqrt(n)/8)).
std::pair<PlainForest, PlainForest> chain_gap_family(std::size_t n, std::size_t block = 0);

}  // namespace bracketdyn
