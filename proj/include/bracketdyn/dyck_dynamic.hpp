#pragma once

#include <cstddef>
#include <cstdint>
#include <memory>
#include <random>
#include <string>
#include <unordered_map>
#include <vector>

#include "bracketdyn/dyck_reduction.hpp"
#include "bracketdyn/dyn_strings.hpp"
#include "bracketdyn/ed_backend.hpp"
#include "bracketdyn/height_forest.hpp"
#include "bracketdyn/paren.hpp"

namespace bracketdyn {

// Maintains reduce_hat(X) under edits. Each node of an implicit treap over X
// holds a handle to the reduced form of its subtree; a join cancels the
// longest run where the left part ends in openers that the right part closes.
class HatTree {
 public:
  explicit HatTree(ParenView x = {}, std::uint64_t seed = 0x4a7);

  std::size_t size() const { return root_ < 0 ? 0 : nodes_[root_].size; }
  void apply_edit(const CharEdit& e);
  StrHandle hat() const;  // owned by the tree; valid until the next edit
  ParenString hat_string() const { return strs_.materialize_parens(hat()); }
  StrCollection& strings() { return strs_; }
  ParenString text() const;

 private:
  struct Node {
    int l = -1, r = -1;
    std::uint32_t prio = 0;
    std::size_t size = 1;
    Paren sym{};
    StrHandle hat;
  };
  int make(Paren p);
  void pull(int t);
  StrHandle join(StrHandle a, StrHandle b);
  std::pair<int, int> split(int t, std::size_t k);
  int merge(int a, int b);
  int build(ParenView x, std::size_t lo, std::size_t hi);
  void collect(int t, ParenString& out) const;

  StrCollection strs_;
  std::vector<Node> nodes_;
  std::vector<int> free_;
  int root_ = -1;
  StrHandle empty_;
  std::mt19937_64 rng_;
};

enum class Strategy { heavy, large, small, combined };

Strategy parse_strategy(const std::string& s);
std::string to_string(Strategy s);

// floor(a / (4 f (3 + 2 lg a))) with lg of values below 2 taken as 1.
std::size_t epoch_length(std::size_t a, double f);

struct DyckCounters {
  std::size_t edits = 0;
  std::size_t epochs = 0;            // full recomputations
  std::size_t backend_calls = 0;
  std::size_t recomputed_heads = 0;  // heavy strategy: heavy strings re-measured
  std::size_t last_recomputed = 0;   // ... by the most recent edit
  std::size_t delta_records = 0;
  std::size_t last_delta = 0;
};

// Dynamic estimate of the Dyck distance (deletion-only by default) of a string
// under single-character edits.
class DyckSession {
 public:
  DyckSession(ParenView x, Strategy strategy, std::unique_ptr<EdBackend> backend,
              EdMode mode = EdMode::indel, std::uint64_t seed = 0x5e55);

  std::size_t apply(const CharEdit& e);
  std::size_t estimate() const { return a_; }
  std::size_t text_size() const { return n_; }
  ParenString text() const;
  Strategy strategy() const { return strategy_; }
  // For the combined strategy, the sub-strategy that produced the current epoch.
  Strategy active() const { return active_; }
  std::size_t epoch_remaining() const { return remaining_; }
  const DyckCounters& counters() const { return counters_; }
  const EdBackend& backend() const { return *backend_; }

 private:
  void heavy_init();
  void heavy_update(const CharEdit& e);
  void start_epoch();
  std::size_t large_estimate();
  std::size_t small_estimate();

  Strategy strategy_;
  Strategy active_;
  std::unique_ptr<EdBackend> backend_;
  BoundedKBackend bk_;
  EdMode mode_;
  std::size_t n_ = 0;
  std::size_t a_ = 0;
  std::size_t remaining_ = 0;
  DyckCounters counters_;

  std::unique_ptr<HeightForest> forest_;
  std::unordered_map<int, std::size_t> cached_;
  std::size_t sum_ = 0;

  ParenString x_;
  std::unique_ptr<HatTree> hat_;
};

}  // namespace bracketdyn
