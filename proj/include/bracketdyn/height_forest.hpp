#pragma once

#include <cstddef>
#include <cstdint>
#include <optional>
#include <string>
#include <unordered_map>
#include <unordered_set>
#include <utility>
#include <vector>

#include "bracketdyn/dyn_strings.hpp"
#include "bracketdyn/order_tree.hpp"
#include "bracketdyn/paren.hpp"

namespace bracketdyn {

// One change to the heavy strings. Indices are ranks inside the path named by head.
struct DeltaRecord {
  enum class Op { c_insert, c_erase, c_replace, o_replace, path_create, path_remove, path_split, path_join };
  Op op = Op::c_insert;
  int head = -1;
  std::size_t index = 0;
  Paren sym{};
};

struct HeavyStringDelta {
  std::vector<DeltaRecord> records;
  std::vector<int> touched_heads;  // heads whose heavy string must be re-read
  std::vector<int> removed_heads;  // heads that no longer head a path
  std::size_t size() const { return records.size(); }
};

std::string to_jsonl(const HeavyStringDelta& d);

// Heavy path of the height forest: O holds opener types from the top down,
// C holds the matching closer types in the same order (stored as openers).
struct HeavyPathView {
  std::vector<std::ptrdiff_t> opens;  // augmented positions; -1 is the virtual root
  ParenString O;
  ParenString C;
};

// Heavy-light decomposition of the height forest of a parenthesis string,
// maintained under single character edits. The string X is padded to a
// balanced string A = D^d X C^e with dummy openers and virtual closers; a
// virtual root sits above every top-level node. Nodes are named by stable
// integer ids, the virtual root being 0.
class HeightForest {
 public:
  static constexpr int kRoot = 0;

  explicit HeightForest(ParenView x = {}, std::uint64_t seed = 0x4ea7);

  std::size_t text_size() const { return aug_size() - dummies_ - virtuals_; }
  std::size_t aug_size() const { return static_cast<std::size_t>(chars_.size(chars_root_)); }
  std::size_t dummy_count() const { return dummies_; }
  std::size_t virtual_count() const { return virtuals_; }
  ParenString text() const;
  ParenString augmented() const;

  // Height before augmented position i (0 at aug_size()).
  std::int64_t char_height(std::size_t i) const;
  std::optional<std::pair<std::size_t, std::size_t>> range_query(std::size_t i, std::int64_t h) const;
  std::optional<std::pair<std::size_t, std::size_t>> range_query_log2(std::size_t i, std::int64_t h) const;

  int node_at(std::size_t aug_pos) const;  // owner of the character
  std::ptrdiff_t index_of(int node) const;
  std::ptrdiff_t twin_index(int node) const;
  std::size_t subtree_size(int node) const;
  int parent(int node) const;
  std::optional<int> heavy_child(int node) const;
  int head_of(int node) const;
  std::size_t node_count() const { return aug_size() / 2 + 1; }

  std::vector<HeavyPathView> paths() const;
  std::vector<int> heads() const;
  // O and C of the path headed by head, with reserved prefixes removed:
  // dummies and the root from O, virtual closers and the root from C.
  std::pair<StrHandle, StrHandle> estimator_parts(int head);
  StrCollection& strings() { return strs_; }
  // Heavy string O . T(C) without the virtual root symbol.
  ParenString heavy_string(int head) const;

  HeavyStringDelta apply_edit(const CharEdit& e);

  // From-scratch decomposition of an already balanced string, for checking.
  static std::vector<HeavyPathView> reference_paths(ParenView augmented);
  static ParenString augment(ParenView x, std::size_t* dummies = nullptr, std::size_t* virtuals = nullptr);

 private:
  struct PathData {
    StrHandle O;
    StrHandle C;
  };
  struct Seg {
    int head;
    int lo;
    int hi;
  };
  struct EditLog {
    HeavyStringDelta delta;
    std::unordered_set<int> heads;
    std::vector<int> freed;
  };

  int new_char(Paren p);
  int char_id_at(std::size_t pos) const;
  Paren sym_at(std::size_t pos) const;
  std::size_t open_pos(int node) const;
  std::size_t close_pos(int node) const;
  int enclosing(std::size_t gap) const;
  int kdepth(int node) const;
  int path_node(int head, int rank) const;
  int succ(int node) const;
  int pred(int node) const;
  std::vector<Seg> chain_from(int deepest) const;

  void break_after(int node, EditLog& log);
  void link(int upper, int lower, EditLog& log);
  void create_node(int id, Paren opener, Paren closer, EditLog& log);
  void drop_node(int id, EditLog& log);
  void shift_up(const std::vector<Seg>& segs, Paren top_in, Paren& bottom_out, EditLog& log);
  void shift_down(const std::vector<Seg>& segs, Paren bottom_in, Paren& top_out, EditLog& log);
  void collect_candidates(const std::vector<Seg>& segs, std::vector<int>& out) const;
  void relink(std::vector<int> candidates, EditLog& log);
  void finish(EditLog& log, HeavyStringDelta& out);

  void open_insert(std::size_t j, std::int64_t type, EditLog& log);
  void close_insert(std::size_t j, std::int64_t type, EditLog& log);
  void open_erase(std::size_t j, EditLog& log);
  void close_erase(std::size_t j, EditLog& log);
  void substitute(std::size_t j, Paren p, EditLog& log);
  void top_released(Paren released, std::vector<int>& cands, EditLog& log);

  void build_all(ParenView augmented);

  StrCollection strs_;
  OrderTree chars_;
  OrderTree paths_;
  HeightSeq heights_;
  int chars_root_ = -1;
  std::vector<Symbol> char_sym_;
  std::vector<int> free_ids_;
  std::vector<char> alive_;  // node ids currently in the forest
  std::unordered_map<int, PathData> data_;
  std::size_t dummies_ = 0;
  std::size_t virtuals_ = 0;
};

}  // namespace bracketdyn
