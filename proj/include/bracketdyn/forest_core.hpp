#pragma once

#include <cstddef>
#include <cstdint>
#include <map>
#include <stdexcept>
#include <tuple>
#include <vector>

#include "bracketdyn/dyn_strings.hpp"
#include "bracketdyn/order_tree.hpp"
#include "bracketdyn/paren.hpp"
#include "bracketdyn/plain_forest.hpp"

namespace bracketdyn {

class StaleNode : public std::out_of_range {
 public:
  using std::out_of_range::out_of_range;
};

struct NodeEdit {
  enum class Op { insert, erase, relabel };
  Op op = Op::relabel;
  int node = -1;          // erase, relabel
  int parent = -1;        // insert: -1 inserts at the top level
  std::size_t first = 0;  // insert: the new node adopts children [first, last) of parent
  std::size_t last = 0;
  std::int64_t label = 0;

  static NodeEdit insert_under(int parent, std::size_t first, std::size_t last, std::int64_t label) {
    return {Op::insert, -1, parent, first, last, label};
  }
  static NodeEdit erase_node(int v) { return {Op::erase, v, -1, 0, 0, 0}; }
  static NodeEdit relabel_node(int v, std::int64_t label) { return {Op::relabel, v, -1, 0, 0, label}; }
};

// Positions are in the string after an insertion and before an erasure.
struct EditDelta {
  NodeEdit::Op op = NodeEdit::Op::relabel;
  int node = -1;
  int parent = -1;
  std::size_t open_pos = 0, close_pos = 0;
  std::int64_t old_label = 0;
};

// Ordered labelled forest with stable node ids and a synchronized
// parenthesis string. Node v owns tokens 2v (opener) and 2v+1 (closer).
class Forest {
 public:
  explicit Forest(std::uint64_t seed = 0xf0e57);
  explicit Forest(const PlainForest& f, std::uint64_t seed = 0xf0e57);

  std::size_t size() const { return alive_count_; }
  std::size_t id_bound() const { return label_.size(); }
  bool alive(int v) const { return v >= 0 && v < static_cast<int>(label_.size()) && alive_[v]; }
  std::int64_t label(int v) const;

  std::size_t open_pos(int v) const;
  std::size_t close_pos(int v) const;
  int node_at(std::size_t pos) const;
  bool opens_at(std::size_t pos) const;

  std::size_t depth(int v) const;
  int parent(int v) const;  // -1 for roots
  // Ancestor d levels above v.
  int laq(int v, std::size_t d) const;
  // -1 when u and v are in different trees.
  int lca(int u, int v) const;
  bool is_ancestor(int u, int v) const;  // u == v counts
  std::size_t subtree_size(int v) const;
  // str()[from, to) is balanced; true when empty.
  bool balanced(std::size_t from, std::size_t to) const;
  // -1 selects the top-level roots.
  const std::vector<int>& children(int v) const;
  std::size_t child_index(int v) const;

  ParenString str() const;
  // Preorder copy; ids[k] is the node id of preorder index k.
  PlainForest to_plain(std::vector<int>* ids = nullptr) const;

  // Throws std::invalid_argument on a bad adoption interval, StaleNode on a dead node.
  EditDelta apply(const NodeEdit& e);

 private:
  void check(int v) const;
  std::size_t end_pos(int p) const;
  std::vector<int>& kids(int p) { return p < 0 ? roots_ : children_[p]; }

  std::vector<std::int64_t> label_;
  std::vector<int> parent_;
  std::vector<std::vector<int>> children_;
  std::vector<int> roots_;
  std::vector<bool> alive_;
  std::size_t alive_count_ = 0;
  OrderTree order_;
  int seq_ = -1;
  HeightSeq h_;  // height before each position, plus one trailing entry
};

// Shared string collection and label interning for modified labels, so that
// labels of two forests built on one context are comparable.
class HldContext {
 public:
  explicit HldContext(std::uint64_t seed = 0x41d);
  StrCollection& strings() { return strs_; }
  const StrCollection& strings() const { return strs_; }
  // Takes ownership of h when the key is new.
  int intern(StrHandle h, int heavy_depth);
  ParenString content(int id) const { return strs_.materialize_parens(rep_[id]); }
  int heavy_depth_of(int id) const { return rep_hd_[id]; }
  std::size_t size() const { return rep_.size(); }

 private:
  StrCollection strs_;
  std::map<std::tuple<std::uint64_t, std::size_t, int>, int> ids_;
  std::vector<StrHandle> rep_;
  std::vector<int> rep_hd_;
};

inline constexpr std::int64_t kHashType = kHoleType;

std::size_t heavy_depth_of_size(std::size_t size);

struct LabelChange {
  int node = -1;
  int before = -1;  // -1 for an inserted node
  int after = -1;   // -1 for an erased node
};

// Heavy-light flags, heavy depths and modified labels of a Forest, kept in
// sync edit by edit. Roots are light.
class HldLabels {
 public:
  HldLabels(const Forest& f, HldContext& ctx);
  HldLabels(const HldLabels&) = delete;
  HldLabels& operator=(const HldLabels&) = delete;
  ~HldLabels();

  int heavy_depth(int v) const { return hd_.at(v); }
  bool is_heavy(const Forest& f, int v) const;
  int heavy_child(const Forest& f, int v) const;  // -1 if none
  int label_id(int v) const { return id_.at(v); }
  StrHandle text() const { return s_; }
  StrHandle phld() const { return p_; }
  ParenString phld_string() const;

  // The edit must already be applied to f.
  std::vector<LabelChange> update(const Forest& f, const EditDelta& d);

 private:
  int compute(const Forest& f, int v, int hd);
  Symbol phld_symbol(Kind k, int id) const { return encode(Paren{k, id}); }

  HldContext* ctx_;
  StrHandle s_, p_;
  std::vector<int> hd_, id_;
};

std::vector<LabelChange> maintain_phld(const Forest& f, HldLabels& labels, const EditDelta& d);

// Light proper ancestors of v in root-to-v order; v itself is appended when
// include_self is set and v is light.
std::vector<int> light_ancestors(const Forest& f, const HldLabels& labels, int v, bool include_self = false);

// From-scratch modified labelling over exact contents, shared between calls.
class StaticHldInterner {
 public:
  int intern(const ParenString& light_subtree, int heavy_depth);
  const ParenString& content(int id) const { return keys_[id].first; }
  int heavy_depth_of(int id) const { return keys_[id].second; }
  std::size_t size() const { return keys_.size(); }

 private:
  std::map<std::pair<ParenString, int>, int> ids_;
  std::vector<std::pair<ParenString, int>> keys_;
};

// Same shape as f with every label replaced by its modified label id.
PlainForest hld_forest(const PlainForest& f, StaticHldInterner& in);
ParenString phld_string(const PlainForest& f, StaticHldInterner& in);
// Light subtree of preorder node v with its heavy child's subtree replaced by a # leaf.
ParenString light_subtree(const PlainForest& f, int v);

}  // namespace bracketdyn
