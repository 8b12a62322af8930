#pragma once

#include <cstdint>
#include <optional>
#include <random>
#include <utility>
#include <vector>

namespace bracketdyn {

// Treap-backed sequences over externally chosen integer ids, with parent
// pointers so that rank and root lookups start from an element.
// Many disjoint sequences can share one pool; -1 denotes an empty sequence.
class OrderTree {
 public:
  explicit OrderTree(std::uint64_t seed = 7) : rng_(seed) {}

  void make_singleton(int id);
  bool contains(int id) const { return id >= 0 && id < static_cast<int>(l_.size()) && sz_[id] > 0; }
  void forget(int id);  // id must already be detached (singleton)

  int root_of(int id) const;
  int rank(int id) const;
  int size(int root) const { return root < 0 ? 0 : sz_[root]; }
  int at(int root, int k) const;
  int first(int root) const;
  int last(int root) const;
  int next(int id) const;
  int prev(int id) const;

  std::pair<int, int> split(int root, int k);
  int merge(int a, int b);
  int insert(int root, int k, int id);  // id becomes a singleton first
  int erase(int id);                    // returns new root of the remaining sequence
  std::vector<int> to_vector(int root) const;

 private:
  void pull(int t);
  void ensure(int id);

  std::vector<int> l_, r_, p_, sz_;
  std::vector<std::uint32_t> prio_;
  std::mt19937_64 rng_;
};

// Sequence of integer heights with range minimum and lazy suffix addition.
class HeightSeq {
 public:
  explicit HeightSeq(std::uint64_t seed = 11) : rng_(seed) {}

  void assign(const std::vector<std::int64_t>& values);
  std::size_t size() const { return root_ < 0 ? 0 : static_cast<std::size_t>(sz_[root_]); }
  void insert(std::size_t pos, std::int64_t value);
  void erase(std::size_t pos);
  void add(std::size_t from, std::size_t to, std::int64_t delta);  // [from, to)
  std::int64_t get(std::size_t pos) const;
  std::int64_t range_min(std::size_t from, std::size_t to) const;  // [from, to), non-empty

  // First index >= from whose value is <= h, or size() when there is none.
  std::size_t first_le(std::size_t from, std::int64_t h) const;
  // Last index <= upto whose value is <= h, or -1.
  std::ptrdiff_t last_le(std::ptrdiff_t upto, std::int64_t h) const;

 private:
  int node(std::int64_t v);
  void apply(int t, std::int64_t d);
  void push(int t);
  void pull(int t);
  std::pair<int, int> split(int t, int k);
  int merge(int a, int b);
  std::ptrdiff_t first_le_rec(int t, std::size_t from, std::int64_t h, std::int64_t acc, std::size_t base) const;
  std::ptrdiff_t last_le_rec(int t, std::ptrdiff_t upto, std::int64_t h, std::int64_t acc, std::size_t base) const;
  std::int64_t range_min_rec(int t, std::size_t from, std::size_t to, std::int64_t acc, std::size_t base) const;

  std::vector<int> l_, r_, sz_;
  std::vector<std::int64_t> val_, mn_, lz_;
  std::vector<std::uint32_t> prio_;
  std::vector<int> free_;
  int root_ = -1;
  std::mt19937_64 rng_;
};

}  // namespace bracketdyn
