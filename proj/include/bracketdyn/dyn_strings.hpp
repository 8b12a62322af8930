#pragma once

#include <cstddef>
#include <cstdint>
#include <random>
#include <span>
#include <stdexcept>
#include <utility>
#include <vector>

#include "bracketdyn/paren.hpp"

namespace bracketdyn {

struct StrHandle {
  std::uint32_t id = UINT32_MAX;
  bool valid() const { return id != UINT32_MAX; }
  friend bool operator==(const StrHandle&, const StrHandle&) = default;
};

// Result of an internal pattern matching query: starts start, start + diff, ...
struct IpmResult {
  std::size_t start = 0;
  std::size_t diff = 0;
  std::size_t count = 0;
  bool empty() const { return count == 0; }
  friend bool operator==(const IpmResult&, const IpmResult&) = default;
};

class ContentError : public std::logic_error {
 public:
  using std::logic_error::logic_error;
};

// Persistent collection of strings over Symbol. Every operation leaves its
// inputs untouched and returns fresh handles. Backed by a path-copying treap
// with Karp-Rabin fingerprints of both the content and its transpose.
class StrCollection {
 public:
  enum class Content { parens, generic };

  explicit StrCollection(Content content = Content::parens, std::uint64_t seed = 0x5eedULL);

  Content content() const { return content_; }

  StrHandle add(std::span<const Symbol> s);
  StrHandle add(ParenView s);
  StrHandle empty_string();
  StrHandle concat(StrHandle a, StrHandle b);
  std::pair<StrHandle, StrHandle> split(StrHandle a, std::size_t k);
  StrHandle add_transpose(StrHandle a);
  StrHandle substr(StrHandle a, std::size_t from, std::size_t len);
  StrHandle insert(StrHandle a, std::size_t pos, Symbol s);
  StrHandle erase(StrHandle a, std::size_t pos);
  StrHandle replace(StrHandle a, std::size_t pos, Symbol s);
  void release(StrHandle a);

  std::size_t length(StrHandle a) const;
  Symbol at(StrHandle a, std::size_t i) const;
  std::vector<Symbol> materialize(StrHandle a) const;
  ParenString materialize_parens(StrHandle a) const;
  std::uint64_t fingerprint(StrHandle a) const;
  bool equal(StrHandle a, StrHandle b) const;

  std::size_t lcp(StrHandle a, StrHandle b) const;
  // Longest common prefix of a[i..] and b[j..].
  std::size_t lcp_at(StrHandle a, std::size_t i, StrHandle b, std::size_t j) const;
  std::size_t lmp_query(StrHandle a) const;
  // Occurrences of p in t; requires |t| < 2|p|.
  IpmResult ipm(StrHandle p, StrHandle t) const;
  IpmResult ipm_at(StrHandle p, std::size_t pfrom, std::size_t plen, StrHandle t,
                   std::size_t tfrom, std::size_t tlen) const;

  std::size_t live_handles() const { return live_; }
  std::size_t node_count() const { return nodes_.size(); }

 private:
  struct Node {
    std::int32_t l = -1;
    std::int32_t r = -1;
    std::uint32_t prio = 0;
    std::uint32_t size = 0;
    Symbol sym = 0;
    bool rev = false;
    std::uint64_t hash = 0;   // content
    std::uint64_t thash = 0;  // transposed content
    std::uint64_t pw = 1;     // base^size
    std::uint32_t pre_len = 0;
    std::uint32_t suf_len = 0;
    std::uint8_t pre_kind = 0;
    std::uint8_t suf_kind = 0;
  };
  struct Entry {
    std::int32_t root = -1;
    bool alive = false;
  };
  struct Agg {
    std::uint32_t size = 0;
    std::uint64_t hash = 0;
    std::uint64_t thash = 0;
    std::uint64_t pw = 1;
    std::uint32_t pre_len = 0, suf_len = 0;
    std::uint8_t pre_kind = 0, suf_kind = 0;
  };

  std::int32_t make_leaf(Symbol s);
  std::int32_t make(std::int32_t l, Symbol s, std::int32_t r, std::uint32_t prio);
  std::int32_t flip(std::int32_t t);
  std::int32_t push(std::int32_t t);
  std::int32_t merge(std::int32_t a, std::int32_t b);
  std::pair<std::int32_t, std::int32_t> split_node(std::int32_t t, std::size_t k);
  std::int32_t build(std::span<const Symbol> s);
  Agg agg(std::int32_t t, bool flipped) const;
  static Agg combine(const Agg& a, const Agg& b);
  Agg leaf_agg(Symbol s) const;
  // Hash of the prefix of length k of node t viewed with the given flip.
  std::uint64_t prefix_hash(std::int32_t t, bool flipped, std::size_t k) const;
  std::uint64_t range_hash(std::int32_t t, std::size_t from, std::size_t len) const;
  Symbol at_node(std::int32_t t, std::size_t i) const;
  void collect(std::int32_t t, bool flipped, std::vector<Symbol>& out) const;
  std::uint64_t sym_value(Symbol s) const;
  std::uint64_t pow(std::size_t e) const;
  const Entry& entry(StrHandle h) const;
  StrHandle wrap(std::int32_t root);
  void require_parens(const char* what) const;

  Content content_;
  std::vector<Node> nodes_;
  std::vector<Entry> entries_;
  std::vector<std::uint32_t> free_entries_;
  std::size_t live_ = 0;
  std::mt19937_64 rng_;
  std::uint64_t base_;
  std::uint64_t salt_;
  mutable std::vector<std::uint64_t> pow_cache_;
};

}  // namespace bracketdyn
