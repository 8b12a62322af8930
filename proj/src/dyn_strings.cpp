#include "bracketdyn/dyn_strings.hpp"

#include <algorithm>
#include <string>

namespace bracketdyn {

namespace {

constexpr std::uint64_t kMod = (1ULL << 61) - 1;

std::uint64_t mulmod(std::uint64_t a, std::uint64_t b) {
  unsigned __int128 z = static_cast<unsigned __int128>(a) * b;
  std::uint64_t lo = static_cast<std::uint64_t>(z & kMod);
  std::uint64_t hi = static_cast<std::uint64_t>(z >> 61);
  std::uint64_t s = lo + hi;
  return s >= kMod ? s - kMod : s;
}

std::uint64_t addmod(std::uint64_t a, std::uint64_t b) {
  std::uint64_t s = a + b;
  return s >= kMod ? s - kMod : s;
}

std::uint64_t submod(std::uint64_t a, std::uint64_t b) {
  return a >= b ? a - b : a + kMod - b;
}

std::uint64_t splitmix(std::uint64_t x) {
  x += 0x9e3779b97f4a7c15ULL;
  x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
  x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
  return x ^ (x >> 31);
}

}  // namespace

StrCollection::StrCollection(Content content, std::uint64_t seed)
    : content_(content), rng_(seed) {
  base_ = (rng_() % (kMod - (1ULL << 20))) + (1ULL << 20);
  salt_ = rng_();
  pow_cache_.push_back(1);
}

std::uint64_t StrCollection::sym_value(Symbol s) const {
  std::uint64_t v = splitmix(static_cast<std::uint64_t>(s) ^ salt_) % (kMod - 1);
  return v + 1;
}

std::uint64_t StrCollection::pow(std::size_t e) const {
  while (pow_cache_.size() <= e) pow_cache_.push_back(mulmod(pow_cache_.back(), base_));
  return pow_cache_[e];
}

StrCollection::Agg StrCollection::leaf_agg(Symbol s) const {
  Agg a;
  a.size = 1;
  a.hash = sym_value(s);
  a.thash = sym_value(transpose_symbol(s));
  a.pw = base_;
  a.pre_len = a.suf_len = 1;
  a.pre_kind = a.suf_kind = static_cast<std::uint8_t>(s & 1);
  return a;
}

StrCollection::Agg StrCollection::combine(const Agg& a, const Agg& b) {
  if (a.size == 0) return b;
  if (b.size == 0) return a;
  Agg c;
  c.size = a.size + b.size;
  c.hash = addmod(mulmod(a.hash, b.pw), b.hash);
  c.thash = addmod(mulmod(b.thash, a.pw), a.thash);
  c.pw = mulmod(a.pw, b.pw);
  c.pre_kind = a.pre_kind;
  c.pre_len = a.pre_len;
  if (a.pre_len == a.size && b.pre_kind == a.pre_kind) c.pre_len = a.size + b.pre_len;
  c.suf_kind = b.suf_kind;
  c.suf_len = b.suf_len;
  if (b.suf_len == b.size && a.suf_kind == b.suf_kind) c.suf_len = b.size + a.suf_len;
  return c;
}

StrCollection::Agg StrCollection::agg(std::int32_t t, bool flipped) const {
  Agg a;
  if (t < 0) return a;
  const Node& n = nodes_[t];
  a.size = n.size;
  a.hash = n.hash;
  a.thash = n.thash;
  a.pw = n.pw;
  a.pre_len = n.pre_len;
  a.suf_len = n.suf_len;
  a.pre_kind = n.pre_kind;
  a.suf_kind = n.suf_kind;
  if (flipped) {
    std::swap(a.hash, a.thash);
    std::swap(a.pre_len, a.suf_len);
    std::swap(a.pre_kind, a.suf_kind);
    a.pre_kind ^= 1;
    a.suf_kind ^= 1;
  }
  return a;
}

std::int32_t StrCollection::make(std::int32_t l, Symbol s, std::int32_t r, std::uint32_t prio) {
  Agg a = combine(combine(agg(l, false), leaf_agg(s)), agg(r, false));
  Node n;
  n.l = l;
  n.r = r;
  n.prio = prio;
  n.sym = s;
  n.size = a.size;
  n.hash = a.hash;
  n.thash = a.thash;
  n.pw = a.pw;
  n.pre_len = a.pre_len;
  n.suf_len = a.suf_len;
  n.pre_kind = a.pre_kind;
  n.suf_kind = a.suf_kind;
  nodes_.push_back(n);
  return static_cast<std::int32_t>(nodes_.size()) - 1;
}

std::int32_t StrCollection::make_leaf(Symbol s) {
  return make(-1, s, -1, static_cast<std::uint32_t>(rng_()));
}

std::int32_t StrCollection::flip(std::int32_t t) {
  if (t < 0) return t;
  Node n = nodes_[t];
  Agg a = agg(t, true);
  n.rev = !n.rev;
  n.hash = a.hash;
  n.thash = a.thash;
  n.pre_len = a.pre_len;
  n.suf_len = a.suf_len;
  n.pre_kind = a.pre_kind;
  n.suf_kind = a.suf_kind;
  nodes_.push_back(n);
  return static_cast<std::int32_t>(nodes_.size()) - 1;
}

std::int32_t StrCollection::push(std::int32_t t) {
  if (t < 0 || !nodes_[t].rev) return t;
  Node n = nodes_[t];
  std::int32_t nl = flip(n.r);
  std::int32_t nr = flip(n.l);
  n.l = nl;
  n.r = nr;
  n.sym = transpose_symbol(n.sym);
  n.rev = false;
  nodes_.push_back(n);
  return static_cast<std::int32_t>(nodes_.size()) - 1;
}

std::int32_t StrCollection::merge(std::int32_t a, std::int32_t b) {
  if (a < 0) return b;
  if (b < 0) return a;
  if (nodes_[a].prio > nodes_[b].prio) {
    a = push(a);
    Node n = nodes_[a];
    std::int32_t r = merge(n.r, b);
    return make(n.l, n.sym, r, n.prio);
  }
  b = push(b);
  Node n = nodes_[b];
  std::int32_t l = merge(a, n.l);
  return make(l, n.sym, n.r, n.prio);
}

std::pair<std::int32_t, std::int32_t> StrCollection::split_node(std::int32_t t, std::size_t k) {
  if (t < 0) return {-1, -1};
  if (k == 0) return {-1, t};
  if (k >= nodes_[t].size) return {t, -1};
  t = push(t);
  Node n = nodes_[t];
  std::size_t ls = n.l < 0 ? 0 : nodes_[n.l].size;
  if (k <= ls) {
    auto [a, b] = split_node(n.l, k);
    return {a, make(b, n.sym, n.r, n.prio)};
  }
  auto [a, b] = split_node(n.r, k - ls - 1);
  return {make(n.l, n.sym, a, n.prio), b};
}

std::int32_t StrCollection::build(std::span<const Symbol> s) {
  if (s.empty()) return -1;
  const std::size_t n = s.size();
  std::vector<std::uint32_t> prio(n);
  for (auto& p : prio) p = static_cast<std::uint32_t>(rng_());
  std::vector<std::int32_t> left(n, -1), right(n, -1);
  std::vector<std::int32_t> stack;
  for (std::size_t i = 0; i < n; ++i) {
    std::int32_t last = -1;
    while (!stack.empty() && prio[stack.back()] < prio[i]) {
      last = stack.back();
      stack.pop_back();
    }
    left[i] = last;
    if (!stack.empty()) right[stack.back()] = static_cast<std::int32_t>(i);
    stack.push_back(static_cast<std::int32_t>(i));
  }
  std::int32_t root = stack.front();
  // Postorder creation so children exist before parents.
  std::vector<std::int32_t> made(n, -1);
  std::vector<std::pair<std::int32_t, bool>> todo{{root, false}};
  while (!todo.empty()) {
    auto [v, expanded] = todo.back();
    todo.pop_back();
    if (!expanded) {
      todo.push_back({v, true});
      if (right[v] >= 0) todo.push_back({right[v], false});
      if (left[v] >= 0) todo.push_back({left[v], false});
      continue;
    }
    std::int32_t l = left[v] < 0 ? -1 : made[left[v]];
    std::int32_t r = right[v] < 0 ? -1 : made[right[v]];
    made[v] = make(l, s[v], r, prio[v]);
  }
  return made[root];
}

StrHandle StrCollection::wrap(std::int32_t root) {
  std::uint32_t id;
  if (!free_entries_.empty()) {
    id = free_entries_.back();
    free_entries_.pop_back();
  } else {
    id = static_cast<std::uint32_t>(entries_.size());
    entries_.emplace_back();
  }
  entries_[id] = {root, true};
  ++live_;
  return {id};
}

const StrCollection::Entry& StrCollection::entry(StrHandle h) const {
  if (h.id >= entries_.size() || !entries_[h.id].alive) {
    throw std::invalid_argument("StrCollection: invalid handle");
  }
  return entries_[h.id];
}

void StrCollection::require_parens(const char* what) const {
  if (content_ != Content::parens) {
    throw ContentError(std::string(what) + " needs parenthesis content");
  }
}

StrHandle StrCollection::add(std::span<const Symbol> s) { return wrap(build(s)); }

StrHandle StrCollection::add(ParenView s) {
  require_parens("add(ParenView)");
  auto enc = encode_all(s);
  return wrap(build(enc));
}

StrHandle StrCollection::empty_string() { return wrap(-1); }

StrHandle StrCollection::concat(StrHandle a, StrHandle b) {
  return wrap(merge(entry(a).root, entry(b).root));
}

std::pair<StrHandle, StrHandle> StrCollection::split(StrHandle a, std::size_t k) {
  const Entry& e = entry(a);
  std::size_t n = e.root < 0 ? 0 : nodes_[e.root].size;
  if (k > n) throw std::out_of_range("split: index beyond length");
  auto [l, r] = split_node(e.root, k);
  StrHandle hl = wrap(l);
  StrHandle hr = wrap(r);
  return {hl, hr};
}

StrHandle StrCollection::add_transpose(StrHandle a) {
  require_parens("add_transpose");
  return wrap(flip(entry(a).root));
}

StrHandle StrCollection::substr(StrHandle a, std::size_t from, std::size_t len) {
  std::int32_t root = entry(a).root;
  std::size_t n = root < 0 ? 0 : nodes_[root].size;
  if (from + len > n) throw std::out_of_range("substr: range beyond length");
  auto [l, rest] = split_node(root, from);
  auto [mid, r] = split_node(rest, len);
  (void)l;
  (void)r;
  return wrap(mid);
}

StrHandle StrCollection::insert(StrHandle a, std::size_t pos, Symbol s) {
  std::int32_t root = entry(a).root;
  std::size_t n = root < 0 ? 0 : nodes_[root].size;
  if (pos > n) throw std::out_of_range("insert: position beyond length");
  auto [l, r] = split_node(root, pos);
  return wrap(merge(merge(l, make_leaf(s)), r));
}

StrHandle StrCollection::erase(StrHandle a, std::size_t pos) {
  std::int32_t root = entry(a).root;
  std::size_t n = root < 0 ? 0 : nodes_[root].size;
  if (pos >= n) throw std::out_of_range("erase: position beyond length");
  auto [l, rest] = split_node(root, pos);
  auto [mid, r] = split_node(rest, 1);
  (void)mid;
  return wrap(merge(l, r));
}

StrHandle StrCollection::replace(StrHandle a, std::size_t pos, Symbol s) {
  std::int32_t root = entry(a).root;
  std::size_t n = root < 0 ? 0 : nodes_[root].size;
  if (pos >= n) throw std::out_of_range("replace: position beyond length");
  auto [l, rest] = split_node(root, pos);
  auto [mid, r] = split_node(rest, 1);
  (void)mid;
  return wrap(merge(merge(l, make_leaf(s)), r));
}

void StrCollection::release(StrHandle a) {
  entry(a);
  entries_[a.id] = {-1, false};
  free_entries_.push_back(a.id);
  --live_;
}

std::size_t StrCollection::length(StrHandle a) const {
  std::int32_t root = entry(a).root;
  return root < 0 ? 0 : nodes_[root].size;
}

Symbol StrCollection::at_node(std::int32_t t, std::size_t i) const {
  bool f = false;
  for (;;) {
    const Node& n = nodes_[t];
    bool e = f != n.rev;
    std::int32_t left = e ? n.r : n.l;
    std::int32_t right = e ? n.l : n.r;
    std::size_t ls = left < 0 ? 0 : nodes_[left].size;
    if (i < ls) {
      t = left;
      f = e;
    } else if (i == ls) {
      return e ? transpose_symbol(n.sym) : n.sym;
    } else {
      i -= ls + 1;
      t = right;
      f = e;
    }
  }
}

Symbol StrCollection::at(StrHandle a, std::size_t i) const {
  if (i >= length(a)) throw std::out_of_range("at: index beyond length");
  return at_node(entry(a).root, i);
}

void StrCollection::collect(std::int32_t t, bool flipped, std::vector<Symbol>& out) const {
  // Explicit stack: (node, flip, emit-symbol-only)
  struct Item {
    std::int32_t t;
    bool f;
    bool sym_only;
    Symbol s;
  };
  std::vector<Item> stack;
  if (t >= 0) stack.push_back({t, flipped, false, 0});
  while (!stack.empty()) {
    Item it = stack.back();
    stack.pop_back();
    if (it.sym_only) {
      out.push_back(it.s);
      continue;
    }
    const Node& n = nodes_[it.t];
    bool e = it.f != n.rev;
    std::int32_t left = e ? n.r : n.l;
    std::int32_t right = e ? n.l : n.r;
    if (right >= 0) stack.push_back({right, e, false, 0});
    stack.push_back({-1, false, true, e ? transpose_symbol(n.sym) : n.sym});
    if (left >= 0) stack.push_back({left, e, false, 0});
  }
}

std::vector<Symbol> StrCollection::materialize(StrHandle a) const {
  std::vector<Symbol> out;
  out.reserve(length(a));
  collect(entry(a).root, false, out);
  return out;
}

ParenString StrCollection::materialize_parens(StrHandle a) const {
  require_parens("materialize_parens");
  return decode_all(materialize(a));
}

std::uint64_t StrCollection::fingerprint(StrHandle a) const {
  std::int32_t root = entry(a).root;
  return root < 0 ? 0 : nodes_[root].hash;
}

bool StrCollection::equal(StrHandle a, StrHandle b) const {
  return length(a) == length(b) && fingerprint(a) == fingerprint(b);
}

std::uint64_t StrCollection::prefix_hash(std::int32_t t, bool f, std::size_t k) const {
  std::uint64_t acc = 0;
  while (k > 0 && t >= 0) {
    const Node& n = nodes_[t];
    if (k >= n.size) {
      Agg a = agg(t, f);
      return addmod(mulmod(acc, a.pw), a.hash);
    }
    bool e = f != n.rev;
    std::int32_t left = e ? n.r : n.l;
    std::int32_t right = e ? n.l : n.r;
    std::size_t ls = left < 0 ? 0 : nodes_[left].size;
    if (k <= ls) {
      t = left;
      f = e;
      continue;
    }
    if (left >= 0) {
      Agg a = agg(left, e);
      acc = addmod(mulmod(acc, a.pw), a.hash);
    }
    acc = addmod(mulmod(acc, base_), sym_value(e ? transpose_symbol(n.sym) : n.sym));
    k -= ls + 1;
    t = right;
    f = e;
  }
  return acc;
}

std::uint64_t StrCollection::range_hash(std::int32_t t, std::size_t from, std::size_t len) const {
  std::uint64_t hi = prefix_hash(t, false, from + len);
  std::uint64_t lo = prefix_hash(t, false, from);
  return submod(hi, mulmod(lo, pow(len)));
}

std::size_t StrCollection::lcp_at(StrHandle a, std::size_t i, StrHandle b, std::size_t j) const {
  std::int32_t ra = entry(a).root;
  std::int32_t rb = entry(b).root;
  std::size_t na = length(a), nb = length(b);
  if (i > na || j > nb) throw std::out_of_range("lcp_at: offset beyond length");
  std::size_t limit = std::min(na - i, nb - j);
  if (limit == 0) return 0;
  std::uint64_t ha = prefix_hash(ra, false, i);
  std::uint64_t hb = prefix_hash(rb, false, j);
  auto same = [&](std::size_t len) {
    std::uint64_t x = submod(prefix_hash(ra, false, i + len), mulmod(ha, pow(len)));
    std::uint64_t y = submod(prefix_hash(rb, false, j + len), mulmod(hb, pow(len)));
    return x == y;
  };
  // Galloping then binary search: lo always matches, hi never does.
  std::size_t lo = 0, hi = 0, step = 1;
  for (;;) {
    std::size_t cand = std::min(lo + step, limit);
    if (same(cand)) {
      lo = cand;
      if (lo == limit) return lo;
      step *= 2;
    } else {
      hi = cand;
      break;
    }
  }
  while (hi - lo > 1) {
    std::size_t mid = lo + (hi - lo) / 2;
    if (same(mid)) lo = mid;
    else hi = mid;
  }
  return lo;
}

std::size_t StrCollection::lcp(StrHandle a, StrHandle b) const { return lcp_at(a, 0, b, 0); }

std::size_t StrCollection::lmp_query(StrHandle a) const {
  require_parens("lmp_query");
  std::int32_t root = entry(a).root;
  return root < 0 ? 0 : nodes_[root].pre_len;
}

IpmResult StrCollection::ipm_at(StrHandle p, std::size_t pfrom, std::size_t plen, StrHandle t,
                                std::size_t tfrom, std::size_t tlen) const {
  if (pfrom + plen > length(p) || tfrom + tlen > length(t)) {
    throw std::out_of_range("ipm: range beyond length");
  }
  if (!(tlen < 2 * plen)) {
    throw std::invalid_argument("ipm: requires |T| < 2|P|");
  }
  IpmResult res;
  if (plen > tlen) return res;
  std::int32_t rp = entry(p).root;
  std::int32_t rt = entry(t).root;
  std::uint64_t target = range_hash(rp, pfrom, plen);
  std::vector<std::size_t> hits;
  for (std::size_t s = 0; s + plen <= tlen; ++s) {
    if (range_hash(rt, tfrom + s, plen) == target) hits.push_back(s);
  }
  if (hits.empty()) return res;
  res.start = hits.front();
  res.count = hits.size();
  res.diff = hits.size() > 1 ? hits[1] - hits[0] : 0;
  for (std::size_t k = 1; k < hits.size(); ++k) {
    if (hits[k] - hits[k - 1] != res.diff) {
      throw std::logic_error("ipm: occurrences do not form a progression");
    }
  }
  return res;
}

IpmResult StrCollection::ipm(StrHandle p, StrHandle t) const {
  return ipm_at(p, 0, length(p), t, 0, length(t));
}

}  // namespace bracketdyn
