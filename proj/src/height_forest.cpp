#include "bracketdyn/height_forest.hpp"

#include <algorithm>
#include <stdexcept>

#include "bracketdyn/oracles.hpp"
#include "json.hpp"

namespace bracketdyn {

using oracle::floor_log2;

namespace {

const char* op_name(DeltaRecord::Op op) {
  switch (op) {
    case DeltaRecord::Op::c_insert: return "c_insert";
    case DeltaRecord::Op::c_erase: return "c_erase";
    case DeltaRecord::Op::c_replace: return "c_replace";
    case DeltaRecord::Op::o_replace: return "o_replace";
    case DeltaRecord::Op::path_create: return "path_create";
    case DeltaRecord::Op::path_remove: return "path_remove";
    case DeltaRecord::Op::path_split: return "path_split";
    case DeltaRecord::Op::path_join: return "path_join";
  }
  return "?";
}

}  // namespace

std::string to_jsonl(const HeavyStringDelta& d) {
  std::string out;
  for (const auto& r : d.records) {
    nlohmann::json j;
    j["op"] = op_name(r.op);
    j["head"] = r.head;
    j["index"] = r.index;
    if (r.op == DeltaRecord::Op::c_insert || r.op == DeltaRecord::Op::c_replace ||
        r.op == DeltaRecord::Op::o_replace) {
      j["type"] = r.sym.type;
    }
    out += j.dump();
    out.push_back('\n');
  }
  return out;
}

ParenString HeightForest::augment(ParenView x, std::size_t* dummies, std::size_t* virtuals) {
  std::int64_t h = 0, lowest = 0;
  for (auto p : x) {
    h += p.opens() ? 1 : -1;
    lowest = std::min(lowest, h);
  }
  std::size_t d = static_cast<std::size_t>(-lowest);
  std::size_t e = static_cast<std::size_t>(h - lowest);
  ParenString a(d, open_paren(kDummyType));
  a.insert(a.end(), x.begin(), x.end());
  a.insert(a.end(), e, close_paren(kVirtualType));
  if (dummies) *dummies = d;
  if (virtuals) *virtuals = e;
  return a;
}

HeightForest::HeightForest(ParenView x, std::uint64_t seed)
    : strs_(StrCollection::Content::parens, seed),
      chars_(seed + 1),
      paths_(seed + 2),
      heights_(seed + 3) {
  auto a = augment(x, &dummies_, &virtuals_);
  build_all(a);
}

void HeightForest::build_all(ParenView a) {
  const std::size_t n = a.size();
  char_sym_.assign(n + 1, 0);
  alive_.assign(n + 1, 0);
  alive_[kRoot] = 1;
  chars_root_ = -1;
  std::vector<std::int64_t> hs(n);
  std::int64_t h = 0;
  for (std::size_t i = 0; i < n; ++i) {
    int id = static_cast<int>(i) + 1;
    char_sym_[id] = encode(a[i]);
    chars_.make_singleton(id);
    chars_root_ = chars_.merge(chars_root_, id);
    hs[i] = h;
    h += a[i].opens() ? 1 : -1;
  }
  heights_.assign(hs);

  // Node ids: 0 for the virtual root, i + 1 for the opener at i.
  auto tw = twins(a);
  std::vector<int> parent(n + 1, -1);
  std::vector<int> size(n + 1, 0);
  std::vector<int> order{kRoot};
  std::vector<int> stack{kRoot};
  size[kRoot] = static_cast<int>(n / 2) + 1;
  for (std::size_t i = 0; i < n; ++i) {
    if (a[i].opens()) {
      int id = static_cast<int>(i) + 1;
      parent[id] = stack.back();
      size[id] = static_cast<int>((tw[i] - static_cast<std::ptrdiff_t>(i) + 1) / 2);
      alive_[id] = 1;
      stack.push_back(id);
      order.push_back(id);
    } else {
      stack.pop_back();
    }
  }
  std::vector<int> heavy(n + 1, -1);
  for (int v : order) {
    if (v == kRoot) continue;
    int p = parent[v];
    if (floor_log2(size[v]) == floor_log2(size[p])) heavy[p] = v;
  }
  data_.clear();
  for (int v : order) {
    if (v != kRoot && heavy[parent[v]] == v) continue;
    ParenString O, C;
    int root = -1;
    for (int x = v; x >= 0; x = heavy[x]) {
      paths_.make_singleton(x);
      root = paths_.merge(root, x);
      if (x == kRoot) {
        O.push_back(open_paren(kRootType));
        C.push_back(open_paren(kRootType));
      } else {
        std::size_t i = static_cast<std::size_t>(x) - 1;
        O.push_back(open_paren(a[i].type));
        C.push_back(open_paren(a[static_cast<std::size_t>(tw[i])].type));
      }
    }
    data_[v] = {strs_.add(O), strs_.add(C)};
  }
}

int HeightForest::new_char(Paren p) {
  int id;
  if (!free_ids_.empty()) {
    id = free_ids_.back();
    free_ids_.pop_back();
  } else {
    id = static_cast<int>(char_sym_.size());
    char_sym_.push_back(0);
    alive_.push_back(0);
  }
  char_sym_[id] = encode(p);
  alive_[id] = 0;
  return id;
}

int HeightForest::char_id_at(std::size_t pos) const { return chars_.at(chars_root_, static_cast<int>(pos)); }

Paren HeightForest::sym_at(std::size_t pos) const { return decode(char_sym_[char_id_at(pos)]); }

ParenString HeightForest::augmented() const {
  ParenString out;
  for (int id : chars_.to_vector(chars_root_)) out.push_back(decode(char_sym_[id]));
  return out;
}

ParenString HeightForest::text() const {
  auto a = augmented();
  return ParenString(a.begin() + static_cast<std::ptrdiff_t>(dummies_),
                     a.end() - static_cast<std::ptrdiff_t>(virtuals_));
}

std::int64_t HeightForest::char_height(std::size_t i) const {
  if (i == aug_size()) return 0;
  return heights_.get(i);
}

std::optional<std::pair<std::size_t, std::size_t>> HeightForest::range_query(std::size_t i, std::int64_t h) const {
  if (i >= aug_size()) throw std::out_of_range("range_query: index");
  if (heights_.get(i) <= h) return std::nullopt;
  std::size_t e = heights_.first_le(i, h);
  return std::make_pair(i, e - 1);
}

std::optional<std::pair<std::size_t, std::size_t>> HeightForest::range_query_log2(std::size_t i,
                                                                                  std::int64_t h) const {
  if (i >= aug_size()) throw std::out_of_range("range_query: index");
  if (heights_.get(i) <= h) return std::nullopt;
  std::size_t lo = i, hi = aug_size() - 1;
  while (lo < hi) {
    std::size_t mid = lo + (hi - lo + 1) / 2;
    if (heights_.range_min(i, mid + 1) > h) lo = mid;
    else hi = mid - 1;
  }
  return std::make_pair(i, lo);
}

std::size_t HeightForest::open_pos(int node) const { return static_cast<std::size_t>(chars_.rank(node)); }

std::size_t HeightForest::close_pos(int node) const {
  if (node == kRoot) return aug_size();
  std::size_t i = open_pos(node);
  std::size_t e = heights_.first_le(i + 1, heights_.get(i));
  return e - 1;
}

std::ptrdiff_t HeightForest::index_of(int node) const {
  if (node == kRoot) return -1;
  return static_cast<std::ptrdiff_t>(open_pos(node));
}

std::ptrdiff_t HeightForest::twin_index(int node) const { return static_cast<std::ptrdiff_t>(close_pos(node)); }

std::size_t HeightForest::subtree_size(int node) const {
  if (node == kRoot) return aug_size() / 2 + 1;
  return (close_pos(node) - open_pos(node) + 1) / 2;
}

int HeightForest::kdepth(int node) const { return static_cast<int>(floor_log2(subtree_size(node))); }

int HeightForest::node_at(std::size_t pos) const {
  Paren p = sym_at(pos);
  if (p.opens()) return char_id_at(pos);
  auto o = heights_.last_le(static_cast<std::ptrdiff_t>(pos) - 1, heights_.get(pos) - 1);
  return char_id_at(static_cast<std::size_t>(o));
}

int HeightForest::parent(int node) const {
  if (node == kRoot) return -1;
  std::size_t i = open_pos(node);
  std::int64_t h = heights_.get(i);
  if (h == 0) return kRoot;
  auto p = heights_.last_le(static_cast<std::ptrdiff_t>(i) - 1, h - 1);
  return char_id_at(static_cast<std::size_t>(p));
}

int HeightForest::enclosing(std::size_t gap) const {
  std::int64_t h = char_height(gap);
  if (h == 0) return kRoot;
  auto p = heights_.last_le(static_cast<std::ptrdiff_t>(gap) - 1, h - 1);
  return char_id_at(static_cast<std::size_t>(p));
}

std::optional<int> HeightForest::heavy_child(int node) const {
  std::size_t sz = subtree_size(node);
  if (sz <= 1) return std::nullopt;
  std::ptrdiff_t o = node == kRoot ? -1 : static_cast<std::ptrdiff_t>(open_pos(node));
  std::int64_t h = node == kRoot ? 0 : heights_.get(static_cast<std::size_t>(o)) + 1;
  // A heavy child spans more than half of the node, so it covers o + sz.
  std::ptrdiff_t c = heights_.last_le(o + static_cast<std::ptrdiff_t>(sz), h);
  if (c <= o) return std::nullopt;
  int child = char_id_at(static_cast<std::size_t>(c));
  if (floor_log2(subtree_size(child)) != floor_log2(sz)) return std::nullopt;
  return child;
}

int HeightForest::head_of(int node) const { return paths_.first(paths_.root_of(node)); }

int HeightForest::path_node(int head, int rank) const { return paths_.at(paths_.root_of(head), rank); }

int HeightForest::succ(int node) const { return paths_.next(node); }

int HeightForest::pred(int node) const { return paths_.prev(node); }

std::vector<int> HeightForest::heads() const {
  std::vector<int> out;
  out.reserve(data_.size());
  for (auto& [h, d] : data_) out.push_back(h);
  std::sort(out.begin(), out.end());
  return out;
}

std::vector<HeavyPathView> HeightForest::paths() const {
  std::vector<HeavyPathView> out;
  for (auto& [h, d] : data_) {
    HeavyPathView v;
    for (int x : paths_.to_vector(paths_.root_of(h))) v.opens.push_back(index_of(x));
    v.O = strs_.materialize_parens(d.O);
    v.C = strs_.materialize_parens(d.C);
    out.push_back(std::move(v));
  }
  std::sort(out.begin(), out.end(), [](const auto& a, const auto& b) { return a.opens[0] < b.opens[0]; });
  return out;
}

std::vector<HeavyPathView> HeightForest::reference_paths(ParenView a) {
  const std::size_t n = a.size();
  auto tw = twins(a);
  // Node k + 1 is the k-th opener; node 0 the virtual root.
  std::vector<int> parent{-1};
  std::vector<std::ptrdiff_t> open{-1};
  std::vector<int> stack{0};
  for (std::size_t i = 0; i < n; ++i) {
    if (a[i].opens()) {
      parent.push_back(stack.back());
      open.push_back(static_cast<std::ptrdiff_t>(i));
      stack.push_back(static_cast<int>(parent.size()) - 1);
    } else {
      stack.pop_back();
    }
  }
  auto hl = oracle::heavy_light_reference(parent);
  const int m = static_cast<int>(parent.size());
  std::vector<int> heavy_child(m, -1);
  for (int v = 1; v < m; ++v) {
    if (hl.heavy[v]) heavy_child[parent[v]] = v;
  }
  std::vector<HeavyPathView> out;
  for (int v = 0; v < m; ++v) {
    if (v != 0 && hl.heavy[v]) continue;
    HeavyPathView p;
    for (int x = v; x >= 0; x = heavy_child[x]) {
      p.opens.push_back(open[x]);
      if (x == 0) {
        p.O.push_back(open_paren(kRootType));
        p.C.push_back(open_paren(kRootType));
      } else {
        auto i = static_cast<std::size_t>(open[x]);
        p.O.push_back(open_paren(a[i].type));
        p.C.push_back(open_paren(a[static_cast<std::size_t>(tw[i])].type));
      }
    }
    out.push_back(std::move(p));
  }
  std::sort(out.begin(), out.end(), [](const auto& x, const auto& y) { return x.opens[0] < y.opens[0]; });
  return out;
}

ParenString HeightForest::heavy_string(int head) const {
  const PathData& d = data_.at(head);
  ParenString o = strs_.materialize_parens(d.O);
  ParenString c = strs_.materialize_parens(d.C);
  if (head == kRoot) {
    o.erase(o.begin());
    c.erase(c.begin());
  }
  ParenString out = o;
  for (std::size_t k = c.size(); k-- > 0;) out.push_back(c[k].flipped());
  return out;
}

std::pair<StrHandle, StrHandle> HeightForest::estimator_parts(int head) {
  const PathData d = data_.at(head);
  auto reserved_prefix = [&](StrHandle h, std::int64_t skip) {
    std::size_t lo = 0, hi = strs_.length(h);
    while (lo < hi) {
      std::size_t mid = (lo + hi) / 2;
      std::int64_t t = decode(strs_.at(h, mid)).type;
      if (t == kRootType || t == skip) lo = mid + 1;
      else hi = mid;
    }
    return lo;
  };
  std::size_t ko = reserved_prefix(d.O, kDummyType);
  std::size_t kc = reserved_prefix(d.C, kVirtualType);
  StrHandle l = strs_.substr(d.O, ko, strs_.length(d.O) - ko);
  StrHandle r = strs_.substr(d.C, kc, strs_.length(d.C) - kc);
  return {l, r};
}

std::vector<HeightForest::Seg> HeightForest::chain_from(int deepest) const {
  std::vector<Seg> segs;
  int x = deepest;
  while (x != kRoot && x >= 0) {
    int h = head_of(x);
    int r = paths_.rank(x);
    segs.push_back({h, h == kRoot ? 1 : 0, r});
    if (h == kRoot) break;
    x = parent(h);
  }
  return segs;
}

void HeightForest::break_after(int node, EditLog& log) {
  int s = succ(node);
  if (s < 0) return;
  int h = head_of(node);
  int r = paths_.rank(node);
  paths_.split(paths_.root_of(node), r + 1);
  PathData d = data_.at(h);
  auto [o1, o2] = strs_.split(d.O, static_cast<std::size_t>(r) + 1);
  auto [c1, c2] = strs_.split(d.C, static_cast<std::size_t>(r) + 1);
  strs_.release(d.O);
  strs_.release(d.C);
  data_[h] = {o1, c1};
  data_[s] = {o2, c2};
  log.delta.records.push_back({DeltaRecord::Op::path_split, h, static_cast<std::size_t>(r) + 1, {}});
  log.heads.insert(h);
  log.heads.insert(s);
}

void HeightForest::link(int upper, int lower, EditLog& log) {
  int h = head_of(upper);
  paths_.merge(paths_.root_of(upper), paths_.root_of(lower));
  PathData a = data_.at(h);
  PathData b = data_.at(lower);
  std::size_t at = strs_.length(a.O);
  StrHandle o = strs_.concat(a.O, b.O);
  StrHandle c = strs_.concat(a.C, b.C);
  strs_.release(a.O);
  strs_.release(a.C);
  strs_.release(b.O);
  strs_.release(b.C);
  data_.erase(lower);
  data_[h] = {o, c};
  log.delta.records.push_back({DeltaRecord::Op::path_join, h, at, {}});
  log.heads.insert(h);
  log.heads.insert(lower);
}

void HeightForest::create_node(int id, Paren opener, Paren closer, EditLog& log) {
  paths_.make_singleton(id);
  alive_[id] = 1;
  ParenString o{open_paren(opener.type)};
  ParenString c{open_paren(closer.type)};
  data_[id] = {strs_.add(o), strs_.add(c)};
  log.delta.records.push_back({DeltaRecord::Op::path_create, id, 0, opener});
  log.heads.insert(id);
}

void HeightForest::drop_node(int id, EditLog& log) {
  int p = pred(id);
  if (p >= 0) break_after(p, log);
  break_after(id, log);
  PathData d = data_.at(id);
  strs_.release(d.O);
  strs_.release(d.C);
  data_.erase(id);
  paths_.forget(id);
  alive_[id] = 0;
  log.delta.records.push_back({DeltaRecord::Op::path_remove, id, 0, {}});
  log.heads.insert(id);
  log.freed.push_back(id);
}

void HeightForest::shift_up(const std::vector<Seg>& segs, Paren top_in, Paren& bottom_out, EditLog& log) {
  Paren carry = top_in;
  for (std::size_t k = segs.size(); k-- > 0;) {
    const Seg& s = segs[k];
    PathData& d = data_.at(s.head);
    Paren out = decode(strs_.at(d.C, static_cast<std::size_t>(s.hi)));
    StrHandle c1 = strs_.erase(d.C, static_cast<std::size_t>(s.hi));
    StrHandle c2 = strs_.insert(c1, static_cast<std::size_t>(s.lo), encode(open_paren(carry.type)));
    strs_.release(d.C);
    strs_.release(c1);
    d.C = c2;
    log.delta.records.push_back({DeltaRecord::Op::c_erase, s.head, static_cast<std::size_t>(s.hi), {}});
    log.delta.records.push_back({DeltaRecord::Op::c_insert, s.head, static_cast<std::size_t>(s.lo), close_paren(carry.type)});
    log.heads.insert(s.head);
    carry = close_paren(out.type);
  }
  bottom_out = carry;
}

void HeightForest::shift_down(const std::vector<Seg>& segs, Paren bottom_in, Paren& top_out, EditLog& log) {
  Paren carry = bottom_in;
  for (const Seg& s : segs) {
    PathData& d = data_.at(s.head);
    Paren out = decode(strs_.at(d.C, static_cast<std::size_t>(s.lo)));
    StrHandle c1 = strs_.erase(d.C, static_cast<std::size_t>(s.lo));
    StrHandle c2 = strs_.insert(c1, static_cast<std::size_t>(s.hi), encode(open_paren(carry.type)));
    strs_.release(d.C);
    strs_.release(c1);
    d.C = c2;
    log.delta.records.push_back({DeltaRecord::Op::c_erase, s.head, static_cast<std::size_t>(s.lo), {}});
    log.delta.records.push_back({DeltaRecord::Op::c_insert, s.head, static_cast<std::size_t>(s.hi), close_paren(carry.type)});
    log.heads.insert(s.head);
    carry = close_paren(out.type);
  }
  top_out = carry;
}

void HeightForest::collect_candidates(const std::vector<Seg>& segs, std::vector<int>& out) const {
  for (const Seg& s : segs) {
    int len = paths_.size(paths_.root_of(s.head));
    int r = s.lo;
    while (r <= s.hi) {
      int x = path_node(s.head, r);
      int k = kdepth(x);
      out.push_back(x);
      int lo = r, hi = s.hi;
      while (lo < hi) {
        int mid = lo + (hi - lo + 1) / 2;
        if (kdepth(path_node(s.head, mid)) >= k) lo = mid;
        else hi = mid - 1;
      }
      out.push_back(path_node(s.head, lo));
      if (lo + 1 < len) out.push_back(path_node(s.head, lo + 1));
      r = lo + 1;
    }
  }
}

void HeightForest::relink(std::vector<int> work, EditLog& log) {
  std::size_t base = work.size();
  for (std::size_t k = 0; k < base; ++k) {
    int x = work[k];
    if (x >= 0 && alive_[x] && x != kRoot) work.push_back(parent(x));
  }
  std::size_t guard = 0;
  const std::size_t limit = 64 * (work.size() + 64);
  while (!work.empty()) {
    if (++guard > limit) throw std::logic_error("HeightForest::relink did not settle");
    int x = work.back();
    work.pop_back();
    if (x < 0 || !alive_[x]) continue;
    auto hc = heavy_child(x);
    int want = hc ? *hc : -1;
    int s = succ(x);
    if (s == want) continue;
    if (s >= 0) break_after(x, log);
    if (want >= 0) {
      int p = pred(want);
      if (p >= 0) {
        break_after(p, log);
        work.push_back(p);
      }
      link(x, want, log);
    }
  }
}

void HeightForest::top_released(Paren released, std::vector<int>& cands, EditLog& log) {
  if (released.type == kVirtualType) {
    std::size_t n = aug_size();
    int id = char_id_at(n - 1);
    chars_root_ = chars_.erase(id);
    chars_.forget(id);
    log.freed.push_back(id);
    heights_.erase(n - 1);
    --virtuals_;
    return;
  }
  int d = new_char(open_paren(kDummyType));
  chars_root_ = chars_.insert(chars_root_, 0, d);
  heights_.insert(0, 0);
  heights_.add(1, heights_.size(), 1);
  ++dummies_;
  create_node(d, open_paren(kDummyType), released, log);
  cands.push_back(d);
}

void HeightForest::open_insert(std::size_t j, std::int64_t type, EditLog& log) {
  int u = enclosing(j);
  auto segs = chain_from(u);
  int top = -1;
  bool top_dummy = false;
  if (!segs.empty()) {
    top = path_node(segs.back().head, segs.back().lo);
    top_dummy = decode(char_sym_[top]).type == kDummyType;
  }
  Paren bottom;
  shift_up(segs, close_paren(kVirtualType), bottom, log);
  std::int64_t hj = char_height(j);
  int w = new_char(open_paren(type));
  chars_root_ = chars_.insert(chars_root_, static_cast<int>(j), w);
  heights_.insert(j, hj);
  heights_.add(j + 1, heights_.size(), 1);
  std::vector<int> cands{kRoot, w, u};
  auto csegs = segs;
  if (top_dummy) {
    chars_root_ = chars_.erase(top);
    chars_.forget(top);
    heights_.erase(0);
    heights_.add(0, heights_.size(), -1);
    --dummies_;
    if (++csegs.back().lo > csegs.back().hi) csegs.pop_back();
  } else {
    int v = new_char(close_paren(kVirtualType));
    chars_root_ = chars_.insert(chars_root_, static_cast<int>(aug_size()), v);
    heights_.insert(heights_.size(), 1);
    ++virtuals_;
  }
  collect_candidates(csegs, cands);
  if (top_dummy) {
    cands.push_back(pred(top));
    cands.push_back(succ(top));
    drop_node(top, log);
  }
  create_node(w, open_paren(type), bottom, log);
  relink(std::move(cands), log);
}

void HeightForest::close_erase(std::size_t j, EditLog& log) {
  int w = node_at(j);
  auto segs = chain_from(w);
  int top = path_node(segs.back().head, segs.back().lo);
  bool top_dummy = decode(char_sym_[top]).type == kDummyType;
  Paren discarded;
  shift_up(segs, close_paren(kVirtualType), discarded, log);
  int id = char_id_at(j);
  chars_root_ = chars_.erase(id);
  chars_.forget(id);
  log.freed.push_back(id);
  heights_.erase(j);
  heights_.add(j, heights_.size(), 1);
  std::vector<int> cands{kRoot};
  auto csegs = segs;
  if (top_dummy) {
    chars_root_ = chars_.erase(top);
    chars_.forget(top);
    heights_.erase(0);
    heights_.add(0, heights_.size(), -1);
    --dummies_;
    if (++csegs.back().lo > csegs.back().hi) csegs.pop_back();
  } else {
    int v = new_char(close_paren(kVirtualType));
    chars_root_ = chars_.insert(chars_root_, static_cast<int>(aug_size()), v);
    heights_.insert(heights_.size(), 1);
    ++virtuals_;
  }
  collect_candidates(csegs, cands);
  if (top_dummy) {
    cands.push_back(pred(top));
    cands.push_back(succ(top));
    drop_node(top, log);
  }
  relink(std::move(cands), log);
}

void HeightForest::open_erase(std::size_t j, EditLog& log) {
  int w = char_id_at(j);
  int u = parent(w);
  auto segs = chain_from(u);
  Paren cw = sym_at(close_pos(w));
  std::vector<int> cands{kRoot, u, succ(w), pred(w)};
  drop_node(w, log);
  Paren released;
  shift_down(segs, cw, released, log);
  chars_root_ = chars_.erase(w);
  chars_.forget(w);
  heights_.erase(j);
  heights_.add(j, heights_.size(), -1);
  top_released(released, cands, log);
  collect_candidates(segs, cands);
  relink(std::move(cands), log);
}

void HeightForest::close_insert(std::size_t j, std::int64_t type, EditLog& log) {
  int u = enclosing(j);
  auto segs = chain_from(u);
  Paren released;
  shift_down(segs, close_paren(type), released, log);
  std::int64_t hj = char_height(j);
  int id = new_char(close_paren(type));
  chars_root_ = chars_.insert(chars_root_, static_cast<int>(j), id);
  heights_.insert(j, hj);
  heights_.add(j + 1, heights_.size(), -1);
  std::vector<int> cands{kRoot, u};
  top_released(released, cands, log);
  collect_candidates(segs, cands);
  relink(std::move(cands), log);
}

void HeightForest::substitute(std::size_t j, Paren p, EditLog& log) {
  int id = char_id_at(j);
  if (p.opens()) {
    int h = head_of(id);
    int r = paths_.rank(id);
    PathData& d = data_.at(h);
    StrHandle o = strs_.replace(d.O, static_cast<std::size_t>(r), encode(open_paren(p.type)));
    strs_.release(d.O);
    d.O = o;
    log.delta.records.push_back({DeltaRecord::Op::o_replace, h, static_cast<std::size_t>(r), p});
    log.heads.insert(h);
  } else {
    int w = node_at(j);
    int h = head_of(w);
    int r = paths_.rank(w);
    PathData& d = data_.at(h);
    StrHandle c = strs_.replace(d.C, static_cast<std::size_t>(r), encode(open_paren(p.type)));
    strs_.release(d.C);
    d.C = c;
    log.delta.records.push_back({DeltaRecord::Op::c_replace, h, static_cast<std::size_t>(r), p});
    log.heads.insert(h);
  }
  char_sym_[id] = encode(p);
}

HeavyStringDelta HeightForest::apply_edit(const CharEdit& e) {
  EditLog log;
  const std::size_t n = text_size();
  auto at = [&] { return e.pos + dummies_; };
  switch (e.op) {
    case CharEdit::Op::insert:
      if (e.pos > n) throw std::out_of_range("apply_edit: insert position");
      if (e.sym.type < 0) throw std::invalid_argument("apply_edit: reserved type");
      if (e.sym.opens()) open_insert(at(), e.sym.type, log);
      else close_insert(at(), e.sym.type, log);
      break;
    case CharEdit::Op::erase:
      if (e.pos >= n) throw std::out_of_range("apply_edit: erase position");
      if (sym_at(at()).opens()) open_erase(at(), log);
      else close_erase(at(), log);
      break;
    case CharEdit::Op::substitute: {
      if (e.pos >= n) throw std::out_of_range("apply_edit: substitute position");
      if (e.sym.type < 0) throw std::invalid_argument("apply_edit: reserved type");
      Paren cur = sym_at(at());
      if (cur.kind == e.sym.kind) {
        substitute(at(), e.sym, log);
      } else {
        if (cur.opens()) open_erase(at(), log);
        else close_erase(at(), log);
        if (e.sym.opens()) open_insert(at(), e.sym.type, log);
        else close_insert(at(), e.sym.type, log);
      }
      break;
    }
  }
  HeavyStringDelta out;
  finish(log, out);
  return out;
}

void HeightForest::finish(EditLog& log, HeavyStringDelta& out) {
  out.records = std::move(log.delta.records);
  std::vector<int> hs(log.heads.begin(), log.heads.end());
  std::sort(hs.begin(), hs.end());
  for (int h : hs) {
    if (h >= 0 && h < static_cast<int>(alive_.size()) && alive_[h] && pred(h) < 0) {
      out.touched_heads.push_back(h);
    } else {
      out.removed_heads.push_back(h);
    }
  }
  for (int id : log.freed) free_ids_.push_back(id);
}

}  // namespace bracketdyn
