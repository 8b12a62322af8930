#include "bracketdyn/forest_core.hpp"

#include <algorithm>
#include <string>

#include "bracketdyn/oracles.hpp"

namespace bracketdyn {

Forest::Forest(std::uint64_t seed) : order_(seed), h_(seed ^ 0x9e37) { h_.assign({0}); }

Forest::Forest(const PlainForest& f, std::uint64_t seed) : Forest(seed) {
  const int n = static_cast<int>(f.size());
  label_ = f.label;
  parent_ = f.parent;
  children_.assign(n, {});
  alive_.assign(n, true);
  alive_count_ = f.size();
  for (int v = 0; v < n; ++v) {
    if (f.parent[v] >= 0) children_[f.parent[v]].push_back(v);
    else roots_.push_back(v);
  }
  std::vector<std::int64_t> hs{0};
  std::vector<int> stack;
  auto push_token = [&](int tok, int delta) {
    seq_ = order_.insert(seq_, order_.size(seq_), tok);
    hs.push_back(hs.back() + delta);
  };
  for (int v = 0; v < n; ++v) {
    while (!stack.empty() && stack.back() != f.parent[v]) {
      push_token(2 * stack.back() + 1, -1);
      stack.pop_back();
    }
    push_token(2 * v, 1);
    stack.push_back(v);
  }
  while (!stack.empty()) {
    push_token(2 * stack.back() + 1, -1);
    stack.pop_back();
  }
  h_.assign(hs);
}

void Forest::check(int v) const {
  if (!alive(v)) throw StaleNode("Forest: stale node " + std::to_string(v));
}

std::int64_t Forest::label(int v) const {
  check(v);
  return label_[v];
}

std::size_t Forest::open_pos(int v) const {
  check(v);
  return static_cast<std::size_t>(order_.rank(2 * v));
}

std::size_t Forest::close_pos(int v) const {
  check(v);
  return static_cast<std::size_t>(order_.rank(2 * v + 1));
}

int Forest::node_at(std::size_t pos) const { return order_.at(seq_, static_cast<int>(pos)) / 2; }

bool Forest::opens_at(std::size_t pos) const { return order_.at(seq_, static_cast<int>(pos)) % 2 == 0; }

bool Forest::balanced(std::size_t from, std::size_t to) const {
  if (from > to || to > 2 * alive_count_) return false;
  if (from == to) return true;
  std::int64_t h = h_.get(from);
  return h_.get(to) == h && h_.range_min(from, to + 1) >= h;
}

std::size_t Forest::depth(int v) const { return static_cast<std::size_t>(h_.get(open_pos(v))); }

int Forest::parent(int v) const {
  check(v);
  return parent_[v];
}

int Forest::laq(int v, std::size_t d) const {
  std::size_t o = open_pos(v);
  auto dv = static_cast<std::size_t>(h_.get(o));
  if (d > dv) throw std::out_of_range("Forest::laq: level above the root");
  if (d == 0) return v;
  auto p = h_.last_le(static_cast<std::ptrdiff_t>(o) - 1, static_cast<std::int64_t>(dv - d));
  return node_at(static_cast<std::size_t>(p));
}

bool Forest::is_ancestor(int u, int v) const {
  return open_pos(u) <= open_pos(v) && close_pos(v) <= close_pos(u);
}

int Forest::lca(int u, int v) const {
  if (is_ancestor(u, v)) return u;
  if (is_ancestor(v, u)) return v;
  std::size_t a = std::min(open_pos(u), open_pos(v));
  std::size_t b = std::max(open_pos(u), open_pos(v));
  std::int64_t m = h_.range_min(a, b + 1);
  if (m == 0) return -1;
  int w = open_pos(u) == b ? u : v;
  return laq(w, depth(w) - static_cast<std::size_t>(m - 1));
}

std::size_t Forest::subtree_size(int v) const { return (1 + close_pos(v) - open_pos(v)) / 2; }

const std::vector<int>& Forest::children(int v) const {
  if (v < 0) return roots_;
  check(v);
  return children_[v];
}

std::size_t Forest::child_index(int v) const {
  const auto& sib = children(parent(v));
  return static_cast<std::size_t>(std::find(sib.begin(), sib.end(), v) - sib.begin());
}

std::size_t Forest::end_pos(int p) const {
  return p < 0 ? static_cast<std::size_t>(order_.size(seq_)) : close_pos(p);
}

ParenString Forest::str() const {
  ParenString out;
  for (int tok : order_.to_vector(seq_)) {
    out.push_back({tok % 2 ? Kind::close : Kind::open, label_[tok / 2]});
  }
  return out;
}

PlainForest Forest::to_plain(std::vector<int>* ids) const {
  PlainForest f;
  std::vector<int> index(label_.size(), -1);
  std::vector<int> stack;
  if (ids) ids->clear();
  for (int tok : order_.to_vector(seq_)) {
    int v = tok / 2;
    if (tok % 2) {
      stack.pop_back();
      continue;
    }
    index[v] = static_cast<int>(f.size());
    f.label.push_back(label_[v]);
    f.parent.push_back(stack.empty() ? -1 : index[stack.back()]);
    if (ids) ids->push_back(v);
    stack.push_back(v);
  }
  return f;
}

EditDelta Forest::apply(const NodeEdit& e) {
  EditDelta d;
  d.op = e.op;
  switch (e.op) {
    case NodeEdit::Op::insert: {
      if (e.parent >= 0) check(e.parent);
      auto& ch = kids(e.parent);
      if (e.first > e.last || e.last > ch.size()) throw std::invalid_argument("Forest: invalid adoption interval");
      std::size_t po = e.first < ch.size() ? open_pos(ch[e.first]) : end_pos(e.parent);
      std::size_t pc = (e.last < ch.size() ? open_pos(ch[e.last]) : end_pos(e.parent)) + 1;
      int v = static_cast<int>(label_.size());
      label_.push_back(e.label);
      parent_.push_back(e.parent);
      alive_.push_back(true);
      ++alive_count_;
      std::vector<int> adopted(ch.begin() + static_cast<std::ptrdiff_t>(e.first),
                               ch.begin() + static_cast<std::ptrdiff_t>(e.last));
      children_.push_back(std::move(adopted));
      for (int c : children_[v]) parent_[c] = v;
      auto& ch2 = kids(e.parent);
      ch2.erase(ch2.begin() + static_cast<std::ptrdiff_t>(e.first), ch2.begin() + static_cast<std::ptrdiff_t>(e.last));
      ch2.insert(ch2.begin() + static_cast<std::ptrdiff_t>(e.first), v);

      seq_ = order_.insert(seq_, static_cast<int>(po), 2 * v);
      h_.insert(po, h_.get(po));
      h_.add(po + 1, h_.size(), 1);
      seq_ = order_.insert(seq_, static_cast<int>(pc), 2 * v + 1);
      h_.insert(pc, h_.get(pc));
      h_.add(pc + 1, h_.size(), -1);
      d.node = v;
      d.parent = e.parent;
      d.open_pos = po;
      d.close_pos = pc;
      d.old_label = e.label;
      return d;
    }
    case NodeEdit::Op::erase: {
      check(e.node);
      int v = e.node;
      int p = parent_[v];
      d.node = v;
      d.parent = p;
      d.open_pos = open_pos(v);
      d.close_pos = close_pos(v);
      d.old_label = label_[v];
      auto& ch = kids(p);
      auto at = std::find(ch.begin(), ch.end(), v);
      at = ch.erase(at);
      ch.insert(at, children_[v].begin(), children_[v].end());
      for (int c : children_[v]) parent_[c] = p;
      children_[v].clear();
      alive_[v] = false;
      --alive_count_;

      seq_ = order_.erase(2 * v + 1);
      order_.forget(2 * v + 1);
      h_.erase(d.close_pos + 1);
      h_.add(d.close_pos + 1, h_.size(), 1);
      seq_ = order_.erase(2 * v);
      order_.forget(2 * v);
      h_.erase(d.open_pos + 1);
      h_.add(d.open_pos + 1, h_.size(), -1);
      return d;
    }
    case NodeEdit::Op::relabel: {
      check(e.node);
      d.node = e.node;
      d.parent = parent_[e.node];
      d.open_pos = open_pos(e.node);
      d.close_pos = close_pos(e.node);
      d.old_label = label_[e.node];
      label_[e.node] = e.label;
      return d;
    }
  }
  return d;
}

HldContext::HldContext(std::uint64_t seed) : strs_(StrCollection::Content::parens, seed) {}

int HldContext::intern(StrHandle h, int heavy_depth) {
  auto key = std::make_tuple(strs_.fingerprint(h), strs_.length(h), heavy_depth);
  auto it = ids_.find(key);
  if (it != ids_.end()) {
    strs_.release(h);
    return it->second;
  }
  int id = static_cast<int>(rep_.size());
  ids_.emplace(key, id);
  rep_.push_back(h);
  rep_hd_.push_back(heavy_depth);
  return id;
}

std::size_t heavy_depth_of_size(std::size_t size) { return oracle::floor_log2(size); }

HldLabels::HldLabels(const Forest& f, HldContext& ctx) : ctx_(&ctx) {
  auto& S = ctx.strings();
  s_ = S.add(f.str());
  hd_.assign(f.id_bound(), -1);
  id_.assign(f.id_bound(), -1);
  std::vector<int> ids;
  PlainForest pf = f.to_plain(&ids);
  auto sz = pf.subtree_sizes();
  for (std::size_t k = 0; k < ids.size(); ++k) hd_[ids[k]] = static_cast<int>(heavy_depth_of_size(sz[k]));
  for (int v : ids) id_[v] = compute(f, v, hd_[v]);
  std::vector<Symbol> p;
  for (std::size_t i = 0, n = S.length(s_); i < n; ++i) {
    int v = f.node_at(i);
    p.push_back(phld_symbol(f.opens_at(i) ? Kind::open : Kind::close, id_[v]));
  }
  p_ = S.add(p);
}

HldLabels::~HldLabels() {
  auto& S = ctx_->strings();
  S.release(s_);
  S.release(p_);
}

bool HldLabels::is_heavy(const Forest& f, int v) const {
  int p = f.parent(v);
  return p >= 0 && hd_[v] == hd_[p];
}

int HldLabels::heavy_child(const Forest& f, int v) const {
  for (int c : f.children(v)) {
    if (static_cast<int>(heavy_depth_of_size(f.subtree_size(c))) == hd_[v]) return c;
  }
  return -1;
}

int HldLabels::compute(const Forest& f, int v, int hd) {
  auto& S = ctx_->strings();
  std::size_t o = f.open_pos(v), c = f.close_pos(v);
  int hc = -1;
  for (int ch : f.children(v)) {
    if (static_cast<int>(heavy_depth_of_size(f.subtree_size(ch))) == hd) hc = ch;
  }
  StrHandle h;
  if (hc < 0) {
    h = S.substr(s_, o, c - o + 1);
  } else {
    std::size_t ho = f.open_pos(hc), hcl = f.close_pos(hc);
    ParenString hash{open_paren(kHashType), close_paren(kHashType)};
    StrHandle a = S.substr(s_, o, ho - o);
    StrHandle m = S.add(hash);
    StrHandle b = S.substr(s_, hcl + 1, c - hcl);
    StrHandle am = S.concat(a, m);
    h = S.concat(am, b);
    S.release(a);
    S.release(m);
    S.release(b);
    S.release(am);
  }
  return ctx_->intern(h, hd);
}

ParenString HldLabels::phld_string() const { return ctx_->strings().materialize_parens(p_); }

std::vector<LabelChange> HldLabels::update(const Forest& f, const EditDelta& d) {
  auto& S = ctx_->strings();
  auto edit = [&](StrHandle& h, StrHandle nh) {
    S.release(h);
    h = nh;
  };
  std::vector<LabelChange> out;
  int start = d.node;
  switch (d.op) {
    case NodeEdit::Op::insert: {
      hd_.resize(f.id_bound(), -1);
      id_.resize(f.id_bound(), -1);
      std::int64_t l = f.label(d.node);
      edit(s_, S.insert(s_, d.open_pos, encode(open_paren(l))));
      edit(s_, S.insert(s_, d.close_pos, encode(close_paren(l))));
      edit(p_, S.insert(p_, d.open_pos, phld_symbol(Kind::open, 0)));
      edit(p_, S.insert(p_, d.close_pos, phld_symbol(Kind::close, 0)));
      break;
    }
    case NodeEdit::Op::erase: {
      edit(s_, S.erase(s_, d.close_pos));
      edit(s_, S.erase(s_, d.open_pos));
      edit(p_, S.erase(p_, d.close_pos));
      edit(p_, S.erase(p_, d.open_pos));
      out.push_back({d.node, id_[d.node], -1});
      hd_[d.node] = id_[d.node] = -1;
      start = d.parent;
      break;
    }
    case NodeEdit::Op::relabel: {
      std::int64_t l = f.label(d.node);
      edit(s_, S.replace(s_, d.open_pos, encode(open_paren(l))));
      edit(s_, S.replace(s_, d.close_pos, encode(close_paren(l))));
      break;
    }
  }
  const int forced_parent = d.op == NodeEdit::Op::relabel ? -1 : d.parent;
  int child_old = 0, child_new = 0;
  bool have_child = false;
  for (int a = start; a >= 0; a = f.parent(a)) {
    int old_hd = hd_[a];
    int new_hd = static_cast<int>(heavy_depth_of_size(f.subtree_size(a)));
    bool need = a == d.node || a == forced_parent || old_hd != new_hd;
    // The path child is light before or after the edit.
    if (have_child) need = need || child_old != old_hd || child_new != new_hd;
    hd_[a] = new_hd;
    if (need) {
      int nid = compute(f, a, new_hd);
      if (nid != id_[a]) {
        out.push_back({a, id_[a], nid});
        id_[a] = nid;
        edit(p_, S.replace(p_, f.open_pos(a), phld_symbol(Kind::open, nid)));
        edit(p_, S.replace(p_, f.close_pos(a), phld_symbol(Kind::close, nid)));
      }
    }
    child_old = old_hd;
    child_new = new_hd;
    have_child = true;
  }
  return out;
}

std::vector<LabelChange> maintain_phld(const Forest& f, HldLabels& labels, const EditDelta& d) {
  return labels.update(f, d);
}

std::vector<int> light_ancestors(const Forest& f, const HldLabels& labels, int v, bool include_self) {
  std::vector<int> out;
  if (include_self && !labels.is_heavy(f, v)) out.push_back(v);
  for (int a = f.parent(v); a >= 0; a = f.parent(a)) {
    if (!labels.is_heavy(f, a)) out.push_back(a);
  }
  std::reverse(out.begin(), out.end());
  return out;
}

int StaticHldInterner::intern(const ParenString& light_subtree, int heavy_depth) {
  auto key = std::make_pair(light_subtree, heavy_depth);
  auto it = ids_.find(key);
  if (it != ids_.end()) return it->second;
  int id = static_cast<int>(keys_.size());
  ids_.emplace(key, id);
  keys_.push_back(std::move(key));
  return id;
}

namespace {

ParenString light_subtree_sized(const PlainForest& f, const std::vector<int>& sz, int v) {
  const int hd = static_cast<int>(oracle::floor_log2(sz[v]));
  int hc = -1;
  for (int c = v + 1; c < v + sz[v]; c += sz[c]) {
    if (static_cast<int>(oracle::floor_log2(sz[c])) == hd) hc = c;
  }
  ParenString out;
  std::vector<int> stack;
  auto close_to = [&](int p) {
    while (!stack.empty() && stack.back() != p) {
      out.push_back(close_paren(f.label[stack.back()]));
      stack.pop_back();
    }
  };
  for (int u = v; u < v + sz[v];) {
    close_to(f.parent[u]);
    if (u == hc) {
      out.push_back(open_paren(kHashType));
      out.push_back(close_paren(kHashType));
      u += sz[u];
      continue;
    }
    out.push_back(open_paren(f.label[u]));
    stack.push_back(u);
    ++u;
  }
  close_to(-2);
  return out;
}

}  // namespace

ParenString light_subtree(const PlainForest& f, int v) { return light_subtree_sized(f, f.subtree_sizes(), v); }

PlainForest hld_forest(const PlainForest& f, StaticHldInterner& in) {
  auto sz = f.subtree_sizes();
  PlainForest g = f;
  for (std::size_t v = 0; v < f.size(); ++v) {
    int vi = static_cast<int>(v);
    g.label[v] = in.intern(light_subtree_sized(f, sz, vi), static_cast<int>(oracle::floor_log2(sz[v])));
  }
  return g;
}

ParenString phld_string(const PlainForest& f, StaticHldInterner& in) { return hld_forest(f, in).to_parens(); }

}  // namespace bracketdyn
