#include "bracketdyn/dyck_dynamic.hpp"

#include <algorithm>
#include <cmath>
#include <deque>
#include <stdexcept>

namespace bracketdyn {

HatTree::HatTree(ParenView x, std::uint64_t seed)
    : strs_(StrCollection::Content::parens, seed), rng_(seed) {
  empty_ = strs_.empty_string();
  if (x.empty()) return;
  root_ = build(x, 0, x.size());
  // Heap-ordered priorities: sorted random values handed out in breadth-first order.
  std::vector<std::uint32_t> pr(x.size());
  for (auto& p : pr) p = static_cast<std::uint32_t>(rng_());
  std::sort(pr.rbegin(), pr.rend());
  std::deque<int> q{root_};
  std::size_t k = 0;
  while (!q.empty()) {
    int t = q.front();
    q.pop_front();
    nodes_[t].prio = pr[k++];
    if (nodes_[t].l >= 0) q.push_back(nodes_[t].l);
    if (nodes_[t].r >= 0) q.push_back(nodes_[t].r);
  }
}

int HatTree::make(Paren p) {
  int t;
  if (!free_.empty()) {
    t = free_.back();
    free_.pop_back();
    nodes_[t] = Node{};
  } else {
    t = static_cast<int>(nodes_.size());
    nodes_.emplace_back();
  }
  nodes_[t].sym = p;
  nodes_[t].prio = static_cast<std::uint32_t>(rng_());
  return t;
}

int HatTree::build(ParenView x, std::size_t lo, std::size_t hi) {
  if (lo >= hi) return -1;
  std::size_t mid = lo + (hi - lo) / 2;
  int t = make(x[mid]);
  int l = build(x, lo, mid);
  int r = build(x, mid + 1, hi);
  nodes_[t].l = l;
  nodes_[t].r = r;
  pull(t);
  return t;
}

StrHandle HatTree::join(StrHandle a, StrHandle b) {
  std::size_t la = strs_.length(a), lb = strs_.length(b);
  if (la == 0) return strs_.substr(b, 0, lb);
  if (lb == 0) return strs_.substr(a, 0, la);
  StrHandle ta = strs_.add_transpose(a);
  std::size_t cancel = 0;
  if (decode(strs_.at(ta, 0)).closes()) cancel = std::min(strs_.lmp_query(ta), strs_.lcp(ta, b));
  strs_.release(ta);
  if (cancel == 0) return strs_.concat(a, b);
  StrHandle pa = strs_.substr(a, 0, la - cancel);
  StrHandle sb = strs_.substr(b, cancel, lb - cancel);
  StrHandle out = strs_.concat(pa, sb);
  strs_.release(pa);
  strs_.release(sb);
  return out;
}

void HatTree::pull(int t) {
  Node& n = nodes_[t];
  n.size = 1;
  StrHandle left = n.l >= 0 ? nodes_[n.l].hat : empty_;
  StrHandle right = n.r >= 0 ? nodes_[n.r].hat : empty_;
  if (n.l >= 0) n.size += nodes_[n.l].size;
  if (n.r >= 0) n.size += nodes_[n.r].size;
  ParenString one{n.sym};
  StrHandle mid = strs_.add(one);
  StrHandle lm = join(left, mid);
  StrHandle all = join(lm, right);
  strs_.release(mid);
  strs_.release(lm);
  if (n.hat.valid()) strs_.release(n.hat);
  n.hat = all;
}

std::pair<int, int> HatTree::split(int t, std::size_t k) {
  if (t < 0) return {-1, -1};
  std::size_t ls = nodes_[t].l >= 0 ? nodes_[nodes_[t].l].size : 0;
  if (k <= ls) {
    auto [a, b] = split(nodes_[t].l, k);
    nodes_[t].l = b;
    pull(t);
    return {a, t};
  }
  auto [a, b] = split(nodes_[t].r, k - ls - 1);
  nodes_[t].r = a;
  pull(t);
  return {t, b};
}

int HatTree::merge(int a, int b) {
  if (a < 0) return b;
  if (b < 0) return a;
  if (nodes_[a].prio >= nodes_[b].prio) {
    nodes_[a].r = merge(nodes_[a].r, b);
    pull(a);
    return a;
  }
  nodes_[b].l = merge(a, nodes_[b].l);
  pull(b);
  return b;
}

void HatTree::apply_edit(const CharEdit& e) {
  const std::size_t n = size();
  switch (e.op) {
    case CharEdit::Op::insert: {
      if (e.pos > n) throw std::out_of_range("HatTree: insert position");
      auto [a, b] = split(root_, e.pos);
      int t = make(e.sym);
      pull(t);
      root_ = merge(merge(a, t), b);
      break;
    }
    case CharEdit::Op::erase:
    case CharEdit::Op::substitute: {
      if (e.pos >= n) throw std::out_of_range("HatTree: position");
      auto [a, rest] = split(root_, e.pos);
      auto [m, c] = split(rest, 1);
      if (e.op == CharEdit::Op::erase) {
        strs_.release(nodes_[m].hat);
        nodes_[m].hat = StrHandle{};
        free_.push_back(m);
        root_ = merge(a, c);
      } else {
        nodes_[m].sym = e.sym;
        pull(m);
        root_ = merge(merge(a, m), c);
      }
      break;
    }
  }
}

StrHandle HatTree::hat() const { return root_ < 0 ? empty_ : nodes_[root_].hat; }

void HatTree::collect(int t, ParenString& out) const {
  // Iterative in-order walk.
  std::vector<int> stack;
  while (t >= 0 || !stack.empty()) {
    while (t >= 0) {
      stack.push_back(t);
      t = nodes_[t].l;
    }
    t = stack.back();
    stack.pop_back();
    out.push_back(nodes_[t].sym);
    t = nodes_[t].r;
  }
}

ParenString HatTree::text() const {
  ParenString out;
  collect(root_, out);
  return out;
}

Strategy parse_strategy(const std::string& s) {
  if (s == "heavy") return Strategy::heavy;
  if (s == "large") return Strategy::large;
  if (s == "small") return Strategy::small;
  if (s == "combined") return Strategy::combined;
  throw std::invalid_argument("unknown strategy: " + s);
}

std::string to_string(Strategy s) {
  switch (s) {
    case Strategy::heavy: return "heavy";
    case Strategy::large: return "large";
    case Strategy::small: return "small";
    case Strategy::combined: return "combined";
  }
  return "?";
}

std::size_t epoch_length(std::size_t a, double f) {
  double lg = a < 2 ? 1.0 : std::log2(static_cast<double>(a));
  return static_cast<std::size_t>(std::floor(static_cast<double>(a) / (4.0 * f * (3.0 + 2.0 * lg))));
}

DyckSession::DyckSession(ParenView x, Strategy strategy, std::unique_ptr<EdBackend> backend, EdMode mode,
                         std::uint64_t seed)
    : strategy_(strategy), active_(strategy), backend_(std::move(backend)), mode_(mode), n_(x.size()) {
  if (!backend_) throw std::invalid_argument("DyckSession: backend required");
  switch (strategy_) {
    case Strategy::heavy:
      forest_ = std::make_unique<HeightForest>(x, seed);
      heavy_init();
      return;
    case Strategy::large:
      x_.assign(x.begin(), x.end());
      break;
    case Strategy::small:
      hat_ = std::make_unique<HatTree>(x, seed);
      break;
    case Strategy::combined:
      x_.assign(x.begin(), x.end());
      hat_ = std::make_unique<HatTree>(x, seed);
      break;
  }
  start_epoch();
}

ParenString DyckSession::text() const {
  if (forest_) return forest_->text();
  if (hat_) return hat_->text();
  return x_;
}

void DyckSession::heavy_init() {
  auto& c = forest_->strings();
  for (int h : forest_->heads()) {
    auto [l, r] = forest_->estimator_parts(h);
    std::size_t v = backend_->distance(c, l, r, mode_);
    c.release(l);
    c.release(r);
    cached_[h] = v;
    sum_ += v;
    ++counters_.backend_calls;
  }
  a_ = 2 * sum_;
}

void DyckSession::heavy_update(const CharEdit& e) {
  auto d = forest_->apply_edit(e);
  counters_.last_delta = d.size();
  counters_.delta_records += d.size();
  for (int h : d.removed_heads) {
    auto it = cached_.find(h);
    if (it == cached_.end()) continue;
    sum_ -= it->second;
    cached_.erase(it);
  }
  auto& c = forest_->strings();
  counters_.last_recomputed = d.touched_heads.size();
  for (int h : d.touched_heads) {
    auto [l, r] = forest_->estimator_parts(h);
    std::size_t v = backend_->distance(c, l, r, mode_);
    c.release(l);
    c.release(r);
    auto& slot = cached_[h];
    sum_ = sum_ - slot + v;
    slot = v;
    ++counters_.backend_calls;
    ++counters_.recomputed_heads;
  }
  a_ = 2 * sum_;
}

std::size_t DyckSession::large_estimate() {
  auto c = build_collection(x_);
  counters_.backend_calls += c.members.size();
  return 2 * estimate_from_collection(c, *backend_, mode_);
}

std::size_t DyckSession::small_estimate() {
  auto& sc = hat_->strings();
  auto h = build_collection_fast(sc, hat_->hat());
  counters_.backend_calls += h.members.size();
  std::size_t v = estimate_from_handles(sc, h, bk_, mode_);
  release(sc, h);
  return 2 * v;
}

void DyckSession::start_epoch() {
  ++counters_.epochs;
  if (strategy_ == Strategy::combined) {
    active_ = static_cast<double>(a_) <= std::sqrt(static_cast<double>(n_)) ? Strategy::small : Strategy::large;
  }
  double f = 1.0;
  if (active_ == Strategy::large) {
    a_ = large_estimate();
    f = backend_->factor();
  } else {
    a_ = small_estimate();
  }
  remaining_ = epoch_length(a_, f);
}

std::size_t DyckSession::apply(const CharEdit& e) {
  if (e.op == CharEdit::Op::insert ? e.pos > n_ : e.pos >= n_) throw std::out_of_range("DyckSession: edit position");
  ++counters_.edits;
  if (strategy_ == Strategy::heavy) {
    heavy_update(e);
  } else {
    if (strategy_ != Strategy::small) apply_edit(x_, e);
    if (hat_) hat_->apply_edit(e);
  }
  if (e.op == CharEdit::Op::insert) ++n_;
  if (e.op == CharEdit::Op::erase) --n_;
  if (strategy_ == Strategy::heavy) return a_;
  // A substitution can move the deletion-only distance by two.
  std::size_t cost = e.op == CharEdit::Op::substitute ? 2 : 1;
  if (remaining_ >= cost) {
    remaining_ -= cost;
  } else {
    start_epoch();
  }
  return a_;
}

}  // namespace bracketdyn
