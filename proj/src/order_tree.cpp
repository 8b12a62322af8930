#include "bracketdyn/order_tree.hpp"

#include <algorithm>
#include <limits>
#include <stdexcept>

namespace bracketdyn {

void OrderTree::ensure(int id) {
  if (id < 0) throw std::invalid_argument("OrderTree: negative id");
  if (id >= static_cast<int>(l_.size())) {
    std::size_t n = std::max<std::size_t>(static_cast<std::size_t>(id) + 1, l_.size() * 2);
    l_.resize(n, -1);
    r_.resize(n, -1);
    p_.resize(n, -1);
    sz_.resize(n, 0);
    prio_.resize(n, 0);
  }
}

void OrderTree::make_singleton(int id) {
  ensure(id);
  l_[id] = r_[id] = p_[id] = -1;
  sz_[id] = 1;
  prio_[id] = static_cast<std::uint32_t>(rng_());
}

void OrderTree::forget(int id) {
  if (!contains(id)) return;
  if (sz_[id] != 1 || p_[id] >= 0) throw std::logic_error("OrderTree::forget on attached id");
  sz_[id] = 0;
}

void OrderTree::pull(int t) {
  sz_[t] = 1;
  if (l_[t] >= 0) {
    sz_[t] += sz_[l_[t]];
    p_[l_[t]] = t;
  }
  if (r_[t] >= 0) {
    sz_[t] += sz_[r_[t]];
    p_[r_[t]] = t;
  }
}

int OrderTree::root_of(int id) const {
  while (p_[id] >= 0) id = p_[id];
  return id;
}

int OrderTree::rank(int id) const {
  int k = l_[id] < 0 ? 0 : sz_[l_[id]];
  while (p_[id] >= 0) {
    int p = p_[id];
    if (r_[p] == id) k += 1 + (l_[p] < 0 ? 0 : sz_[l_[p]]);
    id = p;
  }
  return k;
}

int OrderTree::at(int root, int k) const {
  int t = root;
  while (t >= 0) {
    int ls = l_[t] < 0 ? 0 : sz_[l_[t]];
    if (k < ls) {
      t = l_[t];
    } else if (k == ls) {
      return t;
    } else {
      k -= ls + 1;
      t = r_[t];
    }
  }
  throw std::out_of_range("OrderTree::at");
}

int OrderTree::first(int root) const {
  if (root < 0) return -1;
  while (l_[root] >= 0) root = l_[root];
  return root;
}

int OrderTree::last(int root) const {
  if (root < 0) return -1;
  while (r_[root] >= 0) root = r_[root];
  return root;
}

int OrderTree::next(int id) const {
  if (r_[id] >= 0) return first(r_[id]);
  while (p_[id] >= 0 && r_[p_[id]] == id) id = p_[id];
  return p_[id];
}

int OrderTree::prev(int id) const {
  if (l_[id] >= 0) return last(l_[id]);
  while (p_[id] >= 0 && l_[p_[id]] == id) id = p_[id];
  return p_[id];
}

std::pair<int, int> OrderTree::split(int root, int k) {
  if (root < 0) return {-1, -1};
  p_[root] = -1;
  int ls = l_[root] < 0 ? 0 : sz_[l_[root]];
  if (k <= ls) {
    auto [a, b] = split(l_[root], k);
    l_[root] = b;
    pull(root);
    if (a >= 0) p_[a] = -1;
    return {a, root};
  }
  auto [a, b] = split(r_[root], k - ls - 1);
  r_[root] = a;
  pull(root);
  if (b >= 0) p_[b] = -1;
  return {root, b};
}

int OrderTree::merge(int a, int b) {
  if (a < 0) return b;
  if (b < 0) return a;
  if (prio_[a] > prio_[b]) {
    r_[a] = merge(r_[a], b);
    pull(a);
    p_[a] = -1;
    return a;
  }
  l_[b] = merge(a, l_[b]);
  pull(b);
  p_[b] = -1;
  return b;
}

int OrderTree::insert(int root, int k, int id) {
  make_singleton(id);
  auto [a, b] = split(root, k);
  return merge(merge(a, id), b);
}

int OrderTree::erase(int id) {
  int root = root_of(id);
  int k = rank(id);
  auto [a, rest] = split(root, k);
  auto [mid, b] = split(rest, 1);
  (void)mid;
  l_[id] = r_[id] = p_[id] = -1;
  sz_[id] = 1;
  return merge(a, b);
}

std::vector<int> OrderTree::to_vector(int root) const {
  std::vector<int> out;
  std::vector<int> stack;
  int t = root;
  while (t >= 0 || !stack.empty()) {
    while (t >= 0) {
      stack.push_back(t);
      t = l_[t];
    }
    t = stack.back();
    stack.pop_back();
    out.push_back(t);
    t = r_[t];
  }
  return out;
}

int HeightSeq::node(std::int64_t v) {
  int id;
  if (!free_.empty()) {
    id = free_.back();
    free_.pop_back();
  } else {
    id = static_cast<int>(l_.size());
    l_.push_back(-1);
    r_.push_back(-1);
    sz_.push_back(1);
    val_.push_back(0);
    mn_.push_back(0);
    lz_.push_back(0);
    prio_.push_back(0);
  }
  l_[id] = r_[id] = -1;
  sz_[id] = 1;
  val_[id] = mn_[id] = v;
  lz_[id] = 0;
  prio_[id] = static_cast<std::uint32_t>(rng_());
  return id;
}

void HeightSeq::apply(int t, std::int64_t d) {
  if (t < 0) return;
  val_[t] += d;
  mn_[t] += d;
  lz_[t] += d;
}

void HeightSeq::push(int t) {
  if (lz_[t] != 0) {
    apply(l_[t], lz_[t]);
    apply(r_[t], lz_[t]);
    lz_[t] = 0;
  }
}

void HeightSeq::pull(int t) {
  sz_[t] = 1;
  mn_[t] = val_[t];
  if (l_[t] >= 0) {
    sz_[t] += sz_[l_[t]];
    mn_[t] = std::min(mn_[t], mn_[l_[t]]);
  }
  if (r_[t] >= 0) {
    sz_[t] += sz_[r_[t]];
    mn_[t] = std::min(mn_[t], mn_[r_[t]]);
  }
}

std::pair<int, int> HeightSeq::split(int t, int k) {
  if (t < 0) return {-1, -1};
  push(t);
  int ls = l_[t] < 0 ? 0 : sz_[l_[t]];
  if (k <= ls) {
    auto [a, b] = split(l_[t], k);
    l_[t] = b;
    pull(t);
    return {a, t};
  }
  auto [a, b] = split(r_[t], k - ls - 1);
  r_[t] = a;
  pull(t);
  return {t, b};
}

int HeightSeq::merge(int a, int b) {
  if (a < 0) return b;
  if (b < 0) return a;
  if (prio_[a] > prio_[b]) {
    push(a);
    r_[a] = merge(r_[a], b);
    pull(a);
    return a;
  }
  push(b);
  l_[b] = merge(a, l_[b]);
  pull(b);
  return b;
}

void HeightSeq::assign(const std::vector<std::int64_t>& values) {
  l_.clear();
  r_.clear();
  sz_.clear();
  val_.clear();
  mn_.clear();
  lz_.clear();
  prio_.clear();
  free_.clear();
  root_ = -1;
  // Cartesian tree by priority in linear time.
  std::vector<int> stack;
  for (auto v : values) {
    int id = node(v);
    int last = -1;
    while (!stack.empty() && prio_[stack.back()] < prio_[id]) {
      last = stack.back();
      stack.pop_back();
    }
    l_[id] = last;
    if (!stack.empty()) r_[stack.back()] = id;
    stack.push_back(id);
  }
  if (stack.empty()) return;
  root_ = stack.front();
  // Postorder pull.
  std::vector<std::pair<int, bool>> todo{{root_, false}};
  while (!todo.empty()) {
    auto [t, done] = todo.back();
    todo.pop_back();
    if (done) {
      pull(t);
      continue;
    }
    todo.push_back({t, true});
    if (l_[t] >= 0) todo.push_back({l_[t], false});
    if (r_[t] >= 0) todo.push_back({r_[t], false});
  }
}

void HeightSeq::insert(std::size_t pos, std::int64_t value) {
  if (pos > size()) throw std::out_of_range("HeightSeq::insert");
  auto [a, b] = split(root_, static_cast<int>(pos));
  root_ = merge(merge(a, node(value)), b);
}

void HeightSeq::erase(std::size_t pos) {
  if (pos >= size()) throw std::out_of_range("HeightSeq::erase");
  auto [a, rest] = split(root_, static_cast<int>(pos));
  auto [mid, b] = split(rest, 1);
  free_.push_back(mid);
  root_ = merge(a, b);
}

void HeightSeq::add(std::size_t from, std::size_t to, std::int64_t delta) {
  if (from >= to) return;
  if (to > size()) throw std::out_of_range("HeightSeq::add");
  auto [a, rest] = split(root_, static_cast<int>(from));
  auto [mid, b] = split(rest, static_cast<int>(to - from));
  apply(mid, delta);
  root_ = merge(merge(a, mid), b);
}

std::int64_t HeightSeq::get(std::size_t pos) const {
  if (pos >= size()) throw std::out_of_range("HeightSeq::get");
  int t = root_;
  std::int64_t acc = 0;
  for (;;) {
    int ls = l_[t] < 0 ? 0 : sz_[l_[t]];
    if (static_cast<int>(pos) < ls) {
      acc += lz_[t];
      t = l_[t];
    } else if (static_cast<int>(pos) == ls) {
      return val_[t] + acc;
    } else {
      pos -= ls + 1;
      acc += lz_[t];
      t = r_[t];
    }
  }
}

std::int64_t HeightSeq::range_min_rec(int t, std::size_t from, std::size_t to, std::int64_t acc,
                                      std::size_t base) const {
  const std::int64_t inf = std::numeric_limits<std::int64_t>::max();
  if (t < 0) return inf;
  std::size_t end = base + sz_[t];
  if (to <= base || end <= from) return inf;
  if (from <= base && end <= to) return mn_[t] + acc;
  std::size_t ls = l_[t] < 0 ? 0 : sz_[l_[t]];
  std::size_t me = base + ls;
  std::int64_t best = inf;
  best = std::min(best, range_min_rec(l_[t], from, to, acc + lz_[t], base));
  if (from <= me && me < to) best = std::min(best, val_[t] + acc);
  best = std::min(best, range_min_rec(r_[t], from, to, acc + lz_[t], me + 1));
  return best;
}

std::int64_t HeightSeq::range_min(std::size_t from, std::size_t to) const {
  if (from >= to || to > size()) throw std::out_of_range("HeightSeq::range_min");
  return range_min_rec(root_, from, to, 0, 0);
}

std::ptrdiff_t HeightSeq::first_le_rec(int t, std::size_t from, std::int64_t h, std::int64_t acc,
                                       std::size_t base) const {
  if (t < 0) return -1;
  if (base + sz_[t] <= from || mn_[t] + acc > h) return -1;
  std::size_t ls = l_[t] < 0 ? 0 : sz_[l_[t]];
  std::ptrdiff_t res = first_le_rec(l_[t], from, h, acc + lz_[t], base);
  if (res >= 0) return res;
  std::size_t me = base + ls;
  if (me >= from && val_[t] + acc <= h) return static_cast<std::ptrdiff_t>(me);
  return first_le_rec(r_[t], from, h, acc + lz_[t], me + 1);
}

std::size_t HeightSeq::first_le(std::size_t from, std::int64_t h) const {
  if (from >= size()) return size();
  auto r = first_le_rec(root_, from, h, 0, 0);
  return r < 0 ? size() : static_cast<std::size_t>(r);
}

std::ptrdiff_t HeightSeq::last_le_rec(int t, std::ptrdiff_t upto, std::int64_t h, std::int64_t acc,
                                      std::size_t base) const {
  if (t < 0) return -1;
  if (static_cast<std::ptrdiff_t>(base) > upto || mn_[t] + acc > h) return -1;
  std::size_t ls = l_[t] < 0 ? 0 : sz_[l_[t]];
  std::size_t me = base + ls;
  std::ptrdiff_t res = last_le_rec(r_[t], upto, h, acc + lz_[t], me + 1);
  if (res >= 0) return res;
  if (static_cast<std::ptrdiff_t>(me) <= upto && val_[t] + acc <= h) return static_cast<std::ptrdiff_t>(me);
  return last_le_rec(l_[t], upto, h, acc + lz_[t], base);
}

std::ptrdiff_t HeightSeq::last_le(std::ptrdiff_t upto, std::int64_t h) const {
  if (upto < 0) return -1;
  return last_le_rec(root_, upto, h, 0, 0);
}

}  // namespace bracketdyn
