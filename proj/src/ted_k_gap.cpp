#include "bracketdyn/ted_k_gap.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace bracketdyn {

namespace {

std::size_t span(const Forest& f, int v) { return 2 * f.subtree_size(v); }

// Highest ancestor of v (v included) satisfying a predicate that holds on a
// bottom segment of the ancestor path.
template <class Pred>
int highest_where(const Forest& f, int v, Pred ok) {
  if (!ok(v)) return -1;
  std::size_t lo = 0, hi = f.depth(v);
  while (lo < hi) {
    std::size_t mid = (lo + hi + 1) / 2;
    if (ok(f.laq(v, mid))) {
      lo = mid;
    } else {
      hi = mid - 1;
    }
  }
  return f.laq(v, lo);
}

struct Parts {
  const Forest& f;
  std::vector<Piece> out;

  std::size_t o(int v) const { return f.open_pos(v); }
  std::size_t c(int v) const { return f.close_pos(v); }
  void forest(std::size_t i, std::size_t j) {
    if (i < j) out.push_back(Piece::subforest(i, j));
  }
  void ctx(std::size_t i1, std::size_t j1, std::size_t i2, std::size_t j2) {
    out.push_back(Piece::make_context(i1, j1, i2, j2));
  }

  // Children of x, as one forest when short enough, else split around the
  // child covering their midpoint.
  void children(int x, std::size_t m) {
    std::size_t start = o(x) + 1, end = c(x);
    std::size_t len = end - start;
    if (len <= m) {
      forest(start, end);
      return;
    }
    int t = find_highest_anc(f, start, end, f.node_at(start + len / 2));
    forest(start, o(t));
    forest(o(t), c(t) + 1);
    forest(c(t) + 1, end);
  }

  void subforest(std::size_t i, std::size_t j) {
    std::size_t len = j - i, m = (len + 1) / 2;
    int v = f.node_at(i + m);
    int w = find_highest_anc(f, i, j, v);
    int u = find_mid_anc(f, i, j, m, v);
    if (u == w) {
      forest(i, o(w));
      forest(o(w), c(w) + 1);
      forest(c(w) + 1, j);
      return;
    }
    // x is the deepest node spanning more than m.
    int x = u < 0 ? v : f.parent(u);
    forest(i, o(w));
    forest(c(w) + 1, j);
    if (span(f, w) - span(f, x) + 2 <= m) {
      ctx(o(w), o(x) + 1, c(x), c(w) + 1);
      children(x, m);
      return;
    }
    int t = -1;
    for (int ch : f.children(x)) {
      if (t < 0 || span(f, ch) > span(f, t)) t = ch;
    }
    ctx(o(w), o(x), c(x) + 1, c(w) + 1);
    ctx(o(x), o(t), c(t) + 1, c(x) + 1);
    forest(o(t), c(t) + 1);
  }

  void context(const Piece& p) {
    std::size_t len = p.size(), m = (len + 1) / 2;
    std::size_t gap = p.i2 - p.j1;
    int w0 = f.node_at(p.i1);
    int v = f.parent(f.node_at(p.j1));
    auto s = [&](int y) { return span(f, y) - gap; };
    if (s(v) > m) {
      if (v != w0) ctx(p.i1, o(v), c(v) + 1, p.j2);
      std::size_t left = p.j1 - (o(v) + 1), right = c(v) - p.i2;
      if (left <= m && right <= m) {
        forest(o(v) + 1, p.j1);
        forest(p.i2, c(v));
        ctx(o(v), o(v) + 1, c(v), c(v) + 1);
      } else if (left > right) {
        subforest(o(v) + 1, p.j1);
        ctx(o(v), o(v) + 1, p.i2, c(v) + 1);
      } else {
        subforest(p.i2, c(v));
        ctx(o(v), p.j1, c(v), c(v) + 1);
      }
      return;
    }
    int u = highest_where(f, v, [&](int y) { return s(y) <= m; });
    int up = f.parent(u);
    ctx(o(u), p.j1, p.i2, c(u) + 1);
    if (len - s(u) <= m) {
      ctx(p.i1, o(u), c(u) + 1, p.j2);
      return;
    }
    std::size_t ls = o(u) - (o(up) + 1), rs = c(up) - (c(u) + 1);
    if (ls > m) {
      subforest(o(up) + 1, o(u));
      ctx(p.i1, o(up) + 1, c(u) + 1, p.j2);
    } else if (rs > m) {
      subforest(c(u) + 1, c(up));
      ctx(p.i1, o(u), c(up), p.j2);
    } else if (len - s(up) + 2 <= m) {
      forest(o(up) + 1, o(u));
      forest(c(u) + 1, c(up));
      ctx(p.i1, o(up) + 1, c(up), p.j2);
    } else {
      ctx(p.i1, o(up), c(up) + 1, p.j2);
      ctx(o(up), o(u), c(u) + 1, c(up) + 1);
    }
  }
};

}  // namespace

bool valid_piece(const Forest& f, const Piece& p) {
  std::size_t n = 2 * f.size();
  if (!p.context) return p.i1 < p.j1 && p.j1 <= n && f.balanced(p.i1, p.j1);
  if (!(p.i1 < p.j1 && p.j1 < p.i2 && p.i2 < p.j2 && p.j2 <= n)) return false;
  if (!f.opens_at(p.i1) || f.close_pos(f.node_at(p.i1)) != p.j2 - 1) return false;
  return f.balanced(p.j1, p.i2);
}

int find_highest_anc(const Forest& f, std::size_t i, std::size_t j, int v) {
  return highest_where(f, v, [&](int y) { return f.open_pos(y) >= i && f.close_pos(y) < j; });
}

int find_mid_anc(const Forest& f, std::size_t i, std::size_t j, std::size_t m, int v) {
  return highest_where(f, v, [&](int y) {
    return f.open_pos(y) >= i && f.close_pos(y) < j && span(f, y) <= m;
  });
}

std::vector<Piece> partition_piece(const Forest& f, const Piece& p) {
  if (!valid_piece(f, p)) throw std::invalid_argument("partition_piece: malformed piece");
  if (p.size() < 4) throw std::invalid_argument("partition_piece: piece too small");
  Parts parts{f, {}};
  if (p.context) {
    parts.context(p);
  } else {
    parts.subforest(p.i1, p.j1);
  }
  return std::move(parts.out);
}

ForestPair::ForestPair(std::uint64_t seed)
    : f_(seed), g_(seed ^ 0x77), strs_(StrCollection::Content::parens, seed ^ 0x3c) {
  h_[0] = strs_.empty_string();
  h_[1] = strs_.empty_string();
}

ForestPair::ForestPair(const PlainForest& f, const PlainForest& g, std::uint64_t seed)
    : f_(f, seed), g_(g, seed ^ 0x77), strs_(StrCollection::Content::parens, seed ^ 0x3c) {
  h_[0] = strs_.add(f.to_parens());
  h_[1] = strs_.add(g.to_parens());
}

EditDelta ForestPair::apply(int side, const NodeEdit& e) {
  Forest& t = side == 0 ? f_ : g_;
  EditDelta d = t.apply(e);
  StrHandle h = h_[side];
  auto step = [&](StrHandle next) {
    strs_.release(h);
    h = next;
  };
  switch (d.op) {
    case NodeEdit::Op::insert:
      step(strs_.insert(h, d.open_pos, encode({Kind::open, e.label})));
      step(strs_.insert(h, d.close_pos, encode({Kind::close, e.label})));
      break;
    case NodeEdit::Op::erase:
      step(strs_.erase(h, d.close_pos));
      step(strs_.erase(h, d.open_pos));
      break;
    case NodeEdit::Op::relabel:
      step(strs_.replace(h, d.open_pos, encode({Kind::open, e.label})));
      step(strs_.replace(h, d.close_pos, encode({Kind::close, e.label})));
      break;
  }
  h_[side] = h;
  return d;
}

namespace {

// Starts s in [lo, hi] where t[s, s + len) equals p[pfrom, pfrom + len),
// by internal pattern matching on windows shorter than 2 len.
std::vector<std::size_t> occurrences(const StrCollection& strs, StrHandle p, std::size_t pfrom,
                                     std::size_t len, StrHandle t, std::size_t lo, std::size_t hi) {
  std::vector<std::size_t> out;
  for (std::size_t a = lo; a <= hi; a += len) {
    std::size_t b = std::min(hi, a + len - 1);
    IpmResult r = strs.ipm_at(p, pfrom, len, t, a, (b - a) + len);
    for (std::size_t q = 0; q < r.count; ++q) out.push_back(a + r.start + q * r.diff);
  }
  return out;
}

std::vector<std::size_t> window(const ForestPair& d, std::size_t from, std::size_t len, std::size_t shift) {
  std::size_t n = d.strings().length(d.str(1));
  if (len > n) return {};
  std::size_t lo = from > shift ? from - shift : 0;
  std::size_t hi = std::min(from + shift, n - len);
  if (lo > hi) return {};
  return occurrences(d.strings(), d.str(0), from, len, d.str(1), lo, hi);
}

std::size_t closest(const std::vector<std::size_t>& starts, std::size_t at) {
  auto dist = [&](std::size_t s) { return s > at ? s - at : at - s; };
  return *std::min_element(starts.begin(), starts.end(),
                           [&](std::size_t a, std::size_t b) { return dist(a) < dist(b); });
}

}  // namespace

std::optional<Occurrence> has_match(const ForestPair& d, const Piece& p, std::size_t k, bool check_claims) {
  return has_match_within(d, p, k, 2 * k, check_claims);
}

std::optional<Occurrence> has_match_within(const ForestPair& d, const Piece& p, std::size_t k, std::size_t shift,
                                           bool check_claims) {
  if (!p.context) {
    auto starts = window(d, p.i1, p.size(), shift);
    if (starts.empty()) return std::nullopt;
    return Occurrence{closest(starts, p.i1), 0, true, false};
  }
  std::size_t l1 = p.j1 - p.i1, l2 = p.j2 - p.i2;
  bool big1 = l1 >= 2 * k, big2 = l2 >= 2 * k;
  if (!big1 || !big2) {
    std::size_t from = big1 ? p.i1 : p.i2, len = big1 ? l1 : l2;
    auto starts = window(d, from, len, shift);
    if (starts.empty()) return std::nullopt;
    std::size_t s = closest(starts, from);
    return big1 ? Occurrence{s, 0, true, false} : Occurrence{0, s, false, true};
  }
  auto left = window(d, p.i1, l1, shift);
  auto right = window(d, p.i2, l2, shift);
  if (left.empty() || right.empty()) return std::nullopt;
  const Forest& g = d.g();
  auto root_l = [&](std::size_t s) { return g.node_at(s); };
  auto root_r = [&](std::size_t s) { return g.node_at(s + l2 - 1); };
  auto valid = [&](std::size_t a, std::size_t b) {
    return root_l(a) == root_r(b) && a + l1 < b && g.balanced(a + l1, b);
  };
  // Roots of the occurrences of either part lie on one root-to-leaf path, so
  // depths identify them.
  std::optional<std::pair<std::size_t, std::size_t>> best;
  std::size_t best_depth = 0;
  for (std::size_t a : left) {
    std::size_t da = g.depth(root_l(a));
    if (best && da >= best_depth) continue;
    for (std::size_t b : right) {
      if (g.depth(root_r(b)) == da) {
        best = {a, b};
        best_depth = da;
        break;
      }
    }
  }
  bool ok = best && valid(best->first, best->second);
  if (check_claims && !ok) {
    for (std::size_t a : left) {
      for (std::size_t b : right) {
        if (valid(a, b)) throw std::logic_error("has_match: a deeper context occurrence exists");
      }
    }
  }
  if (!ok) return std::nullopt;
  return Occurrence{best->first, best->second, true, true};
}

double gap_lg(std::size_t n) { return std::log2(static_cast<double>(std::max<std::size_t>(n, 2))); }

std::size_t gap_budget(std::size_t k, std::size_t n) {
  return static_cast<std::size_t>(std::ceil(1.5 * static_cast<double>(k) * gap_lg(n) - 1e-9));
}

GapQuery::GapQuery(const ForestPair& d, std::size_t k, GapOptions opt) : d_(&d), opt_(opt) {
  std::size_t nf = d.f().size(), ng = d.g().size();
  std::size_t n = std::max(nf, ng);
  std::size_t diff = nf > ng ? nf - ng : ng - nf;
  res_.k = k;
  res_.budget = gap_budget(k, n);
  if (opt_.budget_factor != 1.0) {
    res_.budget = static_cast<std::size_t>(std::ceil(opt_.budget_factor * static_cast<double>(res_.budget)));
  }
  res_.certificate_bound = 16 * k * gap_budget(k, n) + diff;
  if (diff > k) {
    res_.size_guard = true;
    finish(false);
    return;
  }
  if (nf > 0) work_.push_back(Piece::subforest(0, 2 * nf));
  res_.pieces = work_.size();
  res_.max_worklist = work_.size();
  if (work_.empty()) finish(true);
}

void GapQuery::step() {
  if (done_) return;
  if (work_.empty()) {
    finish(true);
    return;
  }
  // The loop runs i = 0 .. budget inclusive.
  if (res_.iterations > res_.budget) {
    finish(false);
    return;
  }
  ++res_.iterations;
  Piece p = work_.front();
  work_.pop_front();
  std::size_t k = res_.k;
  if (p.size() > 4 * k) {
    if (auto occ = has_match(*d_, p, k, opt_.check_claims)) {
      matched_.push_back({p, *occ});
    } else if (p.size() < 4) {
      // Only reachable with k = 0: a single unmatched leaf.
      finish(false);
      return;
    } else {
      auto parts = partition_piece(d_->f(), p);
      res_.pieces += parts.size();
      for (const Piece& q : parts) work_.push_back(q);
      res_.max_worklist = std::max(res_.max_worklist, work_.size());
    }
  }
  if (work_.empty()) finish(true);
}

void GapQuery::finish(bool yes) {
  done_ = true;
  res_.yes = yes;
  if (!yes || !opt_.certificate) return;
  res_.certificate = stitch();
  std::size_t nx = res_.certificate.nx, ny = res_.certificate.ny;
  res_.certificate_cost = (nx + ny - 2 * res_.certificate.matches.size()) / 2;
  res_.certificate_valid = is_tree_alignment(res_.certificate, d_->f().to_plain(), d_->g().to_plain());
}

Alignment GapQuery::stitch() const {
  const Forest& f = d_->f();
  const Forest& g = d_->g();
  std::size_t nx = 2 * f.size(), ny = 2 * g.size();
  std::size_t k = res_.k;
  std::vector<std::ptrdiff_t> mx(nx, -1), my(ny, -1);
  auto core = [&](std::size_t fx, std::size_t gy, std::size_t len) {
    for (std::size_t t = 2 * k; t + 2 * k < len; ++t) {
      mx[fx + t] = static_cast<std::ptrdiff_t>(gy + t);
      my[gy + t] = static_cast<std::ptrdiff_t>(fx + t);
    }
  };
  for (const auto& [p, occ] : matched_) {
    if (occ.left) core(p.i1, occ.g1, p.j1 - p.i1);
    if (p.context && occ.right) core(p.i2, occ.g2, p.j2 - p.i2);
  }
  auto twin = [](const Forest& t, std::size_t pos) {
    int v = t.node_at(pos);
    return t.opens_at(pos) ? t.close_pos(v) : t.open_pos(v);
  };
  // Keep a pair only while the twins are paired too.
  std::vector<std::size_t> queue;
  for (std::size_t x = 0; x < nx; ++x) {
    if (mx[x] >= 0) queue.push_back(x);
  }
  while (!queue.empty()) {
    std::size_t x = queue.back();
    queue.pop_back();
    if (mx[x] < 0) continue;
    auto y = static_cast<std::size_t>(mx[x]);
    std::size_t tx = twin(f, x), ty = twin(g, y);
    if (mx[tx] == static_cast<std::ptrdiff_t>(ty)) continue;
    mx[x] = -1;
    my[y] = -1;
    if (mx[tx] >= 0) queue.push_back(tx);
  }
  Alignment a;
  a.nx = nx;
  a.ny = ny;
  for (std::size_t x = 0; x < nx; ++x) {
    if (mx[x] >= 0) a.matches.push_back({x, static_cast<std::size_t>(mx[x])});
  }
  if (!a.valid()) throw std::logic_error("gap_query: stitched certificate is not monotone");
  return a;
}

GapResult gap_query(const ForestPair& d, std::size_t k, GapOptions opt) {
  GapQuery q(d, k, opt);
  while (!q.done()) q.step();
  return q.result();
}

GapResult gap_query(const PlainForest& f, const PlainForest& g, std::size_t k, GapOptions opt) {
  ForestPair d(f, g);
  return gap_query(d, k, opt);
}

GapSession::GapSession(SessionOptions opt) : opt_(opt) { publish(); }

GapSession::GapSession(const PlainForest& f, const PlainForest& g, SessionOptions opt)
    : opt_(opt), cur_(f, g), lag_(f, g) {
  launch();
  while (query_) run_step();
  last_steps_ = 0;
  publish();
}

void GapSession::launch() {
  std::size_t n = std::max(lag_.f().size(), lag_.g().size());
  launch_n_ = n;
  units_ = opt_.units_per_step;
  if (units_ == 0) {
    units_ = static_cast<std::size_t>(std::ceil(30.0 * opt_.budget_factor * gap_lg(n))) + 8;
  }
  threshold_ = 0;
  steps_ = 0;
  query_.emplace(lag_, threshold_, GapOptions{opt_.budget_factor, false, false});
}

void GapSession::run_step() {
  ++steps_;
  std::size_t unit = 0;
  while (true) {
    if (query_->done()) {
      if (query_->result().yes) {
        kappa_ = threshold_;
        lg_ = gap_lg(launch_n_);
        b_ = buffer_.size();
        last_steps_ = steps_;
        ++completed_;
        query_.reset();
        return;
      }
      threshold_ = threshold_ == 0 ? 1 : 2 * threshold_;
      query_.emplace(lag_, threshold_, GapOptions{opt_.budget_factor, false, false});
      continue;
    }
    if (unit == units_) return;
    query_->step();
    ++unit;
  }
}

void GapSession::publish() {
  auto k = static_cast<double>(kappa_);
  estimate_ = kCert * k * k * lg_ + static_cast<double>(b_);
}

double GapSession::update(const SideEdit& e) {
  cur_.apply(e.side, e.edit);
  buffer_.push_back(e);
  ++b_;
  if (!query_) {
    for (int t = 0; t < 2 && !buffer_.empty(); ++t) {
      lag_.apply(buffer_.front().side, buffer_.front().edit);
      buffer_.pop_front();
    }
    if (buffer_.empty()) launch();
  }
  if (query_) run_step();
  publish();
  return estimate_;
}

}  // namespace bracketdyn
