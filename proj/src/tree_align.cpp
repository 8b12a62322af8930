#include "bracketdyn/tree_align.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>
#include <tuple>

#include "bracketdyn/forest_core.hpp"
#include "bracketdyn/oracles.hpp"

namespace bracketdyn {

std::vector<std::pair<std::size_t, std::size_t>> Alignment::path() const {
  std::vector<std::pair<std::size_t, std::size_t>> p{{0, 0}};
  std::size_t i = 0, j = 0;
  auto walk_to = [&](std::size_t x, std::size_t y) {
    while (i < x) p.emplace_back(++i, j);
    while (j < y) p.emplace_back(i, ++j);
  };
  for (auto [x, y] : matches) {
    walk_to(x, y);
    p.emplace_back(++i, ++j);
  }
  walk_to(nx, ny);
  return p;
}

Alignment Alignment::from_path(const std::vector<std::pair<std::size_t, std::size_t>>& path) {
  if (path.empty() || path.front() != std::pair<std::size_t, std::size_t>{0, 0}) {
    throw std::invalid_argument("alignment path must start at (0,0)");
  }
  Alignment a;
  for (std::size_t k = 1; k < path.size(); ++k) {
    auto [x0, y0] = path[k - 1];
    auto [x1, y1] = path[k];
    if (x1 < x0 || y1 < y0 || x1 - x0 > 1 || y1 - y0 > 1 || (x1 == x0 && y1 == y0)) {
      throw std::invalid_argument("bad alignment step at index " + std::to_string(k));
    }
    if (x1 == x0 + 1 && y1 == y0 + 1) a.matches.emplace_back(x0, y0);
  }
  a.nx = path.back().first;
  a.ny = path.back().second;
  return a;
}

Alignment Alignment::identity(std::size_t n) {
  Alignment a{n, n, {}};
  for (std::size_t i = 0; i < n; ++i) a.matches.emplace_back(i, i);
  return a;
}

bool Alignment::valid() const {
  for (std::size_t k = 0; k < matches.size(); ++k) {
    if (matches[k].first >= nx || matches[k].second >= ny) return false;
    if (k > 0 && (matches[k].first <= matches[k - 1].first || matches[k].second <= matches[k - 1].second)) {
      return false;
    }
  }
  return true;
}

std::size_t Alignment::cost(ParenView x, ParenView y) const {
  std::size_t c = nx + ny - 2 * matches.size();
  for (auto [i, j] : matches) c += x[i] != y[j];
  return c;
}

Alignment drop_substitutions(const Alignment& a, ParenView x, ParenView y) {
  Alignment out{a.nx, a.ny, {}};
  for (auto m : a.matches) {
    if (x[m.first] == y[m.second]) out.matches.push_back(m);
  }
  return out;
}

Alignment optimal_deletion_alignment(ParenView x, ParenView y) {
  const std::size_t n = x.size(), m = y.size();
  // L[i][j] = LCS of x[i..] and y[j..].
  std::vector<std::vector<std::uint32_t>> L(n + 1, std::vector<std::uint32_t>(m + 1, 0));
  for (std::size_t i = n; i-- > 0;) {
    for (std::size_t j = m; j-- > 0;) {
      L[i][j] = x[i] == y[j] ? L[i + 1][j + 1] + 1 : std::max(L[i + 1][j], L[i][j + 1]);
    }
  }
  Alignment a{n, m, {}};
  std::size_t i = 0, j = 0;
  while (i < n && j < m) {
    if (x[i] == y[j] && L[i][j] == L[i + 1][j + 1] + 1) {
      a.matches.emplace_back(i++, j++);
    } else if (L[i + 1][j] >= L[i][j + 1]) {
      ++i;
    } else {
      ++j;
    }
  }
  return a;
}

ForestIndex::ForestIndex(const PlainForest& f) : parent(f.parent) {
  const std::size_t n = f.size();
  sub_size = f.subtree_sizes();
  open.assign(n, 0);
  close.assign(n, 0);
  node_at.assign(2 * n, -1);
  heavy_depth.assign(n, 0);
  heavy_child.assign(n, -1);
  std::vector<int> stack;
  std::size_t pos = 0;
  auto close_to = [&](int p) {
    while (!stack.empty() && stack.back() != p) {
      close[stack.back()] = pos;
      node_at[pos++] = stack.back();
      stack.pop_back();
    }
  };
  for (std::size_t v = 0; v < n; ++v) {
    close_to(parent[v]);
    open[v] = pos;
    node_at[pos++] = static_cast<int>(v);
    stack.push_back(static_cast<int>(v));
    heavy_depth[v] = static_cast<int>(heavy_depth_of_size(sub_size[v]));
  }
  close_to(-2);
  for (std::size_t v = 0; v < n; ++v) {
    int p = parent[v];
    if (p >= 0 && heavy_depth[v] == heavy_depth[p]) heavy_child[p] = static_cast<int>(v);
  }
}

std::size_t width(const ForestIndex& f, int v, int v2) {
  auto d = [](std::size_t a, std::size_t b) { return a > b ? a - b : b - a; };
  return d(f.open[v], f.open[v2]) + d(f.close[v], f.close[v2]);
}

const char* to_string(NodeClass c) {
  switch (c) {
    case NodeClass::tree_aligned: return "tree-aligned";
    case NodeClass::deleted: return "deleted";
    case NodeClass::partially_deleted: return "partially-deleted";
    case NodeClass::single_branch: return "single-branch";
    case NodeClass::multi_branch: return "multi-branch";
  }
  return "?";
}

std::size_t MisalignmentReport::misaligned() const {
  auto bad = [](NodeClass c) { return c != NodeClass::tree_aligned && c != NodeClass::deleted; };
  return static_cast<std::size_t>(std::count_if(f.begin(), f.end(), bad) + std::count_if(g.begin(), g.end(), bad));
}

namespace {

constexpr int kNone = -1;

// Matching as two partner arrays, with both sides' indexes.
struct Matching {
  Matching(const Alignment& a, const ForestIndex& fi, const ForestIndex& gi) : F(fi), G(gi) {
    if (!a.valid() || a.nx != 2 * fi.size() || a.ny != 2 * gi.size()) {
      throw std::invalid_argument("alignment does not fit the forests");
    }
    mx.assign(a.nx, kNone);
    my.assign(a.ny, kNone);
    for (auto [x, y] : a.matches) {
      mx[x] = static_cast<int>(y);
      my[y] = static_cast<int>(x);
    }
  }

  const ForestIndex& idx(int side) const { return side == 0 ? F : G; }
  std::vector<int>& partner(int side) { return side == 0 ? mx : my; }
  const std::vector<int>& partner(int side) const { return side == 0 ? mx : my; }

  // Node on the other side whose parenthesis is aligned with o(u) (or c(u)).
  int partner_node(int side, int u, bool closing) const {
    const auto& I = idx(side);
    int p = partner(side)[closing ? I.close[u] : I.open[u]];
    return p == kNone ? kNone : idx(1 - side).node_at[p];
  }

  NodeClass classify(int side, int u) const {
    const auto& I = idx(side);
    const auto& O = idx(1 - side);
    int po = partner(side)[I.open[u]], pc = partner(side)[I.close[u]];
    if (po == kNone && pc == kNone) return NodeClass::deleted;
    if (po == kNone || pc == kNone) return NodeClass::partially_deleted;
    int v1 = O.node_at[po], v2 = O.node_at[pc];
    if (v1 == v2 && O.open[v1] == static_cast<std::size_t>(po) && O.close[v1] == static_cast<std::size_t>(pc)) {
      return NodeClass::tree_aligned;
    }
    return O.contains(v1, v2) || O.contains(v2, v1) ? NodeClass::single_branch : NodeClass::multi_branch;
  }

  bool misaligned(int side, int u) const {
    auto c = classify(side, u);
    return c != NodeClass::tree_aligned && c != NodeClass::deleted;
  }

  void unmatch(int side, std::size_t pos) {
    int& p = partner(side)[pos];
    if (p == kNone) return;
    partner(1 - side)[p] = kNone;
    p = kNone;
  }

  void delete_node(int side, int u) {
    unmatch(side, idx(side).open[u]);
    unmatch(side, idx(side).close[u]);
  }

  // Inserts (x0+t, y0+t) for t < len and drops every pair that shares a
  // coordinate with the block or crosses it.
  void force_diagonal(std::size_t x0, std::size_t y0, std::size_t len) {
    if (len == 0) return;
    const std::size_t x1 = x0 + len - 1, y1 = y0 + len - 1;
    for (std::size_t x = 0; x < mx.size(); ++x) {
      if (mx[x] == kNone) continue;
      std::size_t y = static_cast<std::size_t>(mx[x]);
      bool keep = (x < x0 && y < y0) || (x > x1 && y > y1) || (x >= x0 && x <= x1 && y - y0 == x - x0);
      if (!keep) unmatch(0, x);
    }
    for (std::size_t t = 0; t < len; ++t) {
      mx[x0 + t] = static_cast<int>(y0 + t);
      my[y0 + t] = static_cast<int>(x0 + t);
    }
  }

  Alignment to_alignment() const {
    Alignment a{mx.size(), my.size(), {}};
    for (std::size_t x = 0; x < mx.size(); ++x) {
      if (mx[x] != kNone) a.matches.emplace_back(x, static_cast<std::size_t>(mx[x]));
    }
    return a;
  }

  const ForestIndex& F;
  const ForestIndex& G;
  std::vector<int> mx, my;
};

Alignment exact_only(const Alignment& a, const PlainForest& f, const PlainForest& g) {
  auto x = f.to_parens(), y = g.to_parens();
  return drop_substitutions(a, x, y);
}

}  // namespace

MisalignmentReport classify(const Alignment& a, const PlainForest& f, const PlainForest& g) {
  ForestIndex fi(f), gi(g);
  MisalignmentReport r;
  {
    Matching all(a, fi, gi);
    for (std::size_t u = 0; u < fi.size(); ++u) r.f.push_back(all.classify(0, static_cast<int>(u)));
    for (std::size_t v = 0; v < gi.size(); ++v) r.g.push_back(all.classify(1, static_cast<int>(v)));
  }
  Matching m(exact_only(a, f, g), fi, gi);

  // Each node links to at most two nodes: the partners of its two parentheses.
  // Tree-aligned pairs form 2-cycles and are skipped; what remains are paths.
  const std::size_t nf = fi.size();
  auto key = [&](NodeRef r) { return static_cast<std::size_t>(r.side) * nf + static_cast<std::size_t>(r.node); };
  std::vector<bool> seen(nf + gi.size(), false);
  auto links = [&](NodeRef u) {
    std::vector<std::pair<NodeRef, bool>> out;  // neighbour, linked through closers
    for (bool closing : {false, true}) {
      int p = m.partner_node(u.side, u.node, closing);
      if (p != kNone) out.push_back({NodeRef{1 - u.side, p}, closing});
    }
    return out;
  };
  auto in_path = [&](NodeRef u) {
    if (m.classify(u.side, u.node) == NodeClass::tree_aligned) return false;
    return !links(u).empty();
  };

  for (int side : {0, 1}) {
    for (std::size_t s = 0; s < m.idx(side).size(); ++s) {
      NodeRef start{side, static_cast<int>(s)};
      if (seen[key(start)] || !in_path(start) || links(start).size() != 1) continue;
      std::vector<NodeRef> path{start};
      seen[key(start)] = true;
      NodeRef prev{-1, -1}, cur = start;
      while (true) {
        NodeRef next{-1, -1};
        for (auto [nb, closing] : links(cur)) {
          if (!(nb == prev) && !seen[key(nb)] && in_path(nb)) next = nb;
        }
        if (next.side < 0) break;
        seen[key(next)] = true;
        path.push_back(next);
        prev = cur;
        cur = next;
      }
      if (path.size() >= 3) r.extended.push_back(path);

      auto anc = [&](NodeRef a, NodeRef b) { return a.side == b.side && m.idx(a.side).proper_ancestor(a.node, b.node); };
      for (int dir : {0, 1}) {
        std::vector<NodeRef> p = path;
        if (dir == 1) std::reverse(p.begin(), p.end());
        // Maximal runs where p[i] is a proper ancestor of p[i+2].
        std::size_t i = 0;
        while (i + 2 < p.size()) {
          if (!anc(p[i], p[i + 2])) {
            ++i;
            continue;
          }
          std::size_t j = i;
          while (j + 2 < p.size() && anc(p[j], p[j + 2])) ++j;
          Chain c;
          c.nodes.assign(p.begin() + static_cast<std::ptrdiff_t>(i), p.begin() + static_cast<std::ptrdiff_t>(j + 2));
          // Closing when the first F node reaches its successor through its closer.
          std::size_t fpos = c.nodes[0].side == 0 ? 0 : 1;
          c.closing = m.partner_node(0, c.nodes[fpos].node, true) == c.nodes[fpos + 1].node;
          r.chains.push_back(std::move(c));
          i = j + 1;
        }
      }
    }
  }
  return r;
}

bool is_tree_alignment(const Alignment& a, const PlainForest& f, const PlainForest& g) {
  ForestIndex fi(f), gi(g);
  if (!a.valid() || a.nx != 2 * fi.size() || a.ny != 2 * gi.size()) return false;
  Matching m(a, fi, gi);
  for (int side : {0, 1}) {
    for (std::size_t u = 0; u < m.idx(side).size(); ++u) {
      auto c = m.classify(side, static_cast<int>(u));
      if (c != NodeClass::tree_aligned && c != NodeClass::deleted) return false;
    }
  }
  return true;
}

Alignment tree_align_repair(const Alignment& a, const PlainForest& f, const PlainForest& g, RepairStats* stats,
                            bool check_locality) {
  RepairStats local;
  RepairStats& st = stats ? *stats : local;
  st = RepairStats{};
  ForestIndex F(f), G(g);
  const ParenString X = f.to_parens(), Y = g.to_parens();
  Matching m(drop_substitutions(a, X, Y), F, G);
  const std::size_t n = std::max(F.size(), G.size());
  const std::size_t threshold = static_cast<std::size_t>(std::ceil(std::sqrt(static_cast<double>(n))));

  // Successor of u along a chain whose F nodes advance through closers
  // (closing) or through openers (opening).
  auto step = [&](NodeRef u, bool closing) -> NodeRef {
    bool via_close = (u.side == 0) == closing;
    int p = m.partner_node(u.side, u.node, via_close);
    return p == kNone ? NodeRef{-1, -1} : NodeRef{1 - u.side, p};
  };

  auto try_light_match = [&](int u) -> bool {
    for (bool closing : {true, false}) {
      NodeRef c[5];
      c[0] = {0, u};
      bool ok = true;
      for (int k = 1; k < 5 && ok; ++k) {
        c[k] = step(c[k - 1], closing);
        ok = c[k].node != kNone;
      }
      if (!ok) continue;
      for (int k = 0; k + 2 < 5 && ok; ++k) ok = m.idx(c[k].side).proper_ancestor(c[k].node, c[k + 2].node);
      if (!ok || width(F, u, c[4].node) >= threshold) continue;

      int v = c[1].node;
      int hu = F.heavy_child[u], hv = G.heavy_child[v];
      bool fits = hu != kNone && hv != kNone && f.label[u] == g.label[v] &&
                  F.open[hu] - F.open[u] == G.open[hv] - G.open[v] &&
                  F.close[u] - F.close[hu] == G.close[v] - G.close[hv];
      if (fits) {
        fits = std::equal(X.begin() + F.open[u], X.begin() + F.open[hu], Y.begin() + G.open[v]) &&
               std::equal(X.begin() + F.close[hu] + 1, X.begin() + F.close[u] + 1, Y.begin() + G.close[hv] + 1);
      }
      if (!fits) {
        ++st.fallbacks;
        return false;
      }
      m.force_diagonal(F.open[u], G.open[v], F.open[hu] - F.open[u]);
      m.force_diagonal(F.close[hu] + 1, G.close[hv] + 1, F.close[u] - F.close[hu]);
      ++st.light_matches;
      return true;
    }
    return false;
  };

  // Heavy paths by increasing heavy depth, each top to bottom.
  std::vector<int> heads;
  for (std::size_t v = 0; v < F.size(); ++v) {
    int p = F.parent[v];
    if (p < 0 || F.heavy_child[p] != static_cast<int>(v)) heads.push_back(static_cast<int>(v));
  }
  std::stable_sort(heads.begin(), heads.end(),
                   [&](int a2, int b2) { return F.heavy_depth[a2] < F.heavy_depth[b2]; });

  for (int h : heads) {
    std::vector<int> path;
    for (int w = h; w != kNone; w = F.heavy_child[w]) path.push_back(w);
    for (int u : path) {
      if (!m.misaligned(0, u)) continue;
      std::vector<std::pair<int, int>> before;
      if (check_locality) {
        for (int w : path) {
          if (w != u && m.classify(0, w) == NodeClass::tree_aligned) before.emplace_back(w, m.mx[F.open[w]]);
        }
      }
      if (!try_light_match(u)) {
        m.delete_node(0, u);
        ++st.deletions;
      }
      for (auto [w, y] : before) {
        if (m.classify(0, w) != NodeClass::tree_aligned || m.mx[F.open[w]] != y) ++st.locality_violations;
      }
    }
  }

  for (int side : {0, 1}) {
    for (std::size_t u = 0; u < m.idx(side).size(); ++u) {
      if (m.misaligned(side, static_cast<int>(u))) {
        m.delete_node(side, static_cast<int>(u));
        ++st.cleanup;
      }
    }
  }
  return m.to_alignment();
}

SqrtResult static_sqrt_pipeline(const PlainForest& f, const PlainForest& g) {
  StaticHldInterner in;
  PlainForest fh = hld_forest(f, in), gh = hld_forest(g, in);
  ParenString x = fh.to_parens(), y = gh.to_parens();
  SqrtResult r;
  r.ed = oracle::ed_exact(x, y, oracle::EditCosts::full());
  Alignment a = optimal_deletion_alignment(x, y);
  r.ed_deletion = a.cost(x, y);
  r.alignment = tree_align_repair(a, fh, gh, &r.stats);
  r.repaired_cost = r.alignment.cost(x, y);
  r.ted_upper = r.repaired_cost / 2;
  return r;
}

std::pair<PlainForest, PlainForest> chain_gap_family(std::size_t n, std::size_t block) {
  // F: a_1 .. a_m with a_i = (X a_{i+1} X) and a_m = (X Z X).
  // G: X b_1 with b_i = (X b_{i+1} X) and b_m = (Z X).
  // Z is a path of 2^h nodes that keeps every spine node at heavy depth h.
  const std::size_t x = block > 0 ? block
                                  : std::max<std::size_t>(1, static_cast<std::size_t>(
                                                                 std::ceil(std::sqrt(static_cast<double>(n)) / 8)));
  std::size_t z = 16;
  while (4 * z <= n) z *= 2;
  const std::size_t per_level = 2 * x + 1;
  std::size_t m = std::min<std::size_t>({8, (z - 2 - x) / per_level, (n > z ? n - z : 0) / per_level});
  if (m < 3) throw std::invalid_argument("chain_gap_family needs a larger n");

  const std::int64_t kNode = 0, kX = 1, kZ = 2;
  auto X = [&](ParenString& s) {
    for (std::size_t i = 0; i < x; ++i) s.push_back(open_paren(kX));
    for (std::size_t i = 0; i < x; ++i) s.push_back(close_paren(kX));
  };
  auto Z = [&](ParenString& s) {
    for (std::size_t i = 0; i < z; ++i) s.push_back(open_paren(kZ));
    for (std::size_t i = 0; i < z; ++i) s.push_back(close_paren(kZ));
  };
  ParenString fs, gs;
  for (std::size_t i = 0; i < m; ++i) {
    fs.push_back(open_paren(kNode));
    X(fs);
  }
  Z(fs);
  for (std::size_t i = 0; i < m; ++i) {
    X(fs);
    fs.push_back(close_paren(kNode));
  }
  X(gs);
  for (std::size_t i = 0; i + 1 < m; ++i) {
    gs.push_back(open_paren(kNode));
    X(gs);
  }
  gs.push_back(open_paren(kNode));
  Z(gs);
  X(gs);
  gs.push_back(close_paren(kNode));
  for (std::size_t i = 0; i + 1 < m; ++i) {
    X(gs);
    gs.push_back(close_paren(kNode));
  }
  return {PlainForest::from_parens(fs), PlainForest::from_parens(gs)};
}

}  // namespace bracketdyn
