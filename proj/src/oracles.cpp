#include "bracketdyn/oracles.hpp"

#include <algorithm>
#include <functional>
#include <string>

namespace bracketdyn::oracle {

namespace {

void check_cap(std::size_t n, std::size_t cap, const char* what) {
  if (n > cap) {
    throw CapExceeded(std::string(what) + ": input of size " + std::to_string(n) +
                      " exceeds cap " + std::to_string(cap));
  }
}

}  // namespace

std::size_t ed_exact(std::span<const Symbol> x, std::span<const Symbol> y, EditCosts costs) {
  check_cap(std::max(x.size(), y.size()), kEdCap, "ed_exact");
  const std::size_t sub = costs.allow_substitution ? 1 : 2;
  std::vector<std::size_t> prev(y.size() + 1), cur(y.size() + 1);
  for (std::size_t j = 0; j <= y.size(); ++j) prev[j] = j;
  for (std::size_t i = 1; i <= x.size(); ++i) {
    cur[0] = i;
    for (std::size_t j = 1; j <= y.size(); ++j) {
      std::size_t best = std::min(prev[j], cur[j - 1]) + 1;
      best = std::min(best, prev[j - 1] + (x[i - 1] == y[j - 1] ? 0 : sub));
      cur[j] = best;
    }
    std::swap(prev, cur);
  }
  return prev[y.size()];
}

std::size_t ed_exact(ParenView x, ParenView y, EditCosts costs) {
  auto a = encode_all(x);
  auto b = encode_all(y);
  return ed_exact(std::span<const Symbol>(a), std::span<const Symbol>(b), costs);
}

std::size_t ded_exact(ParenView x, EditCosts costs) {
  const std::size_t n = x.size();
  check_cap(n, kDedCap, "ded_exact");
  auto pair_cost = [&](Paren a, Paren b) -> std::size_t {
    if (pairs_with(a, b)) return 0;
    if (!costs.allow_substitution) return 3;  // never better than two deletions
    if (a.closes() && b.opens()) return 2;
    return 1;
  };
  // d[i][j] for the substring [i, j), stored row-major with stride n + 1.
  std::vector<std::uint32_t> d((n + 1) * (n + 1), 0);
  auto at = [&](std::size_t i, std::size_t j) -> std::uint32_t& { return d[i * (n + 1) + j]; };
  for (std::size_t len = 1; len <= n; ++len) {
    for (std::size_t i = 0; i + len <= n; ++i) {
      std::size_t j = i + len;
      std::uint32_t best = at(i + 1, j) + 1;
      for (std::size_t m = i + 1; m < j; ++m) {
        std::size_t c = pair_cost(x[i], x[m]);
        if (c >= 3) continue;
        std::uint32_t v = static_cast<std::uint32_t>(c) + at(i + 1, m) + at(m + 1, j);
        best = std::min(best, v);
      }
      at(i, j) = best;
    }
  }
  return at(0, n);
}

namespace {

// Postorder tree with a virtual root on top of the forest.
struct PostTree {
  std::vector<std::int64_t> label;
  std::vector<int> leftmost;
  std::vector<int> keyroots;
};

PostTree post_tree(const PlainForest& f) {
  const int n = static_cast<int>(f.size());
  auto ch = f.children();
  std::vector<int> roots;
  for (int v = 0; v < n; ++v) {
    if (f.parent[v] < 0) roots.push_back(v);
  }
  PostTree t;
  t.label.reserve(n + 1);
  t.leftmost.reserve(n + 1);
  // Iterative postorder to survive deep paths.
  std::vector<std::pair<int, std::size_t>> stack;
  std::vector<int> first_post(n, -1);
  auto visit = [&](int root) {
    stack.push_back({root, 0});
    while (!stack.empty()) {
      auto& [v, k] = stack.back();
      if (k < ch[v].size()) {
        int c = ch[v][k++];
        stack.push_back({c, 0});
        continue;
      }
      int id = static_cast<int>(t.label.size());
      t.label.push_back(f.label[v]);
      t.leftmost.push_back(ch[v].empty() ? id : first_post[ch[v].front()]);
      first_post[v] = t.leftmost.back();
      stack.pop_back();
    }
  };
  for (int r : roots) visit(r);
  int id = static_cast<int>(t.label.size());
  t.label.push_back(INT64_MIN);
  t.leftmost.push_back(roots.empty() ? id : first_post[roots.front()]);
  const int m = static_cast<int>(t.label.size());
  std::vector<bool> seen(m, false);
  for (int v = m - 1; v >= 0; --v) {
    if (!seen[t.leftmost[v]]) {
      seen[t.leftmost[v]] = true;
      t.keyroots.push_back(v);
    }
  }
  std::reverse(t.keyroots.begin(), t.keyroots.end());
  return t;
}

}  // namespace

std::size_t ted_exact(const PlainForest& f, const PlainForest& g, EditCosts costs) {
  check_cap(std::max(f.size(), g.size()), kTedCap, "ted_exact");
  const std::uint32_t relabel = costs.allow_substitution ? 1 : 2;
  PostTree a = post_tree(f);
  PostTree b = post_tree(g);
  const int n = static_cast<int>(a.label.size());
  const int m = static_cast<int>(b.label.size());
  std::vector<std::uint32_t> td(static_cast<std::size_t>(n) * m, 0);
  std::vector<std::uint32_t> fd(static_cast<std::size_t>(n + 1) * (m + 1), 0);
  for (int i : a.keyroots) {
    for (int j : b.keyroots) {
      const int li = a.leftmost[i];
      const int lj = b.leftmost[j];
      const int rows = i - li + 2;
      const int cols = j - lj + 2;
      auto fat = [&](int r, int c) -> std::uint32_t& { return fd[static_cast<std::size_t>(r) * cols + c]; };
      fat(0, 0) = 0;
      for (int r = 1; r < rows; ++r) fat(r, 0) = fat(r - 1, 0) + 1;
      for (int c = 1; c < cols; ++c) fat(0, c) = fat(0, c - 1) + 1;
      for (int r = 1; r < rows; ++r) {
        const int x = li + r - 1;
        for (int c = 1; c < cols; ++c) {
          const int y = lj + c - 1;
          std::uint32_t best = std::min(fat(r - 1, c), fat(r, c - 1)) + 1;
          if (a.leftmost[x] == li && b.leftmost[y] == lj) {
            std::uint32_t cost = (a.label[x] == b.label[y]) ? 0 : relabel;
            best = std::min(best, fat(r - 1, c - 1) + cost);
            fat(r, c) = best;
            td[static_cast<std::size_t>(x) * m + y] = best;
          } else {
            int pr = a.leftmost[x] - li;
            int pc = b.leftmost[y] - lj;
            best = std::min(best, fat(pr, pc) + td[static_cast<std::size_t>(x) * m + y]);
            fat(r, c) = best;
          }
        }
      }
    }
  }
  return td[static_cast<std::size_t>(n - 1) * m + (m - 1)];
}

std::size_t min_tree_alignment(const PlainForest& f, const PlainForest& g) {
  check_cap(std::max(f.size(), g.size()), kAlignmentNodeCap, "min_tree_alignment");
  const int nf = static_cast<int>(f.size());
  const int ng = static_cast<int>(g.size());
  auto ancestor_matrix = [](const PlainForest& t) {
    const int n = static_cast<int>(t.size());
    std::vector<std::vector<bool>> anc(n, std::vector<bool>(n, false));
    for (int v = 0; v < n; ++v) {
      for (int p = t.parent[v]; p >= 0; p = t.parent[p]) anc[p][v] = true;
    }
    return anc;
  };
  auto af = ancestor_matrix(f);
  auto ag = ancestor_matrix(g);
  std::vector<std::pair<int, int>> chosen;
  std::size_t best = 2 * static_cast<std::size_t>(nf + ng);
  // Mapped pairs have increasing preorder on both sides, so g candidates only grow.
  std::function<void(int, int, std::size_t, std::size_t)> dfs =
      [&](int u, int vmin, std::size_t mapped, std::size_t relabels) {
        std::size_t cur = 2 * (static_cast<std::size_t>(nf + ng) - 2 * mapped + relabels);
        std::size_t remaining = static_cast<std::size_t>(std::min(nf - u, ng - vmin));
        // each further mapped pair lowers the cost by at most 4
        if (cur >= best + 4 * remaining) return;
        if (u == nf) {
          best = std::min(best, cur);
          return;
        }
        dfs(u + 1, vmin, mapped, relabels);
        for (int v = vmin; v < ng; ++v) {
          bool ok = true;
          for (auto [pu, pv] : chosen) {
            if (af[pu][u] != ag[pv][v]) {
              ok = false;
              break;
            }
          }
          if (!ok) continue;
          chosen.push_back({u, v});
          dfs(u + 1, v + 1, mapped + 1, relabels + (f.label[u] != g.label[v] ? 1 : 0));
          chosen.pop_back();
        }
      };
  dfs(0, 0, 0, 0);
  return best;
}

HeavyLight heavy_light_reference(std::span<const int> parent) {
  const int n = static_cast<int>(parent.size());
  std::vector<std::vector<int>> ch(n);
  std::vector<int> order;
  for (int v = 0; v < n; ++v) {
    if (parent[v] >= 0) ch[parent[v]].push_back(v);
    else order.push_back(v);
  }
  for (std::size_t k = 0; k < order.size(); ++k) {
    for (int c : ch[order[k]]) order.push_back(c);
  }
  HeavyLight hl;
  hl.size.assign(n, 1);
  hl.heavy_depth.assign(n, 0);
  hl.heavy.assign(n, false);
  for (int k = n - 1; k >= 0; --k) {
    int v = order[k];
    if (parent[v] >= 0) hl.size[parent[v]] += hl.size[v];
  }
  for (int v : order) {
    if (parent[v] < 0) continue;
    int p = parent[v];
    hl.heavy[v] = floor_log2(hl.size[v]) == floor_log2(hl.size[p]);
    hl.heavy_depth[v] = hl.heavy_depth[p] + (hl.heavy[v] ? 0 : 1);
  }
  return hl;
}

std::optional<std::pair<std::size_t, std::size_t>> range_query_reference(
    std::span<const std::int64_t> char_heights, std::size_t i, std::int64_t h) {
  if (i >= char_heights.size()) throw std::out_of_range("range_query_reference: index");
  if (char_heights[i] <= h) return std::nullopt;
  std::size_t e = i;
  while (e + 1 < char_heights.size() && char_heights[e + 1] > h) ++e;
  return std::make_pair(i, e);
}

}  // namespace bracketdyn::oracle
