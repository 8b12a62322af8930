#include "doctest.h"

#include <map>
#include <queue>
#include <set>

#include "bracketdyn/oracles.hpp"
#include "test_util.hpp"

using namespace bracketdyn;
using namespace bracketdyn::oracle;

namespace {

// Breadth-first search over single-character edits until a Dyck string appears.
std::size_t ded_bfs(const ParenString& x, EditCosts costs, int types) {
  std::set<ParenString> seen{x};
  std::queue<std::pair<ParenString, std::size_t>> q;
  q.push({x, 0});
  std::vector<Paren> alphabet;
  for (int t = 0; t < types; ++t) {
    alphabet.push_back(open_paren(t));
    alphabet.push_back(close_paren(t));
  }
  while (!q.empty()) {
    auto [s, d] = q.front();
    q.pop();
    if (is_dyck(s)) return d;
    auto visit = [&](ParenString t) {
      if (seen.insert(t).second) q.push({std::move(t), d + 1});
    };
    for (std::size_t i = 0; i < s.size(); ++i) {
      ParenString t = s;
      t.erase(t.begin() + static_cast<std::ptrdiff_t>(i));
      visit(t);
      if (costs.allow_substitution) {
        for (auto p : alphabet) {
          if (p == s[i]) continue;
          ParenString u = s;
          u[i] = p;
          visit(u);
        }
      }
    }
    if (costs.allow_insertion) {
      for (std::size_t i = 0; i <= s.size(); ++i) {
        for (auto p : alphabet) {
          ParenString t = s;
          t.insert(t.begin() + static_cast<std::ptrdiff_t>(i), p);
          visit(t);
        }
      }
    }
  }
  return SIZE_MAX;
}

// Plain recursive forest distance on the rightmost root, memoised on strings.
struct NaiveTed {
  std::map<std::pair<ParenString, ParenString>, std::size_t> memo;

  static std::pair<ParenString, ParenString> split_last(const ParenString& f) {
    // returns (rest, last tree)
    std::int64_t h = 0;
    for (std::size_t i = f.size(); i-- > 0;) {
      h += f[i].closes() ? 1 : -1;
      if (h == 0) return {ParenString(f.begin(), f.begin() + static_cast<std::ptrdiff_t>(i)),
                          ParenString(f.begin() + static_cast<std::ptrdiff_t>(i), f.end())};
    }
    return {};
  }

  std::size_t dist(const ParenString& f, const ParenString& g) {
    if (f.empty()) return g.size() / 2;
    if (g.empty()) return f.size() / 2;
    auto key = std::make_pair(f, g);
    if (auto it = memo.find(key); it != memo.end()) return it->second;
    auto [fr, ft] = split_last(f);
    auto [gr, gt] = split_last(g);
    ParenString fin(ft.begin() + 1, ft.end() - 1);
    ParenString gin(gt.begin() + 1, gt.end() - 1);
    ParenString fdel = fr;
    fdel.insert(fdel.end(), fin.begin(), fin.end());
    ParenString gdel = gr;
    gdel.insert(gdel.end(), gin.begin(), gin.end());
    std::size_t best = dist(fdel, g) + 1;
    best = std::min(best, dist(f, gdel) + 1);
    best = std::min(best, dist(fr, gr) + dist(fin, gin) + (ft[0].type == gt[0].type ? 0 : 1));
    memo[key] = best;
    return best;
  }
};

}  // namespace

TEST_CASE("ed_exact small cases") {
  std::vector<Symbol> a{1, 2, 3, 4, 5, 6}, b{2, 3, 4, 9, 6};
  CHECK(ed_exact(a, b, EditCosts::full()) == 2);
  CHECK(ed_exact(a, b, EditCosts::deletion_only()) == 3);
  std::vector<Symbol> e;
  CHECK(ed_exact(e, b, EditCosts::full()) == 5);
}

TEST_CASE("ed_exact rejects inputs above the cap") {
  std::vector<Symbol> big(kEdCap + 1, 0);
  std::vector<Symbol> one{0};
  CHECK_THROWS_AS(ed_exact(big, one, EditCosts::full()), CapExceeded);
}

TEST_CASE("ded_exact small cases") {
  CHECK(ded_exact(parse_parens("(]"), EditCosts::full()) == 1);
  CHECK(ded_exact(parse_parens("(]"), EditCosts::deletion_only()) == 2);
  CHECK(ded_exact(parse_parens(")("), EditCosts::full()) == 2);
  CHECK(ded_exact(parse_parens("(("), EditCosts::full()) == 1);
  CHECK(ded_exact(parse_parens("([)]"), EditCosts::full()) == 2);
  CHECK(ded_exact(parse_parens("([)]"), EditCosts::deletion_only()) == 2);
  CHECK(ded_exact(parse_parens("((]]"), EditCosts::deletion_only()) == 4);
  CHECK(ded_exact(parse_parens("((]]"), EditCosts::full()) == 2);
  CHECK(ded_exact(parse_parens(""), EditCosts::full()) == 0);
}

TEST_CASE("ded_exact matches breadth-first search") {
  auto rng = testutil::make_rng(10);
  for (int trial = 0; trial < 120; ++trial) {
    auto x = testutil::random_parens(rng, rng() % 6, 2);
    CHECK(ded_exact(x, EditCosts::full()) == ded_bfs(x, EditCosts::full(), 2));
    CHECK(ded_exact(x, EditCosts::deletion_only()) == ded_bfs(x, EditCosts::deletion_only(), 2));
    CHECK(ded_exact(x, {false, true}) == ded_bfs(x, {false, true}, 2));
  }
}

TEST_CASE("ded_exact rejects inputs above the cap") {
  ParenString x(kDedCap + 1, open_paren(0));
  CHECK_THROWS_AS(ded_exact(x, EditCosts::full()), CapExceeded);
}

TEST_CASE("ted_exact small cases") {
  LabelTable lt;
  auto f = parse_forest("a(b c)", lt);
  auto g = parse_forest("a(c)", lt);
  CHECK(ted_exact(f, g) == 1);
  CHECK(ted_exact(f, f) == 0);
  auto h = parse_forest("x(b c)", lt);
  CHECK(ted_exact(f, h) == 1);
  CHECK(ted_exact(f, h, EditCosts::deletion_only()) == 2);
  auto e = parse_forest("", lt);
  CHECK(ted_exact(f, e) == 3);
  auto s = parse_forest("b c", lt);
  CHECK(ted_exact(f, s) == 1);
}

TEST_CASE("ted_exact matches a naive recursion") {
  auto rng = testutil::make_rng(11);
  NaiveTed naive;
  for (int trial = 0; trial < 150; ++trial) {
    auto f = testutil::random_forest(rng, rng() % 7, 3);
    auto g = testutil::random_forest(rng, rng() % 7, 3);
    CHECK(ted_exact(f, g) == naive.dist(f.to_parens(), g.to_parens()));
  }
}

TEST_CASE("twice ted equals the cheapest tree alignment") {
  auto rng = testutil::make_rng(12);
  for (int trial = 0; trial < 150; ++trial) {
    auto f = testutil::random_forest(rng, rng() % 8, 2);
    auto g = testutil::random_forest(rng, rng() % 8, 2);
    CHECK(2 * ted_exact(f, g) == min_tree_alignment(f, g));
  }
}

TEST_CASE("ted_exact handles deep paths") {
  PlainForest f, g;
  for (int v = 0; v < 1500; ++v) {
    f.parent.push_back(v - 1);
    f.label.push_back(0);
  }
  g = f;
  g.label[700] = 1;
  CHECK(ted_exact(f, g) == 1);
}

TEST_CASE("heavy light reference") {
  // path 0-1-2 with a leaf 3 under 0
  std::vector<int> parent{-1, 0, 1, 0};
  auto hl = heavy_light_reference(parent);
  CHECK(hl.size == std::vector<int>{4, 2, 1, 1});
  CHECK_FALSE(hl.heavy[0]);
  CHECK_FALSE(hl.heavy[1]);  // lg 2 = 1, lg 4 = 2
  CHECK(hl.heavy[2] == false);
  CHECK(hl.heavy_depth == std::vector<int>{0, 1, 2, 1});
  std::vector<int> chain{-1, 0, 1, 2, 3, 4, 5};  // sizes 7..1
  auto h2 = heavy_light_reference(chain);
  CHECK(h2.heavy[1]);  // 6 and 7 share lg 2
  CHECK(h2.heavy[2]);  // 5 vs 6
  CHECK(h2.heavy[3]);  // 4 vs 5
  CHECK_FALSE(h2.heavy[4]);
}

TEST_CASE("range query reference") {
  auto x = parse_parens("((())");
  auto h = heights(x);
  std::vector<std::int64_t> ch(h.begin(), h.end() - 1);
  auto r = range_query_reference(ch, 2, 1);
  REQUIRE(r.has_value());
  CHECK(r->first == 2);
  CHECK(r->second == 4);
  CHECK_FALSE(range_query_reference(ch, 0, 0).has_value());
}
