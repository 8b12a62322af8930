#include <doctest.h>

#include <algorithm>
#include <cmath>

#include "bracketdyn/forest_core.hpp"
#include "bracketdyn/oracles.hpp"
#include "bracketdyn/tree_align.hpp"
#include "test_util.hpp"

using namespace bracketdyn;

namespace {

PlainForest forest_of(const char* text) { return PlainForest::from_parens(parse_parens(text)); }

Alignment from_pairs(std::size_t nx, std::size_t ny, std::vector<std::pair<std::size_t, std::size_t>> m) {
  return Alignment{nx, ny, std::move(m)};
}

// G from F by a few random node edits.
PlainForest perturb(std::mt19937_64& rng, const PlainForest& f, int edits, int labels) {
  Forest g(f);
  for (int e = 0; e < edits; ++e) {
    std::vector<int> ids;
    g.to_plain(&ids);
    int op = ids.empty() ? 0 : static_cast<int>(rng() % 3);
    auto label = static_cast<std::int64_t>(rng() % labels);
    if (op == 0) {
      int p = static_cast<int>(rng() % (ids.size() + 1)) - 1;
      if (p >= 0) p = ids[p];
      std::size_t m = g.children(p).size();
      std::size_t first = rng() % (m + 1);
      std::size_t last = first + rng() % (m - first + 1);
      g.apply(NodeEdit::insert_under(p, first, last, label));
    } else if (op == 1) {
      g.apply(NodeEdit::erase_node(ids[rng() % ids.size()]));
    } else {
      g.apply(NodeEdit::relabel_node(ids[rng() % ids.size()], label));
    }
  }
  return g.to_plain();
}

struct Pair {
  PlainForest f, g, fh, gh;
  ParenString x, y;
};

Pair make_pair_hld(const PlainForest& f, const PlainForest& g) {
  StaticHldInterner in;
  Pair p{f, g, hld_forest(f, in), hld_forest(g, in), {}, {}};
  p.x = p.fh.to_parens();
  p.y = p.gh.to_parens();
  return p;
}

std::size_t lg(std::size_t n) { return static_cast<std::size_t>(oracle::floor_log2(std::max<std::size_t>(n, 1))); }

}  // namespace

TEST_CASE("alignment path round trip and step rule") {
  Alignment a = from_pairs(5, 4, {{0, 1}, {2, 2}, {4, 3}});
  CHECK(a.valid());
  auto p = a.path();
  CHECK(p.front() == std::pair<std::size_t, std::size_t>{0, 0});
  CHECK(p.back() == std::pair<std::size_t, std::size_t>{5, 4});
  CHECK(p.size() == 5 + 4 - 3 + 1);
  CHECK(Alignment::from_path(p) == a);
  CHECK_THROWS_AS(Alignment::from_path({{0, 0}, {2, 1}}), std::invalid_argument);
  CHECK_THROWS_AS(Alignment::from_path({{0, 0}, {1, 1}, {1, 1}}), std::invalid_argument);
  CHECK_FALSE(from_pairs(3, 3, {{1, 1}, {1, 2}}).valid());

  ParenString x = parse_parens("(()"), y = parse_parens("()");
  CHECK(from_pairs(3, 2, {{0, 0}, {1, 1}}).cost(x, y) == 2);
  CHECK(drop_substitutions(from_pairs(3, 2, {{0, 0}, {1, 1}}), x, y).cost(x, y) == 3);
  CHECK(optimal_deletion_alignment(x, y).cost(x, y) == 1);
}

TEST_CASE("tree alignment input is left alone") {
  auto rng = testutil::make_rng(71);
  for (int t = 0; t < 20; ++t) {
    auto f = testutil::random_forest(rng, 1 + rng() % 40, 3);
    auto p = make_pair_hld(f, f);
    Alignment id = Alignment::identity(p.x.size());
    auto r = classify(id, p.fh, p.gh);
    CHECK(r.misaligned() == 0);
    CHECK(r.chains.empty());
    CHECK(r.extended.empty());
    CHECK(std::all_of(r.f.begin(), r.f.end(), [](NodeClass c) { return c == NodeClass::tree_aligned; }));
    CHECK(tree_align_repair(id, p.fh, p.gh) == id);
  }
}

TEST_CASE("classification of the three misalignment types") {
  // F = ( [ [ ] { } ] ) ( )   G = ( ( [ { } ] ) )
  auto f = forest_of("([[]{}])()");
  auto g = forest_of("(([{}]))");
  Alignment a = from_pairs(10, 8, {{0, 0}, {2, 2}, {4, 3}, {5, 4}, {6, 5}, {7, 6}, {9, 7}});
  auto r = classify(a, f, g);
  CHECK(r.f[4] == NodeClass::partially_deleted);  // ( ) at the end of F
  CHECK(r.g[2] == NodeClass::single_branch);      // [ ] in G
  CHECK(r.g[0] == NodeClass::multi_branch);       // outer ( ) in G
  CHECK(r.f[3] == NodeClass::tree_aligned);       // { }
  CHECK(r.g[3] == NodeClass::tree_aligned);
  CHECK(r.f[0] == NodeClass::single_branch);
  CHECK(r.g[1] == NodeClass::partially_deleted);
  CHECK_FALSE(is_tree_alignment(a, f, g));
}

TEST_CASE("one chain through nested nodes") {
  // F = ((((())))), G = ( [ ( ( ( ) ) ) ] ): the [ ] is deleted and every
  // other opener of F is matched one level deeper than its closer.
  auto f = forest_of("((((()))))");
  auto g = forest_of("([((()))])");
  Alignment a = from_pairs(10, 10, {{0, 0}, {1, 2}, {2, 3}, {3, 4}, {5, 5}, {6, 6}, {7, 7}, {8, 9}});
  auto r = classify(a, f, g);
  REQUIRE(r.chains.size() == 1);
  const auto& c = r.chains[0];
  std::vector<NodeRef> expect{{0, 0}, {1, 0}, {0, 1}, {1, 2}, {0, 2}, {1, 3}, {0, 3}, {1, 4}, {0, 4}};
  CHECK(c.nodes == expect);
  CHECK_FALSE(c.closing);
  CHECK(r.f[4] == NodeClass::partially_deleted);
  CHECK(r.g[1] == NodeClass::deleted);
  REQUIRE(r.extended.size() == 1);
  CHECK(r.extended[0].size() == 9);

  auto fixed = tree_align_repair(a, f, g);
  CHECK(is_tree_alignment(fixed, f, g));
}

TEST_CASE("width") {
  auto single = forest_of("(())");
  ForestIndex si(single);
  CHECK(width(si, 0, 0) == 0);
  CHECK(width(si, 0, 1) == 2);

  auto rng = testutil::make_rng(72);
  for (int t = 0; t < 30; ++t) {
    auto f = testutil::random_forest(rng, 1 + rng() % 60, 2);
    ForestIndex fi(f);
    for (int v = 0; v < static_cast<int>(f.size()); ++v) {
      for (int w = v; w < static_cast<int>(f.size()); ++w) {
        if (!fi.contains(v, w)) continue;
        std::size_t diff = 0;
        for (int u = 0; u < static_cast<int>(f.size()); ++u) diff += fi.contains(v, u) && !fi.contains(w, u);
        CHECK(width(fi, v, w) == 2 * diff);
        CHECK(width(fi, w, v) == width(fi, v, w));
      }
    }
  }
}

TEST_CASE("light subtree swap along a closing chain") {
  // One-node blocks keep the chain narrow enough for the first case.
  auto [f, g] = chain_gap_family(280, 1);
  auto p = make_pair_hld(f, g);
  Alignment a = optimal_deletion_alignment(p.x, p.y);
  auto before = classify(a, p.fh, p.gh);
  REQUIRE_FALSE(before.chains.empty());
  CHECK(std::any_of(before.chains.begin(), before.chains.end(), [](const Chain& c) { return c.closing; }));

  RepairStats st;
  Alignment r = tree_align_repair(a, p.fh, p.gh, &st, true);
  CHECK(st.light_matches >= 1);
  CHECK(st.locality_violations == 0);
  CHECK(is_tree_alignment(r, p.fh, p.gh));
  CHECK(r.cost(p.x, p.y) >= a.cost(p.x, p.y));

  // The outermost spine node of F is now tree-aligned with the outermost
  // spine node of G, including both of its light blocks.
  ForestIndex fi(p.fh), gi(p.gh);
  const int u = 0, v = 1;  // G starts with a one-node block
  auto matched = [&](std::size_t x, std::size_t y) {
    return std::find(r.matches.begin(), r.matches.end(), std::make_pair(x, y)) != r.matches.end();
  };
  CHECK(matched(fi.open[u], gi.open[v]));
  CHECK(matched(fi.close[u], gi.close[v]));
  for (std::size_t t = fi.open[u]; t < fi.open[fi.heavy_child[u]]; ++t) {
    CHECK(matched(t, gi.open[v] + (t - fi.open[u])));
  }
  for (std::size_t t = fi.close[fi.heavy_child[u]] + 1; t <= fi.close[u]; ++t) {
    CHECK(matched(t, gi.close[gi.heavy_child[v]] + 1 + (t - fi.close[fi.heavy_child[u]] - 1)));
  }
}

TEST_CASE("repair on random pairs") {
  auto rng = testutil::make_rng(73);
  std::size_t violations = 0, chains_seen = 0, cleanup = 0, light = 0;
  for (int t = 0; t < 60; ++t) {
    std::size_t n = 1 + rng() % 200;
    auto f = testutil::random_forest(rng, n, 3);
    PlainForest g = (t % 4 == 3) ? testutil::random_forest(rng, 1 + rng() % 200, 3)
                                 : perturb(rng, f, 1 + static_cast<int>(rng() % 6), 3);
    auto p = make_pair_hld(f, g);
    Alignment a = optimal_deletion_alignment(p.x, p.y);
    auto rep = classify(a, p.fh, p.gh);
    ForestIndex fi(p.fh), gi(p.gh);
    auto idx = [&](const NodeRef& r) -> const ForestIndex& { return r.side == 0 ? fi : gi; };
    auto cls = [&](const NodeRef& r) { return r.side == 0 ? rep.f[r.node] : rep.g[r.node]; };
    auto lab = [&](const NodeRef& r) { return r.side == 0 ? p.fh.label[r.node] : p.gh.label[r.node]; };

    for (const auto& c : rep.chains) {
      ++chains_seen;
      CHECK(c.nodes.size() >= 3);
      CHECK(cls(c.nodes.back()) == NodeClass::partially_deleted);
      for (std::size_t i = 0; i < c.nodes.size(); ++i) {
        if (i > 0) CHECK(c.nodes[i].side != c.nodes[i - 1].side);
        CHECK(lab(c.nodes[i]) == lab(c.nodes[0]));
        if (i + 1 < c.nodes.size()) CHECK(idx(c.nodes[i]).heavy_child[c.nodes[i].node] >= 0);
        if (i + 2 < c.nodes.size()) {
          // Consecutive chain nodes of one forest are linked by heavy edges.
          const auto& I = idx(c.nodes[i]);
          int w = c.nodes[i + 2].node;
          for (int s = w; s != c.nodes[i].node; s = I.parent[s]) {
            REQUIRE(s >= 0);
            CHECK(I.heavy_child[I.parent[s]] == s);
          }
        }
      }
    }
    for (const auto& e : rep.extended) {
      std::size_t multi = 0;
      for (const auto& r : e) multi += cls(r) == NodeClass::multi_branch;
      CHECK(multi <= 1);
      std::size_t inside = 0;
      for (const auto& c : rep.chains) {
        inside += std::find(e.begin(), e.end(), c.nodes[0]) != e.end();
      }
      CHECK(inside <= 2);
    }

    RepairStats st;
    Alignment r = tree_align_repair(a, p.fh, p.gh, &st, true);
    bool ok = r.valid() && is_tree_alignment(r, p.fh, p.gh);
    violations += !ok;
    CHECK(ok);
    cleanup += st.cleanup;
    CHECK(st.cleanup == 0);
    light += st.light_matches;
    CHECK(st.locality_violations == 0);
    CHECK(classify(r, p.fh, p.gh).misaligned() == 0);
    std::size_t cost = r.cost(p.x, p.y), in = a.cost(p.x, p.y);
    CHECK(cost >= in);
    CHECK(oracle::ted_exact(f, g) <= cost / 2);
    double nn = static_cast<double>(std::max(f.size(), g.size()));
    CHECK(static_cast<double>(cost) <= 64 * std::sqrt(nn) * static_cast<double>(std::max<std::size_t>(in, 1)));
  }
  CHECK(violations == 0);
  MESSAGE("chains " << chains_seen << ", light matches " << light << ", cleanup deletions " << cleanup);
}

TEST_CASE("static pipeline") {
  SUBCASE("equal forests") {
    LabelTable lt;
    auto f = parse_forest("a(b c(d e) f) g(h)", lt);
    auto r = static_sqrt_pipeline(f, f);
    CHECK(r.ed == 0);
    CHECK(r.ted_upper == 0);
    CHECK(r.alignment == Alignment::identity(2 * f.size()));
  }
  SUBCASE("random pairs sandwich") {
    auto rng = testutil::make_rng(74);
    for (int t = 0; t < 30; ++t) {
      auto f = testutil::random_forest(rng, 1 + rng() % 120, 3);
      auto g = perturb(rng, f, 1 + static_cast<int>(rng() % 5), 3);
      auto r = static_sqrt_pipeline(f, g);
      std::size_t ted = oracle::ted_exact(f, g);
      std::size_t n = std::max(f.size(), g.size());
      CHECK(r.ed <= 2 * 8 * (1 + lg(n)) * ted);
      CHECK(ted <= r.ted_upper);
      CHECK(r.ed <= r.ed_deletion);
      CHECK(r.ed_deletion <= r.repaired_cost);
    }
  }
}

TEST_CASE("chain gap family") {
  for (std::size_t n : {64, 256}) {
    auto [f, g] = chain_gap_family(n);
    CHECK(f.size() == g.size());
    auto r = static_sqrt_pipeline(f, g);
    std::size_t ted = oracle::ted_exact(f, g);
    double root = std::sqrt(static_cast<double>(f.size()));
    CHECK(r.ed <= 8);
    CHECK(static_cast<double>(ted) >= root / 8);
    CHECK(ted <= r.ted_upper);
    MESSAGE("n=" << f.size() << " ed=" << r.ed << " ted=" << ted << " upper=" << r.ted_upper);
  }
}
