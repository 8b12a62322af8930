#include <doctest.h>

#include <algorithm>
#include <cmath>
#include <set>

#include "bracketdyn/forest_core.hpp"
#include "bracketdyn/oracles.hpp"
#include "test_util.hpp"

using namespace bracketdyn;

namespace {

std::size_t ceil_lg(std::size_t n) {
  std::size_t r = 0;
  while ((std::size_t{1} << r) < n) ++r;
  return r;
}

std::vector<int> alive_ids(const Forest& f) {
  std::vector<int> ids;
  f.to_plain(&ids);
  return ids;
}

NodeEdit random_node_edit(std::mt19937_64& rng, const Forest& f, int labels) {
  auto ids = alive_ids(f);
  int op = ids.empty() ? 0 : static_cast<int>(rng() % 3);
  auto label = static_cast<std::int64_t>(rng() % labels);
  if (op == 0) {
    int p = static_cast<int>(rng() % (ids.size() + 1)) - 1;
    if (p >= 0) p = ids[p];
    std::size_t m = f.children(p).size();
    std::size_t first = rng() % (m + 1);
    std::size_t last = first + rng() % (m - first + 1);
    return NodeEdit::insert_under(p, first, last, label);
  }
  int v = ids[rng() % ids.size()];
  if (op == 1) return NodeEdit::erase_node(v);
  return NodeEdit::relabel_node(v, label);
}

bool balanced(const ParenString& s) {
  std::vector<std::int64_t> st;
  for (auto p : s) {
    if (p.opens()) {
      st.push_back(p.type);
    } else {
      if (st.empty() || st.back() != p.type) return false;
      st.pop_back();
    }
  }
  return st.empty();
}

void check_structure(const Forest& f) {
  std::vector<int> ids;
  PlainForest pf = f.to_plain(&ids);
  ParenString s = f.str();
  REQUIRE(s == pf.to_parens());
  REQUIRE(balanced(s));
  REQUIRE(s.size() == 2 * f.size());
  auto sz = pf.subtree_sizes();
  for (std::size_t k = 0; k < ids.size(); ++k) {
    int v = ids[k];
    CHECK(f.parent(v) == (pf.parent[k] < 0 ? -1 : ids[pf.parent[k]]));
    CHECK(f.subtree_size(v) == static_cast<std::size_t>(sz[k]));
    CHECK(s[f.open_pos(v)] == open_paren(f.label(v)));
    CHECK(s[f.close_pos(v)] == close_paren(f.label(v)));
  }
}

void check_labels(const Forest& f, const HldLabels& labels, const HldContext& ctx) {
  std::vector<int> ids;
  PlainForest pf = f.to_plain(&ids);
  auto sz = pf.subtree_sizes();
  auto hl = oracle::heavy_light_reference(pf.parent);
  ParenString p = labels.phld_string();
  REQUIRE(p.size() == 2 * ids.size());
  for (std::size_t k = 0; k < ids.size(); ++k) {
    int v = ids[k];
    int id = labels.label_id(v);
    REQUIRE(id >= 0);
    CHECK(ctx.content(id) == light_subtree(pf, static_cast<int>(k)));
    CHECK(ctx.heavy_depth_of(id) == static_cast<int>(oracle::floor_log2(sz[k])));
    CHECK(labels.is_heavy(f, v) == static_cast<bool>(hl.heavy[k]));
    CHECK(p[f.open_pos(v)] == open_paren(id));
    CHECK(p[f.close_pos(v)] == close_paren(id));
  }
}

}  // namespace

TEST_CASE("deleting the root of a single node tree empties the forest") {
  LabelTable lt;
  Forest f(parse_forest("a", lt));
  f.apply(NodeEdit::erase_node(0));
  CHECK(f.size() == 0);
  CHECK(f.str().empty());
  CHECK_THROWS_AS(f.depth(0), StaleNode);
}

TEST_CASE("deleting an internal node splices its children") {
  LabelTable lt;
  PlainForest pf = parse_forest("a(b c(d e) f)", lt);
  Forest f(pf);
  auto d = f.apply(NodeEdit::erase_node(2));
  CHECK(d.open_pos == 3);
  CHECK(d.close_pos == 8);
  CHECK(format_forest(f.to_plain(), lt) == format_forest(parse_forest("a(b d e f)", lt), lt));
  CHECK(f.children(0) == std::vector<int>{1, 3, 4, 5});
  CHECK(f.parent(3) == 0);
  check_structure(f);
}

TEST_CASE("insertion adopts a child range") {
  LabelTable lt;
  Forest f(parse_forest("a(b c d)", lt));
  auto d = f.apply(NodeEdit::insert_under(0, 1, 3, lt.intern("x")));
  CHECK(format_forest(f.to_plain(), lt) == format_forest(parse_forest("a(b x(c d))", lt), lt));
  CHECK(d.open_pos == 3);
  CHECK(d.close_pos == 8);
  f.apply(NodeEdit::insert_under(-1, 0, 1, lt.intern("r")));
  CHECK(format_forest(f.to_plain(), lt) == format_forest(parse_forest("r(a(b x(c d)))", lt), lt));
  f.apply(NodeEdit::insert_under(-1, 1, 1, lt.intern("s")));
  CHECK(format_forest(f.to_plain(), lt) == format_forest(parse_forest("r(a(b x(c d))) s", lt), lt));
  CHECK_THROWS_AS(f.apply(NodeEdit::insert_under(0, 2, 1, 0)), std::invalid_argument);
  CHECK_THROWS_AS(f.apply(NodeEdit::insert_under(0, 0, 3, 0)), std::invalid_argument);
  check_structure(f);
}

TEST_CASE("root queries") {
  LabelTable lt;
  Forest f(parse_forest("a(b(c)) d", lt));
  CHECK(f.depth(0) == 0);
  CHECK(f.parent(0) == -1);
  CHECK(f.laq(2, 0) == 2);
  CHECK(f.laq(2, 2) == 0);
  CHECK_THROWS_AS(f.laq(2, 3), std::out_of_range);
  CHECK(f.lca(2, 3) == -1);
  CHECK(f.lca(1, 2) == 1);
}

TEST_CASE("one node edit moves the tree edit distance by at most one") {
  auto rng = testutil::make_rng(301);
  Forest f(testutil::random_forest(rng, 20, 3));
  for (int step = 0; step < 500; ++step) {
    PlainForest before = f.to_plain();
    NodeEdit e = random_node_edit(rng, f, 3);
    if (e.op == NodeEdit::Op::insert && f.size() >= 30) e = NodeEdit::erase_node(alive_ids(f)[rng() % f.size()]);
    auto d = f.apply(e);
    PlainForest after = f.to_plain();
    CHECK(oracle::ted_exact(before, after) <= 1);
    ParenString sb = before.to_parens(), sa = after.to_parens();
    CHECK(oracle::ed_exact(sb, sa, oracle::EditCosts::full()) <= 2);
    if (e.op != NodeEdit::Op::erase) CHECK(sa[d.open_pos].opens());
    check_structure(f);
  }
}

TEST_CASE("tree queries agree with naive traversal") {
  auto rng = testutil::make_rng(302);
  for (int round = 0; round < 6; ++round) {
    std::size_t n = 50 + rng() % 450;
    PlainForest pf = round % 2 ? testutil::random_deep_forest(rng, n, 4) : testutil::random_forest(rng, n, 4);
    Forest f(pf);
    for (int e = 0; e < 20; ++e) f.apply(random_node_edit(rng, f, 4));
    std::vector<int> ids;
    pf = f.to_plain(&ids);
    n = pf.size();
    std::vector<int> depth(n, 0);
    for (std::size_t v = 0; v < n; ++v) depth[v] = pf.parent[v] < 0 ? 0 : depth[pf.parent[v]] + 1;
    auto up = [&](int v, int d) {
      while (d-- > 0) v = pf.parent[v];
      return v;
    };
    auto sz = pf.subtree_sizes();
    for (int q = 0; q < 1000; ++q) {
      int a = static_cast<int>(rng() % n), b = static_cast<int>(rng() % n);
      CHECK(f.depth(ids[a]) == static_cast<std::size_t>(depth[a]));
      CHECK(f.subtree_size(ids[a]) == static_cast<std::size_t>(sz[a]));
      int d = static_cast<int>(rng() % (depth[a] + 1));
      CHECK(f.laq(ids[a], d) == ids[up(a, d)]);
      std::set<int> anc;
      for (int x = a; x >= 0; x = pf.parent[x]) anc.insert(x);
      int l = b;
      while (l >= 0 && !anc.count(l)) l = pf.parent[l];
      CHECK(f.lca(ids[a], ids[b]) == (l < 0 ? -1 : ids[l]));
    }
  }
}

TEST_CASE("light ancestors") {
  LabelTable lt;
  Forest one(parse_forest("a", lt));
  HldContext ctx;
  HldLabels l1(one, ctx);
  CHECK(light_ancestors(one, l1, 0).empty());
  CHECK(light_ancestors(one, l1, 0, true) == std::vector<int>{0});

  auto rng = testutil::make_rng(303);
  for (int round = 0; round < 20; ++round) {
    PlainForest pf = round % 2 ? testutil::random_deep_forest(rng, 120, 2) : testutil::random_forest(rng, 120, 2);
    Forest f(pf);
    HldLabels labels(f, ctx);
    auto hl = oracle::heavy_light_reference(pf.parent);
    for (int v = 0; v < static_cast<int>(pf.size()); ++v) {
      std::vector<int> expect;
      for (int a = pf.parent[v]; a >= 0; a = pf.parent[a]) {
        if (!hl.heavy[a]) expect.push_back(a);
      }
      std::reverse(expect.begin(), expect.end());
      auto got = light_ancestors(f, labels, v);
      CHECK(got == expect);
      CHECK(got.size() <= 1 + oracle::floor_log2(pf.size()));
    }
  }
}

TEST_CASE("light subtree replaces the heavy child") {
  LabelTable lt;
  PlainForest pf = parse_forest("a(b(c d f) e)", lt);
  // |F(a)| = 6 and |F(b)| = 4 share heavy depth 2.
  ParenString expect{open_paren(0), open_paren(kHashType), close_paren(kHashType), open_paren(5), close_paren(5),
                     close_paren(0)};
  CHECK(light_subtree(pf, 0) == expect);
  CHECK(light_subtree(pf, 2) == ParenString{open_paren(2), close_paren(2)});
}

TEST_CASE("relabelling a leaf under a heavy spine touches few labels") {
  // A path of 64 nodes plus a leaf hanging off the bottom.
  PlainForest pf;
  for (int v = 0; v < 64; ++v) {
    pf.parent.push_back(v - 1);
    pf.label.push_back(0);
  }
  Forest f(pf);
  HldContext ctx;
  HldLabels labels(f, ctx);
  auto d = f.apply(NodeEdit::relabel_node(63, 1));
  auto changes = labels.update(f, d);
  CHECK(changes.size() <= 2 * (2 + oracle::floor_log2(64)));
  CHECK(std::any_of(changes.begin(), changes.end(), [](const LabelChange& c) { return c.node == 63; }));
  check_labels(f, labels, ctx);
}

TEST_CASE("an insertion that turns a sibling light swaps a hash for a subtree") {
  LabelTable lt;
  // |F(r)| = 7 and |F(x)| = 4 share heavy depth 2, so x is heavy.
  Forest f(parse_forest("r(x(p q s) y z)", lt));
  HldContext ctx;
  HldLabels labels(f, ctx);
  check_labels(f, labels, ctx);
  CHECK(labels.heavy_child(f, 0) == 1);
  auto has_hash = [&](int id) {
    ParenString c = ctx.content(id);
    return std::any_of(c.begin(), c.end(), [](Paren p) { return p.type == kHashType; });
  };
  CHECK(has_hash(labels.label_id(0)));
  // The root grows to 8 and moves to heavy depth 3; x turns light.
  auto d = f.apply(NodeEdit::insert_under(0, 3, 3, lt.intern("w")));
  auto changes = labels.update(f, d);
  check_labels(f, labels, ctx);
  CHECK(labels.heavy_child(f, 0) == -1);
  CHECK(!labels.is_heavy(f, 1));
  CHECK(!has_hash(labels.label_id(0)));
  CHECK(std::any_of(changes.begin(), changes.end(), [](const LabelChange& ch) { return ch.node == 0; }));
}

TEST_CASE("incremental modified labels match a rebuild") {
  auto rng = testutil::make_rng(304);
  HldContext ctx;
  for (int round = 0; round < 3; ++round) {
    PlainForest pf = round == 1 ? testutil::random_deep_forest(rng, 300, 3) : testutil::random_forest(rng, 300, 3);
    Forest f(pf);
    HldLabels labels(f, ctx);
    check_labels(f, labels, ctx);
    for (int step = 0; step < 300; ++step) {
      NodeEdit e = random_node_edit(rng, f, 3);
      if (e.op == NodeEdit::Op::insert && f.size() >= 400) e = NodeEdit::erase_node(alive_ids(f)[rng() % f.size()]);
      auto d = f.apply(e);
      auto changes = maintain_phld(f, labels, d);
      CHECK(changes.size() <= 16 * (1 + ceil_lg(std::max<std::size_t>(f.size(), 2))));
      check_labels(f, labels, ctx);
    }
  }
}

TEST_CASE("modified label string distance is within twice the modified tree distance") {
  auto rng = testutil::make_rng(305);
  for (int trial = 0; trial < 40; ++trial) {
    PlainForest a = testutil::random_forest(rng, 4 + rng() % 20, 2);
    Forest g(a);
    int edits = static_cast<int>(rng() % 4);
    for (int e = 0; e < edits; ++e) g.apply(random_node_edit(rng, g, 2));
    PlainForest b = g.to_plain();
    StaticHldInterner in;
    PlainForest ah = hld_forest(a, in), bh = hld_forest(b, in);
    std::size_t ted_h = oracle::ted_exact(ah, bh);
    std::size_t ed = oracle::ed_exact(ah.to_parens(), bh.to_parens(), oracle::EditCosts::full());
    CHECK(ed <= 2 * ted_h);
    std::size_t ted = oracle::ted_exact(a, b);
    double lg = std::log2(static_cast<double>(std::max<std::size_t>({a.size(), b.size(), 2})));
    CHECK(static_cast<double>(ted_h) <= 8 * (1 + lg) * static_cast<double>(ted));
  }
}
