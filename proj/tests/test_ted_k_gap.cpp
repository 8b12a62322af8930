#include <doctest.h>

#include <algorithm>
#include <cmath>
#include <functional>

#include "bracketdyn/oracles.hpp"
#include "bracketdyn/ted_k_gap.hpp"
#include "test_util.hpp"

using namespace bracketdyn;

namespace {

PlainForest forest_of(const char* text) { return PlainForest::from_parens(parse_parens(text)); }

PlainForest path(std::size_t n, std::int64_t label) {
  PlainForest f;
  for (std::size_t v = 0; v < n; ++v) {
    f.parent.push_back(static_cast<int>(v) - 1);
    f.label.push_back(label);
  }
  return f;
}

NodeEdit random_edit(std::mt19937_64& rng, const Forest& t, int labels) {
  std::vector<int> ids;
  t.to_plain(&ids);
  int op = ids.empty() ? 0 : static_cast<int>(rng() % 3);
  auto label = static_cast<std::int64_t>(rng() % labels);
  if (op == 0) {
    int p = static_cast<int>(rng() % (ids.size() + 1)) - 1;
    if (p >= 0) p = ids[p];
    std::size_t c = t.children(p).size();
    std::size_t a = rng() % (c + 1);
    std::size_t b = a + rng() % (c - a + 1);
    return NodeEdit::insert_under(p, a, b, label);
  }
  int v = ids[rng() % ids.size()];
  return op == 1 ? NodeEdit::erase_node(v) : NodeEdit::relabel_node(v, label);
}

// Every Dyck word with n pairs.
void all_shapes(std::size_t n, const std::function<void(const ParenString&)>& visit) {
  ParenString s;
  std::function<void(std::size_t, std::size_t)> rec = [&](std::size_t open, std::size_t depth) {
    if (open == n && depth == 0) {
      visit(s);
      return;
    }
    if (open < n) {
      s.push_back({Kind::open, 0});
      rec(open + 1, depth + 1);
      s.pop_back();
    }
    if (depth > 0) {
      s.push_back({Kind::close, 0});
      rec(open, depth - 1);
      s.pop_back();
    }
  };
  rec(0, 0);
}

std::vector<std::size_t> positions(const Piece& p) {
  std::vector<std::size_t> out;
  for (std::size_t x = p.i1; x < p.j1; ++x) out.push_back(x);
  if (p.context) {
    for (std::size_t x = p.i2; x < p.j2; ++x) out.push_back(x);
  }
  return out;
}

// Empty string on success, else a description of the first problem.
std::string check_partition(const Forest& f, const Piece& p) {
  auto parts = partition_piece(f, p);
  if (parts.size() > 8) return "more than 8 parts";
  std::size_t cap = (p.size() + 1) / 2;
  std::vector<std::size_t> covered;
  for (const Piece& q : parts) {
    if (!valid_piece(f, q)) return "invalid part";
    if (q.size() > cap) return "part too large";
    auto pos = positions(q);
    covered.insert(covered.end(), pos.begin(), pos.end());
  }
  std::sort(covered.begin(), covered.end());
  if (covered != positions(p)) return "parts do not partition the piece";
  return {};
}

std::vector<Piece> all_pieces(const Forest& f) {
  std::vector<Piece> out;
  std::size_t n = 2 * f.size();
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j = i + 2; j <= n; j += 2) {
      if (f.balanced(i, j)) out.push_back(Piece::subforest(i, j));
    }
  }
  for (int w = 0; w < static_cast<int>(f.id_bound()); ++w) {
    std::size_t o = f.open_pos(w), c = f.close_pos(w);
    for (std::size_t a = o + 1; a < c; ++a) {
      for (std::size_t b = a + 2; b <= c; b += 2) {
        if (f.balanced(a, b)) out.push_back(Piece::make_context(o, a, b, c + 1));
      }
    }
  }
  return out;
}

bool naive_has_match(const ParenString& x, const ParenString& y, const Piece& p, std::size_t k, std::size_t shift) {
  auto occurs = [&](std::size_t from, std::size_t len, std::size_t at) {
    if (at + len > y.size()) return false;
    return std::equal(x.begin() + static_cast<std::ptrdiff_t>(from),
                      x.begin() + static_cast<std::ptrdiff_t>(from + len),
                      y.begin() + static_cast<std::ptrdiff_t>(at));
  };
  auto starts = [&](std::size_t from, std::size_t len) {
    std::vector<std::size_t> out;
    std::size_t lo = from > shift ? from - shift : 0;
    for (std::size_t s = lo; s <= from + shift; ++s) {
      if (occurs(from, len, s)) out.push_back(s);
    }
    return out;
  };
  if (!p.context) return !starts(p.i1, p.size()).empty();
  std::size_t l1 = p.j1 - p.i1, l2 = p.j2 - p.i2;
  if (l1 < 2 * k) return !starts(p.i2, l2).empty();
  if (l2 < 2 * k) return !starts(p.i1, l1).empty();
  PlainForest gy = PlainForest::from_parens(y);
  Forest g(gy);
  for (std::size_t a : starts(p.i1, l1)) {
    for (std::size_t b : starts(p.i2, l2)) {
      if (a + l1 < b && g.node_at(a) == g.node_at(b + l2 - 1) && g.balanced(a + l1, b)) return true;
    }
  }
  return false;
}

}  // namespace

TEST_CASE("highest ancestor searches agree with a naive walk") {
  SUBCASE("v already the highest") {
    Forest f(forest_of("(()())"));
    CHECK(find_highest_anc(f, 0, 6, 0) == 0);
  }
  SUBCASE("single path, exact threshold") {
    Forest f(path(10, 0));
    for (std::size_t m = 2; m <= 20; ++m) {
      int u = find_mid_anc(f, 0, 20, m, 9);
      CHECK(u == static_cast<int>(10 - m / 2));
      CHECK(2 * f.subtree_size(u) <= m);
    }
    CHECK(find_mid_anc(f, 0, 20, 1, 9) == -1);
  }
  SUBCASE("random queries") {
    auto rng = testutil::make_rng(601);
    for (int q = 0; q < 1000; ++q) {
      Forest f(testutil::random_forest(rng, 1 + rng() % 60, 2));
      std::size_t n = 2 * f.size();
      std::size_t i = rng() % n, j = i + 1 + rng() % (n - i);
      int v = f.node_at(i + rng() % (j - i));
      if (f.open_pos(v) < i || f.close_pos(v) >= j) continue;
      std::size_t m = rng() % (j - i + 2);
      int hi = v, mid = -1;
      for (int y = v; y >= 0 && f.open_pos(y) >= i && f.close_pos(y) < j; y = f.parent(y)) {
        hi = y;
        if (2 * f.subtree_size(y) <= m) mid = y;
      }
      CHECK(find_highest_anc(f, i, j, v) == hi);
      CHECK(find_mid_anc(f, i, j, m, v) == mid);
    }
  }
}

TEST_CASE("partition of a balanced star splits around the central child") {
  PlainForest star;
  star.parent = {-1, 0, 0, 0, 0, 0, 0, 0, 0};
  star.label.assign(9, 0);
  Forest f(star);
  auto parts = partition_piece(f, Piece::subforest(0, 18));
  // Root parentheses as a context, then leaves left of, at and right of the middle.
  REQUIRE(parts.size() == 4);
  CHECK(parts[0] == Piece::make_context(0, 1, 17, 18));
  CHECK(parts[1] == Piece::subforest(1, 9));
  CHECK(parts[2] == Piece::subforest(9, 11));
  CHECK(parts[3] == Piece::subforest(11, 17));
  CHECK(check_partition(f, Piece::subforest(0, 18)).empty());
}

TEST_CASE("partition keeps parts within half even when the context would overflow") {
  Forest f(forest_of("((()))"));
  auto parts = partition_piece(f, Piece::subforest(0, 6));
  CHECK(check_partition(f, Piece::subforest(0, 6)).empty());
  for (const Piece& q : parts) CHECK(q.size() <= 3);
}

TEST_CASE("context with a large excluded subtree takes the second case with 8 parts") {
  // Root r, child v; v's children left of the gap form a forest that splits
  // into six parts, the gap is v's last child.
  Forest f(forest_of("((()(()((()()()))())()(()()))())"));
  int gap = f.children(1).back();
  Piece p = Piece::make_context(0, f.open_pos(gap), f.close_pos(gap) + 1, 2 * f.size());
  REQUIRE(valid_piece(f, p));
  auto parts = partition_piece(f, p);
  CHECK(parts.size() == 8);
  CHECK(check_partition(f, p).empty());
}

TEST_CASE("partition is valid on every forest with at most 12 nodes") {
  std::size_t checked = 0;
  for (std::size_t n = 2; n <= 12; ++n) {
    all_shapes(n, [&](const ParenString& s) {
      Forest f(PlainForest::from_parens(s));
      auto err = check_partition(f, Piece::subforest(0, s.size()));
      if (!err.empty()) FAIL_CHECK(err << " on " << format_parens(s));
      ++checked;
    });
  }
  CHECK(checked > 200000);
}

TEST_CASE("partition is valid on every piece of small forests") {
  for (std::size_t n = 2; n <= 7; ++n) {
    all_shapes(n, [&](const ParenString& s) {
      Forest f(PlainForest::from_parens(s));
      for (const Piece& p : all_pieces(f)) {
        if (p.size() < 4) {
          CHECK_THROWS_AS(partition_piece(f, p), std::invalid_argument);
          continue;
        }
        auto err = check_partition(f, p);
        if (!err.empty()) FAIL_CHECK(err << " on " << format_parens(s));
      }
    });
  }
  auto rng = testutil::make_rng(602);
  for (int t = 0; t < 40; ++t) {
    Forest f(testutil::random_deep_forest(rng, 20 + rng() % 30, 2));
    auto pieces = all_pieces(f);
    for (int q = 0; q < 200; ++q) {
      const Piece& p = pieces[rng() % pieces.size()];
      if (p.size() >= 4) CHECK(check_partition(f, p).empty());
    }
  }
  CHECK_THROWS_AS(partition_piece(Forest(forest_of("(())")), Piece::subforest(0, 3)), std::invalid_argument);
}

TEST_CASE("has_match") {
  SUBCASE("verbatim at the same index") {
    PlainForest x = forest_of("(()(()))(())");
    ForestPair d(x, x);
    CHECK(has_match(d, Piece::subforest(0, 8), 0));
    CHECK(has_match(d, Piece::make_context(0, 3, 7, 8), 0));
  }
  SUBCASE("period-two spine: depth progressions meet at the planted root") {
    // Spine of a-nodes; odd depths carry a leading b-leaf, so the left part
    // recurs at depths 2i+1 while the right part recurs at every depth.
    ParenString s;
    std::size_t len = 16;
    for (std::size_t dpt = 0; dpt < len; ++dpt) {
      s.push_back({Kind::open, 0});
      if (dpt % 2 == 1) {
        s.push_back({Kind::open, 1});
        s.push_back({Kind::close, 1});
      }
    }
    for (std::size_t dpt = 0; dpt < len; ++dpt) s.push_back({Kind::close, 0});
    PlainForest x = PlainForest::from_parens(s);
    ForestPair d(x, x);
    const Forest& f = d.f();
    // Root at depth 3, gap = the subtree at depth 7.
    int root = 3, low = 7;
    Piece p = Piece::make_context(f.open_pos(root), f.open_pos(low), f.close_pos(low) + 1, f.close_pos(root) + 1);
    REQUIRE(valid_piece(f, p));
    for (std::size_t k = 0; k <= 3; ++k) {
      CHECK(has_match(d, p, k, true).has_value());
      CHECK(naive_has_match(f.str(), d.g().str(), p, k, 2 * k));
    }
  }
  SUBCASE("planted shifts: 2k characters match, one more does not") {
    auto rng = testutil::make_rng(603);
    for (int t = 0; t < 40; ++t) {
      std::size_t k = 1 + rng() % 4;
      PlainForest piece = testutil::random_forest(rng, 3 + rng() % 10, 3);
      for (auto& l : piece.label) l += 10;
      for (std::size_t shift_nodes : {k, k + 1}) {
        // F: k leaves then the piece; G: the leaves and shift_nodes more.
        ParenString pf, pg;
        for (std::size_t e = 0; e < k; ++e) pf.insert(pf.end(), {{Kind::open, 0}, {Kind::close, 0}});
        pg = pf;
        for (std::size_t e = 0; e < shift_nodes; ++e) pg.insert(pg.end(), {{Kind::open, 0}, {Kind::close, 0}});
        ParenString body = piece.to_parens();
        std::size_t start = pf.size();
        pf.insert(pf.end(), body.begin(), body.end());
        pg.insert(pg.end(), body.begin(), body.end());
        ForestPair d(PlainForest::from_parens(pf), PlainForest::from_parens(pg));
        Piece p = Piece::subforest(start, start + body.size());
        bool expect = 2 * shift_nodes <= 2 * k;
        CHECK(has_match(d, p, k).has_value() == expect);
        CHECK(naive_has_match(pf, pg, p, k, 2 * k) == expect);
      }
    }
  }
  SUBCASE("random pieces against the naive window scan") {
    auto rng = testutil::make_rng(604);
    for (int t = 0; t < 60; ++t) {
      PlainForest x = testutil::random_forest(rng, 10 + rng() % 40, 2);
      ForestPair d(x, x);
      for (int e = 0; e < 3; ++e) d.apply(1, random_edit(rng, d.g(), 2));
      ParenString sx = d.f().str(), sy = d.g().str();
      auto pieces = all_pieces(d.f());
      for (int q = 0; q < 60; ++q) {
        const Piece& p = pieces[rng() % pieces.size()];
        std::size_t k = rng() % 4;
        // Never a false positive, for either shift allowance.
        if (has_match_within(d, p, k, k)) CHECK(naive_has_match(sx, sy, p, k, k));
        if (has_match(d, p, k)) CHECK(naive_has_match(sx, sy, p, k, 2 * k));
        if (!p.context) CHECK(has_match(d, p, k).has_value() == naive_has_match(sx, sy, p, k, 2 * k));
      }
    }
  }
  SUBCASE("with k shifts the minimum-depth pair can fail while a deeper one fits") {
    PlainForest x = forest_of("()()[[([([][([()[]([()])[[]]])])])]]");
    PlainForest y = forest_of("()()[[([][([][([()[][()][[]]])])])]]");
    ForestPair d(x, y);
    Piece p = Piece::make_context(7, 14, 28, 33);
    REQUIRE(valid_piece(d.f(), p));
    CHECK_FALSE(has_match_within(d, p, 2, 2));
    CHECK(naive_has_match(x.to_parens(), y.to_parens(), p, 2, 2));
    CHECK_THROWS_AS(has_match_within(d, p, 2, 2, true), std::logic_error);
  }
  SUBCASE("with 2k shifts the minimum-depth pair can fail while a deeper one fits") {
    PlainForest x = forest_of("[([[[[]][((([[]])))]]])]");
    PlainForest y = forest_of("[([[[[][((([[]])))]]][]])]");
    ForestPair d(x, y);
    Piece p = Piece::make_context(2, 4, 20, 22);
    REQUIRE(valid_piece(d.f(), p));
    CHECK_FALSE(has_match(d, p, 1));
    CHECK(naive_has_match(x.to_parens(), y.to_parens(), p, 1, 2));
    CHECK_THROWS_AS(has_match(d, p, 1, true), std::logic_error);
    CHECK(has_match_within(d, p, 1, 1, true));
  }
}

TEST_CASE("gap_query on identical forests") {
  auto rng = testutil::make_rng(605);
  for (std::size_t k = 0; k <= 6; ++k) {
    PlainForest x = testutil::random_forest(rng, 50 + rng() % 200, 3);
    GapResult r = gap_query(x, x, k);
    CHECK(r.yes);
    CHECK(r.iterations == 1);
    CHECK(r.certificate_valid);
    // Only nodes touching the 2k margins at each end are given up.
    CHECK(r.certificate_cost <= 8 * k);
    if (k == 0) CHECK(r.certificate_cost == 0);
  }
  CHECK(gap_query(PlainForest{}, PlainForest{}, 0).yes);
}

TEST_CASE("gap_query says No on far apart forests") {
  GapResult r = gap_query(path(64, 0), path(64, 1), 1);
  CHECK_FALSE(r.yes);
  CHECK_FALSE(r.size_guard);
  CHECK(r.iterations == r.budget + 1);
  GapResult s = gap_query(path(64, 0), path(60, 0), 2);
  CHECK_FALSE(s.yes);
  CHECK(s.size_guard);
}

TEST_CASE("gap_query certificates on scripted edits") {
  auto rng = testutil::make_rng(606);
  int misses = 0, trials = 150;
  for (int t = 0; t < trials; ++t) {
    std::size_t k = 1 + rng() % 8;
    PlainForest x = testutil::random_forest(rng, 20 + rng() % 280, 4);
    ForestPair d(x, x);
    std::size_t edits = rng() % (k + 1);
    for (std::size_t e = 0; e < edits; ++e) d.apply(1, random_edit(rng, d.g(), 6));
    GapOptions opt;
    GapResult r = gap_query(d, k, opt);
    if (!r.yes) ++misses;
    // With twice the iteration budget every instance completes.
    opt.budget_factor = 2.0;
    GapResult wide = gap_query(d, k, opt);
    REQUIRE(wide.yes);
    for (const GapResult* g : {&r, &wide}) {
      if (!g->yes) continue;
      CHECK(g->certificate_valid);
      CHECK(g->certificate_cost <= g->certificate_bound);
      CHECK(g->certificate.cost(d.f().str(), d.g().str()) == 2 * g->certificate_cost);
    }
  }
  // The stated budget misses a minority of instances.
  CHECK(misses * 4 < trials);
  MESSAGE("stated budget missed " << misses << " of " << trials);
}

TEST_CASE("gap_query Yes implies the certificate bounds ted") {
  auto rng = testutil::make_rng(607);
  for (int t = 0; t < 40; ++t) {
    std::size_t k = rng() % 3;
    PlainForest x = testutil::random_forest(rng, 5 + rng() % 30, 2);
    PlainForest y = testutil::random_forest(rng, 5 + rng() % 30, 2);
    GapResult r = gap_query(x, y, k);
    if (!r.yes) continue;
    CHECK(r.certificate_valid);
    CHECK(oracle::ted_exact(x, y) <= r.certificate_cost);
  }
}

TEST_CASE("worklist pieces stay disjoint") {
  auto rng = testutil::make_rng(608);
  for (int t = 0; t < 20; ++t) {
    PlainForest x = testutil::random_forest(rng, 100, 3);
    PlainForest y = testutil::random_forest(rng, 100, 3);
    ForestPair d(x, y);
    std::size_t k = 1 + rng() % 3;
    std::size_t n = 2 * d.f().size();
    // Replays the loop with its own worklist to inspect it.
    std::deque<Piece> work{Piece::subforest(0, n)};
    for (std::size_t it = 0; it <= gap_budget(k, 100) && !work.empty(); ++it) {
      std::vector<int> mark(n, 0);
      for (const Piece& p : work) {
        for (std::size_t pos : positions(p)) ++mark[pos];
      }
      CHECK(*std::max_element(mark.begin(), mark.end()) <= 1);
      Piece p = work.front();
      work.pop_front();
      if (p.size() <= 4 * k || has_match(d, p, k)) continue;
      for (const Piece& q : partition_piece(d.f(), p)) work.push_back(q);
    }
  }
}

TEST_CASE("session on empty forests stays at zero") {
  GapSession s;
  CHECK(s.estimate() == 0.0);
  for (int t = 0; t < 5; ++t) {
    s.update({0, NodeEdit::insert_under(-1, 0, 0, 1)});
    s.update({0, NodeEdit::erase_node(t)});
    CHECK(s.estimate() == 0.0);
  }
}

TEST_CASE("session settles to zero on synchronized builds") {
  GapSession s;
  auto rng = testutil::make_rng(609);
  for (int t = 0; t < 60; ++t) {
    NodeEdit e = random_edit(rng, s.current().f(), 3);
    s.update({0, e});
    s.update({1, e});
    CHECK(s.current().f().str() == s.current().g().str());
    // Each extended query finishes within the step it was launched in.
    CHECK(s.kappa() == 0);
    CHECK(s.estimate() == 0.0);
  }
}

TEST_CASE("session envelope on a random two-sided walk") {
  auto rng = testutil::make_rng(610);
  PlainForest x = testutil::random_forest(rng, 40, 3);
  GapSession s(x, x);
  CHECK(s.estimate() == 0.0);
  std::size_t worst_steps = 0;
  for (int t = 0; t < 200; ++t) {
    int side = static_cast<int>(rng() % 2);
    double est = s.update({side, random_edit(rng, s.current().side(side), 3)});
    const ForestPair& c = s.current();
    std::size_t ted = oracle::ted_exact(c.f().to_plain(), c.g().to_plain());
    double lg = gap_lg(std::max(c.f().size(), c.g().size()));
    auto td = static_cast<double>(ted);
    CHECK(td <= est);
    CHECK(est <= 25 * GapSession::kCert * td * td * lg + 1.25 * td);
    if (s.completed_queries() > 0) {
      double kap = static_cast<double>(s.kappa());
      auto allowed = std::max<std::size_t>(1, static_cast<std::size_t>(std::ceil(0.1 * kap)));
      CHECK(s.last_query_steps() <= allowed);
      worst_steps = std::max(worst_steps, s.last_query_steps());
    }
  }
  CHECK(worst_steps >= 1);
}
