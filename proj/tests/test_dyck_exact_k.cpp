#include <doctest.h>

#include <algorithm>
#include <map>
#include <numeric>
#include <set>

#include "bracketdyn/dyck_exact_k.hpp"
#include "bracketdyn/oracles.hpp"
#include "test_util.hpp"

using namespace bracketdyn;
using oracle::EditCosts;

namespace {

std::size_t ded(ParenView x) { return oracle::ded_exact(x, EditCosts::full()); }

// Quartic enumeration straight from the definition.
std::vector<Trapezoid> brute_trapezoids(ParenView x, std::size_t min_leg) {
  const auto h = heights(x);
  const std::size_t n = x.size();
  auto is_trap = [&](std::size_t a, std::size_t b, std::size_t c, std::size_t d) {
    if (!(a <= b && b <= c && c <= d && d <= n)) return false;
    if (h[a] != h[d] || h[b] != h[c]) return false;
    auto leg = static_cast<std::int64_t>(b - a);
    if (h[b] - h[a] != leg || h[c] - h[d] != leg || d - c != b - a) return false;
    for (std::size_t i = b; i <= c; ++i) {
      if (h[i] < h[b]) return false;
    }
    return true;
  };
  std::vector<Trapezoid> out;
  for (std::size_t a = 0; a <= n; ++a)
    for (std::size_t b = a + 1; b <= n; ++b)
      for (std::size_t c = b; c <= n; ++c)
        for (std::size_t d = c; d <= n; ++d) {
          if (!is_trap(a, b, c, d)) continue;
          if (a > 0 && d < n && is_trap(a - 1, b, c, d + 1)) continue;
          if (b + 1 <= c - 1 && c > 0 && is_trap(a, b + 1, c - 1, d)) continue;
          if (b - a >= min_leg) out.push_back({a, b, c, d});
        }
  std::sort(out.begin(), out.end());
  return out;
}

// Connected components of the cycle graph after the leg surgery.
std::set<std::vector<std::size_t>> surgery_components(std::size_t n, const std::vector<Trapezoid>& ts) {
  std::vector<std::size_t> parent(n + 1);
  std::iota(parent.begin(), parent.end(), 0);
  auto find = [&](std::size_t v) {
    while (parent[v] != v) v = parent[v] = parent[parent[v]];
    return v;
  };
  auto unite = [&](std::size_t u, std::size_t v) { parent[find(u)] = find(v); };
  std::vector<char> leg_edge(n, 0), gone(n + 1, 0);
  for (const auto& t : ts) {
    for (std::size_t i = t.a; i < t.b; ++i) leg_edge[i] = 1;
    for (std::size_t i = t.c; i < t.d; ++i) leg_edge[i] = 1;
    for (std::size_t i = t.a + 1; i < t.b; ++i) gone[i] = 1;
    for (std::size_t i = t.c + 1; i < t.d; ++i) gone[i] = 1;
  }
  for (std::size_t i = 0; i < n; ++i) {
    if (!leg_edge[i]) unite(i, i + 1);
  }
  unite(n, 0);
  for (const auto& t : ts) {
    unite(t.a, t.d);
    unite(t.b, t.c);
  }
  std::map<std::size_t, std::vector<std::size_t>> groups;
  for (std::size_t v = 0; v <= n; ++v) {
    if (!gone[v]) groups[find(v)].push_back(v);
  }
  std::set<std::vector<std::size_t>> out;
  for (auto& [r, vs] : groups) out.insert(vs);
  return out;
}

// Reduced string with a planted trapezoid of the given leg length.
ParenString planted(std::mt19937_64& rng, std::size_t leg, int types) {
  ParenString legs;
  for (std::size_t i = 0; i < leg; ++i) legs.push_back(open_paren(static_cast<std::int64_t>(rng() % types)));
  ParenString mid = testutil::near_dyck(rng, rng() % 6, types, static_cast<int>(rng() % 3));
  ParenString out = testutil::random_parens(rng, rng() % 6, types);
  out.insert(out.end(), legs.begin(), legs.end());
  out.insert(out.end(), mid.begin(), mid.end());
  ParenString right = transpose(legs);
  for (auto& p : right) {
    if (rng() % 4 == 0) p.type = static_cast<std::int64_t>(rng() % types);
  }
  out.insert(out.end(), right.begin(), right.end());
  auto tail = testutil::random_parens(rng, rng() % 6, types);
  out.insert(out.end(), tail.begin(), tail.end());
  return out;
}

CharEdit random_edit(std::mt19937_64& rng, std::size_t n, int types) {
  Paren p{(rng() & 1) ? Kind::close : Kind::open, static_cast<std::int64_t>(rng() % types)};
  int op = n == 0 ? 0 : static_cast<int>(rng() % 3);
  if (op == 0) return CharEdit::insert_at(rng() % (n + 1), p);
  if (op == 1) return CharEdit::erase_at(rng() % n);
  return CharEdit::substitute_at(rng() % n, p);
}

}  // namespace

TEST_CASE("single tall trapezoid") {
  auto x = parse_parens("((((]]]]");
  auto ts = build_trapezoids(lr_decompose(x), 4);
  REQUIRE(ts.size() == 1);
  CHECK(ts[0] == Trapezoid{0, 4, 4, 8});
  CHECK(build_trapezoids(lr_decompose(x), 5).empty());
  CHECK(build_trapezoids(lr_decompose(parse_parens("(]([)]")), 4).empty());
}

TEST_CASE("trapezoids agree with enumeration") {
  auto rng = testutil::make_rng(71);
  for (int t = 0; t < 300; ++t) {
    ParenString x = t % 3 == 0 ? testutil::random_parens(rng, rng() % 24, 2) : reduce_hat(planted(rng, 1 + rng() % 8, 2));
    if (x.size() > 34) x.resize(34);
    for (std::size_t k : {1, 2, 3, 5}) {
      CHECK(build_trapezoids(lr_decompose(x), 2 * k) == brute_trapezoids(x, 2 * k));
    }
    CHECK(build_trapezoids(lr_decompose(x), 1) == brute_trapezoids(x, 1));
  }
}

TEST_CASE("cluster decomposition without trapezoids") {
  auto dec = build_clusters(6, {});
  REQUIRE(dec.clusters.size() == 1);
  CHECK(dec.clusters[0].vertices == std::vector<std::size_t>{0, 1, 2, 3, 4, 5, 6});
  CHECK(dec.clusters[0].parent == -1);
}

TEST_CASE("cluster decomposition of one spanning trapezoid") {
  auto dec = build_clusters(10, {{0, 4, 6, 10}});
  REQUIRE(dec.clusters.size() == 2);
  CHECK(dec.clusters[0].vertices == std::vector<std::size_t>{0, 10});
  CHECK(dec.clusters[0].children == std::vector<int>{0});
  CHECK(dec.trap_parent[0] == 0);
  CHECK(dec.trap_child[0] == 1);
  CHECK(dec.clusters[1].vertices == std::vector<std::size_t>{4, 5, 6});
  CHECK(dec.clusters[1].parent == 0);
}

TEST_CASE("nested trapezoids form a tree") {
  // (((( [[[[ ]]]] () )))) with both runs tall for k = 2.
  auto x = parse_parens("(((([[[[]]]]())))))");
  auto ts = build_trapezoids(lr_decompose(x), 4);
  REQUIRE(ts.size() == 2);
  auto dec = build_clusters(x.size(), ts);
  REQUIRE(dec.clusters.size() == 3);
  CHECK(dec.trap_parent[0] == 0);
  CHECK(dec.trap_parent[1] == dec.trap_child[0]);
  std::set<std::vector<std::size_t>> got;
  for (const auto& c : dec.clusters) got.insert(c.vertices);
  CHECK(got == surgery_components(x.size(), ts));
  CHECK_THROWS_AS(build_clusters(10, {{0, 2, 4, 6}, {3, 5, 7, 9}}), std::logic_error);
}

TEST_CASE("clusters are the components of the surgered cycle") {
  auto rng = testutil::make_rng(72);
  for (int t = 0; t < 200; ++t) {
    ParenString x = reduce_hat(planted(rng, 2 + rng() % 10, 2));
    auto ts = build_trapezoids(lr_decompose(x), 2 + rng() % 4);
    auto dec = build_clusters(x.size(), ts);
    std::set<std::vector<std::size_t>> got;
    std::vector<int> owner(x.size() + 1, 0);
    for (const auto& c : dec.clusters) {
      got.insert(c.vertices);
      for (auto v : c.vertices) ++owner[v];
    }
    for (const auto& tr : ts) {
      for (std::size_t v = tr.a + 1; v < tr.b; ++v) ++owner[v];
      for (std::size_t v = tr.c + 1; v < tr.d; ++v) ++owner[v];
    }
    CHECK(std::all_of(owner.begin(), owner.end(), [](int o) { return o == 1; }));
    CHECK(got == surgery_components(x.size(), ts));
  }
}

TEST_CASE("trapezoid tables match substring distances") {
  auto rng = testutil::make_rng(73);
  int checked = 0;
  for (int t = 0; t < 150; ++t) {
    std::size_t kappa = 1 + rng() % 3;
    std::size_t w = 2 * kappa + 2;
    ParenString x = planted(rng, w + rng() % 6, 2);
    auto ts = build_trapezoids(lr_decompose(x), w);
    for (const auto& tr : ts) {
      auto cap = static_cast<std::uint16_t>(kappa + 1);
      auto sub = [&](std::size_t i, std::size_t j) {
        return static_cast<std::uint16_t>(std::min<std::size_t>(ded(ParenView(x).subspan(i, j - i)), cap));
      };
      WindowTable inner(tr.b - w, tr.c, w, cap);
      for (std::size_t i = tr.b - w; i <= tr.b; ++i)
        for (std::size_t j = tr.c; j <= tr.c + w; ++j) inner.at(i, j) = sub(i, j);
      auto dp = process_trapezoid(
          inner, tr, kappa, [&](std::size_t p) { return x[p]; },
          [&](std::size_t i, std::size_t j) {
            std::size_t s = 0;
            while (i > s && j + s < x.size() && pairs_with(x[i - 1 - s], x[j + s])) ++s;
            return s;
          });
      for (std::size_t v = 1; v <= kappa; ++v) {
        for (std::size_t q = 0; q < dp.L[v].size(); ++q) CHECK(dp.L[v][q] >= dp.L[v - 1][q]);
      }
      for (std::size_t i = tr.a; i <= tr.a + w; ++i)
        for (std::size_t j = tr.d - w; j <= tr.d; ++j) {
          CHECK(dp.outer.at(i, j) == sub(i, j));
          ++checked;
        }
    }
  }
  CHECK(checked > 1000);
}

TEST_CASE("solve small examples") {
  CHECK(solve_exact_k(parse_parens("(]"), 1) == 1);
  CHECK(solve_exact_k(parse_parens("(]"), 0) == std::nullopt);
  CHECK(solve_exact_k(parse_parens("((((]]]]"), 4) == 4);
  CHECK(solve_exact_k(parse_parens("((((]]]]"), 3) == std::nullopt);
  CHECK(solve_exact_k(parse_parens(""), 0) == 0);
  auto rng = testutil::make_rng(74);
  CHECK(solve_exact_k(testutil::random_dyck(rng, 40, 3), 0) == 0);
  // Identical legs with nothing between them.
  CHECK(solve_exact_k(parse_parens("(([[(([[]]))]]))"), 1) == 0);
}

TEST_CASE("solve is exact on all short two-type strings") {
  for (std::size_t n = 0; n <= 8; ++n) {
    for (std::size_t code = 0; code < (std::size_t{1} << (2 * n)); ++code) {
      ParenString x(n);
      for (std::size_t i = 0; i < n; ++i) {
        auto bits = (code >> (2 * i)) & 3;
        x[i] = {bits & 1 ? Kind::close : Kind::open, static_cast<std::int64_t>(bits >> 1)};
      }
      std::size_t d = ded(x);
      for (std::size_t k = 0; k <= 4; ++k) {
        auto r = solve_exact_k(x, k);
        if (d <= k) {
          REQUIRE(r == d);
        } else {
          REQUIRE(r == std::nullopt);
        }
      }
    }
  }
}

TEST_CASE("solve is exact on planted trapezoids") {
  auto rng = testutil::make_rng(75);
  for (int t = 0; t < 150; ++t) {
    ParenString x = planted(rng, 6 + rng() % 14, 1 + static_cast<int>(rng() % 3));
    std::size_t d = ded(x);
    ExactKStats st;
    for (std::size_t k = 0; k <= 4; ++k) {
      auto r = solve_exact_k(x, k, &st);
      CHECK(r == (d <= k ? std::optional<std::size_t>(d) : std::nullopt));
      if (r) CHECK(st.tripwires_ok);
    }
    CHECK(solve_exact(x) == d);
  }
}

TEST_CASE("solve on medium random strings") {
  auto rng = testutil::make_rng(76);
  for (int t = 0; t < 40; ++t) {
    ParenString x = t % 2 ? testutil::near_dyck(rng, 40 + rng() % 50, 2, 1 + static_cast<int>(rng() % 5))
                          : testutil::random_parens(rng, rng() % 120, 2);
    CHECK(solve_exact(x) == ded(x));
  }
}

TEST_CASE("session follows the distance under edits") {
  auto rng = testutil::make_rng(77);
  ParenString x = testutil::near_dyck(rng, 30, 2, 3);
  ExactKSession s(x);
  REQUIRE(s.value() == ded(x));
  for (int step = 0; step < 300; ++step) {
    std::size_t before = ded(x);
    CharEdit e = random_edit(rng, x.size(), 2);
    apply_edit(x, e);
    auto v = s.apply(e);
    REQUIRE(v.has_value());
    CHECK(*v == ded(x));
    CHECK(*v + 1 >= before);
    CHECK(*v <= before + 1);
  }
  CHECK(s.text() == x);
}

TEST_CASE("fixing the only error returns zero") {
  ExactKSession s(parse_parens("(()]"));
  CHECK(s.value() == 1);
  CHECK(s.apply(CharEdit::substitute_at(3, close_paren(0))) == 0);
}

TEST_CASE("session cap reports exceeding values") {
  ExactKSession s(parse_parens("))))"), 1);
  CHECK(s.value() == std::nullopt);
  s.apply(CharEdit::erase_at(0));
  s.apply(CharEdit::erase_at(0));
  s.apply(CharEdit::erase_at(0));
  CHECK(s.value() == 1);
}
