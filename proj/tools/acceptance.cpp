// Acceptance suite: one PASS/FAIL line per criterion.
#include <CLI11.hpp>

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <functional>
#include <map>
#include <set>
#include <sstream>
#include <string>
#include <vector>

#include "bracketdyn/dyck_dynamic.hpp"
#include "bracketdyn/dyck_exact_k.hpp"
#include "bracketdyn/dyck_reduction.hpp"
#include "bracketdyn/forest_core.hpp"
#include "bracketdyn/height_forest.hpp"
#include "bracketdyn/oracles.hpp"
#include "bracketdyn/ted_k_gap.hpp"
#include "bracketdyn/tree_align.hpp"
#include "test_util.hpp"

using namespace bracketdyn;
using oracle::EditCosts;

namespace {

// Pinned limits.
constexpr double kLimitTable = 1.0;           // seconds
constexpr double kLimitSandwich = 120.0;
constexpr double kLimitHeavyLight = 120.0;
constexpr double kLimitExactK = 300.0;
constexpr double kLimitGap = 300.0;
constexpr double kPerfMeanMs = 5.0;
constexpr double kPerfSlope = 0.2;

struct Outcome {
  bool pass = false;
  std::string detail;
};

class Timer {
 public:
  double seconds() const {
    return std::chrono::duration<double>(std::chrono::steady_clock::now() - t0_).count();
  }

 private:
  std::chrono::steady_clock::time_point t0_ = std::chrono::steady_clock::now();
};

double lg(double v) { return std::log2(v); }

std::size_t ceil_lg(std::size_t n) {
  std::size_t r = 0;
  while ((std::size_t{1} << r) < n) ++r;
  return r;
}

std::size_t ded_d(ParenView x) { return oracle::ded_exact(x, EditCosts::deletion_only()); }
std::size_t ded(ParenView x) { return oracle::ded_exact(x, EditCosts::full()); }

CharEdit random_char_edit(std::mt19937_64& rng, std::size_t n, int types) {
  Paren p{(rng() & 1) ? Kind::close : Kind::open, static_cast<std::int64_t>(rng() % types)};
  int op = n == 0 ? 0 : static_cast<int>(rng() % 3);
  if (op == 0) return CharEdit::insert_at(rng() % (n + 1), p);
  if (op == 1) return CharEdit::erase_at(rng() % n);
  return CharEdit::substitute_at(rng() % n, p);
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

PlainForest perturb(std::mt19937_64& rng, const PlainForest& f, int edits, int labels) {
  Forest g(f);
  for (int e = 0; e < edits; ++e) g.apply(random_node_edit(rng, g, labels));
  return g.to_plain();
}

std::multiset<std::string> sorted_text(const std::vector<ParenString>& v) {
  std::multiset<std::string> out;
  for (const auto& y : v) out.insert(format_parens(y));
  return out;
}

std::string fmt(const char* f, double a) {
  char buf[64];
  std::snprintf(buf, sizeof buf, f, a);
  return buf;
}

// Corpus shared by criteria 2 and 3.
std::vector<ParenString> sandwich_corpus() {
  auto rng = testutil::make_rng(9002);
  std::vector<ParenString> out;
  for (int t = 0; t < 500; ++t) {
    std::size_t n = 1 + rng() % 300;
    out.push_back(t % 2 ? testutil::random_parens(rng, n, 2)
                        : testutil::near_dyck(rng, (n + 1) / 2, 2, 1 + static_cast<int>(rng() % 8)));
    if (out.back().size() > 300) out.back().resize(300);
    if (out.back().empty()) out.back().push_back(open_paren(0));
  }
  return out;
}

Outcome c1() {
  Timer tm;
  auto a = build_collection(parse_parens("(([(]([]]](()(()))]]"));
  auto b = build_collection(parse_parens("(([(([]]](()(()))]]"));
  bool ok1 = sorted_text(a.members) == std::multiset<std::string>{"(]", "([]]", "()", "(())", "[]", "()", "((]]"};
  bool ok2 = sorted_text(b.members) == std::multiset<std::string>{"(([]]]", "()", "(())", "([()]]"};
  double s = tm.seconds();
  return {ok1 && ok2 && s < kLimitTable,
          std::string("X1 ") + (ok1 ? "exact" : "differs") + ", X2 " + (ok2 ? "exact" : "differs") + ", " +
              fmt("%.4f s", s)};
}

Outcome c2() {
  Timer tm;
  std::size_t bad = 0;
  double worst = 0;
  for (const auto& x : sandwich_corpus()) {
    HeightForest hf(x);
    std::size_t d = ded_d(x), sum = 0;
    for (int h : hf.heads()) sum += ded_d(estimator_string(hf, h));
    double bound = 2 * (lg(static_cast<double>(x.size())) + 1) * static_cast<double>(d);
    if (sum < d || static_cast<double>(sum) > bound) ++bad;
    if (d > 0) worst = std::max(worst, static_cast<double>(sum) / static_cast<double>(d));
  }
  double s = tm.seconds();
  return {bad == 0 && s < kLimitSandwich,
          std::to_string(bad) + " violations / 500, max ratio " + fmt("%.3f", worst) + ", " + fmt("%.1f s", s)};
}

Outcome c3() {
  std::size_t bad = 0;
  double worst = 0;
  DpBackend dp;
  for (const auto& x : sandwich_corpus()) {
    HeightForest hf(x);
    std::size_t d = ded(x);
    std::size_t est = estimate_from_heavy_strings(hf, dp, EdMode::full);
    double bound = 8 * (lg(static_cast<double>(x.size())) + 1) * static_cast<double>(d);
    if (est < d || static_cast<double>(est) > bound) ++bad;
    if (d > 0) worst = std::max(worst, static_cast<double>(est) / static_cast<double>(d));
  }
  return {bad == 0, std::to_string(bad) + " violations / 500, max ratio " + fmt("%.3f", worst)};
}

bool same_paths(const std::vector<HeavyPathView>& a, const std::vector<HeavyPathView>& b) {
  if (a.size() != b.size()) return false;
  for (std::size_t i = 0; i < a.size(); ++i) {
    if (a[i].opens != b[i].opens || a[i].O != b[i].O || a[i].C != b[i].C) return false;
  }
  return true;
}

std::multiset<ParenString> heavy_strings(const HeightForest& hf) {
  std::multiset<ParenString> out;
  for (int h : hf.heads()) out.insert(hf.heavy_string(h));
  return out;
}

Outcome c4() {
  Timer tm;
  auto rng = testutil::make_rng(9004);
  std::size_t bad = 0, worst = 0, edits = 0;
  for (int t = 0; t < 10; ++t) {
    ParenString x = t % 2 ? testutil::random_parens(rng, 20 + rng() % 200, 2) : testutil::near_dyck(rng, 60, 2, 6);
    HeightForest hf(x, rng());
    for (int s = 0; s < 200; ++s) {
      CharEdit e = random_char_edit(rng, x.size(), 2);
      apply_edit(x, e);
      auto d = hf.apply_edit(e);
      ++edits;
      HeightForest fresh(x);
      auto aug = HeightForest::augment(x);
      bool ok = hf.text() == x && hf.augmented() == aug && same_paths(hf.paths(), HeightForest::reference_paths(aug)) &&
                heavy_strings(hf) == heavy_strings(fresh) && d.size() <= 16 * (1 + ceil_lg(x.size() + 1));
      bad += !ok;
      worst = std::max(worst, d.size());
    }
  }
  double s = tm.seconds();
  return {bad == 0 && s < kLimitHeavyLight, std::to_string(bad) + " violations / " + std::to_string(edits) +
                                                " edits, largest delta " + std::to_string(worst) + ", " +
                                                fmt("%.1f s", s)};
}

Outcome c5() {
  auto rng = testutil::make_rng(9005);
  ParenString x = testutil::random_parens(rng, 1000, 2);
  HeightForest hf(x, rng());
  std::size_t bad = 0, queries = 0;
  for (int op = 0; op < 10000; ++op) {
    if (op % 2 == 0) {
      CharEdit e = random_char_edit(rng, x.size(), 2);
      if (x.size() >= 2000 && e.op == CharEdit::Op::insert) e = CharEdit::erase_at(rng() % x.size());
      apply_edit(x, e);
      hf.apply_edit(e);
      continue;
    }
    auto a = HeightForest::augment(x);
    auto hs = heights(a);
    std::vector<std::int64_t> ch(hs.begin(), hs.end() - 1);
    std::size_t i = rng() % a.size();
    std::int64_t h = ch[i] + static_cast<std::int64_t>(rng() % 9) - 4;
    ++queries;
    bad += hf.range_query(i, h) != oracle::range_query_reference(ch, i, h);
  }
  return {bad == 0, std::to_string(bad) + " mismatches / " + std::to_string(queries) + " queries"};
}

Outcome c6() {
  std::size_t bad = 0, steps = 0;
  std::string worst;
  for (Strategy s : {Strategy::heavy, Strategy::large, Strategy::small, Strategy::combined}) {
    auto rng = testutil::make_rng(9006 + static_cast<int>(s));
    double ratio = 0;
    for (int walk = 0; walk < 2; ++walk) {
      ParenString x = testutil::near_dyck(rng, 40, 2, 6);
      DyckSession session(x, s, std::make_unique<DpBackend>());
      for (int step = 0; step < 300; ++step) {
        CharEdit e = random_char_edit(rng, x.size(), 2);
        apply_edit(x, e);
        std::size_t a = session.apply(e);
        std::size_t d = ded_d(x);
        ++steps;
        bool ok = d <= a;
        if (d >= 1) {
          double l = lg(static_cast<double>(std::max<std::size_t>(a, 2)));
          ok = ok && static_cast<double>(a) <= 8 * (3 + 2 * l) * static_cast<double>(d);
          ratio = std::max(ratio, static_cast<double>(a) / static_cast<double>(d));
        }
        bad += !ok;
      }
    }
    worst += to_string(s) + " " + fmt("%.2f", ratio) + " ";
  }
  return {bad == 0, std::to_string(bad) + " violations / " + std::to_string(steps) + " steps, max ratio " + worst};
}

Outcome c7() {
  Timer tm;
  std::size_t bad = 0, checked = 0;
  // solve_exact_k and ded depend only on the fully reduced string, so every
  // class is represented by its irreducible member.
  for (std::size_t n = 0; n <= 12; ++n) {
    ParenString x(n);
    for (std::size_t code = 0; code < (std::size_t{1} << (2 * n)); ++code) {
      for (std::size_t i = 0; i < n; ++i) {
        auto bits = (code >> (2 * i)) & 3;
        x[i] = {bits & 1 ? Kind::close : Kind::open, static_cast<std::int64_t>(bits >> 1)};
      }
      bool reducible = false;
      for (std::size_t i = 0; i + 1 < n && !reducible; ++i) reducible = pairs_with(x[i], x[i + 1]);
      if (reducible) continue;
      ++checked;
      std::size_t d = ded(x);
      for (std::size_t k = 0; k <= 4; ++k) {
        auto r = solve_exact_k(x, k);
        bad += d <= k ? r != d : r.has_value();
      }
    }
  }
  std::size_t walk_bad = 0;
  auto rng = testutil::make_rng(9007);
  for (int t = 0; t < 200; ++t) {
    std::size_t n = 2 + rng() % 199;
    ParenString x = t % 2 ? testutil::random_parens(rng, n, 2) : testutil::near_dyck(rng, n / 2, 2, 1 + static_cast<int>(rng() % 4));
    ExactKSession s(x);
    walk_bad += s.value() != ded(x);
    for (int step = 0; step < 100; ++step) {
      CharEdit e = random_char_edit(rng, x.size(), 2);
      if (x.size() >= 200 && e.op == CharEdit::Op::insert) e = CharEdit::erase_at(rng() % x.size());
      apply_edit(x, e);
      walk_bad += s.apply(e) != ded(x);
    }
  }
  double sec = tm.seconds();
  return {bad == 0 && walk_bad == 0 && sec < kLimitExactK,
          std::to_string(bad) + " exhaustive mismatches over " + std::to_string(checked) + " irreducible strings, " +
              std::to_string(walk_bad) + " walk mismatches / 20000 edits, " + fmt("%.1f s", sec)};
}

// Labels against a from-scratch heavy-light decomposition of the plain forest.
bool labels_match(const Forest& f, const HldLabels& labels, const HldContext& ctx) {
  std::vector<int> ids;
  PlainForest pf = f.to_plain(&ids);
  auto sz = pf.subtree_sizes();
  auto hl = oracle::heavy_light_reference(pf.parent);
  ParenString p = labels.phld_string();
  if (p.size() != 2 * ids.size()) return false;
  for (std::size_t k = 0; k < ids.size(); ++k) {
    int v = ids[k];
    int id = labels.label_id(v);
    if (id < 0 || ctx.content(id) != light_subtree(pf, static_cast<int>(k)) ||
        ctx.heavy_depth_of(id) != static_cast<int>(oracle::floor_log2(sz[k])) ||
        labels.is_heavy(f, v) != static_cast<bool>(hl.heavy[k]) || p[f.open_pos(v)] != open_paren(id) ||
        p[f.close_pos(v)] != close_paren(id)) {
      return false;
    }
  }
  return true;
}

Outcome c8() {
  auto rng = testutil::make_rng(9008);
  std::size_t bad = 0, worst = 0;
  HldContext ctx;
  for (int round = 0; round < 3; ++round) {
    PlainForest pf = round == 1 ? testutil::random_deep_forest(rng, 300, 3) : testutil::random_forest(rng, 300, 3);
    Forest f(pf);
    HldLabels labels(f, ctx);
    for (int step = 0; step < 300; ++step) {
      NodeEdit e = random_node_edit(rng, f, 3);
      if (e.op == NodeEdit::Op::insert && f.size() >= 400) e = NodeEdit::erase_node(alive_ids(f)[rng() % f.size()]);
      auto d = f.apply(e);
      auto changes = maintain_phld(f, labels, d);
      worst = std::max(worst, changes.size());
      bool ok = changes.size() <= 16 * (1 + ceil_lg(std::max<std::size_t>(f.size(), 2)));
      ok = ok && labels_match(f, labels, ctx);
      bad += !ok;
    }
  }
  return {bad == 0, std::to_string(bad) + " violations / 900 edits, largest label delta " + std::to_string(worst)};
}

Outcome c9() {
  auto rng = testutil::make_rng(9009);
  std::size_t bad = 0, trips = 0;
  double worst = 0;
  for (int t = 0; t < 200; ++t) {
    PlainForest a = testutil::random_forest(rng, 2 + rng() % 149, 3);
    PlainForest b = t % 5 == 4 ? testutil::random_forest(rng, 2 + rng() % 149, 3)
                               : perturb(rng, a, static_cast<int>(rng() % 8), 3);
    if (b.size() > 150) b = perturb(rng, a, 0, 3);
    StaticHldInterner in;
    PlainForest ah = hld_forest(a, in), bh = hld_forest(b, in);
    std::size_t ted_h = oracle::ted_exact(ah, bh);
    std::size_t e = oracle::ed_exact(ah.to_parens(), bh.to_parens(), EditCosts::full());
    bad += e > 2 * ted_h;
    std::size_t ted = oracle::ted_exact(a, b);
    double n = static_cast<double>(std::max<std::size_t>({a.size(), b.size(), 2}));
    if (ted == 0) {
      trips += ted_h != 0;
    } else {
      double r = static_cast<double>(ted_h) / static_cast<double>(ted);
      worst = std::max(worst, r);
      trips += r > 8 * (1 + lg(n));
    }
  }
  return {bad == 0 && trips == 0, std::to_string(bad) + " violations / 200, tripwire hits " + std::to_string(trips) +
                                      ", max ted_hld/ted " + fmt("%.2f", worst)};
}

Outcome c10() {
  auto rng = testutil::make_rng(9010);
  std::size_t invalid = 0, decreased = 0, over = 0, trips = 0;
  double worst = 0;
  for (int t = 0; t < 200; ++t) {
    PlainForest f = testutil::random_forest(rng, 1 + rng() % 200, 3);
    PlainForest g = t % 4 == 3 ? testutil::random_forest(rng, 1 + rng() % 200, 3)
                               : perturb(rng, f, 1 + static_cast<int>(rng() % 6), 3);
    if (g.size() > 200) g = f;
    StaticHldInterner in;
    PlainForest fh = hld_forest(f, in), gh = hld_forest(g, in);
    ParenString x = fh.to_parens(), y = gh.to_parens();
    Alignment a = optimal_deletion_alignment(x, y);
    Alignment r = tree_align_repair(a, fh, gh);
    invalid += !(r.valid() && is_tree_alignment(r, fh, gh));
    std::size_t cost = r.cost(x, y), in_cost = a.cost(x, y);
    decreased += cost < in_cost;
    over += oracle::ted_exact(f, g) > cost / 2;
    double n = static_cast<double>(std::max(f.size(), g.size()));
    double allowed = 64 * std::sqrt(n) * static_cast<double>(std::max<std::size_t>(in_cost, 1));
    trips += static_cast<double>(cost) > allowed;
    worst = std::max(worst, static_cast<double>(cost) / static_cast<double>(std::max<std::size_t>(in_cost, 1)));
  }
  return {invalid == 0 && decreased == 0 && over == 0 && trips == 0,
          std::to_string(invalid) + " invalid, " + std::to_string(decreased) + " decreased, " + std::to_string(over) +
              " below ted, " + std::to_string(trips) + " tripwire hits / 200, max repaired/input " + fmt("%.2f", worst)};
}

Outcome c11() {
  bool ok = true;
  std::string detail;
  for (std::size_t n : {64, 256, 1024}) {
    auto [f, g] = chain_gap_family(n);
    auto r = static_sqrt_pipeline(f, g);
    std::size_t ted = oracle::ted_exact(f, g);
    // The family fits inside n nodes; the bound uses the nominal n.
    double root = std::sqrt(static_cast<double>(std::max(n, f.size())));
    ok = ok && r.ed <= 8 && static_cast<double>(ted) >= root / 8;
    detail += "n=" + std::to_string(n) + " (" + std::to_string(f.size()) + " nodes)" + " ed=" + std::to_string(r.ed) + " ted=" + std::to_string(ted) + "; ";
  }
  return {ok, detail};
}

Outcome c12() {
  Timer tm;
  auto rng = testutil::make_rng(9012);
  std::size_t misses = 0, bad_cert = 0, wide_misses = 0;
  for (int t = 0; t < 500; ++t) {
    std::size_t k = 1 + t % 8;
    PlainForest x = testutil::random_forest(rng, 20 + rng() % 460, 4);
    ForestPair d(x, x);
    std::size_t edits = 1 + rng() % k;
    for (std::size_t e = 0; e < edits; ++e) {
      NodeEdit ne = random_node_edit(rng, d.g(), 6);
      if (ne.op == NodeEdit::Op::insert && d.g().size() >= 500) ne = NodeEdit::relabel_node(alive_ids(d.g())[0], 5);
      d.apply(1, ne);
    }
    GapResult r = gap_query(d, k);
    if (!r.yes) {
      ++misses;
    } else {
      bad_cert += !(r.certificate_valid && r.certificate_cost <= r.certificate_bound);
    }
    // Diagnostic only: the same instance with twice the iteration budget.
    GapOptions wide;
    wide.budget_factor = 2.0;
    wide_misses += !gap_query(d, k, wide).yes;
  }
  std::size_t unsound = 0, sound_trials = 0;
  auto rng2 = testutil::make_rng(9112);
  while (sound_trials < 100) {
    std::size_t k = rng2() % 3;
    PlainForest x = testutil::random_forest(rng2, 50 + rng2() % 300, 4);
    PlainForest y = testutil::random_forest(rng2, 50 + rng2() % 300, 4);
    for (auto& l : y.label) l += 4;
    std::size_t n = std::max(x.size(), y.size());
    std::size_t diff = x.size() > y.size() ? x.size() - y.size() : y.size() - x.size();
    std::size_t bound = 16 * k * gap_budget(k, n) + diff;
    if (oracle::ted_exact(x, y) <= bound) continue;
    ++sound_trials;
    unsound += gap_query(x, y, k).yes;
  }
  double s = tm.seconds();
  return {misses == 0 && bad_cert == 0 && unsound == 0 && s < kLimitGap,
          std::to_string(misses) + " No answers / 500 (" + std::to_string(wide_misses) +
              " with twice the budget), " + std::to_string(bad_cert) + " bad certificates, " +
              std::to_string(unsound) + " unsound / 100, " + fmt("%.1f s", s)};
}

Outcome c13() {
  std::size_t bad = 0, steps = 0;
  double worst = 0;
  for (int walk = 0; walk < 4; ++walk) {
    auto rng = testutil::make_rng(9013 + walk);
    PlainForest x = testutil::random_forest(rng, 40 + 70 * walk, 3);
    GapSession s(x, x);
    for (int t = 0; t < 500; ++t) {
      int side = static_cast<int>(rng() % 2);
      const Forest& cur = s.current().side(side);
      NodeEdit e = random_node_edit(rng, cur, 3);
      if (e.op == NodeEdit::Op::insert && cur.size() >= 300) e = NodeEdit::erase_node(alive_ids(cur)[rng() % cur.size()]);
      double est = s.update({side, e});
      const ForestPair& c = s.current();
      auto td = static_cast<double>(oracle::ted_exact(c.f().to_plain(), c.g().to_plain()));
      double l = gap_lg(std::max(c.f().size(), c.g().size()));
      ++steps;
      bad += !(td <= est && est <= 25 * GapSession::kCert * td * td * l + 1.25 * td);
      if (td > 0) worst = std::max(worst, est / td);
    }
  }
  return {bad == 0, std::to_string(bad) + " violations / " + std::to_string(steps) + " steps, max estimate/ted " +
                        fmt("%.1f", worst)};
}

Outcome c14() {
  std::vector<double> ns, costs;
  double mean_ms_top = 0;
  std::string detail;
  for (std::size_t n : {1000, 10000, 100000}) {
    auto rng = testutil::make_rng(9014);
    ParenString x = testutil::near_dyck(rng, n / 2, 2, 8);
    DyckSession s(x, Strategy::heavy, std::make_unique<BoundedKBackend>());
    const int edits = 1000;
    std::size_t before = s.counters().delta_records;
    Timer tm;
    for (int e = 0; e < edits; ++e) {
      CharEdit ce = random_char_edit(rng, s.text_size(), 2);
      // Substitutions keep the length fixed.
      if (ce.op != CharEdit::Op::substitute) ce = CharEdit::substitute_at(rng() % s.text_size(), ce.sym);
      s.apply(ce);
    }
    double ms = tm.seconds() * 1000 / edits;
    double per_edit = static_cast<double>(s.counters().delta_records - before) / edits;
    ns.push_back(static_cast<double>(n));
    costs.push_back(per_edit);
    if (n == 100000) mean_ms_top = ms;
    detail += "n=" + std::to_string(n) + " " + fmt("%.3f ms", ms) + " " + fmt("%.1f deltas", per_edit) + "; ";
  }
  // Least squares slope of log cost against log n.
  double mx = 0, my = 0;
  for (std::size_t i = 0; i < ns.size(); ++i) {
    mx += std::log(ns[i]) / 3;
    my += std::log(costs[i]) / 3;
  }
  double sxy = 0, sxx = 0;
  for (std::size_t i = 0; i < ns.size(); ++i) {
    sxy += (std::log(ns[i]) - mx) * (std::log(costs[i]) - my);
    sxx += (std::log(ns[i]) - mx) * (std::log(ns[i]) - mx);
  }
  double slope = sxy / sxx;
  return {mean_ms_top < kPerfMeanMs && slope < kPerfSlope, detail + "slope " + fmt("%.3f", slope)};
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Acceptance checks"};
  std::vector<int> only;
  app.add_option("--only", only, "Criteria to run (default all)")->check(CLI::Range(1, 14));
  CLI11_PARSE(app, argc, argv);

  const std::vector<std::function<Outcome()>> checks = {c1, c2, c3, c4, c5, c6, c7, c8, c9, c10, c11, c12, c13, c14};
  int failed = 0;
  for (int i = 1; i <= 14; ++i) {
    if (!only.empty() && std::find(only.begin(), only.end(), i) == only.end()) continue;
    Outcome o;
    try {
      o = checks[i - 1]();
    } catch (const std::exception& e) {
      o = {false, std::string("exception: ") + e.what()};
    }
    failed += !o.pass;
    std::printf("criterion %2d: %s  %s\n", i, o.pass ? "PASS" : "FAIL", o.detail.c_str());
    std::fflush(stdout);
  }
  return failed == 0 ? 0 : 1;
}
