#include "bracketdyn/dyck_exact_k.hpp"

#include <algorithm>
#include <stdexcept>

namespace bracketdyn {

namespace {

std::uint16_t pair_cost(Paren x, Paren y) {
  if (pairs_with(x, y)) return 0;
  return x.closes() && y.opens() ? 2 : 1;
}

std::vector<LrSegment> segments_of(StrCollection& c, StrHandle x) {
  std::vector<LrSegment> out;
  const std::size_t n = c.length(x);
  std::size_t pos = 0;
  std::int64_t h = 0;
  while (pos < n) {
    StrHandle rest = c.substr(x, pos, n - pos);
    LrSegment s;
    s.start = pos;
    s.open_height = h;
    std::size_t r1 = c.lmp_query(rest);
    if (decode(c.at(rest, 0)).opens()) {
      s.open_len = r1;
      if (r1 < n - pos) {
        StrHandle tail = c.substr(rest, r1, n - pos - r1);
        s.close_len = c.lmp_query(tail);
        c.release(tail);
      }
    } else {
      s.close_len = r1;
    }
    c.release(rest);
    s.close_height = h + static_cast<std::int64_t>(s.open_len);
    h = s.close_height - static_cast<std::int64_t>(s.close_len);
    s.end = pos + s.open_len + s.close_len;
    pos = s.end;
    out.push_back(s);
  }
  return out;
}

}  // namespace

std::vector<Trapezoid> maximal_trapezoids(std::span<const LrSegment> segs) {
  struct Block {
    std::size_t start, left;
  };
  std::vector<Block> stack;
  std::vector<Trapezoid> out;
  for (const auto& s : segs) {
    if (s.open_len > 0) stack.push_back({s.start, s.open_len});
    std::size_t r = s.close_len;
    std::size_t pos = s.start + s.open_len;
    while (r > 0 && !stack.empty()) {
      Block& top = stack.back();
      std::size_t t = std::min(r, top.left);
      out.push_back({top.start + top.left - t, top.start + top.left, pos, pos + t});
      top.left -= t;
      r -= t;
      pos += t;
      if (top.left == 0) stack.pop_back();
    }
  }
  std::sort(out.begin(), out.end());
  return out;
}

std::vector<Trapezoid> build_trapezoids(std::span<const LrSegment> segs, std::size_t min_leg) {
  std::vector<Trapezoid> out;
  for (const auto& t : maximal_trapezoids(segs)) {
    if (t.leg() >= min_leg) out.push_back(t);
  }
  return out;
}

std::size_t ClusterDecomposition::cluster_vertices() const {
  std::size_t s = 0;
  for (const auto& c : clusters) s += c.vertices.size();
  return s;
}

ClusterDecomposition build_clusters(std::size_t n, std::vector<Trapezoid> traps) {
  ClusterDecomposition out;
  std::sort(traps.begin(), traps.end(), [](const Trapezoid& x, const Trapezoid& y) {
    return x.a != y.a ? x.a < y.a : x.d > y.d;
  });
  out.traps = std::move(traps);
  const auto& ts = out.traps;
  out.trap_parent.assign(ts.size(), 0);
  out.trap_child.assign(ts.size(), 0);
  out.clusters.push_back(Cluster{0, n, -1, {}, {}});
  std::vector<int> stack;
  for (int i = 0; i < static_cast<int>(ts.size()); ++i) {
    const Trapezoid& t = ts[i];
    if (t.a > t.b || t.b > t.c || t.c > t.d || t.d > n) throw std::logic_error("build_clusters: bad trapezoid");
    while (!stack.empty()) {
      const Trapezoid& top = ts[stack.back()];
      if (top.b <= t.a && t.d <= top.c) break;
      if (t.a < top.d && top.a < t.d) throw std::logic_error("build_clusters: overlapping trapezoids");
      stack.pop_back();
    }
    int parent = stack.empty() ? 0 : out.trap_child[stack.back()];
    out.trap_parent[i] = parent;
    out.clusters[parent].children.push_back(i);
    out.trap_child[i] = static_cast<int>(out.clusters.size());
    out.clusters.push_back(Cluster{t.b, t.c, i, {}, {}});
    stack.push_back(i);
  }
  for (auto& c : out.clusters) {
    std::size_t v = c.frame_begin;
    for (int ti : c.children) {
      const Trapezoid& t = ts[ti];
      for (; v <= t.a; ++v) c.vertices.push_back(v);
      v = t.d;
    }
    for (; v <= c.frame_end; ++v) c.vertices.push_back(v);
  }
  return out;
}

TrapezoidDp process_trapezoid(const WindowTable& inner, const Trapezoid& t, std::size_t kappa,
                              const CharAt& ch, const LegLcp& lcp) {
  using I = std::int64_t;
  const std::size_t w = inner.w;
  if (t.leg() < w || inner.i0 != t.b - w || inner.j0 != t.c) throw std::invalid_argument("process_trapezoid: window");
  const I a = static_cast<I>(t.a), b = static_cast<I>(t.b), c = static_cast<I>(t.c), d = static_cast<I>(t.d);
  const I wi = static_cast<I>(w);
  const auto cap = static_cast<std::uint16_t>(kappa + 1);

  TrapezoidDp out;
  out.t = t;
  out.w = w;
  out.off = wi + 2 * static_cast<I>(kappa) + 4;
  const I off = out.off;
  const std::size_t width = static_cast<std::size_t>(2 * off + 1);
  auto in_window = [&](I i, I j) { return i >= b - wi && j <= c + wi; };
  auto delta = [&](I i, I j) { return (j - c) - (b - i); };
  auto limit = [&](I dl) { return d + std::min<I>(dl, 0); };

  // Moves that leave the inner window, keyed by the diagonal they land on.
  struct Seed {
    I dl, j;
    std::size_t g;
  };
  std::vector<Seed> seeds;
  for (I i = b - wi; i <= b; ++i) {
    for (I j = c; j <= c + wi; ++j) {
      std::size_t g = inner.at(static_cast<std::size_t>(i), static_cast<std::size_t>(j));
      if (g > kappa) continue;
      auto push = [&](I i2, I j2, std::size_t cost) {
        if (i2 < a || j2 > d || in_window(i2, j2)) return;
        seeds.push_back({delta(i2, j2), j2, g + cost});
      };
      push(i - 1, j, 1);
      push(i, j + 1, 1);
      push(i - 2, j, 1);
      push(i, j + 2, 1);
      if (i - 1 >= a && j + 1 <= d) {
        push(i - 1, j + 1, pair_cost(ch(static_cast<std::size_t>(i - 1)), ch(static_cast<std::size_t>(j))));
      }
    }
  }

  out.L.assign(kappa + 1, std::vector<I>(width, -1));
  for (std::size_t v = 0; v <= kappa; ++v) {
    auto& cur = out.L[v];
    for (const auto& s : seeds) {
      if (s.g <= v) {
        auto& slot = cur[static_cast<std::size_t>(s.dl + off)];
        slot = std::max(slot, s.j);
      }
    }
    if (v > 0) {
      const auto& prev = out.L[v - 1];
      for (I dl = -off; dl <= off; ++dl) {
        auto from = [&](I src, I step) -> I {
          if (src < -off || src > off) return -1;
          I j = prev[static_cast<std::size_t>(src + off)];
          return j < 0 ? -1 : j + step;
        };
        I best = std::max({from(dl, 1), from(dl - 1, 1), from(dl + 1, 0), from(dl - 2, 2), from(dl + 2, 0)});
        if (best < 0) continue;
        auto& slot = cur[static_cast<std::size_t>(dl + off)];
        slot = std::max(slot, std::min(best, limit(dl)));
      }
    }
    for (I dl = -off; dl <= off; ++dl) {
      I& j = cur[static_cast<std::size_t>(dl + off)];
      if (j < 0) continue;
      j = std::min(j, limit(dl));
      I i = b + c + dl - j;
      std::size_t room = static_cast<std::size_t>(std::min(i - a, d - j));
      if (room > 0) j += static_cast<I>(std::min(room, lcp(static_cast<std::size_t>(i), static_cast<std::size_t>(j))));
    }
  }

  out.outer = WindowTable(t.a, t.d - w, w, cap);
  for (I i = a; i <= a + wi; ++i) {
    for (I j = d - wi; j <= d; ++j) {
      auto& cell = out.outer.at(static_cast<std::size_t>(i), static_cast<std::size_t>(j));
      if (in_window(i, j)) {
        cell = std::min(cap, inner.at(static_cast<std::size_t>(i), static_cast<std::size_t>(j)));
        continue;
      }
      I dl = delta(i, j);
      if (dl < -off || dl > off) continue;
      for (std::size_t v = 0; v <= kappa; ++v) {
        if (out.L[v][static_cast<std::size_t>(dl + off)] >= j) {
          cell = static_cast<std::uint16_t>(v);
          break;
        }
      }
    }
  }
  return out;
}

namespace {

struct Solver {
  StrCollection& c;
  StrHandle x, xt;
  std::size_t n, kappa, w;
  std::uint16_t cap;
  ClusterDecomposition dec;
  std::vector<TrapezoidDp> tdp;
  std::size_t max_positions = 0;

  Paren ch(std::size_t p) const { return decode(c.at(x, p)); }

  // Interval DP over the positions of cluster ci; returns the table and positions.
  std::pair<std::vector<std::uint16_t>, std::vector<std::size_t>> cluster(int ci) {
    const Cluster& cl = dec.clusters[ci];
    for (int ti : cl.children) {
      const Trapezoid& t = dec.traps[ti];
      auto [g, gp] = cluster(dec.trap_child[ti]);
      WindowTable inner(t.b - w, t.c, w, cap);
      const std::size_t m = gp.size();
      for (std::size_t i = t.b - w; i <= t.b; ++i) {
        std::size_t xi = static_cast<std::size_t>(std::lower_bound(gp.begin(), gp.end(), i) - gp.begin());
        for (std::size_t j = t.c; j <= t.c + w; ++j) {
          if (j < i) continue;
          std::size_t yj = static_cast<std::size_t>(std::lower_bound(gp.begin(), gp.end(), j) - gp.begin());
          inner.at(i, j) = g[xi * m + yj];
        }
      }
      const std::size_t nn = n;
      StrHandle xx = x, tt = xt;
      StrCollection& cc = c;
      tdp[ti] = process_trapezoid(
          inner, t, kappa, [this](std::size_t p) { return ch(p); },
          [&cc, xx, tt, nn](std::size_t i, std::size_t j) { return cc.lcp_at(tt, nn - i, xx, j); });
    }

    std::vector<std::size_t> P = cl.vertices;
    auto add_range = [&](std::size_t lo, std::size_t hi) {
      for (std::size_t p = lo; p <= hi; ++p) P.push_back(p);
    };
    for (int ti : cl.children) {
      const Trapezoid& t = dec.traps[ti];
      add_range(t.a, t.a + w);
      add_range(t.d - w, t.d);
    }
    if (cl.parent >= 0) {
      const Trapezoid& t = dec.traps[cl.parent];
      add_range(t.b - w, t.b);
      add_range(t.c, t.c + w);
    }
    std::sort(P.begin(), P.end());
    P.erase(std::unique(P.begin(), P.end()), P.end());
    const std::size_t m = P.size();
    max_positions = std::max(max_positions, m);
    auto idx = [&](std::size_t p) {
      return static_cast<std::size_t>(std::lower_bound(P.begin(), P.end(), p) - P.begin());
    };

    std::vector<char> usable(m, 0);
    std::vector<Paren> sym(m);
    for (std::size_t q = 0; q + 1 < m; ++q) {
      if (P[q + 1] == P[q] + 1) {
        usable[q] = 1;
        sym[q] = ch(P[q]);
      }
    }
    // Jumps across child trapezoids: from the left window to the right window.
    struct Jump {
      const TrapezoidDp* dp;
      std::size_t first_right;  // index of d - w in P
    };
    std::vector<std::vector<Jump>> jumps(m);
    for (int ti : cl.children) {
      const Trapezoid& t = dec.traps[ti];
      std::size_t fr = idx(t.d - w);
      for (std::size_t p = t.a; p <= t.a + w; ++p) jumps[idx(p)].push_back({&tdp[ti], fr});
    }

    std::vector<std::uint16_t> D(m * m, cap);
    for (std::size_t q = m; q-- > 0;) {
      D[q * m + q] = 0;
      for (std::size_t y = q + 1; y < m; ++y) {
        std::uint32_t best = cap;
        if (usable[q]) {
          best = std::min<std::uint32_t>(best, D[(q + 1) * m + y] + 1u);
          for (std::size_t z = q + 1; z < y; ++z) {
            if (!usable[z]) continue;
            std::uint32_t v = pair_cost(sym[q], sym[z]) + D[(q + 1) * m + z] + D[(z + 1) * m + y];
            best = std::min(best, v);
          }
        }
        for (const auto& jp : jumps[q]) {
          const auto& tb = jp.dp->outer;
          for (std::size_t r = jp.first_right; r <= y && P[r] <= jp.dp->t.d; ++r) {
            std::uint32_t v = tb.at(P[q], P[r]) + D[r * m + y];
            best = std::min(best, v);
          }
        }
        D[q * m + y] = static_cast<std::uint16_t>(std::min<std::uint32_t>(best, cap));
      }
    }
    return {std::move(D), std::move(P)};
  }
};

}  // namespace

std::optional<std::size_t> solve_exact_k(StrCollection& c, StrHandle xhat, std::size_t k, ExactKStats* stats) {
  const std::size_t n = c.length(xhat);
  if (k > 30000) throw std::invalid_argument("solve_exact_k: k too large");
  const std::size_t kappa = k + 1;
  const std::size_t w = 2 * kappa + 2;
  ExactKStats st;
  st.k = k;
  st.window = w;
  std::optional<std::size_t> result;
  if (n == 0) {
    result = 0;
  } else {
    auto segs = segments_of(c, xhat);
    st.segments = segs.size();
    Solver s{c, xhat, c.add_transpose(xhat), n, kappa, w, static_cast<std::uint16_t>(kappa + 1), {}, {}, 0};
    s.dec = build_clusters(n, build_trapezoids(segs, w));
    s.tdp.resize(s.dec.traps.size());
    auto [D, P] = s.cluster(0);
    c.release(s.xt);
    std::size_t v = D[P.size() - 1];  // row of position 0, column of position n
    if (v <= k) result = v;
    st.trapezoids = s.dec.traps.size();
    st.clusters = s.dec.clusters.size();
    st.cluster_vertices = s.dec.cluster_vertices();
    st.dp_positions = s.max_positions;
    st.tripwires_ok = st.cluster_vertices <= 64 * (k + 1) * (k + 1) && st.trapezoids <= 8 * (k + 1);
  }
  if (stats) *stats = st;
  return result;
}

std::optional<std::size_t> solve_exact_k(ParenView x, std::size_t k, ExactKStats* stats) {
  StrCollection c;
  StrHandle h = c.add(reduce_hat(x));
  auto r = solve_exact_k(c, h, k, stats);
  c.release(h);
  return r;
}

std::size_t solve_exact(ParenView x) {
  StrCollection c;
  StrHandle h = c.add(reduce_hat(x));
  for (std::size_t k = 1;; k *= 2) {
    if (auto r = solve_exact_k(c, h, k)) {
      c.release(h);
      return *r;
    }
  }
}

ExactKSession::ExactKSession(ParenView x, std::size_t k_max, std::uint64_t seed) : hat_(x, seed), k_max_(k_max) {
  recompute(std::nullopt);
}

void ExactKSession::recompute(std::optional<std::size_t> hint) {
  auto& c = hat_.strings();
  StrHandle h = hat_.hat();
  std::size_t k = hint ? std::min(*hint + 2, k_max_) : std::min<std::size_t>(1, k_max_);
  for (;;) {
    ++solves_;
    value_ = solve_exact_k(c, h, k, &stats_);
    if (value_ || k >= k_max_) return;
    k = k > k_max_ / 2 ? k_max_ : std::max<std::size_t>(2 * k, 1);
  }
}

std::optional<std::size_t> ExactKSession::apply(const CharEdit& e) {
  hat_.apply_edit(e);
  recompute(value_);
  return value_;
}

}  // namespace bracketdyn
