#include "bracketdyn/ed_backend.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>
#include <vector>

namespace bracketdyn {

std::size_t ed_dp(std::span<const Symbol> x, std::span<const Symbol> y, EdMode mode) {
  const std::size_t sub = mode == EdMode::full ? 1 : 2;
  std::vector<std::size_t> prev(y.size() + 1), cur(y.size() + 1);
  for (std::size_t j = 0; j <= y.size(); ++j) prev[j] = j;
  for (std::size_t i = 1; i <= x.size(); ++i) {
    cur[0] = i;
    for (std::size_t j = 1; j <= y.size(); ++j) {
      std::size_t best = std::min(prev[j], cur[j - 1]) + 1;
      cur[j] = std::min(best, prev[j - 1] + (x[i - 1] == y[j - 1] ? 0 : sub));
    }
    std::swap(prev, cur);
  }
  return prev[y.size()];
}

std::size_t bounded_k_ed(const StrCollection& c, StrHandle x, StrHandle y, std::size_t k, EdMode mode,
                         std::size_t* lcp_calls) {
  const auto n = static_cast<std::int64_t>(c.length(x));
  const auto m = static_cast<std::int64_t>(c.length(y));
  const auto kk = static_cast<std::int64_t>(k);
  if (std::llabs(n - m) > kk) return k + 1;
  const std::int64_t target = m - n;
  // prev[d + off] = furthest i on diagonal d = j - i with e - 1 errors; -1 = unreachable.
  const std::int64_t off = kk + 1;
  std::vector<std::int64_t> prev(2 * off + 1, -1), cur(2 * off + 1, -1);
  auto slide = [&](std::int64_t i, std::int64_t d) {
    if (i >= n || i + d >= m) return i;
    if (lcp_calls) ++*lcp_calls;
    return i + static_cast<std::int64_t>(
                   c.lcp_at(x, static_cast<std::size_t>(i), y, static_cast<std::size_t>(i + d)));
  };
  cur[off] = slide(0, 0);
  if (target == 0 && cur[off] >= n) return 0;
  for (std::int64_t e = 1; e <= kk; ++e) {
    std::swap(prev, cur);
    std::fill(cur.begin(), cur.end(), -1);
    for (std::int64_t d = -e; d <= e; ++d) {
      if (d < -n || d > m) continue;
      std::int64_t best = -1;
      if (d - 1 >= -(e - 1) && prev[d - 1 + off] >= 0) best = std::max(best, prev[d - 1 + off]);
      if (d + 1 <= e - 1 && prev[d + 1 + off] >= 0) best = std::max(best, prev[d + 1 + off] + 1);
      if (mode == EdMode::full && std::llabs(d) <= e - 1 && prev[d + off] >= 0) {
        best = std::max(best, prev[d + off] + 1);
      }
      if (best < 0) continue;
      best = std::min({best, n, m - d});
      if (best < 0 || best + d < 0) continue;
      cur[d + off] = slide(best, d);
    }
    if (cur[target + off] >= n) return static_cast<std::size_t>(e);
  }
  return k + 1;
}

std::size_t doubling_ed(const StrCollection& c, StrHandle x, StrHandle y, EdMode mode, std::size_t* lcp_calls) {
  std::size_t k = 1;
  for (;;) {
    std::size_t v = bounded_k_ed(c, x, y, k, mode, lcp_calls);
    if (v <= k) return v;
    k *= 2;
  }
}

std::size_t DpBackend::distance(const StrCollection& c, StrHandle x, StrHandle y, EdMode mode) {
  ++calls_;
  auto a = c.materialize(x);
  auto b = c.materialize(y);
  return ed_dp(a, b, mode);
}

std::size_t BoundedKBackend::distance(const StrCollection& c, StrHandle x, StrHandle y, EdMode mode) {
  ++calls_;
  return doubling_ed(c, x, y, mode, &lcp_calls_);
}

NoisyBackend::NoisyBackend(std::unique_ptr<EdBackend> inner, double f, std::uint64_t seed)
    : inner_(std::move(inner)), factor_(f), seed_(seed) {
  if (!(f >= 1.0)) throw std::invalid_argument("NoisyBackend: factor must be >= 1");
}

std::size_t NoisyBackend::distance(const StrCollection& c, StrHandle x, StrHandle y, EdMode mode) {
  ++calls_;
  std::size_t v = inner_->distance(c, x, y, mode);
  std::uint64_t h = c.fingerprint(x) * 0x9e3779b97f4a7c15ULL ^ (c.fingerprint(y) + seed_);
  h ^= h >> 29;
  h *= 0xbf58476d1ce4e5b9ULL;
  h ^= h >> 32;
  double u = static_cast<double>(h >> 11) / static_cast<double>(1ULL << 53);
  return static_cast<std::size_t>(std::floor(static_cast<double>(v) * (1.0 + u * (factor_ - 1.0))));
}

std::unique_ptr<EdBackend> make_backend(const std::string& name) {
  if (name == "dp") return std::make_unique<DpBackend>();
  if (name == "bounded-k" || name == "bk") return std::make_unique<BoundedKBackend>();
  throw std::invalid_argument("unknown backend: " + name);
}

}  // namespace bracketdyn
