#include "bracketdyn/dyck_reduction.hpp"

#include <algorithm>

namespace bracketdyn {

std::size_t LrCollection::total_length() const {
  std::size_t s = 0;
  for (const auto& y : members) s += y.size();
  for (const auto& y : monotone) s += y.size();
  return s;
}

LrCollection build_collection(ParenView x) {
  LrCollection out;
  ParenString cur(x.begin(), x.end());
  while (!cur.empty()) {
    ++out.rounds;
    ParenString next;
    for (const auto& s : lr_decompose(cur)) {
      auto seg = cur.begin() + static_cast<std::ptrdiff_t>(s.start);
      if (s.open_len == 0 || s.close_len == 0) {
        out.monotone.emplace_back(seg, seg + static_cast<std::ptrdiff_t>(s.end - s.start));
        continue;
      }
      auto m = static_cast<std::ptrdiff_t>(std::min(s.open_len, s.close_len));
      auto mid = seg + static_cast<std::ptrdiff_t>(s.open_len);
      out.members.emplace_back(mid - m, mid + m);
      next.insert(next.end(), seg, mid - m);
      next.insert(next.end(), mid + m, seg + static_cast<std::ptrdiff_t>(s.end - s.start));
    }
    cur = std::move(next);
  }
  return out;
}

LrHandles build_collection_fast(StrCollection& c, StrHandle xhat) {
  LrHandles out;
  StrHandle cur = c.substr(xhat, 0, c.length(xhat));
  while (c.length(cur) > 0) {
    ++out.rounds;
    StrHandle next = c.empty_string();
    auto keep = [&](StrHandle frag) {
      if (c.length(frag) == 0) {
        c.release(frag);
        return;
      }
      StrHandle j = c.concat(next, frag);
      c.release(next);
      c.release(frag);
      next = j;
    };
    StrHandle rest = cur;
    while (c.length(rest) > 0) {
      std::size_t l1 = c.lmp_query(rest);
      auto [run, tail] = c.split(rest, l1);
      c.release(rest);
      if (decode(c.at(run, 0)).closes() || c.length(tail) == 0) {
        out.monotone.push_back(run);
        rest = tail;
        continue;
      }
      std::size_t l2 = c.lmp_query(tail);
      std::size_t m = std::min(l1, l2);
      auto [pre, opens] = c.split(run, l1 - m);
      auto [closes, after] = c.split(tail, m);
      c.release(run);
      c.release(tail);
      auto [suf, rest2] = c.split(after, l2 - m);
      c.release(after);
      out.members.push_back(c.concat(opens, closes));
      c.release(opens);
      c.release(closes);
      keep(pre);
      keep(suf);
      rest = rest2;
    }
    c.release(rest);
    cur = next;
  }
  c.release(cur);
  return out;
}

LrCollection materialize(const StrCollection& c, const LrHandles& h) {
  LrCollection out;
  out.rounds = h.rounds;
  for (auto m : h.members) out.members.push_back(c.materialize_parens(m));
  for (auto m : h.monotone) out.monotone.push_back(c.materialize_parens(m));
  return out;
}

void release(StrCollection& c, const LrHandles& h) {
  for (auto m : h.members) c.release(m);
  for (auto m : h.monotone) c.release(m);
}

ParenString lr_left(ParenView y) {
  ParenString out;
  for (auto p : y) {
    if (!p.opens()) break;
    out.push_back(p);
  }
  return out;
}

ParenString lr_right_transposed(ParenView y) {
  std::size_t k = lmp(y);
  if (!y.empty() && y[0].closes()) k = 0;
  return transpose(y.subspan(k));
}

std::size_t estimate_from_collection(const LrCollection& c, EdBackend& backend, EdMode mode) {
  StrCollection sc;
  std::size_t total = 0;
  for (const auto& y : c.members) {
    StrHandle l = sc.add(lr_left(y));
    StrHandle r = sc.add(lr_right_transposed(y));
    total += backend.distance(sc, l, r, mode);
    sc.release(l);
    sc.release(r);
  }
  for (const auto& y : c.monotone) total += y.size();
  return total;
}

std::size_t estimate_from_handles(StrCollection& c, const LrHandles& h, EdBackend& backend, EdMode mode) {
  std::size_t total = 0;
  for (auto y : h.members) {
    std::size_t half = c.length(y) / 2;
    auto [l, r] = c.split(y, half);
    StrHandle tr = c.add_transpose(r);
    total += backend.distance(c, l, tr, mode);
    c.release(l);
    c.release(r);
    c.release(tr);
  }
  for (auto y : h.monotone) total += c.length(y);
  return total;
}

std::size_t estimate_from_heavy_strings(HeightForest& hf, EdBackend& backend, EdMode mode) {
  std::size_t total = 0;
  auto& c = hf.strings();
  for (int h : hf.heads()) {
    auto [l, r] = hf.estimator_parts(h);
    total += backend.distance(c, l, r, mode);
    c.release(l);
    c.release(r);
  }
  return 2 * total;
}

ParenString estimator_string(HeightForest& hf, int head) {
  auto& c = hf.strings();
  auto [l, r] = hf.estimator_parts(head);
  ParenString out = c.materialize_parens(l);
  ParenString tail = transpose(c.materialize_parens(r));
  out.insert(out.end(), tail.begin(), tail.end());
  c.release(l);
  c.release(r);
  return out;
}

}  // namespace bracketdyn
