#include "bracketdyn/paren.hpp"

#include <cctype>

namespace bracketdyn {

std::vector<Symbol> encode_all(ParenView x) {
  std::vector<Symbol> out;
  out.reserve(x.size());
  for (auto p : x) out.push_back(encode(p));
  return out;
}

ParenString decode_all(std::span<const Symbol> s) {
  ParenString out;
  out.reserve(s.size());
  for (auto c : s) out.push_back(decode(c));
  return out;
}

namespace {

int shorthand_type(char c) {
  switch (c) {
    case '(': case ')': return 0;
    case '[': case ']': return 1;
    case '{': case '}': return 2;
    default: return -1;
  }
}

}  // namespace

ParenString parse_parens(std::string_view text) {
  ParenString out;
  std::size_t i = 0;
  while (i < text.size()) {
    char c = text[i];
    if (std::isspace(static_cast<unsigned char>(c))) {
      ++i;
      continue;
    }
    int t = shorthand_type(c);
    if (t < 0) {
      throw ParseError(i, std::string("unexpected character '") + c + "'");
    }
    Kind k = (c == '(' || c == '[' || c == '{') ? Kind::open : Kind::close;
    std::size_t j = i + 1;
    if (t == 0 && j < text.size() && std::isdigit(static_cast<unsigned char>(text[j]))) {
      std::int64_t v = 0;
      while (j < text.size() && std::isdigit(static_cast<unsigned char>(text[j]))) {
        if (v > (INT64_MAX >> 2) / 10) throw ParseError(i, "type id too large");
        v = v * 10 + (text[j] - '0');
        ++j;
      }
      out.push_back({k, v});
    } else {
      out.push_back({k, t});
    }
    i = j;
  }
  return out;
}

std::string format_parens(ParenView x) {
  bool small = true;
  for (auto p : x) small = small && p.type >= 0 && p.type <= 2;
  std::string out;
  if (small) {
    static const char open[] = "([{";
    static const char close[] = ")]}";
    for (auto p : x) out.push_back(p.opens() ? open[p.type] : close[p.type]);
    return out;
  }
  for (std::size_t i = 0; i < x.size(); ++i) {
    if (i) out.push_back(' ');
    out.push_back(x[i].opens() ? '(' : ')');
    out += std::to_string(x[i].type);
  }
  return out;
}

std::vector<std::int64_t> heights(ParenView x) {
  std::vector<std::int64_t> h(x.size() + 1, 0);
  for (std::size_t i = 0; i < x.size(); ++i) h[i + 1] = h[i] + (x[i].opens() ? 1 : -1);
  return h;
}

std::vector<std::ptrdiff_t> twins(ParenView x) {
  std::vector<std::ptrdiff_t> tw(x.size(), -1);
  std::vector<std::size_t> stack;
  for (std::size_t i = 0; i < x.size(); ++i) {
    if (x[i].opens()) {
      stack.push_back(i);
    } else if (!stack.empty()) {
      auto j = stack.back();
      stack.pop_back();
      tw[i] = static_cast<std::ptrdiff_t>(j);
      tw[j] = static_cast<std::ptrdiff_t>(i);
    }
  }
  return tw;
}

std::optional<std::size_t> twin(ParenView x, std::size_t i) {
  if (i >= x.size()) throw std::out_of_range("twin: index out of range");
  auto tw = twins(x);
  if (tw[i] < 0) return std::nullopt;
  return static_cast<std::size_t>(tw[i]);
}

bool is_dyck(ParenView x) {
  std::vector<std::int64_t> stack;
  for (auto p : x) {
    if (p.opens()) {
      stack.push_back(p.type);
    } else {
      if (stack.empty() || stack.back() != p.type) return false;
      stack.pop_back();
    }
  }
  return stack.empty();
}

ParenString transpose(ParenView x) {
  ParenString out(x.rbegin(), x.rend());
  for (auto& p : out) p = p.flipped();
  return out;
}

std::size_t lmp(ParenView x) {
  std::size_t i = 0;
  while (i < x.size() && x[i].kind == x[0].kind) ++i;
  return i;
}

std::vector<LrSegment> lr_decompose(ParenView x) {
  std::vector<LrSegment> segs;
  std::int64_t h = 0;
  std::size_t i = 0;
  while (i < x.size()) {
    LrSegment s;
    s.start = i;
    s.open_height = h;
    while (i < x.size() && x[i].opens()) ++i, ++h;
    s.open_len = i - s.start;
    s.close_height = h;
    std::size_t c = i;
    while (i < x.size() && x[i].closes()) ++i, --h;
    s.close_len = i - c;
    s.end = i;
    segs.push_back(s);
  }
  return segs;
}

ParenString reduce_hat(ParenView x) {
  ParenString out;
  out.reserve(x.size());
  for (auto p : x) {
    if (!out.empty() && pairs_with(out.back(), p)) {
      out.pop_back();
    } else {
      out.push_back(p);
    }
  }
  return out;
}

std::vector<std::uint8_t> outline(ParenView x) {
  std::vector<std::uint8_t> out;
  out.reserve(x.size());
  for (auto p : x) out.push_back(p.opens() ? 0 : 1);
  return out;
}

void apply_edit(ParenString& x, const CharEdit& e) {
  switch (e.op) {
    case CharEdit::Op::insert:
      if (e.pos > x.size()) throw std::out_of_range("insert position beyond string");
      x.insert(x.begin() + static_cast<std::ptrdiff_t>(e.pos), e.sym);
      break;
    case CharEdit::Op::erase:
      if (e.pos >= x.size()) throw std::out_of_range("erase position beyond string");
      x.erase(x.begin() + static_cast<std::ptrdiff_t>(e.pos));
      break;
    case CharEdit::Op::substitute:
      if (e.pos >= x.size()) throw std::out_of_range("substitute position beyond string");
      x[e.pos] = e.sym;
      break;
  }
}

}  // namespace bracketdyn
