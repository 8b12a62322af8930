#include "bracketdyn/plain_forest.hpp"

#include <cctype>

namespace bracketdyn {

std::vector<std::vector<int>> PlainForest::children() const {
  std::vector<std::vector<int>> ch(size());
  for (std::size_t v = 0; v < size(); ++v) {
    if (parent[v] >= 0) ch[parent[v]].push_back(static_cast<int>(v));
  }
  return ch;
}

std::vector<int> PlainForest::subtree_sizes() const {
  std::vector<int> sz(size(), 1);
  for (std::size_t v = size(); v-- > 0;) {
    if (parent[v] >= 0) sz[parent[v]] += sz[v];
  }
  return sz;
}

PlainForest PlainForest::from_parens(ParenView x) {
  PlainForest f;
  std::vector<int> stack;
  for (std::size_t i = 0; i < x.size(); ++i) {
    if (x[i].opens()) {
      f.parent.push_back(stack.empty() ? -1 : stack.back());
      f.label.push_back(x[i].type);
      stack.push_back(static_cast<int>(f.label.size()) - 1);
    } else {
      if (stack.empty()) throw ParseError(i, "unbalanced closer");
      stack.pop_back();
    }
  }
  if (!stack.empty()) throw ParseError(x.size(), "unbalanced opener");
  return f;
}

ParenString PlainForest::to_parens() const {
  ParenString out;
  out.reserve(2 * size());
  std::vector<int> stack;
  for (std::size_t v = 0; v < size(); ++v) {
    while (!stack.empty() && stack.back() != parent[v]) {
      out.push_back(close_paren(label[stack.back()]));
      stack.pop_back();
    }
    out.push_back(open_paren(label[v]));
    stack.push_back(static_cast<int>(v));
  }
  while (!stack.empty()) {
    out.push_back(close_paren(label[stack.back()]));
    stack.pop_back();
  }
  return out;
}

std::int64_t LabelTable::intern(std::string_view name) {
  auto [it, fresh] = index_.try_emplace(std::string(name), static_cast<std::int64_t>(names_.size()));
  if (fresh) names_.emplace_back(name);
  return it->second;
}

const std::string& LabelTable::name(std::int64_t id) const {
  return names_.at(static_cast<std::size_t>(id));
}

namespace {

bool label_char(char c) {
  return std::isalnum(static_cast<unsigned char>(c)) || c == '_' || c == '-' ||
         c == '.' || c == '#';
}

}  // namespace

PlainForest parse_forest(std::string_view text, LabelTable& labels) {
  PlainForest f;
  std::vector<int> stack;
  std::size_t i = 0;
  int last = -1;  // node that may open a child list
  while (i < text.size()) {
    char c = text[i];
    if (std::isspace(static_cast<unsigned char>(c)) || c == ',') {
      ++i;
      last = -1;
      continue;
    }
    if (c == '(') {
      if (last < 0) throw ParseError(i, "'(' must follow a label");
      stack.push_back(last);
      last = -1;
      ++i;
      continue;
    }
    if (c == ')') {
      if (stack.empty()) throw ParseError(i, "unbalanced ')'");
      stack.pop_back();
      last = -1;
      ++i;
      continue;
    }
    if (!label_char(c)) throw ParseError(i, std::string("unexpected character '") + c + "'");
    std::size_t j = i;
    while (j < text.size() && label_char(text[j])) ++j;
    std::int64_t id = labels.intern(text.substr(i, j - i));
    f.parent.push_back(stack.empty() ? -1 : stack.back());
    f.label.push_back(id);
    last = static_cast<int>(f.label.size()) - 1;
    i = j;
  }
  if (!stack.empty()) throw ParseError(text.size(), "unbalanced '('");
  return f;
}

std::string format_forest(const PlainForest& f, const LabelTable& labels) {
  auto ch = f.children();
  std::string out;
  auto emit = [&](auto&& self, int v) -> void {
    out += labels.name(f.label[v]);
    if (ch[v].empty()) return;
    out.push_back('(');
    for (std::size_t k = 0; k < ch[v].size(); ++k) {
      if (k) out.push_back(' ');
      self(self, ch[v][k]);
    }
    out.push_back(')');
  };
  bool first = true;
  for (std::size_t v = 0; v < f.size(); ++v) {
    if (f.parent[v] >= 0) continue;
    if (!first) out.push_back(' ');
    first = false;
    emit(emit, static_cast<int>(v));
  }
  return out;
}

}  // namespace bracketdyn
