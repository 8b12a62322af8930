#pragma once

#include <cstdint>
#include <string>
#include <string_view>
#include <unordered_map>
#include <vector>

#include "bracketdyn/paren.hpp"

namespace bracketdyn {

// Ordered labelled forest stored in preorder; parent is -1 for roots.
struct PlainForest {
  std::vector<std::int64_t> label;
  std::vector<int> parent;

  std::size_t size() const { return label.size(); }
  std::vector<std::vector<int>> children() const;
  std::vector<int> subtree_sizes() const;

  // Requires a string whose kinds form a balanced sequence; labels are opener types.
  static PlainForest from_parens(ParenView x);
  ParenString to_parens() const;
};

// Interns label names so that text forests map to integer labels.
class LabelTable {
 public:
  std::int64_t intern(std::string_view name);
  const std::string& name(std::int64_t id) const;
  std::size_t size() const { return names_.size(); }

 private:
  std::vector<std::string> names_;
  std::unordered_map<std::string, std::int64_t> index_;
};

// Text form: "a(b c(d)) e". Throws ParseError with the byte offset.
PlainForest parse_forest(std::string_view text, LabelTable& labels);
std::string format_forest(const PlainForest& f, const LabelTable& labels);

}  // namespace bracketdyn
