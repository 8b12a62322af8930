#pragma once

#include <compare>
#include <cstddef>
#include <cstdint>
#include <optional>
#include <span>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

namespace bracketdyn {

enum class Kind : std::uint8_t { open = 0, close = 1 };

// Types below zero are reserved for internal bookkeeping symbols.
inline constexpr std::int64_t kDummyType = -1;
inline constexpr std::int64_t kVirtualType = -2;
inline constexpr std::int64_t kRootType = -3;
inline constexpr std::int64_t kHoleType = -4;

struct Paren {
  Kind kind = Kind::open;
  std::int64_t type = 0;

  bool opens() const { return kind == Kind::open; }
  bool closes() const { return kind == Kind::close; }
  Paren flipped() const { return {opens() ? Kind::close : Kind::open, type}; }

  friend auto operator<=>(const Paren&, const Paren&) = default;
};

inline Paren open_paren(std::int64_t t) { return {Kind::open, t}; }
inline Paren close_paren(std::int64_t t) { return {Kind::close, t}; }

// True when a is an opener and b a closer of the same type.
inline bool pairs_with(Paren a, Paren b) {
  return a.opens() && b.closes() && a.type == b.type;
}

using ParenString = std::vector<Paren>;
using ParenView = std::span<const Paren>;

// Symbols stored in string collections: (type << 1) | kind.
using Symbol = std::int64_t;
inline Symbol encode(Paren p) {
  return static_cast<Symbol>(static_cast<std::uint64_t>(p.type) << 1) |
         static_cast<Symbol>(p.kind);
}
inline Paren decode(Symbol s) {
  return {(s & 1) ? Kind::close : Kind::open, s >> 1};
}
inline Symbol transpose_symbol(Symbol s) { return s ^ 1; }
std::vector<Symbol> encode_all(ParenView x);
ParenString decode_all(std::span<const Symbol> s);

class ParseError : public std::runtime_error {
 public:
  ParseError(std::size_t offset, const std::string& what)
      : std::runtime_error(what), offset_(offset) {}
  std::size_t offset() const { return offset_; }

 private:
  std::size_t offset_;
};

// Accepts "(3 )3" tokens and the ()[]{} shorthand (types 0, 1, 2), mixed freely.
ParenString parse_parens(std::string_view text);
std::string format_parens(ParenView x);

// h[i] is the height before character i; h has |x| + 1 entries.
std::vector<std::int64_t> heights(ParenView x);

// Twin of position i, ignoring types. Throws std::out_of_range on a bad index.
std::optional<std::size_t> twin(ParenView x, std::size_t i);
// All twins at once; -1 where none exists.
std::vector<std::ptrdiff_t> twins(ParenView x);

bool is_dyck(ParenView x);
ParenString transpose(ParenView x);
// Length of the longest prefix made of a single kind.
std::size_t lmp(ParenView x);

struct LrSegment {
  std::size_t start = 0;
  std::size_t end = 0;  // exclusive
  std::size_t open_len = 0;
  std::size_t close_len = 0;
  std::int64_t open_height = 0;   // height before the first opener
  std::int64_t close_height = 0;  // height before the first closer

  std::size_t length() const { return end - start; }
  friend bool operator==(const LrSegment&, const LrSegment&) = default;
};

std::vector<LrSegment> lr_decompose(ParenView x);

// Removes adjacent matching pairs until none remain.
ParenString reduce_hat(ParenView x);

// 0 for an opener, 1 for a closer.
std::vector<std::uint8_t> outline(ParenView x);

// A single character edit on a parenthesis string.
struct CharEdit {
  enum class Op { insert, erase, substitute };
  Op op = Op::insert;
  std::size_t pos = 0;
  Paren sym{};

  static CharEdit insert_at(std::size_t pos, Paren p) { return {Op::insert, pos, p}; }
  static CharEdit erase_at(std::size_t pos) { return {Op::erase, pos, {}}; }
  static CharEdit substitute_at(std::size_t pos, Paren p) { return {Op::substitute, pos, p}; }
};

// Throws std::out_of_range when the edit does not fit the string.
void apply_edit(ParenString& x, const CharEdit& e);

}  // namespace bracketdyn
