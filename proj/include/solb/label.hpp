#pragma once

#include <compare>
#include <cstdint>
#include <optional>
#include <set>
#include <span>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

namespace solb {

constexpr char kStar = '*';
constexpr char kFree = '_';  // serialized form of the padding symbol

// A string over {1..b, *}. Text is stored as written (leftmost symbol has the
// highest position); at(p) reads position p counted from the right.
class Label {
 public:
  Label() = default;

  // Validates symbols and the position-0 rule; throws usage_error.
  static Label parse(std::string_view text, int b);
  // No validation; for hot paths that construct labels symbol by symbol.
  static Label raw(std::string text, int b) { return Label(std::move(text), b); }

  int b() const { return b_; }
  std::size_t size() const { return s_.size(); }
  bool empty() const { return s_.empty(); }
  char at(std::size_t pos) const { return s_[s_.size() - 1 - pos]; }
  const std::string& str() const { return s_; }

  bool star_free() const { return s_.find(kStar) == std::string::npos; }
  int star_count() const;
  // Position of the unique star, or -1 when there is none or more than one.
  int star_position() const;

  // Prepends a symbol, which becomes the new highest position.
  Label prefixed(char c) const { return Label(std::string(1, c) + s_, b_); }

  friend bool operator==(const Label& x, const Label& y) { return x.b_ == y.b_ && x.s_ == y.s_; }
  friend std::strong_ordering operator<=>(const Label& x, const Label& y) {
    if (auto c = x.s_ <=> y.s_; c != 0) return c;
    return x.b_ <=> y.b_;
  }

 private:
  Label(std::string s, int b) : s_(std::move(s)), b_(static_cast<std::uint8_t>(b)) {}
  std::string s_;
  std::uint8_t b_ = 0;
};

bool is_symbol(char c, int b);

// x is a final substring of y: len(x) <= len(y) and they agree on 0..len(x)-1.
bool is_final_substring(const Label& x, const Label& y);

struct IndependenceResult {
  bool independent = true;
  // (x, y) with x a final substring of the distinct member y.
  std::optional<std::pair<Label, Label>> witness;
};
IndependenceResult is_independent(std::span<const Label> labels);

struct ClearingResult {
  bool clearing = true;
  std::optional<Label> witness;  // an uncovered star-free string of length len(Y)
};
// Exhaustive over star-free strings of length max len(Y).
ClearingResult is_clearing(std::span<const Label> labels, int b);
// Same question answered by enumerating every candidate string and probing its
// final substrings in a hash set. Supports lengths up to 17.
ClearingResult is_clearing_exhaustive(std::span<const Label> labels, int b);

class PaddedLabel {
 public:
  PaddedLabel() = default;
  PaddedLabel(std::string text, std::vector<int> freeset, int b)
      : s_(std::move(text)), free_(std::move(freeset)), b_(b) {}

  int b() const { return b_; }
  std::size_t size() const { return s_.size(); }
  char at(std::size_t pos) const { return s_[s_.size() - 1 - pos]; }
  const std::string& str() const { return s_; }
  // Free positions in ascending order.
  const std::vector<int>& freeset() const { return free_; }

  // Fill the free positions; digits[k] goes to freeset()[k].
  Label fill(std::span<const int> digits) const;

  friend bool operator==(const PaddedLabel&, const PaddedLabel&) = default;

 private:
  std::string s_;
  std::vector<int> free_;
  int b_ = 0;
};

// K-padded version of x: free symbols at K, x's symbols in order elsewhere.
PaddedLabel pad(const Label& x, const std::set<int>& K);

// All b^|K| fillings, sorted. Throws std::domain_error if a filling would put
// a symbol other than 1 or 2 at position 0.
std::vector<Label> expand(const PaddedLabel& p, int b);

inline int digit_of(char c) { return c - '0'; }
inline char symbol_of(int d) { return static_cast<char>('0' + d); }

}  // namespace solb
