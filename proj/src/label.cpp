#include "solb/label.hpp"

#include <algorithm>
#include <stdexcept>
#include <unordered_set>

#include "solb/errors.hpp"

namespace solb {

bool is_symbol(char c, int b) { return c == kStar || (c >= '1' && digit_of(c) <= b); }

Label Label::parse(std::string_view text, int b) {
  if (b < 2 || b > 9) throw usage_error("label alphabet size must be in 2..9");
  if (text.empty()) throw usage_error("empty label");
  for (char c : text)
    if (!is_symbol(c, b))
      throw usage_error("symbol '" + std::string(1, c) + "' not in X_" + std::to_string(b) +
                        ": " + std::string(text));
  char last = text.back();
  if (last != '1' && last != '2')
    throw usage_error("position 0 must hold 1 or 2: " + std::string(text));
  return Label(std::string(text), b);
}

int Label::star_count() const { return static_cast<int>(std::count(s_.begin(), s_.end(), kStar)); }

int Label::star_position() const {
  int pos = -1;
  for (std::size_t p = 0; p < s_.size(); ++p) {
    if (at(p) != kStar) continue;
    if (pos >= 0) return -1;
    pos = static_cast<int>(p);
  }
  return pos;
}

bool is_final_substring(const Label& x, const Label& y) {
  if (x.b() != y.b()) throw usage_error("labels over different alphabets");
  if (x.size() > y.size()) return false;
  return std::equal(x.str().rbegin(), x.str().rend(), y.str().rbegin());
}

namespace {

int common_b(std::span<const Label> labels) {
  if (labels.empty()) return 0;
  int b = labels.front().b();
  for (const auto& l : labels)
    if (l.b() != b) throw usage_error("labels over different alphabets");
  return b;
}

// Reversed text, so that final substrings become prefixes.
std::vector<std::string> reversed_sorted(std::span<const Label> labels) {
  std::vector<std::string> r;
  r.reserve(labels.size());
  for (const auto& l : labels) r.emplace_back(l.str().rbegin(), l.str().rend());
  std::sort(r.begin(), r.end());
  r.erase(std::unique(r.begin(), r.end()), r.end());
  return r;
}

bool is_prefix(const std::string& a, const std::string& b) {
  return a.size() <= b.size() && std::equal(a.begin(), a.end(), b.begin());
}

std::string unreverse(const std::string& r) { return std::string(r.rbegin(), r.rend()); }

}  // namespace

IndependenceResult is_independent(std::span<const Label> labels) {
  int b = common_b(labels);
  auto r = reversed_sorted(labels);
  // In sorted order a prefix is always immediately followed by an extension
  // whenever any extension exists.
  for (std::size_t i = 0; i + 1 < r.size(); ++i) {
    if (is_prefix(r[i], r[i + 1]))
      return {false, std::make_pair(Label::raw(unreverse(r[i]), b), Label::raw(unreverse(r[i + 1]), b))};
  }
  return {};
}

namespace {

struct ClearingSearch {
  const std::vector<std::string>& r;
  int b;
  std::size_t len;
  std::string prefix;  // reversed: position 0 first

  bool covered(std::size_t lo, std::size_t hi, std::size_t depth) {
    if (r[lo].size() == depth) return true;
    std::size_t i = lo;
    char first = '1';
    char last = depth == 0 ? '2' : symbol_of(b);
    for (char s = first; s <= last; ++s) {
      while (i < hi && r[i][depth] < s) ++i;
      std::size_t j = i;
      while (j < hi && r[j][depth] == s) ++j;
      prefix.push_back(s);
      if (i == j) return false;
      if (!covered(i, j, depth + 1)) return false;
      prefix.pop_back();
      i = j;
    }
    return true;
  }
};

}  // namespace

ClearingResult is_clearing(std::span<const Label> labels, int b) {
  if (labels.empty()) throw usage_error("is_clearing needs a nonempty set");
  for (const auto& l : labels) {
    if (!l.star_free()) throw usage_error("is_clearing needs star-free labels: " + l.str());
    if (l.b() != b) throw usage_error("label alphabet differs from b");
  }
  auto r = reversed_sorted(labels);
  std::size_t len = 0;
  for (const auto& s : r) len = std::max(len, s.size());
  ClearingSearch search{r, b, len, {}};
  if (search.covered(0, r.size(), 0)) return {};
  std::string w = search.prefix;
  w.resize(len, '1');
  return {false, Label::raw(unreverse(w), b)};
}

ClearingResult is_clearing_exhaustive(std::span<const Label> labels, int b) {
  if (labels.empty()) throw usage_error("is_clearing needs a nonempty set");
  std::size_t len = 0;
  for (const auto& l : labels) len = std::max(len, l.size());
  if (len > 17) throw usage_error("exhaustive clearing check supports length at most 17");
  // Key of the final substring of length k: its digits read as a base-10
  // number with position 0 least significant, times 32, plus k.
  auto key = [](std::uint64_t value, std::size_t k) { return value * 32 + k; };
  std::unordered_set<std::uint64_t> have;
  have.reserve(labels.size() * 2);
  for (const auto& l : labels) {
    if (!l.star_free()) throw usage_error("is_clearing needs star-free labels: " + l.str());
    if (l.b() != b) throw usage_error("label alphabet differs from b");
    std::uint64_t v = 0, scale = 1;
    for (std::size_t p = 0; p < l.size(); ++p, scale *= 10) v += scale * static_cast<std::uint64_t>(digit_of(l.at(p)));
    have.insert(key(v, l.size()));
  }
  // Odometer over all star-free strings of length len, position 0 fastest.
  std::vector<int> d(len, 1);
  while (true) {
    bool hit = false;
    std::uint64_t v = 0, scale = 1;
    for (std::size_t k = 1; k <= len && !hit; ++k, scale *= 10) {
      v += scale * static_cast<std::uint64_t>(d[k - 1]);
      hit = have.count(key(v, k)) > 0;
    }
    if (!hit) {
      std::string w(len, '1');
      for (std::size_t p = 0; p < len; ++p) w[len - 1 - p] = symbol_of(d[p]);
      return {false, Label::raw(std::move(w), b)};
    }
    std::size_t k = 0;
    while (k < len && d[k] == (k == 0 ? 2 : b)) d[k++] = 1;
    if (k == len) break;
    ++d[k];
  }
  return {};
}

Label PaddedLabel::fill(std::span<const int> digits) const {
  if (digits.size() != free_.size()) throw usage_error("digit vector does not match free set");
  std::string t = s_;
  for (std::size_t k = 0; k < free_.size(); ++k) {
    if (digits[k] < 1 || digits[k] > b_) throw usage_error("digit out of range");
    t[t.size() - 1 - free_[k]] = symbol_of(digits[k]);
  }
  return Label::raw(std::move(t), b_);
}

PaddedLabel pad(const Label& x, const std::set<int>& K) {
  const int n = static_cast<int>(x.size() + K.size());
  for (int k : K)
    if (k < 0 || k >= n) throw usage_error("padding index " + std::to_string(k) + " out of range");
  std::string t(n, kFree);
  std::size_t src = 0;
  for (int p = 0; p < n; ++p) {
    if (K.count(p)) continue;
    t[n - 1 - p] = x.at(src++);
  }
  return PaddedLabel(std::move(t), std::vector<int>(K.begin(), K.end()), x.b());
}

std::vector<Label> expand(const PaddedLabel& p, int b) {
  const auto& K = p.freeset();
  if (!K.empty() && K.front() == 0 && b > 2)
    throw std::domain_error("expansion would place a symbol above 2 at position 0");
  std::vector<int> digits(K.size(), 1);
  std::vector<Label> out;
  PaddedLabel q(p.str(), K, b);
  while (true) {
    out.push_back(q.fill(digits));
    std::size_t k = 0;
    while (k < digits.size() && digits[k] == b) digits[k++] = 1;
    if (k == digits.size()) break;
    ++digits[k];
  }
  std::sort(out.begin(), out.end());
  return out;
}

}  // namespace solb
