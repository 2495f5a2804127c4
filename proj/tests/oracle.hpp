#pragma once
// Direct, unoptimized restatements of the definitions. Used to derive and
// cross-check the expected values frozen into the unit tests.

#include <random>
#include <string>
#include <vector>

#include "solb/label.hpp"

namespace oracle {

inline bool final_substring(const std::string& x, const std::string& y) {
  if (x.size() > y.size()) return false;
  for (std::size_t i = 0; i < x.size(); ++i)
    if (x[x.size() - 1 - i] != y[y.size() - 1 - i]) return false;
  return true;
}

inline bool independent(const std::vector<std::string>& Y) {
  for (const auto& a : Y)
    for (const auto& b : Y)
      if (a != b && final_substring(a, b)) return false;
  return true;
}

// Every star-free length-n string over X_b, lexicographic in written order.
inline std::vector<std::string> all_star_free(int n, int b) {
  std::vector<std::string> out;
  std::string s(n, '1');
  std::vector<int> d(n, 1);
  while (true) {
    for (int i = 0; i < n; ++i) s[i] = static_cast<char>('0' + d[i]);
    if (s.back() == '1' || s.back() == '2') out.push_back(s);
    int k = n - 1;
    while (k >= 0 && d[k] == b) d[k--] = 1;
    if (k < 0) break;
    ++d[k];
  }
  return out;
}

inline std::vector<std::string> uncovered(const std::vector<std::string>& Y, int b) {
  std::size_t n = 0;
  for (const auto& y : Y) n = std::max(n, y.size());
  std::vector<std::string> out;
  for (const auto& z : all_star_free(static_cast<int>(n), b)) {
    bool hit = false;
    for (const auto& y : Y) hit = hit || final_substring(y, z);
    if (!hit) out.push_back(z);
  }
  return out;
}

inline std::string random_label(std::mt19937_64& rng, int b, int max_len, bool stars) {
  std::uniform_int_distribution<int> len(1, max_len), digit(1, b), zero(1, 2), coin(0, 5);
  int n = len(rng);
  std::string s(n, '1');
  for (int i = 0; i + 1 < n; ++i) s[i] = (stars && coin(rng) == 0) ? '*' : static_cast<char>('0' + digit(rng));
  s[n - 1] = static_cast<char>('0' + zero(rng));
  return s;
}

}  // namespace oracle
