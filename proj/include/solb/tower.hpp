#pragma once

#include <memory>
#include <string>
#include <vector>

#include <boost/multiprecision/cpp_int.hpp>

namespace solb {

using BigInt = boost::multiprecision::cpp_int;

// A non-negative integer that is either stored exactly or as delta^e + a with
// e itself a SymNum. The symbolic form is only used once the exact value would
// be too large to hold; a is always small compared to delta^e.
class SymNum {
 public:
  SymNum() = default;
  explicit SymNum(BigInt v);

  // delta^e + add. Collapses to an exact value when e is small enough.
  static SymNum pow_delta(int delta, const SymNum& e, const BigInt& add = 0);

  bool exact() const { return !exp_; }
  const BigInt& value() const { return value_; }  // exact value, or the add part
  const SymNum& exponent() const { return *exp_; }
  int base() const { return delta_; }

  SymNum plus(const BigInt& k) const;
  std::string to_string() const;

  // Exact values are only materialized up to this many bits.
  static constexpr unsigned kMaxExactBits = 1u << 14;

 private:
  BigInt value_ = 0;
  int delta_ = 0;
  std::shared_ptr<const SymNum> exp_;
};

// floor(log_base(x)) for x >= 1.
BigInt floor_log(const BigInt& x, int base);

// P_delta(j, k): the tower of height j with top exponent k, all others delta.
// Throws capacity_error when the result would exceed max_bits.
BigInt power_tower(int delta, int j, const BigInt& k, unsigned max_bits = SymNum::kMaxExactBits);
SymNum power_tower_sym(int delta, int j, const BigInt& k);

// n > delta^(P_delta(i, delta + 1)), decided by repeated logarithms.
bool power_tower_exceeds(const SymNum& n, int delta, int i);

struct BoundReport {
  bool nontrivial = false;
  int i = 0;            // largest i with n > delta^P_delta(i, delta+1); 0 when none
  BigInt radius = 1;    // 2^(i-1), or 1 when trivial
  std::vector<std::string> chain;  // one line per comparison made
};

BoundReport bound_report(const SymNum& n, int delta);

// Parses "123", "1e6", "4^4^5", "3^162+1" (^ is right associative; powers with
// base delta may be symbolic, other bases must evaluate exactly).
SymNum parse_symnum(const std::string& text, int delta);

}  // namespace solb
