#include "solb/tower.hpp"

#include <cctype>
#include <cmath>

#include "solb/errors.hpp"

namespace solb {

namespace {

unsigned bits_of(const BigInt& x) { return x == 0 ? 0 : static_cast<unsigned>(boost::multiprecision::msb(x)) + 1; }

// Exact delta^e when it stays below the bit limit.
bool small_power(int delta, const BigInt& e, unsigned max_bits, BigInt& out) {
  double bits = static_cast<double>(e) * std::log2(static_cast<double>(delta));
  if (bits > max_bits) return false;
  out = boost::multiprecision::pow(BigInt(delta), static_cast<unsigned>(e));
  return true;
}

// n > P_delta(j, delta + 1)
bool tower_gt(const SymNum& n, int delta, int j) {
  if (j == 1) return !n.exact() || n.value() > delta + 1;
  if (n.exact()) {
    if (n.value() < 2) return false;
    // n > delta^X  iff  floor(log(n - 1)) >= X  iff  floor(log(n - 1)) + 1 > X
    return tower_gt(SymNum(floor_log(n.value() - 1, delta) + 1), delta, j - 1);
  }
  if (n.base() != delta) throw usage_error("symbolic number has base " + std::to_string(n.base()) + ", expected " +
                                           std::to_string(delta));
  // n - 1 = delta^e + (a - 1); for a >= 1 its log is e, for a = 0 it is e - 1.
  return tower_gt(n.value() >= 1 ? n.exponent().plus(1) : n.exponent(), delta, j - 1);
}

class Parser {
 public:
  Parser(const std::string& text, int delta) : delta_(delta) {
    for (char c : text)
      if (!std::isspace(static_cast<unsigned char>(c))) s_.push_back(c);
  }

  SymNum parse() {
    if (s_.empty()) fail("empty number");
    SymNum v = expr();
    if (pos_ != s_.size()) fail("unexpected '" + std::string(1, s_[pos_]) + "'");
    return v;
  }

 private:
  [[noreturn]] void fail(const std::string& msg) const { throw parse_error("number '" + s_ + "': " + msg); }
  bool eat(char c) {
    if (pos_ < s_.size() && s_[pos_] == c) {
      ++pos_;
      return true;
    }
    return false;
  }

  BigInt digits() {
    std::size_t start = pos_;
    while (pos_ < s_.size() && std::isdigit(static_cast<unsigned char>(s_[pos_]))) ++pos_;
    if (start == pos_) fail("expected digits at offset " + std::to_string(start));
    return BigInt(s_.substr(start, pos_ - start));
  }

  SymNum expr() {
    SymNum v = power();
    while (eat('+')) {
      SymNum r = power();
      if (!r.exact()) fail("symbolic right operand of '+'");
      v = v.plus(r.value());
    }
    return v;
  }

  SymNum power() {
    SymNum base = atom();
    if (!eat('^')) return base;
    SymNum e = power();
    if (base.exact() && base.value() == delta_) return SymNum::pow_delta(delta_, e);
    if (!base.exact() || !e.exact()) fail("symbolic powers need base " + std::to_string(delta_));
    if (base.value() < 2) return SymNum(base.value() == 0 && e.value() > 0 ? BigInt(0) : BigInt(1));
    double bits = static_cast<double>(e.value()) * std::log2(static_cast<double>(base.value()));
    if (bits > SymNum::kMaxExactBits) fail("power too large to evaluate exactly");
    return SymNum(boost::multiprecision::pow(base.value(), static_cast<unsigned>(e.value())));
  }

  SymNum atom() {
    if (eat('(')) {
      SymNum v = expr();
      if (!eat(')')) fail("missing ')'");
      return v;
    }
    BigInt m = digits();
    if (eat('e') || eat('E')) {
      BigInt k = digits();
      if (k > SymNum::kMaxExactBits) fail("exponent too large");
      m *= boost::multiprecision::pow(BigInt(10), static_cast<unsigned>(k));
    }
    return SymNum(m);
  }

  std::string s_;
  std::size_t pos_ = 0;
  int delta_;
};

}  // namespace

SymNum::SymNum(BigInt v) : value_(std::move(v)) {
  if (value_ < 0) throw usage_error("SymNum must be non-negative");
}

SymNum SymNum::pow_delta(int delta, const SymNum& e, const BigInt& add) {
  if (delta < 2) throw usage_error("power base must be at least 2");
  if (add < 0) throw usage_error("SymNum must be non-negative");
  BigInt exact;
  if (e.exact() && small_power(delta, e.value(), kMaxExactBits, exact)) return SymNum(exact + add);
  SymNum out;
  out.value_ = add;
  out.delta_ = delta;
  out.exp_ = std::make_shared<const SymNum>(e);
  return out;
}

SymNum SymNum::plus(const BigInt& k) const {
  if (exact()) return SymNum(value_ + k);
  if (bits_of(value_ + k) > kMaxExactBits / 2) throw usage_error("additive part of a symbolic number is too large");
  return pow_delta(delta_, *exp_, value_ + k);
}

std::string SymNum::to_string() const {
  if (exact()) {
    std::string s = value_.str();
    if (s.size() <= 120) return s;
    return "<" + std::to_string(s.size()) + "-digit integer>";
  }
  std::string e = exp_->exact() ? exp_->to_string() : "(" + exp_->to_string() + ")";
  std::string s = std::to_string(delta_) + "^" + e;
  if (value_ != 0) s += "+" + value_.str();
  return s;
}

BigInt floor_log(const BigInt& x, int base) {
  if (x < 1) throw usage_error("floor_log needs x >= 1");
  if (base < 2) throw usage_error("floor_log needs base >= 2");
  double est = std::floor((bits_of(x) - 1) / std::log2(static_cast<double>(base)));
  unsigned k = est > 0 ? static_cast<unsigned>(est) : 0;
  BigInt p = boost::multiprecision::pow(BigInt(base), k);
  while (p > x) {
    p /= base;
    --k;
  }
  while (p * base <= x) {
    p *= base;
    ++k;
  }
  return BigInt(k);
}

BigInt power_tower(int delta, int j, const BigInt& k, unsigned max_bits) {
  if (j < 1) throw usage_error("tower height must be at least 1");
  if (j == 1) return k;
  BigInt e = power_tower(delta, j - 1, k, max_bits);
  BigInt out;
  if (!small_power(delta, e, max_bits, out))
    throw capacity_error("power tower too large to evaluate", "P_" + std::to_string(delta) + "(" + std::to_string(j) +
                                                                   "," + k.str() + ")");
  return out;
}

SymNum power_tower_sym(int delta, int j, const BigInt& k) {
  if (j < 1) throw usage_error("tower height must be at least 1");
  if (j == 1) return SymNum(k);
  return SymNum::pow_delta(delta, power_tower_sym(delta, j - 1, k));
}

bool power_tower_exceeds(const SymNum& n, int delta, int i) {
  if (delta < 3) throw usage_error("delta must be at least 3");
  if (i < 1) throw usage_error("tower height must be at least 1");
  return tower_gt(n, delta, i + 1);
}

BoundReport bound_report(const SymNum& n, int delta) {
  BoundReport r;
  auto line = [&](int i, bool yes) {
    std::string d = std::to_string(delta);
    r.chain.push_back("n > " + d + "^P_" + d + "(" + std::to_string(i) + "," + std::to_string(delta + 1) +
                      "): " + (yes ? "yes" : "no"));
  };
  int i = 2;
  bool yes = power_tower_exceeds(n, delta, i);
  line(i, yes);
  if (!yes) return r;
  while (true) {
    bool next = power_tower_exceeds(n, delta, i + 1);
    line(i + 1, next);
    if (!next) break;
    ++i;
  }
  r.nontrivial = true;
  r.i = i;
  r.radius = BigInt(1) << (i - 1);
  return r;
}

SymNum parse_symnum(const std::string& text, int delta) { return Parser(text, delta).parse(); }

}  // namespace solb
