#pragma once

#include <algorithm>
#include <cstdint>
#include <sstream>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "potts/bigint.hpp"
#include "potts/error.hpp"

namespace potts {

/// Dense univariate polynomial in Q with arbitrary-precision integer
/// coefficients, ascending degree. No trailing zeros; zero is the empty list.
class IntPoly {
 public:
  IntPoly() = default;
  IntPoly(std::initializer_list<BigInt> coeffs) : c_(coeffs) { trim(); }
  explicit IntPoly(std::vector<BigInt> coeffs) : c_(std::move(coeffs)) { trim(); }

  static IntPoly constant(BigInt x) { return IntPoly(std::vector<BigInt>{std::move(x)}); }
  static IntPoly monomial(std::size_t degree, BigInt x = 1) {
    std::vector<BigInt> c(degree + 1);
    c[degree] = std::move(x);
    return IntPoly(std::move(c));
  }

  bool is_zero() const noexcept { return c_.empty(); }
  // -1 for the zero polynomial.
  long degree() const noexcept { return static_cast<long>(c_.size()) - 1; }
  std::size_t size() const noexcept { return c_.size(); }
  const std::vector<BigInt>& coeffs() const noexcept { return c_; }
  BigInt coeff(std::size_t k) const { return k < c_.size() ? c_[k] : BigInt(0); }

  IntPoly& operator+=(const IntPoly& o) {
    if (o.c_.size() > c_.size()) c_.resize(o.c_.size());
    for (std::size_t k = 0; k < o.c_.size(); ++k) c_[k] += o.c_[k];
    trim();
    return *this;
  }
  IntPoly& operator-=(const IntPoly& o) {
    if (o.c_.size() > c_.size()) c_.resize(o.c_.size());
    for (std::size_t k = 0; k < o.c_.size(); ++k) c_[k] -= o.c_[k];
    trim();
    return *this;
  }
  IntPoly& operator*=(const BigInt& s) {
    if (s == 0) {
      c_.clear();
      return *this;
    }
    for (auto& x : c_) x *= s;
    return *this;
  }

  friend IntPoly operator+(IntPoly a, const IntPoly& b) { return a += b; }
  friend IntPoly operator-(IntPoly a, const IntPoly& b) { return a -= b; }
  friend IntPoly operator*(IntPoly a, const BigInt& s) { return a *= s; }
  friend IntPoly operator-(IntPoly a) {
    for (auto& x : a.c_) x = -x;
    return a;
  }
  friend IntPoly operator*(const IntPoly& a, const IntPoly& b) {
    if (a.is_zero() || b.is_zero()) return {};
    std::vector<BigInt> out(a.c_.size() + b.c_.size() - 1);
    for (std::size_t i = 0; i < a.c_.size(); ++i) {
      if (a.c_[i] == 0) continue;
      for (std::size_t j = 0; j < b.c_.size(); ++j) out[i + j] += a.c_[i] * b.c_[j];
    }
    return IntPoly(std::move(out));
  }

  // Multiplies by Q^k.
  void shift(std::size_t k = 1) {
    if (!is_zero()) c_.insert(c_.begin(), k, BigInt(0));
  }

  BigInt eval(const BigInt& q) const {
    BigInt acc = 0;
    for (auto it = c_.rbegin(); it != c_.rend(); ++it) acc = acc * q + *it;
    return acc;
  }

  friend bool operator==(const IntPoly&, const IntPoly&) = default;

 private:
  void trim() {
    while (!c_.empty() && c_.back() == 0) c_.pop_back();
  }
  std::vector<BigInt> c_;
};

/// Polynomial in Q and v, stored as one IntPoly in Q per power of v.
class BiPoly {
 public:
  BiPoly() = default;
  explicit BiPoly(std::vector<IntPoly> rows) : rows_(std::move(rows)) { trim(); }

  static BiPoly constant(BigInt x) { return BiPoly({IntPoly::constant(std::move(x))}); }
  // x Q^q v^w
  static BiPoly monomial(std::size_t q, std::size_t w, BigInt x = 1) {
    std::vector<IntPoly> rows(w + 1);
    rows[w] = IntPoly::monomial(q, std::move(x));
    return BiPoly(std::move(rows));
  }

  bool is_zero() const noexcept { return rows_.empty(); }
  long v_degree() const noexcept { return static_cast<long>(rows_.size()) - 1; }
  const std::vector<IntPoly>& rows() const noexcept { return rows_; }
  IntPoly row(std::size_t w) const { return w < rows_.size() ? rows_[w] : IntPoly{}; }
  BigInt coeff(std::size_t q, std::size_t w) const { return w < rows_.size() ? rows_[w].coeff(q) : BigInt(0); }

  BiPoly& operator+=(const BiPoly& o) {
    if (o.rows_.size() > rows_.size()) rows_.resize(o.rows_.size());
    for (std::size_t k = 0; k < o.rows_.size(); ++k) rows_[k] += o.rows_[k];
    trim();
    return *this;
  }
  BiPoly& operator-=(const BiPoly& o) {
    if (o.rows_.size() > rows_.size()) rows_.resize(o.rows_.size());
    for (std::size_t k = 0; k < o.rows_.size(); ++k) rows_[k] -= o.rows_[k];
    trim();
    return *this;
  }
  BiPoly& operator*=(const BigInt& s) {
    for (auto& r : rows_) r *= s;
    trim();
    return *this;
  }
  friend BiPoly operator+(BiPoly a, const BiPoly& b) { return a += b; }
  friend BiPoly operator-(BiPoly a, const BiPoly& b) { return a -= b; }
  friend BiPoly operator*(const BiPoly& a, const BiPoly& b) {
    if (a.is_zero() || b.is_zero()) return {};
    std::vector<IntPoly> out(a.rows_.size() + b.rows_.size() - 1);
    for (std::size_t i = 0; i < a.rows_.size(); ++i)
      for (std::size_t j = 0; j < b.rows_.size(); ++j) out[i + j] += a.rows_[i] * b.rows_[j];
    return BiPoly(std::move(out));
  }

  void shift_q(std::size_t k = 1) {
    for (auto& r : rows_) r.shift(k);
  }
  void shift_v(std::size_t k = 1) {
    if (!is_zero()) rows_.insert(rows_.begin(), k, IntPoly{});
  }

  // Substitutes a fixed integer v, leaving a polynomial in Q.
  IntPoly at_v(const BigInt& v) const {
    IntPoly acc;
    for (auto it = rows_.rbegin(); it != rows_.rend(); ++it) {
      acc *= v;
      acc += *it;
    }
    return acc;
  }

  friend bool operator==(const BiPoly&, const BiPoly&) = default;

 private:
  void trim() {
    while (!rows_.empty() && rows_.back().is_zero()) rows_.pop_back();
  }
  std::vector<IntPoly> rows_;
};

/// Polynomial in Q with coefficients reduced modulo a prime p < 2^31.
class ModPoly {
 public:
  ModPoly() = default;
  explicit ModPoly(std::uint32_t prime) : p_(prime) {}
  ModPoly(std::uint32_t prime, std::vector<std::uint32_t> coeffs) : p_(prime), c_(std::move(coeffs)) {
    for (auto& x : c_) x %= p_;
    trim();
  }
  static ModPoly reduce(const IntPoly& a, std::uint32_t prime) {
    std::vector<std::uint32_t> c(a.size());
    for (std::size_t k = 0; k < a.size(); ++k) c[k] = mod_reduce(a.coeffs()[k], prime);
    return ModPoly(prime, std::move(c));
  }

  std::uint32_t prime() const noexcept { return p_; }
  bool is_zero() const noexcept { return c_.empty(); }
  long degree() const noexcept { return static_cast<long>(c_.size()) - 1; }
  const std::vector<std::uint32_t>& coeffs() const noexcept { return c_; }
  std::uint32_t coeff(std::size_t k) const { return k < c_.size() ? c_[k] : 0u; }

  ModPoly& operator+=(const ModPoly& o) {
    check(o);
    if (o.c_.size() > c_.size()) c_.resize(o.c_.size(), 0);
    for (std::size_t k = 0; k < o.c_.size(); ++k) {
      const std::uint64_t s = std::uint64_t{c_[k]} + o.c_[k];
      c_[k] = static_cast<std::uint32_t>(s >= p_ ? s - p_ : s);
    }
    trim();
    return *this;
  }
  ModPoly& operator-=(const ModPoly& o) {
    check(o);
    if (o.c_.size() > c_.size()) c_.resize(o.c_.size(), 0);
    for (std::size_t k = 0; k < o.c_.size(); ++k)
      c_[k] = static_cast<std::uint32_t>((std::uint64_t{c_[k]} + p_ - o.c_[k]) % p_);
    trim();
    return *this;
  }
  ModPoly& operator*=(std::uint32_t s) {
    s %= p_;
    for (auto& x : c_) x = static_cast<std::uint32_t>(std::uint64_t{x} * s % p_);
    trim();
    return *this;
  }
  friend ModPoly operator+(ModPoly a, const ModPoly& b) { return a += b; }
  friend ModPoly operator-(ModPoly a, const ModPoly& b) { return a -= b; }
  friend ModPoly operator*(const ModPoly& a, const ModPoly& b) {
    a.check(b);
    if (a.is_zero() || b.is_zero()) return ModPoly(a.p_);
    // Products are below 2^62, so an accumulator kept below 2^63 cannot wrap.
    constexpr std::uint64_t kReduceAt = std::uint64_t{1} << 63;
    std::vector<std::uint64_t> acc(a.c_.size() + b.c_.size() - 1, 0);
    for (std::size_t i = 0; i < a.c_.size(); ++i) {
      if (a.c_[i] == 0) continue;
      for (std::size_t j = 0; j < b.c_.size(); ++j) {
        auto& slot = acc[i + j];
        slot += std::uint64_t{a.c_[i]} * b.c_[j];
        if (slot >= kReduceAt) slot %= a.p_;
      }
    }
    std::vector<std::uint32_t> out(acc.size());
    for (std::size_t k = 0; k < acc.size(); ++k) out[k] = static_cast<std::uint32_t>(acc[k] % a.p_);
    return ModPoly(a.p_, std::move(out));
  }

  void shift(std::size_t k = 1) {
    if (!is_zero()) c_.insert(c_.begin(), k, 0u);
  }

  std::uint32_t eval(std::uint64_t q) const {
    q %= p_;
    std::uint64_t acc = 0;
    for (auto it = c_.rbegin(); it != c_.rend(); ++it) acc = (acc * q + *it) % p_;
    return static_cast<std::uint32_t>(acc);
  }

  friend bool operator==(const ModPoly&, const ModPoly&) = default;

 private:
  void check(const ModPoly& o) const {
    if (o.p_ != p_) throw ComputeError("modular weights with different primes");
  }
  void trim() {
    while (!c_.empty() && c_.back() == 0) c_.pop_back();
  }
  std::uint32_t p_ = 2;
  std::vector<std::uint32_t> c_;
};

// ---------------------------------------------------------------------------
// Text format: one polynomial per line, coefficients ascending, separated by
// single spaces. The zero polynomial is written as `0`.

inline std::string format_poly(const IntPoly& p) {
  if (p.is_zero()) return "0";
  std::string out;
  for (std::size_t k = 0; k < p.size(); ++k) {
    if (k) out += ' ';
    out += p.coeffs()[k].str();
  }
  return out;
}

inline std::string format_poly(const ModPoly& p) {
  if (p.is_zero()) return "0";
  std::string out;
  for (std::size_t k = 0; k < p.coeffs().size(); ++k) {
    if (k) out += ' ';
    out += std::to_string(p.coeffs()[k]);
  }
  return out;
}

// One line per power of v, ascending, each newline-terminated.
inline std::string format_poly(const BiPoly& p) {
  if (p.is_zero()) return "0\n";
  std::string out;
  for (const auto& r : p.rows()) out += format_poly(r) + '\n';
  return out;
}

inline IntPoly parse_poly(std::string_view line) {
  std::istringstream in{std::string(line)};
  std::vector<BigInt> c;
  std::string tok;
  while (in >> tok) c.push_back(parse_bigint(tok));
  if (c.empty()) throw InputError("empty polynomial line");
  return IntPoly(std::move(c));
}

inline BiPoly parse_bipoly(std::string_view text) {
  std::istringstream in{std::string(text)};
  std::vector<IntPoly> rows;
  std::string line;
  while (std::getline(in, line)) {
    if (line.find_first_not_of(" \t\r") == std::string::npos) continue;
    rows.push_back(parse_poly(line));
  }
  return BiPoly(std::move(rows));
}

}  // namespace potts
