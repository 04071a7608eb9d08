#pragma once

#include <cstdint>
#include <string>
#include <string_view>
#include <variant>

#include <boost/multiprecision/cpp_int.hpp>

#include "potts/bigint.hpp"
#include "potts/error.hpp"
#include "potts/polynomial.hpp"

namespace potts {

using Rational = boost::multiprecision::cpp_rational;

// Accepts `a`, `-a`, or `a/b` with b > 0.
inline Rational parse_rational(std::string_view text) {
  const auto slash = text.find('/');
  if (slash == std::string_view::npos) return Rational(parse_bigint(text));
  const BigInt num = parse_bigint(text.substr(0, slash));
  const BigInt den = parse_bigint(text.substr(slash + 1));
  if (den <= 0) throw InputError("rational denominator must be positive");
  return Rational(num, den);
}

inline std::string to_string(const Rational& r) {
  if (denominator(r) == 1) return numerator(r).str();
  return numerator(r).str() + "/" + denominator(r).str();
}

enum class WeightMode { univariate, bivariate, modular, scalar };

inline const char* to_string(WeightMode m) {
  switch (m) {
    case WeightMode::univariate: return "univariate";
    case WeightMode::bivariate: return "bivariate";
    case WeightMode::modular: return "modular";
    case WeightMode::scalar: return "scalar";
  }
  return "?";
}

/// A coefficient-ring element in one of the four modes.
using Weight = std::variant<IntPoly, BiPoly, ModPoly, double>;

inline WeightMode mode_of(const Weight& w) { return static_cast<WeightMode>(w.index()); }

namespace detail {
template <class Op>
Weight combine(const Weight& a, const Weight& b, Op op) {
  if (a.index() != b.index())
    throw ComputeError(std::string("weight mode mismatch: ") + to_string(mode_of(a)) + " vs " +
                       to_string(mode_of(b)));
  return std::visit(
      [&](const auto& x) -> Weight {
        using T = std::decay_t<decltype(x)>;
        return op(x, std::get<T>(b));
      },
      a);
}
}  // namespace detail

inline Weight weight_add(const Weight& a, const Weight& b) {
  return detail::combine(a, b, [](const auto& x, const auto& y) { return x + y; });
}

inline Weight weight_mul(const Weight& a, const Weight& b) {
  return detail::combine(a, b, [](const auto& x, const auto& y) { return x * y; });
}

inline bool is_zero(const Weight& w) {
  return std::visit(
      [](const auto& x) {
        if constexpr (std::is_same_v<std::decay_t<decltype(x)>, double>)
          return x == 0.0;
        else
          return x.is_zero();
      },
      w);
}

// ---------------------------------------------------------------------------
// Rings. Each binds the fixed parameters of its mode (v, the prime, or the
// numeric Q) and exposes the operations the transfer matrix needs:
//
//   zero(), one(), is_zero(x), add_to(x, y), sub(x, y), mul(x, y),
//   times_q(x)     multiply by Q,
//   times_v(x)     multiply by v (by its numerator for rational v),
//   times_keep(x)  multiply by the denominator of v (identity for integer v),
//   times_int(x, k) multiply by an integer constant.
//
// With v = a/b an edge operator becomes b*1 + a*J, so an exact run returns
// b^|E| * Z. Only the univariate ring supports b != 1.

struct UnivariateRing {
  using value_type = IntPoly;

  BigInt v_num = -1;
  BigInt v_den = 1;

  UnivariateRing() = default;
  explicit UnivariateRing(const Rational& v) : v_num(numerator(v)), v_den(denominator(v)) {}

  static constexpr WeightMode mode = WeightMode::univariate;
  bool chromatic() const { return v_num == -1 && v_den == 1; }

  IntPoly zero() const { return {}; }
  IntPoly one() const { return IntPoly::constant(1); }
  static bool is_zero(const IntPoly& x) { return x.is_zero(); }
  static void add_to(IntPoly& x, const IntPoly& y) { x += y; }
  static IntPoly sub(IntPoly x, const IntPoly& y) { return x -= y; }
  static IntPoly mul(const IntPoly& x, const IntPoly& y) { return x * y; }
  static void times_q(IntPoly& x) { x.shift(1); }
  void times_v(IntPoly& x) const { x *= v_num; }
  void times_keep(IntPoly& x) const {
    if (v_den != 1) x *= v_den;
  }
  static void times_int(IntPoly& x, const BigInt& k) { x *= k; }
  Weight wrap(IntPoly x) const { return x; }
};

struct BivariateRing {
  using value_type = BiPoly;
  static constexpr WeightMode mode = WeightMode::bivariate;
  bool chromatic() const { return false; }

  BiPoly zero() const { return {}; }
  BiPoly one() const { return BiPoly::constant(1); }
  static bool is_zero(const BiPoly& x) { return x.is_zero(); }
  static void add_to(BiPoly& x, const BiPoly& y) { x += y; }
  static BiPoly sub(BiPoly x, const BiPoly& y) { return x -= y; }
  static BiPoly mul(const BiPoly& x, const BiPoly& y) { return x * y; }
  static void times_q(BiPoly& x) { x.shift_q(1); }
  static void times_v(BiPoly& x) { x.shift_v(1); }
  static void times_keep(BiPoly&) {}
  static void times_int(BiPoly& x, const BigInt& k) { x *= k; }
  Weight wrap(BiPoly x) const { return x; }
};

struct ModularRing {
  using value_type = ModPoly;
  static constexpr WeightMode mode = WeightMode::modular;

  std::uint32_t prime = 2147483647u;
  std::uint32_t v_residue = 2147483646u;
  bool v_is_minus_one = true;

  ModularRing() = default;
  ModularRing(std::uint32_t p, long long v)
      : prime(p), v_residue(mod_reduce(BigInt(v), p)), v_is_minus_one(v == -1) {
    if (p < 2 || p >= (1u << 31)) throw ComputeError("modular prime must lie in [2, 2^31)");
  }
  bool chromatic() const { return v_is_minus_one; }

  ModPoly zero() const { return ModPoly(prime); }
  ModPoly one() const { return ModPoly(prime, {1u}); }
  static bool is_zero(const ModPoly& x) { return x.is_zero(); }
  static void add_to(ModPoly& x, const ModPoly& y) { x += y; }
  static ModPoly sub(ModPoly x, const ModPoly& y) { return x -= y; }
  static ModPoly mul(const ModPoly& x, const ModPoly& y) { return x * y; }
  static void times_q(ModPoly& x) { x.shift(1); }
  void times_v(ModPoly& x) const { x *= v_residue; }
  static void times_keep(ModPoly&) {}
  void times_int(ModPoly& x, const BigInt& k) const { x *= mod_reduce(k, prime); }
  Weight wrap(ModPoly x) const { return x; }
};

struct ScalarRing {
  using value_type = double;
  static constexpr WeightMode mode = WeightMode::scalar;

  double q = 1.0;
  double v = -1.0;

  bool chromatic() const { return false; }
  double zero() const { return 0.0; }
  double one() const { return 1.0; }
  static bool is_zero(double x) { return x == 0.0; }
  static void add_to(double& x, double y) { x += y; }
  static double sub(double x, double y) { return x - y; }
  static double mul(double x, double y) { return x * y; }
  void times_q(double& x) const { x *= q; }
  void times_v(double& x) const { x *= v; }
  static void times_keep(double&) {}
  static void times_int(double& x, const BigInt& k) { x *= k.convert_to<double>(); }
  Weight wrap(double x) const { return x; }
};

struct UnivariateMode {
  Rational v = -1;
};
struct BivariateMode {};
struct ModularMode {
  std::uint32_t prime = 2147483647u;
  long long v = -1;
};
struct ScalarMode {
  double q = 1.0;
  double v = -1.0;
};

/// Which ring a computation runs in, together with its bound parameters.
using ModeSpec = std::variant<UnivariateMode, BivariateMode, ModularMode, ScalarMode>;

inline WeightMode mode_of(const ModeSpec& m) { return static_cast<WeightMode>(m.index()); }

/// Calls f(ring) with the ring described by `mode`.
template <class F>
decltype(auto) with_ring(const ModeSpec& mode, F&& f) {
  return std::visit(
      [&](const auto& m) -> decltype(auto) {
        using M = std::decay_t<decltype(m)>;
        if constexpr (std::is_same_v<M, UnivariateMode>)
          return f(UnivariateRing(m.v));
        else if constexpr (std::is_same_v<M, BivariateMode>)
          return f(BivariateRing{});
        else if constexpr (std::is_same_v<M, ModularMode>)
          return f(ModularRing(m.prime, m.v));
        else
          return f(ScalarRing{m.q, m.v});
      },
      mode);
}

/// Multiplies by Q in whatever mode `a` is in. `q` is used only in scalar mode.
inline Weight scale_by_q(Weight a, double q = 1.0) {
  std::visit(
      [&](auto& x) {
        using T = std::decay_t<decltype(x)>;
        if constexpr (std::is_same_v<T, double>)
          x *= q;
        else if constexpr (std::is_same_v<T, BiPoly>)
          x.shift_q(1);
        else
          x.shift(1);
      },
      a);
  return a;
}

}  // namespace potts
