#pragma once

#include <algorithm>
#include <climits>
#include <limits>
#include <type_traits>
#include <cmath>
#include <complex>
#include <cstdint>
#include <cstdio>
#include <map>
#include <numbers>
#include <ostream>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include <boost/multiprecision/cpp_bin_float.hpp>

#include "potts/bigint.hpp"
#include "potts/error.hpp"
#include "potts/polynomial.hpp"

namespace potts {

using Complex = std::complex<double>;

struct Root {
  Complex z;
  // |p(z)| / (sum |c_i| * max(1,|z|)^d) on the full polynomial.
  double residual = 0.0;
  // Found by exact division rather than iteration.
  bool exact = false;
};

struct RootSet {
  std::vector<Root> roots;
  std::size_t degree = 0;
  bool converged = false;
  int sweeps = 0;
};

struct RootOptions {
  int max_sweeps = 1000;
  double step_tolerance = 1e-12;
  double residual_threshold = 1e-8;
  // Integer roots removed by exact division before iterating.
  std::vector<int> exact_candidates{0, 1, 2, 3};
};

namespace roots_detail {

// Exact division by (Q - r); requires p(r) == 0.
inline IntPoly divide_linear(const IntPoly& p, const BigInt& r) {
  const auto& c = p.coeffs();
  std::vector<BigInt> q(c.size() - 1);
  BigInt carry = 0;
  for (std::size_t k = c.size() - 1; k > 0; --k) {
    carry = c[k] + carry * r;
    q[k - 1] = carry;
  }
  return IntPoly(std::move(q));
}

// Coefficients scaled by a common power of two so the largest is O(1).
inline std::vector<double> scaled_coefficients(const IntPoly& p) {
  long top = LONG_MIN;
  std::vector<std::pair<double, long>> parts;
  for (const auto& c : p.coeffs()) {
    parts.push_back(frexp_big(c));
    if (c != 0) top = std::max(top, parts.back().second);
  }
  std::vector<double> out;
  for (auto [m, e] : parts) out.push_back(m == 0.0 ? 0.0 : std::ldexp(m, static_cast<int>(e - top)));
  return out;
}

// Extended-precision reals for evaluating p and p'. Chromatic polynomials
// have clustered complex roots that are ill-conditioned in the coefficients,
// so a double Horner loop cannot locate them even though its residual looks
// small. The iterate itself stays in double.
template <unsigned Digits>
using Float = boost::multiprecision::number<boost::multiprecision::cpp_bin_float<Digits>,
                                            boost::multiprecision::et_off>;

template <class F>
struct PreciseComplex {
  F re, im;
};

template <class F>
PreciseComplex<F> mul(const PreciseComplex<F>& a, const PreciseComplex<F>& b) {
  return {a.re * b.re - a.im * b.im, a.re * b.im + a.im * b.re};
}

template <class F>
struct Evaluator {
  std::vector<F> c;  // ascending
  F norm = 0;

  explicit Evaluator(const IntPoly& p) {
    for (const auto& x : p.coeffs()) {
      c.emplace_back(x);
      norm += abs(c.back());
    }
  }

  std::size_t degree() const { return c.size() - 1; }

  // Returns p(z) and p'(z).
  std::pair<PreciseComplex<F>, PreciseComplex<F>> at(Complex z) const {
    const PreciseComplex<F> w{F(z.real()), F(z.imag())};
    PreciseComplex<F> p{c.back(), F(0)}, dp{F(0), F(0)};
    for (std::size_t k = c.size() - 1; k-- > 0;) {
      dp = mul(dp, w);
      dp.re += p.re;
      dp.im += p.im;
      p = mul(p, w);
      p.re += c[k];
    }
    return {p, dp};
  }

  // p(z) / p'(z), or NaN when p'(z) vanishes.
  Complex newton_ratio(Complex z) const {
    const auto [p, dp] = at(z);
    const F den = dp.re * dp.re + dp.im * dp.im;
    if (den == 0) return {std::numeric_limits<double>::quiet_NaN(), 0.0};
    return {static_cast<double>((p.re * dp.re + p.im * dp.im) / den),
            static_cast<double>((p.im * dp.re - p.re * dp.im) / den)};
  }

  // |p(z)| / (sum |c| * max(1,|z|)^d)
  double residual(Complex z) const {
    const auto p = at(z).first;
    const F mag = sqrt(p.re * p.re + p.im * p.im);
    const F scale = norm * pow(F(std::max(1.0, std::abs(z))), static_cast<int>(degree()));
    return static_cast<double>(mag / scale);
  }
};

struct Iteration {
  std::vector<Complex> z;
  int sweeps = 0;
  bool converged = false;
};

template <class F>
Iteration aberth(const IntPoly& p, std::vector<Complex> z, const RootOptions& opt) {
  const Evaluator<F> ev(p);
  const auto d = z.size();
  Iteration out;
  std::vector<bool> frozen(d, false);
  bool done = false;
  while (!done && out.sweeps < opt.max_sweeps) {
    ++out.sweeps;
    done = true;
    for (std::size_t k = 0; k < d; ++k) {
      if (frozen[k]) continue;
      const Complex ratio = ev.newton_ratio(z[k]);
      if (!std::isfinite(ratio.real()) || !std::isfinite(ratio.imag())) {
        done = false;  // sitting on a critical point; nudge off it
        z[k] *= Complex(1.0 + 1e-7, 1e-7);
        continue;
      }
      if (ratio == Complex(0.0, 0.0)) {
        frozen[k] = true;  // exact root in double
        continue;
      }
      Complex sum = 0.0;
      for (std::size_t j = 0; j < d; ++j)
        if (j != k) sum += 1.0 / (z[k] - z[j]);
      const Complex step = ratio / (1.0 - ratio * sum);
      z[k] -= step;
      if (std::abs(step) < opt.step_tolerance * (1.0 + std::abs(z[k])))
        frozen[k] = true;
      else
        done = false;
    }
  }
  out.converged = done;
  out.z = std::move(z);
  return out;
}

template <class F>
std::vector<double> residuals(const IntPoly& p, const std::vector<Root>& roots) {
  const Evaluator<F> ev(p);
  std::vector<double> out;
  for (const auto& r : roots) out.push_back(ev.residual(r.z));
  return out;
}

// Working precision grows with the coefficients: about twice their decimal
// length plus a margin.
template <class Fn>
decltype(auto) with_precision(const IntPoly& p, Fn&& fn) {
  std::size_t bits = 1;
  for (const auto& x : p.coeffs())
    if (x != 0) bits = std::max<std::size_t>(bits, boost::multiprecision::msb(abs(x)) + 1);
  const double digits = 2.0 * static_cast<double>(bits) * 0.30103 + 30.0;
  if (digits <= 50) return fn(std::type_identity<Float<50>>{});
  if (digits <= 100) return fn(std::type_identity<Float<100>>{});
  if (digits <= 200) return fn(std::type_identity<Float<200>>{});
  if (digits <= 400) return fn(std::type_identity<Float<400>>{});
  return fn(std::type_identity<Float<1000>>{});
}

}  // namespace roots_detail

/// Roots of a nonzero integer polynomial.
///
/// Small integer roots (0, 1, 2, 3 by default) are divided out exactly with
/// their multiplicity. The rest are found by Aberth-Ehrlich iteration started
/// on a circle of radius twice the Fujiwara bound, evaluating the exact
/// coefficients in extended precision.
inline RootSet find_roots(const IntPoly& poly, const RootOptions& opt = {}) {
  if (poly.is_zero()) throw InputError("find_roots: zero polynomial");
  RootSet out;
  out.degree = static_cast<std::size_t>(poly.degree());

  IntPoly rest = poly;
  for (int r : opt.exact_candidates) {
    while (rest.degree() > 0 && rest.eval(BigInt(r)) == 0) {
      rest = roots_detail::divide_linear(rest, BigInt(r));
      out.roots.push_back({Complex(r, 0.0), 0.0, true});
    }
  }

  out.converged = true;
  const auto d = static_cast<std::size_t>(rest.degree());
  if (d == 0) return out;

  const auto c = roots_detail::scaled_coefficients(rest);
  double radius = 0.0;
  for (std::size_t k = 1; k <= d; ++k)
    radius = std::max(radius, std::pow(std::abs(c[d - k] / c[d]), 1.0 / static_cast<double>(k)));
  radius = 2.0 * std::max(radius, 1e-3);

  std::vector<Complex> z(d);
  for (std::size_t k = 0; k < d; ++k) {
    const double angle = 2.0 * std::numbers::pi * (static_cast<double>(k) + 0.5) / static_cast<double>(d);
    z[k] = std::polar(radius, angle);
  }

  auto it = roots_detail::with_precision(
      rest, [&](auto tag) { return roots_detail::aberth<typename decltype(tag)::type>(rest, std::move(z), opt); });
  out.sweeps = it.sweeps;
  out.converged = it.converged;
  const std::size_t first_free = out.roots.size();
  for (const Complex& r : it.z) out.roots.push_back({r, 0.0, false});

  const auto res = roots_detail::with_precision(
      poly, [&](auto tag) { return roots_detail::residuals<typename decltype(tag)::type>(poly, out.roots); });
  for (std::size_t k = first_free; k < out.roots.size(); ++k) {
    out.roots[k].residual = res[k];
    if (!(res[k] < opt.residual_threshold)) out.converged = false;
  }
  return out;
}

/// Monic-normalised coefficients rebuilt from the roots, for checking.
inline std::vector<Complex> expand_roots(std::span<const Root> roots) {
  std::vector<Complex> c{1.0};
  for (const auto& r : roots) {
    c.push_back(0.0);
    for (std::size_t k = c.size() - 1; k > 0; --k) c[k] = c[k - 1] - r.z * c[k];
    c[0] = -r.z * c[0];
  }
  return c;  // ascending
}

inline double beraha(int k) {
  const double c = 2.0 * std::cos(std::numbers::pi / k);
  return c * c;
}

struct RootAuditOptions {
  double real_tolerance = 1e-6;
  double interval_tolerance = 1e-6;
  bool planar = true;
};

struct RootViolation {
  double root;
  std::string interval;
};

inline bool is_real_root(const Complex& z, double tol = 1e-6) { return std::abs(z.imag()) < tol * (1.0 + std::abs(z)); }

/// Real chromatic roots that fall where none may lie: below 0, in (0,1),
/// in (1, 32/27], or (planar graphs) at 5 or above.
inline std::vector<RootViolation> audit_real_roots(const RootSet& rs, const RootAuditOptions& opt = {}) {
  std::vector<RootViolation> out;
  const double tol = opt.interval_tolerance;
  for (const auto& r : rs.roots) {
    if (!is_real_root(r.z, opt.real_tolerance)) continue;
    const double x = r.z.real();
    if (x < -tol)
      out.push_back({x, "(-inf,0)"});
    else if (x > tol && x < 1.0 - tol)
      out.push_back({x, "(0,1)"});
    else if (x > 1.0 + tol && x <= 32.0 / 27.0)
      out.push_back({x, "(1,32/27]"});
    else if (opt.planar && x >= 5.0 - tol)
      out.push_back({x, "[5,inf)"});
  }
  return out;
}

/// Root statistics over an ensemble. Counting is with multiplicity; merging
/// two partial results is order independent.
struct EnsembleStats {
  static constexpr double kComplexBin = 0.1;
  static constexpr double kRealBin = 0.02;
  static constexpr double kBerahaTolerance = 1e-3;
  static constexpr int kBerahaMin = 2;
  static constexpr int kBerahaMax = 20;

  std::uint64_t graphs = 0;
  // Non-real roots, binned on centres k*0.1 in both axes.
  std::map<std::pair<long, long>, std::uint64_t> complex_counts;
  // Real roots, binned on centres k*0.02.
  std::map<long, std::uint64_t> real_counts;
  std::uint64_t real_total = 0;
  std::map<int, std::uint64_t> beraha_counts;

  void add(const RootSet& rs) {
    ++graphs;
    for (const auto& r : rs.roots) {
      if (is_real_root(r.z)) {
        const double x = r.z.real();
        ++real_counts[std::lround(x / kRealBin)];
        ++real_total;
        for (int k = kBerahaMin; k <= kBerahaMax; ++k)
          if (std::abs(x - beraha(k)) <= kBerahaTolerance) ++beraha_counts[k];
      } else {
        ++complex_counts[{std::lround(r.z.real() / kComplexBin), std::lround(r.z.imag() / kComplexBin)}];
      }
    }
  }

  void merge(const EnsembleStats& o) {
    graphs += o.graphs;
    for (const auto& [k, c] : o.complex_counts) complex_counts[k] += c;
    for (const auto& [k, c] : o.real_counts) real_counts[k] += c;
    real_total += o.real_total;
    for (const auto& [k, c] : o.beraha_counts) beraha_counts[k] += c;
  }

  // Histogram density, normalised to unit area.
  double real_density(long bin) const {
    const auto it = real_counts.find(bin);
    if (it == real_counts.end() || real_total == 0) return 0.0;
    return static_cast<double>(it->second) / (static_cast<double>(real_total) * kRealBin);
  }

  friend bool operator==(const EnsembleStats&, const EnsembleStats&) = default;
};

template <class Range>
EnsembleStats accumulate_ensemble(const Range& root_sets) {
  EnsembleStats s;
  for (const RootSet& rs : root_sets) s.add(rs);
  return s;
}

namespace roots_detail {

// Fixed-point rendering of k / 10^digits without going through a double.
inline std::string fixed_decimal(long k, int digits) {
  long scale = 1;
  for (int i = 0; i < digits; ++i) scale *= 10;
  const long mag = k < 0 ? -k : k;
  std::string frac = std::to_string(mag % scale);
  frac.insert(0, static_cast<std::size_t>(digits) - frac.size(), '0');
  return std::string(k < 0 ? "-" : "") + std::to_string(mag / scale) + "." + frac;
}

inline std::string g17(double x) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", x);
  return buf;
}

}  // namespace roots_detail

inline void write_complex_density_csv(std::ostream& out, const EnsembleStats& s) {
  out << "x_bin_center,y_bin_center,count\n";
  for (const auto& [bin, c] : s.complex_counts)
    out << roots_detail::fixed_decimal(bin.first, 1) << ',' << roots_detail::fixed_decimal(bin.second, 1) << ',' << c
        << '\n';
}

inline void write_real_hist_csv(std::ostream& out, const EnsembleStats& s) {
  out << "q_bin_center,density\n";
  for (const auto& [bin, c] : s.real_counts)
    out << roots_detail::fixed_decimal(2 * bin, 2) << ',' << roots_detail::g17(s.real_density(bin)) << '\n';
}

inline void write_beraha_csv(std::ostream& out, const EnsembleStats& s) {
  out << "k,B_k,count_within_tol\n";
  for (int k = EnsembleStats::kBerahaMin; k <= EnsembleStats::kBerahaMax; ++k) {
    const auto it = s.beraha_counts.find(k);
    out << k << ',' << roots_detail::g17(beraha(k)) << ',' << (it == s.beraha_counts.end() ? 0 : it->second) << '\n';
  }
}

}  // namespace potts
