#pragma once

#include <cstdint>
#include <cstdlib>
#include <functional>
#include <optional>
#include <random>
#include <set>
#include <string>
#include <utility>
#include <vector>

#include "potts/bigint.hpp"
#include "potts/error.hpp"
#include "potts/polynomial.hpp"

namespace potts {

namespace detail {

inline std::uint64_t pow_mod(std::uint64_t b, std::uint64_t e, std::uint64_t m) {
  std::uint64_t r = 1 % m;
  b %= m;
  while (e) {
    if (e & 1) r = r * b % m;
    b = b * b % m;
    e >>= 1;
  }
  return r;
}

}  // namespace detail

// Deterministic Miller-Rabin for n < 2^32 (bases 2, 7, 61).
inline bool is_prime(std::uint32_t n) {
  if (n < 2) return false;
  for (std::uint32_t p : {2u, 3u, 5u, 7u, 11u, 13u, 61u})
    if (n % p == 0) return n == p;
  std::uint64_t d = n - 1;
  int s = 0;
  while ((d & 1) == 0) {
    d >>= 1;
    ++s;
  }
  for (std::uint64_t a : {2u, 7u, 61u}) {
    std::uint64_t x = detail::pow_mod(a, d, n);
    if (x == 1 || x == n - 1) continue;
    bool composite = true;
    for (int r = 1; r < s; ++r) {
      x = x * x % n;
      if (x == n - 1) {
        composite = false;
        break;
      }
    }
    if (composite) return false;
  }
  return true;
}

inline std::uint32_t mod_inverse(std::uint32_t a, std::uint32_t p) {
  return static_cast<std::uint32_t>(detail::pow_mod(a, p - 2, p));
}

/// The largest `count` primes below 2^31, in descending order.
class PrimeSchedule {
 public:
  static constexpr std::size_t kDefaultCap = 64;

  explicit PrimeSchedule(std::size_t count = kDefaultCap) {
    std::uint32_t candidate = (1u << 31) - 1;
    while (primes_.size() < count) {
      if (is_prime(candidate)) primes_.push_back(candidate);
      candidate -= 2;
    }
  }

  // Cap from POTTS_TM_PRIME_COUNT_MAX when set to a positive integer.
  static std::size_t cap_from_env() {
    if (const char* s = std::getenv("POTTS_TM_PRIME_COUNT_MAX")) {
      char* end = nullptr;
      const long v = std::strtol(s, &end, 10);
      if (end != s && *end == '\0' && v > 0) return static_cast<std::size_t>(v);
    }
    return kDefaultCap;
  }

  std::size_t size() const noexcept { return primes_.size(); }
  std::uint32_t operator[](std::size_t k) const { return primes_.at(k); }
  const std::vector<std::uint32_t>& primes() const noexcept { return primes_; }

 private:
  std::vector<std::uint32_t> primes_;
};

/// Per-coefficient Chinese remainder lift into the symmetric range (-P/2, P/2].
inline IntPoly crt_reconstruct(const std::vector<ModPoly>& residues) {
  std::set<std::uint32_t> seen;
  std::size_t width = 0;
  for (const auto& r : residues) {
    if (!seen.insert(r.prime()).second) throw ComputeError("duplicate prime in CRT input");
    width = std::max(width, r.coeffs().size());
  }
  if (residues.empty()) return {};

  // Garner-style incremental lift: x = x + M * ((r - x) * M^{-1} mod p).
  std::vector<BigInt> x(width, BigInt(0));
  BigInt modulus = 1;
  for (const auto& r : residues) {
    const std::uint32_t p = r.prime();
    const std::uint32_t inv = mod_inverse(mod_reduce(modulus, p), p);
    for (std::size_t k = 0; k < width; ++k) {
      const std::uint64_t have = mod_reduce(x[k], p);
      const std::uint64_t want = r.coeff(k);
      const std::uint64_t t = (want + p - have) % p * inv % p;
      x[k] += modulus * t;
    }
    modulus *= p;
  }
  const BigInt half = modulus / 2;
  for (auto& c : x)
    if (c > half) c -= modulus;
  return IntPoly(std::move(x));
}

/// Runs the modular computation prime by prime until the lift stabilises.
///
/// Stops once two consecutive reconstructions agree and the candidate,
/// evaluated at three pseudorandom integers, matches `verify_eval` modulo a
/// prime not used for reconstruction. Throws ComputeError when `max_primes`
/// primes are consumed without success.
inline IntPoly adaptive_crt_run(const std::function<ModPoly(std::uint32_t)>& compute_mod,
                                const std::function<std::uint32_t(std::uint64_t, std::uint32_t)>& verify_eval,
                                std::size_t max_primes = PrimeSchedule::cap_from_env(),
                                std::size_t* primes_used = nullptr) {
  const PrimeSchedule schedule(max_primes);
  std::mt19937_64 rng(0x5eed'c0ffeeULL);
  std::vector<ModPoly> residues;
  std::optional<IntPoly> previous;

  std::size_t next = 0;
  while (next < schedule.size()) {
    const std::uint32_t p = schedule[next++];
    ModPoly r = compute_mod(p);
    if (r.prime() != p) throw ComputeError("modular callback returned a result for the wrong prime");
    residues.push_back(std::move(r));
    IntPoly current = crt_reconstruct(residues);

    if (previous && *previous == current && next < schedule.size()) {
      const std::uint32_t check_prime = schedule[next++];
      bool ok = true;
      for (int k = 0; k < 3 && ok; ++k) {
        const std::uint64_t q0 = 2 + rng() % (std::uint64_t{1} << 20);
        ok = ModPoly::reduce(current, check_prime).eval(q0) == verify_eval(q0, check_prime);
      }
      if (ok) {
        if (primes_used) *primes_used = residues.size() + 1;
        return current;
      }
    }
    previous = std::move(current);
  }
  throw ComputeError("CRT reconstruction did not stabilise within " + std::to_string(schedule.size()) +
                     " primes");
}

}  // namespace potts
