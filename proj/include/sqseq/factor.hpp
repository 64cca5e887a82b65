#pragma once

// Integer factorization for the modest integers met when clearing
// denominators of curve coefficients: trial division, then Pollard-Brent rho
// with an iteration budget.

#include <gmpxx.h>

#include <cstdint>
#include <map>
#include <vector>

#include "sqseq/rational.hpp"

namespace sqseq {

struct Factorization {
  std::map<Integer, unsigned> primes;
  /// Product of the factors that could not be split within the budget (1 if none).
  Integer unfactored{1};

  [[nodiscard]] bool complete() const { return unfactored == 1; }
};

namespace detail {

inline bool is_probable_prime(const Integer& n) { return mpz_probab_prime_p(n.get_mpz_t(), 30) > 0; }

// One nontrivial divisor of composite n, or 0 once `budget` iterations
// (over all polynomial choices) are spent.
inline Integer pollard_brent(const Integer& n, std::uint64_t budget) {
  if (n % 2 == 0) return 2;
  std::uint64_t spent = 0;
  for (unsigned long c = 1; c < 20 && spent < budget; ++c) {
    Integer y = 2, x, q = 1, g = 1, ys;
    std::uint64_t r = 1;
    const std::uint64_t block = 128;
    auto step = [&](Integer& v) { v = (v * v + c) % n; };
    while (g == 1 && spent < budget) {
      x = y;
      for (std::uint64_t i = 0; i < r; ++i) step(y);
      std::uint64_t k = 0;
      while (k < r && g == 1) {
        ys = y;
        for (std::uint64_t i = 0; i < std::min(block, r - k); ++i) {
          step(y);
          Integer diff = x > y ? Integer(x - y) : Integer(y - x);
          q = (q * diff) % n;
        }
        mpz_gcd(g.get_mpz_t(), q.get_mpz_t(), n.get_mpz_t());
        k += block;
      }
      spent += r;
      r *= 2;
    }
    if (g == n) {
      do {
        step(ys);
        Integer diff = x > ys ? Integer(x - ys) : Integer(ys - x);
        mpz_gcd(g.get_mpz_t(), diff.get_mpz_t(), n.get_mpz_t());
      } while (g == 1);
    }
    if (g != 1 && g != n) return g;
  }
  return 0;
}

inline void split(const Integer& n, Factorization& out, std::uint64_t budget) {
  if (n == 1) return;
  if (is_probable_prime(n)) {
    ++out.primes[n];
    return;
  }
  Integer root;
  if (mpz_perfect_power_p(n.get_mpz_t()) != 0) {
    for (unsigned long e = 2; e < mpz_sizeinbase(n.get_mpz_t(), 2) + 1; ++e) {
      if (mpz_root(root.get_mpz_t(), n.get_mpz_t(), e) != 0) {
        Factorization sub;
        split(root, sub, budget);
        for (const auto& [p, k] : sub.primes) out.primes[p] += k * static_cast<unsigned>(e);
        out.unfactored *= Integer(pow(Rational(sub.unfactored), static_cast<unsigned>(e)));
        return;
      }
    }
  }
  Integer d = pollard_brent(n, budget);
  if (d == 0) {
    out.unfactored *= n;
    return;
  }
  split(d, out, budget);
  split(Integer(n / d), out, budget);
}

}  // namespace detail

/// Factors |n| (n != 0). Cofactors that resist the rho budget are reported
/// in `unfactored` rather than guessed.
inline Factorization factor(Integer n, std::uint64_t rho_budget = 1U << 20) {
  Factorization out;
  if (n < 0) n = -n;
  if (n == 0) return out;
  for (unsigned long p = 2; p < 10000; p += (p == 2 ? 1 : 2)) {
    if (Integer(p) * p > n) break;
    unsigned k = 0;
    while (mpz_divisible_ui_p(n.get_mpz_t(), p) != 0) {
      mpz_divexact_ui(n.get_mpz_t(), n.get_mpz_t(), p);
      ++k;
    }
    if (k != 0) out.primes[Integer(p)] += k;
  }
  detail::split(n, out, rho_budget);
  return out;
}

}  // namespace sqseq
