#pragma once

// Closed-form dimensions of S_k(Gamma_0(N), chi) for trivial and quadratic
// characters (Cohen-Oesterle), the weight step q, the incremental degree
// bound M, and the Sturm bound.

#include <algorithm>
#include <cstdint>
#include <stdexcept>
#include <string>
#include <string_view>

#include "heckesplit/arith.hpp"

namespace heckesplit {

enum class CharKind { trivial, legendre };

inline std::string_view to_string(CharKind kind) { return kind == CharKind::trivial ? "trivial" : "legendre"; }

inline CharKind parse_char_kind(std::string_view s) {
  if (s == "trivial") return CharKind::trivial;
  if (s == "legendre") return CharKind::legendre;
  throw std::invalid_argument("unknown character kind '" + std::string(s) + "' (expected trivial or legendre)");
}

/// Trivial character mod N, or the quadratic character (./N) for an odd
/// prime N, or the nontrivial character mod 4.
class QuadChar {
 public:
  QuadChar(unsigned modulus, CharKind kind) : modulus_(modulus), kind_(kind) {
    if (modulus == 0) throw std::invalid_argument("QuadChar: modulus must be positive");
    if (kind == CharKind::legendre && modulus != 4 && (modulus == 2 || !is_prime(modulus)))
      throw std::invalid_argument("QuadChar: legendre character needs an odd prime modulus or 4, got " + std::to_string(modulus));
  }

  static QuadChar trivial(unsigned modulus) { return {modulus, CharKind::trivial}; }
  static QuadChar legendre(unsigned modulus) { return {modulus, CharKind::legendre}; }

  unsigned modulus() const { return modulus_; }
  CharKind kind() const { return kind_; }
  bool is_trivial() const { return kind_ == CharKind::trivial; }

  int operator()(long a) const {
    const auto r = static_cast<std::uint64_t>(floor_mod(a, static_cast<long>(modulus_)));
    if (std::gcd(r, static_cast<std::uint64_t>(modulus_)) != 1) return modulus_ == 1 ? 1 : 0;
    if (kind_ == CharKind::trivial) return 1;
    if (modulus_ == 4) return r == 1 ? 1 : -1;
    return powmod_u64(r, (modulus_ - 1) / 2, modulus_) == 1 ? 1 : -1;
  }

  /// chi(-1).
  int parity() const { return (*this)(-1); }

  unsigned conductor() const { return kind_ == CharKind::trivial ? 1 : modulus_; }

  friend bool operator==(const QuadChar&, const QuadChar&) = default;

 private:
  unsigned modulus_;
  CharKind kind_;
};

struct SpaceLabel {
  unsigned level;
  unsigned weight;
  CharKind chi;

  QuadChar character() const { return {level, chi}; }
  bool parity_ok() const { return character().parity() == ((weight % 2 == 0) ? 1 : -1); }

  friend auto operator<=>(const SpaceLabel&, const SpaceLabel&) = default;
};

/// dim S_k(Gamma_0(N), chi) over C, by the Cohen-Oesterle formula.
inline long dim_cusp_forms(const SpaceLabel& label) {
  if (label.weight < 2) throw std::invalid_argument("dim_cusp_forms: weight must be at least 2");
  const QuadChar chi = label.character();
  if (!label.parity_ok()) return 0;
  const unsigned n = label.level;
  const long k = label.weight;
  // Everything is scaled by 12 to stay in integers.
  long twelve_dim = (k - 1) * static_cast<long>(gamma0_index(n));

  long lambda_prod = 1;
  const unsigned cond = chi.conductor();
  for (unsigned p : prime_divisors(n)) {
    unsigned r = 0, s = 0;
    for (unsigned m = n; m % p == 0; m /= p) ++r;
    for (unsigned m = cond; m % p == 0; m /= p) ++s;
    long lambda;
    auto pw = [p](unsigned e) {
      long v = 1;
      for (unsigned i = 0; i < e; ++i) v *= p;
      return v;
    };
    if (2 * s <= r) {
      lambda = (r % 2 == 0) ? pw(r / 2) + pw(r / 2 - 1) : 2 * pw(r / 2);
    } else {
      lambda = 2 * pw(r - s);
    }
    lambda_prod *= lambda;
  }
  twelve_dim -= 6 * lambda_prod;

  long sum4 = 0, sum3 = 0;
  for (unsigned x = 0; x < n; ++x) {
    const unsigned long xx = static_cast<unsigned long>(x) * x;
    if ((xx + 1) % n == 0) sum4 += chi(x);
    if ((xx + x + 1) % n == 0) sum3 += chi(x);
  }
  const long gamma4 = (k % 2 == 1) ? 0 : (k % 4 == 2 ? -3 : 3);
  const long gamma3 = (k % 3 == 1) ? 0 : (k % 3 == 2 ? -4 : 4);
  twelve_dim += gamma4 * sum4 + gamma3 * sum3;
  if (twelve_dim % 12 != 0) throw InternalError("dim_cusp_forms: non-integral dimension formula value");
  long dim = twelve_dim / 12;
  // dim M_{2-k}(N, chi-bar) correction: constants when k = 2 and chi trivial.
  if (k == 2 && chi.is_trivial()) dim += 1;
  return dim;
}

/// Weight increment q under which mod-p Hecke polynomials divide one another.
inline unsigned weight_step(std::uint64_t p) {
  if (!is_prime(p)) throw std::invalid_argument("weight_step: p must be prime");
  return p == 2 ? 2U : static_cast<unsigned>(p - 1);
}

/// floor(k [SL_2(Z) : Gamma_0(N)] / 12).
inline unsigned sturm_bound(unsigned level, unsigned weight) {
  if (weight < 2) throw std::invalid_argument("sturm_bound: weight must be at least 2");
  return static_cast<unsigned>(weight * gamma0_index(level) / 12);
}

/// M = max_k (dim S_{k+q} - dim S_k) with q = weight_step(p), evaluated on
/// k in [2, 2 + 24q] and checked stable over one further period of 12q.
inline long bound_M(unsigned level, CharKind chi, std::uint64_t p) {
  if (level % p == 0) throw std::invalid_argument("bound_M: p must not divide the level");
  const unsigned q = weight_step(p);
  auto increment = [&](unsigned k) {
    return dim_cusp_forms({level, k + q, chi}) - dim_cusp_forms({level, k, chi});
  };
  long best = 0;
  const unsigned window_end = 2 + 24 * q;
  for (unsigned k = 2; k <= window_end; ++k) best = std::max(best, increment(k));
  for (unsigned k = window_end + 1; k <= window_end + 12 * q; ++k)
    if (increment(k) > best) throw InternalError("bound_M: dimension increment grew beyond the evaluation window");
  return best;
}

}  // namespace heckesplit
