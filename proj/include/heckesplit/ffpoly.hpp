#pragma once

// Dense univariate polynomials over a prime field F_p: arithmetic, complete
// factorization (squarefree -> distinct-degree -> equal-degree), the
// split-completely predicate, and the counting of split polynomials used by
// the splitting heuristic.

#include <algorithm>
#include <compare>
#include <cstdint>
#include <random>
#include <sstream>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

#include <gmpxx.h>

#include "heckesplit/arith.hpp"

namespace heckesplit {

class FpPoly;
namespace detail {
FpPoly make_fp_poly(std::uint64_t p, std::vector<std::uint64_t> coeffs);
}

/// Polynomial over F_p with coefficients stored in ascending degree order.
/// The zero polynomial has an empty coefficient vector and degree -1.
class FpPoly {
 public:
  explicit FpPoly(std::uint64_t p) : p_(p) { check_modulus(p); }

  /// Coefficients are reduced modulo p; trailing zeros are stripped.
  FpPoly(std::uint64_t p, std::vector<std::uint64_t> coeffs) : p_(p), coeffs_(std::move(coeffs)) {
    check_modulus(p);
    for (auto& c : coeffs_) c %= p_;
    trim();
  }

  static FpPoly from_signed(std::uint64_t p, const std::vector<long long>& coeffs) {
    check_modulus(p);
    std::vector<std::uint64_t> reduced;
    reduced.reserve(coeffs.size());
    for (long long c : coeffs) {
      long long r = c % static_cast<long long>(p);
      reduced.push_back(static_cast<std::uint64_t>(r < 0 ? r + static_cast<long long>(p) : r));
    }
    return detail::make_fp_poly(p, std::move(reduced));
  }

  static FpPoly constant(std::uint64_t p, std::uint64_t c) { return FpPoly(p, {c}); }
  static FpPoly x(std::uint64_t p) { return FpPoly(p, {0, 1}); }

  std::uint64_t modulus() const { return p_; }
  int degree() const { return static_cast<int>(coeffs_.size()) - 1; }
  bool is_zero() const { return coeffs_.empty(); }
  bool is_one() const { return coeffs_.size() == 1 && coeffs_[0] == 1; }
  const std::vector<std::uint64_t>& coeffs() const { return coeffs_; }
  std::uint64_t coeff(std::size_t i) const { return i < coeffs_.size() ? coeffs_[i] : 0; }
  std::uint64_t leading() const { return coeffs_.empty() ? 0 : coeffs_.back(); }
  bool is_monic() const { return !coeffs_.empty() && coeffs_.back() == 1; }

  FpPoly monic() const {
    if (is_zero() || is_monic()) return *this;
    std::uint64_t inv = invmod(leading(), p_);
    return scaled(inv);
  }

  FpPoly scaled(std::uint64_t c) const {
    std::vector<std::uint64_t> out(coeffs_.size());
    for (std::size_t i = 0; i < coeffs_.size(); ++i) out[i] = mulmod(coeffs_[i], c % p_, p_);
    return detail::make_fp_poly(p_, std::move(out));
  }

  FpPoly derivative() const {
    if (coeffs_.size() <= 1) return detail::make_fp_poly(p_, {});
    std::vector<std::uint64_t> out(coeffs_.size() - 1);
    for (std::size_t i = 1; i < coeffs_.size(); ++i) out[i - 1] = mulmod(coeffs_[i], i % p_, p_);
    return detail::make_fp_poly(p_, std::move(out));
  }

  friend FpPoly operator+(const FpPoly& a, const FpPoly& b) {
    same_field(a, b);
    std::vector<std::uint64_t> out(std::max(a.coeffs_.size(), b.coeffs_.size()), 0);
    for (std::size_t i = 0; i < out.size(); ++i) out[i] = addmod(a.coeff(i), b.coeff(i), a.p_);
    return detail::make_fp_poly(a.p_, std::move(out));
  }

  friend FpPoly operator-(const FpPoly& a, const FpPoly& b) {
    same_field(a, b);
    std::vector<std::uint64_t> out(std::max(a.coeffs_.size(), b.coeffs_.size()), 0);
    for (std::size_t i = 0; i < out.size(); ++i) out[i] = submod(a.coeff(i), b.coeff(i), a.p_);
    return detail::make_fp_poly(a.p_, std::move(out));
  }

  friend FpPoly operator*(const FpPoly& a, const FpPoly& b) {
    same_field(a, b);
    if (a.is_zero() || b.is_zero()) return detail::make_fp_poly(a.p_, {});
    const std::uint64_t p = a.p_;
    std::vector<std::uint64_t> out(a.coeffs_.size() + b.coeffs_.size() - 1, 0);
    if (p < (1ULL << 31)) {
      // Products fit in 62 bits; reduce lazily.
      std::vector<unsigned __int128> acc(out.size(), 0);
      for (std::size_t i = 0; i < a.coeffs_.size(); ++i) {
        if (a.coeffs_[i] == 0) continue;
        for (std::size_t j = 0; j < b.coeffs_.size(); ++j) acc[i + j] += a.coeffs_[i] * b.coeffs_[j];
      }
      for (std::size_t i = 0; i < out.size(); ++i) out[i] = static_cast<std::uint64_t>(acc[i] % p);
    } else {
      for (std::size_t i = 0; i < a.coeffs_.size(); ++i)
        for (std::size_t j = 0; j < b.coeffs_.size(); ++j)
          out[i + j] = addmod(out[i + j], mulmod(a.coeffs_[i], b.coeffs_[j], p), p);
    }
    return detail::make_fp_poly(p, std::move(out));
  }

  friend bool operator==(const FpPoly& a, const FpPoly& b) { return a.p_ == b.p_ && a.coeffs_ == b.coeffs_; }

  /// Canonical order: by degree, then lexicographically on ascending coefficients.
  friend std::strong_ordering operator<=>(const FpPoly& a, const FpPoly& b) {
    if (auto c = a.p_ <=> b.p_; c != 0) return c;
    if (auto c = a.degree() <=> b.degree(); c != 0) return c;
    return a.coeffs_ <=> b.coeffs_;
  }

  std::string to_string(char var = 'x') const {
    if (is_zero()) return "0";
    std::ostringstream out;
    bool first = true;
    for (int i = degree(); i >= 0; --i) {
      std::uint64_t c = coeffs_[static_cast<std::size_t>(i)];
      if (c == 0) continue;
      if (!first) out << " + ";
      first = false;
      if (i == 0 || c != 1) out << c;
      if (i > 0 && c != 1) out << '*';
      if (i > 0) out << var;
      if (i > 1) out << '^' << i;
    }
    return out.str();
  }

 private:
  friend FpPoly detail::make_fp_poly(std::uint64_t, std::vector<std::uint64_t>);
  struct Unchecked {};
  FpPoly(Unchecked, std::uint64_t p, std::vector<std::uint64_t> coeffs) : p_(p), coeffs_(std::move(coeffs)) { trim(); }

  static void check_modulus(std::uint64_t p) {
    if (p >= (1ULL << 63) || !is_prime(p)) throw std::invalid_argument("FpPoly: modulus " + std::to_string(p) + " is not a prime below 2^63");
  }
  static void same_field(const FpPoly& a, const FpPoly& b) {
    if (a.p_ != b.p_) throw std::invalid_argument("FpPoly: modulus mismatch");
  }
  void trim() {
    while (!coeffs_.empty() && coeffs_.back() == 0) coeffs_.pop_back();
  }

  std::uint64_t p_;
  std::vector<std::uint64_t> coeffs_;
};

namespace detail {
/// Internal constructor: coefficients must already be residues and p prime.
inline FpPoly make_fp_poly(std::uint64_t p, std::vector<std::uint64_t> coeffs) {
  return FpPoly(FpPoly::Unchecked{}, p, std::move(coeffs));
}
}  // namespace detail

struct DivRem {
  FpPoly quotient;
  FpPoly remainder;
};

inline DivRem poly_divrem(const FpPoly& a, const FpPoly& b) {
  if (a.modulus() != b.modulus()) throw std::invalid_argument("poly_divrem: modulus mismatch");
  if (b.is_zero()) throw std::domain_error("poly_divrem: division by the zero polynomial");
  const std::uint64_t p = a.modulus();
  if (a.degree() < b.degree()) return {detail::make_fp_poly(p, {}), a};
  std::vector<std::uint64_t> rem = a.coeffs();
  const auto& bc = b.coeffs();
  const std::size_t db = bc.size() - 1;
  std::vector<std::uint64_t> quot(rem.size() - db, 0);
  const std::uint64_t inv_lead = invmod(b.leading(), p);
  for (std::size_t i = rem.size(); i-- > db;) {
    std::uint64_t c = rem[i];
    if (c == 0) continue;
    c = mulmod(c, inv_lead, p);
    quot[i - db] = c;
    for (std::size_t j = 0; j <= db; ++j) rem[i - db + j] = submod(rem[i - db + j], mulmod(c, bc[j], p), p);
  }
  rem.resize(db);
  return {detail::make_fp_poly(p, std::move(quot)), detail::make_fp_poly(p, std::move(rem))};
}

inline FpPoly poly_rem(const FpPoly& a, const FpPoly& b) { return poly_divrem(a, b).remainder; }

/// Monic gcd; gcd(f, 0) = monic(f).
inline FpPoly poly_gcd(FpPoly a, FpPoly b) {
  if (a.modulus() != b.modulus()) throw std::invalid_argument("poly_gcd: modulus mismatch");
  if (a.is_zero() && b.is_zero()) throw std::invalid_argument("poly_gcd: both arguments are zero");
  while (!b.is_zero()) {
    FpPoly r = poly_rem(a, b);
    a = std::move(b);
    b = std::move(r);
  }
  return a.monic();
}

/// base^exponent mod modulus by square-and-multiply.
inline FpPoly powmod(const FpPoly& base, const mpz_class& exponent, const FpPoly& modulus) {
  if (modulus.is_zero()) throw std::domain_error("powmod: zero modulus");
  if (exponent < 0) throw std::invalid_argument("powmod: negative exponent");
  const std::uint64_t p = modulus.modulus();
  FpPoly result = poly_rem(FpPoly::constant(p, 1), modulus);
  FpPoly b = poly_rem(base, modulus);
  const std::size_t bits = mpz_sizeinbase(exponent.get_mpz_t(), 2);
  for (std::size_t i = bits; i-- > 0;) {
    result = poly_rem(result * result, modulus);
    if (mpz_tstbit(exponent.get_mpz_t(), i)) result = poly_rem(result * b, modulus);
  }
  return result;
}

inline FpPoly powmod(const FpPoly& base, std::uint64_t exponent, const FpPoly& modulus) {
  return powmod(base, mpz_class(std::to_string(exponent)), modulus);
}

namespace detail {

/// f(x) = g(x)^p where f' = 0: the coefficients are fixed by Frobenius, so
/// g's coefficient of x^i is f's coefficient of x^{ip}.
inline FpPoly pth_root(const FpPoly& f) {
  const std::uint64_t p = f.modulus();
  std::vector<std::uint64_t> out;
  for (std::size_t i = 0; i < f.coeffs().size(); i += static_cast<std::size_t>(p)) out.push_back(f.coeffs()[i]);
  return make_fp_poly(p, std::move(out));
}

inline void squarefree_monic(const FpPoly& f, unsigned scale, std::vector<std::pair<FpPoly, unsigned>>& out) {
  if (f.degree() < 1) return;
  const FpPoly deriv = f.derivative();
  if (deriv.is_zero()) {
    squarefree_monic(pth_root(f), scale * static_cast<unsigned>(f.modulus()), out);
    return;
  }
  FpPoly c = poly_gcd(f, deriv);
  FpPoly w = poly_divrem(f, c).quotient;
  unsigned i = 1;
  while (w.degree() > 0) {
    FpPoly y = poly_gcd(w, c);
    FpPoly part = poly_divrem(w, y).quotient;
    if (part.degree() > 0) out.emplace_back(part.monic(), i * scale);
    w = std::move(y);
    c = poly_divrem(c, w).quotient;
    ++i;
  }
  if (c.degree() > 0) squarefree_monic(pth_root(c), scale * static_cast<unsigned>(f.modulus()), out);
}

}  // namespace detail

/// Pairwise-coprime squarefree parts of monic(f), ordered by multiplicity.
inline std::vector<std::pair<FpPoly, unsigned>> squarefree_decomposition(const FpPoly& f) {
  if (f.is_zero()) throw std::invalid_argument("squarefree_decomposition: zero polynomial");
  std::vector<std::pair<FpPoly, unsigned>> raw;
  detail::squarefree_monic(f.monic(), 1, raw);
  std::sort(raw.begin(), raw.end(), [](const auto& a, const auto& b) { return a.second < b.second; });
  std::vector<std::pair<FpPoly, unsigned>> out;
  for (auto& entry : raw) {
    if (!out.empty() && out.back().second == entry.second) {
      out.back().first = out.back().first * entry.first;
    } else {
      out.push_back(std::move(entry));
    }
  }
  return out;
}

/// Distinct-degree factorization of a monic squarefree polynomial: pairs
/// (product of all irreducible factors of degree d, d).
inline std::vector<std::pair<FpPoly, unsigned>> distinct_degree_factorization(FpPoly f) {
  std::vector<std::pair<FpPoly, unsigned>> out;
  const std::uint64_t p = f.modulus();
  const FpPoly x = FpPoly::x(p);
  FpPoly h = poly_rem(x, f);
  unsigned d = 0;
  while (f.degree() >= 2 * static_cast<int>(d + 1)) {
    ++d;
    h = powmod(h, p, f);
    FpPoly g = poly_gcd(f, h - x);
    if (g.degree() > 0) {
      out.emplace_back(g, d);
      f = poly_divrem(f, g).quotient;
      h = poly_rem(h, f);
    }
  }
  if (f.degree() > 0) out.emplace_back(f.monic(), static_cast<unsigned>(f.degree()));
  return out;
}

namespace detail {

inline FpPoly random_poly(std::uint64_t p, int degree_bound, std::mt19937_64& rng) {
  std::uniform_int_distribution<std::uint64_t> dist(0, p - 1);
  std::vector<std::uint64_t> c(static_cast<std::size_t>(degree_bound));
  for (auto& v : c) v = dist(rng);
  return make_fp_poly(p, std::move(c));
}

/// One splitting attempt on f (monic, squarefree, all factors of degree d).
inline FpPoly split_candidate(const FpPoly& f, unsigned d, std::mt19937_64& rng) {
  const std::uint64_t p = f.modulus();
  FpPoly a = random_poly(p, f.degree(), rng);
  if (a.degree() < 1) return FpPoly::constant(p, 1);
  if (p == 2) {
    // Trace map a + a^2 + ... + a^(2^(d-1)) into F_2.
    FpPoly term = a;
    FpPoly trace = a;
    for (unsigned i = 1; i < d; ++i) {
      term = poly_rem(term * term, f);
      trace = trace + term;
    }
    return poly_gcd(f, trace);
  }
  mpz_class e;
  mpz_class pz(std::to_string(p));
  mpz_pow_ui(e.get_mpz_t(), pz.get_mpz_t(), d);
  e = (e - 1) / 2;
  FpPoly b = powmod(a, e, f) - FpPoly::constant(p, 1);
  if (b.is_zero()) return FpPoly::constant(p, 1);
  return poly_gcd(f, b);
}

inline void equal_degree_split(const FpPoly& f, unsigned d, std::mt19937_64& rng, std::vector<FpPoly>& out) {
  if (f.degree() <= static_cast<int>(d)) {
    out.push_back(f);
    return;
  }
  for (;;) {
    FpPoly g = split_candidate(f, d, rng);
    if (g.degree() > 0 && g.degree() < f.degree()) {
      equal_degree_split(g, d, rng, out);
      equal_degree_split(poly_divrem(f, g).quotient.monic(), d, rng, out);
      return;
    }
  }
}

}  // namespace detail

/// unit * prod factor^multiplicity with monic irreducible factors in canonical order.
struct Factorization {
  std::uint64_t p = 2;
  std::uint64_t unit = 1;
  std::vector<std::pair<FpPoly, unsigned>> factors;

  FpPoly expand() const {
    FpPoly out = FpPoly::constant(p, unit);
    for (const auto& [g, m] : factors)
      for (unsigned i = 0; i < m; ++i) out = out * g;
    return out;
  }

  bool all_linear() const {
    return std::all_of(factors.begin(), factors.end(), [](const auto& e) { return e.first.degree() == 1; });
  }

  friend bool operator==(const Factorization&, const Factorization&) = default;
};

/// Complete factorization into monic irreducibles. The seed only drives the
/// randomized equal-degree splitting; the result is canonical.
inline Factorization factor(const FpPoly& f, std::uint64_t rng_seed = 0) {
  if (f.is_zero()) throw std::invalid_argument("factor: zero polynomial");
  Factorization result;
  result.p = f.modulus();
  result.unit = f.leading();
  std::mt19937_64 rng(rng_seed);
  for (const auto& [part, mult] : squarefree_decomposition(f)) {
    for (const auto& [block, d] : distinct_degree_factorization(part)) {
      std::vector<FpPoly> pieces;
      detail::equal_degree_split(block, d, rng, pieces);
      for (auto& g : pieces) result.factors.emplace_back(std::move(g), mult);
    }
  }
  std::sort(result.factors.begin(), result.factors.end());
  return result;
}

/// Rabin's test: g | x^{p^d} - x and gcd(g, x^{p^e} - x) = 1 for every proper divisor e of d.
inline bool irreducibility_certificate(const FpPoly& g) {
  if (g.degree() < 1) return false;
  const std::uint64_t p = g.modulus();
  const auto d = static_cast<unsigned>(g.degree());
  const FpPoly x = FpPoly::x(p);
  const FpPoly gm = g.monic();
  std::vector<FpPoly> frob;  // frob[i] = x^{p^i} mod g
  frob.push_back(poly_rem(x, gm));
  for (unsigned i = 1; i <= d; ++i) frob.push_back(powmod(frob.back(), p, gm));
  if (!(frob[d] - poly_rem(x, gm)).is_zero()) return false;
  for (unsigned e = 1; e < d; ++e) {
    if (d % e != 0) continue;
    FpPoly diff = frob[e] - x;
    if (diff.is_zero() || poly_gcd(gm, diff).degree() > 0) return false;
  }
  return true;
}

/// True iff every irreducible factor of f has degree 1, decided by checking
/// that the squarefree part of f divides x^p - x.
inline bool is_totally_split(const FpPoly& f) {
  if (f.is_zero()) throw std::invalid_argument("is_totally_split: zero polynomial");
  if (f.degree() <= 1) return true;
  const std::uint64_t p = f.modulus();
  FpPoly rad = FpPoly::constant(p, 1);
  for (const auto& entry : squarefree_decomposition(f)) rad = rad * entry.first;
  if (rad.degree() <= 1) return true;
  if (static_cast<std::uint64_t>(rad.degree()) > p) return false;
  const FpPoly x = FpPoly::x(p);
  return (powmod(x, p, rad) - poly_rem(x, rad)).is_zero();
}

/// Number of monic degree-d polynomials over F_p that split completely:
/// multisets of d roots from p elements, C(p + d - 1, d).
inline mpz_class count_split_polys(std::uint64_t p, unsigned long d) {
  if (!is_prime(p)) throw std::invalid_argument("count_split_polys: p must be prime");
  mpz_class n(std::to_string(p));
  n += d;
  n -= 1;
  mpz_class out;
  mpz_bin_ui(out.get_mpz_t(), n.get_mpz_t(), d);
  return out;
}

/// count_split_polys(p, d) / p^d as an exact rational.
inline mpq_class split_probability(std::uint64_t p, unsigned long d) {
  mpz_class denom;
  mpz_class pz(std::to_string(p));
  mpz_pow_ui(denom.get_mpz_t(), pz.get_mpz_t(), d);
  mpq_class out(count_split_polys(p, d), denom);
  out.canonicalize();
  return out;
}

}  // namespace heckesplit
