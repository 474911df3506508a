#pragma once

// Modular symbols for Gamma_0(N) with a quadratic character. Manin symbols
// [X^i Y^(k-2-i), (c:d)] modulo the two-term, three-term and scaling
// relations, optionally the star involution, plus the boundary map to cusp
// symbols and Hecke operators computed with Merel's matrices of determinant l.
// A level-1 q-expansion oracle (miller_charpoly) lives at the end.

#include <algorithm>
#include <array>
#include <cstddef>
#include <cstdint>
#include <map>
#include <memory>
#include <mutex>
#include <numeric>
#include <optional>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

#include <gmpxx.h>

#include "heckesplit/arith.hpp"
#include "heckesplit/dimformulas.hpp"
#include "heckesplit/exactlinalg.hpp"

namespace heckesplit {

/// 2x2 integer matrix (a b; c d).
struct Mat2 {
  long a, b, c, d;
  long det() const { return a * d - b * c; }
  friend bool operator==(const Mat2&, const Mat2&) = default;
};

/// Manin symbol [X^i Y^(k-2-i), (c:d)] with (c:d) the canonical point of P^1(Z/N).
struct ManinSymbol {
  unsigned c, d, i;
  friend auto operator<=>(const ManinSymbol&, const ManinSymbol&) = default;
};

/// P^1(Z/NZ): pairs (c, d) with gcd(c, d, N) = 1 modulo scaling by units.
/// The canonical representative of an orbit is its lexicographically least
/// member; normalize() also returns the unit t with (c, d) = t * rep.
class P1List {
 public:
  struct Normalized {
    std::int32_t index;  // -1 when gcd(c, d, N) != 1
    unsigned scalar;
  };

  explicit P1List(unsigned level) : level_(level) {
    if (level == 0) throw std::invalid_argument("P1List: level must be positive");
    const unsigned n = level;
    std::vector<unsigned> units;
    for (unsigned t = 1; t < std::max(n, 2U); ++t)
      if (std::gcd(t, n) == 1) units.push_back(t);
    table_.assign(static_cast<std::size_t>(n) * n, Normalized{-1, 0});
    for (unsigned c = 0; c < n; ++c)
      for (unsigned d = 0; d < n; ++d) {
        if (std::gcd(std::gcd(c, d), n) != 1) continue;
        if (table_[slot(c, d)].index >= 0) continue;
        const auto idx = static_cast<std::int32_t>(reps_.size());
        reps_.emplace_back(c, d);
        for (unsigned t : units) {
          const auto tc = static_cast<unsigned>(static_cast<unsigned long>(t) * c % n);
          const auto td = static_cast<unsigned>(static_cast<unsigned long>(t) * d % n);
          if (table_[slot(tc, td)].index < 0) table_[slot(tc, td)] = {idx, t};
        }
      }
  }

  unsigned level() const { return level_; }
  std::size_t size() const { return reps_.size(); }
  std::pair<unsigned, unsigned> point(std::size_t idx) const { return reps_[idx]; }

  Normalized normalize(long c, long d) const {
    const long n = level_;
    return table_[slot(static_cast<unsigned>(floor_mod(c, n)), static_cast<unsigned>(floor_mod(d, n)))];
  }

 private:
  std::size_t slot(unsigned c, unsigned d) const { return static_cast<std::size_t>(c) * level_ + d; }

  unsigned level_;
  std::vector<std::pair<unsigned, unsigned>> reps_;
  std::vector<Normalized> table_;
};

namespace detail {

inline std::vector<mpz_class> binomial_row(unsigned n) {
  std::vector<mpz_class> row(n + 1);
  for (unsigned r = 0; r <= n; ++r) mpz_bin_uiui(row[r].get_mpz_t(), n, r);
  return row;
}

/// table[i][m] = coefficient of X^m in (aX + bY)^i (cX + dY)^(w-i).
inline std::vector<std::vector<mpz_class>> monomial_images(const Mat2& g, unsigned w) {
  // powers[e][s]: coefficient of X^s in (uX + vY)^e, for both linear forms.
  auto expand = [w](long u, long v) {
    std::vector<std::vector<mpz_class>> powers(w + 1);
    powers[0] = {mpz_class(1)};
    for (unsigned e = 1; e <= w; ++e) {
      std::vector<mpz_class> next(e + 1);
      for (unsigned s = 0; s < e; ++s) {
        next[s + 1] += powers[e - 1][s] * u;
        next[s] += powers[e - 1][s] * v;
      }
      powers[e] = std::move(next);
    }
    return powers;
  };
  const auto first = expand(g.a, g.b);
  const auto second = expand(g.c, g.d);
  std::vector<std::vector<mpz_class>> table(w + 1, std::vector<mpz_class>(w + 1));
  for (unsigned i = 0; i <= w; ++i) {
    const auto& f = first[i];
    const auto& s = second[w - i];
    for (unsigned x = 0; x < f.size(); ++x) {
      if (sgn(f[x]) == 0) continue;
      for (unsigned y = 0; y < s.size(); ++y)
        if (sgn(s[y]) != 0) table[i][x + y] += f[x] * s[y];
    }
  }
  return table;
}

/// Merel's set of matrices (a b; c d) with ad - bc = n, a > b >= 0, d > c >= 0.
inline std::vector<Mat2> merel_matrices(long n) {
  std::vector<Mat2> out;
  for (long a = 1; a <= n; ++a) {
    const long q = n / a;
    if (q * a == n) {
      const long d = q;
      for (long b = 0; b < a; ++b) out.push_back({a, b, 0, d});
      for (long c = 1; c < d; ++c) out.push_back({a, 0, c, d});
    }
    for (long d = q + 1; d <= n; ++d) {
      const long bc = a * d - n;
      for (long c = bc / a + 1; c < d; ++c)
        if (bc % c == 0) out.push_back({a, bc / c, c, d});
    }
  }
  return out;
}

}  // namespace detail

/// Merel matrices of determinant l, computed once per l and shared.
inline std::shared_ptr<const std::vector<Mat2>> heilbronn_matrices(unsigned l) {
  static std::mutex mutex;
  static std::map<unsigned, std::shared_ptr<const std::vector<Mat2>>> cache;
  std::lock_guard<std::mutex> lock(mutex);
  auto& slot = cache[l];
  if (!slot) slot = std::make_shared<const std::vector<Mat2>>(detail::merel_matrices(l));
  return slot;
}

/// Equivalence classes of boundary symbols [a/c] for Gamma_0(N) twisted by
/// chi, together with the relations [-v] = (-1)^k [v] and, in a star
/// quotient, [(a, c)] = sign (-1)^k [(a, -c)]. Classes on which the relations
/// force a nontrivial scalar are zero.
class CuspClasses {
 public:
  CuspClasses(unsigned level, unsigned weight, QuadChar chi, int sign)
      : level_(level), weight_(weight), chi_(chi), sign_(sign) {
    for (unsigned t = 1; t < std::max(level, 2U); ++t)
      if (std::gcd(t, level) == 1) units_.push_back(t);
  }

  /// Class index and scalar s with [v] = s [class]; scalar 0 for a zero class.
  std::pair<std::size_t, int> lookup(long a, long c) {
    for (std::size_t j = 0; j < reps_.size(); ++j) {
      const int s = relate(a, c, reps_[j].first, reps_[j].second);
      if (s != 0) return {j, killed_[j] ? 0 : s};
    }
    const std::size_t j = reps_.size();
    reps_.emplace_back(a, c);
    bool killed = false;
    for (const auto& [w, f] : transforms(a, c))
      for (unsigned t : units_)
        if (gamma0_related(w.first, w.second, a, c, t) && f * chi_(static_cast<long>(t)) != 1) killed = true;
    killed_.push_back(killed);
    return {j, killed ? 0 : 1};
  }

  std::size_t size() const { return reps_.size(); }
  bool killed(std::size_t j) const { return killed_[j]; }
  std::pair<long, long> rep(std::size_t j) const { return reps_[j]; }

 private:
  using Transform = std::pair<std::pair<long, long>, int>;

  std::vector<Transform> transforms(long a, long c) const {
    const int ek = (weight_ % 2 == 0) ? 1 : -1;
    std::vector<Transform> out{{{a, c}, 1}, {{-a, -c}, ek}};
    if (sign_ != 0) {
      out.push_back({{a, -c}, sign_ * ek});
      out.push_back({{-a, c}, sign_});
    }
    return out;
  }

  // Is (a2, c2) = gamma (a1, c1) for some gamma in Gamma_0(N) with lower-right entry t?
  bool gamma0_related(long a2, long c2, long a1, long c1, unsigned t) const {
    const long n = level_;
    if (floor_mod(c2 - static_cast<long>(t) * c1, n) != 0) return false;
    const long g = std::gcd(floor_mod(c1, n), n);
    if (g == 1) return true;
    const long tinv = static_cast<long>(invmod(t % static_cast<unsigned>(n), static_cast<std::uint64_t>(n)));
    return floor_mod(a2 - tinv * a1, g) == 0;
  }

  // Scalar s with [(a, c)] = s [(ra, rc)], or 0 if not related.
  int relate(long a, long c, long ra, long rc) const {
    for (const auto& [w, f] : transforms(a, c))
      for (unsigned t : units_)
        if (gamma0_related(w.first, w.second, ra, rc, t)) return f * chi_(static_cast<long>(t));
    return 0;
  }

  unsigned level_;
  unsigned weight_;
  QuadChar chi_;
  int sign_;
  std::vector<unsigned> units_;
  std::vector<std::pair<long, long>> reps_;
  std::vector<bool> killed_;
};

/// Lift the point (c : d) of P^1(Z/N) to a matrix in SL_2(Z) with bottom row
/// congruent to (c, d) mod N.
inline Mat2 lift_to_sl2(unsigned level, unsigned c, unsigned d) {
  if (level == 1) return {1, 0, 0, 1};
  const long n = level;
  const long cc = (c == 0) ? n : static_cast<long>(c);
  long dd = d;
  while (std::gcd(cc, dd) != 1) dd += n;
  long x = 0, y = 0;
  extended_gcd(dd, cc, x, y);  // x*dd + y*cc = 1
  return {x, -y, cc, dd};
}

/// Space of modular symbols of weight k for Gamma_0(N) with character chi,
/// either the full quotient (sign 0) or the +1 / -1 eigenspace of the star
/// involution.
class ModularSymbolSpace {
 public:
  ModularSymbolSpace(const SpaceLabel& label, int sign)
      : label_(label), chi_(label.character()), sign_(sign), p1_(std::make_shared<P1List>(label.level)) {
    if (label.weight < 2) throw std::invalid_argument("modular symbols: weight must be at least 2");
    if (sign < -1 || sign > 1) throw std::invalid_argument("modular symbols: sign must be -1, 0 or 1");
    n1_ = p1_->size();
    nsym_ = static_cast<std::size_t>(label.weight - 1) * n1_;
    if (!label.parity_ok()) {
      // (-1) acts on every symbol by chi(-1) (-1)^k = -1.
      sym_gen_.assign(nsym_, -1);
      sym_sign_.assign(nsym_, 1);
      finish_empty();
      return;
    }
    two_term();
    three_term();
    boundary();
    cuspidal();
  }

  const SpaceLabel& label() const { return label_; }
  int sign() const { return sign_; }
  const P1List& p1() const { return *p1_; }

  /// Dimension of the relation quotient.
  std::size_t dimension() const { return basis_gen_.size(); }
  std::size_t cuspidal_dimension() const { return cusp_basis_.size(); }

  std::size_t symbol_count() const { return nsym_; }
  ManinSymbol symbol(std::size_t s) const {
    const auto [c, d] = p1_->point(s % n1_);
    return {c, d, static_cast<unsigned>(s / n1_)};
  }
  std::size_t symbol_index(unsigned i, std::size_t p1_index) const { return i * n1_ + p1_index; }

  /// Manin symbols whose classes form the free basis of the quotient.
  std::vector<ManinSymbol> basis_symbols() const {
    std::vector<ManinSymbol> out;
    for (auto g : basis_gen_) out.push_back(symbol(gens_[g]));
    return out;
  }

  /// Coordinates in the free basis of the class of Manin symbol s.
  RatVector symbol_vector(std::size_t s) const {
    RatVector v(dimension());
    if (sym_gen_[s] < 0) return v;
    for (const auto& [b, x] : gen_vec_[static_cast<std::size_t>(sym_gen_[s])]) v[b] = sym_sign_[s] * x;
    return v;
  }

  /// nsym x dim matrix whose row s expresses Manin symbol s in the free basis.
  RatMatrix relation_quotient() const {
    RatMatrix m(nsym_, dimension());
    for (std::size_t s = 0; s < nsym_; ++s) {
      const RatVector v = symbol_vector(s);
      for (std::size_t b = 0; b < v.size(); ++b) m(s, b) = v[b];
    }
    return m;
  }

  /// Matrix of the star involution (column convention) on the quotient.
  RatMatrix star_matrix() const {
    const std::size_t n = dimension();
    RatMatrix m(n, n);
    for (std::size_t b = 0; b < n; ++b) {
      const ManinSymbol x = symbol(gens_[basis_gen_[b]]);
      const auto img = p1_->normalize(-static_cast<long>(x.c), x.d);
      const int s = ((x.i % 2 == 0) ? 1 : -1) * chi_(static_cast<long>(img.scalar));
      const RatVector v = symbol_vector(symbol_index(x.i, static_cast<std::size_t>(img.index)));
      for (std::size_t r = 0; r < n; ++r) m(r, b) = s * v[r];
    }
    return m;
  }

  /// dim x (number of nonzero cusp classes) matrix; row b is the boundary of basis element b.
  const RatMatrix& boundary_map() const { return boundary_; }
  std::size_t cusp_class_count() const { return boundary_.cols(); }

  /// Basis of the cuspidal subspace; vector j has a 1 at free coordinate j and
  /// zeros at the other free coordinates.
  const std::vector<RatVector>& cuspidal_basis() const { return cusp_basis_; }

  /// Image of basis element b under the action of the matrix set `mats`,
  /// as integer combination of generators (gen_vec_ not yet applied).
  std::vector<mpz_class> act_on_basis(std::size_t b, const std::vector<Mat2>& mats,
                                      const std::vector<std::vector<std::vector<mpz_class>>>& tables) const {
    std::vector<mpz_class> acc(gens_.size());
    const ManinSymbol x = symbol(gens_[basis_gen_[b]]);
    const unsigned w = label_.weight - 2;
    for (std::size_t h = 0; h < mats.size(); ++h) {
      const Mat2& g = mats[h];
      const long c = static_cast<long>(x.c) * g.a + static_cast<long>(x.d) * g.c;
      const long d = static_cast<long>(x.c) * g.b + static_cast<long>(x.d) * g.d;
      const auto img = p1_->normalize(c, d);
      if (img.index < 0) continue;
      const int chi_t = chi_(static_cast<long>(img.scalar));
      const auto& row = tables[h][x.i];
      for (unsigned m = 0; m <= w; ++m) {
        if (sgn(row[m]) == 0) continue;
        const std::size_t s = symbol_index(m, static_cast<std::size_t>(img.index));
        const std::int32_t gen = sym_gen_[s];
        if (gen < 0) continue;
        if (chi_t * sym_sign_[s] > 0)
          acc[static_cast<std::size_t>(gen)] += row[m];
        else
          acc[static_cast<std::size_t>(gen)] -= row[m];
      }
    }
    return acc;
  }

  /// Matrix of T_l on the whole quotient (column convention).
  RatMatrix hecke_matrix_full(unsigned l) const {
    const std::size_t n = dimension();
    RatMatrix out(n, n);
    if (n == 0) return out;
    const auto mats = heilbronn_matrices(l);
    const auto tables = hecke_tables(*mats);
    for (std::size_t b = 0; b < n; ++b) {
      const auto acc = act_on_basis(b, *mats, tables);
      for (std::size_t g = 0; g < acc.size(); ++g) {
        if (sgn(acc[g]) == 0) continue;
        for (const auto& [r, x] : gen_vec_[g]) out(r, b) += x * acc[g];
      }
    }
    return out;
  }

  /// Matrix of T_l on the cuspidal subspace in cuspidal_basis() (column convention).
  RatMatrix hecke_matrix(unsigned l) const {
    const std::size_t dc = cuspidal_dimension();
    RatMatrix out(dc, dc);
    if (dc == 0) return out;
    const auto mats = heilbronn_matrices(l);
    const auto tables = hecke_tables(*mats);
    // Only the free coordinates are needed to read off cuspidal coordinates.
    std::vector<std::int32_t> free_pos(dimension(), -1);
    for (std::size_t j = 0; j < dc; ++j) free_pos[cusp_free_[j]] = static_cast<std::int32_t>(j);
    // Integer generator-to-free-coordinate matrix with a common denominator.
    mpz_class den = 1;
    for (const auto& row : gen_vec_)
      for (const auto& [b, x] : row)
        if (free_pos[b] >= 0) mpz_lcm(den.get_mpz_t(), den.get_mpz_t(), x.get_den_mpz_t());
    std::vector<std::vector<std::pair<std::uint32_t, mpz_class>>> gen_free(gen_vec_.size());
    for (std::size_t g = 0; g < gen_vec_.size(); ++g)
      for (const auto& [b, x] : gen_vec_[g])
        if (free_pos[b] >= 0) {
          mpz_class v = x.get_num() * (den / x.get_den());
          gen_free[g].emplace_back(static_cast<std::uint32_t>(free_pos[b]), std::move(v));
        }
    std::vector<bool> needed(dimension(), false);
    for (const auto& w : cusp_basis_)
      for (std::size_t b = 0; b < w.size(); ++b)
        if (sgn(w[b]) != 0) needed[b] = true;
    std::vector<mpz_class> image(dc);
    mpq_class tmp;
    for (std::size_t b = 0; b < dimension(); ++b) {
      if (!needed[b]) continue;
      const auto acc = act_on_basis(b, *mats, tables);
      std::fill(image.begin(), image.end(), mpz_class(0));
      for (std::size_t g = 0; g < acc.size(); ++g) {
        if (sgn(acc[g]) == 0) continue;
        for (const auto& [j, v] : gen_free[g]) mpz_addmul(image[j].get_mpz_t(), acc[g].get_mpz_t(), v.get_mpz_t());
      }
      for (std::size_t f = 0; f < dc; ++f) {
        const mpq_class& wfb = cusp_basis_[f][b];
        if (sgn(wfb) == 0) continue;
        for (std::size_t j = 0; j < dc; ++j) {
          if (sgn(image[j]) == 0) continue;
          tmp = mpq_class(image[j]) * wfb;
          out(j, f) += tmp;
        }
      }
    }
    for (std::size_t i = 0; i < dc; ++i)
      for (std::size_t j = 0; j < dc; ++j)
        if (sgn(out(i, j)) != 0) out(i, j) /= den;
    return out;
  }

 private:
  std::vector<std::vector<std::vector<mpz_class>>> hecke_tables(const std::vector<Mat2>& mats) const {
    std::vector<std::vector<std::vector<mpz_class>>> tables;
    tables.reserve(mats.size());
    for (const auto& g : mats) tables.push_back(detail::monomial_images(g, label_.weight - 2));
    return tables;
  }

  std::pair<std::size_t, int> find(std::size_t s) {
    int sign = 1;
    std::size_t r = s;
    while (parent_[r] != r) {
      sign *= rel_[r];
      r = parent_[r];
    }
    // Path compression.
    std::size_t cur = s;
    int cur_sign = sign;
    while (parent_[cur] != cur) {
      const std::size_t next = parent_[cur];
      const int next_sign = cur_sign * rel_[cur];
      parent_[cur] = r;
      rel_[cur] = static_cast<std::int8_t>(cur_sign);
      cur = next;
      cur_sign = next_sign;
    }
    return {r, sign};
  }

  // Record x_a = coeff * x_b.
  void unite(std::size_t a, std::size_t b, int coeff) {
    const auto [ra, sa] = find(a);
    const auto [rb, sb] = find(b);
    const int s = sa * coeff * sb;
    if (ra == rb) {
      if (s != 1) zero_[ra] = true;
      return;
    }
    parent_[ra] = rb;
    rel_[ra] = static_cast<std::int8_t>(s);
    if (zero_[ra]) zero_[rb] = true;
  }

  void two_term() {
    parent_.resize(nsym_);
    std::iota(parent_.begin(), parent_.end(), std::size_t{0});
    rel_.assign(nsym_, 1);
    zero_.assign(nsym_, false);
    const unsigned w = label_.weight - 2;
    for (std::size_t idx = 0; idx < n1_; ++idx) {
      const auto [c, d] = p1_->point(idx);
      const auto sig = p1_->normalize(d, -static_cast<long>(c));
      const int chi_sig = chi_(static_cast<long>(sig.scalar));
      const auto star = p1_->normalize(-static_cast<long>(c), d);
      const int chi_star = chi_(static_cast<long>(star.scalar));
      for (unsigned i = 0; i <= w; ++i) {
        const int parity = (i % 2 == 0) ? 1 : -1;
        const std::size_t s = symbol_index(i, idx);
        // x + x sigma = 0, x sigma = (-1)^i [X^(w-i) Y^i, (d, -c)].
        unite(s, symbol_index(w - i, static_cast<std::size_t>(sig.index)), -parity * chi_sig);
        // x = sign * x star, x star = (-1)^i [X^i Y^(w-i), (-c, d)].
        if (sign_ != 0) unite(s, symbol_index(i, static_cast<std::size_t>(star.index)), sign_ * parity * chi_star);
      }
    }
    sym_gen_.assign(nsym_, -1);
    sym_sign_.assign(nsym_, 1);
    std::vector<std::int32_t> gen_of_root(nsym_, -1);
    for (std::size_t s = 0; s < nsym_; ++s) {
      const auto [r, sg] = find(s);
      if (zero_[r]) continue;
      if (gen_of_root[r] < 0) {
        gen_of_root[r] = static_cast<std::int32_t>(gens_.size());
        gens_.push_back(r);
      }
      sym_gen_[s] = gen_of_root[r];
      sym_sign_[s] = static_cast<std::int8_t>(sg);
    }
    parent_.clear();
    rel_.clear();
    zero_.clear();
  }

  void three_term() {
    const unsigned w = label_.weight - 2;
    const Mat2 tau{0, -1, 1, -1};
    const Mat2 tau2{-1, 1, -1, 0};
    const auto tab1 = detail::monomial_images(tau, w);
    const auto tab2 = detail::monomial_images(tau2, w);
    SparseRowReducer reducer(gens_.size());
    std::map<std::uint32_t, mpz_class> acc;
    auto add = [&](std::size_t s, const mpz_class& coeff) {
      const std::int32_t g = sym_gen_[s];
      if (g < 0) return;
      auto& slot = acc[static_cast<std::uint32_t>(g)];
      if (sym_sign_[s] > 0)
        slot += coeff;
      else
        slot -= coeff;
    };
    auto add_image = [&](unsigned i, long c, long d, const Mat2& g, const std::vector<std::vector<mpz_class>>& tab) {
      const auto img = p1_->normalize(c * g.a + d * g.c, c * g.b + d * g.d);
      const int chi_t = chi_(static_cast<long>(img.scalar));
      for (unsigned m = 0; m <= w; ++m)
        if (sgn(tab[i][m]) != 0) add(symbol_index(m, static_cast<std::size_t>(img.index)), chi_t * tab[i][m]);
    };
    // Rows for s and its tau-translates coincide when k = 2; visit each orbit once there.
    std::vector<bool> seen(w == 0 ? n1_ : 0, false);
    for (std::size_t idx = 0; idx < n1_; ++idx) {
      const auto [c, d] = p1_->point(idx);
      if (w == 0) {
        if (seen[idx]) continue;
        seen[idx] = true;
        seen[static_cast<std::size_t>(p1_->normalize(d, -static_cast<long>(c) - d).index)] = true;
        seen[static_cast<std::size_t>(p1_->normalize(-static_cast<long>(c) - d, c).index)] = true;
      }
      for (unsigned i = 0; i <= w; ++i) {
        acc.clear();
        add(symbol_index(i, idx), mpz_class(1));
        add_image(i, c, d, tau, tab1);
        add_image(i, c, d, tau2, tab2);
        SparseRow row;
        for (const auto& [g, v] : acc)
          if (sgn(v) != 0) row.emplace_back(g, mpq_class(v));
        if (!row.empty()) reducer.add_row(std::move(row));
      }
    }
    reducer.finish();
    std::vector<std::int32_t> basis_pos(gens_.size(), -1);
    for (std::size_t g = 0; g < gens_.size(); ++g)
      if (!reducer.is_pivot(g)) {
        basis_pos[g] = static_cast<std::int32_t>(basis_gen_.size());
        basis_gen_.push_back(g);
      }
    gen_vec_.resize(gens_.size());
    for (std::size_t g = 0; g < gens_.size(); ++g) {
      if (basis_pos[g] >= 0) {
        gen_vec_[g].emplace_back(static_cast<std::uint32_t>(basis_pos[g]), mpq_class(1));
        continue;
      }
      for (const auto& [col, v] : reducer.pivot_row(g)) {
        if (col == g) continue;
        if (basis_pos[col] < 0) throw InternalError("modular symbols: relation elimination left a pivot column");
        gen_vec_[g].emplace_back(static_cast<std::uint32_t>(basis_pos[col]), -v);
      }
    }
  }

  void boundary() {
    const std::size_t n = dimension();
    const unsigned w = label_.weight - 2;
    CuspClasses cusps(label_.level, label_.weight, chi_, sign_);
    std::vector<std::map<std::size_t, int>> rows(n);
    for (std::size_t b = 0; b < n; ++b) {
      const ManinSymbol x = symbol(gens_[basis_gen_[b]]);
      const Mat2 g = lift_to_sl2(label_.level, x.c, x.d);
      if (x.i == w) {
        const auto [j, s] = cusps.lookup(g.a, g.c);
        if (s != 0) rows[b][j] += s;
      }
      if (x.i == 0) {
        const auto [j, s] = cusps.lookup(g.b, g.d);
        if (s != 0) rows[b][j] -= s;
      }
    }
    std::vector<std::int32_t> column(cusps.size(), -1);
    std::size_t live = 0;
    for (std::size_t j = 0; j < cusps.size(); ++j)
      if (!cusps.killed(j)) column[j] = static_cast<std::int32_t>(live++);
    boundary_ = RatMatrix(n, live);
    for (std::size_t b = 0; b < n; ++b)
      for (const auto& [j, v] : rows[b])
        if (column[j] >= 0) boundary_(b, static_cast<std::size_t>(column[j])) = v;
  }

  void cuspidal() {
    const std::size_t n = dimension();
    if (boundary_.cols() == 0) {
      for (std::size_t b = 0; b < n; ++b) {
        RatVector v(n);
        v[b] = 1;
        cusp_basis_.push_back(std::move(v));
        cusp_free_.push_back(b);
      }
      return;
    }
    auto [e, pivots] = rref(boundary_.transpose());
    std::vector<bool> is_pivot(n, false);
    for (auto c : pivots) is_pivot[c] = true;
    for (std::size_t f = 0; f < n; ++f) {
      if (is_pivot[f]) continue;
      RatVector v(n);
      v[f] = 1;
      for (std::size_t r = 0; r < pivots.size(); ++r) v[pivots[r]] = -e(r, f);
      cusp_basis_.push_back(std::move(v));
      cusp_free_.push_back(f);
    }
  }

  void finish_empty() { boundary_ = RatMatrix(0, 0); }

  SpaceLabel label_;
  QuadChar chi_;
  int sign_;
  std::shared_ptr<const P1List> p1_;
  std::size_t n1_ = 0;
  std::size_t nsym_ = 0;

  // Union-find scratch for the two-term relations.
  std::vector<std::size_t> parent_;
  std::vector<std::int8_t> rel_;
  std::vector<bool> zero_;

  std::vector<std::int32_t> sym_gen_;   // generator of each symbol, -1 if zero
  std::vector<std::int8_t> sym_sign_;   // x_s = sym_sign_ * gen
  std::vector<std::size_t> gens_;       // representative symbol of each generator
  std::vector<std::size_t> basis_gen_;  // generators forming the free basis
  std::vector<SparseRow> gen_vec_;      // each generator in the free basis

  RatMatrix boundary_;
  std::vector<RatVector> cusp_basis_;
  std::vector<std::size_t> cusp_free_;
};

/// Plus quotient (star eigenvalue +1), whose cuspidal part realizes S_k(N, chi).
inline ModularSymbolSpace build_space(const SpaceLabel& label) { return ModularSymbolSpace(label, 1); }

inline RatMatrix hecke_matrix(const ModularSymbolSpace& space, unsigned l) {
  if (!is_prime(l)) throw std::invalid_argument("hecke_matrix: l must be prime, got " + std::to_string(l));
  return space.hecke_matrix(l);
}

/// Characteristic polynomial of T_l on S_k(Gamma_0(N), chi).
inline IntPoly charpoly_hecke(const SpaceLabel& label, unsigned l) {
  const ModularSymbolSpace space = build_space(label);
  return charpoly(hecke_matrix(space, l));
}

namespace detail {

using Series = std::vector<mpz_class>;

inline Series series_mul(const Series& a, const Series& b, std::size_t len) {
  Series out(len);
  for (std::size_t i = 0; i < std::min(a.size(), len); ++i) {
    if (sgn(a[i]) == 0) continue;
    for (std::size_t j = 0; i + j < len && j < b.size(); ++j)
      if (sgn(b[j]) != 0) mpz_addmul(out[i + j].get_mpz_t(), a[i].get_mpz_t(), b[j].get_mpz_t());
  }
  return out;
}

inline Series eisenstein(unsigned weight, long constant, std::size_t len) {
  Series out(len);
  out[0] = 1;
  for (std::size_t n = 1; n < len; ++n) {
    mpz_class sigma = 0, term;
    for (std::size_t d = 1; d <= n; ++d)
      if (n % d == 0) {
        mpz_ui_pow_ui(term.get_mpz_t(), d, weight - 1);
        sigma += term;
      }
    out[n] = constant * sigma;
  }
  return out;
}

}  // namespace detail

/// Characteristic polynomial of T_l on S_k(SL_2(Z)) from q-expansions: the
/// basis Delta^j E4^a E6^b, echelonized, with a_n(T_l f) = a_{nl}(f) + l^(k-1) a_{n/l}(f).
inline IntPoly miller_charpoly(unsigned weight, unsigned l, std::size_t precision) {
  if (weight < 12 || weight % 2 != 0) throw std::invalid_argument("miller_charpoly: weight must be even and at least 12");
  if (!is_prime(l)) throw std::invalid_argument("miller_charpoly: l must be prime");
  const auto dim = static_cast<std::size_t>(dim_cusp_forms({1, weight, CharKind::trivial}));
  if (precision < static_cast<std::size_t>(l) * (dim + 1))
    throw std::invalid_argument("miller_charpoly: precision must be at least l*(dim+1) = " + std::to_string(l * (dim + 1)));
  const std::size_t len = precision + 1;
  const detail::Series e4 = detail::eisenstein(4, 240, len);
  const detail::Series e6 = detail::eisenstein(6, -504, len);
  detail::Series delta = detail::series_mul(detail::series_mul(e4, e4, len), e4, len);
  const detail::Series e6sq = detail::series_mul(e6, e6, len);
  for (std::size_t n = 0; n < len; ++n) {
    delta[n] -= e6sq[n];
    if (!mpz_divisible_ui_p(delta[n].get_mpz_t(), 1728)) throw InternalError("miller_charpoly: E4^3 - E6^2 not divisible by 1728");
    delta[n] /= 1728;
  }
  // Basis with leading terms q^1, ..., q^dim.
  std::vector<std::vector<mpq_class>> basis;
  detail::Series delta_power(len);
  delta_power[0] = 1;
  for (std::size_t j = 1; j <= dim; ++j) {
    delta_power = detail::series_mul(delta_power, delta, len);
    const unsigned rest = weight - 12 * static_cast<unsigned>(j);
    unsigned a = 0, b = 0;
    for (b = 0; 6 * b <= rest; ++b)
      if ((rest - 6 * b) % 4 == 0) {
        a = (rest - 6 * b) / 4;
        break;
      }
    if (4 * a + 6 * b != rest) throw InternalError("miller_charpoly: no monomial E4^a E6^b of weight " + std::to_string(rest));
    detail::Series f = delta_power;
    for (unsigned t = 0; t < a; ++t) f = detail::series_mul(f, e4, len);
    for (unsigned t = 0; t < b; ++t) f = detail::series_mul(f, e6, len);
    basis.emplace_back(f.begin(), f.end());
  }
  // Reduce so that basis[j] has coefficient delta_{ij} at q^(i+1), i < dim.
  for (std::size_t j = dim; j-- > 0;) {
    for (std::size_t i = j + 1; i < dim; ++i) {
      const mpq_class c = basis[j][i + 1];
      if (sgn(c) == 0) continue;
      for (std::size_t n = 0; n < len; ++n) basis[j][n] -= c * basis[i][n];
    }
  }
  mpz_class lk;
  mpz_ui_pow_ui(lk.get_mpz_t(), l, weight - 1);
  RatMatrix t(dim, dim);
  for (std::size_t j = 0; j < dim; ++j)
    for (std::size_t i = 0; i < dim; ++i) {
      const std::size_t n = i + 1;
      mpq_class coeff = basis[j][n * l];
      if (n % l == 0) coeff += lk * basis[j][n / l];
      t(i, j) = coeff;
    }
  return charpoly(t);
}

}  // namespace heckesplit
