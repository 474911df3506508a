#pragma once

// Dense exact linear algebra over Q: reduced echelon form, kernels,
// restriction of an operator to an invariant subspace, and characteristic
// polynomials (Hessenberg reduction). No floating point.

#include <algorithm>
#include <cstddef>
#include <cstdint>
#include <mutex>
#include <optional>
#include <sstream>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

#include <gmpxx.h>

#include "heckesplit/arith.hpp"
#include "heckesplit/ffpoly.hpp"

namespace heckesplit {

using RatVector = std::vector<mpq_class>;

class RatMatrix {
 public:
  RatMatrix() = default;
  RatMatrix(std::size_t rows, std::size_t cols) : rows_(rows), cols_(cols), entries_(rows * cols) {}

  static RatMatrix identity(std::size_t n) {
    RatMatrix m(n, n);
    for (std::size_t i = 0; i < n; ++i) m(i, i) = 1;
    return m;
  }

  static RatMatrix from_rows(const std::vector<std::vector<long>>& rows) {
    const std::size_t c = rows.empty() ? 0 : rows.front().size();
    RatMatrix m(rows.size(), c);
    for (std::size_t i = 0; i < rows.size(); ++i) {
      if (rows[i].size() != c) throw std::invalid_argument("RatMatrix::from_rows: ragged rows");
      for (std::size_t j = 0; j < c; ++j) m(i, j) = rows[i][j];
    }
    return m;
  }

  static RatMatrix diagonal(const std::vector<long>& diag) {
    RatMatrix m(diag.size(), diag.size());
    for (std::size_t i = 0; i < diag.size(); ++i) m(i, i) = diag[i];
    return m;
  }

  std::size_t rows() const { return rows_; }
  std::size_t cols() const { return cols_; }
  bool is_square() const { return rows_ == cols_; }

  mpq_class& operator()(std::size_t i, std::size_t j) { return entries_[i * cols_ + j]; }
  const mpq_class& operator()(std::size_t i, std::size_t j) const { return entries_[i * cols_ + j]; }

  RatVector row(std::size_t i) const {
    return RatVector(entries_.begin() + static_cast<std::ptrdiff_t>(i * cols_),
                     entries_.begin() + static_cast<std::ptrdiff_t>((i + 1) * cols_));
  }

  RatMatrix transpose() const {
    RatMatrix t(cols_, rows_);
    for (std::size_t i = 0; i < rows_; ++i)
      for (std::size_t j = 0; j < cols_; ++j) t(j, i) = (*this)(i, j);
    return t;
  }

  bool is_zero() const {
    for (const auto& e : entries_)
      if (sgn(e) != 0) return false;
    return true;
  }

  friend RatMatrix operator*(const RatMatrix& a, const RatMatrix& b) {
    if (a.cols_ != b.rows_) throw std::invalid_argument("RatMatrix: dimension mismatch in product");
    RatMatrix out(a.rows_, b.cols_);
    mpq_class tmp;
    for (std::size_t i = 0; i < a.rows_; ++i)
      for (std::size_t k = 0; k < a.cols_; ++k) {
        const mpq_class& aik = a(i, k);
        if (sgn(aik) == 0) continue;
        for (std::size_t j = 0; j < b.cols_; ++j) {
          if (sgn(b(k, j)) == 0) continue;
          mpq_mul(tmp.get_mpq_t(), aik.get_mpq_t(), b(k, j).get_mpq_t());
          out(i, j) += tmp;
        }
      }
    return out;
  }

  friend RatMatrix operator+(const RatMatrix& a, const RatMatrix& b) {
    if (a.rows_ != b.rows_ || a.cols_ != b.cols_) throw std::invalid_argument("RatMatrix: dimension mismatch in sum");
    RatMatrix out = a;
    for (std::size_t i = 0; i < out.entries_.size(); ++i) out.entries_[i] += b.entries_[i];
    return out;
  }

  RatMatrix scaled(const mpq_class& c) const {
    RatMatrix out = *this;
    for (auto& e : out.entries_) e *= c;
    return out;
  }

  RatVector apply(const RatVector& v) const {
    if (v.size() != cols_) throw std::invalid_argument("RatMatrix::apply: dimension mismatch");
    RatVector out(rows_);
    for (std::size_t i = 0; i < rows_; ++i)
      for (std::size_t j = 0; j < cols_; ++j)
        if (sgn(v[j]) != 0) out[i] += (*this)(i, j) * v[j];
    return out;
  }

  friend bool operator==(const RatMatrix& a, const RatMatrix& b) {
    return a.rows_ == b.rows_ && a.cols_ == b.cols_ && a.entries_ == b.entries_;
  }

 private:
  std::size_t rows_ = 0;
  std::size_t cols_ = 0;
  std::vector<mpq_class> entries_;
};

/// Polynomial with integer coefficients in ascending degree order, trailing
/// zeros stripped (the zero polynomial is empty).
struct IntPoly {
  std::vector<mpz_class> coeffs;

  IntPoly() = default;
  explicit IntPoly(std::vector<mpz_class> c) : coeffs(std::move(c)) { trim(); }

  static IntPoly from_longs(const std::vector<long>& c) {
    std::vector<mpz_class> out(c.begin(), c.end());
    return IntPoly(std::move(out));
  }

  int degree() const { return static_cast<int>(coeffs.size()) - 1; }
  bool is_monic() const { return !coeffs.empty() && coeffs.back() == 1; }

  void trim() {
    while (!coeffs.empty() && sgn(coeffs.back()) == 0) coeffs.pop_back();
  }

  FpPoly reduce_mod(std::uint64_t p) const {
    mpz_class pz(std::to_string(p));
    std::vector<std::uint64_t> out;
    out.reserve(coeffs.size());
    mpz_class r;
    for (const auto& c : coeffs) {
      mpz_fdiv_r(r.get_mpz_t(), c.get_mpz_t(), pz.get_mpz_t());
      out.push_back(std::stoull(r.get_str()));
    }
    return FpPoly(p, std::move(out));
  }

  friend IntPoly operator*(const IntPoly& a, const IntPoly& b) {
    if (a.coeffs.empty() || b.coeffs.empty()) return {};
    std::vector<mpz_class> out(a.coeffs.size() + b.coeffs.size() - 1);
    for (std::size_t i = 0; i < a.coeffs.size(); ++i)
      for (std::size_t j = 0; j < b.coeffs.size(); ++j) out[i + j] += a.coeffs[i] * b.coeffs[j];
    return IntPoly(std::move(out));
  }

  friend bool operator==(const IntPoly&, const IntPoly&) = default;

  std::vector<std::string> coeff_strings() const {
    std::vector<std::string> out;
    out.reserve(coeffs.size());
    for (const auto& c : coeffs) out.push_back(c.get_str());
    return out;
  }

  /// Human-readable form, highest degree first: "x^2 - 3*x + 2".
  std::string to_string(char var = 'x') const {
    if (coeffs.empty()) return "0";
    std::ostringstream out;
    bool first = true;
    for (int i = degree(); i >= 0; --i) {
      const mpz_class& c = coeffs[static_cast<std::size_t>(i)];
      if (sgn(c) == 0) continue;
      mpz_class mag = abs(c);
      if (first) {
        if (sgn(c) < 0) out << '-';
      } else {
        out << (sgn(c) < 0 ? " - " : " + ");
      }
      first = false;
      if (i == 0 || mag != 1) out << mag.get_str();
      if (i > 0 && mag != 1) out << '*';
      if (i > 0) out << var;
      if (i > 1) out << '^' << i;
    }
    return out.str();
  }
};

struct RrefResult {
  RatMatrix echelon;
  std::vector<std::size_t> pivots;
};

/// Reduced row echelon form over Q.
inline RrefResult rref(RatMatrix m) {
  std::vector<std::size_t> pivots;
  const std::size_t rows = m.rows(), cols = m.cols();
  std::size_t r = 0;
  mpq_class factor, tmp;
  for (std::size_t c = 0; c < cols && r < rows; ++c) {
    std::size_t pivot = rows;
    for (std::size_t i = r; i < rows; ++i)
      if (sgn(m(i, c)) != 0) {
        pivot = i;
        break;
      }
    if (pivot == rows) continue;
    if (pivot != r)
      for (std::size_t j = 0; j < cols; ++j) swap(m(pivot, j), m(r, j));
    const mpq_class inv = 1 / m(r, c);
    for (std::size_t j = c; j < cols; ++j)
      if (sgn(m(r, j)) != 0) m(r, j) *= inv;
    for (std::size_t i = 0; i < rows; ++i) {
      if (i == r || sgn(m(i, c)) == 0) continue;
      factor = m(i, c);
      for (std::size_t j = c; j < cols; ++j) {
        if (sgn(m(r, j)) == 0) continue;
        mpq_mul(tmp.get_mpq_t(), factor.get_mpq_t(), m(r, j).get_mpq_t());
        m(i, j) -= tmp;
      }
    }
    pivots.push_back(c);
    ++r;
  }
  return {std::move(m), std::move(pivots)};
}

inline std::size_t rank(const RatMatrix& m) { return rref(m).pivots.size(); }

/// Basis of the right null space {v : m v = 0}, one vector per free column.
inline std::vector<RatVector> kernel(const RatMatrix& m) {
  auto [e, pivots] = rref(m);
  std::vector<bool> is_pivot(m.cols(), false);
  for (auto c : pivots) is_pivot[c] = true;
  std::vector<RatVector> basis;
  for (std::size_t f = 0; f < m.cols(); ++f) {
    if (is_pivot[f]) continue;
    RatVector v(m.cols());
    v[f] = 1;
    for (std::size_t r = 0; r < pivots.size(); ++r) v[pivots[r]] = -e(r, f);
    basis.push_back(std::move(v));
  }
  return basis;
}

/// Matrix of the operator induced on span(subspace_basis), acting on column
/// vectors: op * b_j = sum_i R(i, j) b_i. Throws InternalError if the span
/// is not invariant.
inline RatMatrix restrict(const RatMatrix& op, const std::vector<RatVector>& subspace_basis) {
  if (!op.is_square()) throw std::invalid_argument("restrict: operator must be square");
  const std::size_t n = op.rows(), m = subspace_basis.size();
  RatMatrix aug(n, 2 * m);
  for (std::size_t j = 0; j < m; ++j) {
    if (subspace_basis[j].size() != n) throw std::invalid_argument("restrict: basis vector has wrong length");
    RatVector image = op.apply(subspace_basis[j]);
    for (std::size_t i = 0; i < n; ++i) {
      aug(i, j) = subspace_basis[j][i];
      aug(i, m + j) = image[i];
    }
  }
  auto [e, pivots] = rref(std::move(aug));
  if (pivots.size() != m) {
    for (auto c : pivots)
      if (c >= m) throw InternalError("restrict: subspace is not invariant under the operator");
    throw std::invalid_argument("restrict: subspace basis is linearly dependent");
  }
  for (std::size_t r = 0; r < m; ++r)
    if (pivots[r] != r) throw std::invalid_argument("restrict: subspace basis is linearly dependent");
  RatMatrix out(m, m);
  for (std::size_t i = 0; i < m; ++i)
    for (std::size_t j = 0; j < m; ++j) out(i, j) = e(i, m + j);
  return out;
}

/// Characteristic polynomial over Q, returned as rationals (monic).
inline std::vector<mpq_class> charpoly_rational(RatMatrix h) {
  if (!h.is_square()) throw std::invalid_argument("charpoly: matrix must be square");
  const std::size_t n = h.rows();
  mpq_class u, tmp;
  // Reduce to upper Hessenberg form by similarity transforms.
  for (std::size_t m = 1; m + 1 < n; ++m) {
    std::size_t i = m;
    while (i < n && sgn(h(i, m - 1)) == 0) ++i;
    if (i == n) continue;
    if (i != m) {
      for (std::size_t j = m - 1; j < n; ++j) swap(h(i, j), h(m, j));
      for (std::size_t j = 0; j < n; ++j) swap(h(j, i), h(j, m));
    }
    const mpq_class inv = 1 / h(m, m - 1);
    for (i = m + 1; i < n; ++i) {
      if (sgn(h(i, m - 1)) == 0) continue;
      u = h(i, m - 1) * inv;
      for (std::size_t j = m - 1; j < n; ++j) {
        if (sgn(h(m, j)) == 0) continue;
        mpq_mul(tmp.get_mpq_t(), u.get_mpq_t(), h(m, j).get_mpq_t());
        h(i, j) -= tmp;
      }
      for (std::size_t j = 0; j < n; ++j) {
        if (sgn(h(j, i)) == 0) continue;
        mpq_mul(tmp.get_mpq_t(), u.get_mpq_t(), h(j, i).get_mpq_t());
        h(j, m) += tmp;
      }
    }
  }
  // p_m = (x - h_mm) p_{m-1} - sum_i (prod of subdiagonal) h_{m-i,m} p_{m-i-1}
  std::vector<std::vector<mpq_class>> polys(n + 1);
  polys[0] = {mpq_class(1)};
  for (std::size_t m = 1; m <= n; ++m) {
    std::vector<mpq_class> next(m + 1);
    const auto& prev = polys[m - 1];
    for (std::size_t d = 0; d < prev.size(); ++d) {
      next[d + 1] += prev[d];
      next[d] -= h(m - 1, m - 1) * prev[d];
    }
    mpq_class t = 1;
    for (std::size_t i = 1; i < m; ++i) {
      t *= h(m - i, m - i - 1);
      if (sgn(t) == 0) break;
      mpq_class c = t * h(m - i - 1, m - 1);
      if (sgn(c) == 0) continue;
      const auto& lower = polys[m - i - 1];
      for (std::size_t d = 0; d < lower.size(); ++d) next[d] -= c * lower[d];
    }
    polys[m] = std::move(next);
  }
  return polys[n];
}

namespace detail {

/// Primes just below 2^62, produced on demand.
inline std::uint64_t word_prime(std::size_t i) {
  static std::mutex mutex;
  static std::vector<std::uint64_t> primes;
  std::lock_guard<std::mutex> lock(mutex);
  std::uint64_t candidate = primes.empty() ? (std::uint64_t{1} << 62) : primes.back();
  while (primes.size() <= i) {
    candidate -= 1;
    if (is_prime(candidate)) primes.push_back(candidate);
  }
  return primes[i];
}

/// Montgomery arithmetic modulo an odd P < 2^62, with R = 2^64.
struct Montgomery {
  std::uint64_t P, neg_inv, r2;

  explicit Montgomery(std::uint64_t modulus) : P(modulus) {
    std::uint64_t inv = 1;
    for (int i = 0; i < 6; ++i) inv *= 2 - P * inv;  // Newton iteration for P^-1 mod 2^64
    neg_inv = ~inv + 1;
    const unsigned __int128 r = (static_cast<unsigned __int128>(1) << 64) % P;
    r2 = static_cast<std::uint64_t>(r * r % P);
  }

  std::uint64_t reduce(unsigned __int128 t) const {
    const std::uint64_t m = static_cast<std::uint64_t>(t) * neg_inv;
    const std::uint64_t out = static_cast<std::uint64_t>((t + static_cast<unsigned __int128>(m) * P) >> 64);
    return out >= P ? out - P : out;
  }
  std::uint64_t mul(std::uint64_t a, std::uint64_t b) const { return reduce(static_cast<unsigned __int128>(a) * b); }
  std::uint64_t to(std::uint64_t a) const { return mul(a, r2); }
  std::uint64_t from(std::uint64_t a) const { return reduce(a); }
  std::uint64_t add(std::uint64_t a, std::uint64_t b) const { return addmod(a, b, P); }
  std::uint64_t sub(std::uint64_t a, std::uint64_t b) const { return submod(a, b, P); }
  std::uint64_t inverse(std::uint64_t a) const { return to(invmod(from(a), P)); }
};

/// Characteristic polynomial over F_P (P odd, below 2^62) of the matrix h
/// (row-major, entries reduced mod P), via Hessenberg reduction. Ascending
/// coefficients.
inline std::vector<std::uint64_t> charpoly_mod(std::vector<std::uint64_t> h, std::size_t n, std::uint64_t P) {
  const Montgomery mg(P);
  for (auto& e : h) e = mg.to(e);
  auto at = [&](std::size_t i, std::size_t j) -> std::uint64_t& { return h[i * n + j]; };
  for (std::size_t m = 1; m + 1 < n; ++m) {
    std::size_t i = m;
    while (i < n && at(i, m - 1) == 0) ++i;
    if (i == n) continue;
    if (i != m) {
      for (std::size_t j = m - 1; j < n; ++j) std::swap(at(i, j), at(m, j));
      for (std::size_t j = 0; j < n; ++j) std::swap(at(j, i), at(j, m));
    }
    const std::uint64_t inv = mg.inverse(at(m, m - 1));
    for (i = m + 1; i < n; ++i) {
      if (at(i, m - 1) == 0) continue;
      const std::uint64_t u = mg.mul(at(i, m - 1), inv);
      for (std::size_t j = m - 1; j < n; ++j)
        if (at(m, j) != 0) at(i, j) = mg.sub(at(i, j), mg.mul(u, at(m, j)));
      for (std::size_t j = 0; j < n; ++j)
        if (at(j, i) != 0) at(j, m) = mg.add(at(j, m), mg.mul(u, at(j, i)));
    }
  }
  const std::uint64_t one = mg.to(1);
  std::vector<std::vector<std::uint64_t>> polys(n + 1);
  polys[0] = {one};
  for (std::size_t m = 1; m <= n; ++m) {
    std::vector<std::uint64_t> next(m + 1, 0);
    const auto& prev = polys[m - 1];
    const std::uint64_t diag = at(m - 1, m - 1);
    for (std::size_t d = 0; d < prev.size(); ++d) {
      next[d + 1] = mg.add(next[d + 1], prev[d]);
      next[d] = mg.sub(next[d], mg.mul(diag, prev[d]));
    }
    std::uint64_t t = one;
    for (std::size_t i = 1; i < m; ++i) {
      t = mg.mul(t, at(m - i, m - i - 1));
      if (t == 0) break;
      const std::uint64_t c = mg.mul(t, at(m - i - 1, m - 1));
      if (c == 0) continue;
      const auto& lower = polys[m - i - 1];
      for (std::size_t d = 0; d < lower.size(); ++d) next[d] = mg.sub(next[d], mg.mul(c, lower[d]));
    }
    polys[m] = std::move(next);
  }
  for (auto& c : polys[n]) c = mg.from(c);
  return polys[n];
}

}  // namespace detail

/// Monic characteristic polynomial det(xI - m) with integer coefficients,
/// computed modulo word-sized primes and lifted by CRT. The number of primes
/// comes from the bound C(n, i) r^i on the x^(n-i) coefficient, where r is
/// the smaller of the row-sum and column-sum norms of m. Throws InternalError
/// if a coefficient is not an integer.
inline IntPoly charpoly(const RatMatrix& m) {
  if (!m.is_square()) throw std::invalid_argument("charpoly: matrix must be square");
  const std::size_t n = m.rows();
  if (n == 0) return IntPoly::from_longs({1});
  mpz_class den = 1;
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = 0; j < n; ++j) mpz_lcm(den.get_mpz_t(), den.get_mpz_t(), m(i, j).get_den_mpz_t());
  std::vector<mpz_class> scaled(n * n);
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = 0; j < n; ++j) scaled[i * n + j] = m(i, j).get_num() * (den / m(i, j).get_den());

  mpq_class row_norm = 0, col_norm = 0;
  for (std::size_t i = 0; i < n; ++i) {
    mpq_class r = 0, c = 0;
    for (std::size_t j = 0; j < n; ++j) {
      r += abs(m(i, j));
      c += abs(m(j, i));
    }
    row_norm = std::max(row_norm, r);
    col_norm = std::max(col_norm, c);
  }
  const mpq_class norm = std::min(row_norm, col_norm);
  mpz_class radius;
  mpz_cdiv_q(radius.get_mpz_t(), norm.get_num_mpz_t(), norm.get_den_mpz_t());
  std::vector<mpz_class> bound(n + 1);
  mpz_class max_bound = 1, power = 1, binom;
  for (std::size_t i = 0; i <= n; ++i) {
    mpz_bin_uiui(binom.get_mpz_t(), n, i);
    bound[n - i] = binom * power;
    max_bound = std::max(max_bound, bound[n - i]);
    power *= radius;
  }
  const mpz_class needed = 2 * max_bound + 1;

  auto image = [&](std::uint64_t P) -> std::optional<std::vector<std::uint64_t>> {
    const std::uint64_t den_mod = mpz_fdiv_ui(den.get_mpz_t(), P);
    if (den_mod == 0) return std::nullopt;
    const std::uint64_t inv = invmod(den_mod, P);
    std::vector<std::uint64_t> h(n * n);
    for (std::size_t e = 0; e < n * n; ++e)
      h[e] = sgn(scaled[e]) == 0 ? 0 : mulmod(mpz_fdiv_ui(scaled[e].get_mpz_t(), P), inv, P);
    return detail::charpoly_mod(std::move(h), n, P);
  };

  std::vector<mpz_class> residue(n + 1);
  mpz_class modulus = 1;
  std::size_t next = 0;
  while (modulus < needed) {
    const std::uint64_t P = detail::word_prime(next++);
    auto img = image(P);
    if (!img) continue;
    const std::uint64_t mod_inv = invmod(mpz_fdiv_ui(modulus.get_mpz_t(), P), P);
    for (std::size_t d = 0; d <= n; ++d) {
      const std::uint64_t cur = mpz_fdiv_ui(residue[d].get_mpz_t(), P);
      const std::uint64_t t = mulmod(submod((*img)[d], cur, P), mod_inv, P);
      residue[d] += modulus * mpz_class(static_cast<unsigned long>(t));
    }
    modulus *= mpz_class(static_cast<unsigned long>(P));
  }
  const mpz_class half = modulus / 2;
  for (std::size_t d = 0; d <= n; ++d) {
    if (residue[d] > half) residue[d] -= modulus;
    if (abs(residue[d]) > bound[d])
      throw InternalError("charpoly: coefficient of x^" + std::to_string(d) + " is not integral");
  }
  // Two further primes as a consistency check.
  for (int checked = 0; checked < 2;) {
    const std::uint64_t P = detail::word_prime(next++);
    auto img = image(P);
    if (!img) continue;
    ++checked;
    for (std::size_t d = 0; d <= n; ++d) {
      mpz_class r;
      mpz_fdiv_r_ui(r.get_mpz_t(), residue[d].get_mpz_t(), P);
      if (r != mpz_class(static_cast<unsigned long>((*img)[d])))
        throw InternalError("charpoly: coefficient of x^" + std::to_string(d) + " is not integral");
    }
  }
  return IntPoly(std::move(residue));
}

/// Sparse row vector over Q: (column, value) pairs sorted by column, no zeros.
using SparseRow = std::vector<std::pair<std::uint32_t, mpq_class>>;

/// Incremental sparse Gaussian elimination. Rows are added one at a time and
/// reduced against the current pivots; finish() back-substitutes so every
/// pivot row involves only its pivot column and non-pivot columns.
class SparseRowReducer {
 public:
  explicit SparseRowReducer(std::size_t cols) : cols_(cols), pivot_of_(cols, npos) {}

  void add_row(SparseRow row) {
    while (!row.empty()) {
      const std::uint32_t lead = row.front().first;
      const std::size_t p = pivot_of_[lead];
      if (p == npos) break;
      const mpq_class factor = row.front().second;
      row = axpy(row, factor, rows_[p]);
    }
    if (row.empty()) return;
    const mpq_class inv = 1 / row.front().second;
    for (auto& [c, v] : row) v *= inv;
    pivot_of_[row.front().first] = rows_.size();
    rows_.push_back(std::move(row));
  }

  void finish() {
    std::vector<std::size_t> order(rows_.size());
    for (std::size_t i = 0; i < order.size(); ++i) order[i] = i;
    std::sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) { return rows_[a].front().first > rows_[b].front().first; });
    for (std::size_t idx : order) {
      SparseRow& row = rows_[idx];
      std::vector<std::uint32_t> to_clear;
      for (std::size_t e = 1; e < row.size(); ++e)
        if (pivot_of_[row[e].first] != npos) to_clear.push_back(row[e].first);
      for (std::uint32_t col : to_clear) {
        auto it = std::lower_bound(row.begin(), row.end(), col, [](const auto& entry, std::uint32_t c) { return entry.first < c; });
        if (it == row.end() || it->first != col) continue;
        const mpq_class factor = it->second;
        row = axpy(row, factor, rows_[pivot_of_[col]]);
      }
    }
  }

  std::size_t cols() const { return cols_; }
  std::size_t rank() const { return rows_.size(); }
  bool is_pivot(std::size_t col) const { return pivot_of_[col] != npos; }
  /// Pivot row whose leading column is col (after finish(): col + free columns only).
  const SparseRow& pivot_row(std::size_t col) const { return rows_[pivot_of_[col]]; }

  /// row - factor * other, merged.
  static SparseRow axpy(const SparseRow& row, const mpq_class& factor, const SparseRow& other) {
    SparseRow out;
    out.reserve(row.size() + other.size());
    std::size_t i = 0, j = 0;
    mpq_class tmp;
    while (i < row.size() || j < other.size()) {
      if (j == other.size() || (i < row.size() && row[i].first < other[j].first)) {
        out.push_back(row[i++]);
      } else if (i == row.size() || other[j].first < row[i].first) {
        tmp = -factor * other[j].second;
        out.emplace_back(other[j].first, tmp);
        ++j;
      } else {
        tmp = row[i].second - factor * other[j].second;
        if (sgn(tmp) != 0) out.emplace_back(row[i].first, tmp);
        ++i;
        ++j;
      }
    }
    return out;
  }

 private:
  static constexpr std::size_t npos = static_cast<std::size_t>(-1);
  std::size_t cols_;
  std::vector<std::size_t> pivot_of_;
  std::vector<SparseRow> rows_;
};

}  // namespace heckesplit
