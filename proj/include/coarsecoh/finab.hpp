#pragma once

// Finite abelian groups, exact integer matrices, Smith normal form, and
// cohomology of integer cochain complexes with finite coefficients. The
// brute-force routine is an independent oracle for small instances.

#include "coarsecoh/error.hpp"

#include <gmpxx.h>

#include <algorithm>
#include <cstdint>
#include <map>
#include <numeric>
#include <optional>
#include <string>
#include <vector>

namespace coarsecoh {

using Integer = mpz_class;

namespace detail {

inline std::vector<std::pair<std::int64_t, int>> factorize(std::int64_t n) {
  std::vector<std::pair<std::int64_t, int>> out;
  for (std::int64_t p = 2; p * p <= n; ++p) {
    int e = 0;
    while (n % p == 0) {
      n /= p;
      ++e;
    }
    if (e) out.emplace_back(p, e);
  }
  if (n > 1) out.emplace_back(n, 1);
  return out;
}

inline std::int64_t ipow(std::int64_t b, int e) {
  std::int64_t r = 1;
  while (e-- > 0) r *= b;
  return r;
}

inline std::int64_t mod(std::int64_t a, std::int64_t m) {
  std::int64_t r = a % m;
  return r < 0 ? r + m : r;
}

} // namespace detail

/// Element of a FinAbGroup: one residue per invariant factor.
struct GroupElem {
  std::vector<std::int64_t> r;
  bool operator==(const GroupElem &) const = default;
  auto operator<=>(const GroupElem &) const = default;
};

/// Z/m_1 + ... + Z/m_k with m_1 | m_2 | ... | m_k and every m_i >= 2.
class FinAbGroup {
public:
  FinAbGroup() = default;

  explicit FinAbGroup(std::vector<std::int64_t> invariantFactors) : factors_(std::move(invariantFactors)) {
    for (std::size_t i = 0; i < factors_.size(); ++i) {
      require(factors_[i] >= 2, ErrorKind::InvalidArgument, "invariant factors must be >= 2");
      if (i > 0)
        require(factors_[i] % factors_[i - 1] == 0, ErrorKind::InvalidArgument,
                "invariant factors must form a divisibility chain");
    }
  }

  static FinAbGroup cyclic(std::int64_t m) { return m == 1 ? FinAbGroup() : FinAbGroup({m}); }

  /// Normalizes an arbitrary direct sum of cyclic groups Z/n_i (n_i >= 1).
  static FinAbGroup fromCyclicOrders(const std::vector<std::int64_t> &orders) {
    std::map<std::int64_t, std::vector<int>> byPrime;
    for (auto n : orders) {
      require(n >= 1, ErrorKind::InvalidArgument, "cyclic orders must be >= 1");
      for (auto [p, e] : detail::factorize(n)) byPrime[p].push_back(e);
    }
    std::size_t len = 0;
    for (auto &[p, es] : byPrime) {
      std::sort(es.begin(), es.end(), std::greater<>());
      len = std::max(len, es.size());
    }
    // The i-th largest invariant factor collects the i-th largest prime powers.
    std::vector<std::int64_t> factors(len, 1);
    for (const auto &[p, es] : byPrime)
      for (std::size_t i = 0; i < es.size(); ++i) factors[i] *= detail::ipow(p, es[i]);
    std::reverse(factors.begin(), factors.end());
    return FinAbGroup(std::move(factors));
  }

  const std::vector<std::int64_t> &factors() const { return factors_; }
  std::size_t rank() const { return factors_.size(); }
  bool trivial() const { return factors_.empty(); }

  Integer order() const {
    Integer n = 1;
    for (auto m : factors_) n *= m;
    return n;
  }

  /// |A| as a machine integer; fails if it does not fit.
  std::int64_t smallOrder() const {
    Integer n = order();
    require(n.fits_slong_p(), ErrorKind::InstanceTooLarge, "group order exceeds 64 bits");
    return n.get_si();
  }

  GroupElem zero() const { return GroupElem{std::vector<std::int64_t>(rank(), 0)}; }
  GroupElem one() const { return GroupElem{std::vector<std::int64_t>(rank(), 1)}; }

  GroupElem element(std::vector<std::int64_t> residues) const {
    require(residues.size() == rank(), ErrorKind::InvalidArgument, "residue vector has the wrong length");
    for (std::size_t i = 0; i < rank(); ++i) residues[i] = detail::mod(residues[i], factors_[i]);
    return GroupElem{std::move(residues)};
  }

  GroupElem add(const GroupElem &a, const GroupElem &b) const {
    GroupElem out = a;
    for (std::size_t i = 0; i < rank(); ++i) out.r[i] = detail::mod(a.r[i] + b.r[i], factors_[i]);
    return out;
  }

  GroupElem neg(const GroupElem &a) const {
    GroupElem out = a;
    for (std::size_t i = 0; i < rank(); ++i) out.r[i] = detail::mod(-a.r[i], factors_[i]);
    return out;
  }

  GroupElem scale(std::int64_t k, const GroupElem &a) const {
    GroupElem out = a;
    for (std::size_t i = 0; i < rank(); ++i) out.r[i] = detail::mod((k % factors_[i]) * a.r[i], factors_[i]);
    return out;
  }

  /// Product in the componentwise ring Z/m_1 x ... x Z/m_k.
  GroupElem mul(const GroupElem &a, const GroupElem &b) const {
    GroupElem out = a;
    for (std::size_t i = 0; i < rank(); ++i) out.r[i] = detail::mod(a.r[i] * b.r[i], factors_[i]);
    return out;
  }

  bool isZero(const GroupElem &a) const {
    return std::all_of(a.r.begin(), a.r.end(), [](std::int64_t x) { return x == 0; });
  }

  bool operator==(const FinAbGroup &) const = default;

  std::string toString() const {
    if (factors_.empty()) return "0";
    std::string s;
    for (std::size_t i = 0; i < factors_.size(); ++i) s += (i ? "+" : "") + std::string("Z/") + std::to_string(factors_[i]);
    return s;
  }

private:
  std::vector<std::int64_t> factors_;
};

/// Dense matrix of arbitrary-precision integers.
class IntMatrix {
public:
  IntMatrix() = default;
  IntMatrix(std::size_t rows, std::size_t cols) : rows_(rows), cols_(cols), data_(rows * cols, 0) {}

  static IntMatrix identity(std::size_t n) {
    IntMatrix m(n, n);
    for (std::size_t i = 0; i < n; ++i) m(i, i) = 1;
    return m;
  }

  static IntMatrix fromRows(const std::vector<std::vector<long>> &rows) {
    IntMatrix m(rows.size(), rows.empty() ? 0 : rows[0].size());
    for (std::size_t i = 0; i < m.rows_; ++i) {
      require(rows[i].size() == m.cols_, ErrorKind::InvalidArgument, "ragged matrix rows");
      for (std::size_t j = 0; j < m.cols_; ++j) m(i, j) = rows[i][j];
    }
    return m;
  }

  std::size_t rows() const { return rows_; }
  std::size_t cols() const { return cols_; }
  Integer &operator()(std::size_t i, std::size_t j) { return data_[i * cols_ + j]; }
  const Integer &operator()(std::size_t i, std::size_t j) const { return data_[i * cols_ + j]; }

  bool isZero() const {
    return std::all_of(data_.begin(), data_.end(), [](const Integer &x) { return sgn(x) == 0; });
  }

  bool operator==(const IntMatrix &o) const { return rows_ == o.rows_ && cols_ == o.cols_ && data_ == o.data_; }

  IntMatrix transpose() const {
    IntMatrix t(cols_, rows_);
    for (std::size_t i = 0; i < rows_; ++i)
      for (std::size_t j = 0; j < cols_; ++j) t(j, i) = (*this)(i, j);
    return t;
  }

  friend IntMatrix operator*(const IntMatrix &a, const IntMatrix &b) {
    require(a.cols_ == b.rows_, ErrorKind::InvalidArgument, "matrix shapes do not compose");
    IntMatrix c(a.rows_, b.cols_);
    for (std::size_t i = 0; i < a.rows_; ++i)
      for (std::size_t k = 0; k < a.cols_; ++k) {
        const Integer &x = a(i, k);
        if (sgn(x) == 0) continue;
        for (std::size_t j = 0; j < b.cols_; ++j)
          if (sgn(b(k, j)) != 0) c(i, j) += x * b(k, j);
      }
    return c;
  }

  /// Horizontal concatenation [a | b].
  static IntMatrix hcat(const IntMatrix &a, const IntMatrix &b) {
    require(a.rows_ == b.rows_, ErrorKind::InvalidArgument, "hcat needs equal row counts");
    IntMatrix c(a.rows_, a.cols_ + b.cols_);
    for (std::size_t i = 0; i < a.rows_; ++i) {
      for (std::size_t j = 0; j < a.cols_; ++j) c(i, j) = a(i, j);
      for (std::size_t j = 0; j < b.cols_; ++j) c(i, a.cols_ + j) = b(i, j);
    }
    return c;
  }

  /// |det| for a square matrix, by Bareiss elimination.
  Integer absDeterminant() const {
    require(rows_ == cols_, ErrorKind::InvalidArgument, "determinant needs a square matrix");
    IntMatrix m = *this;
    const std::size_t n = rows_;
    Integer prev = 1;
    for (std::size_t k = 0; k < n; ++k) {
      std::size_t p = k;
      while (p < n && sgn(m(p, k)) == 0) ++p;
      if (p == n) return 0;
      if (p != k)
        for (std::size_t j = 0; j < n; ++j) std::swap(m(k, j), m(p, j));
      for (std::size_t i = k + 1; i < n; ++i) {
        for (std::size_t j = k + 1; j < n; ++j) {
          m(i, j) = m(i, j) * m(k, k) - m(i, k) * m(k, j);
          mpz_divexact(m(i, j).get_mpz_t(), m(i, j).get_mpz_t(), prev.get_mpz_t());
        }
        m(i, k) = 0;
      }
      prev = m(k, k);
    }
    Integer d = n == 0 ? Integer(1) : m(n - 1, n - 1);
    return abs(d);
  }

private:
  std::size_t rows_ = 0, cols_ = 0;
  std::vector<Integer> data_;
};

/// U * M * V = S with U, V unimodular and S diagonal, d_1 | d_2 | ... .
struct SmithForm {
  IntMatrix U, S, V;
  IntMatrix Uinv, Vinv;
  std::vector<Integer> diagonal; ///< length min(rows, cols); trailing zeros
  std::size_t rank = 0;
};

inline SmithForm smithNormalForm(const IntMatrix &m) {
  const std::size_t rows = m.rows(), cols = m.cols();
  SmithForm f;
  f.S = m;
  f.U = f.Uinv = IntMatrix::identity(rows);
  f.V = f.Vinv = IntMatrix::identity(cols);
  IntMatrix &a = f.S;

  // Row op: row_i += q * row_j, mirrored on U (rows) and Uinv (inverse, columns).
  auto rowAdd = [&](std::size_t i, std::size_t j, const Integer &q) {
    for (std::size_t c = 0; c < cols; ++c)
      if (sgn(a(j, c))) a(i, c) += q * a(j, c);
    for (std::size_t c = 0; c < rows; ++c)
      if (sgn(f.U(j, c))) f.U(i, c) += q * f.U(j, c);
    for (std::size_t r = 0; r < rows; ++r)
      if (sgn(f.Uinv(r, i))) f.Uinv(r, j) -= q * f.Uinv(r, i);
  };
  auto rowSwap = [&](std::size_t i, std::size_t j) {
    if (i == j) return;
    for (std::size_t c = 0; c < cols; ++c) std::swap(a(i, c), a(j, c));
    for (std::size_t c = 0; c < rows; ++c) std::swap(f.U(i, c), f.U(j, c));
    for (std::size_t r = 0; r < rows; ++r) std::swap(f.Uinv(r, i), f.Uinv(r, j));
  };
  auto rowNeg = [&](std::size_t i) {
    for (std::size_t c = 0; c < cols; ++c) a(i, c) = -a(i, c);
    for (std::size_t c = 0; c < rows; ++c) f.U(i, c) = -f.U(i, c);
    for (std::size_t r = 0; r < rows; ++r) f.Uinv(r, i) = -f.Uinv(r, i);
  };
  // Column op: col_i += q * col_j, mirrored on V (columns) and Vinv (inverse, rows).
  auto colAdd = [&](std::size_t i, std::size_t j, const Integer &q) {
    for (std::size_t r = 0; r < rows; ++r)
      if (sgn(a(r, j))) a(r, i) += q * a(r, j);
    for (std::size_t r = 0; r < cols; ++r)
      if (sgn(f.V(r, j))) f.V(r, i) += q * f.V(r, j);
    for (std::size_t c = 0; c < cols; ++c)
      if (sgn(f.Vinv(i, c))) f.Vinv(j, c) -= q * f.Vinv(i, c);
  };
  auto colSwap = [&](std::size_t i, std::size_t j) {
    if (i == j) return;
    for (std::size_t r = 0; r < rows; ++r) std::swap(a(r, i), a(r, j));
    for (std::size_t r = 0; r < cols; ++r) std::swap(f.V(r, i), f.V(r, j));
    for (std::size_t c = 0; c < cols; ++c) std::swap(f.Vinv(i, c), f.Vinv(j, c));
  };

  const std::size_t n = std::min(rows, cols);
  for (std::size_t t = 0; t < n; ++t) {
    for (;;) {
      // Smallest nonzero entry of the trailing block becomes the pivot.
      std::size_t pi = rows, pj = cols;
      for (std::size_t i = t; i < rows; ++i)
        for (std::size_t j = t; j < cols; ++j)
          if (sgn(a(i, j)) && (pi == rows || mpz_cmpabs(a(i, j).get_mpz_t(), a(pi, pj).get_mpz_t()) < 0)) {
            pi = i;
            pj = j;
          }
      if (pi == rows) goto done;
      rowSwap(t, pi);
      colSwap(t, pj);
      bool clean = true;
      Integer q;
      for (std::size_t i = t + 1; i < rows; ++i) {
        if (!sgn(a(i, t))) continue;
        mpz_fdiv_q(q.get_mpz_t(), a(i, t).get_mpz_t(), a(t, t).get_mpz_t());
        rowAdd(i, t, -q);
        if (sgn(a(i, t))) clean = false;
      }
      for (std::size_t j = t + 1; j < cols; ++j) {
        if (!sgn(a(t, j))) continue;
        mpz_fdiv_q(q.get_mpz_t(), a(t, j).get_mpz_t(), a(t, t).get_mpz_t());
        colAdd(j, t, -q);
        if (sgn(a(t, j))) clean = false;
      }
      if (!clean) continue;
      // Enforce divisibility of the remaining block by the pivot.
      bool divisible = true;
      for (std::size_t i = t + 1; i < rows && divisible; ++i)
        for (std::size_t j = t + 1; j < cols; ++j)
          if (!mpz_divisible_p(a(i, j).get_mpz_t(), a(t, t).get_mpz_t())) {
            rowAdd(t, i, 1);
            divisible = false;
            break;
          }
      if (divisible) break;
    }
    if (sgn(a(t, t)) < 0) rowNeg(t);
  }
done:
  f.diagonal.resize(n);
  for (std::size_t t = 0; t < n; ++t) {
    f.diagonal[t] = a(t, t);
    if (sgn(a(t, t))) ++f.rank;
  }
  return f;
}

/// Integer cochain complex C^0 -> C^1 -> ...; diffs[q] has shape dims[q+1] x dims[q].
struct CochainComplex {
  std::vector<std::size_t> dims;
  std::vector<IntMatrix> diffs;

  void validate() const {
    require(diffs.size() + 1 == dims.size() || (dims.empty() && diffs.empty()), ErrorKind::InvalidArgument,
            "a complex with k+1 cochain groups needs k differentials");
    for (std::size_t q = 0; q < diffs.size(); ++q)
      require(diffs[q].rows() == dims[q + 1] && diffs[q].cols() == dims[q], ErrorKind::InvalidArgument,
              "differential " + std::to_string(q) + " has the wrong shape");
    for (std::size_t q = 0; q + 1 < diffs.size(); ++q)
      if (!(diffs[q + 1] * diffs[q]).isZero())
        fail(ErrorKind::NotAComplex, "D_" + std::to_string(q + 1) + " * D_" + std::to_string(q) + " != 0");
  }

  /// D_q, or the zero map when q is outside the stored range.
  IntMatrix diff(int q) const {
    if (q >= 0 && static_cast<std::size_t>(q) < diffs.size()) return diffs[static_cast<std::size_t>(q)];
    std::size_t src = q >= 0 && static_cast<std::size_t>(q) < dims.size() ? dims[static_cast<std::size_t>(q)] : 0;
    std::size_t dst = q + 1 >= 0 && static_cast<std::size_t>(q + 1) < dims.size()
                          ? dims[static_cast<std::size_t>(q + 1)]
                          : 0;
    return IntMatrix(dst, src);
  }

  std::size_t dim(int q) const {
    return q >= 0 && static_cast<std::size_t>(q) < dims.size() ? dims[static_cast<std::size_t>(q)] : 0;
  }
};

/// One cyclic summand of H^q with a representing cocycle.
struct Generator {
  std::int64_t order = 0;
  std::vector<GroupElem> cochain;
};

struct CohomologyResult {
  enum class Route { SmithUct, BruteForce, Ends };
  Route route = Route::SmithUct;
  std::vector<FinAbGroup> groups; ///< index = degree
  std::vector<std::vector<Generator>> generators;
  bool infiniteDegreeZero = false; ///< H^0 is an infinite direct sum

  const FinAbGroup &at(std::size_t q) const {
    static const FinAbGroup trivial;
    return q < groups.size() ? groups[q] : trivial;
  }
};

inline std::string_view toString(CohomologyResult::Route r) {
  switch (r) {
  case CohomologyResult::Route::SmithUct: return "snf-uct";
  case CohomologyResult::Route::BruteForce: return "brute-force";
  case CohomologyResult::Route::Ends: return "ends";
  }
  return "?";
}

namespace detail {

/// Basis (columns) of the lattice spanned by the columns of g, which must
/// have full row rank.
inline IntMatrix latticeBasis(const IntMatrix &g) {
  SmithForm f = smithNormalForm(g);
  const std::size_t n = g.rows();
  require(f.rank == n, ErrorKind::InvalidArgument, "lattice is not full rank");
  IntMatrix b(n, n);
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = 0; j < n; ++j) b(i, j) = f.Uinv(i, j) * f.diagonal[j];
  return b;
}

/// Solves b * y = x for integer y, where b is a full-rank square basis given
/// through its Smith form pieces.
inline std::vector<Integer> solveInBasis(const SmithForm &bf, const std::vector<Integer> &x) {
  // b = Uinv * diag(d) * Vinv  =>  y = V * diag(d)^-1 * U * x
  const std::size_t n = x.size();
  std::vector<Integer> ux(n, 0);
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t k = 0; k < n; ++k)
      if (sgn(bf.U(i, k)) && sgn(x[k])) ux[i] += bf.U(i, k) * x[k];
  for (std::size_t i = 0; i < n; ++i) {
    require(mpz_divisible_p(ux[i].get_mpz_t(), bf.diagonal[i].get_mpz_t()), ErrorKind::InvalidArgument,
            "vector outside the lattice");
    mpz_divexact(ux[i].get_mpz_t(), ux[i].get_mpz_t(), bf.diagonal[i].get_mpz_t());
  }
  std::vector<Integer> y(n, 0);
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t k = 0; k < n; ++k)
      if (sgn(bf.V(i, k)) && sgn(ux[k])) y[i] += bf.V(i, k) * ux[k];
  return y;
}

} // namespace detail

/// Cocycles of C^q with Z/m coefficients as a lattice in Z^n (n = dim C^q),
/// containing m Z^n; returned as a square basis matrix.
inline IntMatrix cocycleLattice(const CochainComplex &c, int q, std::int64_t m) {
  const IntMatrix d = c.diff(q);
  const std::size_t n = c.dim(q), r = d.rows();
  if (n == 0) return IntMatrix(0, 0);
  // Kernel of [D | m I] over Z, projected to the first n coordinates.
  IntMatrix mi(r, r);
  for (std::size_t i = 0; i < r; ++i) mi(i, i) = m;
  SmithForm f = smithNormalForm(IntMatrix::hcat(d, mi));
  const std::size_t total = n + r;
  IntMatrix gens(n, total - f.rank + n);
  std::size_t col = 0;
  for (std::size_t j = f.rank; j < total; ++j, ++col)
    for (std::size_t i = 0; i < n; ++i) gens(i, col) = f.V(i, j);
  for (std::size_t i = 0; i < n; ++i, ++col) gens(i, col) = m;
  return detail::latticeBasis(gens);
}

/// Order of the subgroup of (Z/m)^n generated by the columns of g.
inline Integer subgroupOrder(const IntMatrix &g, std::int64_t m) {
  const std::size_t n = g.rows();
  if (n == 0) return 1;
  IntMatrix mi(n, n);
  for (std::size_t i = 0; i < n; ++i) mi(i, i) = m;
  SmithForm f = smithNormalForm(IntMatrix::hcat(g, mi));
  Integer index = 1;
  for (std::size_t i = 0; i < n; ++i) index *= f.diagonal[i];
  Integer total;
  mpz_pow_ui(total.get_mpz_t(), Integer(m).get_mpz_t(), n);
  return total / index;
}

/// |im(D tensor A)| for A = sum Z/m_i.
inline Integer imageOrder(const IntMatrix &d, const FinAbGroup &a) {
  Integer out = 1;
  SmithForm f = smithNormalForm(d);
  for (auto m : a.factors())
    for (const auto &x : f.diagonal)
      if (sgn(x)) {
        Integer g;
        mpz_gcd(g.get_mpz_t(), x.get_mpz_t(), Integer(m).get_mpz_t());
        out *= Integer(m) / g;
      }
  return out;
}

/// |ker(D tensor A)| for A = sum Z/m_i.
inline Integer kernelOrder(const IntMatrix &d, const FinAbGroup &a) {
  Integer total;
  mpz_pow_ui(total.get_mpz_t(), a.order().get_mpz_t(), d.cols());
  return total / imageOrder(d, a);
}

struct CohomologyOptions {
  bool generators = false;
  int maxDegree = -1; ///< -1: every degree of the complex
};

namespace detail {

inline std::vector<Generator> generatorsModM(const CochainComplex &c, int q, std::int64_t m, std::size_t component,
                                             const FinAbGroup &a) {
  std::vector<Generator> out;
  const std::size_t n = c.dim(q);
  if (n == 0) return out;
  IntMatrix basis = cocycleLattice(c, q, m);
  SmithForm bf = smithNormalForm(basis);
  const IntMatrix prev = c.diff(q - 1);
  // Relations: image of D_{q-1} plus m Z^n, written in cocycle coordinates.
  IntMatrix rel(n, prev.cols() + n);
  auto put = [&](std::size_t col, const std::vector<Integer> &x) {
    auto y = solveInBasis(bf, x);
    for (std::size_t i = 0; i < n; ++i) rel(i, col) = y[i];
  };
  for (std::size_t j = 0; j < prev.cols(); ++j) {
    std::vector<Integer> x(n);
    for (std::size_t i = 0; i < n; ++i) x[i] = prev(i, j);
    put(j, x);
  }
  for (std::size_t j = 0; j < n; ++j) {
    std::vector<Integer> x(n, 0);
    x[j] = m;
    put(prev.cols() + j, x);
  }
  SmithForm rf = smithNormalForm(rel);
  for (std::size_t i = 0; i < n; ++i) {
    const Integer &d = rf.diagonal[i];
    if (d == 1) continue;
    Generator g;
    g.order = d.get_si();
    for (std::size_t k = 0; k < n; ++k) {
      Integer v = 0;
      for (std::size_t l = 0; l < n; ++l) v += basis(k, l) * rf.Uinv(l, i);
      Integer r;
      mpz_fdiv_r(r.get_mpz_t(), v.get_mpz_t(), Integer(m).get_mpz_t());
      GroupElem e = a.zero();
      e.r[component] = r.get_si();
      g.cochain.push_back(std::move(e));
    }
    out.push_back(std::move(g));
  }
  return out;
}

} // namespace detail

/// H^q(C; A) through Smith forms of the integer differentials and the
/// universal coefficient decomposition.
inline CohomologyResult cohomologyWithCoefficients(const CochainComplex &c, const FinAbGroup &a,
                                                   CohomologyOptions opts = {}) {
  c.validate();
  CohomologyResult res;
  res.route = CohomologyResult::Route::SmithUct;
  const int top = opts.maxDegree >= 0 ? opts.maxDegree : static_cast<int>(c.dims.size()) - 1;
  std::vector<std::optional<SmithForm>> forms(static_cast<std::size_t>(top + 2));
  auto form = [&](int q) -> const SmithForm & {
    auto &slot = forms[static_cast<std::size_t>(q + 1)];
    if (!slot) slot = smithNormalForm(c.diff(q));
    return *slot;
  };
  for (int q = 0; q <= top; ++q) {
    const SmithForm &in = form(q - 1), &out = form(q);
    const std::size_t free = c.dim(q) - in.rank - out.rank;
    std::vector<std::int64_t> orders;
    for (auto m : a.factors()) {
      for (std::size_t i = 0; i < free; ++i) orders.push_back(m);
      for (const auto *f : {&in, &out})
        for (const auto &d : f->diagonal)
          if (sgn(d) && d != 1) {
            Integer g;
            mpz_gcd(g.get_mpz_t(), d.get_mpz_t(), Integer(m).get_mpz_t());
            orders.push_back(g.get_si());
          }
    }
    res.groups.push_back(FinAbGroup::fromCyclicOrders(orders));
    if (opts.generators) {
      std::vector<Generator> gens;
      for (std::size_t k = 0; k < a.rank(); ++k) {
        auto part = detail::generatorsModM(c, q, a.factors()[k], k, a);
        gens.insert(gens.end(), part.begin(), part.end());
      }
      res.generators.push_back(std::move(gens));
    }
  }
  return res;
}

inline constexpr std::uint64_t kBruteForceCap = 1'000'000;

namespace detail {

/// Cochains in A^n encoded as flat residue vectors (n blocks of rank(A)).
struct CochainSpace {
  std::size_t n;
  const FinAbGroup &a;

  std::uint64_t size() const {
    std::uint64_t s = 1;
    for (std::size_t i = 0; i < n; ++i)
      for (auto m : a.factors()) s *= static_cast<std::uint64_t>(m);
    return s;
  }

  std::vector<std::int64_t> decode(std::uint64_t code) const {
    std::vector<std::int64_t> x(n * a.rank());
    for (std::size_t i = 0; i < x.size(); ++i) {
      auto m = static_cast<std::uint64_t>(a.factors()[i % a.rank()]);
      x[i] = static_cast<std::int64_t>(code % m);
      code /= m;
    }
    return x;
  }

  std::uint64_t encode(const std::vector<std::int64_t> &x) const {
    std::uint64_t code = 0;
    for (std::size_t i = x.size(); i-- > 0;) {
      auto m = static_cast<std::uint64_t>(a.factors()[i % a.rank()]);
      code = code * m + static_cast<std::uint64_t>(x[i]);
    }
    return code;
  }
};

inline std::vector<std::int64_t> applyMod(const IntMatrix &d, const std::vector<std::int64_t> &x,
                                          const FinAbGroup &a) {
  const std::size_t k = a.rank();
  std::vector<std::int64_t> y(d.rows() * k, 0);
  for (std::size_t i = 0; i < d.rows(); ++i)
    for (std::size_t j = 0; j < d.cols(); ++j) {
      if (!sgn(d(i, j))) continue;
      for (std::size_t c = 0; c < k; ++c) {
        std::int64_t m = a.factors()[c];
        Integer v = d(i, j) % m;
        y[i * k + c] = mod(y[i * k + c] + v.get_si() * x[j * k + c], m);
      }
    }
  return y;
}

} // namespace detail

/// Enumerates all cochains: kernels and images as literal sets, then reads the
/// quotient's invariant factors off element-order counts.
inline CohomologyResult bruteForceCohomology(const CochainComplex &c, const FinAbGroup &a, int maxDegree = -1) {
  c.validate();
  CohomologyResult res;
  res.route = CohomologyResult::Route::BruteForce;
  const int top = maxDegree >= 0 ? maxDegree : static_cast<int>(c.dims.size()) - 1;
  for (int q = 0; q <= top; ++q) {
    if (a.trivial()) {
      res.groups.emplace_back();
      continue;
    }
    detail::CochainSpace here{c.dim(q), a}, below{c.dim(q - 1), a};
    for (const auto *s : {&here, &below}) {
      long double approx = 1;
      for (std::size_t i = 0; i < s->n; ++i) approx *= static_cast<long double>(a.smallOrder());
      if (approx > kBruteForceCap)
        fail(ErrorKind::InstanceTooLarge, "|A|^" + std::to_string(s->n) + " exceeds the brute-force cap");
    }
    const IntMatrix dq = c.diff(q), dprev = c.diff(q - 1);
    std::vector<std::uint8_t> inImage(here.size(), 0);
    std::uint64_t imageSize = 0;
    for (std::uint64_t y = 0; y < below.size(); ++y) {
      auto code = here.encode(detail::applyMod(dprev, below.decode(y), a));
      if (!inImage[code]) {
        inImage[code] = 1;
        ++imageSize;
      }
    }
    std::vector<std::uint64_t> kernel;
    for (std::uint64_t x = 0; x < here.size(); ++x) {
      auto img = detail::applyMod(dq, here.decode(x), a);
      if (std::all_of(img.begin(), img.end(), [](std::int64_t v) { return v == 0; })) kernel.push_back(x);
    }
    const std::uint64_t hOrder = kernel.size() / imageSize;
    std::vector<std::int64_t> orders;
    for (auto [p, maxExp] : detail::factorize(static_cast<std::int64_t>(hOrder))) {
      // rank[j] = log_p |H[p^j]|, from elements x of K with p^j x in I.
      std::vector<int> logs{0};
      for (int j = 1;; ++j) {
        std::int64_t pj = detail::ipow(p, j);
        std::uint64_t count = 0;
        for (auto x : kernel) {
          auto v = here.decode(x);
          for (std::size_t i = 0; i < v.size(); ++i) v[i] = detail::mod(v[i] * pj, a.factors()[i % a.rank()]);
          if (inImage[here.encode(v)]) ++count;
        }
        std::uint64_t torsion = count / imageSize;
        int l = 0;
        while (torsion > 1) {
          torsion /= static_cast<std::uint64_t>(p);
          ++l;
        }
        if (l == logs.back()) break;
        logs.push_back(l);
      }
      // #{i : e_i >= j} = logs[j] - logs[j-1]; rebuild exponents.
      std::vector<int> atLeast;
      for (std::size_t j = 1; j < logs.size(); ++j) atLeast.push_back(logs[j] - logs[j - 1]);
      const int parts = atLeast.empty() ? 0 : atLeast[0];
      for (int i = 0; i < parts; ++i) {
        int e = 0;
        for (int cnt : atLeast)
          if (cnt > i) ++e;
        orders.push_back(detail::ipow(p, e));
      }
      (void)maxExp;
    }
    res.groups.push_back(FinAbGroup::fromCyclicOrders(orders));
  }
  return res;
}

} // namespace coarsecoh
