#pragma once

// Mayer-Vietoris for a two-set coarse cover, computed on the closeness
// complexes of a partition adapted to the cover, and the vanishing check
// above the asymptotic dimension.

#include "coarsecoh/cech.hpp"
#include "coarsecoh/cover.hpp"
#include "coarsecoh/finab.hpp"

#include <set>
#include <string>
#include <vector>

namespace coarsecoh {

struct MVDegreeRow {
  int degree = 0;
  FinAbGroup hx, h1, h2, h12;
  Integer imageAlpha = 1; ///< |im alpha*| on H^q(X)
  Integer imageBeta = 1;  ///< |im beta*| on H^q(U1) + H^q(U2)
  Integer kernelBeta = 1;
  Integer connecting = 1; ///< |im d| in H^{q+1}(X), from the order count
  bool exactAtMiddle = false;
  bool balanced = false; ///< |H^{q+1}(X)| = |im d| |im alpha*_{q+1}|
};

struct MVReport {
  CoverVerdict cover;
  std::vector<std::size_t> in1, in2, in12; ///< blocks inside U1, U2, both
  ClosenessComplex closeness;
  SimplicialComplex k1, k2, k12;
  bool commutes = false;       ///< alpha and beta are chain maps
  bool betaAlphaZero = false;  ///< exact integer identity
  bool alphaInjective = false; ///< every simplex lies over U1 or U2
  bool betaSurjective = false; ///< cochains on the intersection extend by zero
  bool injectiveStart = false; ///< |im alpha*_0| = |H^0(X)|
  std::vector<MVDegreeRow> rows;

  bool exact() const {
    if (!(commutes && betaAlphaZero && alphaInjective && betaSurjective && injectiveStart)) return false;
    for (const auto &r : rows)
      if (!r.exactAtMiddle || !r.balanced) return false;
    return true;
  }
};

namespace detail {

/// Restriction C^q(K) -> C^q(L) for a subcomplex L of K.
inline IntMatrix restriction(const SimplicialComplex &k, const SimplicialComplex &l, std::size_t q) {
  IntMatrix r(l.count(q), k.count(q));
  for (std::size_t i = 0; i < l.count(q); ++i) r(i, k.indexOf(l.byDim[q][i])) = 1;
  return r;
}

inline IntMatrix vcat(const IntMatrix &a, const IntMatrix &b) {
  return IntMatrix::hcat(a.transpose(), b.transpose()).transpose();
}

inline IntMatrix blockDiag(const IntMatrix &a, const IntMatrix &b) {
  IntMatrix m(a.rows() + b.rows(), a.cols() + b.cols());
  for (std::size_t i = 0; i < a.rows(); ++i)
    for (std::size_t j = 0; j < a.cols(); ++j) m(i, j) = a(i, j);
  for (std::size_t i = 0; i < b.rows(); ++i)
    for (std::size_t j = 0; j < b.cols(); ++j) m(a.rows() + i, a.cols() + j) = b(i, j);
  return m;
}

inline IntMatrix negate(IntMatrix m) {
  for (std::size_t i = 0; i < m.rows(); ++i)
    for (std::size_t j = 0; j < m.cols(); ++j) m(i, j) = -m(i, j);
  return m;
}

inline CochainComplex directSum(const CochainComplex &a, const CochainComplex &b) {
  CochainComplex c;
  for (std::size_t q = 0; q < a.dims.size(); ++q) c.dims.push_back(a.dims[q] + b.dims[q]);
  for (std::size_t q = 0; q < a.diffs.size(); ++q) c.diffs.push_back(blockDiag(a.diffs[q], b.diffs[q]));
  return c;
}

inline bool nonempty(const Mask &m) {
  return std::any_of(m.begin(), m.end(), [](std::uint8_t v) { return v != 0; });
}

/// |(f(Z^q) + B) / B| over Z/m, where Z^q is the cocycle lattice of `src`
/// and B the coboundaries of `dst`.
inline Integer inducedImageOrder(const IntMatrix &f, const CochainComplex &src, const CochainComplex &dst, int q,
                                 std::int64_t m) {
  IntMatrix z = cocycleLattice(src, q, m);
  IntMatrix b = dst.diff(q - 1);
  IntMatrix fz = z.cols() == 0 ? IntMatrix(f.rows(), 0) : f * z;
  return subgroupOrder(IntMatrix::hcat(fz, b), m) / subgroupOrder(b, m);
}

inline Integer cohomologyOrder(const CochainComplex &c, int q, std::int64_t m) {
  return subgroupOrder(cocycleLattice(c, q, m), m) / subgroupOrder(c.diff(q - 1), m);
}

} // namespace detail

/// The six-term sequences of X = U1 u U2 over A, one row per degree.
/// alpha(phi) = (phi|U1, phi|U2), beta(phi1, phi2) = phi2|U12 - phi1|U12.
/// Every block must lie inside or outside each U_i.
inline MVReport mayerVietoris(const SubsetExpr &u1, const SubsetExpr &u2, const std::vector<SubsetExpr> &blocks,
                              const CoarseContext &ctx, const FinAbGroup &a, int dimCap = -1) {
  MVReport rep;
  rep.cover = isCoarseCover(SubsetExpr::all(), {u1, u2}, ctx);
  if (rep.cover.isCover != Tri::Yes)
    fail(ErrorKind::CoverNotVerified, "{" + u1.text() + ", " + u2.text() + "} is " +
                                          std::string(toString(rep.cover.isCover)) + " as a coarse cover");

  std::set<std::size_t> s1, s2, s12;
  for (std::size_t i = 0; i < blocks.size(); ++i) {
    bool inside[2], outside[2];
    const SubsetExpr *us[2] = {&u1, &u2};
    for (int k = 0; k < 2; ++k) {
      inside[k] = !detail::nonempty(ctx.mask(blocks[i] & !*us[k]));
      outside[k] = !detail::nonempty(ctx.mask(blocks[i] & *us[k]));
      require(inside[k] || outside[k], ErrorKind::InvalidArgument,
              "block " + blocks[i].text() + " straddles " + us[k]->text());
    }
    if (inside[0]) s1.insert(i);
    if (inside[1]) s2.insert(i);
    if (inside[0] && inside[1]) s12.insert(i);
  }
  rep.in1.assign(s1.begin(), s1.end());
  rep.in2.assign(s2.begin(), s2.end());
  rep.in12.assign(s12.begin(), s12.end());

  rep.closeness = buildClosenessComplex(blocks, ctx, dimCap);
  const auto &kx = rep.closeness.complex;
  rep.k1 = kx.restrictTo(s1);
  rep.k2 = kx.restrictTo(s2);
  rep.k12 = kx.restrictTo(s12);

  const int top = rep.closeness.dimCap;
  const int determined = rep.closeness.complete() ? top : std::max(0, top - 1);
  CochainComplex cx = simplicialCochainComplex(kx, top), c1 = simplicialCochainComplex(rep.k1, top),
                 c2 = simplicialCochainComplex(rep.k2, top), c12 = simplicialCochainComplex(rep.k12, top);
  CochainComplex c1c2 = detail::directSum(c1, c2);

  std::vector<IntMatrix> alpha, beta;
  rep.alphaInjective = rep.betaSurjective = rep.commutes = rep.betaAlphaZero = true;
  for (int q = 0; q <= top; ++q) {
    auto uq = static_cast<std::size_t>(q);
    alpha.push_back(detail::vcat(detail::restriction(kx, rep.k1, uq), detail::restriction(kx, rep.k2, uq)));
    beta.push_back(IntMatrix::hcat(detail::negate(detail::restriction(rep.k1, rep.k12, uq)),
                                   detail::restriction(rep.k2, rep.k12, uq)));
    rep.betaAlphaZero = rep.betaAlphaZero && (beta.back() * alpha.back()).isZero();
    for (const auto &s : kx.byDim.size() > uq ? kx.byDim[uq] : std::vector<Simplex>{})
      rep.alphaInjective = rep.alphaInjective && (rep.k1.contains(s) || rep.k2.contains(s));
    // Extension by zero into U2 is a section of beta.
    IntMatrix ext = detail::vcat(IntMatrix(c1.dim(q), c12.dim(q)), detail::restriction(rep.k2, rep.k12, uq).transpose());
    rep.betaSurjective = rep.betaSurjective && beta.back() * ext == IntMatrix::identity(c12.dim(q));
  }
  for (int q = 0; q < top; ++q) {
    auto uq = static_cast<std::size_t>(q);
    rep.commutes = rep.commutes && c1c2.diff(q) * alpha[uq] == alpha[uq + 1] * cx.diff(q) &&
                   c12.diff(q) * beta[uq] == beta[uq + 1] * c1c2.diff(q);
  }

  auto hx = cohomologyWithCoefficients(cx, a), h1 = cohomologyWithCoefficients(c1, a),
       h2 = cohomologyWithCoefficients(c2, a), h12 = cohomologyWithCoefficients(c12, a);
  rep.injectiveStart = true;
  for (int q = 0; q <= determined; ++q) {
    MVDegreeRow row;
    row.degree = q;
    auto uq = static_cast<std::size_t>(q);
    row.hx = hx.at(uq);
    row.h1 = h1.at(uq);
    row.h2 = h2.at(uq);
    row.h12 = h12.at(uq);
    row.exactAtMiddle = row.balanced = true;
    for (auto m : a.factors()) {
      Integer ia = detail::inducedImageOrder(alpha[uq], cx, c1c2, q, m);
      Integer ib = detail::inducedImageOrder(beta[uq], c1c2, c12, q, m);
      Integer kb = detail::cohomologyOrder(c1c2, q, m) / ib;
      Integer conn = detail::cohomologyOrder(c12, q, m) / ib;
      row.imageAlpha *= ia;
      row.imageBeta *= ib;
      row.kernelBeta *= kb;
      row.connecting *= conn;
      row.exactAtMiddle = row.exactAtMiddle && ia == kb;
      if (q == 0) rep.injectiveStart = rep.injectiveStart && ia == detail::cohomologyOrder(cx, 0, m);
      if (q + 1 <= determined) {
        Integer next = detail::inducedImageOrder(alpha[uq + 1], cx, c1c2, q + 1, m);
        row.balanced = row.balanced && detail::cohomologyOrder(cx, q + 1, m) == conn * next;
      }
    }
    rep.rows.push_back(std::move(row));
  }
  return rep;
}

struct VanishingRow {
  std::size_t blocks = 0;
  int determinedDegree = 0;      ///< highest degree the closeness complex pins down
  std::vector<int> nonzeroDegrees; ///< degrees >= qMin with H^q != 0
};

struct VanishingReport {
  int qMin = 0;
  std::vector<VanishingRow> rows;
  bool vanishes() const {
    for (const auto &r : rows)
      if (!r.nonzeroDegrees.empty()) return false;
    return true;
  }
};

/// H^q = 0 for every q >= qMin on every partition of the family.
inline VanishingReport vanishingCheck(const std::vector<std::vector<SubsetExpr>> &family, const CoarseContext &ctx,
                                      const FinAbGroup &a, int qMin) {
  VanishingReport rep;
  rep.qMin = qMin;
  for (const auto &blocks : family) {
    auto pc = coarseCohomologyViaPartition(blocks, ctx, a);
    VanishingRow row;
    row.blocks = blocks.size();
    row.determinedDegree = static_cast<int>(pc.result.groups.size()) - 1;
    for (std::size_t q = static_cast<std::size_t>(qMin); q < pc.result.groups.size(); ++q)
      if (!pc.result.groups[q].trivial()) row.nonzeroDegrees.push_back(static_cast<int>(q));
    rep.rows.push_back(std::move(row));
  }
  return rep;
}

} // namespace coarsecoh
