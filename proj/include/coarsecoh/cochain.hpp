#pragma once

// Blocky cochains: functions on block-index tuples of a finite partition.
// The algebra (differential, cup product, pullback, chain homotopy) runs on
// the tables; points only enter through block labels and the tuple oracle.
// Window cochains further down are point-level degree-1 cochains used by the
// ray and tree primitives.

#include "coarsecoh/cover.hpp"
#include "coarsecoh/finab.hpp"
#include "coarsecoh/maps.hpp"
#include "coarsecoh/parallel.hpp"

#include <map>
#include <optional>
#include <random>
#include <set>
#include <string>
#include <vector>

namespace coarsecoh {

struct Partition {
  std::vector<SubsetExpr> blocks;

  std::size_t size() const { return blocks.size(); }
};

/// Block of every window point; fails unless the blocks tile the window.
inline std::vector<std::uint32_t> blockLabels(const Partition &p, const CoarseContext &ctx) {
  const auto &index = ctx.index();
  std::vector<std::uint32_t> label(index.size(), UINT32_MAX);
  for (std::size_t b = 0; b < p.size(); ++b) {
    const Mask &m = ctx.mask(p.blocks[b]);
    for (std::size_t i = 0; i < index.size(); ++i) {
      if (!m[i]) continue;
      require(label[i] == UINT32_MAX, ErrorKind::InvalidArgument,
              "blocks overlap at " + toString(index.point(i)));
      label[i] = static_cast<std::uint32_t>(b);
    }
  }
  for (std::size_t i = 0; i < index.size(); ++i)
    require(label[i] != UINT32_MAX, ErrorKind::InvalidArgument, "blocks miss " + toString(index.point(i)));
  return label;
}

/// {a^-1(A_i)} on the domain of a.
inline Partition preimage(const CoarseMap &a, const Partition &p) {
  Partition out;
  for (const auto &b : p.blocks) {
    auto codomain = a.codomain();
    out.blocks.push_back(SubsetExpr::predicate("pre(" + a.name() + ";" + b.text() + ")",
                                               [a, b, codomain](const Point &x) { return contains(b, codomain, a(x)); }));
  }
  return out;
}

/// Common refinement; block index sum_k i_k * prod_{l>k} n_l.
inline Partition refine(const std::vector<Partition> &ps) {
  Partition out;
  out.blocks.push_back(SubsetExpr::all());
  for (const auto &p : ps) {
    std::vector<SubsetExpr> next;
    for (const auto &x : out.blocks)
      for (const auto &y : p.blocks) next.push_back(x.kind() == SubsetExpr::Kind::All ? y : x & y);
    out.blocks = std::move(next);
  }
  return out;
}

class BlockyCochain {
public:
  using Tuple = std::vector<std::size_t>;

  BlockyCochain() = default;
  BlockyCochain(int degree, std::size_t blocks, FinAbGroup group)
      : degree_(degree), blocks_(blocks), group_(std::move(group)) {
    require(degree >= 0, ErrorKind::InvalidArgument, "cochain degree must be >= 0");
    require(blocks >= 1, ErrorKind::InvalidArgument, "cochain needs at least one block");
    std::size_t size = 1;
    for (int i = 0; i <= degree; ++i) {
      require(size <= (std::size_t{1} << 26) / blocks, ErrorKind::InstanceTooLarge, "cochain table too large");
      size *= blocks;
    }
    values_.assign(size, group_.zero());
  }

  int degree() const { return degree_; }
  std::size_t blocks() const { return blocks_; }
  const FinAbGroup &group() const { return group_; }
  std::size_t size() const { return values_.size(); }

  std::size_t indexOf(const Tuple &t) const {
    require(t.size() == static_cast<std::size_t>(degree_) + 1, ErrorKind::InvalidArgument, "tuple has the wrong length");
    std::size_t k = 0;
    for (auto i : t) {
      require(i < blocks_, ErrorKind::InvalidArgument, "block index out of range");
      k = k * blocks_ + i;
    }
    return k;
  }

  Tuple tupleOf(std::size_t k) const {
    Tuple t(static_cast<std::size_t>(degree_) + 1);
    for (std::size_t i = t.size(); i-- > 0;) {
      t[i] = k % blocks_;
      k /= blocks_;
    }
    return t;
  }

  const GroupElem &at(std::size_t k) const { return values_[k]; }
  const GroupElem &at(const Tuple &t) const { return values_[indexOf(t)]; }
  void set(std::size_t k, GroupElem v) { values_[k] = std::move(v); }
  void set(const Tuple &t, const GroupElem &v) { values_[indexOf(t)] = group_.element(v.r); }

  bool isZero() const {
    return std::all_of(values_.begin(), values_.end(), [&](const GroupElem &v) { return group_.isZero(v); });
  }

  std::vector<Tuple> support() const {
    std::vector<Tuple> out;
    for (std::size_t k = 0; k < values_.size(); ++k)
      if (!group_.isZero(values_[k])) out.push_back(tupleOf(k));
    return out;
  }

  bool operator==(const BlockyCochain &o) const {
    return degree_ == o.degree_ && blocks_ == o.blocks_ && group_ == o.group_ && values_ == o.values_;
  }

  BlockyCochain operator+(const BlockyCochain &o) const {
    sameShape(o);
    BlockyCochain out = *this;
    for (std::size_t k = 0; k < values_.size(); ++k) out.values_[k] = group_.add(values_[k], o.values_[k]);
    return out;
  }

  BlockyCochain operator-() const {
    BlockyCochain out = *this;
    for (auto &v : out.values_) v = group_.neg(v);
    return out;
  }

  BlockyCochain operator-(const BlockyCochain &o) const { return *this + (-o); }

  static BlockyCochain constant(std::size_t blocks, const FinAbGroup &a, const GroupElem &v) {
    BlockyCochain out(0, blocks, a);
    for (std::size_t k = 0; k < blocks; ++k) out.set(k, v);
    return out;
  }

  template <class Rng>
  static BlockyCochain random(int degree, std::size_t blocks, const FinAbGroup &a, Rng &rng) {
    BlockyCochain out(degree, blocks, a);
    for (auto &v : out.values_)
      for (std::size_t i = 0; i < a.rank(); ++i)
        v.r[i] = std::uniform_int_distribution<std::int64_t>(0, a.factors()[i] - 1)(rng);
    return out;
  }

private:
  void sameShape(const BlockyCochain &o) const {
    require(degree_ == o.degree_ && blocks_ == o.blocks_, ErrorKind::InvalidArgument, "cochain shapes differ");
    require(group_ == o.group_, ErrorKind::CoefficientMismatch, "coefficient groups differ");
  }

  int degree_ = 0;
  std::size_t blocks_ = 1;
  FinAbGroup group_;
  std::vector<GroupElem> values_;
};

/// (d phi)(i_0..i_{q+1}) = sum_k (-1)^k phi(i_0..^i_k..i_{q+1})
inline BlockyCochain differential(const BlockyCochain &phi) {
  const auto &a = phi.group();
  BlockyCochain out(phi.degree() + 1, phi.blocks(), a);
  for (std::size_t k = 0; k < out.size(); ++k) {
    auto t = out.tupleOf(k);
    GroupElem sum = a.zero();
    for (std::size_t drop = 0; drop < t.size(); ++drop) {
      auto face = t;
      face.erase(face.begin() + static_cast<std::ptrdiff_t>(drop));
      const auto &v = phi.at(face);
      sum = drop % 2 ? a.add(sum, a.neg(v)) : a.add(sum, v);
    }
    out.set(k, std::move(sum));
  }
  return out;
}

/// (phi v psi)(i_0..i_{p+q}) = phi(i_0..i_p) psi(i_p..i_{p+q}), in the
/// componentwise ring on the invariant factors.
inline BlockyCochain cupProduct(const BlockyCochain &phi, const BlockyCochain &psi) {
  require(phi.blocks() == psi.blocks(), ErrorKind::InvalidArgument, "cup product needs one partition");
  require(phi.group() == psi.group(), ErrorKind::CoefficientMismatch, "cup product needs one coefficient ring");
  const auto &a = phi.group();
  const auto p = static_cast<std::size_t>(phi.degree());
  BlockyCochain out(phi.degree() + psi.degree(), phi.blocks(), a);
  for (std::size_t k = 0; k < out.size(); ++k) {
    auto t = out.tupleOf(k);
    BlockyCochain::Tuple left(t.begin(), t.begin() + static_cast<std::ptrdiff_t>(p) + 1);
    BlockyCochain::Tuple right(t.begin() + static_cast<std::ptrdiff_t>(p), t.end());
    out.set(k, a.mul(phi.at(left), psi.at(right)));
  }
  return out;
}

/// Pullback along a map of block indices: the new block k sits inside the
/// old block blockMap[k].
inline BlockyCochain pullbackTable(const BlockyCochain &phi, const std::vector<std::size_t> &blockMap) {
  BlockyCochain out(phi.degree(), blockMap.size(), phi.group());
  for (std::size_t k = 0; k < out.size(); ++k) {
    auto t = out.tupleOf(k);
    for (auto &i : t) i = blockMap[i];
    out.set(k, phi.at(t));
  }
  return out;
}

/// (h phi)(k_0..k_{q-1}) = sum_i (-1)^i phi(a(k_0)..a(k_i), b(k_i)..b(k_{q-1}))
/// where a, b send a refined block to its blocks under the two maps.
inline BlockyCochain homotopyTable(const BlockyCochain &phi, const std::vector<std::size_t> &a,
                                   const std::vector<std::size_t> &b) {
  require(phi.degree() >= 1, ErrorKind::InvalidArgument, "chain homotopy needs degree >= 1");
  require(a.size() == b.size(), ErrorKind::InvalidArgument, "block maps differ in size");
  const auto &g = phi.group();
  BlockyCochain out(phi.degree() - 1, a.size(), g);
  BlockyCochain::Tuple arg(static_cast<std::size_t>(phi.degree()) + 1);
  for (std::size_t k = 0; k < out.size(); ++k) {
    auto t = out.tupleOf(k);
    GroupElem sum = g.zero();
    for (std::size_t i = 0; i < t.size(); ++i) {
      for (std::size_t j = 0; j <= i; ++j) arg[j] = a[t[j]];
      for (std::size_t j = i; j < t.size(); ++j) arg[j + 1] = b[t[j]];
      const auto &v = phi.at(arg);
      sum = i % 2 ? g.add(sum, g.neg(v)) : g.add(sum, v);
    }
    out.set(k, std::move(sum));
  }
  return out;
}

/// Block maps of the refinement {a^-1(A_i) & b^-1(A_j)}: block i*n+j.
inline std::pair<std::vector<std::size_t>, std::vector<std::size_t>> pairBlockMaps(std::size_t n) {
  std::vector<std::size_t> a(n * n), b(n * n);
  for (std::size_t k = 0; k < n * n; ++k) {
    a[k] = k / n;
    b[k] = k % n;
  }
  return {a, b};
}

// ---------------------------------------------------------------------------
// Support certification.

struct SupportCertificate {
  std::vector<ScaleRow> rows;            ///< per scale: largest bound over support tuples
  Tri cocontrolled = Tri::Yes;
  std::vector<BlockyCochain::Tuple> witnesses; ///< support tuples that are not cocontrolled
  std::vector<BlockyCochain::Tuple> inconclusive;
  std::size_t supportSize = 0;
};

inline SupportCertificate supportCocontrolled(const BlockyCochain &phi, const Partition &p, const CoarseContext &ctx) {
  require(phi.blocks() == p.size(), ErrorKind::InvalidArgument, "cochain and partition disagree on the block count");
  SupportCertificate cert;
  for (Dist r : ctx.sweep().scales) {
    ScaleRow row;
    row.scale = r;
    row.cert.verdict = BoundednessCertificate::Verdict::Bounded;
    row.cert.windowRadius = ctx.space().windowRadius();
    cert.rows.push_back(row);
  }
  // Tuples with the same block set share a verdict.
  std::map<std::vector<std::size_t>, TupleControlVerdict> seen;
  for (const auto &t : phi.support()) {
    ++cert.supportSize;
    std::vector<std::size_t> set(t.begin(), t.end());
    std::sort(set.begin(), set.end());
    set.erase(std::unique(set.begin(), set.end()), set.end());
    auto it = seen.find(set);
    if (it == seen.end()) {
      std::vector<SubsetExpr> blocks;
      for (auto b : set) blocks.push_back(p.blocks[b]);
      it = seen.emplace(set, isCocontrolledTuple(blocks, ctx)).first;
    }
    const auto &v = it->second;
    if (v.cocontrolled == Tri::No) cert.witnesses.push_back(t);
    if (v.cocontrolled == Tri::Inconclusive) cert.inconclusive.push_back(t);
    for (std::size_t s = 0; s < cert.rows.size(); ++s) {
      auto &row = cert.rows[s].cert;
      const auto &tc = v.rows[s].cert;
      if (tc.bound >= row.bound) {
        row.bound = tc.bound;
        row.witnesses = tc.witnesses;
      }
      if (tc.unbounded()) row.verdict = BoundednessCertificate::Verdict::Unbounded;
      else if (!tc.bounded() && !row.unbounded()) row.verdict = BoundednessCertificate::Verdict::Inconclusive;
    }
  }
  cert.cocontrolled = aggregate(cert.rows);
  return cert;
}

// ---------------------------------------------------------------------------
// Non-coboundary certification in degree 1.

struct NonCoboundaryReport {
  enum class Verdict { NonCoboundary, Coboundary, NotACocycle, Inconclusive };
  Verdict verdict = Verdict::Inconclusive;
  SupportCertificate cocycle;                    ///< support certificate of d phi
  std::vector<BlockyCochain::Tuple> checkedTuples; ///< certified non-cocontrolled pairs
  std::vector<BlockyCochain::Tuple> inconclusiveTuples;
  std::uint64_t candidates = 0;
  std::uint64_t eliminated = 0;
  /// For each candidate psi (mixed-radix index), the first pair where
  /// phi - d psi is nonzero, or an empty tuple when psi survives.
  std::vector<BlockyCochain::Tuple> trace;
  std::optional<BlockyCochain> witness;
};

inline std::string_view toString(NonCoboundaryReport::Verdict v) {
  switch (v) {
  case NonCoboundaryReport::Verdict::NonCoboundary: return "non-coboundary";
  case NonCoboundaryReport::Verdict::Coboundary: return "coboundary";
  case NonCoboundaryReport::Verdict::NotACocycle: return "not-a-cocycle";
  case NonCoboundaryReport::Verdict::Inconclusive: return "inconclusive";
  }
  return "?";
}

/// All elements of a finite abelian group in mixed-radix order.
inline std::vector<GroupElem> elements(const FinAbGroup &a, std::uint64_t cap = 1u << 20) {
  const auto order = static_cast<std::uint64_t>(a.smallOrder());
  require(order <= cap, ErrorKind::EnumerationCapExceeded, "group too large to enumerate");
  std::vector<GroupElem> out;
  for (std::uint64_t k = 0; k < order; ++k) {
    GroupElem g = a.zero();
    std::uint64_t rest = k;
    for (std::size_t i = a.rank(); i-- > 0;) {
      auto m = static_cast<std::uint64_t>(a.factors()[i]);
      g.r[i] = static_cast<std::int64_t>(rest % m);
      rest /= m;
    }
    out.push_back(std::move(g));
  }
  return out;
}

/// Enumerates every blocky 0-cochain psi and checks phi = d psi on the
/// certified non-cocontrolled pairs; the rest may be absorbed by a
/// cocontrolled correction.
inline NonCoboundaryReport certifyNonCoboundary(const BlockyCochain &phi, const Partition &p,
                                                const CoarseContext &ctx, std::uint64_t cap = 10'000'000) {
  require(phi.degree() == 1, ErrorKind::InvalidArgument, "non-coboundary certification is for degree 1");
  const std::size_t n = phi.blocks();
  const auto &a = phi.group();
  NonCoboundaryReport rep;
  rep.cocycle = supportCocontrolled(differential(phi), p, ctx);
  if (rep.cocycle.cocontrolled == Tri::No) {
    rep.verdict = NonCoboundaryReport::Verdict::NotACocycle;
    return rep;
  }
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = 0; j < n; ++j) {
      auto v = isCocontrolledTuple({p.blocks[i], p.blocks[j]}, ctx).cocontrolled;
      if (v == Tri::No) rep.checkedTuples.push_back({i, j});
      if (v == Tri::Inconclusive) rep.inconclusiveTuples.push_back({i, j});
    }

  const auto elems = elements(a);
  const auto order = static_cast<std::uint64_t>(elems.size());
  long double total = 1;
  for (std::size_t i = 0; i < n; ++i) total *= static_cast<long double>(order);
  require(total <= static_cast<long double>(cap), ErrorKind::EnumerationCapExceeded,
          "|A|^n = " + std::to_string(static_cast<double>(total)) + " exceeds the enumeration cap");
  rep.candidates = static_cast<std::uint64_t>(total);
  rep.trace.assign(rep.candidates, {});

  std::vector<std::uint8_t> survives(rep.candidates, 0);
  parallelFor(rep.candidates, ctx.sweep().jobs, [&](std::size_t k) {
    std::vector<std::size_t> psi(n);
    std::uint64_t rest = k;
    for (std::size_t i = n; i-- > 0;) {
      psi[i] = static_cast<std::size_t>(rest % order);
      rest /= order;
    }
    for (const auto &t : rep.checkedTuples) {
      // (d psi)(i, j) = psi(j) - psi(i)
      GroupElem dpsi = a.add(elems[psi[t[1]]], a.neg(elems[psi[t[0]]]));
      if (phi.at(t) != dpsi) {
        rep.trace[k] = t;
        return;
      }
    }
    survives[k] = 1;
  });
  for (std::uint64_t k = 0; k < rep.candidates; ++k) {
    if (!survives[k]) {
      ++rep.eliminated;
      continue;
    }
    if (!rep.witness) {
      BlockyCochain psi(0, n, a);
      std::uint64_t rest = k;
      for (std::size_t i = n; i-- > 0;) {
        psi.set(i, elems[rest % order]);
        rest /= order;
      }
      rep.witness = std::move(psi);
    }
  }
  if (rep.witness) rep.verdict = NonCoboundaryReport::Verdict::Coboundary;
  else if (rep.cocycle.cocontrolled == Tri::Yes && rep.inconclusiveTuples.empty())
    rep.verdict = NonCoboundaryReport::Verdict::NonCoboundary;
  else rep.verdict = NonCoboundaryReport::Verdict::Inconclusive;
  return rep;
}

// ---------------------------------------------------------------------------
// Point-level maps: pullback and chain homotopy over refined partitions.

struct PulledBack {
  Partition partition;
  BlockyCochain cochain;
};

/// a^* phi lives on {a^-1(A_i)} and keeps the table of phi.
inline PulledBack pullback(const CoarseMap &a, const Partition &p, const BlockyCochain &phi) {
  return {preimage(a, p), phi};
}

struct HomotopyIdentityReport {
  MapCheckReport closeness;
  Partition partition; ///< {a^-1(A_i) & b^-1(A_j)}, block i*n+j
  BlockyCochain h;     ///< h phi
  bool holds = false;  ///< d h phi + h d phi == b^* phi - a^* phi on every tuple
  std::size_t tuples = 0;
  std::optional<BlockyCochain::Tuple> mismatch;
};

/// The closeness chain homotopy between a^* and b^*; refuses maps that are
/// not close.
inline HomotopyIdentityReport chainHomotopy(const CoarseMap &a, const CoarseMap &b, const Partition &p,
                                            const BlockyCochain &phi, const Sweep &sweep = {}) {
  HomotopyIdentityReport rep;
  rep.closeness = checkClose(a, b, sweep);
  if (rep.closeness.close != Tri::Yes)
    fail(ErrorKind::MapsNotClose, rep.closeness.map + " are not certified close");
  const std::size_t n = p.size();
  rep.partition = refine({preimage(a, p), preimage(b, p)});
  auto [am, bm] = pairBlockMaps(n);
  rep.h = homotopyTable(phi, am, bm);
  BlockyCochain lhs = differential(rep.h) + homotopyTable(differential(phi), am, bm);
  BlockyCochain rhs = pullbackTable(phi, bm) - pullbackTable(phi, am);
  rep.tuples = lhs.size();
  for (std::size_t k = 0; k < lhs.size() && !rep.mismatch; ++k)
    if (lhs.at(k) != rhs.at(k)) rep.mismatch = lhs.tupleOf(k);
  rep.holds = !rep.mismatch;
  return rep;
}

// ---------------------------------------------------------------------------
// Point-level degree-1 cochains on a window.

/// Dense table phi(i, j) over window point indices.
class WindowCochain {
public:
  WindowCochain(const WindowIndex &index, FinAbGroup a)
      : index_(&index), group_(std::move(a)), n_(index.size()), k_(group_.rank()), data_(n_ * n_ * k_, 0) {
    require(n_ <= 8192, ErrorKind::InstanceTooLarge, "window too large for a dense 1-cochain");
  }

  const WindowIndex &index() const { return *index_; }
  const FinAbGroup &group() const { return group_; }

  GroupElem at(std::size_t i, std::size_t j) const {
    GroupElem g;
    g.r.assign(data_.begin() + static_cast<std::ptrdiff_t>((i * n_ + j) * k_),
               data_.begin() + static_cast<std::ptrdiff_t>((i * n_ + j + 1) * k_));
    return g;
  }

  bool nonzero(std::size_t i, std::size_t j) const {
    for (std::size_t c = 0; c < k_; ++c)
      if (data_[(i * n_ + j) * k_ + c]) return true;
    return false;
  }

  void set(std::size_t i, std::size_t j, const GroupElem &v) {
    GroupElem g = group_.element(v.r);
    std::copy(g.r.begin(), g.r.end(), data_.begin() + static_cast<std::ptrdiff_t>((i * n_ + j) * k_));
  }

  std::int64_t component(std::size_t i, std::size_t j, std::size_t c) const { return data_[(i * n_ + j) * k_ + c]; }

  /// Raw write of one cyclic component; `v` must already be reduced.
  void setComponent(std::size_t i, std::size_t j, std::size_t c, std::int64_t v) { data_[(i * n_ + j) * k_ + c] = v; }

  /// (d phi)(i, j, l) = phi(j, l) - phi(i, l) + phi(i, j), nonzero test only.
  bool dNonzero(std::size_t i, std::size_t j, std::size_t l) const {
    for (std::size_t c = 0; c < k_; ++c) {
      std::int64_t m = group_.factors()[c];
      std::int64_t v = data_[(j * n_ + l) * k_ + c] - data_[(i * n_ + l) * k_ + c] + data_[(i * n_ + j) * k_ + c];
      if (((v % m) + m) % m) return true;
    }
    return false;
  }

private:
  const WindowIndex *index_;
  FinAbGroup group_;
  std::size_t n_, k_;
  std::vector<std::int64_t> data_;
};

/// Largest norm over support pairs with d(x, y) <= R; -1 if none.
inline Dist supportBound1(const WindowCochain &phi, Dist r, unsigned jobs = 1) {
  const auto &index = phi.index();
  const auto &nb = index.neighbors(r);
  std::vector<Dist> best(index.size(), -1);
  parallelFor(index.size(), jobs, [&](std::size_t i) {
    for (auto j : nb.of(i))
      if (phi.nonzero(i, j)) best[i] = std::max({best[i], index.norm(i), index.norm(j)});
  });
  return *std::max_element(best.begin(), best.end());
}

/// Largest norm over triples with pairwise distances <= R and d phi != 0.
inline Dist supportBoundD(const WindowCochain &phi, Dist r, unsigned jobs = 1) {
  const auto &index = phi.index();
  const auto &nb = index.neighbors(r);
  std::vector<Dist> best(index.size(), -1);
  parallelFor(index.size(), jobs, [&](std::size_t i) {
    for (auto j : nb.of(i))
      for (auto l : nb.of(i)) {
        if (index.distance(j, l) > r) continue;
        Dist m = std::max({index.norm(i), index.norm(j), index.norm(l)});
        if (m > best[i] && phi.dNonzero(i, j, l)) best[i] = m;
      }
  });
  return *std::max_element(best.begin(), best.end());
}

struct PrimitiveReport {
  std::vector<GroupElem> primitive; ///< phi~ at each window point
  std::set<GroupElem> values;       ///< finitely many since A is finite
  std::vector<ScaleRow> dphi;       ///< support of d phi
  std::vector<ScaleRow> remainder;  ///< support of phi - d phi~
  Tri dphiCocontrolled = Tri::Inconclusive;
  Tri remainderCocontrolled = Tri::Inconclusive;
  bool boundHolds = false; ///< remainder bound <= d phi bound at every scale
};

namespace detail {

inline ScaleRow boundRow(Dist scale, Dist bound, const WindowIndex &index, const Sweep &sweep) {
  ScaleRow row;
  row.scale = scale;
  row.cert.bound = std::max<Dist>(bound, 0);
  row.cert.windowRadius = index.space().windowRadius();
  row.cert.verdict = classifyRadius(row.cert.bound, row.cert.windowRadius, sweep);
  return row;
}

} // namespace detail

/// Path-sum primitive from the root: phi~(s) = sum of phi along the unique
/// edge path root = t_0, ..., t_n = s; parent[i] < 0 marks the root.
inline PrimitiveReport pathPrimitive(const WindowCochain &phi, const std::vector<std::int64_t> &parent,
                                     const Sweep &sweep) {
  const auto &index = phi.index();
  const auto &a = phi.group();
  const std::size_t n = index.size();
  PrimitiveReport rep;
  rep.primitive.assign(n, a.zero());
  // Window points come sorted by norm, so parents precede children.
  std::vector<std::uint8_t> done(n, 0);
  for (std::size_t i = 0; i < n; ++i) {
    if (parent[i] >= 0) {
      auto p = static_cast<std::size_t>(parent[i]);
      require(done[p], ErrorKind::InvalidArgument, "parent listed after child");
      rep.primitive[i] = a.add(rep.primitive[p], phi.at(p, i));
    }
    done[i] = 1;
    rep.values.insert(rep.primitive[i]);
  }
  // Remainder phi + phi~(x) - phi~(y), evaluated on near pairs only.
  auto remainderBound = [&](Dist r) {
    const auto &nb = index.neighbors(r);
    std::vector<Dist> best(n, -1);
    parallelFor(n, sweep.jobs, [&](std::size_t i) {
      for (auto j : nb.of(i))
        for (std::size_t c = 0; c < a.rank(); ++c) {
          std::int64_t v = phi.component(i, j, c) + rep.primitive[i].r[c] - rep.primitive[j].r[c];
          if (detail::mod(v, a.factors()[c])) {
            best[i] = std::max({best[i], index.norm(i), index.norm(j)});
            break;
          }
        }
    });
    return *std::max_element(best.begin(), best.end());
  };
  rep.boundHolds = true;
  for (Dist r : sweep.scales) {
    Dist bd = supportBoundD(phi, r, sweep.jobs), br = remainderBound(r);
    rep.dphi.push_back(detail::boundRow(r, bd, index, sweep));
    rep.remainder.push_back(detail::boundRow(r, br, index, sweep));
    rep.boundHolds = rep.boundHolds && br <= bd;
  }
  rep.dphiCocontrolled = aggregate(rep.dphi);
  rep.remainderCocontrolled = aggregate(rep.remainder);
  return rep;
}

/// Telescoping primitive on Z>=0: phi~(x) = sum_{i<x} phi(i, i+1).
inline PrimitiveReport rayPrimitive(const WindowCochain &phi, const Sweep &sweep = {}) {
  const auto &index = phi.index();
  require(index.space().kind() == SpaceKind::LatticeBox && index.space().latticeDim() == 1 &&
              index.space().axisNonnegative(0),
          ErrorKind::InvalidArgument, "ray primitive needs the half line");
  std::vector<std::int64_t> parent(index.size());
  for (std::size_t i = 0; i < index.size(); ++i) {
    Coord x = index.point(i)[0];
    parent[i] = x == 0 ? -1 : static_cast<std::int64_t>(index.indexOf(Point{x - 1}));
  }
  return pathPrimitive(phi, parent, sweep);
}

/// Path sums from the root of a rooted tree.
inline PrimitiveReport treePrimitive(const WindowCochain &phi, const Sweep &sweep = {}) {
  const auto &index = phi.index();
  require(index.space().kind() == SpaceKind::RootedTree, ErrorKind::InvalidArgument, "tree primitive needs a tree");
  std::vector<std::int64_t> parent(index.size());
  for (std::size_t i = 0; i < index.size(); ++i) {
    Point v = index.point(i);
    if (v.c.empty()) {
      parent[i] = -1;
      continue;
    }
    v.c.pop_back();
    parent[i] = static_cast<std::int64_t>(index.indexOf(v));
  }
  return pathPrimitive(phi, parent, sweep);
}

/// phi = d psi0 + c with psi0 arbitrary and c supported on pairs inside the
/// ball of radius noiseRadius: a cocycle modulo cocontrolled cochains.
template <class Rng>
WindowCochain plantedCocycle(const WindowIndex &index, const FinAbGroup &a, Dist noiseRadius, Rng &rng) {
  const std::size_t n = index.size(), k = a.rank();
  auto draw = [&](std::size_t c) { return std::uniform_int_distribution<std::int64_t>(0, a.factors()[c] - 1)(rng); };
  std::vector<std::int64_t> psi0(n * k);
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t c = 0; c < k; ++c) psi0[i * k + c] = draw(c);
  WindowCochain phi(index, a);
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = 0; j < n; ++j) {
      const bool noisy = index.norm(i) <= noiseRadius && index.norm(j) <= noiseRadius;
      for (std::size_t c = 0; c < k; ++c) {
        std::int64_t v = psi0[j * k + c] - psi0[i * k + c] + (noisy ? draw(c) : 0);
        phi.setComponent(i, j, c, detail::mod(v, a.factors()[c]));
      }
    }
  return phi;
}

} // namespace coarsecoh
