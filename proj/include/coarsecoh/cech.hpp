#pragma once

// Reductions of coarse cohomology to finite cochain complexes:
//  * the closeness complex of a finite partition, whose simplices are the
//    block tuples that fail to be cocontrolled;
//  * the Cech complex of a coarse cover, with one A-summand per unbounded
//    coarse component of each finite intersection.

#include "coarsecoh/cover.hpp"
#include "coarsecoh/ends.hpp"
#include "coarsecoh/finab.hpp"
#include "coarsecoh/parallel.hpp"

#include <map>
#include <set>
#include <sstream>
#include <string>
#include <vector>

namespace coarsecoh {

using Simplex = std::vector<std::size_t>;

/// An abstract simplicial complex stored by dimension; simplices are sorted
/// vertex lists.
struct SimplicialComplex {
  std::vector<std::vector<Simplex>> byDim;

  std::size_t count(std::size_t q) const { return q < byDim.size() ? byDim[q].size() : 0; }

  bool contains(const Simplex &s) const {
    if (s.empty() || s.size() > byDim.size()) return false;
    const auto &level = byDim[s.size() - 1];
    return std::binary_search(level.begin(), level.end(), s);
  }

  std::size_t indexOf(const Simplex &s) const {
    const auto &level = byDim.at(s.size() - 1);
    auto it = std::lower_bound(level.begin(), level.end(), s);
    require(it != level.end() && *it == s, ErrorKind::InvalidArgument, "simplex not in complex");
    return static_cast<std::size_t>(it - level.begin());
  }

  bool downwardClosed() const {
    for (std::size_t q = 1; q < byDim.size(); ++q)
      for (const auto &s : byDim[q])
        for (std::size_t k = 0; k < s.size(); ++k) {
          Simplex face = s;
          face.erase(face.begin() + static_cast<std::ptrdiff_t>(k));
          if (!contains(face)) return false;
        }
    return true;
  }

  void add(Simplex s) {
    std::sort(s.begin(), s.end());
    if (byDim.size() < s.size()) byDim.resize(s.size());
    auto &level = byDim[s.size() - 1];
    auto it = std::lower_bound(level.begin(), level.end(), s);
    if (it == level.end() || *it != s) level.insert(it, std::move(s));
  }

  /// The full subcomplex on a vertex subset.
  SimplicialComplex restrictTo(const std::set<std::size_t> &vertices) const {
    SimplicialComplex out;
    for (const auto &level : byDim)
      for (const auto &s : level)
        if (std::all_of(s.begin(), s.end(), [&](std::size_t v) { return vertices.count(v) > 0; })) out.add(s);
    return out;
  }
};

/// Simplicial coboundary matrices for degrees 0..maxDegree.
inline CochainComplex simplicialCochainComplex(const SimplicialComplex &k, int maxDegree = -1) {
  require(k.downwardClosed(), ErrorKind::NotDownwardClosed, "closeness complex is not downward closed");
  const std::size_t top = maxDegree >= 0 ? static_cast<std::size_t>(maxDegree) : (k.byDim.empty() ? 0 : k.byDim.size() - 1);
  CochainComplex c;
  for (std::size_t q = 0; q <= top; ++q) c.dims.push_back(k.count(q));
  for (std::size_t q = 0; q < top; ++q) {
    IntMatrix d(k.count(q + 1), k.count(q));
    for (std::size_t i = 0; i < k.count(q + 1); ++i) {
      const auto &s = k.byDim[q + 1][i];
      for (std::size_t drop = 0; drop < s.size(); ++drop) {
        Simplex face = s;
        face.erase(face.begin() + static_cast<std::ptrdiff_t>(drop));
        d(i, k.indexOf(face)) += drop % 2 ? -1 : 1;
      }
    }
    c.diffs.push_back(std::move(d));
  }
  c.validate();
  return c;
}

/// All ordered tuples (repeats allowed) of length q+1 whose vertex set is a
/// simplex; this is the unnormalized complex blocky cochains live on.
inline std::vector<std::vector<std::size_t>> orderedTuples(const SimplicialComplex &k, std::size_t q,
                                                           std::size_t vertexCount) {
  std::vector<std::vector<std::size_t>> out;
  std::vector<std::size_t> t(q + 1, 0);
  for (;;) {
    Simplex set(t.begin(), t.end());
    std::sort(set.begin(), set.end());
    set.erase(std::unique(set.begin(), set.end()), set.end());
    if (k.contains(set)) out.push_back(t);
    std::size_t i = t.size();
    bool done = true;
    while (i > 0) {
      --i;
      if (++t[i] < vertexCount) {
        done = false;
        break;
      }
      t[i] = 0;
    }
    if (done) return out;
  }
}

/// Coboundary matrices of the full ordered tuple complex up to maxDegree.
inline CochainComplex fullTupleComplex(const SimplicialComplex &k, std::size_t vertexCount, int maxDegree) {
  CochainComplex c;
  std::vector<std::vector<std::vector<std::size_t>>> tuples;
  for (int q = 0; q <= maxDegree + 1; ++q) tuples.push_back(orderedTuples(k, static_cast<std::size_t>(q), vertexCount));
  for (int q = 0; q <= maxDegree; ++q) c.dims.push_back(tuples[static_cast<std::size_t>(q)].size());
  for (int q = 0; q < maxDegree; ++q) {
    const auto &src = tuples[static_cast<std::size_t>(q)];
    const auto &dst = tuples[static_cast<std::size_t>(q + 1)];
    IntMatrix d(dst.size(), src.size());
    for (std::size_t i = 0; i < dst.size(); ++i)
      for (std::size_t drop = 0; drop < dst[i].size(); ++drop) {
        auto face = dst[i];
        face.erase(face.begin() + static_cast<std::ptrdiff_t>(drop));
        auto j = static_cast<std::size_t>(std::lower_bound(src.begin(), src.end(), face) - src.begin());
        d(i, j) += drop % 2 ? -1 : 1;
      }
    c.diffs.push_back(std::move(d));
  }
  c.validate();
  return c;
}

// ---------------------------------------------------------------------------
// Closeness complex of a partition.

struct ClosenessComplex {
  std::size_t blockCount = 0;
  int dimCap = 0;
  SimplicialComplex complex;                      ///< vertices are block indices
  std::map<Simplex, TupleControlVerdict> verdicts; ///< every queried tuple
  std::vector<Simplex> inconclusive;              ///< treated as present
  std::vector<std::size_t> boundedBlocks;         ///< dropped
  std::vector<Simplex> closureAdded;              ///< faces added to restore downward closure

  /// True when no simplex could exist above the dimension cap.
  bool complete() const {
    return dimCap + 1 >= static_cast<int>(blockCount) || complex.count(static_cast<std::size_t>(dimCap)) == 0;
  }
};

inline ClosenessComplex buildClosenessComplex(const std::vector<SubsetExpr> &blocks, const CoarseContext &ctx,
                                              int dimCap = -1) {
  const std::size_t n = blocks.size();
  require(n >= 1, ErrorKind::InvalidArgument, "partition needs at least one block");
  ClosenessComplex out;
  out.blockCount = n;
  out.dimCap = dimCap >= 0 ? dimCap : static_cast<int>(n) - 1;

  std::vector<Simplex> level;
  for (std::size_t i = 0; i < n; ++i) level.push_back({i});
  for (int q = 0; q <= out.dimCap && !level.empty(); ++q) {
    std::vector<TupleControlVerdict> results(level.size());
    parallelFor(level.size(), ctx.sweep().jobs, [&](std::size_t i) {
      std::vector<SubsetExpr> tuple;
      for (auto b : level[i]) tuple.push_back(blocks[b]);
      results[i] = isCocontrolledTuple(tuple, ctx);
    });
    std::vector<Simplex> present;
    for (std::size_t i = 0; i < level.size(); ++i) {
      out.verdicts[level[i]] = results[i];
      if (results[i].cocontrolled == Tri::Yes) {
        if (q == 0) out.boundedBlocks.push_back(level[i][0]);
        continue;
      }
      if (results[i].cocontrolled == Tri::Inconclusive) out.inconclusive.push_back(level[i]);
      present.push_back(level[i]);
      out.complex.add(level[i]);
    }
    // Candidates one dimension up: every facet must already be present.
    std::set<Simplex> presentSet(present.begin(), present.end());
    std::vector<Simplex> next;
    for (const auto &s : present)
      for (std::size_t v = s.back() + 1; v < n; ++v) {
        Simplex t = s;
        t.push_back(v);
        bool ok = true;
        for (std::size_t drop = 0; drop + 1 < t.size() && ok; ++drop) {
          Simplex face = t;
          face.erase(face.begin() + static_cast<std::ptrdiff_t>(drop));
          ok = presentSet.count(face) > 0;
        }
        if (ok) next.push_back(std::move(t));
      }
    level = std::move(next);
  }
  return out;
}

struct PartitionCohomology {
  ClosenessComplex closeness;
  CochainComplex cochains;
  CohomologyResult result;
  bool degenerate = false; ///< no unbounded block: everything is bounded
};

inline PartitionCohomology coarseCohomologyViaPartition(const std::vector<SubsetExpr> &blocks,
                                                        const CoarseContext &ctx, const FinAbGroup &a,
                                                        int dimCap = -1, CohomologyOptions opts = {}) {
  PartitionCohomology out;
  out.closeness = buildClosenessComplex(blocks, ctx, dimCap);
  out.degenerate = out.closeness.complex.count(0) == 0;
  int top = out.closeness.dimCap;
  out.cochains = simplicialCochainComplex(out.closeness.complex, top);
  // Without every simplex up to the cap, the top degree is not determined.
  if (!out.closeness.complete()) opts.maxDegree = std::max(0, top - 1);
  out.result = cohomologyWithCoefficients(out.cochains, a, opts);
  return out;
}

struct RefinementReport {
  PartitionCohomology coarse, refined;
  std::vector<SubsetExpr> refinedBlocks;
  bool stable = false;
};

/// Compares a partition with its common refinement against another one.
inline RefinementReport refinementStability(const std::vector<SubsetExpr> &p1, const std::vector<SubsetExpr> &p2,
                                            const CoarseContext &ctx, const FinAbGroup &a) {
  RefinementReport rep;
  for (const auto &x : p1)
    for (const auto &y : p2) {
      SubsetExpr b = x & y;
      const Mask &m = ctx.mask(b);
      if (std::any_of(m.begin(), m.end(), [](std::uint8_t v) { return v != 0; })) rep.refinedBlocks.push_back(b);
    }
  rep.coarse = coarseCohomologyViaPartition(p1, ctx, a);
  rep.refined = coarseCohomologyViaPartition(rep.refinedBlocks, ctx, a);
  std::size_t degrees = std::max(rep.coarse.result.groups.size(), rep.refined.result.groups.size());
  rep.stable = true;
  for (std::size_t q = 0; q < degrees; ++q) rep.stable = rep.stable && rep.coarse.result.at(q) == rep.refined.result.at(q);
  return rep;
}

// ---------------------------------------------------------------------------
// Cech complex of a coarse cover.

struct CechIntersection {
  Simplex parts;
  std::size_t components = 0;
  std::vector<Point> witnesses; ///< one far point per unbounded component
  std::vector<BoxEnd> ends;     ///< closed-form labels (symbolic route)
  bool stable = true;
};

struct CechCover {
  std::vector<SubsetExpr> parts;
  CoverVerdict cover;
  bool symbolic = false;
  bool stable = true;
  std::vector<CechIntersection> intersections; ///< those with an unbounded component
  CochainComplex complex;
  std::vector<std::vector<std::size_t>> offsets; ///< offsets[q][i]: first column of simplex i

  /// The nerve: index sets whose intersection is unbounded.
  SimplicialComplex nerve() const {
    SimplicialComplex k;
    for (const auto &x : intersections) k.add(x.parts);
    return k;
  }
};

namespace detail {

struct WindowComponents {
  ComponentLabels reference;
  std::size_t count = 0;
  bool stable = true;
};

inline WindowComponents windowComponents(const SubsetExpr &v, const CoarseContext &ctx) {
  WindowComponents out;
  const auto &index = ctx.index();
  const Mask &m = ctx.mask(v);
  const Dist w = index.space().windowRadius();
  const std::vector<Dist> radii{w / 4, w / 2};
  std::optional<std::size_t> count;
  for (Dist scale : ctx.sweep().scales)
    for (Dist r : radii) {
      auto labels = unboundedComponents(m, index, scale, r);
      if (!count) count = labels.count();
      out.stable = out.stable && labels.count() == *count;
      if (scale == ctx.sweep().maxScale() && r == radii.front()) out.reference = std::move(labels);
    }
  out.count = out.reference.count();
  return out;
}

} // namespace detail

/// Builds the Cech complex with integer matrices; C^q has one Z per
/// unbounded component of each (q+1)-fold intersection.
inline CechCover buildCechCover(const std::vector<SubsetExpr> &parts, const CoarseContext &ctx, int maxDegree,
                                const SubsetExpr &u = SubsetExpr::all()) {
  require(!parts.empty(), ErrorKind::InvalidArgument, "cover needs at least one part");
  CechCover cc;
  cc.parts = parts;
  cc.cover = isCoarseCover(u, parts, ctx);
  if (cc.cover.isCover != Tri::Yes)
    fail(ErrorKind::CoverNotVerified, "parts are not a verified coarse cover (" + std::string(toString(cc.cover.isCover)) + ")");

  // Symbolic route when every part is a single lattice box.
  std::vector<Box> partBoxes;
  cc.symbolic = ctx.sweep().symbolic && ctx.space().isLattice();
  for (const auto &p : parts) {
    if (!cc.symbolic) break;
    auto b = toBoxes(u & p, ctx.space());
    if (!b || !b->exact || b->boxes.size() > 1) {
      cc.symbolic = false;
      break;
    }
    partBoxes.push_back(b->boxes.empty() ? Box{std::vector<Interval>(static_cast<std::size_t>(ctx.space().latticeDim()),
                                                                     Interval{1, 0})}
                                         : b->boxes[0]);
  }

  const std::size_t n = parts.size();
  const std::size_t maxSize = static_cast<std::size_t>(maxDegree) + 2;
  std::map<Simplex, std::size_t> where;
  std::map<Simplex, Box> boxes;
  std::map<Simplex, detail::WindowComponents> comps;

  auto evaluate = [&](const Simplex &s) -> std::optional<CechIntersection> {
    CechIntersection x;
    x.parts = s;
    if (cc.symbolic) {
      Box b = partBoxes[s[0]];
      for (std::size_t i = 1; i < s.size(); ++i) b = intersect(b, partBoxes[s[i]]);
      x.ends = boxEnds(b);
      x.components = x.ends.size();
      for (const auto &e : x.ends) {
        Point w = boxNearestPoint(b);
        if (e.axis >= 0) w.c[static_cast<std::size_t>(e.axis)] = e.sign == '+' ? ctx.space().latticeRadius() : -ctx.space().latticeRadius();
        x.witnesses.push_back(w);
      }
      boxes[s] = b;
    } else {
      std::vector<SubsetExpr> terms{u};
      for (auto i : s) terms.push_back(parts[i]);
      auto wc = detail::windowComponents(SubsetExpr::intersection(terms), ctx);
      x.components = wc.count;
      x.stable = wc.stable;
      for (auto w : wc.reference.witness) x.witnesses.push_back(ctx.index().point(w));
      comps[s] = std::move(wc);
    }
    if (x.components == 0) return std::nullopt;
    return x;
  };

  // Grow index sets level by level; supersets of bounded sets stay bounded.
  std::vector<Simplex> level;
  for (std::size_t i = 0; i < n; ++i) level.push_back({i});
  std::vector<std::vector<Simplex>> kept;
  for (std::size_t size = 1; size <= maxSize && !level.empty(); ++size) {
    std::vector<Simplex> present;
    for (const auto &s : level)
      if (auto x = evaluate(s)) {
        cc.stable = cc.stable && x->stable;
        where[s] = cc.intersections.size();
        cc.intersections.push_back(std::move(*x));
        present.push_back(s);
      }
    kept.push_back(present);
    std::set<Simplex> presentSet(present.begin(), present.end());
    std::vector<Simplex> next;
    for (const auto &s : present)
      for (std::size_t v = s.back() + 1; v < n; ++v) {
        Simplex t = s;
        t.push_back(v);
        bool ok = true;
        for (std::size_t drop = 0; drop + 1 < t.size() && ok; ++drop) {
          Simplex face = t;
          face.erase(face.begin() + static_cast<std::ptrdiff_t>(drop));
          ok = presentSet.count(face) > 0;
        }
        if (ok) next.push_back(std::move(t));
      }
    level = std::move(next);
  }
  kept.resize(maxSize);

  // Component of the larger intersection `outer` that contains component c of `inner`.
  auto locate = [&](const Simplex &inner, std::size_t c, const Simplex &outer) -> std::size_t {
    const auto &xi = cc.intersections[where.at(inner)];
    if (cc.symbolic) return locateBoxEnd(cc.intersections[where.at(outer)].ends, xi.ends[c]);
    const auto &wi = comps.at(inner);
    const auto &wo = comps.at(outer);
    int label = wo.reference.label[wi.reference.witness[c]];
    require(label >= 0, ErrorKind::InvalidArgument, "component witness not found in the enclosing intersection");
    return static_cast<std::size_t>(label);
  };

  for (std::size_t q = 0; q + 1 < maxSize + 1 && q <= static_cast<std::size_t>(maxDegree); ++q) {
    std::vector<std::size_t> off{0};
    for (const auto &s : kept[q]) off.push_back(off.back() + cc.intersections[where.at(s)].components);
    cc.offsets.push_back(off);
    cc.complex.dims.push_back(off.back());
  }
  for (std::size_t q = 0; q < static_cast<std::size_t>(maxDegree); ++q) {
    IntMatrix d(cc.complex.dims[q + 1], cc.complex.dims[q]);
    const auto &srcIndex = kept[q];
    for (std::size_t i = 0; i < kept[q + 1].size(); ++i) {
      const Simplex &s = kept[q + 1][i];
      const auto &x = cc.intersections[where.at(s)];
      for (std::size_t drop = 0; drop < s.size(); ++drop) {
        Simplex face = s;
        face.erase(face.begin() + static_cast<std::ptrdiff_t>(drop));
        auto j = static_cast<std::size_t>(std::lower_bound(srcIndex.begin(), srcIndex.end(), face) - srcIndex.begin());
        for (std::size_t c = 0; c < x.components; ++c) {
          std::size_t target = locate(s, c, face);
          d(cc.offsets[q + 1][i] + c, cc.offsets[q][j] + target) += drop % 2 ? -1 : 1;
        }
      }
    }
    cc.complex.diffs.push_back(std::move(d));
  }
  cc.complex.validate();
  return cc;
}

struct CechCohomology {
  CechCover cover;
  CohomologyResult result;
};

inline CechCohomology cechCohomology(const std::vector<SubsetExpr> &parts, const CoarseContext &ctx,
                                     const FinAbGroup &a, int maxDegree, CohomologyOptions opts = {}) {
  CechCohomology out;
  // One extra degree so that the top requested group sees its outgoing differential.
  out.cover = buildCechCover(parts, ctx, maxDegree + 1);
  opts.maxDegree = maxDegree;
  out.result = cohomologyWithCoefficients(out.cover.complex, a, opts);
  return out;
}

/// DOT rendering of the 1-skeleton of a simplicial complex.
inline std::string toDot(const SimplicialComplex &k, const std::vector<std::string> &labels, const std::string &name) {
  std::ostringstream os;
  os << "graph " << name << " {\n";
  for (const auto &v : k.byDim.empty() ? std::vector<Simplex>{} : k.byDim[0])
    os << "  v" << v[0] << " [label=\"" << (v[0] < labels.size() ? labels[v[0]] : std::to_string(v[0])) << "\"];\n";
  if (k.byDim.size() > 1)
    for (const auto &e : k.byDim[1]) os << "  v" << e[0] << " -- v" << e[1] << ";\n";
  os << "}\n";
  return os.str();
}

} // namespace coarsecoh
