#pragma once

// Homotopy machinery on the lattice quadrant I_0: the h_t family, its
// distance conditions, the prism operator relating three close maps, and the
// collapse p = iota_0 . pi.

#include "coarsecoh/cochain.hpp"
#include "coarsecoh/maps.hpp"

#include <array>
#include <map>
#include <optional>
#include <string>
#include <vector>

namespace coarsecoh {

inline std::vector<CoarseMap> htFamily(Coord n, const std::vector<Coord> &ts) {
  std::vector<CoarseMap> out;
  for (Coord t : ts) out.push_back(CoarseMap::ht(n, t));
  return out;
}

struct ContractionReport {
  bool contracts = true;      ///< d(z0,z1) >= d(h z0, h z1) everywhere
  bool preservesNorm = true;  ///< d(z,0) = d(h z, 0) everywhere
  std::optional<std::pair<Point, Point>> contractionWitness;
  std::optional<Point> normWitness;
  std::string map;
};

/// Checks both conditions exhaustively on the window for every map.
inline std::vector<ContractionReport> verifyDistanceContraction(const std::vector<CoarseMap> &family,
                                                                const Sweep &sweep = {}) {
  std::vector<ContractionReport> out;
  for (const auto &h : family) {
    ContractionReport rep;
    rep.map = h.name();
    WindowIndex index(h.domain(), sweep.pointCap);
    const auto &y = h.codomain();
    std::vector<Point> image(index.size());
    for (std::size_t i = 0; i < index.size(); ++i) {
      image[i] = h(index.point(i));
      if (!rep.normWitness && y.norm(image[i]) != index.norm(i)) {
        rep.preservesNorm = false;
        rep.normWitness = index.point(i);
      }
    }
    std::vector<std::int64_t> bad(index.size(), -1);
    parallelFor(index.size(), sweep.jobs, [&](std::size_t i) {
      for (std::size_t j = 0; j < index.size(); ++j)
        if (y.distance(image[i], image[j]) > index.distance(i, j)) {
          bad[i] = static_cast<std::int64_t>(j);
          return;
        }
    });
    for (std::size_t i = 0; i < index.size(); ++i)
      if (bad[i] >= 0) {
        rep.contracts = false;
        rep.contractionWitness = {index.point(i), index.point(static_cast<std::size_t>(bad[i]))};
        break;
      }
    out.push_back(std::move(rep));
  }
  return out;
}

/// P(phi)(k_0..k_{q-2}) = sum_{i<=j} (-1)^{i+j}
///   phi(a0(k_0)..a0(k_i), a1(k_i)..a1(k_j), a2(k_j)..a2(k_{q-2})).
inline BlockyCochain prismTable(const BlockyCochain &phi, const std::vector<std::size_t> &a0,
                                const std::vector<std::size_t> &a1, const std::vector<std::size_t> &a2) {
  require(phi.degree() >= 2, ErrorKind::InvalidArgument, "prism needs degree >= 2");
  const auto &g = phi.group();
  BlockyCochain out(phi.degree() - 2, a0.size(), g);
  BlockyCochain::Tuple arg(static_cast<std::size_t>(phi.degree()) + 1);
  for (std::size_t k = 0; k < out.size(); ++k) {
    auto t = out.tupleOf(k);
    const std::size_t m = t.size();
    GroupElem sum = g.zero();
    for (std::size_t i = 0; i < m; ++i)
      for (std::size_t j = i; j < m; ++j) {
        std::size_t pos = 0;
        for (std::size_t l = 0; l <= i; ++l) arg[pos++] = a0[t[l]];
        for (std::size_t l = i; l <= j; ++l) arg[pos++] = a1[t[l]];
        for (std::size_t l = j; l < m; ++l) arg[pos++] = a2[t[l]];
        const auto &v = phi.at(arg);
        sum = (i + j) % 2 ? g.add(sum, g.neg(v)) : g.add(sum, v);
      }
    out.set(k, std::move(sum));
  }
  return out;
}

/// Block maps of the refinement {h0^-1(A_i) & h1^-1(A_j) & h2^-1(A_k)}.
inline std::array<std::vector<std::size_t>, 3> tripleBlockMaps(std::size_t n) {
  std::array<std::vector<std::size_t>, 3> m;
  for (auto &v : m) v.resize(n * n * n);
  for (std::size_t k = 0; k < n * n * n; ++k) {
    m[0][k] = k / (n * n);
    m[1][k] = (k / n) % n;
    m[2][k] = k % n;
  }
  return m;
}

namespace detail {

/// Point-level evaluation helpers: every cochain below is evaluated on a
/// window tuple through the block labels of the images under the maps.
struct LabelledMaps {
  std::vector<std::vector<std::uint32_t>> label; ///< label[m][x]: block of map m's image of x
};

inline LabelledMaps labelImages(const std::vector<CoarseMap> &maps, const Partition &p, const WindowIndex &domain,
                                const CoarseContext &codomainCtx) {
  auto labels = blockLabels(p, codomainCtx);
  const auto &cod = codomainCtx.index();
  LabelledMaps out;
  for (const auto &h : maps) {
    std::vector<std::uint32_t> l(domain.size());
    for (std::size_t x = 0; x < domain.size(); ++x) l[x] = labels[cod.indexOf(h(domain.point(x)))];
    out.label.push_back(std::move(l));
  }
  return out;
}

/// sum_i (-1)^i phi(a(x_0)..a(x_i), b(x_i)..b(x_{m-1})) at point level.
inline GroupElem homotopyAt(const BlockyCochain &phi, const std::vector<std::uint32_t> &la,
                            const std::vector<std::uint32_t> &lb, const std::vector<std::size_t> &x) {
  const auto &g = phi.group();
  GroupElem sum = g.zero();
  BlockyCochain::Tuple arg(x.size() + 1);
  for (std::size_t i = 0; i < x.size(); ++i) {
    for (std::size_t j = 0; j <= i; ++j) arg[j] = la[x[j]];
    for (std::size_t j = i; j < x.size(); ++j) arg[j + 1] = lb[x[j]];
    sum = i % 2 ? g.add(sum, g.neg(phi.at(arg))) : g.add(sum, phi.at(arg));
  }
  return sum;
}

/// d phi evaluated on a block tuple.
inline GroupElem dAt(const BlockyCochain &phi, const BlockyCochain::Tuple &t) {
  const auto &g = phi.group();
  GroupElem sum = g.zero();
  for (std::size_t drop = 0; drop < t.size(); ++drop) {
    auto face = t;
    face.erase(face.begin() + static_cast<std::ptrdiff_t>(drop));
    sum = drop % 2 ? g.add(sum, g.neg(phi.at(face))) : g.add(sum, phi.at(face));
  }
  return sum;
}

/// The prism sum applied to a function f of block tuples, at point level.
template <class F>
GroupElem prismAt(const FinAbGroup &g, F &&f, const LabelledMaps &lm, const std::vector<std::size_t> &x) {
  const std::size_t m = x.size();
  GroupElem sum = g.zero();
  BlockyCochain::Tuple arg;
  for (std::size_t i = 0; i < m; ++i)
    for (std::size_t j = i; j < m; ++j) {
      arg.clear();
      for (std::size_t l = 0; l <= i; ++l) arg.push_back(lm.label[0][x[l]]);
      for (std::size_t l = i; l <= j; ++l) arg.push_back(lm.label[1][x[l]]);
      for (std::size_t l = j; l < m; ++l) arg.push_back(lm.label[2][x[l]]);
      GroupElem v = f(arg);
      sum = (i + j) % 2 ? g.add(sum, g.neg(v)) : g.add(sum, v);
    }
  return sum;
}

/// Points grouped by their label signature across all maps. Every quantity
/// checked pointwise depends on a point only through its signature, so one
/// representative per class covers the whole window.
struct SignatureClasses {
  std::vector<std::size_t> representative;
  std::vector<std::size_t> count;
};

inline SignatureClasses signatureClasses(const LabelledMaps &lm, std::size_t points) {
  std::map<std::vector<std::uint32_t>, std::size_t> seen;
  SignatureClasses out;
  for (std::size_t x = 0; x < points; ++x) {
    std::vector<std::uint32_t> sig;
    for (const auto &l : lm.label) sig.push_back(l[x]);
    auto [it, inserted] = seen.emplace(sig, out.representative.size());
    if (inserted) {
      out.representative.push_back(x);
      out.count.push_back(0);
    }
    ++out.count[it->second];
  }
  return out;
}

template <class Fn>
void forEachTuple(std::size_t points, std::size_t length, Fn &&fn) {
  std::vector<std::size_t> x(length, 0);
  for (;;) {
    fn(x);
    std::size_t i = length;
    bool done = true;
    while (i > 0) {
      --i;
      if (++x[i] < points) {
        done = false;
        break;
      }
      x[i] = 0;
    }
    if (done || length == 0) return;
  }
}

} // namespace detail

struct PrismReport {
  std::vector<MapCheckReport> closeness; ///< pairs (0,1), (1,2), (0,2)
  Partition partition;                   ///< triple refinement, n^3 blocks
  std::optional<BlockyCochain> prism;    ///< P(phi), absent in degree 1
  bool tableIdentity = false;            ///< on every refined block tuple
  bool windowIdentity = false;           ///< on every window tuple, evaluated pointwise
  std::size_t blockTuples = 0;
  std::size_t windowTuples = 0;
  SupportCertificate correction;         ///< support of P(d phi)
  std::optional<std::vector<Point>> mismatch;
};

/// Verifies P(d phi) - d P(phi) = h01 phi + h12 phi - h02 phi, where hab is
/// the closeness homotopy between ha^* and hb^*. For a cocycle the P(d phi)
/// term vanishes and the three homotopies telescope to a coboundary.
inline PrismReport prismOperator(const CoarseMap &h0, const CoarseMap &h1, const CoarseMap &h2, const Partition &p,
                                 const BlockyCochain &phi, const CoarseContext &domainCtx,
                                 const CoarseContext &codomainCtx) {
  require(phi.degree() >= 1, ErrorKind::InvalidArgument, "prism needs a cochain of degree >= 1");
  require(phi.blocks() == p.size(), ErrorKind::InvalidArgument, "cochain and partition disagree on the block count");
  PrismReport rep;
  const Sweep &sweep = domainCtx.sweep();
  rep.closeness = {checkClose(h0, h1, sweep), checkClose(h1, h2, sweep), checkClose(h0, h2, sweep)};
  for (const auto &c : rep.closeness)
    if (c.close != Tri::Yes) fail(ErrorKind::MapsNotClose, c.map + " are not certified close");

  const std::size_t n = p.size();
  const auto &g = phi.group();
  rep.partition = refine({preimage(h0, p), preimage(h1, p), preimage(h2, p)});
  auto m = tripleBlockMaps(n);
  const auto dphi = differential(phi);

  // Table level.
  BlockyCochain rhs = homotopyTable(phi, m[0], m[1]) + homotopyTable(phi, m[1], m[2]) - homotopyTable(phi, m[0], m[2]);
  BlockyCochain pd = phi.degree() + 1 >= 2 ? prismTable(dphi, m[0], m[1], m[2]) : BlockyCochain();
  BlockyCochain lhs = pd;
  if (phi.degree() >= 2) {
    rep.prism = prismTable(phi, m[0], m[1], m[2]);
    lhs = pd - differential(*rep.prism);
  }
  rep.blockTuples = lhs.size();
  rep.tableIdentity = lhs == rhs;
  rep.correction = supportCocontrolled(pd, rep.partition, domainCtx);

  // Window level, independent of the refined tables: evaluate the maps on
  // each point and check the identity on every window tuple, one
  // representative per signature class.
  const auto &dom = domainCtx.index();
  auto lm = detail::labelImages({h0, h1, h2}, p, dom, codomainCtx);
  auto classes = detail::signatureClasses(lm, dom.size());
  const auto len = static_cast<std::size_t>(phi.degree());
  auto phiAt = [&](const BlockyCochain::Tuple &t) { return phi.at(t); };
  auto dphiAt = [&](const BlockyCochain::Tuple &t) { return detail::dAt(phi, t); };
  const std::size_t c = classes.representative.size();
  std::vector<std::uint8_t> ok(c, 1);
  std::vector<std::vector<std::size_t>> bad(c);
  std::vector<long double> covered(c, 0);
  // Split on the first point so workers own disjoint slices.
  parallelFor(c, sweep.jobs, [&](std::size_t first) {
    detail::forEachTuple(c, len - 1, [&](const std::vector<std::size_t> &rest) {
      if (!ok[first]) return;
      std::vector<std::size_t> x{classes.representative[first]};
      long double mult = static_cast<long double>(classes.count[first]);
      for (auto r : rest) {
        x.push_back(classes.representative[r]);
        mult *= static_cast<long double>(classes.count[r]);
      }
      GroupElem right = g.add(g.add(detail::homotopyAt(phi, lm.label[0], lm.label[1], x),
                                    detail::homotopyAt(phi, lm.label[1], lm.label[2], x)),
                              g.neg(detail::homotopyAt(phi, lm.label[0], lm.label[2], x)));
      GroupElem left = detail::prismAt(g, dphiAt, lm, x);
      if (len >= 2)
        for (std::size_t drop = 0; drop < len; ++drop) {
          auto face = x;
          face.erase(face.begin() + static_cast<std::ptrdiff_t>(drop));
          GroupElem v = detail::prismAt(g, phiAt, lm, face);
          left = drop % 2 ? g.add(left, v) : g.add(left, g.neg(v));
        }
      if (left != right) {
        ok[first] = 0;
        bad[first] = x;
      }
      covered[first] += mult;
    });
  });
  rep.windowIdentity = true;
  long double total = 0;
  for (std::size_t i = 0; i < c; ++i) {
    total += covered[i];
    if (!ok[i] && rep.windowIdentity) {
      rep.windowIdentity = false;
      std::vector<Point> pts;
      for (auto j : bad[i]) pts.push_back(dom.point(j));
      rep.mismatch = pts;
    }
  }
  rep.windowTuples = static_cast<std::size_t>(total);
  return rep;
}

struct CollapseReport {
  Partition partition;                ///< {A_i & p^-1(A_j)}
  std::optional<BlockyCochain> psi;   ///< homotopy between id^* and p^*, degree q-1
  bool tableIdentity = false;         ///< d psi + psi(d phi) = p^* phi - phi
  bool windowIdentity = false;
  std::size_t windowTuples = 0;
  SupportCertificate remainder;       ///< support of psi(d phi), or of p^* phi - phi in degree 0
  SupportCertificate psiSupport;
};

/// psi(z_0..z_{q-1}) = sum_i (-1)^i phi(z_0..z_i, p(z_i)..p(z_{q-1})) on I_0.
inline CollapseReport verifyCollapseInvariance(const BlockyCochain &phi, const Partition &p, const CoarseContext &ctx) {
  require(ctx.space().kind() == SpaceKind::LatticeBox && ctx.space().latticeDim() == 2 &&
              ctx.space().axisNonnegative(0) && ctx.space().axisNonnegative(1),
          ErrorKind::InvalidArgument, "collapse verification runs on the quadrant I_0");
  const Coord n = ctx.space().latticeRadius();
  const auto id = CoarseMap::identity(ctx.space());
  const auto collapse = CoarseMap::collapse(n);
  CollapseReport rep;
  const std::size_t blocks = p.size();
  const auto &g = phi.group();
  rep.partition = refine({p, preimage(collapse, p)});
  auto [am, bm] = pairBlockMaps(blocks);
  const auto diff = pullbackTable(phi, bm) - pullbackTable(phi, am);

  if (phi.degree() == 0) {
    // One end: phi and p^* phi agree off a bounded set.
    rep.remainder = supportCocontrolled(diff, rep.partition, ctx);
    rep.tableIdentity = true;
  } else {
    rep.psi = homotopyTable(phi, am, bm);
    auto correction = homotopyTable(differential(phi), am, bm);
    rep.tableIdentity = differential(*rep.psi) + correction == diff;
    rep.remainder = supportCocontrolled(correction, rep.partition, ctx);
    rep.psiSupport = supportCocontrolled(*rep.psi, rep.partition, ctx);
  }

  const auto &dom = ctx.index();
  auto lm = detail::labelImages({id, collapse}, p, dom, ctx);
  auto classes = detail::signatureClasses(lm, dom.size());
  const auto len = static_cast<std::size_t>(phi.degree()) + 1;
  if (phi.degree() == 0) {
    rep.windowIdentity = true;
    rep.windowTuples = dom.size();
    return rep;
  }
  const std::size_t c = classes.representative.size();
  std::vector<std::uint8_t> ok(c, 1);
  std::vector<long double> covered(c, 0);
  parallelFor(c, ctx.sweep().jobs, [&](std::size_t first) {
    detail::forEachTuple(c, len - 1, [&](const std::vector<std::size_t> &rest) {
      if (!ok[first]) return;
      std::vector<std::size_t> z{classes.representative[first]};
      long double mult = static_cast<long double>(classes.count[first]);
      for (auto r : rest) {
        z.push_back(classes.representative[r]);
        mult *= static_cast<long double>(classes.count[r]);
      }
      BlockyCochain::Tuple a, b;
      for (auto x : z) {
        a.push_back(lm.label[0][x]);
        b.push_back(lm.label[1][x]);
      }
      GroupElem right = g.add(phi.at(b), g.neg(phi.at(a)));
      // d psi at z: alternate faces of the point-level homotopy.
      GroupElem left = g.zero();
      for (std::size_t drop = 0; drop < z.size(); ++drop) {
        auto face = z;
        face.erase(face.begin() + static_cast<std::ptrdiff_t>(drop));
        GroupElem v = detail::homotopyAt(phi, lm.label[0], lm.label[1], face);
        left = drop % 2 ? g.add(left, g.neg(v)) : g.add(left, v);
      }
      // psi(d phi) at z.
      GroupElem corr = g.zero();
      BlockyCochain::Tuple arg(z.size() + 1);
      for (std::size_t i = 0; i < z.size(); ++i) {
        for (std::size_t j = 0; j <= i; ++j) arg[j] = lm.label[0][z[j]];
        for (std::size_t j = i; j < z.size(); ++j) arg[j + 1] = lm.label[1][z[j]];
        GroupElem v = detail::dAt(phi, arg);
        corr = i % 2 ? g.add(corr, g.neg(v)) : g.add(corr, v);
      }
      if (g.add(left, corr) != right) ok[first] = 0;
      covered[first] += mult;
    });
  });
  rep.windowIdentity = std::all_of(ok.begin(), ok.end(), [](std::uint8_t v) { return v != 0; });
  long double total = 0;
  for (auto v : covered) total += v;
  rep.windowTuples = static_cast<std::size_t>(total);
  return rep;
}

} // namespace coarsecoh
