#pragma once

// Maps between windowed space models, and empirical checks that a map is
// coarse (uniform and proper) or that two maps are close.

#include "coarsecoh/cover.hpp"
#include "coarsecoh/space.hpp"

#include <functional>
#include <map>
#include <string>
#include <vector>

namespace coarsecoh {

class CoarseMap {
public:
  using Rule = std::function<Point(const Point &)>;

  CoarseMap(std::string name, SpaceModel domain, SpaceModel codomain, Rule rule)
      : name_(std::move(name)), domain_(std::move(domain)), codomain_(std::move(codomain)), rule_(std::move(rule)) {}

  const std::string &name() const { return name_; }
  const SpaceModel &domain() const { return domain_; }
  const SpaceModel &codomain() const { return codomain_; }

  /// Evaluates the map; the image must lie in the codomain window.
  Point operator()(const Point &p) const {
    Point q = rule_(p);
    if (!codomain_.inWindow(q))
      fail(ErrorKind::MapNotEvaluable, name_ + " sends " + toString(p) + " to " + toString(q) + " outside the window");
    return q;
  }

  static CoarseMap identity(const SpaceModel &x) {
    return {"id", x, x, [](const Point &p) { return p; }};
  }

  /// Translation on a full lattice; the codomain window grows by the offset.
  static CoarseMap shift(const SpaceModel &x, std::vector<Coord> offset) {
    require(x.isLattice() && offset.size() == static_cast<std::size_t>(x.latticeDim()), ErrorKind::InvalidArgument,
            "shift needs a lattice and one offset per axis");
    Coord grow = 0;
    std::string name = "shift(";
    for (std::size_t i = 0; i < offset.size(); ++i) {
      require(!x.axisNonnegative(static_cast<int>(i)) || offset[i] >= 0, ErrorKind::InvalidArgument,
              "shift would leave a half axis");
      grow += offset[i] < 0 ? -offset[i] : offset[i];
      name += (i ? "," : "") + std::to_string(offset[i]);
    }
    std::vector<bool> nonneg;
    for (int i = 0; i < x.latticeDim(); ++i) nonneg.push_back(x.axisNonnegative(i));
    auto y = SpaceModel::lattice(x.latticeDim(), x.latticeRadius() + grow, x.metric(), x.windowShape(), nonneg);
    return {name + ")", x, y, [offset](const Point &p) {
              Point q = p;
              for (std::size_t i = 0; i < offset.size(); ++i) q.c[i] += offset[i];
              return q;
            }};
  }

  /// Coordinate permutation: output axis i reads input axis perm[i].
  static CoarseMap permutation(const SpaceModel &x, std::vector<int> perm) {
    std::string name = "perm(";
    for (std::size_t i = 0; i < perm.size(); ++i) name += (i ? "," : "") + std::to_string(perm[i]);
    return {name + ")", x, x, [perm](const Point &p) {
              Point q = p;
              for (std::size_t i = 0; i < perm.size(); ++i) q.c[i] = p[static_cast<std::size_t>(perm[i])];
              return q;
            }};
  }

  static CoarseMap constant(const SpaceModel &x, const SpaceModel &y, Point value) {
    return {"const" + toString(value), x, y, [value](const Point &) { return value; }};
  }

  /// pi: I_0 -> Z>=0, (x,y) -> x+y.
  static CoarseMap projection(Coord n) {
    return {"pi", SpaceModel::quadrantI0(n), SpaceModel::halfLine(n), [](const Point &p) { return Point{p[0] + p[1]}; }};
  }

  /// iota_0: x -> (x,0) and iota_1: x -> (0,x), from Z>=0 into I_0.
  static CoarseMap inclusion(Coord n, int which) {
    require(which == 0 || which == 1, ErrorKind::InvalidArgument, "inclusion index must be 0 or 1");
    return {"iota" + std::to_string(which), SpaceModel::halfLine(n), SpaceModel::quadrantI0(n),
            [which](const Point &p) { return which == 0 ? Point{p[0], 0} : Point{0, p[0]}; }};
  }

  /// p = iota_0 . pi, the collapse of the quadrant I_0 onto its first axis.
  static CoarseMap collapse(Coord n) {
    auto i0 = SpaceModel::quadrantI0(n);
    return {"collapse", i0, i0, [](const Point &p) { return Point{p[0] + p[1], 0}; }};
  }

  /// h_t(x,y) = (x+t, y-t) if t < y, else (x+y, 0).
  static CoarseMap ht(Coord n, Coord t) {
    require(t >= 0, ErrorKind::InvalidArgument, "h_t needs t >= 0");
    auto i0 = SpaceModel::quadrantI0(n);
    return {"h" + std::to_string(t), i0, i0, [t](const Point &p) {
              return t < p[1] ? Point{p[0] + t, p[1] - t} : Point{p[0] + p[1], 0};
            }};
  }

  /// x -> (x, d(x,x0), 0) and x -> (x, 0, d(x,x0)) into X*I.
  static CoarseMap productInclusion(const SpaceModel &x, int which) {
    require(which == 0 || which == 1, ErrorKind::InvalidArgument, "inclusion index must be 0 or 1");
    auto xi = SpaceModel::asymptoticProduct(x);
    return {"iota" + std::to_string(which) + "*", x, xi, [x, which](const Point &p) {
              Point q = p;
              Dist r = x.norm(p);
              q.c.push_back(which == 0 ? r : 0);
              q.c.push_back(which == 0 ? 0 : r);
              return q;
            }};
  }

  /// X*I -> X, forgetting the interval coordinates.
  static CoarseMap productProjection(const SpaceModel &x) {
    return {"pi*", SpaceModel::asymptoticProduct(x), x, [](const Point &p) {
              Point q = p;
              q.c.resize(q.c.size() - 2);
              return q;
            }};
  }

  /// Explicit table; every domain window point must be listed.
  static CoarseMap table(std::string name, const SpaceModel &x, const SpaceModel &y, std::map<Point, Point> values) {
    for (const auto &p : x.window())
      require(values.count(p) > 0, ErrorKind::MapNotEvaluable, "map table misses " + toString(p));
    auto shared = std::make_shared<const std::map<Point, Point>>(std::move(values));
    return {std::move(name), x, y, [shared](const Point &p) {
              auto it = shared->find(p);
              if (it == shared->end()) fail(ErrorKind::MapNotEvaluable, "map table misses " + toString(p));
              return it->second;
            }};
  }

  /// f . g
  static CoarseMap compose(const CoarseMap &f, const CoarseMap &g) {
    return {f.name() + "." + g.name(), g.domain(), f.codomain(), [f, g](const Point &p) { return f(g(p)); }};
  }

private:
  std::string name_;
  SpaceModel domain_, codomain_;
  Rule rule_;
};

struct UniformRow {
  Dist scale = 0;
  Dist innerS = 0; ///< max image distance over pairs inside the inner half window
  Dist fullS = 0;  ///< same over the whole window
};

struct ProperRow {
  Dist radius = 0; ///< ball around the codomain basepoint
  Dist bound = 0;  ///< largest norm of a preimage point
  BoundednessCertificate::Verdict verdict = BoundednessCertificate::Verdict::Inconclusive;
};

struct MapCheckReport {
  std::string map;
  std::vector<UniformRow> uniform;
  Tri coarselyUniform = Tri::Inconclusive;
  std::vector<ProperRow> proper;
  Tri coarselyProper = Tri::Inconclusive;
  Dist closeInner = 0, closeFull = 0;
  Tri close = Tri::Inconclusive;
  Point farthest; ///< point realizing closeFull

  Tri coarse() const {
    if (coarselyUniform == Tri::No || coarselyProper == Tri::No) return Tri::No;
    if (coarselyUniform == Tri::Yes && coarselyProper == Tri::Yes) return Tri::Yes;
    return Tri::Inconclusive;
  }
};

namespace detail {

/// A window-relative stability verdict: equal on the inner half and the full
/// window means the quantity stopped growing.
inline Tri stableVerdict(Dist inner, Dist full, bool complete) {
  if (complete || inner == full) return Tri::Yes;
  return full >= inner + 2 ? Tri::No : Tri::Inconclusive;
}

} // namespace detail

/// Empirical S(R) table and properness on balls of radius W/8 and W/4.
inline MapCheckReport checkCoarse(const CoarseMap &a, const Sweep &sweep = {}) {
  MapCheckReport rep;
  rep.map = a.name();
  WindowIndex index(a.domain(), sweep.pointCap);
  const Dist w = a.domain().windowRadius();
  std::vector<Point> image(index.size());
  parallelFor(index.size(), sweep.jobs, [&](std::size_t i) { image[i] = a(index.point(i)); });

  bool uniform = true, growing = false;
  for (Dist r : sweep.scales) {
    UniformRow row{r, 0, 0};
    const auto &nb = index.neighbors(r);
    for (std::size_t i = 0; i < index.size(); ++i)
      for (auto j : nb.of(i)) {
        Dist d = a.codomain().distance(image[i], image[j]);
        row.fullS = std::max(row.fullS, d);
        if (2 * std::max(index.norm(i), index.norm(j)) <= w) row.innerS = std::max(row.innerS, d);
      }
    Tri t = detail::stableVerdict(row.innerS, row.fullS, a.domain().complete());
    uniform = uniform && t == Tri::Yes;
    growing = growing || t == Tri::No;
    rep.uniform.push_back(row);
  }
  rep.coarselyUniform = uniform ? Tri::Yes : growing ? Tri::No : Tri::Inconclusive;

  const Dist wy = a.codomain().windowRadius();
  std::vector<Dist> radii = a.codomain().complete() ? std::vector<Dist>{wy} : std::vector<Dist>{wy / 8, wy / 4};
  std::vector<ScaleRow> rows;
  for (Dist r : radii) {
    ProperRow row{r, 0, BoundednessCertificate::Verdict::Bounded};
    for (std::size_t i = 0; i < index.size(); ++i)
      if (a.codomain().norm(image[i]) <= r) row.bound = std::max(row.bound, index.norm(i));
    row.verdict = a.domain().complete() ? BoundednessCertificate::Verdict::Bounded : classifyRadius(row.bound, w, sweep);
    ScaleRow sr;
    sr.cert.verdict = row.verdict;
    rows.push_back(sr);
    rep.proper.push_back(row);
  }
  rep.coarselyProper = aggregate(rows);
  return rep;
}

/// sup d(a(x), b(x)) on the inner half and on the whole window.
inline MapCheckReport checkClose(const CoarseMap &a, const CoarseMap &b, const Sweep &sweep = {}) {
  require(a.domain().describe() == b.domain().describe() && a.codomain().describe() == b.codomain().describe(),
          ErrorKind::InvalidArgument, "closeness needs maps with the same domain and codomain");
  MapCheckReport rep;
  rep.map = a.name() + " ~ " + b.name();
  WindowIndex index(a.domain(), sweep.pointCap);
  const Dist w = a.domain().windowRadius();
  std::vector<Dist> d(index.size());
  parallelFor(index.size(), sweep.jobs, [&](std::size_t i) {
    const auto &p = index.point(i);
    d[i] = a.codomain().distance(a(p), b(p));
  });
  std::size_t arg = 0;
  for (std::size_t i = 0; i < index.size(); ++i) {
    if (d[i] > rep.closeFull) {
      rep.closeFull = d[i];
      arg = i;
    }
    if (2 * index.norm(i) <= w) rep.closeInner = std::max(rep.closeInner, d[i]);
  }
  rep.farthest = index.point(arg);
  rep.close = detail::stableVerdict(rep.closeInner, rep.closeFull, a.domain().complete());
  return rep;
}

} // namespace coarsecoh
