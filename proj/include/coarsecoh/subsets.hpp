#pragma once

// Symbolic subsets of a space model. Expressions are immutable trees shared
// by pointer; every node has a canonical text form that doubles as its
// identity in caches and config files.

#include "coarsecoh/error.hpp"
#include "coarsecoh/parallel.hpp"
#include "coarsecoh/space.hpp"

#include <cctype>
#include <functional>
#include <map>
#include <memory>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

namespace coarsecoh {

using Mask = std::vector<std::uint8_t>;

/// One summand of a cone comparison: coeff * (x_axis | |x_axis| | d(x,0) | 1).
struct LinearTerm {
  enum class Kind { Coordinate, Absolute, Norm, Constant };
  Kind kind = Kind::Constant;
  int axis = 0;
  Coord coeff = 1;
};

enum class CompareOp { Le, Lt, Ge, Gt };

class SubsetExpr {
public:
  enum class Kind { All, Empty, HalfSpace, Quadrant, Cone, Ball, Points, TreePrefix, Predicate, Not, And, Or, Thicken };

  struct Node {
    Kind kind = Kind::All;
    int axis = 0;
    char sign = '+';
    Coord offset = 0;
    std::vector<char> signs;
    CompareOp op = CompareOp::Le;
    std::vector<LinearTerm> lhs, rhs;
    Point center;
    Dist radius = 0;
    std::vector<Point> points;
    std::string name;
    std::function<bool(const Point &)> predicate;
    std::vector<SubsetExpr> children;
    std::string text;
  };

  SubsetExpr() : SubsetExpr(all()) {}

  static SubsetExpr all() { return make([](Node &n) { n.kind = Kind::All; }); }
  static SubsetExpr empty() { return make([](Node &n) { n.kind = Kind::Empty; }); }

  /// sign '+' selects x_axis >= offset, '-' selects x_axis < offset.
  static SubsetExpr halfSpace(int axis, char sign, Coord offset = 0) {
    require(axis >= 0, ErrorKind::InvalidArgument, "half-space axis must be >= 0");
    require(sign == '+' || sign == '-', ErrorKind::InvalidArgument, "half-space sign must be + or -");
    return make([&](Node &n) {
      n.kind = Kind::HalfSpace;
      n.axis = axis;
      n.sign = sign;
      n.offset = offset;
    });
  }

  /// Per-axis signs: '+' is x_i >= 0, '-' is x_i < 0, '*' leaves the axis free.
  static SubsetExpr quadrant(std::vector<char> signs) {
    for (char s : signs)
      require(s == '+' || s == '-' || s == '*', ErrorKind::InvalidArgument, "quadrant signs must be +, - or *");
    return make([&](Node &n) {
      n.kind = Kind::Quadrant;
      n.signs = std::move(signs);
    });
  }

  static SubsetExpr cone(CompareOp op, std::vector<LinearTerm> lhs, std::vector<LinearTerm> rhs) {
    return make([&](Node &n) {
      n.kind = Kind::Cone;
      n.op = op;
      n.lhs = std::move(lhs);
      n.rhs = std::move(rhs);
    });
  }

  static SubsetExpr ball(Point center, Dist r) {
    require(r >= 0, ErrorKind::InvalidArgument, "ball radius must be nonnegative");
    return make([&](Node &n) {
      n.kind = Kind::Ball;
      n.center = std::move(center);
      n.radius = r;
    });
  }

  static SubsetExpr points(std::vector<Point> pts) {
    std::sort(pts.begin(), pts.end());
    pts.erase(std::unique(pts.begin(), pts.end()), pts.end());
    return make([&](Node &n) {
      n.kind = Kind::Points;
      n.points = std::move(pts);
    });
  }

  /// Tree vertices in the subtree below `vertex` (inclusive).
  static SubsetExpr treePrefix(Point vertex) {
    return make([&](Node &n) {
      n.kind = Kind::TreePrefix;
      n.center = std::move(vertex);
    });
  }

  /// Opaque membership test; `name` must identify the predicate uniquely.
  static SubsetExpr predicate(std::string name, std::function<bool(const Point &)> fn) {
    return make([&](Node &n) {
      n.kind = Kind::Predicate;
      n.name = std::move(name);
      n.predicate = std::move(fn);
    });
  }

  static SubsetExpr complement(SubsetExpr e) {
    return make([&](Node &n) {
      n.kind = Kind::Not;
      n.children = {std::move(e)};
    });
  }

  static SubsetExpr intersection(std::vector<SubsetExpr> es) {
    require(!es.empty(), ErrorKind::InvalidArgument, "and() needs at least one operand");
    if (es.size() == 1) return es.front();
    return make([&](Node &n) {
      n.kind = Kind::And;
      n.children = std::move(es);
    });
  }

  static SubsetExpr unite(std::vector<SubsetExpr> es) {
    require(!es.empty(), ErrorKind::InvalidArgument, "or() needs at least one operand");
    if (es.size() == 1) return es.front();
    return make([&](Node &n) {
      n.kind = Kind::Or;
      n.children = std::move(es);
    });
  }

  static SubsetExpr thicken(SubsetExpr e, Dist r) {
    require(r >= 0, ErrorKind::InvalidArgument, "thickening radius must be nonnegative");
    return make([&](Node &n) {
      n.kind = Kind::Thicken;
      n.children = {std::move(e)};
      n.radius = r;
    });
  }

  const Node &node() const { return *node_; }
  Kind kind() const { return node_->kind; }
  const std::string &text() const { return node_->text; }

  bool operator==(const SubsetExpr &o) const { return text() == o.text(); }

private:
  template <class Fill>
  static SubsetExpr make(Fill &&fill) {
    auto n = std::make_shared<Node>();
    fill(*n);
    n->text = render(*n);
    SubsetExpr e(nullptr);
    e.node_ = std::move(n);
    return e;
  }

  explicit SubsetExpr(std::nullptr_t) {}

  static std::string renderTerms(const std::vector<LinearTerm> &terms) {
    if (terms.empty()) return "0";
    std::string out;
    for (std::size_t i = 0; i < terms.size(); ++i) {
      const auto &t = terms[i];
      Coord c = t.coeff;
      if (i > 0) out += c < 0 ? "-" : "+";
      else if (c < 0) out += "-";
      Coord a = c < 0 ? -c : c;
      if (t.kind == LinearTerm::Kind::Constant) {
        out += std::to_string(a);
        continue;
      }
      if (a != 1) out += std::to_string(a) + "*";
      switch (t.kind) {
      case LinearTerm::Kind::Coordinate: out += "x" + std::to_string(t.axis); break;
      case LinearTerm::Kind::Absolute: out += "|x" + std::to_string(t.axis) + "|"; break;
      case LinearTerm::Kind::Norm: out += "norm"; break;
      case LinearTerm::Kind::Constant: break;
      }
    }
    return out;
  }

  static std::string render(const Node &n) {
    auto joinChildren = [&](std::string head) {
      head += "(";
      for (std::size_t i = 0; i < n.children.size(); ++i) head += (i ? "," : "") + n.children[i].text();
      return head + ")";
    };
    switch (n.kind) {
    case Kind::All: return "all";
    case Kind::Empty: return "empty";
    case Kind::HalfSpace: {
      std::string s = "halfspace(axis=" + std::to_string(n.axis) + ",sign=" + n.sign;
      if (n.offset != 0) s += ",offset=" + std::to_string(n.offset);
      return s + ")";
    }
    case Kind::Quadrant: {
      std::string s = "quadrant(";
      for (std::size_t i = 0; i < n.signs.size(); ++i) (s += (i ? "," : "")) += n.signs[i];
      return s + ")";
    }
    case Kind::Cone: {
      static constexpr const char *ops[] = {"le", "lt", "ge", "gt"};
      return std::string("cone(") + ops[static_cast<int>(n.op)] + "," + renderTerms(n.lhs) + "," +
             renderTerms(n.rhs) + ")";
    }
    case Kind::Ball: return "ball(" + toString(n.center) + "," + std::to_string(n.radius) + ")";
    case Kind::Points: {
      std::string s = "points(";
      for (std::size_t i = 0; i < n.points.size(); ++i) s += (i ? "," : "") + toString(n.points[i]);
      return s + ")";
    }
    case Kind::TreePrefix: {
      std::string s = "prefix(";
      for (std::size_t i = 0; i < n.center.size(); ++i) s += (i ? "," : "") + std::to_string(n.center[i]);
      return s + ")";
    }
    case Kind::Predicate: return "pred(" + n.name + ")";
    case Kind::Not: return joinChildren("not");
    case Kind::And: return joinChildren("and");
    case Kind::Or: return joinChildren("or");
    case Kind::Thicken: return "thicken(" + n.children[0].text() + "," + std::to_string(n.radius) + ")";
    }
    return "?";
  }

  std::shared_ptr<const Node> node_;
};

inline SubsetExpr operator!(const SubsetExpr &e) { return SubsetExpr::complement(e); }
inline SubsetExpr operator&(const SubsetExpr &a, const SubsetExpr &b) { return SubsetExpr::intersection({a, b}); }
inline SubsetExpr operator|(const SubsetExpr &a, const SubsetExpr &b) { return SubsetExpr::unite({a, b}); }

namespace detail {

inline Coord termValue(const std::vector<LinearTerm> &terms, const SpaceModel &space, const Point &p) {
  Coord v = 0;
  for (const auto &t : terms) {
    switch (t.kind) {
    case LinearTerm::Kind::Coordinate:
    case LinearTerm::Kind::Absolute: {
      require(static_cast<std::size_t>(t.axis) < p.size(), ErrorKind::InvalidArgument,
              "cone term refers to axis " + std::to_string(t.axis) + " beyond the point dimension");
      Coord x = p[static_cast<std::size_t>(t.axis)];
      v += t.coeff * (t.kind == LinearTerm::Kind::Absolute && x < 0 ? -x : x);
      break;
    }
    case LinearTerm::Kind::Norm: v += t.coeff * space.norm(p); break;
    case LinearTerm::Kind::Constant: v += t.coeff; break;
    }
  }
  return v;
}

inline bool compare(CompareOp op, Coord a, Coord b) {
  switch (op) {
  case CompareOp::Le: return a <= b;
  case CompareOp::Lt: return a < b;
  case CompareOp::Ge: return a >= b;
  case CompareOp::Gt: return a > b;
  }
  return false;
}

} // namespace detail

/// Exact membership of a window point.
inline bool contains(const SubsetExpr &e, const SpaceModel &space, const Point &p) {
  using K = SubsetExpr::Kind;
  const auto &n = e.node();
  switch (n.kind) {
  case K::All: return true;
  case K::Empty: return false;
  case K::HalfSpace: {
    require(static_cast<std::size_t>(n.axis) < p.size(), ErrorKind::InvalidArgument,
            "half-space axis beyond the point dimension");
    Coord x = p[static_cast<std::size_t>(n.axis)];
    return n.sign == '+' ? x >= n.offset : x < n.offset;
  }
  case K::Quadrant: {
    require(n.signs.size() <= p.size(), ErrorKind::InvalidArgument, "quadrant has more signs than axes");
    for (std::size_t i = 0; i < n.signs.size(); ++i) {
      if (n.signs[i] == '+' && p[i] < 0) return false;
      if (n.signs[i] == '-' && p[i] >= 0) return false;
    }
    return true;
  }
  case K::Cone:
    return detail::compare(n.op, detail::termValue(n.lhs, space, p), detail::termValue(n.rhs, space, p));
  case K::Ball: return space.distanceUnchecked(n.center, p) <= n.radius;
  case K::Points: return std::binary_search(n.points.begin(), n.points.end(), p);
  case K::TreePrefix:
    return p.size() >= n.center.size() && std::equal(n.center.c.begin(), n.center.c.end(), p.c.begin());
  case K::Predicate: return n.predicate(p);
  case K::Not: return !contains(n.children[0], space, p);
  case K::And:
    for (const auto &c : n.children)
      if (!contains(c, space, p)) return false;
    return true;
  case K::Or:
    for (const auto &c : n.children)
      if (contains(c, space, p)) return true;
    return false;
  case K::Thicken:
    for (const auto &q : space.ball(p, n.radius))
      if (contains(n.children[0], space, q)) return true;
    return false;
  }
  return false;
}

/// Membership of every point of an enumerated window.
inline Mask evaluateMask(const SubsetExpr &e, const WindowIndex &index, unsigned jobs = 1) {
  using K = SubsetExpr::Kind;
  const auto &n = e.node();
  const std::size_t size = index.size();
  Mask out(size, 0);
  switch (n.kind) {
  case K::All: std::fill(out.begin(), out.end(), 1); return out;
  case K::Empty: return out;
  case K::Not: {
    Mask m = evaluateMask(n.children[0], index, jobs);
    for (std::size_t i = 0; i < size; ++i) out[i] = !m[i];
    return out;
  }
  case K::And:
  case K::Or: {
    out = evaluateMask(n.children[0], index, jobs);
    for (std::size_t c = 1; c < n.children.size(); ++c) {
      Mask m = evaluateMask(n.children[c], index, jobs);
      for (std::size_t i = 0; i < size; ++i) out[i] = n.kind == K::And ? (out[i] && m[i]) : (out[i] || m[i]);
    }
    return out;
  }
  case K::Thicken: {
    Mask inner = evaluateMask(n.children[0], index, jobs);
    const auto &nb = index.neighbors(n.radius);
    parallelFor(size, jobs, [&](std::size_t i) {
      for (auto j : nb.of(i))
        if (inner[j]) {
          out[i] = 1;
          break;
        }
    });
    return out;
  }
  default:
    parallelFor(size, jobs, [&](std::size_t i) { out[i] = contains(e, index.space(), index.point(i)) ? 1 : 0; });
    return out;
  }
}

// ---------------------------------------------------------------------------
// Closed-form box algebra on lattices.

inline constexpr Coord kNegInf = std::numeric_limits<Coord>::min() / 4;
inline constexpr Coord kPosInf = std::numeric_limits<Coord>::max() / 4;

struct Interval {
  Coord lo = kNegInf;
  Coord hi = kPosInf;
  bool empty() const { return lo > hi; }
  bool boundedBelow() const { return lo > kNegInf; }
  bool boundedAbove() const { return hi < kPosInf; }
  bool bounded() const { return boundedBelow() && boundedAbove(); }
};

/// Axis-parallel product of integer intervals.
struct Box {
  std::vector<Interval> axes;

  bool empty() const {
    return std::any_of(axes.begin(), axes.end(), [](const Interval &i) { return i.empty(); });
  }
  bool bounded() const {
    return empty() || std::all_of(axes.begin(), axes.end(), [](const Interval &i) { return i.bounded(); });
  }
  int unboundedAxes() const {
    int k = 0;
    for (const auto &i : axes) k += !i.bounded();
    return k;
  }
  bool contains(const Point &p) const {
    for (std::size_t i = 0; i < axes.size(); ++i)
      if (p[i] < axes[i].lo || p[i] > axes[i].hi) return false;
    return true;
  }
};

inline Box intersect(const Box &a, const Box &b) {
  Box out = a;
  for (std::size_t i = 0; i < out.axes.size(); ++i) {
    out.axes[i].lo = std::max(a.axes[i].lo, b.axes[i].lo);
    out.axes[i].hi = std::min(a.axes[i].hi, b.axes[i].hi);
  }
  return out;
}

/// The lattice itself (half axes included) as a box.
inline Box ambientBox(const SpaceModel &space) {
  Box b;
  for (int i = 0; i < space.latticeDim(); ++i)
    b.axes.push_back(Interval{space.axisNonnegative(i) ? 0 : kNegInf, kPosInf});
  return b;
}

/// Largest norm of a box point; requires a bounded nonempty box.
inline Dist boxMaxNorm(const Box &b, Metric metric) {
  Dist out = 0;
  for (const auto &i : b.axes) {
    Dist a = std::max(i.lo < 0 ? -i.lo : i.lo, i.hi < 0 ? -i.hi : i.hi);
    out = metric == Metric::L1 ? out + a : std::max(out, a);
  }
  return out;
}

/// Point of the box closest to the origin, coordinatewise.
inline Point boxNearestPoint(const Box &b) {
  Point p;
  for (const auto &i : b.axes) p.c.push_back(std::clamp<Coord>(0, i.lo, i.hi));
  return p;
}

/// Union of boxes; `exact` is false when a thickening was over-approximated.
struct BoxUnion {
  std::vector<Box> boxes;
  bool exact = true;
};

namespace detail {

inline constexpr std::size_t kBoxUnionCap = 4096;

inline void pruneEmpty(std::vector<Box> &boxes) {
  boxes.erase(std::remove_if(boxes.begin(), boxes.end(), [](const Box &b) { return b.empty(); }), boxes.end());
}

inline std::optional<BoxUnion> toBoxesRaw(const SubsetExpr &e, const SpaceModel &space) {
  using K = SubsetExpr::Kind;
  const auto &n = e.node();
  const auto dim = static_cast<std::size_t>(space.latticeDim());
  const Box ambient = ambientBox(space);
  switch (n.kind) {
  case K::All: return BoxUnion{{ambient}, true};
  case K::Empty: return BoxUnion{{}, true};
  case K::HalfSpace: {
    if (static_cast<std::size_t>(n.axis) >= dim) return std::nullopt;
    Box b = ambient;
    auto &iv = b.axes[static_cast<std::size_t>(n.axis)];
    if (n.sign == '+') iv.lo = std::max(iv.lo, n.offset);
    else iv.hi = std::min(iv.hi, n.offset - 1);
    return BoxUnion{{b}, true};
  }
  case K::Quadrant: {
    if (n.signs.size() > dim) return std::nullopt;
    Box b = ambient;
    for (std::size_t i = 0; i < n.signs.size(); ++i) {
      if (n.signs[i] == '+') b.axes[i].lo = std::max<Coord>(b.axes[i].lo, 0);
      if (n.signs[i] == '-') b.axes[i].hi = std::min<Coord>(b.axes[i].hi, -1);
    }
    return BoxUnion{{b}, true};
  }
  case K::And:
  case K::Or: {
    std::optional<BoxUnion> acc;
    for (const auto &c : n.children) {
      auto part = toBoxesRaw(c, space);
      if (!part) return std::nullopt;
      if (!acc) {
        acc = std::move(part);
        continue;
      }
      acc->exact = acc->exact && part->exact;
      if (n.kind == K::Or) {
        acc->boxes.insert(acc->boxes.end(), part->boxes.begin(), part->boxes.end());
      } else {
        std::vector<Box> next;
        for (const auto &a : acc->boxes)
          for (const auto &b : part->boxes) next.push_back(intersect(a, b));
        pruneEmpty(next);
        acc->boxes = std::move(next);
      }
      if (acc->boxes.size() > kBoxUnionCap) return std::nullopt;
    }
    return acc;
  }
  case K::Not: {
    auto inner = toBoxesRaw(n.children[0], space);
    if (!inner || !inner->exact) return std::nullopt;
    std::vector<Box> acc{ambient};
    for (const auto &b : inner->boxes) {
      std::vector<Box> pieces;
      for (std::size_t k = 0; k < dim; ++k) {
        if (b.axes[k].lo > ambient.axes[k].lo) {
          Box p = ambient;
          p.axes[k].hi = b.axes[k].lo - 1;
          pieces.push_back(p);
        }
        if (b.axes[k].hi < kPosInf) {
          Box p = ambient;
          p.axes[k].lo = b.axes[k].hi + 1;
          pieces.push_back(p);
        }
      }
      std::vector<Box> next;
      for (const auto &a : acc)
        for (const auto &p : pieces) next.push_back(intersect(a, p));
      pruneEmpty(next);
      acc = std::move(next);
      if (acc.size() > kBoxUnionCap) return std::nullopt;
    }
    return BoxUnion{std::move(acc), true};
  }
  case K::Thicken: {
    auto inner = toBoxesRaw(n.children[0], space);
    if (!inner) return std::nullopt;
    pruneEmpty(inner->boxes);
    const Dist r = n.radius;
    for (auto &b : inner->boxes) {
      for (std::size_t k = 0; k < dim; ++k) {
        auto &iv = b.axes[k];
        if (iv.lo > ambient.axes[k].lo) {
          iv.lo = std::max(ambient.axes[k].lo, iv.lo - r);
        }
        if (iv.hi < kPosInf) {
          iv.hi += r;
        }
      }
      // Under L1 a box with constraints on several axes thickens to a
      // rounded box; the Linf expansion is only an outer bound there.
      int constrainedAxes = 0;
      for (std::size_t k = 0; k < dim; ++k)
        constrainedAxes += (b.axes[k].lo > ambient.axes[k].lo || b.axes[k].hi < kPosInf) ? 1 : 0;
      if (space.metric() == Metric::L1 && constrainedAxes > 1 && r > 0) inner->exact = false;
    }
    return inner;
  }
  default: return std::nullopt;
  }
}

} // namespace detail

/// Closed form of a half-space/quadrant expression on a lattice, or nullopt.
inline std::optional<BoxUnion> toBoxes(const SubsetExpr &e, const SpaceModel &space) {
  if (!space.isLattice()) return std::nullopt;
  auto out = detail::toBoxesRaw(e, space);
  if (out) detail::pruneEmpty(out->boxes);
  return out;
}

// ---------------------------------------------------------------------------
// Boundedness.

struct Sweep {
  std::vector<Dist> scales{1, 2, 4, 8};
  double margin = 0.1;
  std::size_t pointCap = kDefaultWindowCap;
  bool symbolic = true;
  unsigned jobs = 1;

  Dist maxScale() const { return scales.empty() ? 0 : *std::max_element(scales.begin(), scales.end()); }
};

struct BoundednessCertificate {
  enum class Verdict { Bounded, Unbounded, Inconclusive };
  Verdict verdict = Verdict::Inconclusive;
  Dist bound = 0;
  std::vector<Point> witnesses;
  Dist windowRadius = 0;
  std::vector<Dist> scales;
  bool exact = false;

  bool bounded() const { return verdict == Verdict::Bounded; }
  bool unbounded() const { return verdict == Verdict::Unbounded; }
};

inline std::string_view toString(BoundednessCertificate::Verdict v) {
  switch (v) {
  case BoundednessCertificate::Verdict::Bounded: return "bounded";
  case BoundednessCertificate::Verdict::Unbounded: return "unbounded";
  case BoundednessCertificate::Verdict::Inconclusive: return "inconclusive";
  }
  return "?";
}

/// Applies the window margin rule to an observed radius.
inline BoundednessCertificate::Verdict classifyRadius(Dist observed, Dist windowRadius, const Sweep &sweep) {
  using V = BoundednessCertificate::Verdict;
  if (observed + sweep.maxScale() < windowRadius) return V::Bounded;
  if (static_cast<double>(observed) > (1.0 - sweep.margin) * static_cast<double>(windowRadius)) return V::Unbounded;
  return V::Inconclusive;
}

/// Boundedness from a precomputed mask.
inline BoundednessCertificate boundednessOfMask(const Mask &mask, const WindowIndex &index, const Sweep &sweep) {
  BoundednessCertificate cert;
  cert.windowRadius = index.space().windowRadius();
  cert.scales = sweep.scales;
  Dist best = 0;
  for (std::size_t i = 0; i < mask.size(); ++i)
    if (mask[i]) best = std::max(best, index.norm(i));
  cert.bound = best;
  cert.verdict = classifyRadius(best, cert.windowRadius, sweep);
  if (cert.verdict == BoundednessCertificate::Verdict::Unbounded) {
    for (std::size_t i = 0; i < mask.size() && cert.witnesses.size() < 8; ++i)
      if (mask[i] && static_cast<double>(index.norm(i)) > (1.0 - sweep.margin) * cert.windowRadius)
        cert.witnesses.push_back(index.point(i));
  }
  return cert;
}

/// Closed-form verdict for a box union; nullopt when no decision is possible.
inline std::optional<BoundednessCertificate> boundednessOfBoxes(const BoxUnion &u, const SpaceModel &space,
                                                                const Sweep &sweep) {
  BoundednessCertificate cert;
  cert.windowRadius = space.windowRadius();
  cert.scales = sweep.scales;
  cert.exact = u.exact;
  for (const auto &b : u.boxes) {
    if (b.bounded()) {
      cert.bound = std::max(cert.bound, boxMaxNorm(b, space.metric()));
      continue;
    }
    if (!u.exact) return std::nullopt;
    // Push one unbounded axis of the nearest point out to the window edge.
    Point w = boxNearestPoint(b);
    for (std::size_t k = 0; k < b.axes.size(); ++k) {
      if (b.axes[k].bounded()) continue;
      Dist rest = 0;
      Point probe = w;
      probe.c[k] = 0;
      rest = space.norm(probe);
      const bool roundWindow = space.windowShape() == WindowShape::Ball && space.metric() == Metric::L1;
      Coord reach = std::max<Coord>(0, space.latticeRadius() - (roundWindow ? rest : 0));
      probe.c[k] = b.axes[k].boundedAbove() ? -reach : reach;
      if (b.contains(probe) && space.inWindow(probe)) {
        cert.verdict = BoundednessCertificate::Verdict::Unbounded;
        cert.witnesses.push_back(probe);
        cert.bound = std::max(cert.bound, space.norm(probe));
        return cert;
      }
    }
    return std::nullopt;
  }
  cert.verdict = cert.bound + sweep.maxScale() < cert.windowRadius ? BoundednessCertificate::Verdict::Bounded
                                                                   : BoundednessCertificate::Verdict::Inconclusive;
  return cert;
}

/// Windowed boundedness verdict with the sweep margin rule.
inline BoundednessCertificate isBounded(const SubsetExpr &e, const SpaceModel &space, const Sweep &sweep = {}) {
  if (sweep.symbolic) {
    if (auto boxes = toBoxes(e, space))
      if (auto cert = boundednessOfBoxes(*boxes, space, sweep)) return *cert;
  }
  WindowIndex index(space, sweep.pointCap);
  return boundednessOfMask(evaluateMask(e, index, sweep.jobs), index, sweep);
}

// ---------------------------------------------------------------------------
// Text form.

namespace detail {

class SubsetParser {
public:
  SubsetParser(std::string_view text, const std::map<std::string, SubsetExpr> &env) : s_(text), env_(env) {}

  SubsetExpr parseAll() {
    SubsetExpr e = expr();
    skip();
    if (pos_ != s_.size()) error("trailing input");
    return e;
  }

private:
  [[noreturn]] void error(const std::string &what) const {
    fail(ErrorKind::ParseError, what + " at offset " + std::to_string(pos_) + " in '" + std::string(s_) + "'");
  }

  void skip() {
    while (pos_ < s_.size() && std::isspace(static_cast<unsigned char>(s_[pos_]))) ++pos_;
  }

  bool eat(char c) {
    skip();
    if (pos_ < s_.size() && s_[pos_] == c) {
      ++pos_;
      return true;
    }
    return false;
  }

  void expect(char c) {
    if (!eat(c)) error(std::string("expected '") + c + "'");
  }

  std::string ident() {
    skip();
    std::size_t start = pos_;
    while (pos_ < s_.size() && (std::isalnum(static_cast<unsigned char>(s_[pos_])) || s_[pos_] == '_' ||
                                s_[pos_] == '.' || s_[pos_] == '-'))
      ++pos_;
    if (start == pos_) error("expected identifier");
    return std::string(s_.substr(start, pos_ - start));
  }

  Coord integer() {
    skip();
    std::size_t start = pos_;
    if (pos_ < s_.size() && (s_[pos_] == '-' || s_[pos_] == '+')) ++pos_;
    while (pos_ < s_.size() && std::isdigit(static_cast<unsigned char>(s_[pos_]))) ++pos_;
    std::string tok(s_.substr(start, pos_ - start));
    if (tok.empty() || tok == "-" || tok == "+") error("expected integer");
    return std::stoll(tok);
  }

  bool peekDigit() {
    skip();
    return pos_ < s_.size() && std::isdigit(static_cast<unsigned char>(s_[pos_]));
  }

  char signChar() {
    skip();
    if (pos_ < s_.size() && (s_[pos_] == '+' || s_[pos_] == '-' || s_[pos_] == '*')) return s_[pos_++];
    error("expected sign");
  }

  Point tuple() {
    expect('(');
    Point p;
    if (eat(')')) return p;
    do p.c.push_back(integer());
    while (eat(','));
    expect(')');
    return p;
  }

  std::vector<LinearTerm> terms() {
    std::vector<LinearTerm> out;
    Coord sign = 1;
    skip();
    if (eat('-')) sign = -1;
    else eat('+');
    for (;;) {
      LinearTerm t;
      Coord coeff = 1;
      if (peekDigit()) {
        coeff = integer();
        if (!eat('*')) {
          out.push_back({LinearTerm::Kind::Constant, 0, sign * coeff});
          if (!nextSign(sign)) return out;
          continue;
        }
      }
      t.coeff = sign * coeff;
      if (eat('|')) {
        skip();
        if (pos_ >= s_.size() || s_[pos_] != 'x') error("expected x<axis> inside |...|");
        ++pos_;
        t.kind = LinearTerm::Kind::Absolute;
        t.axis = static_cast<int>(integer());
        expect('|');
      } else {
        std::string id = ident();
        if (id == "norm") t.kind = LinearTerm::Kind::Norm;
        else if (id.size() > 1 && id[0] == 'x' && std::all_of(id.begin() + 1, id.end(), ::isdigit)) {
          t.kind = LinearTerm::Kind::Coordinate;
          t.axis = std::stoi(id.substr(1));
        } else error("unknown cone term '" + id + "'");
      }
      out.push_back(t);
      if (!nextSign(sign)) return out;
    }
  }

  bool nextSign(Coord &sign) {
    skip();
    if (pos_ < s_.size() && (s_[pos_] == '+' || s_[pos_] == '-')) {
      sign = s_[pos_] == '-' ? -1 : 1;
      ++pos_;
      return true;
    }
    return false;
  }

  std::vector<SubsetExpr> exprList() {
    std::vector<SubsetExpr> out;
    expect('(');
    do out.push_back(expr());
    while (eat(','));
    expect(')');
    return out;
  }

  SubsetExpr expr() {
    std::string head = ident();
    skip();
    bool call = pos_ < s_.size() && s_[pos_] == '(';
    if (!call) {
      if (head == "all") return SubsetExpr::all();
      if (head == "empty") return SubsetExpr::empty();
      auto it = env_.find(head);
      if (it == env_.end()) error("unknown subset name '" + head + "'");
      return it->second;
    }
    if (head == "all" || head == "empty") {
      expect('(');
      expect(')');
      return head == "all" ? SubsetExpr::all() : SubsetExpr::empty();
    }
    if (head == "halfspace") {
      expect('(');
      int axis = -1;
      char sign = 0;
      Coord offset = 0;
      do {
        std::string key = ident();
        expect('=');
        if (key == "axis") axis = static_cast<int>(integer());
        else if (key == "sign") sign = signChar();
        else if (key == "offset") offset = integer();
        else error("unknown halfspace key '" + key + "'");
      } while (eat(','));
      expect(')');
      if (axis < 0 || sign == 0) error("halfspace needs axis and sign");
      return SubsetExpr::halfSpace(axis, sign, offset);
    }
    if (head == "quadrant") {
      expect('(');
      std::vector<char> signs;
      do signs.push_back(signChar());
      while (eat(','));
      expect(')');
      return SubsetExpr::quadrant(std::move(signs));
    }
    if (head == "cone") {
      expect('(');
      std::string op = ident();
      CompareOp cop;
      if (op == "le") cop = CompareOp::Le;
      else if (op == "lt") cop = CompareOp::Lt;
      else if (op == "ge") cop = CompareOp::Ge;
      else if (op == "gt") cop = CompareOp::Gt;
      else error("unknown comparison '" + op + "'");
      expect(',');
      auto lhs = terms();
      expect(',');
      auto rhs = terms();
      expect(')');
      return SubsetExpr::cone(cop, std::move(lhs), std::move(rhs));
    }
    if (head == "ball") {
      expect('(');
      Point c = tuple();
      expect(',');
      Dist r = integer();
      expect(')');
      return SubsetExpr::ball(std::move(c), r);
    }
    if (head == "points") {
      expect('(');
      std::vector<Point> pts;
      if (!eat(')')) {
        do pts.push_back(tuple());
        while (eat(','));
        expect(')');
      }
      return SubsetExpr::points(std::move(pts));
    }
    if (head == "prefix") {
      expect('(');
      Point v;
      if (!eat(')')) {
        do v.c.push_back(integer());
        while (eat(','));
        expect(')');
      }
      return SubsetExpr::treePrefix(std::move(v));
    }
    if (head == "not") {
      auto args = exprList();
      if (args.size() != 1) error("not() takes one operand");
      return SubsetExpr::complement(args[0]);
    }
    if (head == "and") return SubsetExpr::intersection(exprList());
    if (head == "or") return SubsetExpr::unite(exprList());
    if (head == "thicken") {
      expect('(');
      SubsetExpr inner = expr();
      expect(',');
      Dist r = integer();
      expect(')');
      return SubsetExpr::thicken(inner, r);
    }
    error("unknown subset form '" + head + "'");
  }

  std::string_view s_;
  const std::map<std::string, SubsetExpr> &env_;
  std::size_t pos_ = 0;
};

} // namespace detail

/// Parses the canonical text form; bare identifiers resolve through `env`.
inline SubsetExpr parseSubset(std::string_view text, const std::map<std::string, SubsetExpr> &env = {}) {
  return detail::SubsetParser(text, env).parseAll();
}

} // namespace coarsecoh
