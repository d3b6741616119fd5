#pragma once

// Windowed models of proper metric spaces: lattices Z^n (optionally with
// half axes), rooted trees, explicit finite metrics, and the products used
// for coarse homotopy (asymptotic product X*I, X x Z>=0, X x Z).
//
// A model is infinite in principle; every computation only sees a finite
// window around the basepoint. windowRadius() is the largest radius r such
// that the r-ball around the basepoint lies entirely inside the window.

#include "coarsecoh/error.hpp"

#include <algorithm>
#include <cstddef>
#include <cstdint>
#include <functional>
#include <initializer_list>
#include <limits>
#include <map>
#include <memory>
#include <mutex>
#include <numeric>
#include <optional>
#include <span>
#include <sstream>
#include <string>
#include <unordered_map>
#include <vector>

namespace coarsecoh {

using Coord = std::int64_t;
using Dist = std::int64_t;

inline constexpr std::size_t kDefaultWindowCap = 10'000'000;
/// Window radius reported by models whose window is the whole space.
inline constexpr Dist kCompleteRadius = std::numeric_limits<Dist>::max() / 8;

struct Point {
  std::vector<Coord> c;

  Point() = default;
  Point(std::initializer_list<Coord> init) : c(init) {}
  explicit Point(std::vector<Coord> coords) : c(std::move(coords)) {}

  std::size_t size() const noexcept { return c.size(); }
  Coord operator[](std::size_t i) const { return c[i]; }

  auto operator<=>(const Point &) const = default;
  bool operator==(const Point &) const = default;
};

inline std::string toString(const Point &p) {
  std::string out = "(";
  for (std::size_t i = 0; i < p.size(); ++i) {
    if (i) out += ',';
    out += std::to_string(p[i]);
  }
  return out + ")";
}

struct PointHash {
  std::size_t operator()(const Point &p) const noexcept {
    std::size_t h = 0xcbf29ce484222325ull ^ p.size();
    for (Coord x : p.c) {
      h ^= static_cast<std::size_t>(x) + 0x9e3779b97f4a7c15ull + (h << 6) + (h >> 2);
    }
    return h;
  }
};

enum class Metric { L1, Linf };
enum class WindowShape { Box, Ball };
enum class SpaceKind {
  LatticeBox,
  RootedTree,
  ExplicitFinite,
  AsymptoticProduct,
  ProductWithRay,
  ProductWithLine,
};

inline std::string_view toString(SpaceKind k) {
  switch (k) {
  case SpaceKind::LatticeBox: return "lattice";
  case SpaceKind::RootedTree: return "tree";
  case SpaceKind::ExplicitFinite: return "explicit";
  case SpaceKind::AsymptoticProduct: return "asymptotic-product";
  case SpaceKind::ProductWithRay: return "product-ray";
  case SpaceKind::ProductWithLine: return "product-line";
  }
  return "?";
}

class SpaceModel {
  struct Impl {
    SpaceKind kind = SpaceKind::LatticeBox;
    // lattice
    int dim = 0;
    Coord radius = 0;
    Metric metric = Metric::L1;
    WindowShape shape = WindowShape::Box;
    std::vector<bool> nonnegative;
    // tree
    std::vector<int> branching;
    // explicit finite
    std::vector<std::vector<Dist>> matrix;
    // products
    std::shared_ptr<const Impl> base;
  };

  explicit SpaceModel(std::shared_ptr<const Impl> impl) : impl_(std::move(impl)) {}

public:
  /// Z^n with window [-N,N]^n (Box) or the closed N-ball (Ball). Axes flagged
  /// in `nonnegativeAxes` are restricted to Z>=0.
  static SpaceModel lattice(int dim, Coord radius, Metric metric = Metric::L1,
                            WindowShape shape = WindowShape::Box,
                            std::vector<bool> nonnegativeAxes = {}) {
    require(dim >= 1, ErrorKind::InvalidArgument, "lattice dimension must be >= 1");
    require(radius >= 1, ErrorKind::InvalidArgument, "lattice window radius must be >= 1");
    if (nonnegativeAxes.empty()) nonnegativeAxes.assign(static_cast<std::size_t>(dim), false);
    require(nonnegativeAxes.size() == static_cast<std::size_t>(dim), ErrorKind::InvalidArgument,
            "nonnegative-axis flags must match the dimension");
    auto impl = std::make_shared<Impl>();
    impl->kind = SpaceKind::LatticeBox;
    impl->dim = dim;
    impl->radius = radius;
    impl->metric = metric;
    impl->shape = shape;
    impl->nonnegative = std::move(nonnegativeAxes);
    return SpaceModel(std::move(impl));
  }

  /// Z>=0 on the window [0, N].
  static SpaceModel halfLine(Coord radius) {
    return lattice(1, radius, Metric::L1, WindowShape::Box, {true});
  }

  /// I_0 = Z>=0 x Z>=0 with the Manhattan metric, windowed by the L1 ball so
  /// that norm-preserving maps stay inside the window.
  static SpaceModel quadrantI0(Coord radius) {
    return lattice(2, radius, Metric::L1, WindowShape::Ball, {true, true});
  }

  static SpaceModel tree(int branching, int depth) {
    require(branching >= 1, ErrorKind::InvalidArgument, "tree branching must be >= 1");
    require(depth >= 1, ErrorKind::InvalidArgument, "tree depth must be >= 1");
    return tree(std::vector<int>(static_cast<std::size_t>(depth), branching));
  }

  /// Rooted tree whose vertices at depth k have branchingPerLevel[k] children.
  static SpaceModel tree(std::vector<int> branchingPerLevel) {
    require(!branchingPerLevel.empty(), ErrorKind::InvalidArgument, "tree depth must be >= 1");
    for (int b : branchingPerLevel)
      require(b >= 1, ErrorKind::InvalidArgument, "tree branching must be >= 1");
    auto impl = std::make_shared<Impl>();
    impl->kind = SpaceKind::RootedTree;
    impl->branching = std::move(branchingPerLevel);
    return SpaceModel(std::move(impl));
  }

  static SpaceModel explicitFinite(std::vector<std::vector<Dist>> matrix) {
    const std::size_t n = matrix.size();
    require(n >= 1, ErrorKind::InvalidArgument, "explicit space needs at least one point");
    for (std::size_t i = 0; i < n; ++i) {
      require(matrix[i].size() == n, ErrorKind::InvalidArgument, "distance matrix must be square");
      for (std::size_t j = 0; j < n; ++j) {
        require(matrix[i][j] >= 0, ErrorKind::InvalidArgument, "distances must be nonnegative");
        require((matrix[i][j] == 0) == (i == j), ErrorKind::InvalidArgument,
                "distance must vanish exactly on the diagonal");
      }
    }
    for (std::size_t i = 0; i < n; ++i)
      for (std::size_t j = 0; j < n; ++j) {
        require(matrix[i][j] == matrix[j][i], ErrorKind::InvalidArgument,
                "distance matrix must be symmetric");
        for (std::size_t k = 0; k < n; ++k)
          require(matrix[i][k] <= matrix[i][j] + matrix[j][k], ErrorKind::InvalidArgument,
                  "distance matrix violates the triangle inequality");
      }
    auto impl = std::make_shared<Impl>();
    impl->kind = SpaceKind::ExplicitFinite;
    impl->matrix = std::move(matrix);
    return SpaceModel(std::move(impl));
  }

  /// X*I = {(x,(s,t)) : s,t >= 0, s + t = d(x, x0)} with the sum metric.
  static SpaceModel asymptoticProduct(const SpaceModel &base) {
    auto impl = std::make_shared<Impl>();
    impl->kind = SpaceKind::AsymptoticProduct;
    impl->base = base.impl_;
    return SpaceModel(std::move(impl));
  }

  /// X x Z>=0 with window t in [0, N] and the L1 combination of metrics.
  static SpaceModel productWithRay(const SpaceModel &base, Coord radius) {
    require(radius >= 1, ErrorKind::InvalidArgument, "product window radius must be >= 1");
    auto impl = std::make_shared<Impl>();
    impl->kind = SpaceKind::ProductWithRay;
    impl->base = base.impl_;
    impl->radius = radius;
    return SpaceModel(std::move(impl));
  }

  /// X x Z with window t in [-N, N] and the L1 combination of metrics.
  static SpaceModel productWithLine(const SpaceModel &base, Coord radius) {
    require(radius >= 1, ErrorKind::InvalidArgument, "product window radius must be >= 1");
    auto impl = std::make_shared<Impl>();
    impl->kind = SpaceKind::ProductWithLine;
    impl->base = base.impl_;
    impl->radius = radius;
    return SpaceModel(std::move(impl));
  }

  SpaceKind kind() const { return impl_->kind; }
  bool isLattice() const { return impl_->kind == SpaceKind::LatticeBox; }
  int latticeDim() const { return impl_->dim; }
  Metric metric() const { return impl_->metric; }
  WindowShape windowShape() const { return impl_->shape; }
  Coord latticeRadius() const { return impl_->radius; }
  bool axisNonnegative(int axis) const { return impl_->nonnegative.at(static_cast<std::size_t>(axis)); }
  const std::vector<int> &treeBranching() const { return impl_->branching; }
  int treeDepth() const { return static_cast<int>(impl_->branching.size()); }
  std::size_t explicitSize() const { return impl_->matrix.size(); }
  const std::vector<std::vector<Dist>> &explicitMatrix() const { return impl_->matrix; }
  Coord productRadius() const { return impl_->radius; }

  bool hasBase() const { return impl_->base != nullptr; }
  SpaceModel base() const {
    require(hasBase(), ErrorKind::InvalidArgument, "space has no base factor");
    return SpaceModel(impl_->base);
  }

  bool operator==(const SpaceModel &other) const { return describe() == other.describe(); }

  /// Canonical one-line description; equal descriptions mean equal models.
  std::string describe() const { return describe(*impl_); }

  Point basepoint() const { return basepoint(*impl_); }

  bool inWindow(const Point &p) const { return inWindow(*impl_, p); }

  /// True when the window is the whole space (explicit finite models).
  bool complete() const { return complete(*impl_); }

  Dist windowRadius() const { return windowRadius(*impl_); }

  Dist distance(const Point &p, const Point &q) const {
    require(inWindow(p), ErrorKind::PointOutsideWindow, toString(p));
    require(inWindow(q), ErrorKind::PointOutsideWindow, toString(q));
    return rawDistance(*impl_, p, q);
  }

  /// Distance without window validation; callers guarantee membership.
  Dist distanceUnchecked(const Point &p, const Point &q) const { return rawDistance(*impl_, p, q); }

  Dist norm(const Point &p) const { return rawDistance(*impl_, basepoint(), p); }

  std::size_t windowSize() const { return windowSize(*impl_); }

  std::vector<Point> window(std::size_t cap = kDefaultWindowCap) const {
    const std::size_t count = windowSize();
    if (count > cap)
      fail(ErrorKind::WindowTooLarge,
           describe() + " has " + std::to_string(count) + " window points (cap " + std::to_string(cap) + ")");
    std::vector<Point> out;
    out.reserve(count);
    enumerate(*impl_, out);
    std::sort(out.begin(), out.end());
    return out;
  }

  /// Window points at distance <= r from center, in lexicographic order.
  std::vector<Point> ball(const Point &center, Dist r) const {
    require(inWindow(center), ErrorKind::PointOutsideWindow, toString(center));
    require(r >= 0, ErrorKind::InvalidArgument, "ball radius must be nonnegative");
    std::vector<Point> out;
    ballInto(*impl_, center, r, out);
    std::sort(out.begin(), out.end());
    out.erase(std::unique(out.begin(), out.end()), out.end());
    return out;
  }

private:
  static std::size_t baseLength(const Impl &impl) {
    switch (impl.kind) {
    case SpaceKind::AsymptoticProduct: return 2;
    case SpaceKind::ProductWithRay:
    case SpaceKind::ProductWithLine: return 1;
    default: return 0;
    }
  }

  static Point prefix(const Point &p, std::size_t tail) {
    return Point(std::vector<Coord>(p.c.begin(), p.c.end() - static_cast<std::ptrdiff_t>(tail)));
  }

  static std::string describe(const Impl &impl) {
    std::ostringstream os;
    switch (impl.kind) {
    case SpaceKind::LatticeBox:
      os << "lattice(dim=" << impl.dim << ",N=" << impl.radius
         << ",metric=" << (impl.metric == Metric::L1 ? "L1" : "Linf")
         << ",window=" << (impl.shape == WindowShape::Box ? "box" : "ball");
      if (std::find(impl.nonnegative.begin(), impl.nonnegative.end(), true) != impl.nonnegative.end()) {
        os << ",nonneg=";
        for (bool b : impl.nonnegative) os << (b ? '+' : '*');
      }
      os << ")";
      break;
    case SpaceKind::RootedTree:
      os << "tree(";
      for (std::size_t i = 0; i < impl.branching.size(); ++i) os << (i ? "," : "") << impl.branching[i];
      os << ")";
      break;
    case SpaceKind::ExplicitFinite:
      os << "explicit(n=" << impl.matrix.size() << ";";
      for (const auto &row : impl.matrix)
        for (Dist d : row) os << d << ' ';
      os << ")";
      break;
    case SpaceKind::AsymptoticProduct:
      os << "asym(" << describe(*impl.base) << ")";
      break;
    case SpaceKind::ProductWithRay:
      os << "ray(" << describe(*impl.base) << ",N=" << impl.radius << ")";
      break;
    case SpaceKind::ProductWithLine:
      os << "line(" << describe(*impl.base) << ",N=" << impl.radius << ")";
      break;
    }
    return os.str();
  }

  static Point basepoint(const Impl &impl) {
    switch (impl.kind) {
    case SpaceKind::LatticeBox: return Point(std::vector<Coord>(static_cast<std::size_t>(impl.dim), 0));
    case SpaceKind::RootedTree: return Point{};
    case SpaceKind::ExplicitFinite: return Point{0};
    case SpaceKind::AsymptoticProduct: {
      Point p = basepoint(*impl.base);
      p.c.push_back(0);
      p.c.push_back(0);
      return p;
    }
    case SpaceKind::ProductWithRay:
    case SpaceKind::ProductWithLine: {
      Point p = basepoint(*impl.base);
      p.c.push_back(0);
      return p;
    }
    }
    return Point{};
  }

  static Dist latticeNorm(const Impl &impl, const Point &p) {
    Dist n = 0;
    for (Coord x : p.c) {
      Dist a = x < 0 ? -x : x;
      n = impl.metric == Metric::L1 ? n + a : std::max(n, a);
    }
    return n;
  }

  static bool inWindow(const Impl &impl, const Point &p) {
    switch (impl.kind) {
    case SpaceKind::LatticeBox: {
      if (p.size() != static_cast<std::size_t>(impl.dim)) return false;
      for (std::size_t i = 0; i < p.size(); ++i) {
        if (p[i] > impl.radius || p[i] < (impl.nonnegative[i] ? 0 : -impl.radius)) return false;
      }
      return impl.shape == WindowShape::Box || latticeNorm(impl, p) <= impl.radius;
    }
    case SpaceKind::RootedTree: {
      if (p.size() > impl.branching.size()) return false;
      for (std::size_t i = 0; i < p.size(); ++i)
        if (p[i] < 0 || p[i] >= impl.branching[i]) return false;
      return true;
    }
    case SpaceKind::ExplicitFinite:
      return p.size() == 1 && p[0] >= 0 && static_cast<std::size_t>(p[0]) < impl.matrix.size();
    case SpaceKind::AsymptoticProduct: {
      if (p.size() < 2) return false;
      Point x = prefix(p, 2);
      if (!inWindow(*impl.base, x)) return false;
      Coord s = p.c[p.size() - 2], t = p.c[p.size() - 1];
      return s >= 0 && t >= 0 && s + t == rawDistance(*impl.base, basepoint(*impl.base), x);
    }
    case SpaceKind::ProductWithRay:
    case SpaceKind::ProductWithLine: {
      if (p.size() < 1) return false;
      Coord t = p.c.back();
      Coord lo = impl.kind == SpaceKind::ProductWithRay ? 0 : -impl.radius;
      return t >= lo && t <= impl.radius && inWindow(*impl.base, prefix(p, 1));
    }
    }
    return false;
  }

  static bool complete(const Impl &impl) {
    switch (impl.kind) {
    case SpaceKind::ExplicitFinite: return true;
    case SpaceKind::AsymptoticProduct: return complete(*impl.base);
    default: return false;
    }
  }

  static Dist windowRadius(const Impl &impl) {
    switch (impl.kind) {
    case SpaceKind::LatticeBox: return impl.radius;
    case SpaceKind::RootedTree: return static_cast<Dist>(impl.branching.size());
    case SpaceKind::ExplicitFinite: return kCompleteRadius;
    case SpaceKind::AsymptoticProduct: {
      Dist r = windowRadius(*impl.base);
      return r >= kCompleteRadius ? kCompleteRadius : 2 * r;
    }
    case SpaceKind::ProductWithRay:
    case SpaceKind::ProductWithLine: return std::min<Dist>(windowRadius(*impl.base), impl.radius);
    }
    return 0;
  }

  static Dist rawDistance(const Impl &impl, const Point &p, const Point &q) {
    switch (impl.kind) {
    case SpaceKind::LatticeBox: {
      Dist d = 0;
      for (std::size_t i = 0; i < p.size(); ++i) {
        Dist a = p[i] - q[i];
        a = a < 0 ? -a : a;
        d = impl.metric == Metric::L1 ? d + a : std::max(d, a);
      }
      return d;
    }
    case SpaceKind::RootedTree: {
      std::size_t common = 0;
      while (common < p.size() && common < q.size() && p[common] == q[common]) ++common;
      return static_cast<Dist>(p.size() + q.size() - 2 * common);
    }
    case SpaceKind::ExplicitFinite:
      return impl.matrix[static_cast<std::size_t>(p[0])][static_cast<std::size_t>(q[0])];
    case SpaceKind::AsymptoticProduct: {
      const std::size_t n = p.size();
      Dist d = rawDistance(*impl.base, prefix(p, 2), prefix(q, 2));
      return d + std::abs(p[n - 2] - q[n - 2]) + std::abs(p[n - 1] - q[n - 1]);
    }
    case SpaceKind::ProductWithRay:
    case SpaceKind::ProductWithLine:
      return rawDistance(*impl.base, prefix(p, 1), prefix(q, 1)) + std::abs(p.c.back() - q.c.back());
    }
    return 0;
  }

  static std::size_t windowSize(const Impl &impl) {
    switch (impl.kind) {
    case SpaceKind::LatticeBox: {
      std::size_t box = 1;
      for (bool nonneg : impl.nonnegative) {
        std::size_t side = static_cast<std::size_t>(nonneg ? impl.radius + 1 : 2 * impl.radius + 1);
        if (box > kDefaultWindowCap * 16 / side) return std::numeric_limits<std::size_t>::max();
        box *= side;
      }
      if (impl.shape == WindowShape::Box) return box;
      std::vector<Point> pts;
      if (box > kDefaultWindowCap * 16) return box;
      enumerate(impl, pts);
      return pts.size();
    }
    case SpaceKind::RootedTree: {
      std::size_t total = 1, level = 1;
      for (int b : impl.branching) {
        level *= static_cast<std::size_t>(b);
        total += level;
        if (total > kDefaultWindowCap * 16) return std::numeric_limits<std::size_t>::max();
      }
      return total;
    }
    case SpaceKind::ExplicitFinite: return impl.matrix.size();
    case SpaceKind::AsymptoticProduct: {
      std::vector<Point> pts;
      enumerate(*impl.base, pts);
      std::size_t total = 0;
      const Point bp = basepoint(*impl.base);
      for (const auto &x : pts) total += static_cast<std::size_t>(rawDistance(*impl.base, bp, x)) + 1;
      return total;
    }
    case SpaceKind::ProductWithRay:
      return windowSize(*impl.base) * static_cast<std::size_t>(impl.radius + 1);
    case SpaceKind::ProductWithLine:
      return windowSize(*impl.base) * static_cast<std::size_t>(2 * impl.radius + 1);
    }
    return 0;
  }

  static void enumerate(const Impl &impl, std::vector<Point> &out) {
    switch (impl.kind) {
    case SpaceKind::LatticeBox: {
      const std::size_t n = static_cast<std::size_t>(impl.dim);
      std::vector<Coord> lo(n), cur(n);
      for (std::size_t i = 0; i < n; ++i) lo[i] = cur[i] = impl.nonnegative[i] ? 0 : -impl.radius;
      for (;;) {
        Point p(cur);
        if (impl.shape == WindowShape::Box || latticeNorm(impl, p) <= impl.radius) out.push_back(std::move(p));
        std::size_t i = n;
        while (i > 0) {
          --i;
          if (cur[i] < impl.radius) {
            ++cur[i];
            break;
          }
          cur[i] = lo[i];
          if (i == 0) return;
        }
      }
    }
    case SpaceKind::RootedTree: {
      std::vector<Coord> path;
      std::function<void()> visit = [&] {
        out.push_back(Point(path));
        if (path.size() == impl.branching.size()) return;
        for (int c = 0; c < impl.branching[path.size()]; ++c) {
          path.push_back(c);
          visit();
          path.pop_back();
        }
      };
      visit();
      return;
    }
    case SpaceKind::ExplicitFinite:
      for (std::size_t i = 0; i < impl.matrix.size(); ++i) out.push_back(Point{static_cast<Coord>(i)});
      return;
    case SpaceKind::AsymptoticProduct: {
      std::vector<Point> base;
      enumerate(*impl.base, base);
      const Point bp = basepoint(*impl.base);
      for (const auto &x : base) {
        Dist d = rawDistance(*impl.base, bp, x);
        for (Coord s = 0; s <= d; ++s) {
          Point p = x;
          p.c.push_back(s);
          p.c.push_back(d - s);
          out.push_back(std::move(p));
        }
      }
      return;
    }
    case SpaceKind::ProductWithRay:
    case SpaceKind::ProductWithLine: {
      std::vector<Point> base;
      enumerate(*impl.base, base);
      Coord lo = impl.kind == SpaceKind::ProductWithRay ? 0 : -impl.radius;
      for (const auto &x : base)
        for (Coord t = lo; t <= impl.radius; ++t) {
          Point p = x;
          p.c.push_back(t);
          out.push_back(std::move(p));
        }
      return;
    }
    }
  }

  static void ballInto(const Impl &impl, const Point &center, Dist r, std::vector<Point> &out) {
    switch (impl.kind) {
    case SpaceKind::LatticeBox: {
      const std::size_t n = static_cast<std::size_t>(impl.dim);
      std::vector<Coord> off(n, -r);
      for (;;) {
        Dist len = 0;
        for (Coord x : off) len = impl.metric == Metric::L1 ? len + std::abs(x) : std::max<Dist>(len, std::abs(x));
        if (len <= r) {
          Point p = center;
          for (std::size_t i = 0; i < n; ++i) p.c[i] += off[i];
          if (inWindow(impl, p)) out.push_back(std::move(p));
        }
        std::size_t i = n;
        bool done = true;
        while (i > 0) {
          --i;
          if (off[i] < r) {
            ++off[i];
            done = false;
            break;
          }
          off[i] = -r;
        }
        if (done) return;
      }
    }
    case SpaceKind::RootedTree: {
      // Walk up k steps, then down at most r - k steps into other subtrees.
      std::function<void(Point &, Dist, std::optional<Coord>)> down = [&](Point &v, Dist budget,
                                                                          std::optional<Coord> skip) {
        out.push_back(v);
        if (budget == 0 || v.size() == impl.branching.size()) return;
        for (int c = 0; c < impl.branching[v.size()]; ++c) {
          if (skip && *skip == c) continue;
          v.c.push_back(c);
          down(v, budget - 1, std::nullopt);
          v.c.pop_back();
        }
      };
      Point v = center;
      down(v, r, std::nullopt);
      for (Dist up = 1; up <= r && !v.c.empty(); ++up) {
        Coord from = v.c.back();
        v.c.pop_back();
        down(v, r - up, from);
      }
      return;
    }
    case SpaceKind::ExplicitFinite:
      for (std::size_t i = 0; i < impl.matrix.size(); ++i)
        if (impl.matrix[static_cast<std::size_t>(center[0])][i] <= r) out.push_back(Point{static_cast<Coord>(i)});
      return;
    case SpaceKind::AsymptoticProduct: {
      const std::size_t n = center.size();
      Point cx = prefix(center, 2);
      Coord cs = center[n - 2], ct = center[n - 1];
      std::vector<Point> base;
      ballInto(*impl.base, cx, r, base);
      const Point bp = basepoint(*impl.base);
      for (const auto &x : base) {
        Dist rem = r - rawDistance(*impl.base, cx, x);
        Dist d = rawDistance(*impl.base, bp, x);
        for (Coord s = 0; s <= d; ++s) {
          Coord t = d - s;
          if (std::abs(s - cs) + std::abs(t - ct) <= rem) {
            Point p = x;
            p.c.push_back(s);
            p.c.push_back(t);
            out.push_back(std::move(p));
          }
        }
      }
      return;
    }
    case SpaceKind::ProductWithRay:
    case SpaceKind::ProductWithLine: {
      Point cx = prefix(center, 1);
      Coord ct = center.c.back();
      Coord lo = impl.kind == SpaceKind::ProductWithRay ? 0 : -impl.radius;
      std::vector<Point> base;
      ballInto(*impl.base, cx, r, base);
      for (const auto &x : base) {
        Dist rem = r - rawDistance(*impl.base, cx, x);
        for (Coord t = std::max(lo, ct - rem); t <= std::min(impl.radius, ct + rem); ++t) {
          Point p = x;
          p.c.push_back(t);
          out.push_back(std::move(p));
        }
      }
      return;
    }
    }
  }

  std::shared_ptr<const Impl> impl_;
};

/// R-neighbourhood lists of every window point, in CSR layout.
struct Neighborhoods {
  std::vector<std::size_t> offsets;
  std::vector<std::uint32_t> items;

  std::span<const std::uint32_t> of(std::size_t i) const {
    return {items.data() + offsets[i], offsets[i + 1] - offsets[i]};
  }
};

/// Enumerated window with point lookup and cached neighbourhoods. Lattices
/// use a dense coordinate table; other models hash points.
class WindowIndex {
public:
  explicit WindowIndex(SpaceModel space, std::size_t cap = kDefaultWindowCap)
      : space_(std::move(space)), points_(space_.window(cap)) {
    norms_.reserve(points_.size());
    const Point bp = space_.basepoint();
    for (const auto &p : points_) norms_.push_back(space_.distanceUnchecked(bp, p));
    if (space_.isLattice()) {
      const auto n = static_cast<std::size_t>(space_.latticeDim());
      lo_.resize(n);
      extent_.resize(n);
      std::size_t total = 1;
      for (std::size_t i = 0; i < n; ++i) {
        lo_[i] = space_.axisNonnegative(static_cast<int>(i)) ? 0 : -space_.latticeRadius();
        extent_[i] = space_.latticeRadius() - lo_[i] + 1;
        total *= static_cast<std::size_t>(extent_[i]);
      }
      dense_.assign(total, -1);
      for (std::size_t i = 0; i < points_.size(); ++i) dense_[denseKey(points_[i])] = static_cast<std::int64_t>(i);
    } else {
      hashed_.reserve(points_.size());
      for (std::size_t i = 0; i < points_.size(); ++i) hashed_.emplace(points_[i], static_cast<std::uint32_t>(i));
    }
  }

  const SpaceModel &space() const { return space_; }
  std::size_t size() const { return points_.size(); }
  const Point &point(std::size_t i) const { return points_[i]; }
  const std::vector<Point> &points() const { return points_; }
  Dist norm(std::size_t i) const { return norms_[i]; }
  Dist distance(std::size_t i, std::size_t j) const { return space_.distanceUnchecked(points_[i], points_[j]); }

  std::optional<std::size_t> find(const Point &p) const {
    if (space_.isLattice()) {
      if (p.size() != lo_.size()) return std::nullopt;
      for (std::size_t i = 0; i < p.size(); ++i)
        if (p[i] < lo_[i] || p[i] >= lo_[i] + extent_[i]) return std::nullopt;
      std::int64_t v = dense_[denseKey(p)];
      if (v < 0) return std::nullopt;
      return static_cast<std::size_t>(v);
    }
    auto it = hashed_.find(p);
    if (it == hashed_.end()) return std::nullopt;
    return it->second;
  }

  std::size_t indexOf(const Point &p) const {
    auto i = find(p);
    if (!i) fail(ErrorKind::PointOutsideWindow, toString(p));
    return *i;
  }

  const Neighborhoods &neighbors(Dist radius) const {
    std::lock_guard lock(mutex_);
    auto it = cache_.find(radius);
    if (it != cache_.end()) return *it->second;
    auto nb = std::make_unique<Neighborhoods>();
    nb->offsets.reserve(points_.size() + 1);
    nb->offsets.push_back(0);
    if (space_.isLattice()) {
      std::vector<std::vector<Coord>> offs = latticeOffsets(radius);
      for (const auto &p : points_) {
        for (const auto &o : offs) {
          Point q = p;
          for (std::size_t k = 0; k < q.size(); ++k) q.c[k] += o[k];
          if (auto j = find(q)) nb->items.push_back(static_cast<std::uint32_t>(*j));
        }
        nb->offsets.push_back(nb->items.size());
      }
    } else {
      for (const auto &p : points_) {
        for (const auto &q : space_.ball(p, radius)) nb->items.push_back(static_cast<std::uint32_t>(indexOf(q)));
        nb->offsets.push_back(nb->items.size());
      }
    }
    auto [pos, inserted] = cache_.emplace(radius, std::move(nb));
    return *pos->second;
  }

private:
  std::size_t denseKey(const Point &p) const {
    std::size_t key = 0;
    for (std::size_t i = 0; i < p.size(); ++i)
      key = key * static_cast<std::size_t>(extent_[i]) + static_cast<std::size_t>(p[i] - lo_[i]);
    return key;
  }

  std::vector<std::vector<Coord>> latticeOffsets(Dist r) const {
    const auto n = static_cast<std::size_t>(space_.latticeDim());
    std::vector<std::vector<Coord>> out;
    std::vector<Coord> off(n, -r);
    for (;;) {
      Dist len = 0;
      for (Coord x : off)
        len = space_.metric() == Metric::L1 ? len + std::abs(x) : std::max<Dist>(len, std::abs(x));
      if (len <= r) out.push_back(off);
      std::size_t i = n;
      bool done = true;
      while (i > 0) {
        --i;
        if (off[i] < r) {
          ++off[i];
          done = false;
          break;
        }
        off[i] = -r;
      }
      if (done) return out;
    }
  }

  SpaceModel space_;
  std::vector<Point> points_;
  std::vector<Dist> norms_;
  std::vector<Coord> lo_, extent_;
  std::vector<std::int64_t> dense_;
  std::unordered_map<Point, std::uint32_t, PointHash> hashed_;
  mutable std::mutex mutex_;
  mutable std::map<Dist, std::unique_ptr<Neighborhoods>> cache_;
};

} // namespace coarsecoh
