#pragma once

// Ends of windowed subsets: components of the R-graph on U-points outside
// the r-ball that reach the outer shell of the window, and the resulting
// degree-0 cohomology A^{e(U)}.

#include "coarsecoh/cover.hpp"
#include "coarsecoh/finab.hpp"

#include <numeric>
#include <optional>
#include <string>
#include <vector>

namespace coarsecoh {

inline constexpr double kOuterShell = 0.1;

/// Unbounded components of one (R, r) cell; `label[i]` is the component of
/// window point i, or -1 when i is excluded or in a component that stays
/// away from the outer shell.
struct ComponentLabels {
  std::vector<int> label;
  std::vector<std::size_t> witness; ///< farthest point of each component
  std::size_t count() const { return witness.size(); }
};

namespace detail {

struct UnionFind {
  std::vector<std::uint32_t> parent;
  explicit UnionFind(std::size_t n) : parent(n) { std::iota(parent.begin(), parent.end(), 0u); }
  std::uint32_t find(std::uint32_t x) {
    while (parent[x] != x) {
      parent[x] = parent[parent[x]];
      x = parent[x];
    }
    return x;
  }
  void unite(std::uint32_t a, std::uint32_t b) {
    a = find(a);
    b = find(b);
    if (a != b) parent[std::max(a, b)] = std::min(a, b);
  }
};

} // namespace detail

inline ComponentLabels unboundedComponents(const Mask &u, const WindowIndex &index, Dist scale, Dist inner) {
  const std::size_t n = index.size();
  const double shell = (1.0 - kOuterShell) * static_cast<double>(index.space().windowRadius());
  const auto &nb = index.neighbors(scale);
  detail::UnionFind uf(n);
  auto alive = [&](std::size_t i) { return u[i] && index.norm(i) > inner; };
  for (std::size_t i = 0; i < n; ++i) {
    if (!alive(i)) continue;
    for (auto j : nb.of(i))
      if (j > i && alive(j)) uf.unite(static_cast<std::uint32_t>(i), j);
  }
  // A root is kept when its component reaches the shell; order by root index.
  std::vector<std::int64_t> far(n, -1);
  for (std::size_t i = 0; i < n; ++i) {
    if (!alive(i) || static_cast<double>(index.norm(i)) < shell) continue;
    auto root = uf.find(static_cast<std::uint32_t>(i));
    if (far[root] < 0 || index.norm(i) > index.norm(static_cast<std::size_t>(far[root])))
      far[root] = static_cast<std::int64_t>(i);
  }
  ComponentLabels out;
  out.label.assign(n, -1);
  std::vector<int> idOfRoot(n, -1);
  for (std::size_t root = 0; root < n; ++root)
    if (far[root] >= 0) {
      idOfRoot[root] = static_cast<int>(out.witness.size());
      out.witness.push_back(static_cast<std::size_t>(far[root]));
    }
  for (std::size_t i = 0; i < n; ++i)
    if (alive(i)) out.label[i] = idOfRoot[uf.find(static_cast<std::uint32_t>(i))];
  return out;
}

struct EndsReport {
  enum class Verdict { Finite, Growing, Inconclusive };
  Verdict verdict = Verdict::Inconclusive;
  std::size_t ends = 0; ///< valid for Finite
  std::vector<Dist> scales;
  std::vector<Dist> radii;
  std::vector<std::vector<std::size_t>> table; ///< table[scale][radius]
};

inline std::string_view toString(EndsReport::Verdict v) {
  switch (v) {
  case EndsReport::Verdict::Finite: return "finite";
  case EndsReport::Verdict::Growing: return "growing";
  case EndsReport::Verdict::Inconclusive: return "inconclusive";
  }
  return "?";
}

/// Default annulus radii: depth levels for trees, eighths of the window otherwise.
inline std::vector<Dist> defaultEndRadii(const SpaceModel &space) {
  if (space.kind() == SpaceKind::RootedTree) {
    std::vector<Dist> out;
    for (Dist r = 0; r + 2 <= space.treeDepth(); ++r) out.push_back(r);
    return out;
  }
  Dist w = std::min<Dist>(space.windowRadius(), kCompleteRadius);
  if (space.complete()) return {0};
  return {0, w / 8, w / 4, 3 * w / 8, w / 2};
}

inline EndsReport countEnds(const SubsetExpr &u, const CoarseContext &ctx, std::vector<Dist> radii = {}) {
  if (radii.empty()) radii = defaultEndRadii(ctx.space());
  EndsReport rep;
  rep.scales = ctx.sweep().scales;
  rep.radii = radii;
  const Mask &m = ctx.mask(u);
  const auto &index = ctx.index();
  for (Dist scale : rep.scales) {
    std::vector<std::size_t> row;
    for (Dist r : radii) row.push_back(unboundedComponents(m, index, scale, r).count());
    rep.table.push_back(std::move(row));
  }
  // Finite(k): the last three scales agree on k over the last three radii.
  const std::size_t tail = std::min<std::size_t>(3, radii.size());
  const std::size_t lastRows = std::min<std::size_t>(3, rep.table.size());
  bool stable = true;
  std::optional<std::size_t> k;
  for (std::size_t i = rep.table.size() - lastRows; i < rep.table.size(); ++i)
    for (std::size_t j = radii.size() - tail; j < radii.size(); ++j) {
      const auto &row = rep.table[i];
      if (!k) k = row[j];
      stable = stable && row[j] == *k;
    }
  if (stable && k) {
    rep.verdict = EndsReport::Verdict::Finite;
    rep.ends = *k;
    return rep;
  }
  const auto &first = rep.table.front();
  bool growing = first.size() >= 2;
  for (std::size_t j = 1; j < first.size(); ++j) growing = growing && first[j] > first[j - 1];
  rep.verdict = growing ? EndsReport::Verdict::Growing : EndsReport::Verdict::Inconclusive;
  return rep;
}

struct H0Report {
  EndsReport ends;
  std::optional<CohomologyResult> cohomology; ///< empty when inconclusive
};

/// H^0 = A^{e(U)}; a growing end count is reported as an infinite direct sum.
inline H0Report h0(const SubsetExpr &u, const CoarseContext &ctx, const FinAbGroup &a, std::vector<Dist> radii = {}) {
  H0Report rep;
  rep.ends = countEnds(u, ctx, std::move(radii));
  if (rep.ends.verdict == EndsReport::Verdict::Inconclusive) return rep;
  CohomologyResult res;
  res.route = CohomologyResult::Route::Ends;
  if (rep.ends.verdict == EndsReport::Verdict::Growing) {
    res.infiniteDegreeZero = true;
    res.groups.push_back(a);
  } else {
    std::vector<std::int64_t> orders;
    for (std::size_t i = 0; i < rep.ends.ends; ++i) orders.insert(orders.end(), a.factors().begin(), a.factors().end());
    res.groups.push_back(FinAbGroup::fromCyclicOrders(orders));
  }
  rep.cohomology = std::move(res);
  return rep;
}

/// Direction label of an end of a box: an unbounded axis and a sign, or the
/// single end of a box with at least two unbounded axes (axis = -1).
struct BoxEnd {
  int axis = -1;
  char sign = '+';
  bool operator==(const BoxEnd &) const = default;
};

/// Ends of a lattice box in closed form.
inline std::vector<BoxEnd> boxEnds(const Box &b) {
  if (b.empty() || b.bounded()) return {};
  if (b.unboundedAxes() >= 2) return {BoxEnd{}};
  for (std::size_t k = 0; k < b.axes.size(); ++k) {
    const auto &iv = b.axes[k];
    if (iv.bounded()) continue;
    std::vector<BoxEnd> out;
    if (!iv.boundedBelow()) out.push_back({static_cast<int>(k), '-'});
    if (!iv.boundedAbove()) out.push_back({static_cast<int>(k), '+'});
    return out;
  }
  return {};
}

/// Index of the end of `outer` that contains the end `e` of a sub-box.
inline std::size_t locateBoxEnd(const std::vector<BoxEnd> &outer, const BoxEnd &e) {
  if (outer.size() == 1) return 0;
  for (std::size_t i = 0; i < outer.size(); ++i)
    if (outer[i] == e) return i;
  fail(ErrorKind::InvalidArgument, "end of a sub-box not found in the enclosing box");
}

} // namespace coarsecoh
