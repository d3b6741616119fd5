#include "coarsecoh/ends.hpp"
#include "coarsecoh/homotopy.hpp"

#include <catch_amalgamated.hpp>

#include <cmath>
#include <random>

using namespace coarsecoh;

namespace {

/// Diagonal split of I_0 plus a bounded corner.
Partition i0Partition() {
  auto corner = SubsetExpr::ball(Point{0, 0}, 2);
  auto below = parseSubset("cone(le,x1,x0)");
  return {{corner, below & !corner, !below & !corner}};
}

} // namespace

TEST_CASE("h_t family") {
  auto i0 = SpaceModel::quadrantI0(24);
  auto h0 = CoarseMap::ht(24, 0);
  auto p = CoarseMap::collapse(24);
  for (const auto &z : i0.window()) {
    CHECK(h0(z) == z);
    CHECK(CoarseMap::ht(24, z[1])(z) == p(z));
    CHECK(CoarseMap::ht(24, 5)(Point{z[0] + z[1], 0}) == Point{z[0] + z[1], 0});
  }
}

TEST_CASE("distance contraction") {
  auto reps = verifyDistanceContraction(htFamily(16, {0, 1, 2, 5, 16}));
  for (const auto &r : reps) {
    CHECK(r.contracts);
    CHECK(r.preservesNorm);
  }
  auto i0 = SpaceModel::quadrantI0(16);
  auto push = CoarseMap("push", i0, SpaceModel::quadrantI0(17), [](const Point &z) { return Point{z[0] + 1, z[1]}; });
  auto bad = verifyDistanceContraction({push});
  CHECK(bad[0].contracts);
  CHECK_FALSE(bad[0].preservesNorm);
  CHECK(*bad[0].normWitness == Point{0, 0});
  CHECK(verifyDistanceContraction({CoarseMap::identity(i0)})[0].preservesNorm);
}

TEST_CASE("prism identity on I_0") {
  CoarseContext ctx(SpaceModel::quadrantI0(16));
  auto p = i0Partition();
  std::mt19937_64 rng(31);
  for (int q = 1; q <= 2; ++q)
    for (int trial = 0; trial < 2; ++trial) {
      auto phi = BlockyCochain::random(q, p.size(), FinAbGroup::cyclic(3), rng);
      auto rep = prismOperator(CoarseMap::ht(16, 0), CoarseMap::ht(16, 1), CoarseMap::ht(16, 3), p, phi, ctx, ctx);
      CHECK(rep.tableIdentity);
      CHECK(rep.windowIdentity);
      CHECK(rep.windowTuples == static_cast<std::size_t>(std::pow(ctx.index().size(), q)));
    }
  auto id = CoarseMap::identity(ctx.space());
  auto phi = BlockyCochain::random(2, p.size(), FinAbGroup::cyclic(2), rng);
  auto trivial = prismOperator(id, id, id, p, phi, ctx, ctx);
  CHECK(trivial.tableIdentity);
  CHECK(trivial.windowIdentity);
}

TEST_CASE("prism on a three-point space by full expansion") {
  auto x = SpaceModel::explicitFinite({{0, 1, 2}, {1, 0, 1}, {2, 1, 0}});
  CoarseContext ctx(x);
  Partition p{{SubsetExpr::points({Point{0}}), SubsetExpr::points({Point{1}}), SubsetExpr::points({Point{2}})}};
  std::map<Point, Point> s1{{Point{0}, Point{1}}, {Point{1}, Point{2}}, {Point{2}, Point{2}}};
  std::map<Point, Point> s2{{Point{0}, Point{2}}, {Point{1}, Point{2}}, {Point{2}, Point{1}}};
  auto h0 = CoarseMap::identity(x), h1 = CoarseMap::table("s1", x, x, s1), h2 = CoarseMap::table("s2", x, x, s2);
  std::mt19937_64 rng(2);
  auto phi = BlockyCochain::random(2, 3, FinAbGroup::cyclic(5), rng);
  auto rep = prismOperator(h0, h1, h2, p, phi, ctx, ctx);
  CHECK(rep.tableIdentity);
  CHECK(rep.windowIdentity);
  // P(phi)(x) = phi(h0 x, h1 x, h2 x) in degree 2, by hand.
  auto labels = blockLabels(p, ctx);
  for (std::size_t i = 0; i < 3; ++i) {
    Point pt = ctx.index().point(i);
    auto k = rep.partition.size();
    (void)k;
    auto expect = phi.at({labels[ctx.index().indexOf(h0(pt))], labels[ctx.index().indexOf(h1(pt))],
                          labels[ctx.index().indexOf(h2(pt))]});
    auto refined = blockLabels(rep.partition, ctx);
    CHECK(rep.prism->at({refined[i]}) == expect);
  }
}

TEST_CASE("collapse invariance on I_0") {
  const Coord n = 16;
  CoarseContext ctx(SpaceModel::quadrantI0(n));
  auto p = i0Partition();
  std::mt19937_64 rng(37);
  for (int q = 1; q <= 2; ++q) {
    auto phi = BlockyCochain::random(q, p.size(), FinAbGroup::cyclic(3), rng);
    auto rep = verifyCollapseInvariance(phi, p, ctx);
    CHECK(rep.tableIdentity);
    CHECK(rep.windowIdentity);
    CHECK(rep.windowTuples == static_cast<std::size_t>(std::pow(ctx.index().size(), q + 1)));
  }
  // A cochain pulled back from the ray along pi is fixed by p^*.
  Partition strips{{parseSubset("cone(le,x0+x1,4)"), !parseSubset("cone(le,x0+x1,4)")}};
  BlockyCochain ray(1, 2, FinAbGroup::cyclic(3));
  ray.set({0, 1}, FinAbGroup::cyclic(3).one());
  ray.set({1, 0}, FinAbGroup::cyclic(3).one());
  auto rep = verifyCollapseInvariance(ray, strips, ctx);
  CHECK(rep.tableIdentity);
  CHECK(rep.windowIdentity);
  // Degree 0: one end, so any 0-cocycle agrees with its collapse off a bounded set.
  auto constant = BlockyCochain::constant(p.size(), FinAbGroup::cyclic(3), FinAbGroup::cyclic(3).one());
  constant.set({0}, FinAbGroup::cyclic(3).zero());
  auto zero = verifyCollapseInvariance(constant, p, ctx);
  CHECK(zero.remainder.cocontrolled == Tri::Yes);
}

TEST_CASE("asymptotic product slices") {
  auto xi = SpaceModel::asymptoticProduct(SpaceModel::halfLine(12));
  std::map<Coord, int> slice;
  for (const auto &pt : xi.window()) ++slice[pt[0]];
  for (auto [r, c] : slice) CHECK(c == r + 1);
  CHECK(slice[0] == 1);
  for (auto which : {0, 1}) {
    auto iota = CoarseMap::productInclusion(SpaceModel::halfLine(12), which);
    auto pi = CoarseMap::productProjection(SpaceModel::halfLine(12));
    for (Coord x = 0; x <= 12; ++x) CHECK(pi(iota(Point{x})) == Point{x});
  }
}
