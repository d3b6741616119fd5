#include "coarsecoh/cover.hpp"

#include <catch_amalgamated.hpp>

using namespace coarsecoh;

namespace {

std::vector<SubsetExpr> halfSpaceCover(int n) {
  std::vector<SubsetExpr> parts;
  for (int i = 0; i < n; ++i) {
    parts.push_back(SubsetExpr::halfSpace(i, '+'));
    parts.push_back(SubsetExpr::halfSpace(i, '-'));
  }
  return parts;
}

std::vector<SubsetExpr> quadrants() {
  return {SubsetExpr::quadrant({'+', '+'}), SubsetExpr::quadrant({'-', '+'}), SubsetExpr::quadrant({'-', '-'}),
          SubsetExpr::quadrant({'+', '-'})};
}

} // namespace

TEST_CASE("half-space cover of Z^2 with the nR bound") {
  CoarseContext ctx(SpaceModel::lattice(2, 64));
  auto v = isCoarseCover(SubsetExpr::all(), halfSpaceCover(2), ctx);
  CHECK(v.isCover == Tri::Yes);
  CHECK(v.exact);
  for (const auto &row : v.rows) CHECK(row.cert.bound <= 2 * row.scale);

  Sweep scan;
  scan.symbolic = false;
  CoarseContext scanCtx(SpaceModel::lattice(2, 64), scan);
  auto w = isCoarseCover(SubsetExpr::all(), halfSpaceCover(2), scanCtx);
  CHECK(w.isCover == Tri::Yes);
  CHECK_FALSE(w.exact);
  for (std::size_t i = 0; i < w.rows.size(); ++i) CHECK(w.rows[i].cert.bound == v.rows[i].cert.bound);
}

TEST_CASE("half-space covers of Z^n for n up to 5 are covers") {
  for (int n = 1; n <= 5; ++n) {
    CoarseContext ctx(SpaceModel::lattice(n, 64));
    auto v = isCoarseCover(SubsetExpr::all(), halfSpaceCover(n), ctx);
    CHECK(v.isCover == Tri::Yes);
    for (const auto &row : v.rows) CHECK(row.cert.bound <= n * row.scale);
  }
}

TEST_CASE("upper and lower half-planes are not a coarse cover") {
  std::vector<SubsetExpr> parts{SubsetExpr::halfSpace(1, '+'), SubsetExpr::halfSpace(1, '-')};
  CoarseContext ctx(SpaceModel::lattice(2, 64));
  auto v = isCoarseCover(SubsetExpr::all(), parts, ctx);
  REQUIRE(v.isCover == Tri::No);
  for (const auto &row : v.rows)
    for (const auto &w : row.cert.witnesses) CHECK(std::abs(w[1]) <= row.scale);
  Sweep scan;
  scan.symbolic = false;
  CoarseContext scanCtx(SpaceModel::lattice(2, 64), scan);
  CHECK(isCoarseCover(SubsetExpr::all(), parts, scanCtx).isCover == Tri::No);
}

TEST_CASE("trivial cover and subcover monotonicity") {
  CoarseContext ctx(SpaceModel::lattice(2, 64));
  auto u = SubsetExpr::halfSpace(0, '+');
  CHECK(isCoarseCover(u, {u}, ctx).isCover == Tri::Yes);
  auto parts = halfSpaceCover(2);
  parts.push_back(SubsetExpr::ball(Point{0, 0}, 3));
  CHECK(isCoarseCover(SubsetExpr::all(), parts, ctx).isCover == Tri::Yes);
}

TEST_CASE("coarse disjoint unions") {
  CoarseContext z(SpaceModel::lattice(1, 64));
  auto split = isCoarseDisjointUnion({SubsetExpr::halfSpace(0, '+'), SubsetExpr::halfSpace(0, '-')},
                                     SubsetExpr::all(), z);
  CHECK(split.result == Tri::Yes);
  CHECK(isCoarseDisjointUnion({SubsetExpr::all()}, SubsetExpr::all(), z).result == Tri::Yes);

  CoarseContext z2(SpaceModel::lattice(2, 64));
  auto q = quadrants();
  // Adjacent quadrants are close along the axes, so neither grouping splits Z^2.
  CHECK(isCoarseDisjointUnion({q[0] | q[1], q[2] | q[3]}, SubsetExpr::all(), z2).result == Tri::No);
  CHECK(isCoarseDisjointUnion({q[0] | q[3], q[1] | q[2]}, SubsetExpr::all(), z2).result == Tri::No);
  CHECK(isCoarseDisjointUnion(q, SubsetExpr::all(), z2).result == Tri::No);
  auto overlapping = isCoarseDisjointUnion(halfSpaceCover(2), SubsetExpr::all(), z2);
  CHECK_FALSE(overlapping.disjoint);
  CHECK(overlapping.cover.isCover == Tri::Yes);
}

TEST_CASE("tuple oracle on quadrants") {
  CoarseContext ctx(SpaceModel::lattice(2, 64));
  auto q = quadrants();
  auto opposite = isCocontrolledTuple({q[0], q[2]}, ctx);
  CHECK(opposite.cocontrolled == Tri::Yes);
  CHECK(isCocontrolledTuple({q[1], q[3]}, ctx).cocontrolled == Tri::Yes);
  auto adjacent = isCocontrolledTuple({q[0], q[1]}, ctx);
  REQUIRE(adjacent.cocontrolled == Tri::No);
  for (const auto &row : adjacent.rows) {
    REQUIRE(row.cert.witnesses.size() == 2);
    CHECK(row.cert.witnesses[0][0] >= 0);
    CHECK(row.cert.witnesses[1][0] < 0);
    CHECK(ctx.space().distance(row.cert.witnesses[0], row.cert.witnesses[1]) <= row.scale);
  }
  CHECK(isCocontrolledTuple({SubsetExpr::ball(Point{3, 3}, 4)}, ctx).cocontrolled == Tri::Yes);
  CHECK(isCocontrolledTuple({q[0]}, ctx).cocontrolled == Tri::No);
  CHECK(isCocontrolledTuple({q[0], q[1], q[2]}, ctx).cocontrolled == Tri::Yes);
  CHECK(isCocontrolledTuple({q[0], q[0], q[1]}, ctx).cocontrolled == Tri::No);
}

TEST_CASE("tuple oracle is symmetric") {
  CoarseContext ctx(SpaceModel::lattice(2, 32));
  auto q = quadrants();
  std::vector<std::vector<SubsetExpr>> tuples{{q[0], q[1]}, {q[1], q[0]}, {q[0], q[2], q[1]}, {q[2], q[1], q[0]}};
  CHECK(isCocontrolledTuple(tuples[0], ctx).cocontrolled == isCocontrolledTuple(tuples[1], ctx).cocontrolled);
  CHECK(isCocontrolledTuple(tuples[2], ctx).cocontrolled == isCocontrolledTuple(tuples[3], ctx).cocontrolled);
  for (std::size_t i = 0; i < 4; ++i) {
    auto a = isCocontrolledTuple(tuples[0], ctx).rows[i].cert.bound;
    auto b = isCocontrolledTuple(tuples[1], ctx).rows[i].cert.bound;
    CHECK(a == b);
  }
}

TEST_CASE("tuple oracle agrees with brute-force pair scan") {
  auto space = SpaceModel::lattice(2, 12);
  Sweep sweep;
  sweep.scales = {1, 2};
  CoarseContext ctx(space, sweep);
  auto a = parseSubset("cone(le,|x1|,|x0|)"), b = SubsetExpr::halfSpace(1, '+', 3);
  auto v = isCocontrolledTuple({a, b}, ctx);
  auto pts = space.window();
  for (const auto &row : v.rows) {
    Dist best = -1;
    for (const auto &x : pts)
      for (const auto &y : space.ball(x, row.scale))
        if (contains(a, space, x) && contains(b, space, y))
          best = std::max({best, space.norm(x), space.norm(y)});
    CHECK(row.cert.bound == std::max<Dist>(best, 0));
  }
}

TEST_CASE("complement-union bound") {
  CoarseContext ctx(SpaceModel::lattice(2, 64));
  auto cover = halfSpaceCover(2);
  CHECK(complementUnionBound(SubsetExpr::all(), cover, 1, 2, ctx).bounded());
  CHECK(complementUnionBound(SubsetExpr::all(), {SubsetExpr::all()}, 3, 4, ctx).bound == 0);
  CHECK(complementUnionBound(SubsetExpr::all(), {SubsetExpr::all()}, 3, 4, ctx).bounded());
  auto strip = complementUnionBound(SubsetExpr::all(), {SubsetExpr::halfSpace(1, '+'), SubsetExpr::halfSpace(1, '-')},
                                    1, 2, ctx);
  CHECK(strip.unbounded());
  // Converse: bounded at every scale implies the family is a coarse cover.
  for (int q = 1; q <= 2; ++q) {
    bool allBounded = true;
    for (Dist r : ctx.sweep().scales)
      allBounded = allBounded && complementUnionBound(SubsetExpr::all(), cover, q, r, ctx).bounded();
    CHECK(allBounded);
    if (allBounded) CHECK(isCoarseCover(SubsetExpr::all(), cover, ctx).isCover == Tri::Yes);
  }
}
