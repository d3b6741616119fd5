#include "coarsecoh/cech.hpp"

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

FinAbGroup expectedLattice(int n, int q, const FinAbGroup &a) {
  if (q == 0) return n == 1 ? FinAbGroup::fromCyclicOrders({a.factors()[0], a.factors()[0]}) : a;
  if (n >= 2 && q == n - 1) return a;
  return FinAbGroup{};
}

} // namespace

TEST_CASE("Cech cohomology of Z^n from half-space covers") {
  for (int n = 1; n <= 4; ++n) {
    CoarseContext ctx(SpaceModel::lattice(n, 64));
    for (long m : {2L, 3L}) {
      auto a = FinAbGroup::cyclic(m);
      auto res = cechCohomology(halfSpaceCover(n), ctx, a, n + 1);
      CHECK(res.cover.symbolic);
      CHECK(res.cover.stable);
      for (int q = 0; q <= n + 1; ++q) {
        INFO("n=" << n << " q=" << q << " m=" << m);
        CHECK(res.result.at(static_cast<std::size_t>(q)) == expectedLattice(n, q, a));
      }
    }
  }
}

TEST_CASE("window route of the Cech complex matches the closed form") {
  Sweep scan;
  scan.symbolic = false;
  for (int n = 1; n <= 2; ++n) {
    CoarseContext sym(SpaceModel::lattice(n, 32)), win(SpaceModel::lattice(n, 32), scan);
    auto a = FinAbGroup::cyclic(3);
    auto s = cechCohomology(halfSpaceCover(n), sym, a, n);
    auto w = cechCohomology(halfSpaceCover(n), win, a, n);
    CHECK_FALSE(w.cover.symbolic);
    CHECK(w.cover.stable);
    CHECK(s.cover.complex.dims == w.cover.complex.dims);
    for (int q = 0; q <= n; ++q) CHECK(s.result.at(static_cast<std::size_t>(q)) == w.result.at(static_cast<std::size_t>(q)));
  }
}

TEST_CASE("Cech route refuses a family that is not a cover") {
  CoarseContext ctx(SpaceModel::lattice(2, 32));
  CHECK_THROWS_AS(buildCechCover({SubsetExpr::halfSpace(1, '+'), SubsetExpr::halfSpace(1, '-')}, ctx, 2), Error);
}

TEST_CASE("closeness complex of the quadrant partition is a 4-cycle") {
  CoarseContext ctx(SpaceModel::lattice(2, 64));
  auto pc = coarseCohomologyViaPartition(quadrants(), ctx, FinAbGroup::cyclic(3));
  const auto &k = pc.closeness.complex;
  CHECK(k.count(0) == 4);
  CHECK(k.count(1) == 4);
  CHECK(k.count(2) == 0);
  CHECK_FALSE(k.contains({0, 2}));
  CHECK_FALSE(k.contains({1, 3}));
  CHECK(pc.closeness.inconclusive.empty());
  CHECK(pc.result.at(0) == FinAbGroup::cyclic(3));
  CHECK(pc.result.at(1) == FinAbGroup::cyclic(3));
  CHECK(pc.result.at(2).trivial());
}

TEST_CASE("bounded blocks are dropped and split ends give H^0 = A^2") {
  CoarseContext z(SpaceModel::lattice(1, 64));
  auto blocks = std::vector<SubsetExpr>{SubsetExpr::halfSpace(0, '+', 4), SubsetExpr::halfSpace(0, '-', -3),
                                        SubsetExpr::ball(Point{0}, 3)};
  auto pc = coarseCohomologyViaPartition(blocks, z, FinAbGroup::cyclic(2));
  CHECK(pc.closeness.boundedBlocks == std::vector<std::size_t>{2});
  CHECK(pc.result.at(0) == FinAbGroup({2, 2}));
  CHECK(pc.result.at(1).trivial());
}

TEST_CASE("simplicial and full tuple complexes agree") {
  auto a2 = FinAbGroup::cyclic(2), a3 = FinAbGroup::cyclic(3);
  CoarseContext ctx(SpaceModel::lattice(2, 32));
  auto q = quadrants();
  std::vector<std::vector<SubsetExpr>> partitions{
      {q[0] | q[1], q[2], q[3]}, {q[0], q[1] | q[2] | q[3]}, {q[0] | q[2], q[1] | q[3]}};
  for (const auto &blocks : partitions) {
    auto k = buildClosenessComplex(blocks, ctx);
    auto simp = simplicialCochainComplex(k.complex, 2);
    auto full = fullTupleComplex(k.complex, blocks.size(), 2);
    for (const auto &a : {a2, a3}) {
      auto s = cohomologyWithCoefficients(simp, a);
      auto f = cohomologyWithCoefficients(full, a, {.generators = false, .maxDegree = 1});
      auto b = bruteForceCohomology(full, a, 1);
      for (std::size_t d = 0; d <= 1; ++d) {
        CHECK(s.at(d) == f.at(d));
        CHECK(s.at(d) == b.at(d));
      }
    }
  }
}

TEST_CASE("refinement stability") {
  CoarseContext ctx(SpaceModel::lattice(2, 32));
  auto a = FinAbGroup::cyclic(2);
  auto halves = std::vector<SubsetExpr>{SubsetExpr::halfSpace(1, '+'), SubsetExpr::halfSpace(1, '-')};
  auto sides = std::vector<SubsetExpr>{SubsetExpr::halfSpace(0, '+'), SubsetExpr::halfSpace(0, '-')};
  // Two half-planes are too coarse: refining to quadrants creates the cycle.
  auto coarse = refinementStability(halves, sides, ctx, a);
  CHECK_FALSE(coarse.stable);
  CHECK(coarse.refined.result.at(1) == a);
  auto cones = std::vector<SubsetExpr>{parseSubset("cone(le,|x1|,|x0|)"), !parseSubset("cone(le,|x1|,|x0|)")};
  auto fine = refinementStability(quadrants(), cones, ctx, a);
  CHECK(fine.stable);
  CHECK(fine.refined.closeness.complex.count(0) == 8);
}

TEST_CASE("higher cohomology of the binary tree vanishes") {
  Sweep sweep;
  sweep.scales = {1, 2};
  CoarseContext ctx(SpaceModel::tree(2, 8), sweep);
  auto left = SubsetExpr::treePrefix({0}), right = SubsetExpr::treePrefix({1});
  std::vector<SubsetExpr> blocks{left, SubsetExpr::treePrefix({1, 0}), SubsetExpr::treePrefix({1, 1}),
                                 !(left | right)};
  auto pc = coarseCohomologyViaPartition(blocks, ctx, FinAbGroup::cyclic(3));
  for (std::size_t qd = 2; qd < 4; ++qd) CHECK(pc.result.at(qd).trivial());
  CHECK(pc.closeness.boundedBlocks.size() == 1);
}

TEST_CASE("nerve export") {
  CoarseContext ctx(SpaceModel::lattice(2, 32));
  auto cover = buildCechCover(halfSpaceCover(2), ctx, 1);
  auto nerve = cover.nerve();
  CHECK(nerve.count(0) == 4);
  CHECK(nerve.count(1) == 4);
  auto dot = toDot(nerve, {"x0+", "x0-", "x1+", "x1-"}, "nerve");
  CHECK(dot.find("v0 -- v2") != std::string::npos);
}

TEST_CASE("L1 and Linf give the same groups") {
  auto a = FinAbGroup::cyclic(3);
  std::vector<SubsetExpr> quads{SubsetExpr::quadrant({'+', '+'}), SubsetExpr::quadrant({'+', '-'}),
                                SubsetExpr::quadrant({'-', '-'}), SubsetExpr::quadrant({'-', '+'})};
  for (int n = 1; n <= 3; ++n) {
    CoarseContext l1(SpaceModel::lattice(n, 64, Metric::L1)), linf(SpaceModel::lattice(n, 64, Metric::Linf));
    auto x = cechCohomology(halfSpaceCover(n), l1, a, n + 1).result.groups;
    auto y = cechCohomology(halfSpaceCover(n), linf, a, n + 1).result.groups;
    CHECK(x == y);
  }
  CoarseContext l1(SpaceModel::lattice(2, 24, Metric::L1)), linf(SpaceModel::lattice(2, 24, Metric::Linf));
  CHECK(coarseCohomologyViaPartition(quads, l1, a).result.groups ==
        coarseCohomologyViaPartition(quads, linf, a).result.groups);
}
