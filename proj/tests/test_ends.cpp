#include "coarsecoh/ends.hpp"

#include <catch_amalgamated.hpp>

using namespace coarsecoh;

TEST_CASE("ends of lattices") {
  CoarseContext z(SpaceModel::lattice(1, 64));
  auto e1 = countEnds(SubsetExpr::all(), z);
  CHECK(e1.verdict == EndsReport::Verdict::Finite);
  CHECK(e1.ends == 2);
  CoarseContext half(SpaceModel::halfLine(64));
  auto e2 = countEnds(SubsetExpr::all(), half);
  CHECK(e2.verdict == EndsReport::Verdict::Finite);
  CHECK(e2.ends == 1);
  CoarseContext z2(SpaceModel::lattice(2, 64));
  auto e3 = countEnds(SubsetExpr::all(), z2);
  CHECK(e3.verdict == EndsReport::Verdict::Finite);
  CHECK(e3.ends == 1);
  // A cone pair through the origin has two ends, a half-plane one.
  auto cone = countEnds(parseSubset("cone(le,|x1|,|x0|)"), z2);
  CHECK(cone.ends == 2);
  CHECK(countEnds(SubsetExpr::halfSpace(0, '+'), z2).ends == 1);
}

TEST_CASE("ends of the binary tree grow") {
  Sweep sweep;
  sweep.scales = {1, 2};
  CoarseContext tree(SpaceModel::tree(2, 10), sweep);
  auto rep = countEnds(SubsetExpr::all(), tree);
  CHECK(rep.verdict == EndsReport::Verdict::Growing);
  for (const auto &row : rep.table)
    for (std::size_t k = 0; k < rep.radii.size() && rep.radii[k] <= 8; ++k)
      CHECK(row[k] >= (std::size_t{1} << rep.radii[k]));
  // At unit scale the vertices past depth r split into 2^(r+1) subtrees.
  for (std::size_t k = 0; k < rep.radii.size(); ++k) CHECK(rep.table[0][k] == (std::size_t{2} << rep.radii[k]));
}

TEST_CASE("component counts never increase with the scale") {
  CoarseContext z2(SpaceModel::lattice(2, 48));
  auto u = SubsetExpr::quadrant({'+', '+'}) | SubsetExpr::quadrant({'-', '-'}) |
           (SubsetExpr::halfSpace(1, '+', 10) & SubsetExpr::halfSpace(0, '-'));
  auto rep = countEnds(u, z2);
  for (std::size_t j = 0; j < rep.radii.size(); ++j)
    for (std::size_t i = 1; i < rep.scales.size(); ++i) CHECK(rep.table[i][j] <= rep.table[i - 1][j]);
}

TEST_CASE("degree-zero cohomology from ends") {
  CoarseContext z(SpaceModel::lattice(1, 64));
  auto h = h0(SubsetExpr::all(), z, FinAbGroup::cyclic(2));
  REQUIRE(h.cohomology);
  CHECK(h.cohomology->at(0) == FinAbGroup({2, 2}));
  CoarseContext finite(SpaceModel::explicitFinite({{0, 1, 2}, {1, 0, 1}, {2, 1, 0}}));
  auto hb = h0(SubsetExpr::all(), finite, FinAbGroup::cyclic(2));
  REQUIRE(hb.cohomology);
  CHECK(hb.cohomology->at(0).trivial());
  Sweep sweep;
  sweep.scales = {1, 2};
  CoarseContext free2(SpaceModel::tree(std::vector<int>{4, 3, 3, 3, 3, 3, 3}), sweep);
  auto ht = h0(SubsetExpr::all(), free2, FinAbGroup::cyclic(3));
  REQUIRE(ht.cohomology);
  CHECK(ht.cohomology->infiniteDegreeZero);
}

TEST_CASE("ends of asymptotic products match the base") {
  for (auto base : {SpaceModel::lattice(1, 32), SpaceModel::halfLine(32)}) {
    CoarseContext x(base), xi(SpaceModel::asymptoticProduct(base));
    auto a = countEnds(SubsetExpr::all(), x), b = countEnds(SubsetExpr::all(), xi);
    CHECK(a.verdict == EndsReport::Verdict::Finite);
    CHECK(b.verdict == EndsReport::Verdict::Finite);
    CHECK(a.ends == b.ends);
  }
}

TEST_CASE("closed-form box ends") {
  auto z2 = SpaceModel::lattice(2, 64);
  auto ends = [&](const SubsetExpr &e) {
    auto boxes = toBoxes(e, z2);
    REQUIRE(boxes);
    REQUIRE(boxes->boxes.size() == 1);
    return boxEnds(boxes->boxes[0]);
  };
  CHECK(ends(SubsetExpr::halfSpace(0, '+')).size() == 1);
  CHECK(ends(SubsetExpr::halfSpace(0, '+') & SubsetExpr::halfSpace(0, '-', 5)).size() == 2);
  CHECK(ends(SubsetExpr::quadrant({'+', '-'})).size() == 1);
  CHECK(ends(SubsetExpr::halfSpace(0, '+') & SubsetExpr::halfSpace(0, '-', 5) & SubsetExpr::halfSpace(1, '+'))
            .size() == 1);
  CoarseContext ctx(z2);
  for (const auto &e : {SubsetExpr::halfSpace(0, '+') & SubsetExpr::halfSpace(0, '-', 5), SubsetExpr::quadrant({'+', '-'}),
                        SubsetExpr::halfSpace(1, '-')})
    CHECK(countEnds(e, ctx).ends == ends(e).size());
}
