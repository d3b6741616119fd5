#include "coarsecoh/subsets.hpp"

#include <catch_amalgamated.hpp>

#include <random>

using namespace coarsecoh;

namespace {

std::vector<SubsetExpr> sampleExprs() {
  auto a0 = SubsetExpr::quadrant({'+', '+'});
  auto a2 = SubsetExpr::quadrant({'-', '-'});
  return {SubsetExpr::halfSpace(0, '+'),
          SubsetExpr::halfSpace(1, '-', 2),
          a0,
          a2,
          parseSubset("cone(le,|x1|,|x0|)"),
          parseSubset("cone(gt,x1,-|x0|+1)"),
          SubsetExpr::ball(Point{1, 1}, 3),
          SubsetExpr::points({Point{0, 0}, Point{5, -2}}),
          SubsetExpr::thicken(a0, 2),
          a0 | a2,
          !a0 & SubsetExpr::halfSpace(0, '+')};
}

} // namespace

TEST_CASE("atom membership") {
  auto z2 = SpaceModel::lattice(2, 10);
  CHECK(contains(SubsetExpr::halfSpace(0, '+'), z2, Point{3, -5}));
  CHECK_FALSE(contains(SubsetExpr::halfSpace(0, '-'), z2, Point{3, -5}));
  CHECK_FALSE(contains(!SubsetExpr::all(), z2, Point{1, 2}));
  CHECK(contains(SubsetExpr::thicken(SubsetExpr::ball(Point{0, 0}, 0), 2), z2, Point{1, 1}));
  CHECK_FALSE(contains(SubsetExpr::thicken(SubsetExpr::ball(Point{0, 0}, 0), 1), z2, Point{1, 1}));
  CHECK(contains(parseSubset("cone(le,|x1|,|x0|)"), z2, Point{-4, 3}));
  CHECK_FALSE(contains(parseSubset("cone(le,|x1|,|x0|)"), z2, Point{-2, 3}));
  auto tree = SpaceModel::tree(2, 4);
  CHECK(contains(SubsetExpr::treePrefix(Point{1}), tree, Point{1, 0, 1}));
  CHECK_FALSE(contains(SubsetExpr::treePrefix(Point{1}), tree, Point{0, 1}));
}

TEST_CASE("canonical text round trip") {
  for (const auto &e : sampleExprs()) {
    CAPTURE(e.text());
    CHECK(parseSubset(e.text()).text() == e.text());
  }
  CHECK(parseSubset("halfspace(axis=0,sign=+)").text() == "halfspace(axis=0,sign=+)");
  CHECK(parseSubset("cone(le, |x1|, |x0|)").text() == "cone(le,|x1|,|x0|)");
  auto e = parseSubset("thicken(e, 3)", {{"e", SubsetExpr::halfSpace(1, '+')}});
  CHECK(e.text() == "thicken(halfspace(axis=1,sign=+),3)");
  CHECK(parseSubset("not(and(all,or(empty,prefix(0,1))))").text() == "not(and(all,or(empty,prefix(0,1))))");
  CHECK_THROWS_AS(parseSubset("halfspace(axis=0)"), Error);
  CHECK_THROWS_AS(parseSubset("bogus(1)"), Error);
  CHECK_THROWS_AS(parseSubset("and(all,"), Error);
  CHECK_THROWS_AS(parseSubset("unknownName"), Error);
}

TEST_CASE("thickening agrees with the ball definition") {
  auto z2 = SpaceModel::lattice(2, 8);
  WindowIndex idx(z2);
  for (const auto &base : sampleExprs())
    for (Dist r : {0, 1, 3}) {
      auto t = SubsetExpr::thicken(base, r);
      Mask m = evaluateMask(t, idx);
      for (std::size_t i = 0; i < idx.size(); i += 3) {
        bool expected = false;
        for (const auto &q : idx.points())
          if (contains(base, z2, q) && z2.distance(q, idx.point(i)) <= r) expected = true;
        CHECK(bool(m[i]) == expected);
      }
    }
}

TEST_CASE("De Morgan and thickening monotonicity on the window") {
  auto z2 = SpaceModel::lattice(2, 8);
  WindowIndex idx(z2);
  auto exprs = sampleExprs();
  for (std::size_t i = 0; i < exprs.size(); ++i)
    for (std::size_t j = 0; j < exprs.size(); ++j) {
      Mask lhs = evaluateMask(!(exprs[i] | exprs[j]), idx);
      Mask rhs = evaluateMask(!exprs[i] & !exprs[j], idx);
      CHECK(lhs == rhs);
      Mask lhs2 = evaluateMask(!(exprs[i] & exprs[j]), idx);
      Mask rhs2 = evaluateMask(!exprs[i] | !exprs[j], idx);
      CHECK(lhs2 == rhs2);
    }
  for (const auto &e : exprs) {
    Mask a = evaluateMask(SubsetExpr::thicken(e, 1), idx), b = evaluateMask(SubsetExpr::thicken(e, 2), idx);
    for (std::size_t k = 0; k < a.size(); ++k) CHECK((!a[k] || b[k]));
  }
}

TEST_CASE("closed-form boxes match the window") {
  for (auto space : {SpaceModel::lattice(2, 8), SpaceModel::lattice(2, 8, Metric::Linf),
                     SpaceModel::lattice(3, 4, Metric::Linf), SpaceModel::quadrantI0(8)}) {
    WindowIndex idx(space);
    const int n = space.latticeDim();
    std::vector<SubsetExpr> exprs{SubsetExpr::halfSpace(0, '+'), SubsetExpr::halfSpace(1, '-', -1),
                                  !SubsetExpr::quadrant(std::vector<char>(static_cast<std::size_t>(n), '+')),
                                  SubsetExpr::thicken(SubsetExpr::halfSpace(0, '-'), 2) &
                                      SubsetExpr::thicken(SubsetExpr::halfSpace(1, '+', 1), 1)};
    if (space.metric() == Metric::Linf)
      exprs.push_back(SubsetExpr::thicken(SubsetExpr::quadrant(std::vector<char>(static_cast<std::size_t>(n), '-')), 2));
    for (const auto &e : exprs) {
      CAPTURE(space.describe(), e.text());
      auto boxes = toBoxes(e, space);
      REQUIRE(boxes.has_value());
      REQUIRE(boxes->exact);
      Mask m = evaluateMask(e, idx);
      for (std::size_t i = 0; i < idx.size(); ++i) {
        bool inBoxes = false;
        for (const auto &b : boxes->boxes) inBoxes = inBoxes || b.contains(idx.point(i));
        CHECK(bool(m[i]) == inBoxes);
      }
    }
  }
}

TEST_CASE("boundedness verdicts") {
  Sweep sweep;
  auto z2 = SpaceModel::lattice(2, 32);
  auto ball = isBounded(SubsetExpr::ball(Point{0, 0}, 5), z2, sweep);
  CHECK(ball.bounded());
  CHECK(ball.bound == 5);
  auto half = isBounded(SubsetExpr::halfSpace(0, '+'), z2, sweep);
  REQUIRE(half.unbounded());
  CHECK(std::find(half.witnesses.begin(), half.witnesses.end(), Point{32, 0}) != half.witnesses.end());
  Sweep scanOnly = sweep;
  scanOnly.symbolic = false;
  auto halfScan = isBounded(SubsetExpr::halfSpace(0, '+'), z2, scanOnly);
  CHECK(halfScan.unbounded());

  auto a0 = SubsetExpr::quadrant({'+', '+'}), a2 = SubsetExpr::quadrant({'-', '-'});
  for (Dist r : {1, 2, 3, 4}) {
    auto cert = isBounded(SubsetExpr::thicken(a0, r) & SubsetExpr::thicken(a2, r), z2, scanOnly);
    CHECK(cert.bounded());
    CHECK(cert.bound <= 2 * r);
  }
  // Truncation never passes for boundedness: a ball reaching the margin is inconclusive.
  CHECK(isBounded(SubsetExpr::ball(Point{0, 0}, 27), z2, sweep).verdict ==
        BoundednessCertificate::Verdict::Inconclusive);
  // Finite spaces are always bounded.
  auto e = SpaceModel::explicitFinite({{0, 3}, {3, 0}});
  CHECK(isBounded(SubsetExpr::all(), e, sweep).bounded());
}

TEST_CASE("boundedness is monotone under inclusion") {
  auto z2 = SpaceModel::lattice(2, 32);
  Sweep sweep;
  sweep.symbolic = false;
  auto big = SubsetExpr::ball(Point{0, 0}, 9);
  auto b = isBounded(big, z2, sweep);
  REQUIRE(b.bounded());
  for (const auto &small : {SubsetExpr::ball(Point{1, 1}, 3), big & SubsetExpr::halfSpace(0, '+'),
                            big & parseSubset("cone(le,|x1|,|x0|)")}) {
    auto s = isBounded(small, z2, sweep);
    CHECK(s.bounded());
    CHECK(s.bound <= b.bound);
  }
}
