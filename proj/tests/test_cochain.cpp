#include "coarsecoh/cochain.hpp"

#include <catch_amalgamated.hpp>

#include <random>

using namespace coarsecoh;

namespace {

Partition quadrantPartition() {
  // A0 = (+,+), A1 = (+,-), A2 = (-,-), A3 = (-,+)
  return {{SubsetExpr::quadrant({'+', '+'}), SubsetExpr::quadrant({'+', '-'}), SubsetExpr::quadrant({'-', '-'}),
           SubsetExpr::quadrant({'-', '+'})}};
}

BlockyCochain quadrantCocycle() {
  const std::vector<std::vector<std::int64_t>> rows{{0, 1, 2, 1}, {2, 0, 1, 2}, {2, 2, 0, 1}, {2, 2, 2, 0}};
  auto a = FinAbGroup::cyclic(3);
  BlockyCochain phi(1, 4, a);
  for (std::size_t i = 0; i < 4; ++i)
    for (std::size_t j = 0; j < 4; ++j) phi.set({i, j}, a.element({rows[i][j]}));
  return phi;
}

} // namespace

TEST_CASE("d squares to zero") {
  std::mt19937_64 rng(7);
  for (const auto &a : {FinAbGroup::cyclic(2), FinAbGroup::cyclic(3), FinAbGroup({2, 4})})
    for (int q = 0; q <= 3; ++q) {
      auto phi = BlockyCochain::random(q, 3, a, rng);
      CHECK(differential(differential(phi)).isZero());
    }
  auto one = BlockyCochain::constant(4, FinAbGroup::cyclic(5), FinAbGroup::cyclic(5).one());
  CHECK(differential(one).isZero());
}

TEST_CASE("the quadrant cocycle over Z/3") {
  CoarseContext ctx(SpaceModel::lattice(2, 64));
  auto p = quadrantPartition();
  auto phi = quadrantCocycle();
  auto dphi = differential(phi);
  CHECK(dphi.at({0, 2, 0}).r[0] == 1);
  CHECK(dphi.at({1, 3, 1}).r[0] == 1);
  // Every support tuple of d phi meets an opposite pair.
  for (const auto &t : dphi.support()) {
    auto has = [&](std::size_t b) { return std::find(t.begin(), t.end(), b) != t.end(); };
    CHECK(((has(0) && has(2)) || (has(1) && has(3))));
  }
  auto cert = supportCocontrolled(dphi, p, ctx);
  CHECK(cert.cocontrolled == Tri::Yes);
  CHECK(cert.witnesses.empty());

  auto rep = certifyNonCoboundary(phi, p, ctx);
  CHECK(rep.verdict == NonCoboundaryReport::Verdict::NonCoboundary);
  CHECK(rep.candidates == 81);
  CHECK(rep.eliminated == 81);
  for (const auto &t : rep.trace) CHECK(t.size() == 2);
  // Adjacent and diagonal pairs are checked; the two opposite pairs are not.
  CHECK(rep.checkedTuples.size() == 12);
}

TEST_CASE("planted coboundaries are recognised") {
  CoarseContext ctx(SpaceModel::lattice(2, 32));
  auto p = quadrantPartition();
  auto a = FinAbGroup::cyclic(3);
  std::mt19937_64 rng(11);
  for (int trial = 0; trial < 5; ++trial) {
    auto psi0 = BlockyCochain::random(0, 4, a, rng);
    auto phi = differential(psi0);
    // Noise on the cocontrolled opposite pairs is allowed.
    phi.set({0, 2}, a.element({trial}));
    auto rep = certifyNonCoboundary(phi, p, ctx);
    REQUIRE(rep.verdict == NonCoboundaryReport::Verdict::Coboundary);
    REQUIRE(rep.witness);
    for (const auto &t : rep.checkedTuples)
      CHECK(phi.at(t) == a.add(rep.witness->at({t[1]}), a.neg(rep.witness->at({t[0]}))));
  }
  auto zero = certifyNonCoboundary(BlockyCochain(1, 4, a), p, ctx);
  CHECK(zero.verdict == NonCoboundaryReport::Verdict::Coboundary);
  CHECK(zero.witness->isZero());
}

TEST_CASE("the indicator of adjacent quadrants is not cocontrolled") {
  CoarseContext ctx(SpaceModel::lattice(2, 32));
  BlockyCochain ind(1, 4, FinAbGroup::cyclic(2));
  ind.set({0, 1}, FinAbGroup::cyclic(2).one());
  auto cert = supportCocontrolled(ind, quadrantPartition(), ctx);
  CHECK(cert.cocontrolled == Tri::No);
  CHECK(cert.witnesses.size() == 1);
  CHECK(supportCocontrolled(BlockyCochain(1, 4, FinAbGroup::cyclic(2)), quadrantPartition(), ctx).cocontrolled ==
        Tri::Yes);
}

TEST_CASE("cup product") {
  std::mt19937_64 rng(3);
  for (const auto &a : {FinAbGroup::cyclic(3), FinAbGroup({2, 4})}) {
    for (auto [p, q] : std::vector<std::pair<int, int>>{{0, 1}, {1, 1}, {1, 2}}) {
      auto phi = BlockyCochain::random(p, 3, a, rng), psi = BlockyCochain::random(q, 3, a, rng);
      auto lhs = differential(cupProduct(phi, psi));
      auto right = cupProduct(phi, differential(psi));
      auto rhs = cupProduct(differential(phi), psi) + (p % 2 ? -right : right);
      CHECK(lhs == rhs);
    }
    auto phi = BlockyCochain::random(2, 3, a, rng);
    CHECK(cupProduct(phi, BlockyCochain::constant(3, a, a.one())) == phi);
  }
  auto z2 = FinAbGroup::cyclic(2);
  BlockyCochain e01(1, 4, z2), e12(1, 4, z2), expect(2, 4, z2);
  e01.set({0, 1}, z2.one());
  e12.set({1, 2}, z2.one());
  expect.set({0, 1, 2}, z2.one());
  CHECK(cupProduct(e01, e12) == expect);
}

TEST_CASE("pullback along the coordinate swap exchanges A1 and A3") {
  auto z2 = SpaceModel::lattice(2, 16);
  CoarseContext ctx(z2);
  auto p = quadrantPartition();
  auto swap = CoarseMap::permutation(z2, {1, 0});
  auto pb = pullback(swap, p, quadrantCocycle());
  auto original = blockLabels(p, ctx);
  auto pulled = blockLabels(pb.partition, ctx);
  // Express the pulled-back cochain on the original partition via representatives.
  std::vector<std::size_t> sigma(4);
  for (std::size_t i = 0; i < ctx.index().size(); ++i) sigma[original[i]] = pulled[i];
  CHECK(sigma == std::vector<std::size_t>{0, 3, 2, 1});
  auto phi = quadrantCocycle();
  auto expressed = pullbackTable(pb.cochain, sigma);
  for (std::size_t i = 0; i < 4; ++i)
    for (std::size_t j = 0; j < 4; ++j) CHECK(expressed.at({i, j}) == phi.at({sigma[i], sigma[j]}));
  auto id = pullback(CoarseMap::identity(z2), p, phi);
  CHECK(id.cochain == phi);
  CHECK(blockLabels(id.partition, ctx) == original);
}

TEST_CASE("closeness chain homotopy") {
  std::mt19937_64 rng(5);
  auto z = SpaceModel::lattice(1, 32);
  auto shifted = CoarseMap::shift(z, {1});
  Partition p{{SubsetExpr::halfSpace(0, '+', 4), SubsetExpr::halfSpace(0, '-', 4) & SubsetExpr::halfSpace(0, '+', -4),
               SubsetExpr::halfSpace(0, '-', -4)}};
  auto inclusion = CoarseMap("incl", z, shifted.codomain(), [](const Point &x) { return x; });
  for (int q = 1; q <= 3; ++q) {
    auto phi = BlockyCochain::random(q, 3, FinAbGroup::cyclic(3), rng);
    auto rep = chainHomotopy(inclusion, shifted, p, phi);
    CHECK(rep.holds);
    CHECK(rep.closeness.closeFull == 1);
  }
  auto same = chainHomotopy(CoarseMap::identity(z), CoarseMap::identity(z), p,
                            BlockyCochain::random(2, 3, FinAbGroup::cyclic(2), rng));
  CHECK(same.holds);
  CHECK_THROWS_AS(chainHomotopy(CoarseMap::collapse(16), CoarseMap::identity(SpaceModel::quadrantI0(16)),
                                Partition{{SubsetExpr::all()}}, BlockyCochain(1, 1, FinAbGroup::cyclic(2))),
                  Error);
}

TEST_CASE("ray primitive") {
  auto a = FinAbGroup::cyclic(2);
  WindowIndex index(SpaceModel::halfLine(64));
  WindowCochain phi(index, a);
  for (std::size_t i = 0; i < index.size(); ++i)
    for (std::size_t j = 0; j < index.size(); ++j) phi.set(i, j, a.element({index.point(j)[0] - index.point(i)[0]}));
  auto rep = rayPrimitive(phi);
  for (std::size_t i = 0; i < index.size(); ++i) CHECK(rep.primitive[i].r[0] == index.point(i)[0] % 2);
  for (const auto &row : rep.remainder) CHECK(row.cert.bound == 0);
  CHECK(rep.values.size() == 2);

  WindowCochain zero(index, a);
  auto z = rayPrimitive(zero);
  CHECK(z.values.size() == 1);

  std::mt19937_64 rng(19);
  WindowIndex big(SpaceModel::halfLine(256));
  for (int trial = 0; trial < 5; ++trial) {
    auto planted = plantedCocycle(big, FinAbGroup::cyclic(3), 20 + 5 * trial, rng);
    auto r = rayPrimitive(planted);
    CHECK(r.dphiCocontrolled == Tri::Yes);
    CHECK(r.remainderCocontrolled == Tri::Yes);
    CHECK(r.boundHolds);
  }
}

TEST_CASE("tree primitive") {
  Sweep sweep;
  // Noise 2 plus scale 3 keeps every bound clear of the depth-10 window edge.
  sweep.scales = {1, 2, 3};
  WindowIndex tree(SpaceModel::tree(2, 10));
  std::mt19937_64 rng(23);
  auto planted = plantedCocycle(tree, FinAbGroup::cyclic(3), 2, rng);
  auto rep = treePrimitive(planted, sweep);
  CHECK(rep.boundHolds);
  CHECK(rep.remainderCocontrolled == Tri::Yes);
  // Pairs straddling the noise ball see a partial noise sum, so the
  // remainder reaches up to one scale past it.
  for (const auto &row : rep.remainder) CHECK(row.cert.bound <= 2 + row.scale);

  // A star of three rays: the primitive on each ray is its own telescoping sum.
  WindowIndex star(SpaceModel::tree(std::vector<int>{3, 1, 1, 1, 1, 1, 1, 1}));
  auto a = FinAbGroup::cyclic(5);
  WindowCochain phi(star, a);
  for (std::size_t i = 0; i < star.size(); ++i)
    for (std::size_t j = 0; j < star.size(); ++j) {
      auto v = star.point(i), w = star.point(j);
      phi.set(i, j, a.element({static_cast<std::int64_t>(w.size() * (w.size() ? w[0] + 1 : 0)) -
                               static_cast<std::int64_t>(v.size() * (v.size() ? v[0] + 1 : 0))}));
    }
  auto s = treePrimitive(phi);
  for (std::size_t i = 0; i < star.size(); ++i) {
    auto v = star.point(i);
    CHECK(s.primitive[i].r[0] == static_cast<std::int64_t>(v.size() * (v.size() ? v[0] + 1 : 0)) % 5);
  }
}

TEST_CASE("map checks") {
  Sweep sweep;
  auto z2 = SpaceModel::lattice(2, 32);
  auto id = checkCoarse(CoarseMap::identity(z2), sweep);
  CHECK(id.coarse() == Tri::Yes);
  for (const auto &row : id.uniform) CHECK(row.fullS == row.scale);
  auto pi = checkCoarse(CoarseMap::projection(32), sweep);
  CHECK(pi.coarse() == Tri::Yes);
  for (const auto &row : pi.uniform) CHECK(row.fullS <= 2 * row.scale);
  auto c = checkCoarse(CoarseMap::constant(z2, z2, Point{0, 0}), sweep);
  CHECK(c.coarselyUniform == Tri::Yes);
  CHECK(c.coarselyProper == Tri::No);

  auto i0 = SpaceModel::quadrantI0(32);
  auto collapse = checkClose(CoarseMap::collapse(32), CoarseMap::identity(i0), sweep);
  CHECK(collapse.close == Tri::No);
  for (Coord t : {1, 2, 3}) {
    auto h = checkClose(CoarseMap::ht(32, t), CoarseMap::identity(i0), sweep);
    CHECK(h.close == Tri::Yes);
    CHECK(h.closeFull == 2 * t);
  }
  CHECK(CoarseMap::ht(32, 2)(Point{1, 5}) == Point{3, 3});
}
