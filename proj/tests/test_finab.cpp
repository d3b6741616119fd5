#include "coarsecoh/finab.hpp"

#include <catch_amalgamated.hpp>

#include <random>

using namespace coarsecoh;

namespace {

IntMatrix randomMatrix(std::mt19937_64 &rng, std::size_t r, std::size_t c, int lo, int hi) {
  std::uniform_int_distribution<int> d(lo, hi);
  IntMatrix m(r, c);
  for (std::size_t i = 0; i < r; ++i)
    for (std::size_t j = 0; j < c; ++j) m(i, j) = d(rng);
  return m;
}

// Random complex: each differential is a random combination of rows that
// annihilate the previous one, so torsion and nontrivial bases appear.
CochainComplex randomComplex(std::mt19937_64 &rng, std::vector<std::size_t> dims) {
  CochainComplex c;
  c.dims = dims;
  for (std::size_t q = 0; q + 1 < dims.size(); ++q) {
    if (q == 0) {
      c.diffs.push_back(randomMatrix(rng, dims[1], dims[0], -2, 2));
      continue;
    }
    const IntMatrix &prev = c.diffs.back();
    SmithForm f = smithNormalForm(prev);
    std::size_t k = prev.rows() - f.rank;
    IntMatrix left(k, prev.rows());
    for (std::size_t i = 0; i < k; ++i)
      for (std::size_t j = 0; j < prev.rows(); ++j) left(i, j) = f.U(f.rank + i, j);
    IntMatrix x = randomMatrix(rng, dims[q + 1], k, -2, 2);
    for (std::size_t i = 0; i < x.rows(); ++i)
      for (std::size_t j = 0; j < x.cols(); ++j)
        if ((i + j) % 3 == 0) x(i, j) *= 2;
    c.diffs.push_back(k == 0 ? IntMatrix(dims[q + 1], dims[q]) : x * left);
  }
  return c;
}

CochainComplex cycleGraph(std::size_t n) {
  CochainComplex c;
  c.dims = {n, n};
  IntMatrix d(n, n);
  for (std::size_t e = 0; e < n; ++e) {
    d(e, e) -= 1;
    d(e, (e + 1) % n) += 1;
  }
  c.diffs = {d};
  return c;
}

} // namespace

TEST_CASE("finite abelian group normalization") {
  CHECK(FinAbGroup::fromCyclicOrders({2, 3}).factors() == std::vector<std::int64_t>{6});
  CHECK(FinAbGroup::fromCyclicOrders({4, 2}).factors() == std::vector<std::int64_t>{2, 4});
  CHECK(FinAbGroup::fromCyclicOrders({1, 1}).trivial());
  CHECK(FinAbGroup::fromCyclicOrders({6, 4, 9}).factors() == std::vector<std::int64_t>{6, 36});
  CHECK(FinAbGroup({2, 4}).order() == 8);
  CHECK_THROWS_AS(FinAbGroup({4, 2}), Error);
  CHECK_THROWS_AS(FinAbGroup({1}), Error);
  FinAbGroup a({2, 4});
  auto x = a.element({1, 3}), y = a.element({1, 2});
  CHECK(a.add(x, y) == a.element({0, 1}));
  CHECK(a.neg(x) == a.element({1, 1}));
  CHECK(a.mul(x, y) == a.element({1, 2}));
  CHECK(a.toString() == "Z/2+Z/4");
}

TEST_CASE("Smith normal form") {
  auto f = smithNormalForm(IntMatrix::fromRows({{2, 0}, {0, 3}}));
  CHECK(f.diagonal == std::vector<Integer>{1, 6});
  auto z = smithNormalForm(IntMatrix(3, 2));
  CHECK(z.rank == 0);
  CHECK(z.U == IntMatrix::identity(3));
  CHECK(z.V == IntMatrix::identity(2));
  auto id = smithNormalForm(IntMatrix::identity(3));
  CHECK(id.S == IntMatrix::identity(3));

  std::mt19937_64 rng(11);
  for (int trial = 0; trial < 60; ++trial) {
    std::uniform_int_distribution<std::size_t> dim(1, 7);
    IntMatrix m = randomMatrix(rng, dim(rng), dim(rng), -9, 9);
    auto s = smithNormalForm(m);
    CHECK(s.U * m * s.V == s.S);
    CHECK(s.U * s.Uinv == IntMatrix::identity(m.rows()));
    CHECK(s.V * s.Vinv == IntMatrix::identity(m.cols()));
    CHECK(s.U.absDeterminant() == 1);
    CHECK(s.V.absDeterminant() == 1);
    for (std::size_t i = 0; i < s.S.rows(); ++i)
      for (std::size_t j = 0; j < s.S.cols(); ++j)
        if (i != j) CHECK(sgn(s.S(i, j)) == 0);
    for (std::size_t i = 0; i + 1 < s.diagonal.size(); ++i) {
      CHECK(sgn(s.diagonal[i]) >= 0);
      if (sgn(s.diagonal[i + 1])) CHECK(mpz_divisible_p(s.diagonal[i + 1].get_mpz_t(), s.diagonal[i].get_mpz_t()));
      else if (sgn(s.diagonal[i]) == 0) CHECK(sgn(s.diagonal[i + 1]) == 0);
    }
  }
}

TEST_CASE("Smith form keeps big entries exact") {
  IntMatrix m(2, 2);
  m(0, 0) = Integer("123456789012345678901234567890");
  m(0, 1) = Integer("987654321098765432109876543210");
  m(1, 0) = 3;
  m(1, 1) = 7;
  auto s = smithNormalForm(m);
  CHECK(s.U * m * s.V == s.S);
}

TEST_CASE("cohomology of small complexes") {
  auto z3 = FinAbGroup::cyclic(3);
  auto c4 = cycleGraph(4);
  auto h = cohomologyWithCoefficients(c4, z3);
  CHECK(h.at(0) == z3);
  CHECK(h.at(1) == z3);
  auto brute = bruteForceCohomology(c4, z3);
  CHECK(brute.groups == h.groups);

  CochainComplex zero{{0, 0}, {IntMatrix(0, 0)}};
  auto hz = cohomologyWithCoefficients(zero, z3);
  CHECK(hz.at(0).trivial());
  CHECK(hz.at(1).trivial());

  CochainComplex point{{1}, {}};
  CHECK(bruteForceCohomology(point, FinAbGroup::cyclic(2)).at(0) == FinAbGroup::cyclic(2));
  CochainComplex twoPoints{{2, 0}, {IntMatrix(0, 2)}};
  CHECK(bruteForceCohomology(twoPoints, FinAbGroup::cyclic(2)).at(0) == FinAbGroup({2, 2}));

  // Multiplication by 2 on Z: H^1(C; Z/4) = Z/2, H^0(C; Z/4) = Z/2.
  CochainComplex twice{{1, 1}, {IntMatrix::fromRows({{2}})}};
  auto ht = cohomologyWithCoefficients(twice, FinAbGroup::cyclic(4));
  CHECK(ht.at(0) == FinAbGroup::cyclic(2));
  CHECK(ht.at(1) == FinAbGroup::cyclic(2));
  CHECK(bruteForceCohomology(twice, FinAbGroup::cyclic(4)).groups == ht.groups);

  CochainComplex broken{{1, 1, 1}, {IntMatrix::fromRows({{1}}), IntMatrix::fromRows({{1}})}};
  try {
    cohomologyWithCoefficients(broken, z3);
    FAIL("expected not-a-complex");
  } catch (const Error &e) {
    CHECK(e.kind() == ErrorKind::NotAComplex);
  }
}

TEST_CASE("cross-polytope boundary has sphere cohomology") {
  // Octahedron boundary: vertices ±e_i, simplices avoid antipodal pairs.
  std::vector<std::vector<int>> simplices[3];
  for (int a = 0; a < 6; ++a) simplices[0].push_back({a});
  auto ok = [](const std::vector<int> &s) {
    for (std::size_t i = 0; i < s.size(); ++i)
      for (std::size_t j = i + 1; j < s.size(); ++j)
        if (s[i] / 2 == s[j] / 2) return false;
    return true;
  };
  for (int a = 0; a < 6; ++a)
    for (int b = a + 1; b < 6; ++b) {
      if (ok({a, b})) simplices[1].push_back({a, b});
      for (int c = b + 1; c < 6; ++c)
        if (ok({a, b, c})) simplices[2].push_back({a, b, c});
    }
  CochainComplex cx;
  for (auto &s : simplices) cx.dims.push_back(s.size());
  for (int q = 0; q < 2; ++q) {
    IntMatrix d(simplices[q + 1].size(), simplices[q].size());
    for (std::size_t i = 0; i < simplices[q + 1].size(); ++i) {
      const auto &s = simplices[q + 1][i];
      for (std::size_t k = 0; k < s.size(); ++k) {
        std::vector<int> face = s;
        face.erase(face.begin() + static_cast<long>(k));
        auto j = std::find(simplices[q].begin(), simplices[q].end(), face) - simplices[q].begin();
        d(i, static_cast<std::size_t>(j)) += (k % 2 ? -1 : 1);
      }
    }
    cx.diffs.push_back(d);
  }
  auto h = cohomologyWithCoefficients(cx, FinAbGroup::cyclic(2));
  CHECK(h.at(0) == FinAbGroup::cyclic(2));
  CHECK(h.at(1).trivial());
  CHECK(h.at(2) == FinAbGroup::cyclic(2));
}

TEST_CASE("Smith/UCT route equals brute force on random complexes") {
  std::mt19937_64 rng(2024);
  std::uniform_int_distribution<std::size_t> dim(0, 4);
  const std::vector<FinAbGroup> groups{FinAbGroup::cyclic(2), FinAbGroup::cyclic(3), FinAbGroup::cyclic(4),
                                       FinAbGroup({2, 2})};
  for (int trial = 0; trial < 120; ++trial) {
    const auto &a = groups[static_cast<std::size_t>(trial) % groups.size()];
    std::size_t cap = a.smallOrder() <= 3 ? 6 : 4;
    std::vector<std::size_t> dims;
    for (int q = 0; q < 4; ++q) dims.push_back(std::min(cap, dim(rng) + (q == 0 ? 1 : 0)));
    auto c = randomComplex(rng, dims);
    auto fast = cohomologyWithCoefficients(c, a);
    auto slow = bruteForceCohomology(c, a);
    CAPTURE(trial, a.toString());
    CHECK(fast.groups == slow.groups);
  }
}

TEST_CASE("Euler characteristic over prime fields") {
  std::mt19937_64 rng(5);
  for (std::int64_t p : {2, 3, 5}) {
    for (int trial = 0; trial < 20; ++trial) {
      auto c = randomComplex(rng, {3, 5, 4, 2});
      auto h = cohomologyWithCoefficients(c, FinAbGroup::cyclic(p));
      long chiH = 0, chiC = 0;
      for (std::size_t q = 0; q < c.dims.size(); ++q) {
        long lg = 0;
        Integer o = h.at(q).order();
        while (o > 1) {
          o /= p;
          ++lg;
        }
        chiH += (q % 2 ? -lg : lg);
        chiC += (q % 2 ? -1 : 1) * static_cast<long>(c.dims[q]);
      }
      CHECK(chiH == chiC);
    }
  }
}

TEST_CASE("generators span the cohomology group") {
  std::mt19937_64 rng(99);
  for (std::int64_t m : {2, 3, 4, 6}) {
    for (int trial = 0; trial < 10; ++trial) {
      auto c = randomComplex(rng, {2, 4, 4, 2});
      auto a = FinAbGroup::cyclic(m);
      auto h = cohomologyWithCoefficients(c, a, {.generators = true});
      for (std::size_t q = 0; q < c.dims.size(); ++q) {
        const auto &gens = h.generators[q];
        Integer prod = 1;
        for (const auto &g : gens) prod *= g.order;
        CHECK(prod == h.at(q).order());
        // Generators are cocycles and, with the coboundaries, span |H| * |B|.
        const IntMatrix prev = c.diff(static_cast<int>(q) - 1), next = c.diff(static_cast<int>(q));
        IntMatrix g(c.dim(static_cast<int>(q)), gens.size());
        for (std::size_t k = 0; k < gens.size(); ++k)
          for (std::size_t i = 0; i < g.rows(); ++i) g(i, k) = gens[k].cochain[i].r[0];
        auto image = next * g;
        for (std::size_t i = 0; i < image.rows(); ++i)
          for (std::size_t k = 0; k < image.cols(); ++k) CHECK(image(i, k) % m == 0);
        Integer withGens = subgroupOrder(IntMatrix::hcat(prev, g), m);
        Integer withoutGens = subgroupOrder(prev, m);
        CHECK(withGens == withoutGens * h.at(q).order());
      }
    }
  }
}

TEST_CASE("brute force refuses large instances") {
  CochainComplex big{{30}, {}};
  try {
    bruteForceCohomology(big, FinAbGroup::cyclic(3));
    FAIL("expected instance-too-large");
  } catch (const Error &e) {
    CHECK(e.kind() == ErrorKind::InstanceTooLarge);
  }
}

TEST_CASE("image and kernel orders") {
  auto d = IntMatrix::fromRows({{2, 0}, {0, 3}});
  CHECK(imageOrder(d, FinAbGroup::cyclic(6)) == 6);
  CHECK(kernelOrder(d, FinAbGroup::cyclic(6)) == 6);
  CHECK(subgroupOrder(IntMatrix::fromRows({{1}, {1}}), 3) == 3);
}
