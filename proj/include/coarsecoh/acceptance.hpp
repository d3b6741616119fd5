#pragma once

// The acceptance suite: one pass/fail verdict per criterion, shared by the
// acceptance test binary and `coarsecoh reproduce-paper`.

#include "coarsecoh/cech.hpp"
#include "coarsecoh/cochain.hpp"
#include "coarsecoh/ends.hpp"
#include "coarsecoh/higson.hpp"
#include "coarsecoh/homotopy.hpp"
#include "coarsecoh/mv.hpp"

#include <chrono>
#include <cmath>
#include <functional>
#include <random>
#include <sstream>
#include <string>
#include <vector>

namespace coarsecoh {

struct CriterionResult {
  int id = 0;
  std::string title;
  bool pass = false;
  std::string detail;
  double seconds = 0;
};

namespace fixtures {

/// A0 = (+,+), A1 = (+,-), A2 = (-,-), A3 = (-,+): counterclockwise from the
/// positive quadrant, so A0/A2 and A1/A3 are the opposite pairs.
inline Partition quadrants() {
  return {{SubsetExpr::quadrant({'+', '+'}), SubsetExpr::quadrant({'+', '-'}), SubsetExpr::quadrant({'-', '-'}),
           SubsetExpr::quadrant({'-', '+'})}};
}

/// phi(Ai, Aj) = row i, column j.
inline const std::vector<std::vector<std::int64_t>> &quadrantTable() {
  static const std::vector<std::vector<std::int64_t>> t{{0, 1, 2, 1}, {2, 0, 1, 2}, {2, 2, 0, 1}, {2, 2, 2, 0}};
  return t;
}

inline BlockyCochain quadrantCocycle() {
  auto a = FinAbGroup::cyclic(3);
  BlockyCochain phi(1, 4, a);
  for (std::size_t i = 0; i < 4; ++i)
    for (std::size_t j = 0; j < 4; ++j) phi.set({i, j}, a.element({quadrantTable()[i][j]}));
  return phi;
}

inline std::vector<SubsetExpr> halfSpaceCover(int n) {
  std::vector<SubsetExpr> parts;
  for (int i = 0; i < n; ++i) {
    parts.push_back(SubsetExpr::halfSpace(i, '+'));
    parts.push_back(SubsetExpr::halfSpace(i, '-'));
  }
  return parts;
}

/// Top, right (with the origin), bottom, left cones of Z^2.
inline std::vector<SubsetExpr> coneBlocks() {
  return {parseSubset("cone(gt,x1,|x0|)"), parseSubset("cone(le,|x1|,|x0|)") & SubsetExpr::halfSpace(0, '+'),
          parseSubset("cone(lt,x1,-|x0|)"), parseSubset("cone(le,|x1|,|x0|)") & SubsetExpr::halfSpace(0, '-')};
}

inline SubsetExpr coneU1() { return parseSubset("cone(le,x1,|x0|)"); }
inline SubsetExpr coneU2() { return parseSubset("cone(ge,x1,-|x0|)"); }

/// Diagonal split of I_0 with the bounded corner as its own block.
inline Partition i0Partition() {
  auto corner = SubsetExpr::ball(Point{0, 0}, 2);
  auto below = parseSubset("cone(le,x1,x0)");
  return {{corner, below & !corner, !below & !corner}};
}

/// H^q(Z^n) over A: A+A in degree 0 for n = 1, A in degrees 0 and n-1 otherwise.
inline FinAbGroup latticeCohomology(int n, int q, const FinAbGroup &a) {
  if (q == 0 && n == 1) {
    std::vector<std::int64_t> f = a.factors();
    f.insert(f.end(), a.factors().begin(), a.factors().end());
    return FinAbGroup::fromCyclicOrders(f);
  }
  if (q == 0 || (n >= 2 && q == n - 1)) return a;
  return {};
}

} // namespace fixtures

namespace detail {

inline std::string groupText(const FinAbGroup &g) {
  if (g.trivial()) return "0";
  std::string s;
  for (auto f : g.factors()) s += (s.empty() ? "Z/" : "+Z/") + std::to_string(f);
  return s;
}

class Stopwatch {
public:
  double seconds() const {
    return std::chrono::duration<double>(std::chrono::steady_clock::now() - start_).count();
  }

private:
  std::chrono::steady_clock::time_point start_ = std::chrono::steady_clock::now();
};

} // namespace detail

namespace acceptance {

inline Sweep sweepWith(unsigned jobs, std::vector<Dist> scales = {1, 2, 4, 8}) {
  Sweep s;
  s.jobs = jobs;
  s.scales = std::move(scales);
  return s;
}

inline CriterionResult latticeCech(unsigned jobs) {
  CriterionResult r{1, "Z^n Cech cohomology from half-space covers, n<=5"};
  detail::Stopwatch sw;
  const std::vector<FinAbGroup> groups{FinAbGroup::cyclic(2), FinAbGroup::cyclic(3), FinAbGroup::cyclic(4),
                                       FinAbGroup({2, 4})};
  int checked = 0, wrong = 0;
  std::ostringstream bad;
  for (int n = 1; n <= 5; ++n) {
    CoarseContext ctx(SpaceModel::lattice(n, 64), sweepWith(jobs));
    for (const auto &a : groups) {
      auto res = cechCohomology(fixtures::halfSpaceCover(n), ctx, a, n + 1);
      for (int q = 0; q <= n + 1; ++q, ++checked)
        if (!(res.result.at(static_cast<std::size_t>(q)) == fixtures::latticeCohomology(n, q, a))) {
          ++wrong;
          bad << " n=" << n << ",q=" << q << ",A=" << detail::groupText(a);
        }
    }
  }
  r.seconds = sw.seconds();
  r.pass = wrong == 0 && r.seconds < 10;
  r.detail = std::to_string(checked - wrong) + "/" + std::to_string(checked) + " groups match" + bad.str();
  return r;
}

inline CriterionResult quadrantCocycle(unsigned jobs) {
  CriterionResult r{2, "quadrant cocycle over Z/3 is not a coboundary"};
  detail::Stopwatch sw;
  CoarseContext ctx(SpaceModel::lattice(2, 64), sweepWith(jobs));
  auto p = fixtures::quadrants();
  auto phi = fixtures::quadrantCocycle();
  auto dphi = differential(phi);
  auto cert = supportCocontrolled(dphi, p, ctx);
  bool inside = true, pair02 = false, pair13 = false;
  for (const auto &t : dphi.support()) {
    auto has = [&](std::size_t b) { return std::find(t.begin(), t.end(), b) != t.end(); };
    inside = inside && ((has(0) && has(2)) || (has(1) && has(3)));
    pair02 = pair02 || (has(0) && has(2));
    pair13 = pair13 || (has(1) && has(3));
  }
  auto rep = certifyNonCoboundary(phi, p, ctx);
  r.seconds = sw.seconds();
  r.pass = cert.cocontrolled == Tri::Yes && inside && pair02 && pair13 && dphi.at({0, 2, 0}).r[0] == 1 &&
           rep.verdict == NonCoboundaryReport::Verdict::NonCoboundary && rep.candidates == 81 &&
           rep.eliminated == 81 && r.seconds < 1;
  std::ostringstream os;
  os << "d phi support " << dphi.support().size() << " tuples, cocontrolled=" << toString(cert.cocontrolled)
     << ", verdict " << toString(rep.verdict) << ", eliminated " << rep.eliminated << "/" << rep.candidates;
  r.detail = os.str();
  return r;
}

inline CriterionResult ends(unsigned jobs) {
  CriterionResult r{3, "end counts of Z, Z>=0, Z^2 and the binary tree"};
  detail::Stopwatch sw;
  using V = EndsReport::Verdict;
  CoarseContext z(SpaceModel::lattice(1, 64), sweepWith(jobs)), half(SpaceModel::halfLine(64), sweepWith(jobs)),
      z2(SpaceModel::lattice(2, 64), sweepWith(jobs)), tree(SpaceModel::tree(2, 10), sweepWith(jobs, {1, 2}));
  auto ez = countEnds(SubsetExpr::all(), z), eh = countEnds(SubsetExpr::all(), half),
       e2 = countEnds(SubsetExpr::all(), z2), et = countEnds(SubsetExpr::all(), tree);
  bool treeOk = et.verdict == V::Growing;
  for (const auto &row : et.table)
    for (std::size_t k = 0; k < et.radii.size(); ++k)
      if (et.radii[k] <= 8) treeOk = treeOk && row[k] >= (std::size_t{1} << et.radii[k]);
  r.seconds = sw.seconds();
  r.pass = ez.verdict == V::Finite && ez.ends == 2 && eh.verdict == V::Finite && eh.ends == 1 &&
           e2.verdict == V::Finite && e2.ends == 1 && treeOk;
  std::ostringstream os;
  os << "Z " << toString(ez.verdict) << "(" << ez.ends << "), Z>=0 " << toString(eh.verdict) << "(" << eh.ends
     << "), Z^2 " << toString(e2.verdict) << "(" << e2.ends << "), tree " << toString(et.verdict) << " [";
  for (std::size_t k = 0; k < et.radii.size(); ++k) os << (k ? "," : "") << et.table[0][k];
  os << "]";
  r.detail = os.str();
  return r;
}

inline CriterionResult rayPrimitives(std::uint64_t seed, unsigned jobs) {
  CriterionResult r{4, "ray primitive on 50 seeded cocycles, Z>=0, N=256, Z/3"};
  detail::Stopwatch sw;
  WindowIndex index(SpaceModel::halfLine(256));
  int failures = 0;
  for (int i = 0; i < 50; ++i) {
    std::mt19937_64 rng(seed + static_cast<std::uint64_t>(i));
    Dist noise = 4 + static_cast<Dist>(rng() % 60);
    auto phi = plantedCocycle(index, FinAbGroup::cyclic(3), noise, rng);
    auto rep = rayPrimitive(phi, sweepWith(jobs));
    if (!(rep.boundHolds && rep.dphiCocontrolled == Tri::Yes && rep.remainderCocontrolled == Tri::Yes)) ++failures;
  }
  r.seconds = sw.seconds();
  r.pass = failures == 0;
  r.detail = "failures " + std::to_string(failures) + "/50";
  return r;
}

inline CriterionResult treePrimitives(std::uint64_t seed, unsigned jobs) {
  CriterionResult r{5, "tree primitive on 50 planted cocycles, binary tree depth 10"};
  detail::Stopwatch sw;
  WindowIndex index(SpaceModel::tree(2, 10));
  int failures = 0;
  for (int i = 0; i < 50; ++i) {
    std::mt19937_64 rng(seed + 1000 + static_cast<std::uint64_t>(i));
    Dist noise = static_cast<Dist>(rng() % 3);
    auto phi = plantedCocycle(index, FinAbGroup::cyclic(3), noise, rng);
    auto rep = treePrimitive(phi, sweepWith(jobs, {1, 2, 3}));
    if (!(rep.boundHolds && rep.dphiCocontrolled == Tri::Yes && rep.remainderCocontrolled == Tri::Yes)) ++failures;
  }
  r.seconds = sw.seconds();
  r.pass = failures == 0;
  r.detail = "failures " + std::to_string(failures) + "/50";
  return r;
}

inline CriterionResult chainHomotopies(std::uint64_t seed, unsigned jobs) {
  CriterionResult r{6, "chain homotopy identity for close maps, degrees 1..3"};
  detail::Stopwatch sw;
  struct Pair {
    CoarseMap a, b;
    Partition p;
  };
  auto z = SpaceModel::lattice(1, 32), z2 = SpaceModel::lattice(2, 16);
  auto sz = CoarseMap::shift(z, {1}), sz2 = CoarseMap::shift(z2, {1, 1});
  std::vector<Pair> pairs{
      {CoarseMap("incl", z, sz.codomain(), [](const Point &x) { return x; }), sz,
       Partition{{SubsetExpr::halfSpace(0, '+', 4), SubsetExpr::halfSpace(0, '-', 4) & SubsetExpr::halfSpace(0, '+', -4),
                  SubsetExpr::halfSpace(0, '-', -4)}}},
      {CoarseMap("incl", z2, sz2.codomain(), [](const Point &x) { return x; }), sz2, fixtures::quadrants()},
      {CoarseMap::ht(16, 1), CoarseMap::identity(SpaceModel::quadrantI0(16)), fixtures::i0Partition()}};
  const std::vector<FinAbGroup> groups{FinAbGroup::cyclic(2), FinAbGroup::cyclic(3), FinAbGroup({2, 4})};
  std::mt19937_64 rng(seed + 2000);
  int held = 0, total = 0;
  for (const auto &pr : pairs)
    for (int i = 0; i < 100; ++i, ++total) {
      auto phi = BlockyCochain::random(1 + i % 3, pr.p.size(), groups[static_cast<std::size_t>(i) % 3], rng);
      if (chainHomotopy(pr.a, pr.b, pr.p, phi, sweepWith(jobs)).holds) ++held;
    }
  r.seconds = sw.seconds();
  r.pass = held == total;
  r.detail = std::to_string(held) + "/" + std::to_string(total) + " identities exact over 3 pairs";
  return r;
}

inline CriterionResult leibniz(std::uint64_t seed) {
  CriterionResult r{7, "Leibniz rule for the cup product"};
  detail::Stopwatch sw;
  const std::vector<std::pair<int, int>> degrees{{0, 1}, {1, 1}, {1, 2}};
  const std::vector<FinAbGroup> groups{FinAbGroup::cyclic(2), FinAbGroup::cyclic(3), FinAbGroup::cyclic(6),
                                       FinAbGroup({2, 4})};
  std::mt19937_64 rng(seed + 3000);
  int held = 0;
  for (int i = 0; i < 100; ++i) {
    auto [p, q] = degrees[static_cast<std::size_t>(i) % 3];
    const auto &a = groups[static_cast<std::size_t>(i) % groups.size()];
    std::size_t n = 2 + static_cast<std::size_t>(i % 4);
    auto phi = BlockyCochain::random(p, n, a, rng), psi = BlockyCochain::random(q, n, a, rng);
    auto right = cupProduct(phi, differential(psi));
    if (differential(cupProduct(phi, psi)) == cupProduct(differential(phi), psi) + (p % 2 ? -right : right)) ++held;
  }
  r.seconds = sw.seconds();
  r.pass = held == 100;
  r.detail = std::to_string(held) + "/100 pairs";
  return r;
}

inline CriterionResult prismAndCollapse(std::uint64_t seed, unsigned jobs) {
  CriterionResult r{8, "prism identity and collapse invariance on I_0, N=32"};
  detail::Stopwatch sw;
  const Coord n = 32;
  CoarseContext ctx(SpaceModel::quadrantI0(n), sweepWith(jobs));
  auto p = fixtures::i0Partition();
  std::mt19937_64 rng(seed + 4000);
  bool ok = true;
  std::size_t tuples = 0;
  for (int q = 1; q <= 2; ++q) {
    auto phi = BlockyCochain::random(q, p.size(), FinAbGroup::cyclic(3), rng);
    auto pr = prismOperator(CoarseMap::ht(n, 0), CoarseMap::ht(n, 1), CoarseMap::ht(n, 3), p, phi, ctx, ctx);
    auto cr = verifyCollapseInvariance(phi, p, ctx);
    const double size = static_cast<double>(ctx.index().size());
    ok = ok && pr.tableIdentity && pr.windowIdentity && cr.tableIdentity && cr.windowIdentity &&
         static_cast<double>(pr.windowTuples) == std::pow(size, q) &&
         static_cast<double>(cr.windowTuples) == std::pow(size, q + 1);
    tuples += pr.windowTuples + cr.windowTuples;
  }
  r.seconds = sw.seconds();
  r.pass = ok;
  r.detail = std::to_string(tuples) + " window tuples checked";
  return r;
}

inline CriterionResult mayerVietorisCones(unsigned jobs) {
  CriterionResult r{9, "Mayer-Vietoris for the cone cover of Z^2 over Z/3"};
  detail::Stopwatch sw;
  auto a = FinAbGroup::cyclic(3);
  CoarseContext ctx(SpaceModel::lattice(2, 32), sweepWith(jobs));
  auto mv = mayerVietoris(fixtures::coneU1(), fixtures::coneU2(), fixtures::coneBlocks(), ctx, a);
  CoarseContext big(SpaceModel::lattice(2, 64), sweepWith(jobs));
  auto cech = cechCohomology(fixtures::halfSpaceCover(2), big, a, 2);
  auto quad = coarseCohomologyViaPartition(fixtures::quadrants().blocks, big, a);
  auto nc = certifyNonCoboundary(fixtures::quadrantCocycle(), fixtures::quadrants(), big);
  r.seconds = sw.seconds();
  const bool h1 = mv.rows.size() >= 2 && mv.rows[1].hx == a;
  r.pass = mv.betaAlphaZero && mv.exact() && h1 && cech.result.at(1) == a && quad.result.at(1) == a &&
           nc.verdict == NonCoboundaryReport::Verdict::NonCoboundary;
  std::ostringstream os;
  os << "beta.alpha=0 " << (mv.betaAlphaZero ? "yes" : "no") << ", exact " << (mv.exact() ? "yes" : "no")
     << ", H^1 " << (mv.rows.size() >= 2 ? detail::groupText(mv.rows[1].hx) : "?") << " (Cech "
     << detail::groupText(cech.result.at(1)) << ", quadrants " << detail::groupText(quad.result.at(1)) << ")";
  r.detail = os.str();
  return r;
}

inline CriterionResult smithVersusBrute(unsigned jobs) {
  CriterionResult r{10, "Smith/UCT cohomology equals brute force on small complexes"};
  detail::Stopwatch sw;
  std::vector<CochainComplex> complexes;
  CoarseContext z(SpaceModel::lattice(1, 64), sweepWith(jobs)), z2(SpaceModel::lattice(2, 64), sweepWith(jobs)),
      z3(SpaceModel::lattice(3, 16), sweepWith(jobs));
  auto closeness = [&](const std::vector<SubsetExpr> &blocks, const CoarseContext &ctx) {
    auto k = buildClosenessComplex(blocks, ctx);
    complexes.push_back(simplicialCochainComplex(k.complex, static_cast<int>(blocks.size()) - 1));
  };
  closeness({SubsetExpr::halfSpace(0, '+'), SubsetExpr::halfSpace(0, '-')}, z);
  closeness(fixtures::quadrants().blocks, z2);
  closeness(fixtures::coneBlocks(), z2);
  closeness({SubsetExpr::halfSpace(0, '+'), SubsetExpr::halfSpace(1, '+') & SubsetExpr::halfSpace(0, '-'),
             SubsetExpr::halfSpace(1, '-') & SubsetExpr::halfSpace(0, '-')},
            z3);
  complexes.push_back(buildCechCover(fixtures::halfSpaceCover(1), z, 2).complex);
  complexes.push_back(buildCechCover(fixtures::halfSpaceCover(2), z2, 3).complex);
  int same = 0, total = 0;
  for (const auto &c : complexes)
    for (long m : {2L, 3L}) {
      auto a = FinAbGroup::cyclic(m);
      ++total;
      auto s = cohomologyWithCoefficients(c, a), b = bruteForceCohomology(c, a);
      bool eq = s.groups.size() == b.groups.size();
      for (std::size_t q = 0; eq && q < s.groups.size(); ++q) eq = s.groups[q] == b.groups[q];
      same += eq;
    }
  r.seconds = sw.seconds();
  r.pass = same == total;
  r.detail = std::to_string(same) + "/" + std::to_string(total) + " complexes agree";
  return r;
}

inline CriterionResult vanishing(unsigned jobs) {
  CriterionResult r{11, "vanishing above the asymptotic dimension"};
  detail::Stopwatch sw;
  bool ok = true;
  std::size_t partitions = 0;
  CoarseContext z(SpaceModel::lattice(1, 64), sweepWith(jobs));
  std::vector<std::vector<SubsetExpr>> zf;
  for (Coord k = 2; k <= 5; ++k) {
    std::vector<SubsetExpr> res;
    for (Coord c = 0; c < k; ++c)
      res.push_back(SubsetExpr::predicate("mod" + std::to_string(k) + "=" + std::to_string(c),
                                          [k, c](const Point &p) { return ((p[0] % k) + k) % k == c; }));
    zf.push_back(res);
  }
  zf.push_back({SubsetExpr::halfSpace(0, '+'), SubsetExpr::halfSpace(0, '-')});
  zf.push_back({SubsetExpr::halfSpace(0, '+', 10), SubsetExpr::halfSpace(0, '-', 10) & SubsetExpr::halfSpace(0, '+'),
                SubsetExpr::halfSpace(0, '-') & SubsetExpr::halfSpace(0, '+', -10),
                SubsetExpr::halfSpace(0, '-', -10)});
  CoarseContext tree(SpaceModel::tree(2, 10), sweepWith(jobs, {1, 2}));
  auto pre = [](std::vector<Coord> w) { return SubsetExpr::treePrefix(Point{std::move(w)}); };
  std::vector<std::vector<SubsetExpr>> tf{
      {pre({0}), pre({1}), SubsetExpr::ball(Point{}, 0)},
      {pre({0, 0}), pre({0, 1}), pre({1}), !pre({0, 0}) & !pre({0, 1}) & !pre({1})},
      {pre({0, 0}), pre({0, 1}), pre({1, 0}), pre({1, 1}), SubsetExpr::ball(Point{}, 1)}};
  for (const auto &a : {FinAbGroup::cyclic(2), FinAbGroup::cyclic(3)}) {
    ok = ok && vanishingCheck(zf, z, a, 2).vanishes() && vanishingCheck(tf, tree, a, 2).vanishes();
    partitions += zf.size() + tf.size();
    for (int n = 1; n <= 5; ++n) {
      CoarseContext ctx(SpaceModel::lattice(n, 64), sweepWith(jobs));
      auto res = cechCohomology(fixtures::halfSpaceCover(n), ctx, a, n + 1);
      for (std::size_t q = static_cast<std::size_t>(n); q <= static_cast<std::size_t>(n + 1); ++q)
        ok = ok && res.result.at(q).trivial();
    }
  }
  r.seconds = sw.seconds();
  r.pass = ok;
  r.detail = std::to_string(partitions) + " partitions and 10 half-space covers checked";
  return r;
}

inline CriterionResult higson(std::uint64_t seed) {
  CriterionResult r{12, "harmonic sum is Higson with divergent range"};
  detail::Stopwatch sw;
  auto rep = checkHigson(RealFunctionWindow::harmonic(256), {Rational(1, 2), Rational(1, 4), Rational(1, 8)}, {1, 2, 4});
  Dist maxK = 0;
  for (const auto &row : rep.rows) maxK = std::max(maxK, row.k);
  const bool small = RealFunctionWindow::harmonic(1 << 8).range() > 5;
  const bool large = RealFunctionWindow::harmonic(1 << 15).range() > 10;
  std::mt19937_64 rng(seed + 5000);
  int interp = 0;
  for (int i = 0; i < 20; ++i) {
    const Coord w = 64;
    std::vector<Coord> u;
    std::vector<Rational> v;
    for (Coord x = -w + static_cast<Coord>(rng() % 8); x <= w; x += 1 + static_cast<Coord>(rng() % 7)) {
      u.push_back(x);
      v.emplace_back(static_cast<long>(rng() % 21) - 10, 1 + static_cast<long>(rng() % 5));
      v.back().canonicalize();
    }
    auto ext = interpolateExtension(RealFunctionWindow::tabulated("gaps", w, u, v));
    interp += ext.exactOnU && ext.variationHolds;
  }
  r.seconds = sw.seconds();
  r.pass = rep.verdict == VariationVerdict::Pass && small && large && interp == 20;
  r.detail = "Higson " + std::string(toString(rep.verdict)) + " (max K " + std::to_string(maxK) + "), range>5@2^8 " +
             (small ? "yes" : "no") + ", range>10@2^15 " + (large ? "yes" : "no") + ", interpolation " +
             std::to_string(interp) + "/20";
  return r;
}

} // namespace acceptance

/// Runs every criterion; an exception fails its criterion only.
inline std::vector<CriterionResult> runAcceptance(std::uint64_t seed = 1, unsigned jobs = 1) {
  using namespace acceptance;
  const std::vector<std::pair<int, std::function<CriterionResult()>>> steps{
      {1, [&] { return latticeCech(jobs); }},
      {2, [&] { return quadrantCocycle(jobs); }},
      {3, [&] { return ends(jobs); }},
      {4, [&] { return rayPrimitives(seed, jobs); }},
      {5, [&] { return treePrimitives(seed, jobs); }},
      {6, [&] { return chainHomotopies(seed, jobs); }},
      {7, [&] { return leibniz(seed); }},
      {8, [&] { return prismAndCollapse(seed, jobs); }},
      {9, [&] { return mayerVietorisCones(jobs); }},
      {10, [&] { return smithVersusBrute(jobs); }},
      {11, [&] { return vanishing(jobs); }},
      {12, [&] { return higson(seed); }},
  };
  std::vector<CriterionResult> out;
  for (const auto &[id, step] : steps) {
    try {
      out.push_back(step());
    } catch (const std::exception &e) {
      out.push_back({id, "criterion " + std::to_string(id), false, std::string("error: ") + e.what(), 0});
    }
  }
  return out;
}

inline std::string formatResult(const CriterionResult &r) {
  std::ostringstream os;
  os << (r.pass ? "PASS" : "FAIL") << "  " << (r.id < 10 ? " " : "") << r.id << "  " << r.title << "  -- "
     << r.detail;
  os.precision(3);
  os << std::fixed << " (" << r.seconds << " s)";
  return os.str();
}

} // namespace coarsecoh
