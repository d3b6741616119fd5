#pragma once

// Real-valued functions on windows of Z with exact rational values, and the
// Higson and Freudenthal variation checks.

#include "coarsecoh/error.hpp"
#include "coarsecoh/space.hpp"
#include "coarsecoh/subsets.hpp"

#include <gmpxx.h>

#include <algorithm>
#include <functional>
#include <map>
#include <memory>
#include <optional>
#include <string>
#include <utility>
#include <vector>

namespace coarsecoh {

using Rational = mpq_class;

namespace detail {

/// P/Q = sum_{n=a+1}^{b} 1/n with Q = (a+1)...b, by binary splitting.
inline void harmonicSplit(Coord a, Coord b, mpz_class &p, mpz_class &q) {
  if (b - a == 1) {
    p = 1;
    q = static_cast<long>(b);
    return;
  }
  Coord m = a + (b - a) / 2;
  mpz_class p1, q1, p2, q2;
  harmonicSplit(a, m, p1, q1);
  harmonicSplit(m, b, p2, q2);
  p = p1 * q2 + p2 * q1;
  q = q1 * q2;
}

inline Coord iabs(Coord x) { return x < 0 ? -x : x; }

} // namespace detail

/// sum_{n=a+1}^{b} 1/n for 0 <= a <= b.
inline Rational harmonicSegment(Coord a, Coord b) {
  require(0 <= a && a <= b, ErrorKind::InvalidArgument, "harmonic segment needs 0 <= a <= b");
  if (a == b) return 0;
  mpz_class p, q;
  detail::harmonicSplit(a, b, p, q);
  Rational out(p, q);
  out.canonicalize();
  return out;
}

inline Rational harmonicNumber(Coord n) { return harmonicSegment(0, n); }

/// A function on the points `domain` of the window [-radius, radius] of Z.
/// Values are produced on demand so that large windows stay cheap when only
/// local differences are needed.
struct RealFunctionWindow {
  std::string name;
  Coord radius = 0;
  std::vector<Coord> domain; ///< sorted, distinct, inside the window
  std::function<Rational(Coord)> value;
  std::function<Rational(Coord, Coord)> difference; ///< f(y) - f(x)
  std::function<Rational()> range;                  ///< max - min over the domain

  static std::vector<Coord> fullWindow(Coord w) {
    std::vector<Coord> d;
    d.reserve(static_cast<std::size_t>(2 * w + 1));
    for (Coord z = -w; z <= w; ++z) d.push_back(z);
    return d;
  }

  /// Explicit values on a sorted domain.
  static RealFunctionWindow tabulated(std::string name, Coord radius, std::vector<Coord> domain,
                                      std::vector<Rational> values) {
    require(domain.size() == values.size(), ErrorKind::InvalidArgument, "one value per domain point");
    require(std::is_sorted(domain.begin(), domain.end()) &&
                std::adjacent_find(domain.begin(), domain.end()) == domain.end(),
            ErrorKind::InvalidArgument, "domain must be sorted and distinct");
    for (Coord z : domain)
      require(detail::iabs(z) <= radius, ErrorKind::PointOutsideWindow, std::to_string(z) + " outside the window");
    auto table = std::make_shared<std::map<Coord, Rational>>();
    for (std::size_t i = 0; i < domain.size(); ++i) (*table)[domain[i]] = values[i];
    RealFunctionWindow f;
    f.name = std::move(name);
    f.radius = radius;
    f.domain = std::move(domain);
    f.value = [table](Coord z) {
      auto it = table->find(z);
      if (it == table->end()) fail(ErrorKind::PointOutsideWindow, std::to_string(z) + " not in the domain");
      return it->second;
    };
    f.difference = [v = f.value](Coord x, Coord y) { return Rational(v(y) - v(x)); };
    f.range = [table] {
      if (table->empty()) return Rational(0);
      auto [lo, hi] = std::minmax_element(table->begin(), table->end(),
                                          [](const auto &a, const auto &b) { return a.second < b.second; });
      return Rational(hi->second - lo->second);
    };
    return f;
  }

  static RealFunctionWindow constant(Coord w, Rational c = 0) {
    auto d = fullWindow(w);
    std::vector<Rational> v(d.size(), c);
    auto f = tabulated("constant", w, std::move(d), std::move(v));
    return f;
  }

  /// 1 on z >= 0, 0 elsewhere.
  static RealFunctionWindow indicator(Coord w) {
    auto d = fullWindow(w);
    std::vector<Rational> v;
    for (Coord z : d) v.emplace_back(z >= 0 ? 1 : 0);
    return tabulated("indicator", w, std::move(d), std::move(v));
  }

  static RealFunctionWindow parity(Coord w) {
    auto d = fullWindow(w);
    std::vector<Rational> v;
    for (Coord z : d) v.emplace_back(detail::iabs(z) % 2);
    return tabulated("mod2", w, std::move(d), std::move(v));
  }

  /// f(z) = sum_{n=1}^{|z|} 1/n.
  static RealFunctionWindow harmonic(Coord w) {
    RealFunctionWindow f;
    f.name = "harmonic";
    f.radius = w;
    f.domain = fullWindow(w);
    f.value = [](Coord z) { return harmonicNumber(detail::iabs(z)); };
    f.difference = [](Coord x, Coord y) {
      Coord a = detail::iabs(x), b = detail::iabs(y);
      if (a <= b) return harmonicSegment(a, b);
      return Rational(-harmonicSegment(b, a));
    };
    f.range = [w] { return harmonicNumber(w); };
    return f;
  }
};

enum class VariationVerdict { Pass, Fail, Inconclusive };

inline std::string_view toString(VariationVerdict v) {
  switch (v) {
  case VariationVerdict::Pass: return "pass";
  case VariationVerdict::Fail: return "fail";
  case VariationVerdict::Inconclusive: return "inconclusive";
  }
  return "?";
}

struct VariationRow {
  Rational epsilon; ///< zero in the exact (Freudenthal) variant
  Dist scale = 0;
  bool violated = false;
  Dist k = 0; ///< all pairs with both norms > k vary by less than epsilon
  std::optional<std::pair<Coord, Coord>> witness; ///< violating pair realizing k
  VariationVerdict verdict = VariationVerdict::Inconclusive;
};

struct HigsonReport {
  std::string function;
  Coord radius = 0;
  std::vector<VariationRow> rows;
  VariationVerdict verdict = VariationVerdict::Inconclusive;
};

namespace detail {

inline VariationVerdict foldVerdicts(const std::vector<VariationRow> &rows) {
  bool inconclusive = false;
  for (const auto &r : rows) {
    if (r.verdict == VariationVerdict::Fail) return VariationVerdict::Fail;
    if (r.verdict == VariationVerdict::Inconclusive) inconclusive = true;
  }
  return inconclusive ? VariationVerdict::Inconclusive : VariationVerdict::Pass;
}

/// Scans pairs x < y of the domain with y - x <= scale; `bad` decides
/// whether a difference is a violation.
template <class Bad>
VariationRow scanPairs(const RealFunctionWindow &f, Dist scale, Bad &&bad, double margin) {
  VariationRow row;
  row.scale = scale;
  const auto &d = f.domain;
  for (std::size_t i = 0; i < d.size(); ++i)
    for (std::size_t j = i + 1; j < d.size() && d[j] - d[i] <= scale; ++j) {
      Dist m = std::min(iabs(d[i]), iabs(d[j]));
      if (row.violated && m <= row.k) continue;
      if (bad(f.difference(d[i], d[j]))) {
        row.violated = true;
        row.k = m;
        row.witness = std::make_pair(d[i], d[j]);
      }
    }
  Sweep s;
  s.scales = {scale};
  s.margin = margin;
  switch (classifyRadius(row.k, f.radius, s)) {
  case BoundednessCertificate::Verdict::Bounded: row.verdict = VariationVerdict::Pass; break;
  case BoundednessCertificate::Verdict::Unbounded: row.verdict = VariationVerdict::Fail; break;
  default: row.verdict = VariationVerdict::Inconclusive;
  }
  return row;
}

} // namespace detail

/// For each (epsilon, R), the smallest K such that pairs at distance <= R
/// with both norms above K vary by less than epsilon. A K running into the
/// window edge fails; one in the margin is inconclusive.
inline HigsonReport checkHigson(const RealFunctionWindow &f, const std::vector<Rational> &epsGrid,
                                const std::vector<Dist> &rGrid, double margin = 0.1) {
  HigsonReport rep;
  rep.function = f.name;
  rep.radius = f.radius;
  for (const auto &eps : epsGrid) {
    require(eps > 0, ErrorKind::InvalidArgument, "epsilon must be positive");
    for (Dist r : rGrid) {
      auto row = detail::scanPairs(f, r, [&](const Rational &d) { return abs(d) >= eps; }, margin);
      row.epsilon = eps;
      rep.rows.push_back(std::move(row));
    }
  }
  rep.verdict = detail::foldVerdicts(rep.rows);
  return rep;
}

struct ValueBlock {
  Rational value;
  std::vector<Coord> points;
};

struct FreudenthalReport {
  std::string function;
  std::vector<VariationRow> rows;
  std::vector<ValueBlock> blocks; ///< the decomposition by value, in value order
  bool finiteValues = true;       ///< no value first appears in the outer half of the window
  VariationVerdict verdict = VariationVerdict::Inconclusive;
};

/// Exact variant: pairs at distance <= R outside the K-ball take equal values.
inline FreudenthalReport checkFreudenthal(const RealFunctionWindow &f, const std::vector<Dist> &rGrid,
                                          double margin = 0.1) {
  FreudenthalReport rep;
  rep.function = f.name;
  for (Dist r : rGrid) rep.rows.push_back(detail::scanPairs(f, r, [](const Rational &d) { return d != 0; }, margin));

  // Values by walking the domain outward with local differences.
  std::map<Rational, std::vector<Coord>> byValue;
  std::map<Rational, Dist> firstNorm;
  if (!f.domain.empty()) {
    Rational v = f.value(f.domain.front());
    for (std::size_t i = 0; i < f.domain.size(); ++i) {
      if (i > 0) v += f.difference(f.domain[i - 1], f.domain[i]);
      Coord z = f.domain[i];
      byValue[v].push_back(z);
      auto [it, fresh] = firstNorm.emplace(v, detail::iabs(z));
      if (!fresh) it->second = std::min<Dist>(it->second, detail::iabs(z));
    }
  }
  for (const auto &[value, norm] : firstNorm)
    if (2 * norm > f.radius) rep.finiteValues = false;
  for (auto &[value, pts] : byValue) rep.blocks.push_back({value, std::move(pts)});

  rep.verdict = rep.finiteValues ? detail::foldVerdicts(rep.rows) : VariationVerdict::Fail;
  return rep;
}

struct InterpolationReport {
  RealFunctionWindow extension;
  std::vector<Coord> clamped; ///< window points outside [min U, max U]
  bool exactOnU = true;
  Rational gapBound;    ///< max over consecutive points of U of |df| / gap
  Rational maxUnitStep; ///< max |F(z+1) - F(z)| over the window
  bool variationHolds = true;
};

/// Extends f from U to the whole window by linear interpolation across gaps
/// and constant clamping beyond the extreme points of U.
inline InterpolationReport interpolateExtension(const RealFunctionWindow &f) {
  require(!f.domain.empty(), ErrorKind::InvalidArgument, "interpolation needs a nonempty domain");
  const auto &u = f.domain;
  std::vector<Rational> fu;
  fu.reserve(u.size());
  for (Coord z : u) fu.push_back(f.value(z));

  InterpolationReport rep;
  rep.gapBound = 0;
  for (std::size_t i = 0; i + 1 < u.size(); ++i) {
    Rational slope = abs(fu[i + 1] - fu[i]) / Rational(u[i + 1] - u[i]);
    if (slope > rep.gapBound) rep.gapBound = slope;
  }

  const Coord w = f.radius;
  std::vector<Coord> window = RealFunctionWindow::fullWindow(w);
  std::vector<Rational> values;
  values.reserve(window.size());
  std::size_t k = 0; // u[k] is the first point of U with u[k] >= z
  for (Coord z : window) {
    while (k < u.size() && u[k] < z) ++k;
    if (k == u.size()) {
      values.push_back(fu.back());
      rep.clamped.push_back(z);
    } else if (u[k] == z) {
      values.push_back(fu[k]);
    } else if (k == 0) {
      values.push_back(fu.front());
      rep.clamped.push_back(z);
    } else {
      Coord lo = u[k - 1], hi = u[k];
      values.push_back((fu[k - 1] * Rational(hi - z) + fu[k] * Rational(z - lo)) / Rational(hi - lo));
    }
  }

  rep.maxUnitStep = 0;
  for (std::size_t i = 0; i + 1 < values.size(); ++i) {
    Rational step = abs(values[i + 1] - values[i]);
    if (step > rep.maxUnitStep) rep.maxUnitStep = step;
  }
  rep.variationHolds = rep.maxUnitStep <= rep.gapBound;
  for (std::size_t i = 0; i < u.size(); ++i)
    rep.exactOnU = rep.exactOnU && values[static_cast<std::size_t>(u[i] + w)] == fu[i];
  rep.extension = RealFunctionWindow::tabulated("ext(" + f.name + ")", w, std::move(window), std::move(values));
  return rep;
}

} // namespace coarsecoh
