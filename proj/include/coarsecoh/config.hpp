#pragma once

// JSON job documents: space, named subsets, partitions and covers,
// coefficients, sweep and command options. Unknown keys are rejected.

#include "coarsecoh/cochain.hpp"
#include "coarsecoh/finab.hpp"
#include "coarsecoh/higson.hpp"
#include "coarsecoh/maps.hpp"
#include "coarsecoh/space.hpp"
#include "coarsecoh/subsets.hpp"

#include <json.hpp>

#include <fstream>
#include <map>
#include <optional>
#include <set>
#include <string>
#include <vector>

namespace coarsecoh {

using Json = nlohmann::ordered_json;

namespace config {

[[noreturn]] inline void bad(const std::string &where, const std::string &what) {
  fail(ErrorKind::ConfigError, where + ": " + what);
}

inline void allowKeys(const Json &j, const std::string &where, std::initializer_list<const char *> keys) {
  if (!j.is_object()) bad(where, "expected an object");
  std::set<std::string> allowed(keys.begin(), keys.end());
  for (const auto &[k, v] : j.items())
    if (!allowed.count(k)) bad(where, "unknown key '" + k + "'");
}

template <class T>
T get(const Json &j, const std::string &key, const std::string &where) {
  if (!j.contains(key)) bad(where, "missing key '" + key + "'");
  try {
    return j.at(key).get<T>();
  } catch (const nlohmann::json::exception &e) {
    bad(where + "." + key, e.what());
  }
}

template <class T>
T get(const Json &j, const std::string &key, const std::string &where, T fallback) {
  return j.contains(key) ? get<T>(j, key, where) : fallback;
}

inline Rational rational(const Json &j, const std::string &where) {
  try {
    if (j.is_number_integer()) return Rational(j.get<long>());
    if (j.is_string()) {
      Rational q(j.get<std::string>());
      if (q.get_den() == 0) bad(where, "zero denominator");
      q.canonicalize();
      return q;
    }
  } catch (const std::invalid_argument &) {
  }
  bad(where, "expected an integer or a rational string like \"1/2\"");
}

inline std::string rationalText(const Rational &q) { return q.get_str(); }

} // namespace config

inline SpaceModel spaceFromJson(const Json &j, const std::string &where = "space") {
  using config::get;
  std::string kind = get<std::string>(j, "kind", where);
  if (kind == "lattice") {
    config::allowKeys(j, where, {"kind", "dim", "radius", "metric", "shape", "nonnegative"});
    std::string metric = get<std::string>(j, "metric", where, "L1"), shape = get<std::string>(j, "shape", where, "box");
    if (metric != "L1" && metric != "Linf") config::bad(where, "metric must be L1 or Linf");
    if (shape != "box" && shape != "ball") config::bad(where, "shape must be box or ball");
    return SpaceModel::lattice(get<int>(j, "dim", where), get<Coord>(j, "radius", where),
                               metric == "L1" ? Metric::L1 : Metric::Linf,
                               shape == "box" ? WindowShape::Box : WindowShape::Ball,
                               get<std::vector<bool>>(j, "nonnegative", where, {}));
  }
  if (kind == "halfline" || kind == "quadrant") {
    config::allowKeys(j, where, {"kind", "radius"});
    Coord r = get<Coord>(j, "radius", where);
    return kind == "halfline" ? SpaceModel::halfLine(r) : SpaceModel::quadrantI0(r);
  }
  if (kind == "tree") {
    config::allowKeys(j, where, {"kind", "branching", "depth", "levels"});
    if (j.contains("levels")) return SpaceModel::tree(get<std::vector<int>>(j, "levels", where));
    return SpaceModel::tree(get<int>(j, "branching", where), get<int>(j, "depth", where));
  }
  if (kind == "explicit") {
    config::allowKeys(j, where, {"kind", "matrix"});
    return SpaceModel::explicitFinite(get<std::vector<std::vector<Dist>>>(j, "matrix", where));
  }
  if (kind == "asymptotic-product") {
    config::allowKeys(j, where, {"kind", "base"});
    return SpaceModel::asymptoticProduct(spaceFromJson(j.at("base"), where + ".base"));
  }
  config::bad(where, "unknown space kind '" + kind + "'");
}

struct JobConfig {
  std::string description;
  std::optional<SpaceModel> space;
  std::map<std::string, SubsetExpr> subsets;
  std::map<std::string, std::vector<SubsetExpr>> partitions, covers;
  FinAbGroup coefficients = FinAbGroup::cyclic(2);
  Sweep sweep;
  Json options = Json::object();
  std::optional<std::string> out;

  const SpaceModel &requireSpace() const {
    if (!space) config::bad("config", "this command needs a 'space'");
    return *space;
  }

  /// A declared subset name or an inline expression.
  SubsetExpr subset(const std::string &text) const { return parseSubset(text, subsets); }

  const std::vector<SubsetExpr> &partition(const std::string &name) const {
    auto it = partitions.find(name);
    if (it == partitions.end()) config::bad("options", "unknown partition '" + name + "'");
    return it->second;
  }

  const std::vector<SubsetExpr> &cover(const std::string &name) const {
    auto it = covers.find(name);
    if (it == covers.end()) config::bad("options", "unknown cover '" + name + "'");
    return it->second;
  }
};

inline JobConfig jobFromJson(const Json &j) {
  using config::get;
  config::allowKeys(j, "config", {"description", "space", "subsets", "partitions", "covers", "coefficients", "sweep",
                                  "options", "out"});
  JobConfig job;
  job.description = get<std::string>(j, "description", "config", "");
  if (j.contains("space")) job.space = spaceFromJson(j.at("space"));
  if (j.contains("subsets")) {
    if (!j.at("subsets").is_object()) config::bad("subsets", "expected an object of name: expression");
    // Document order, so later subsets may refer to earlier ones.
    for (const auto &[name, e] : j.at("subsets").items()) {
      if (!e.is_string()) config::bad("subsets." + name, "expected an expression string");
      job.subsets.insert_or_assign(name, parseSubset(e.get<std::string>(), job.subsets));
    }
  }
  for (const char *key : {"partitions", "covers"}) {
    if (!j.contains(key)) continue;
    auto &target = std::string(key) == "partitions" ? job.partitions : job.covers;
    if (!j.at(key).is_object()) config::bad(key, "expected an object of name: [expressions]");
    for (const auto &[name, list] : j.at(key).items()) {
      auto texts = get<std::vector<std::string>>(j.at(key), name, key);
      if (texts.empty()) config::bad(std::string(key) + "." + name, "needs at least one block");
      std::vector<SubsetExpr> blocks;
      for (const auto &t : texts) blocks.push_back(job.subset(t));
      target[name] = std::move(blocks);
    }
  }
  if (j.contains("coefficients")) {
    auto orders = get<std::vector<std::int64_t>>(j, "coefficients", "config");
    if (orders.empty()) config::bad("coefficients", "needs at least one invariant factor");
    try {
      job.coefficients = FinAbGroup(orders);
    } catch (const Error &e) {
      config::bad("coefficients", e.what());
    }
  }
  if (j.contains("sweep")) {
    const Json &s = j.at("sweep");
    config::allowKeys(s, "sweep", {"scales", "margin", "pointCap", "symbolic"});
    job.sweep.scales = get<std::vector<Dist>>(s, "scales", "sweep", job.sweep.scales);
    job.sweep.margin = get<double>(s, "margin", "sweep", job.sweep.margin);
    job.sweep.pointCap = get<std::size_t>(s, "pointCap", "sweep", job.sweep.pointCap);
    job.sweep.symbolic = get<bool>(s, "symbolic", "sweep", job.sweep.symbolic);
    if (job.sweep.scales.empty()) config::bad("sweep.scales", "needs at least one scale");
    if (job.sweep.margin <= 0 || job.sweep.margin >= 1) config::bad("sweep.margin", "must lie in (0, 1)");
  }
  if (j.contains("options")) {
    if (!j.at("options").is_object()) config::bad("options", "expected an object");
    job.options = j.at("options");
  }
  if (j.contains("out")) job.out = get<std::string>(j, "out", "config");
  return job;
}

inline JobConfig loadJob(const std::string &path) {
  std::ifstream in(path);
  if (!in) fail(ErrorKind::ConfigError, "cannot open " + path);
  Json j;
  try {
    j = Json::parse(in, nullptr, true, true);
  } catch (const nlohmann::json::exception &e) {
    fail(ErrorKind::ConfigError, path + ": " + e.what());
  }
  return jobFromJson(j);
}

// ---------------------------------------------------------------------------
// Values.

inline Json groupJson(const FinAbGroup &g) { return Json(g.factors()); }

/// {"q": [factors]} for every nonzero degree.
inline Json cohomologyJson(const CohomologyResult &r) {
  Json out = Json::object();
  for (std::size_t q = 0; q < r.groups.size(); ++q)
    if (!r.groups[q].trivial()) out[std::to_string(q)] = groupJson(r.groups[q]);
  return out;
}

/// {"degree": q, "entries": [{"tuple": [...], "value": [...]}]}; missing tuples are zero.
inline BlockyCochain cochainFromJson(const Json &j, std::size_t blocks, const FinAbGroup &a,
                                     const std::string &where = "options.cochain") {
  config::allowKeys(j, where, {"degree", "entries"});
  int degree = config::get<int>(j, "degree", where);
  if (degree < 0) config::bad(where, "degree must be >= 0");
  BlockyCochain phi(degree, blocks, a);
  if (!j.contains("entries")) return phi;
  if (!j.at("entries").is_array()) config::bad(where + ".entries", "expected an array");
  for (const auto &e : j.at("entries")) {
    config::allowKeys(e, where + ".entries", {"tuple", "value"});
    auto t = config::get<std::vector<std::size_t>>(e, "tuple", where + ".entries");
    auto v = config::get<std::vector<std::int64_t>>(e, "value", where + ".entries");
    if (t.size() != static_cast<std::size_t>(degree) + 1) config::bad(where, "tuple length must be degree + 1");
    for (auto b : t)
      if (b >= blocks) config::bad(where, "block index " + std::to_string(b) + " out of range");
    if (v.size() != a.rank()) config::bad(where, "value needs one residue per invariant factor");
    phi.set(t, a.element(v));
  }
  return phi;
}

inline Json cochainJson(const BlockyCochain &phi) {
  Json entries = Json::array();
  for (const auto &t : phi.support()) entries.push_back({{"tuple", t}, {"value", phi.at(t).r}});
  return {{"degree", phi.degree()}, {"entries", entries}};
}

/// {"kind": "identity" | "shift" | "permutation" | "ht" | "collapse", ...}
inline CoarseMap mapFromJson(const Json &j, const SpaceModel &x, const std::string &where) {
  std::string kind = config::get<std::string>(j, "kind", where);
  if (kind == "identity") {
    config::allowKeys(j, where, {"kind"});
    return CoarseMap::identity(x);
  }
  if (kind == "shift") {
    config::allowKeys(j, where, {"kind", "offset"});
    return CoarseMap::shift(x, config::get<std::vector<Coord>>(j, "offset", where));
  }
  if (kind == "permutation") {
    config::allowKeys(j, where, {"kind", "perm"});
    return CoarseMap::permutation(x, config::get<std::vector<int>>(j, "perm", where));
  }
  if (kind == "ht" || kind == "collapse") {
    config::allowKeys(j, where, {"kind", "t"});
    if (x.describe() != SpaceModel::quadrantI0(x.windowRadius()).describe())
      config::bad(where, kind + " needs the quadrant space");
    return kind == "ht" ? CoarseMap::ht(x.windowRadius(), config::get<Coord>(j, "t", where))
                        : CoarseMap::collapse(x.windowRadius());
  }
  config::bad(where, "unknown map kind '" + kind + "'");
}

} // namespace coarsecoh
