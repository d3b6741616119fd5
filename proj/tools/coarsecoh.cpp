// coarsecoh: batch front end. Each subcommand reads a JSON job document and
// writes a JSON, text or DOT report.
//
// Exit codes: 0 success, 1 verdict failure, 2 configuration error,
// 3 inconclusive verdict.

#include "coarsecoh/acceptance.hpp"
#include "coarsecoh/cech.hpp"
#include "coarsecoh/cochain.hpp"
#include "coarsecoh/config.hpp"
#include "coarsecoh/ends.hpp"
#include "coarsecoh/higson.hpp"
#include "coarsecoh/homotopy.hpp"
#include "coarsecoh/mv.hpp"

#include <CLI11.hpp>

#include <fstream>
#include <iostream>
#include <random>
#include <sstream>

using namespace coarsecoh;

namespace {

enum Exit { kOk = 0, kVerdictFailed = 1, kConfigError = 2, kInconclusive = 3 };

struct Globals {
  std::string configPath;
  std::uint64_t seed = 1;
  unsigned jobs = 1;
  std::string out;
  std::string format = "json";
};

struct Outcome {
  Json json = Json::object();
  std::string text;
  std::string dot;
  int exit = kOk;
};

int exitFor(Tri t) { return t == Tri::Yes ? kOk : t == Tri::No ? kVerdictFailed : kInconclusive; }

std::string verdictText(BoundednessCertificate::Verdict v) { return std::string(toString(v)); }

Json scaleRowsJson(const std::vector<ScaleRow> &rows) {
  Json a = Json::array();
  for (const auto &r : rows) a.push_back({{"scale", r.scale}, {"bound", r.cert.bound}, {"verdict", verdictText(r.cert.verdict)}});
  return a;
}

Json complexJson(const SimplicialComplex &k) {
  Json dims = Json::array();
  for (const auto &level : k.byDim) dims.push_back(level);
  return dims;
}

std::string groupsText(const CohomologyResult &r) {
  std::ostringstream os;
  for (std::size_t q = 0; q < r.groups.size(); ++q) os << "H^" << q << " = " << detail::groupText(r.groups[q]) << "\n";
  return os.str();
}

std::vector<std::string> blockLabelsText(const std::vector<SubsetExpr> &blocks) {
  std::vector<std::string> out;
  for (const auto &b : blocks) out.push_back(b.text());
  return out;
}

// ---------------------------------------------------------------------------

Outcome cohomology(const JobConfig &job) {
  const Json &o = job.options;
  config::allowKeys(o, "options", {"route", "partition", "cover", "subset", "maxDegree", "dimCap"});
  std::string route = config::get<std::string>(o, "route", "options", "partition");
  CoarseContext ctx(job.requireSpace(), job.sweep);
  Outcome out;
  out.json["command"] = "cohomology";
  out.json["route"] = route;
  out.json["coefficients"] = groupJson(job.coefficients);
  if (route == "partition") {
    const auto &blocks = job.partition(config::get<std::string>(o, "partition", "options"));
    auto pc = coarseCohomologyViaPartition(blocks, ctx, job.coefficients, config::get<int>(o, "dimCap", "options", -1));
    out.json["groups"] = cohomologyJson(pc.result);
    out.json["degrees"] = pc.result.groups.size();
    out.json["closeness"] = {{"simplices", complexJson(pc.closeness.complex)},
                             {"boundedBlocks", pc.closeness.boundedBlocks},
                             {"inconclusive", pc.closeness.inconclusive},
                             {"complete", pc.closeness.complete()}};
    out.text = groupsText(pc.result);
    out.dot = toDot(pc.closeness.complex, blockLabelsText(blocks), "closeness");
    if (!pc.closeness.inconclusive.empty()) out.exit = kInconclusive;
  } else if (route == "cech") {
    const auto &parts = job.cover(config::get<std::string>(o, "cover", "options"));
    int top = config::get<int>(o, "maxDegree", "options", static_cast<int>(parts.size()) - 1);
    auto cc = cechCohomology(parts, ctx, job.coefficients, top);
    out.json["groups"] = cohomologyJson(cc.result);
    out.json["degrees"] = cc.result.groups.size();
    out.json["symbolic"] = cc.cover.symbolic;
    out.json["stable"] = cc.cover.stable;
    out.text = groupsText(cc.result);
    out.dot = toDot(cc.cover.nerve(), blockLabelsText(parts), "nerve");
    if (!cc.cover.stable) out.exit = kInconclusive;
  } else if (route == "ends") {
    auto rep = h0(job.subset(config::get<std::string>(o, "subset", "options", "all")), ctx, job.coefficients);
    out.json["ends"] = std::string(toString(rep.ends.verdict));
    if (rep.cohomology) {
      out.json["groups"] = cohomologyJson(*rep.cohomology);
      out.json["infiniteDegreeZero"] = rep.cohomology->infiniteDegreeZero;
      out.text = rep.cohomology->infiniteDegreeZero ? "H^0 = infinite direct sum\n" : groupsText(*rep.cohomology);
    } else {
      out.text = "H^0 inconclusive\n";
      out.exit = kInconclusive;
    }
  } else {
    config::bad("options.route", "expected partition, cech or ends");
  }
  return out;
}

Outcome coverCheck(const JobConfig &job) {
  const Json &o = job.options;
  config::allowKeys(o, "options", {"cover", "subset"});
  CoarseContext ctx(job.requireSpace(), job.sweep);
  const auto &parts = job.cover(config::get<std::string>(o, "cover", "options"));
  auto u = job.subset(config::get<std::string>(o, "subset", "options", "all"));
  auto v = isCoarseCover(u, parts, ctx);
  Outcome out;
  out.json = {{"command", "cover-check"}, {"isCover", std::string(toString(v.isCover))}, {"exact", v.exact},
              {"rows", scaleRowsJson(v.rows)}};
  out.text = "coarse cover: " + std::string(toString(v.isCover)) + "\n";
  out.exit = exitFor(v.isCover);
  return out;
}

Outcome verifyCocycle(const JobConfig &job) {
  const Json &o = job.options;
  config::allowKeys(o, "options", {"partition", "cochain", "cap"});
  CoarseContext ctx(job.requireSpace(), job.sweep);
  Partition p{job.partition(config::get<std::string>(o, "partition", "options"))};
  if (!o.contains("cochain")) config::bad("options", "missing key 'cochain'");
  auto phi = cochainFromJson(o.at("cochain"), p.size(), job.coefficients);
  auto rep = certifyNonCoboundary(phi, p, ctx, config::get<std::uint64_t>(o, "cap", "options", 10'000'000));
  Outcome out;
  out.json = {{"command", "verify-cocycle"},
              {"verdict", std::string(toString(rep.verdict))},
              {"cocycle", std::string(toString(rep.cocycle.cocontrolled))},
              {"dphiSupport", rep.cocycle.supportSize},
              {"checkedTuples", rep.checkedTuples},
              {"inconclusiveTuples", rep.inconclusiveTuples},
              {"candidates", rep.candidates},
              {"eliminated", rep.eliminated}};
  if (rep.witness) out.json["witness"] = cochainJson(*rep.witness);
  std::ostringstream os;
  os << toString(rep.verdict) << ": " << rep.eliminated << " of " << rep.candidates << " candidates eliminated\n";
  out.text = os.str();
  using V = NonCoboundaryReport::Verdict;
  out.exit = rep.verdict == V::NonCoboundary ? kOk : rep.verdict == V::Inconclusive ? kInconclusive : kVerdictFailed;
  return out;
}

Outcome endsCommand(const JobConfig &job) {
  const Json &o = job.options;
  config::allowKeys(o, "options", {"subset", "radii"});
  CoarseContext ctx(job.requireSpace(), job.sweep);
  auto rep = countEnds(job.subset(config::get<std::string>(o, "subset", "options", "all")), ctx,
                       config::get<std::vector<Dist>>(o, "radii", "options", {}));
  Outcome out;
  std::string verdict = rep.verdict == EndsReport::Verdict::Finite    ? "Finite(" + std::to_string(rep.ends) + ")"
                        : rep.verdict == EndsReport::Verdict::Growing ? "Growing"
                                                                      : "Inconclusive";
  out.json = {{"command", "ends"}, {"verdict", verdict}, {"scales", rep.scales}, {"radii", rep.radii}, {"table", rep.table}};
  out.text = verdict + "\n";
  if (rep.verdict == EndsReport::Verdict::Inconclusive) out.exit = kInconclusive;
  return out;
}

Outcome mvCommand(const JobConfig &job) {
  const Json &o = job.options;
  config::allowKeys(o, "options", {"u1", "u2", "partition", "dimCap"});
  CoarseContext ctx(job.requireSpace(), job.sweep);
  auto rep = mayerVietoris(job.subset(config::get<std::string>(o, "u1", "options")),
                           job.subset(config::get<std::string>(o, "u2", "options")),
                           job.partition(config::get<std::string>(o, "partition", "options")), ctx, job.coefficients,
                           config::get<int>(o, "dimCap", "options", -1));
  Json rows = Json::array();
  std::ostringstream os;
  for (const auto &r : rep.rows) {
    rows.push_back({{"degree", r.degree},
                    {"X", groupJson(r.hx)},
                    {"U1", groupJson(r.h1)},
                    {"U2", groupJson(r.h2)},
                    {"U12", groupJson(r.h12)},
                    {"imageAlpha", r.imageAlpha.get_str()},
                    {"imageBeta", r.imageBeta.get_str()},
                    {"kernelBeta", r.kernelBeta.get_str()},
                    {"connecting", r.connecting.get_str()},
                    {"exactAtMiddle", r.exactAtMiddle},
                    {"balanced", r.balanced}});
    os << "q=" << r.degree << "  X " << detail::groupText(r.hx) << "  U1 " << detail::groupText(r.h1) << "  U2 "
       << detail::groupText(r.h2) << "  U12 " << detail::groupText(r.h12) << "  |im d| " << r.connecting << "\n";
  }

  Outcome res;
  res.json = {{"command", "mv"},
              {"blocksU1", rep.in1},
              {"blocksU2", rep.in2},
              {"blocksU12", rep.in12},
              {"betaAlphaZero", rep.betaAlphaZero},
              {"chainMaps", rep.commutes},
              {"alphaInjective", rep.alphaInjective},
              {"betaSurjective", rep.betaSurjective},
              {"exact", rep.exact()},
              {"rows", rows}};
  res.text = os.str() + "exact: " + (rep.exact() ? "yes" : "no") + "\n";
  res.exit = rep.exact() ? kOk : kVerdictFailed;
  return res;
}

Outcome homotopyCheck(const JobConfig &job, const Globals &g) {
  const Json &o = job.options;
  config::allowKeys(o, "options", {"a", "b", "partition", "degrees", "samples", "prism", "collapse"});
  const SpaceModel &x = job.requireSpace();
  CoarseContext ctx(x, job.sweep);
  Partition p{job.partition(config::get<std::string>(o, "partition", "options"))};
  auto degrees = config::get<std::vector<int>>(o, "degrees", "options", {1, 2, 3});
  int samples = config::get<int>(o, "samples", "options", 10);
  std::mt19937_64 rng(g.seed);
  Outcome out;
  out.json["command"] = "homotopy-check";
  bool ok = true;
  std::ostringstream os;

  if (o.contains("a") || o.contains("b")) {
    if (!o.contains("a") || !o.contains("b")) config::bad("options", "maps 'a' and 'b' come together");
    CoarseMap a = mapFromJson(o.at("a"), x, "options.a"), b = mapFromJson(o.at("b"), x, "options.b");
    // An identity next to a shift becomes the inclusion into the larger window.
    auto widen = [](const CoarseMap &id, const CoarseMap &other) {
      return CoarseMap("incl", id.domain(), other.codomain(), [](const Point &z) { return z; });
    };
    if (!(a.codomain() == b.codomain())) {
      if (a.name() == "id") a = widen(a, b);
      else if (b.name() == "id") b = widen(b, a);
    }
    int held = 0, total = 0;
    Json close;
    for (int i = 0; i < samples; ++i)
      for (int q : degrees) {
        auto phi = BlockyCochain::random(q, p.size(), job.coefficients, rng);
        auto rep = chainHomotopy(a, b, p, phi, job.sweep);
        close = {{"inner", rep.closeness.closeInner}, {"full", rep.closeness.closeFull}};
        held += rep.holds;
        ++total;
      }
    ok = ok && held == total;
    out.json["chainHomotopy"] = {{"maps", a.name() + " ~ " + b.name()}, {"closeness", close}, {"held", held}, {"total", total}};
    os << "chain homotopy " << a.name() << " ~ " << b.name() << ": " << held << "/" << total << "\n";
  }
  if (o.contains("prism")) {
    auto ts = config::get<std::vector<Coord>>(o, "prism", "options");
    if (ts.size() != 3) config::bad("options.prism", "expected three parameters t0, t1, t2");
    Json m = {{"kind", "ht"}};
    std::vector<CoarseMap> hs;
    for (Coord t : ts) {
      m["t"] = t;
      hs.push_back(mapFromJson(m, x, "options.prism"));
    }
    int held = 0, total = 0;
    std::size_t tuples = 0;
    for (int i = 0; i < samples; ++i)
      for (int q : degrees) {
        if (q < 1 || q > 2) continue;
        auto phi = BlockyCochain::random(q, p.size(), job.coefficients, rng);
        auto rep = prismOperator(hs[0], hs[1], hs[2], p, phi, ctx, ctx);
        held += rep.tableIdentity && rep.windowIdentity;
        tuples += rep.windowTuples;
        ++total;
      }
    ok = ok && held == total;
    out.json["prism"] = {{"t", ts}, {"held", held}, {"total", total}, {"windowTuples", tuples}};
    os << "prism identity: " << held << "/" << total << " (" << tuples << " window tuples)\n";
  }
  if (config::get<bool>(o, "collapse", "options", false)) {
    int held = 0, total = 0;
    for (int i = 0; i < samples; ++i)
      for (int q : degrees) {
        if (q < 1 || q > 2) continue;
        auto phi = BlockyCochain::random(q, p.size(), job.coefficients, rng);
        auto rep = verifyCollapseInvariance(phi, p, ctx);
        held += rep.tableIdentity && rep.windowIdentity;
        ++total;
      }
    ok = ok && held == total;
    out.json["collapse"] = {{"held", held}, {"total", total}};
    os << "collapse invariance: " << held << "/" << total << "\n";
  }
  out.json["holds"] = ok;
  out.text = os.str();
  out.exit = ok ? kOk : kVerdictFailed;
  return out;
}

RealFunctionWindow functionFromOptions(const Json &o) {
  Coord w = config::get<Coord>(o, "radius", "options", 256);
  if (o.contains("values")) {
    std::vector<Coord> domain;
    std::vector<Rational> values;
    for (const auto &e : o.at("values")) {
      config::allowKeys(e, "options.values", {"point", "value"});
      domain.push_back(config::get<Coord>(e, "point", "options.values"));
      values.push_back(config::rational(e.at("value"), "options.values.value"));
    }
    return RealFunctionWindow::tabulated("values", w, std::move(domain), std::move(values));
  }
  std::string name = config::get<std::string>(o, "function", "options");
  if (name == "harmonic") return RealFunctionWindow::harmonic(w);
  if (name == "constant") return RealFunctionWindow::constant(w, 1);
  if (name == "indicator") return RealFunctionWindow::indicator(w);
  if (name == "parity") return RealFunctionWindow::parity(w);
  config::bad("options.function", "expected harmonic, constant, indicator or parity");
}

Json rationalJson(const Rational &q) {
  // Exact text when short, otherwise a fixed-precision decimal.
  std::string s = q.get_str();
  if (s.size() <= 40) return s;
  std::ostringstream os;
  os.precision(12);
  os << std::fixed << q.get_d();
  return "~" + os.str();
}

Outcome higsonCheck(const JobConfig &job) {
  const Json &o = job.options;
  config::allowKeys(o, "options",
                    {"function", "values", "radius", "epsilons", "scales", "freudenthal", "interpolate"});
  auto f = functionFromOptions(o);
  std::vector<Rational> eps;
  for (const auto &e : o.contains("epsilons") ? o.at("epsilons") : Json::array({"1/2", "1/4", "1/8"}))
    eps.push_back(config::rational(e, "options.epsilons"));
  auto scales = config::get<std::vector<Dist>>(o, "scales", "options", {1, 2, 4});
  Outcome out;
  std::ostringstream os;
  auto variationRows = [](const std::vector<VariationRow> &rows) {
    Json a = Json::array();
    for (const auto &r : rows) {
      Json row = {{"epsilon", r.epsilon.get_str()}, {"scale", r.scale}, {"K", r.k}, {"verdict", std::string(toString(r.verdict))}};
      if (r.witness) row["witness"] = {r.witness->first, r.witness->second};
      a.push_back(row);
    }
    return a;
  };
  auto higson = checkHigson(f, eps, scales, job.sweep.margin);
  out.json = {{"command", "higson-check"},
              {"function", f.name},
              {"radius", f.radius},
              {"range", rationalJson(f.range())},
              {"higson", std::string(toString(higson.verdict))},
              {"rows", variationRows(higson.rows)}};
  os << f.name << " on [-" << f.radius << "," << f.radius << "]: Higson " << toString(higson.verdict) << "\n";
  VariationVerdict worst = higson.verdict;
  if (config::get<bool>(o, "freudenthal", "options", false)) {
    auto fr = checkFreudenthal(f, scales, job.sweep.margin);
    Json blocks = Json::array();
    for (const auto &b : fr.blocks)
      blocks.push_back({{"value", b.value.get_str()}, {"size", b.points.size()}, {"min", b.points.front()}, {"max", b.points.back()}});
    out.json["freudenthal"] = {{"verdict", std::string(toString(fr.verdict))}, {"finiteValues", fr.finiteValues},
                               {"rows", variationRows(fr.rows)}, {"blocks", fr.finiteValues ? blocks : Json::array()}};
    os << "Freudenthal " << toString(fr.verdict) << "\n";
  }
  if (config::get<bool>(o, "interpolate", "options", false)) {
    auto ext = interpolateExtension(f);
    out.json["interpolation"] = {{"exactOnU", ext.exactOnU},
                                 {"clamped", ext.clamped.size()},
                                 {"gapBound", ext.gapBound.get_str()},
                                 {"maxUnitStep", ext.maxUnitStep.get_str()},
                                 {"variationHolds", ext.variationHolds}};
    os << "interpolation: exact " << (ext.exactOnU ? "yes" : "no") << ", variation bound "
       << (ext.variationHolds ? "holds" : "fails") << "\n";
    if (!(ext.exactOnU && ext.variationHolds)) worst = VariationVerdict::Fail;
  }
  out.text = os.str();
  out.exit = worst == VariationVerdict::Pass ? kOk : worst == VariationVerdict::Fail ? kVerdictFailed : kInconclusive;
  return out;
}

Outcome nerve(const JobConfig &job) {
  const Json &o = job.options;
  config::allowKeys(o, "options", {"cover", "partition"});
  CoarseContext ctx(job.requireSpace(), job.sweep);
  Outcome out;
  out.json["command"] = "nerve";
  if (o.contains("cover")) {
    const auto &parts = job.cover(config::get<std::string>(o, "cover", "options"));
    auto cc = buildCechCover(parts, ctx, static_cast<int>(parts.size()) - 1);
    auto k = cc.nerve();
    out.json["kind"] = "cech-nerve";
    out.json["simplices"] = complexJson(k);
    out.dot = toDot(k, blockLabelsText(parts), "nerve");
  } else if (o.contains("partition")) {
    const auto &blocks = job.partition(config::get<std::string>(o, "partition", "options"));
    auto k = buildClosenessComplex(blocks, ctx);
    out.json["kind"] = "closeness";
    out.json["simplices"] = complexJson(k.complex);
    out.dot = toDot(k.complex, blockLabelsText(blocks), "closeness");
    if (!k.inconclusive.empty()) out.exit = kInconclusive;
  } else {
    config::bad("options", "nerve needs a 'cover' or a 'partition'");
  }
  out.text = out.dot;
  return out;
}

Outcome reproducePaper(const Globals &g) {
  Outcome out;
  Json rows = Json::array();
  bool all = true;
  std::ostringstream os;
  for (const auto &r : runAcceptance(g.seed, g.jobs)) {
    rows.push_back({{"criterion", r.id}, {"statement", r.title}, {"pass", r.pass}, {"detail", r.detail}});
    os << formatResult(r) << "\n";
    all = all && r.pass;
  }
  out.json = {{"command", "reproduce-paper"}, {"seed", g.seed}, {"criteria", rows}, {"pass", all}};
  out.text = os.str();
  out.exit = all ? kOk : kVerdictFailed;
  return out;
}

void emit(const Outcome &o, const Globals &g, const std::optional<std::string> &configOut) {
  std::string body;
  if (g.format == "json") body = o.json.dump(2) + "\n";
  else if (g.format == "text") body = o.text;
  else if (g.format == "dot") {
    if (o.dot.empty()) fail(ErrorKind::ConfigError, "this command has no DOT output");
    body = o.dot;
  }
  std::string path = !g.out.empty() ? g.out : configOut.value_or("");
  if (path.empty()) {
    std::cout << body;
    return;
  }
  std::ofstream f(path);
  if (!f) fail(ErrorKind::ConfigError, "cannot write " + path);
  f << body;
}

int exitForError(ErrorKind k) {
  switch (k) {
  case ErrorKind::CoverNotVerified:
  case ErrorKind::MapsNotClose:
  case ErrorKind::MapNotEvaluable:
  case ErrorKind::NotAComplex: return kVerdictFailed;
  default: return kConfigError;
  }
}

} // namespace

int main(int argc, char **argv) {
  CLI::App app{"coarse cohomology of windowed metric spaces"};
  app.require_subcommand(1);
  Globals g;
  app.add_option("--seed", g.seed, "seed for randomized checks")->capture_default_str();
  app.add_option("--jobs", g.jobs, "worker threads")->check(CLI::PositiveNumber)->capture_default_str();
  app.add_option("--out", g.out, "write the report here instead of stdout");
  app.add_option("--format", g.format, "report format")->check(CLI::IsMember({"json", "text", "dot"}))->capture_default_str();

  const std::vector<std::pair<std::string, std::string>> commands{
      {"cohomology", "coarse cohomology via a partition, a Cech cover or the ends"},
      {"cover-check", "check that a family is a coarse cover"},
      {"verify-cocycle", "certify that a blocky 1-cochain is a cocycle but not a coboundary"},
      {"ends", "count the ends of a subset"},
      {"mv", "Mayer-Vietoris sequence of a two-set cover"},
      {"homotopy-check", "chain homotopy, prism and collapse identities"},
      {"higson-check", "Higson and Freudenthal variation of a function on Z"},
      {"nerve", "Cech nerve or closeness complex"},
      {"reproduce-paper", "run the acceptance suite"}};
  std::map<std::string, CLI::App *> subs;
  for (const auto &[name, help] : commands) {
    auto *sub = app.add_subcommand(name, help);
    sub->fallthrough();
    if (name != "reproduce-paper") sub->add_option("--config", g.configPath, "job document (JSON)")->required();
    subs[name] = sub;
  }
  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError &e) {
    int code = app.exit(e);
    return code == 0 ? kOk : kConfigError;
  }

  try {
    std::string name;
    for (const auto &[n, sub] : subs)
      if (sub->parsed()) name = n;
    if (name == "reproduce-paper") {
      auto o = reproducePaper(g);
      emit(o, g, std::nullopt);
      return o.exit;
    }
    JobConfig job = loadJob(g.configPath);
    job.sweep.jobs = g.jobs;
    Outcome o;
    if (name == "cohomology") o = cohomology(job);
    else if (name == "cover-check") o = coverCheck(job);
    else if (name == "verify-cocycle") o = verifyCocycle(job);
    else if (name == "ends") o = endsCommand(job);
    else if (name == "mv") o = mvCommand(job);
    else if (name == "homotopy-check") o = homotopyCheck(job, g);
    else if (name == "higson-check") o = higsonCheck(job);
    else if (name == "nerve") o = nerve(job);
    emit(o, g, job.out);
    return o.exit;
  } catch (const Error &e) {
    std::cerr << "error: " << e.what() << "\n";
    return exitForError(e.kind());
  } catch (const std::exception &e) {
    std::cerr << "error: " << e.what() << "\n";
    return kConfigError;
  }
}
