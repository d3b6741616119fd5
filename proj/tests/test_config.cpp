#include "coarsecoh/config.hpp"

#include <catch_amalgamated.hpp>

#include <random>

using namespace coarsecoh;

namespace {

bool rejects(const std::string &text) {
  try {
    jobFromJson(Json::parse(text));
  } catch (const Error &e) {
    return e.kind() == ErrorKind::ConfigError || e.kind() == ErrorKind::ParseError;
  }
  return false;
}

} // namespace

TEST_CASE("job documents") {
  auto job = jobFromJson(Json::parse(R"j({
    "description": "d",
    "space": {"kind": "lattice", "dim": 2, "radius": 16},
    "subsets": {"upper": "halfspace(axis=1,sign=+)", "ur": "and(upper,halfspace(axis=0,sign=+))"},
    "partitions": {"p": ["ur", "not(ur)"]},
    "coefficients": [2, 4],
    "sweep": {"scales": [1, 3], "margin": 0.2}
  })j"));
  CHECK(job.description == "d");
  CHECK(job.requireSpace().windowRadius() == 16);
  CHECK(job.partition("p").size() == 2);
  CHECK(job.subset("ur").text() == "and(halfspace(axis=1,sign=+),halfspace(axis=0,sign=+))");
  CHECK(job.coefficients == FinAbGroup({2, 4}));
  CHECK(job.sweep.scales == std::vector<Dist>{1, 3});
  CHECK_THROWS_AS(job.partition("q"), Error);
}

TEST_CASE("malformed documents are configuration errors") {
  CHECK(rejects(R"j({"colour": 1})j"));
  CHECK(rejects(R"j({"space": {"kind": "lattice", "dim": 1, "radius": 8, "speed": 2}})j"));
  CHECK(rejects(R"j({"space": {"kind": "moebius"}})j"));
  CHECK(rejects(R"j({"space": {"kind": "lattice", "dim": "two", "radius": 8}})j"));
  CHECK(rejects(R"j({"subsets": {"a": "b"}})j"));
  CHECK(rejects(R"j({"subsets": {"a": "halfspace(axis=0)"}})j"));
  CHECK(rejects(R"j({"partitions": {"p": []}})j"));
  CHECK(rejects(R"j({"coefficients": []})j"));
  CHECK(rejects(R"j({"coefficients": [2, 3]})j"));
  CHECK(rejects(R"j({"sweep": {"margin": 1.5}})j"));
  CHECK(rejects(R"j({"sweep": {"scales": []}})j"));
  CHECK(rejects(R"j({"options": [1]})j"));
  CHECK_FALSE(rejects(R"j({})j"));
}

TEST_CASE("rational literals") {
  CHECK(config::rational(Json(3), "x") == 3);
  CHECK(config::rational(Json("2/4"), "x") == Rational(1, 2));
  CHECK_THROWS_AS(config::rational(Json("1/0"), "x"), Error);
  CHECK_THROWS_AS(config::rational(Json("half"), "x"), Error);
  CHECK_THROWS_AS(config::rational(Json(0.5), "x"), Error);
}

TEST_CASE("cochain round trip") {
  auto a = FinAbGroup({2, 4});
  std::mt19937_64 rng(5);
  for (int q = 0; q <= 2; ++q) {
    auto phi = BlockyCochain::random(q, 4, a, rng);
    auto back = cochainFromJson(cochainJson(phi), 4, a);
    CHECK(back.support() == phi.support());
    for (const auto &t : phi.support()) CHECK(back.at(t) == phi.at(t));
  }
  CHECK_THROWS_AS(cochainFromJson(Json::parse(R"j({"degree":1,"entries":[{"tuple":[0],"value":[1,1]}]})j"), 4, a), Error);
  CHECK_THROWS_AS(cochainFromJson(Json::parse(R"j({"degree":1,"entries":[{"tuple":[0,9],"value":[1,1]}]})j"), 4, a), Error);
  CHECK_THROWS_AS(cochainFromJson(Json::parse(R"j({"degree":1,"entries":[{"tuple":[0,1],"value":[1]}]})j"), 4, a), Error);
}

TEST_CASE("cohomology JSON keeps nonzero degrees") {
  CohomologyResult r;
  r.groups = {FinAbGroup::cyclic(3), FinAbGroup{}, FinAbGroup::cyclic(3)};
  CHECK(cohomologyJson(r).dump() == R"j({"0":[3],"2":[3]})j");
}

TEST_CASE("maps from JSON") {
  auto z = SpaceModel::lattice(1, 16);
  CHECK(mapFromJson(Json::parse(R"j({"kind":"shift","offset":[2]})j"), z, "m")(Point{1}) == Point{3});
  CHECK_THROWS_AS(mapFromJson(Json::parse(R"j({"kind":"collapse"})j"), z, "m"), Error);
  CHECK_THROWS_AS(mapFromJson(Json::parse(R"j({"kind":"shift","by":[2]})j"), z, "m"), Error);
}
