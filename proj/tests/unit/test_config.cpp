#include <doctest.h>

#include "helpers.hpp"
#include "mgn/config.hpp"
#include "mgn/error.hpp"

using namespace mgn;

namespace {

ErrorCode code_of(const Json& j) {
  try {
    config_from_json(j);
  } catch (const Error& e) {
    return e.code();
  }
  FAIL("accepted: " << j.dump());
  return ErrorCode::kInvalidArgument;
}

}  // namespace

TEST_CASE("defaults survive a JSON round trip") {
  const ExperimentConfig c;
  const Json j = config_to_json(c);
  const ExperimentConfig r = config_from_json(j);
  CHECK(config_to_json(r) == j);
  CHECK(r.surrogate.model == "gpr");
  CHECK(r.surrogate.gpr.restarts == 8);
  CHECK(r.bench.repetitions == 5);
  CHECK(r.contour.d == std::vector<double>{-0.2, 0.2});
}

TEST_CASE("partial configs fill in defaults") {
  const ExperimentConfig r = config_from_json(Json::parse(R"({"seed": 3, "lattice": {"rows": 5}})"));
  CHECK(r.seed == 3);
  CHECK(r.lattice.rows == 5);
  CHECK(r.lattice.cols == 8);
}

TEST_CASE("edited fields round trip") {
  ExperimentConfig c;
  c.seed = 99;
  c.lattice.xi = -0.2;
  c.lattice.inertia = 0.5;
  c.lattice.defects = DefectPattern::periodic_block(2, 2, {{0, 0, EdgeDirection::kVertical}});
  c.simulation.protocol = "uniaxial";
  c.simulation.params.strain = -0.05;
  c.simulation.damping = {0.1, 0.2};
  c.surrogate.mlp.preset = 3;
  c.surrogate.mlp.settings = mlp_preset(3);
  c.bench.sizes = {{4, 4}, {8, 2}};
  const ExperimentConfig r = config_from_json(config_to_json(c));
  CHECK(config_to_json(r) == config_to_json(c));
  CHECK(r.lattice.defects.kind == DefectPattern::Kind::kPeriodicBlock);
  CHECK(r.lattice.inertia == 0.5);
  CHECK(r.bench.sizes[1] == std::pair<int, int>{8, 2});
}

TEST_CASE("unknown keys, wrong types and bad values are rejected") {
  CHECK(code_of(Json::parse(R"({"sede": 1})")) == ErrorCode::kSchema);
  CHECK(code_of(Json::parse(R"({"lattice": {"rows": "eight"}})")) == ErrorCode::kSchema);
  CHECK(code_of(Json::parse(R"({"lattice": {"colour": 1}})")) == ErrorCode::kSchema);
  CHECK(code_of(Json::parse(R"({"threads": 0})")) != ErrorCode::kNoArrival);
  CHECK(code_of(Json::parse(R"({"bench": {"repetitions": 3}})")) != ErrorCode::kNoArrival);
  CHECK(code_of(Json::parse(R"({"contour": {"resolution": 2}})")) != ErrorCode::kNoArrival);
  CHECK(code_of(Json::parse(R"({"simulation": {"snapshot_stride": 0}})")) != ErrorCode::kNoArrival);
  CHECK(code_of(Json::parse("[1, 2]")) == ErrorCode::kSchema);
}

TEST_CASE("a run manifest is accepted as a config") {
  ExperimentConfig c;
  c.seed = 12;
  const Json manifest = {{"format", "mgn-manifest"}, {"version", 1}, {"config", config_to_json(c)}};
  CHECK(config_from_json(manifest).seed == 12);
}

TEST_CASE("config files") {
  testutil::TempDir dir("cfg");
  write_file_atomic(dir / "c.json", R"({"lattice": {"rows": 3, "cols": 2, "xi": -0.1}})");
  const ExperimentConfig c = load_config(dir / "c.json");
  const Lattice l = make_lattice(c.lattice);
  CHECK(l.node_count() == 6);
  CHECK(l.shape().xi == -0.1);
  write_file_atomic(dir / "bad.json", R"({"lattice": )");
  CHECK_THROWS_AS(load_config(dir / "bad.json"), Error);
}

TEST_CASE("defect JSON") {
  const auto p = DefectPattern::explicit_edges({{0, 1}, {2, 3}});
  const auto r = defects_from_json(defects_to_json(p));
  CHECK(r.kind == DefectPattern::Kind::kExplicit);
  CHECK(r.edges == p.edges);
  CHECK(defects_from_json(defects_to_json(DefectPattern::none())).kind == DefectPattern::Kind::kNone);
  CHECK_THROWS_AS(defects_from_json(Json::parse(R"({"kind": "random"})")), Error);
}
