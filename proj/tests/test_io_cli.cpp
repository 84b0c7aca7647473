// Copyright 2026 The ensdyn Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.


#include <doctest.h>

#include <cmath>
#include <filesystem>
#include <fstream>
#include <sstream>

#include "ensdyn/cli.hpp"
#include "ensdyn/errors.hpp"
#include "ensdyn/io.hpp"
#include "ensdyn/random.hpp"
#include "reference_values.hpp"
#include "support.hpp"

using namespace ensdyn;
using namespace ensdyn::testing;

namespace {

struct Invocation {
  int code;
  std::string out;
  std::string err;
  json report() const { return json::parse(out); }
};

Invocation invoke(std::vector<std::string> args) {
  std::ostringstream out, err;
  const int code = cli::run(args, out, err);
  return {code, out.str(), err.str()};
}

json strip_time(json j) {
  j.erase("wall_time");
  return j;
}

}  // namespace

TEST_SUITE("io_cli") {

TEST_CASE("JSON round-trips") {
  Rng rng(1);
  const ComplexMatrix m = random_isometry(3, 3, rng) * Complex(1.0 / 3.0, 0.7);
  CHECK(max_abs(matrix_from_json(json::parse(to_json(m).dump())) - m) < 1e-15);

  const PureState psi = haar_state(4, rng);
  CHECK(max_abs(state_from_json(json::parse(to_json(psi).dump())).amplitudes() - psi.amplitudes()) < 1e-15);

  const DensityMatrix rho = random_density(3, 2, rng);
  CHECK(max_abs(density_from_json(json::parse(to_json(rho).dump())).matrix() - rho.matrix()) < 1e-15);

  const TensorStructure s{2, 3, 4};
  CHECK(structure_from_json(to_json(s)) == s);

  const Ensemble e = hjw_ensemble(rho, random_isometry(4, 2, rng));
  const auto c = compare_ensembles(ensemble_from_json(json::parse(to_json(e).dump())), e);
  CHECK(c.max_infidelity < 1e-15);
  CHECK(c.max_weight_error < 1e-15);

  const SteeringBasis b = SteeringBasis::from_columns(haar_unitary(3, rng));
  const SteeringBasis b2 = basis_from_json(json::parse(to_json(b).dump()));
  for (std::size_t i = 0; i < b.size(); ++i)
    CHECK(max_abs(b.vectors()[i].amplitudes() - b2.vectors()[i].amplitudes()) < 1e-15);
}

TEST_CASE("map JSON schema") {
  const DynamicalMap amp = map_from_json(load_json_argument(source_path("maps/amplitude_damping.json")));
  REQUIRE(amp.channel() != nullptr);
  CHECK(max_abs(amp.channel()->operators()[0] - amplitude_damping_channel(0.5).operators()[0]) < 1e-15);

  const DynamicalMap wb = map_from_json(load_json_argument(source_path("maps/weinberg.json")));
  REQUIRE(wb.nonlinear() != nullptr);
  const auto& w = std::get<Weinberg>(wb.nonlinear()->family());
  CHECK(max_abs(w.h - pauli_x()) == 0.0);
  CHECK(max_abs(w.v - pauli_z()) == 0.0);
  CHECK(w.steps == 1000);

  const DynamicalMap pp = map_from_json(json::parse(R"({"kind":"nonlinear","family":"purity_power","k":3})"));
  CHECK(std::get<PurityPower>(pp.nonlinear()->family()).k == 3);

  const DynamicalMap no_steps = map_from_json(json::parse(R"({"kind":"nonlinear","family":"weinberg","H":[[1,0],[0,-1]],"V":[[1,0],[0,-1]],"eps":0,"t":2.5})"));
  CHECK(std::get<Weinberg>(no_steps.nonlinear()->family()).steps == 2500);

  for (const DynamicalMap& m : {amp, wb, pp}) {
    const json j = to_json(m);
    CHECK(to_json(map_from_json(j)) == j);
  }
  CHECK(to_json(make_blackbox(amp)).at("kind") == "opaque");
}

TEST_CASE("decoding errors") {
  CHECK_THROWS_AS(complex_from_json(json::parse("[1, 2, 3]")), ValidationError);
  CHECK_THROWS_AS(complex_from_json(json::parse("\"x\"")), ValidationError);
  CHECK_THROWS_AS(matrix_from_json(json::parse("[[1, 0], [0]]")), ValidationError);
  CHECK_THROWS_AS(state_from_json(json::parse("[1, 1]")), ValidationError);
  CHECK_THROWS_AS(ensemble_from_json(json::parse(R"({"members": []})")), ValidationError);
  CHECK_THROWS_AS(map_from_json(json::parse(R"({"kind": "teleporter"})")), ValidationError);
  CHECK_THROWS_AS(map_from_json(json::parse(R"({"kind": "nonlinear", "family": "cubic"})")), ValidationError);
  CHECK_THROWS_AS(map_from_json(json::parse(R"({"kind": "channel", "kraus": [[[0.5, 0], [0, 0.5]]]})")), ValidationError);
  CHECK_THROWS_AS(load_json_argument("{not json"), ValidationError);
  CHECK_THROWS_AS(load_json_argument("/nonexistent/map.json"), ValidationError);
}

TEST_CASE("demo projection reports all verdicts true") {
  const auto r = invoke({"demo", "projection", "--dim", "2", "--seed", "7"});
  CHECK(r.code == 0);
  CHECK(r.err.empty());
  const json j = r.report();
  CHECK(j.at("schema_version") == 1);
  for (const auto& [name, v] : j.at("verdicts").items()) CHECK_MESSAGE(v.get<bool>(), name);
}

TEST_CASE("certify reports linear-consistent for the depolarizing channel") {
  const auto r = invoke({"certify", "--map", source_path("maps/depolarizing.json"), "--dim", "2", "--seed", "1"});
  CHECK(r.code == 0);
  CHECK(r.report().at("certificate").at("verdict") == "linear-consistent");
  CHECK(r.report().at("certificate").at("worst_pair").is_null());

  const auto pp = invoke({"certify", "--map", source_path("maps/purity_power.json"), "--trials", "5"});
  CHECK(pp.code == 0);
  CHECK(pp.report().at("certificate").at("verdict") == "nonlinear");
  CHECK(pp.report().at("certificate").at("max_deviation").get<double>() >= 0.15 - 1e-12);
}

TEST_CASE("witness is reproducible from the stored seed") {
  const std::vector<std::string> args = {"witness", "--map", source_path("maps/weinberg.json"), "--dim", "2",
                                         "--seed", "1", "--restarts", "16"};
  const auto a = invoke(args);
  const auto b = invoke(args);
  REQUIRE(a.code == 0);
  REQUIRE(b.code == 0);
  const json wa = a.report().at("witness"), wb = b.report().at("witness");
  CHECK(wa.at("deviation").get<double>() > reference::kPairDeviation);
  CHECK(std::abs(wa.at("deviation").get<double>() - wb.at("deviation").get<double>()) < 1e-12);
  CHECK(strip_time(a.report()) == strip_time(b.report()));

  // The report re-verifies from its own ensembles.
  const DynamicalMap map = map_from_json(a.report().at("inputs").at("map"));
  const DensityMatrix ea = evolve_ensemble(map, ensemble_from_json(wa.at("ensemble_a")));
  const DensityMatrix eb = evolve_ensemble(map, ensemble_from_json(wa.at("ensemble_b")));
  CHECK(std::abs(trace_distance(ea, eb) - wa.at("deviation").get<double>()) < 1e-12);
  CHECK(ensembles_equivalent(ensemble_from_json(wa.at("ensemble_a")), ensemble_from_json(wa.at("ensemble_b")), 1e-10));
}

TEST_CASE("witness with threads matches sequential") {
  const std::vector<std::string> base = {"witness", "--map", source_path("maps/weinberg.json"), "--restarts", "4",
                                         "--max-iters", "30", "--seed", "3"};
  auto threaded = base;
  threaded.insert(threaded.end(), {"--threads", "4"});
  const json a = invoke(base).report().at("witness"), b = invoke(threaded).report().at("witness");
  CHECK(a == b);
}

TEST_CASE("choi and steer subcommands") {
  const auto t = invoke({"choi", "--map", source_path("maps/amplitude_damping.json")});
  CHECK(t.code == 0);
  CHECK(t.report().at("cptp").at("cp") == true);
  CHECK(t.report().at("cptp").at("tp") == true);

  const auto s = invoke({"steer", "--ensemble", source_path("maps/mixture_pm.json"), "--seed", "2"});
  CHECK(s.code == 0);
  CHECK(s.report().at("verdicts").at("target_reproduced") == true);
  CHECK(s.report().at("deviations").at("max_infidelity").get<double>() < 1e-10);

  const auto inline_target =
      invoke({"steer", "--ensemble", R"({"members":[{"p":0.2,"state":[1,0,0]},{"p":0.3,"state":[0,1,0]},{"p":0.5,"state":[0,0.6,0.8]}]})"});
  CHECK(inline_target.code == 0);
  CHECK(inline_target.report().at("verdicts").at("target_reproduced") == true);
}

TEST_CASE("demo particle3d via the command line") {
  const auto r = invoke({"demo", "particle3d", "--dim", "2", "--seed", "5", "--map", source_path("maps/weinberg_yz_d2.json")});
  REQUIRE(r.code == 0);
  const json dev = r.report().at("deviations");
  CHECK(std::abs(dev.at("decomposition_vs_decomposition").get<double>() - reference::kParticle3dDecomposition) < 1e-9);
  CHECK(r.report().at("verdicts").at("linear_consistent") == false);
}

TEST_CASE("identical argv gives identical reports") {
  const std::vector<std::string> args = {"demo", "particle3d", "--dim", "2", "--seed", "12"};
  CHECK(strip_time(invoke(args).report()) == strip_time(invoke(args).report()));
}

TEST_CASE("exit codes") {
  const auto unknown = invoke({"teleport"});
  CHECK(unknown.code == cli::kValidationError);
  CHECK(unknown.out.empty());
  CHECK(unknown.err.find("Usage") != std::string::npos);

  const auto flag = invoke({"certify", "--map", source_path("maps/depolarizing.json"), "--frobnicate"});
  CHECK(flag.code == cli::kValidationError);
  CHECK(flag.err.find("Usage") != std::string::npos);

  CHECK(invoke({"certify"}).code == cli::kValidationError);  // --map is required
  CHECK(invoke({"certify", "--map", "{bad"}).code == cli::kValidationError);
  CHECK(invoke({"certify", "--map", source_path("maps/depolarizing.json"), "--dim", "3"}).code == cli::kValidationError);
  CHECK(invoke({"demo", "particle3d", "--dim", "1"}).code == cli::kValidationError);
  CHECK(invoke({"demo", "projection", "--tolerance", "-1"}).code == cli::kValidationError);

  const auto fault = invoke({"certify", "--map",
                             R"({"kind":"nonlinear","family":"weinberg","H":[[0,1],[1,0]],"V":[[1,0],[0,-1]],"eps":1,"t":1e300,"steps":1})"});
  CHECK(fault.code == cli::kMapFault);
  CHECK(fault.out.empty());
  CHECK(fault.err.find("map fault") != std::string::npos);
}

TEST_CASE("--output writes the report to a file") {
  const auto path = std::filesystem::temp_directory_path() / "ensdyn_output_test.json";
  std::filesystem::remove(path);
  const auto r = invoke({"demo", "projection", "--dim", "2", "--seed", "7", "--output", path.string()});
  CHECK(r.code == 0);
  CHECK(r.out.empty());
  std::ifstream in(path);
  const json j = json::parse(in);
  CHECK(j.at("scenario") == "projection");
  std::filesystem::remove(path);
}

}  // TEST_SUITE
