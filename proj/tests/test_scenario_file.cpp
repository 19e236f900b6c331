// Copyright 2026 The qmeasure Authors
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

#include <string>

#include <catch_amalgamated.hpp>
#include <json.hpp>

#include "qmeasure/scenario_file.hpp"
#include "test_support.hpp"

using namespace qmeasure;
using qmeasure::testing::distance;
using qmeasure::testing::source_path;
using Catch::Matchers::ContainsSubstring;
using Catch::Matchers::StartsWith;
using nlohmann::json;

namespace {

json minimal() {
    return json::parse(R"j({
      "schema": 1,
      "name": "minimal",
      "model": {
        "dims": [2, 2],
        "h_s": "pauli_z",
        "h_m": "pauli_z",
        "h_c": {"kron": ["pauli_z", "pauli_z"]}
      },
      "preparation": {"system_index": 0, "pointer_index": 1}
    })j");
}

Scenario parse(const json &doc) { return parse_scenario(doc.dump(2), "case.json"); }

std::string text_error_of(const std::string &text) {
    try {
        (void)parse_scenario(text, "case.json");
    } catch (const ScenarioFileError &e) {
        return e.what();
    }
    return "";
}

std::string error_of(const json &doc) { return text_error_of(doc.dump(2)); }

} // namespace

TEST_CASE("parsing the minimal document", "[scenario_file]") {
    const Scenario s = parse(minimal());
    CHECK(s.name == "minimal");
    const auto &m = std::get<BipartiteModel>(s.model);
    CHECK(m.dS() == 2);
    CHECK(m.dM() == 2);
    CHECK(distance(m.hC().matrix(), tensor(pauli_z(), pauli_z()).matrix()) == 0.0);
    const auto &p = std::get<IndexPreparation>(s.preparation);
    CHECK(p.system_index == 0);
    CHECK(p.pointer_index == 1);
    CHECK_FALSE(s.pointer.has_value());
    CHECK_FALSE(s.calibration.has_value());
    CHECK(s.seed == 0);
    CHECK(s.schedule.trials == Schedule{}.trials);
}

TEST_CASE("matrix grammar", "[scenario_file]") {
    json doc = minimal();
    SECTION("[re, im] pairs and bare reals") {
        doc["pointer"] = json::parse(R"j([[1, [0, -1]], [[0, 1], -1]])j");
        ComplexMatrix expected(2, 2);
        expected << 1.0, Complex(0.0, -1.0), Complex(0.0, 1.0), -1.0;
        CHECK(parse(doc).pointer->matrix() == expected);
    }
    SECTION("sum, scale, identity and zero") {
        doc["pointer"] =
            json::parse(R"j({"sum": [{"scale": [2.5, "pauli_x"]}, "identity(2)", "zero(2)"]})j");
        const ComplexMatrix expected = 2.5 * pauli_x().matrix() + ComplexMatrix::Identity(2, 2);
        CHECK(parse(doc).pointer->matrix() == expected);
    }
    SECTION("seeded random operators") {
        doc["pointer"] = json::parse(R"j({"random": {"dim": 2, "seed": 9}})j");
        Rng rng(9);
        CHECK(parse(doc).pointer->matrix() == random_hermitian(2, rng).matrix());
    }
    SECTION("pauli y") {
        doc["pointer"] = "pauli_y";
        CHECK(parse(doc).pointer->matrix() == pauli_y().matrix());
    }
}

TEST_CASE("generated models, mixtures, calibration and schedule", "[scenario_file]") {
    const Scenario s = parse(json::parse(R"j({
      "schema": 1,
      "name": "gen",
      "model": {"generator": {"family": "interpolated", "eta": 0.25, "seed": 31, "dims": [3, 2]}},
      "preparation": {"rho_s": [[0.5, 0, 0], [0, 0.5, 0], [0, 0, 0]], "mu_m": [[1, 0], [0, 0]]},
      "calibration": [[1, 2], [3, 4], [5, 6]],
      "schedule": {"tau": 2, "dtau": 0.25, "repeats": 3, "trials": 7, "t_max": 4,
                   "constancy_points": 11},
      "seed": 99
    })j"));
    const auto &g = std::get<GeneratedModel>(s.model);
    CHECK(g.dS == 3);
    CHECK(g.dM == 2);
    CHECK(g.family.kind == Family::interpolated);
    CHECK(g.family.eta == 0.25);
    CHECK(g.seed == 31);
    CHECK(std::holds_alternative<MixedPreparation>(s.preparation));
    CHECK(s.calibration == std::vector<std::vector<double>>{{1, 2}, {3, 4}, {5, 6}});
    CHECK(s.schedule.tau == 2.0);
    CHECK(s.schedule.dtau == 0.25);
    CHECK(s.schedule.repeats == 3);
    CHECK(s.schedule.trials == 7);
    CHECK(s.schedule.t_max == 4.0);
    CHECK(s.schedule.constancy_points == 11);
    CHECK(s.seed == 99);
}

TEST_CASE("render and parse round-trip exactly", "[scenario_file]") {
    SECTION("bundled files") {
        for (const char *name : {"qubit-qnd", "qubit-violating", "qutrit-system", "null"}) {
            const Scenario s = load_scenario(source_path(std::string("scenarios/") + name + ".json"));
            CHECK(parse_scenario(render_scenario(s)) == s);
            // Rendering is canonical: a second pass gives the same text.
            CHECK(render_scenario(parse_scenario(render_scenario(s))) == render_scenario(s));
        }
    }
    SECTION("random explicit models and mixed preparations") {
        Rng rng(4);
        for (std::uint64_t seed = 1; seed <= 10; ++seed) {
            Scenario s;
            s.name = "random-" + std::to_string(seed);
            s.model = random_model(2, 3, ModelFamily::violating(), seed);
            s.preparation = MixedPreparation{random_density(2, 2, rng), random_density(3, 1, rng)};
            s.pointer = random_hermitian(3, rng);
            s.calibration = std::vector<std::vector<double>>{{0.1, 0.2, 1e-300},
                                                             {-7.0, 1.0 / 3.0, 5e17}};
            s.schedule.tau = rng.uniform(0.1, 3.0);
            s.seed = derive_seed(seed, 3);
            CHECK(parse_scenario(render_scenario(s)) == s);
        }
    }
    SECTION("generated models") {
        Scenario s;
        s.name = "g";
        s.model = GeneratedModel{3, 3, ModelFamily::interpolated(0.1), 5};
        CHECK(parse_scenario(render_scenario(s)) == s);
        s.model = GeneratedModel{2, 2, ModelFamily::violating(), 5};
        CHECK(parse_scenario(render_scenario(s)) == s);
    }
}

TEST_CASE("syntax errors carry line and column", "[scenario_file]") {
    const std::string truncated = "{\n  \"schema\": 1,\n  \"name\": \"x\",\n  \"model\": {";
    CHECK_THAT(text_error_of(truncated), StartsWith("case.json:4:"));
    CHECK_THAT(text_error_of("{\n  \"schema\": 1,,\n}"), StartsWith("case.json:2:"));
    CHECK_THAT(text_error_of(""), StartsWith("case.json:1:"));
}

TEST_CASE("content errors carry the offending path", "[scenario_file]") {
    SECTION("schema") {
        json doc = minimal();
        doc["schema"] = 2;
        CHECK_THAT(error_of(doc), StartsWith("case.json:/schema:"));
        doc.erase("schema");
        CHECK_THAT(error_of(doc), ContainsSubstring("missing required key 'schema'"));
    }
    SECTION("non-Hermitian operator") {
        json doc = minimal();
        doc["model"]["h_s"] = json::parse("[[0, 1], [0, 0]]");
        CHECK_THAT(error_of(doc), StartsWith("case.json:/model/h_s:"));
    }
    SECTION("wrong operator dimension") {
        json doc = minimal();
        doc["model"]["h_c"] = "pauli_x";
        CHECK_THAT(error_of(doc), StartsWith("case.json:/model/h_c:"));
    }
    SECTION("bad matrix entries") {
        json doc = minimal();
        doc["model"]["h_m"] = json::parse(R"j([[1, "a"], [0, 1]])j");
        CHECK_THAT(error_of(doc), StartsWith("case.json:/model/h_m/0/1:"));
        doc["model"]["h_m"] = json::parse(R"j([[1, 0], [0]])j");
        CHECK_THAT(error_of(doc), StartsWith("case.json:/model/h_m"));
        doc["model"]["h_m"] = "identity(0)";
        CHECK_THAT(error_of(doc), StartsWith("case.json:/model/h_m:"));
        doc["model"]["h_m"] = "hadamard";
        CHECK_THAT(error_of(doc), ContainsSubstring("unknown matrix generator"));
    }
    SECTION("preparation indices") {
        json doc = minimal();
        doc["preparation"]["pointer_index"] = 2;
        CHECK_THAT(error_of(doc), StartsWith("case.json:/preparation/pointer_index:"));
        doc["preparation"]["pointer_index"] = -1;
        CHECK_THAT(error_of(doc), StartsWith("case.json:/preparation/pointer_index:"));
    }
    SECTION("mixed preparation must be a state") {
        json doc = minimal();
        doc["preparation"] = json::parse(R"j({"rho_s": "identity(2)", "mu_m": "identity(2)"})j");
        CHECK_THAT(error_of(doc), StartsWith("case.json:/preparation/rho_s:"));
    }
    SECTION("schedule values") {
        json doc = minimal();
        doc["schedule"] = json::parse(R"j({"tau": 0})j");
        CHECK_THAT(error_of(doc), StartsWith("case.json:/schedule/tau:"));
        doc["schedule"] = json::parse(R"j({"repeats": 1})j");
        CHECK_THAT(error_of(doc), StartsWith("case.json:/schedule/repeats:"));
        doc["schedule"] = json::parse(R"j({"trials": 0})j");
        CHECK_THAT(error_of(doc), StartsWith("case.json:/schedule/trials:"));
    }
    SECTION("calibration shape") {
        json doc = minimal();
        doc["calibration"] = json::parse("[[1, 2]]");
        CHECK_THAT(error_of(doc), StartsWith("case.json:/calibration:"));
        doc["calibration"] = json::parse("[[1, 2], [3]]");
        CHECK_THAT(error_of(doc), StartsWith("case.json:/calibration/1:"));
    }
    SECTION("generator fields") {
        json doc = minimal();
        doc["model"] = json::parse(R"j({"generator": {"family": "weird", "seed": 1, "dims": [2, 2]}})j");
        CHECK_THAT(error_of(doc), StartsWith("case.json:/model/generator/family:"));
        doc["model"] = json::parse(
            R"j({"generator": {"family": "interpolated", "eta": 2, "seed": 1, "dims": [2, 2]}})j");
        CHECK_THAT(error_of(doc), StartsWith("case.json:/model/generator/eta:"));
        doc["model"] = json::parse(R"j({"generator": {"family": "qnd", "seed": 1, "dims": [1, 2]}})j");
        CHECK_THAT(error_of(doc), StartsWith("case.json:/model/generator/dims:"));
    }
    SECTION("pointer dimension") {
        json doc = minimal();
        doc["pointer"] = "identity(3)";
        CHECK_THAT(error_of(doc), StartsWith("case.json:/pointer:"));
    }
}

TEST_CASE("loading from disk", "[scenario_file]") {
    const Scenario s = load_scenario(source_path("scenarios/qutrit-system.json"));
    CHECK(s.name == "qutrit-system");
    try {
        (void)load_scenario(source_path("scenarios/does-not-exist.json"));
        FAIL("expected a file error");
    } catch (const ScenarioFileError &e) {
        CHECK_THAT(e.what(), ContainsSubstring("cannot open"));
    }
}
