#include <doctest.h>

#include <fstream>
#include <random>
#include <sstream>

#include "support.hpp"
#include "tropcert/json_io.hpp"

using namespace tropcert;
using fixtures::iv;
using fixtures::pt;

namespace {

std::string slurp(const std::string& name) {
  std::ifstream in(std::string(TROPCERT_DATA_DIR) + "/" + name);
  std::ostringstream s;
  s << in.rdbuf();
  return s.str();
}

std::string dump(const TropicalCurve& c) { return canonical_dump(to_json(c)); }

InputError expect_input_error(std::string_view text) {
  try {
    parse_curve(text);
  } catch (const InputError& e) {
    return e;
  }
  FAIL("no InputError raised");
  return InputError(0, 0, "");
}

}  // namespace

TEST_SUITE("json") {
  TEST_CASE("curve round trip") {
    std::mt19937_64 rng(6);
    auto curves = fixtures::valid_fixtures();
    curves.emplace_back("shifted", fixtures::transform(fixtures::hexagon(), fixtures::random_unimodular(rng, 2),
                                                       pt({1, 2})));
    for (const auto& [name, c] : curves) {
      CAPTURE(name);
      const auto back = parse_curve(pretty_dump(to_json(c)));
      CHECK(dump(back) == dump(c));
      CHECK(curve_hash(back) == curve_hash(c));
    }
    const TropicalCurve frac(2, {pt({0, 0}), {Rat(1, 3), Rat(-5, 7)}}, {{0, 1, 1}},
                             {{0, iv({-1, 0}), 1}, {0, iv({0, 1}), 1}, {1, iv({1, 0}), 1}, {1, iv({0, -1}), 1}});
    const auto j = to_json(frac);
    CHECK(j["vertices"][1][0] == "1/3");
    CHECK(j["vertices"][1][1] == "-5/7");
    CHECK(j["schema"] == 1);
    CHECK(dump(parse_curve(j.dump())) == dump(frac));
  }

  TEST_CASE("big integers survive") {
    const std::string big = "123456789012345678901234567890";
    const std::string text = R"({"schema":1,"rank":2,"vertices":[["0","0"]],"edges":[],"rays":[)"
                             R"({"base":0,"direction":[")" + big + R"(",1]},{"base":0,"direction":[-1,0]}]})";
    const auto c = parse_curve(text);
    CHECK(c.rays()[0].direction[0] == Int(big));
    CHECK(to_json(c)["rays"][0]["direction"][0] == big);
    CHECK(dump(parse_curve(dump(c))) == dump(c));
  }

  TEST_CASE("hash is canonical") {
    const std::string a = R"({"schema":1,"rank":2,"vertices":[["0","1/2"]],"edges":[],)"
                          R"("rays":[{"base":0,"direction":[1,0]},{"base":0,"direction":[0,1]},)"
                          R"({"base":0,"direction":[-1,-1]}]})";
    const std::string b = R"({ "rays" : [ {"direction":[1,0], "base":0}, {"direction":[0,1],"base":0},)"
                          "\n"
                          R"( {"base":0,"direction":[-1,-1],"weight":1}], "edges":[], "vertices":[["0","2/4"]], "rank":2, "schema":1 })";
    CHECK(curve_hash(parse_curve(a)) == curve_hash(parse_curve(b)));
    CHECK(curve_hash(parse_curve(a)).size() == 64);
    CHECK(sha256_hex("abc") == "ba7816bf8f01cfea414140de5dae2223b00361a396177a9cb410ff61f20015ad");
    CHECK(curve_hash(fixtures::hexagon()) != curve_hash(fixtures::hexagon3d()));
  }

  TEST_CASE("diagnostics carry line and column") {
    const auto bad = expect_input_error(slurp("malformed.json"));
    CHECK(bad.line() == 6);
    CHECK(bad.message().find("/rays/1/direction") != std::string::npos);
    CHECK(bad.message().find("primitive") != std::string::npos);

    const auto syntax = expect_input_error("{\n  \"schema\": 1,\n  \"rank\": 2,,\n}");
    CHECK(syntax.line() == 3);
    CHECK(syntax.column() >= 12);

    const auto missing = expect_input_error("{\"schema\": 1, \"vertices\": [[\"0\", \"0\"]]}");
    CHECK(missing.line() == 1);
    CHECK(missing.message().find("rank") != std::string::npos);

    const auto schema = expect_input_error(R"({"schema": 2, "rank": 1, "vertices": [], "edges": [], "rays": []})");
    CHECK(schema.message().find("schema") != std::string::npos);

    const auto rat = expect_input_error(R"({"schema":1,"rank":1,"vertices":[["1/0"]],"edges":[],"rays":[]})");
    CHECK(rat.column() > 30);

    const auto range = expect_input_error(R"({"schema":1,"rank":1,"vertices":[["0"]],"edges":[{"u":0,"v":3}],"rays":[]})");
    CHECK(range.message().find("/edges/0") != std::string::npos);
  }

  TEST_CASE("metric graph parsing") {
    const auto g = parse_metric_graph(slurp("k4_graph.json"));
    CHECK(g.num_vertices == 4);
    CHECK(g.edges.size() == 6);
    CHECK(ambient_dimension_for_graph(g) == 3);
    CHECK(canonical_dump(to_json(parse_metric_graph(canonical_dump(to_json(g))))) == canonical_dump(to_json(g)));
    CHECK_THROWS_AS(parse_metric_graph(R"({"schema":1,"num_vertices":2,"edges":[{"u":0,"v":1,"length":"-1"}],"legs":[]})"),
                    InputError);
  }

  TEST_CASE("plot sidecar reproduces the exact curve") {
    std::mt19937_64 rng(2);
    auto curves = fixtures::valid_fixtures();
    curves.emplace_back("random", fixtures::sample_planar_curve(rng, 3, true));
    for (const auto& [name, c] : curves) {
      CAPTURE(name);
      const auto p = plot_json(c);
      CHECK(p["segments"].size() == c.edges().size());
      CHECK(p["rays"].size() == c.rays().size());
      CHECK(dump(parse_curve(pretty_dump(p["exact"]))) == dump(c));
    }
    const auto third = plot_json(TropicalCurve(1, {{Rat(1, 3)}}, {}, {{0, iv({1}), 1}, {0, iv({-1}), 1}}));
    CHECK(third["vertices"][0][0].get<double>() == doctest::Approx(1.0 / 3.0));
    const TropicalCurve r4(4, {pt({0, 0, 0, 0})}, {},
                           {{0, iv({1, 0, 0, 0}), 1}, {0, iv({0, 1, 0, 0}), 1}, {0, iv({-1, -1, 0, 0}), 1}});
    CHECK_THROWS_AS(plot_json(r4), Error);
  }

  TEST_CASE("witness round trip") {
    for (const auto& [name, c] : fixtures::valid_fixtures()) {
      CAPTURE(name);
      const auto w = construct_witness(c, three_coloring_order(c).order, 4);
      const auto text = pretty_dump(to_json(w));
      const auto back = parse_witness(text);
      CHECK(canonical_dump(to_json(back)) == canonical_dump(to_json(w)));
      CHECK(verify_witness(c, back).passed);
    }
  }

  TEST_CASE("certificate document") {
    const auto j = to_json(certify_realizability(fixtures::hexagon(), 7));
    CHECK(j["schema"] == 1);
    CHECK(j["verdict"] == "realizable");
    CHECK(j["seed"] == 7);
    CHECK(j["version"] == kToolVersion);
    const auto r = to_json(certify_realizability(fixtures::hexagon3d(), 7));
    CHECK(r["verdict"] == "refused");
    CHECK(r["failing_check"] == "non_superabundance");
  }
}
