#include "doctest.h"

#include "support/chart_oracles.hpp"
#include "support/cli_harness.hpp"

using namespace tropcert;
using namespace tropcert::testing;
using nlohmann::json;

namespace {

std::string fx(const std::string &name) { return fixture(name).string(); }

DocumentError::Kind error_kind(const std::string &text) {
  try {
    parse_document(text);
  } catch (const DocumentError &e) {
    return e.kind();
  }
  FAIL("document was accepted");
  return DocumentError::Kind::Syntax;
}

std::string error_path(const std::string &text) {
  try {
    parse_document(text);
  } catch (const DocumentError &e) {
    return e.path();
  }
  return "<accepted>";
}

const std::string line_cells = R"([
  {"cell": {"ray": {"apex": ["0", "0"], "direction": ["1", "0"]}}, "weight": "1"},
  {"cell": {"ray": {"apex": ["0", "0"], "direction": ["0", "1"]}}, "weight": "1"},
  {"cell": {"ray": {"apex": ["0", "0"], "direction": ["-1", "-1"]}}, "weight": "1"}])";

int expected_code(PshStatus s) { return s == PshStatus::Psh ? 0 : s == PshStatus::NotPsh ? 1 : 2; }
int expected_code(Tri t) { return t == Tri::Yes ? 0 : t == Tri::No ? 1 : 2; }

} // namespace

TEST_CASE("example document contents") {
  auto doc = parse_document(slurp(fixture("example5_3.json")));
  CHECK(doc.names("cycles") == std::vector<std::string>{"L"});
  CHECK(doc.names("functions") == std::vector<std::string>{"phi"});
  CHECK(doc.names("charts") == std::vector<std::string>{"line"});
  CHECK(doc.kind_of("phi") == "functions");
  CHECK(doc.kind_of("nothing").empty());
  CHECK(doc.parameters() == Parameters{{"a", 1}, {"b", 1}, {"c", 1}});
  auto chart = doc.chart("line", {{"c", -3}});
  CHECK(chart.metadata.at("variety") == "a line in the projective plane");
  // the document function is the oracle's function
  std::mt19937_64 rng(1);
  for (int t = 0; t < 10; ++t) {
    Rational a = random_rational(rng), b = random_rational(rng), c = random_rational(rng);
    auto phi = doc.function("phi", {{"a", a}, {"b", b}, {"c", c}});
    auto oracle = line_conic(a, b, c);
    for (const auto &p : {rv({3, 0}), rv({0, 5}), rv({-2, -2}), rv({0, 0})})
      CHECK(phi(p) == oracle(p));
    CHECK(same_cycle(corner_locus(phi), corner_locus(oracle)));
  }
}

TEST_CASE("empty documents") {
  auto doc = parse_document(R"({"version": "1"})");
  for (const char *t : {"cycles", "functions", "charts", "forms", "regions", "maps", "lattices", "complexes"})
    CHECK(doc.names(t).empty());
  CHECK(serialize_document(doc) == "{\n  \"version\": \"1\"\n}\n");
  CHECK(parse_document(R"({"version": "1", "cycles": {}, "charts": {}})").names("cycles").empty());
}

TEST_CASE("fixtures round-trip byte-canonically") {
  auto files = corpus();
  REQUIRE(files.size() >= 10);
  for (const auto &f : files) {
    CAPTURE(f.filename().string());
    auto text = slurp(f);
    auto doc = parse_document(text);
    auto again = serialize_document(doc);
    CHECK(again == text);
    CHECK(parse_document(again) == doc);
  }
}

TEST_CASE("canonicalization") {
  auto doc = parse_document(R"({"version": "1", "parameters": {"t": "6/4"},
    "cycles": {"L": {"dim": 1, "ambient_rank": 2, "cells": )" +
                            line_cells + R"(}},
    "functions": {"f": {"cycle": "L", "affine": {"linear": [" 2*t - t + 0 ", 4], "constant": "-0/3"}}}})");
  const auto &tree = doc.tree();
  CHECK(tree["parameters"]["t"] == "3/2");
  CHECK(tree["functions"]["f"]["affine"]["linear"] == json::array({"t", "4"}));
  CHECK(tree["functions"]["f"]["affine"]["constant"] == "0");
  CHECK(tree["cycles"]["L"]["balanced"] == true);
  auto text = serialize_document(doc);
  CHECK(serialize_document(parse_document(text)) == text);
  CHECK(doc.function("f")(rv({1, 0})) == Rational(3, 2));
  CHECK(doc.function("f", {{"t", -2}})(rv({1, 0})) == -2);

  CHECK(canonical_expression("b + a") == "a+b");
  CHECK_THROWS_AS(canonical_expression("3 a"), std::invalid_argument);
  CHECK(canonical_expression("-1*b - 2/4") == "-b-1/2");
  CHECK(canonical_expression("a - a") == "0");
  CHECK(canonical_expression("-b-c") == "-b-c");
  CHECK(canonical_expression("3/6*x") == "1/2*x");
  CHECK_THROWS_AS(canonical_expression("a *"), std::invalid_argument);
  CHECK_THROWS_AS(canonical_expression(""), std::invalid_argument);
  CHECK_THROWS_AS(canonical_expression("1/0"), std::invalid_argument);
  CHECK(evaluate_expression("2*a - b + 1/3", {{"a", 1}, {"b", Rational(1, 3)}}) == 2);
  CHECK_THROWS_AS(evaluate_expression("a", {}), std::invalid_argument);
}

TEST_CASE("document errors name the failing field") {
  auto bad = slurp(source_dir() / "tests/data/invalid/bad_rational.json");
  CHECK(error_kind(bad) == DocumentError::Kind::Schema);
  CHECK(error_path(bad) == "cycles.L.cells[0].weight");

  try {
    parse_document(slurp(source_dir() / "tests/data/invalid/syntax.json"));
    FAIL("accepted");
  } catch (const DocumentError &e) {
    CHECK(e.kind() == DocumentError::Kind::Syntax);
    CHECK(e.line() == 4);
    CHECK(e.column() == 16);
  }
  CHECK(error_kind(slurp(source_dir() / "tests/data/invalid/dangling.json")) == DocumentError::Kind::Reference);
  CHECK(error_path(slurp(source_dir() / "tests/data/invalid/dangling.json")) == "functions.f.cycle");
  CHECK(error_kind(slurp(source_dir() / "tests/data/invalid/unbalanced.json")) == DocumentError::Kind::Invariant);
  CHECK(error_path(slurp(source_dir() / "tests/data/invalid/unbalanced.json")) == "cycles.V");
  CHECK(error_path(slurp(source_dir() / "tests/data/invalid/unknown_field.json")) == "regions.R");
  CHECK(error_kind(slurp(source_dir() / "tests/data/invalid/version.json")) == DocumentError::Kind::Schema);

  CHECK(error_kind(R"({"version": "1", "cycles": {"x": {"ambient_rank": 1, "dim": 1, "cells": []}},
                        "forms": {"x": {"rank": 1, "p": 0, "q": 0, "terms": []}}})") == DocumentError::Kind::Schema);
  CHECK(error_path(R"({"version": "1", "forms": {"w": {"rank": 2, "p": 1, "q": 1,
                        "terms": [{"I": [2, 1], "J": [1], "c": "1"}]}}})") == "forms.w.terms[0].I");
  CHECK(error_kind(R"({"version": "1", "forms": {"w": {"rank": 2, "p": 1, "q": 1,
                        "terms": [{"I": [3], "J": [1], "c": "1"}]}}})") == DocumentError::Kind::Invariant);
  CHECK(error_path(R"({"version": "1", "functions": {"f": {"ambient_rank": 1, "affine": {"linear": ["z"]}}}})") ==
        "functions.f.affine.linear[0]");
  CHECK(error_kind(R"({"version": "1", "functions": {"f": {"ambient_rank": 1, "restrict": "f"}}})") ==
        DocumentError::Kind::Reference);
  CHECK(error_kind(R"({"version": "1", "cycles": {"C": {"ambient_rank": 2, "dim": 1, "cells": [
        {"cell": {"cone": {"apex": ["0", "0"], "generators": [["1", "0"], ["2", "0"]]}}, "weight": "1"}]}}})") ==
        DocumentError::Kind::Schema);
  CHECK(error_kind(R"({"version": "1", "charts": {"c": {"function": "g"}}})") == DocumentError::Kind::Reference);
  CHECK(error_kind(R"({"version": "1", "regions": {"R": {"ambient_rank": 2, "box": {"lo": ["0"], "hi": ["1", "1"]}}}})") ==
        DocumentError::Kind::Schema);
}

TEST_CASE("cell shapes") {
  auto doc = parse_document(slurp(fixture("complexes.json")));
  auto fan = doc.complex("fan");
  CHECK(fan.size() >= 3);
  auto L = doc.cycle("L");
  CHECK(is_balanced(L));
  CHECK(same_cycle(L, tropical_line(rv({0, 0}))));
  CHECK_FALSE(is_balanced(doc.cycle("bent")));
  CHECK(doc.lattice("diag").rank() == 2);
  auto tent = doc.function("tent_on_L");
  CHECK(tent(rv({3, 0})) == 2);
  CHECK(tent(rv({0, 3})) == 0);
  auto right = doc.region("right");
  CHECK(right.contains(rv({1, 0})));
  CHECK_FALSE(right.contains(RatVector{Rational(1, 2), 0}));

  auto seg = parse_document(R"({"version": "1", "cycles": {"S": {"ambient_rank": 2, "dim": 1, "balanced": false,
      "cells": [{"cell": {"segment": [["0", "0"], ["2", "1"]]}, "weight": "1"}]}}})");
  auto s = seg.cycle("S");
  REQUIRE(s.support_cells().size() == 1);
  const auto &cell = s.complex().cell(s.support_cells()[0]);
  CHECK(cell.contains(rv({2, 1})));
  CHECK(cell.contains(RatVector{1, Rational(1, 2)}));
  CHECK_FALSE(cell.contains(RatVector{3, Rational(3, 2)}));
  CHECK_FALSE(cell.contains(rv({1, 1})));
}

TEST_CASE("command examples") {
  auto [code, report] = invoke_json({"psh-check", fx("example5_3.json"), "--chart", "line", "--set", "a=1", "b=1",
                                     "c=-3"});
  CHECK(code == 1);
  CHECK(report["status"] == "not_psh");
  REQUIRE(report["witnesses"].size() == 1);
  CHECK(report["witnesses"][0]["point"] == json::array({"0", "0"}));
  CHECK(report["witnesses"][0]["value"] == "-1");
  CHECK(report["witnesses"][0]["condition"] == "effectivity");

  CHECK(invoke({"balance", fx("tropline.json"), "--cycle", "L"}).code == 0);

  auto [icode, ireport] = invoke_json({"intersect", fx("lines.json"), "--a", "L1", "--b", "L2", "--degree"});
  CHECK(icode == 0);
  CHECK(ireport["payload"]["degree"] == "1");
}

TEST_CASE("exit codes per command") {
  struct Case {
    std::vector<std::string> args;
    int code;
  };
  const std::vector<Case> cases = {
      {{"balance", fx("tropline.json"), "--cycle", "L"}, 0},
      {{"balance", fx("complexes.json"), "--cycle", "bent"}, 1},
      {{"effective", fx("push.json"), "--cycle", "L2"}, 0},
      {{"effective", fx("complexes.json"), "--cycle", "L", "--region", "right"}, 0},
      {{"corner-locus", fx("example5_3.json"), "--function", "phi"}, 0},
      {{"corner-locus", fx("complexes.json"), "--function", "neg"}, 65},
      {{"push", fx("push.json"), "--map", "project", "--cycle", "L"}, 0},
      {{"push", fx("push.json"), "--map", "project", "--cycle", "nothing"}, 65},
      {{"intersect", fx("lines.json"), "--a", "L1", "--b", "L2"}, 0},
      {{"intersect", fx("lines.json"), "--a", "L1", "--b", "L2", "--direction", "1", "0"}, 65},
      {{"intersect", fx("lines.json"), "--a", "L1", "--b", "L2", "--direction", "1"}, 64},
      {{"psh-check", fx("example5_3.json"), "--chart", "line"}, 0},
      {{"psh-check", fx("example5_3.json"), "--set", "c=-2"}, 0},
      {{"psh-check", fx("example5_3.json"), "--set", "c=-2001/1000"}, 1},
      {{"psh-strong", fx("example5_3_extended.json")}, 0},
      {{"psh-strong", fx("example5_3_extended.json"), "--set", "c=-4"}, 1},
      {{"psh-strong", fx("example5_3.json")}, 65},
      {{"graph-ma", fx("graph.json"), "--chart", "abs_chart"}, 0},
      {{"graph-ma", fx("graph.json"), "--chart", "conic_chart"}, 1},
      {{"graph-ma", fx("graph.json")}, 1},
      {{"toric-check", fx("toric.json"), "--function", "max0xy"}, 0},
      {{"toric-check", fx("toric.json"), "--function", "min0x"}, 1},
      {{"toric-check", fx("example5_3.json"), "--function", "phi"}, 65},
      {{"positivity", fx("forms.json"), "--form", "kahler4", "--mode", "strong"}, 0},
      {{"positivity", fx("forms.json"), "--form", "unsigned3"}, 1},
      {{"positivity", fx("forms.json"), "--form", "middle4", "--mode", "strong"}, 2},
      {{"positivity", fx("forms.json"), "--form", "middle4", "--mode", "fuzzy"}, 64},
      {{"positivity", fx("forms.json"), "--form", "L"}, 65},
      {{"balance", fx("example5_3.json"), "--cycle", "phi"}, 65},
      {{"balance", fx("tropline.json")}, 64},
      {{"balance", fx("nowhere.json"), "--cycle", "L"}, 66},
      {{"psh-check", fx("example5_3.json"), "--set", "d=1"}, 64},
      {{"psh-check", fx("example5_3.json"), "--set", "a=x"}, 64},
      {{"psh-check", fx("example5_3.json"), "--strict", "--lenient"}, 64},
      {{"frobnicate", fx("tropline.json")}, 64},
      {{}, 64},
      {{"--help"}, 0},
  };
  for (const auto &c : cases) {
    std::string label;
    for (const auto &a : c.args)
      label += a.substr(a.find_last_of('/') + 1) + " ";
    CAPTURE(label);
    auto r = invoke(c.args);
    CHECK(r.code == c.code);
    if (r.code >= 64)
      CHECK_FALSE(r.err.empty());
  }
}

TEST_CASE("exit codes match library verdicts on the corpus") {
  for (const auto &f : corpus()) {
    auto doc = parse_document(slurp(f));
    CAPTURE(f.filename().string());
    for (const auto &name : doc.names("cycles"))
      CHECK(invoke({"balance", f.string(), "--cycle", name}).code == (is_balanced(doc.cycle(name)) ? 0 : 1));
    for (const auto &name : doc.names("charts")) {
      auto chart = doc.chart(name);
      CHECK(invoke({"psh-check", f.string(), "--chart", name, "--lenient"}).code ==
            expected_code(certify_psh(chart, {RegionMode::Lenient, {}}).status));
      if (chart.extension)
        CHECK(invoke({"psh-strong", f.string(), "--chart", name}).code ==
              expected_code(certify_psh_strong(chart).status));
    }
    for (const auto &name : doc.names("forms"))
      for (const char *mode : {"weak", "positive", "strong"}) {
        auto alpha = doc.form(name);
        Tri t = std::string(mode) == "weak"     ? is_weakly_positive(alpha).verdict
                : std::string(mode) == "strong" ? is_strongly_positive(alpha).verdict
                                                : positivity_report(alpha).verdict;
        CHECK(invoke({"positivity", f.string(), "--form", name, "--mode", mode}).code == expected_code(t));
      }
  }
}

TEST_CASE("parameterized runs follow the sign of a+b+c") {
  std::mt19937_64 rng(7);
  for (int t = 0; t < 20; ++t) {
    Rational a = random_rational(rng), b = random_rational(rng), c = random_rational(rng);
    auto r = invoke({"psh-check", fx("example5_3.json"), "--set", "a=" + to_string(a), "b=" + to_string(b),
                     "c=" + to_string(c)});
    CHECK(r.code == (a + b + c >= 0 ? 0 : 1));
  }
}

TEST_CASE("payloads") {
  auto [code, report] = invoke_json({"corner-locus", fx("example5_3.json"), "--function", "phi", "--set", "a=2"});
  CHECK(code == 0);
  const auto &cells = report["payload"]["cycle"]["cells"];
  REQUIRE(cells.size() == 1);
  CHECK(cells[0]["weight"] == "4");
  CHECK(report["payload"]["points"][0] == json::array({"0", "0"}));

  auto [pcode, push] = invoke_json({"push", fx("push.json"), "--map", "double", "--cycle", "L"});
  CHECK(pcode == 0);
  CHECK(push["payload"]["cycle"]["dim"] == 1);
  for (const auto &c : push["payload"]["cycle"]["cells"])
    CHECK(c["weight"] == "2");

  auto [gcode, graph] = invoke_json({"graph-ma", fx("graph.json"), "--chart", "conic_chart"});
  CHECK(gcode == 1);
  CHECK(graph["payload"]["charts"][0]["measure"][0]["mass"] == "-3/2");

  auto [fcode, form] = invoke_json({"positivity", fx("forms.json"), "--form", "minus", "--mode", "weak"});
  CHECK(fcode == 1);
  REQUIRE(form["witnesses"].size() == 1);
  CHECK(form["witnesses"][0]["value"].get<std::string>().front() == '-');

  auto [ecode, error] = invoke_json({"balance", (source_dir() / "tests/data/invalid/bad_rational.json").string(),
                                     "--cycle", "L"});
  CHECK(ecode == 65);
  CHECK(error["status"] == "error");
  CHECK(error["payload"]["error"]["path"] == "cycles.L.cells[0].weight");
}

TEST_CASE("text mode shows every witness") {
  auto args = std::vector<std::string>{"psh-strong", fx("example5_3_extended.json"), "--set", "c=-4"};
  auto [code, report] = invoke_json(args);
  auto text = invoke(args);
  CHECK(code == text.code);
  REQUIRE(report["witnesses"].size() == 3);
  for (const auto &w : report["witnesses"]) {
    std::string point = "(";
    for (size_t i = 0; i < w["point"].size(); ++i)
      point += (i ? ", " : "") + w["point"][i].get<std::string>();
    CHECK(text.out.find("cell " + std::to_string(w["cell"].get<size_t>()) + " of the ambient-corner-locus") !=
          std::string::npos);
    CHECK(text.out.find(point + ")") != std::string::npos);
  }
}

TEST_CASE("output is deterministic across concurrent charts") {
  auto joint = invoke({"graph-ma", fx("graph.json"), "--format", "json"});
  for (int t = 0; t < 5; ++t)
    CHECK(invoke({"graph-ma", fx("graph.json"), "--format", "json"}).out == joint.out);
  auto report = json::parse(joint.out);
  REQUIRE(report["payload"]["charts"].size() == 2);
  for (size_t i = 0; i < 2; ++i) {
    auto name = report["payload"]["charts"][i]["name"].get<std::string>();
    auto single = json::parse(invoke({"graph-ma", fx("graph.json"), "--chart", name, "--format", "json"}).out);
    CHECK(single["payload"]["charts"][0] == report["payload"]["charts"][i]);
  }
  auto a = invoke({"positivity", fx("forms.json"), "--form", "middle4", "--mode", "strong", "--seed", "5"});
  auto b = invoke({"positivity", fx("forms.json"), "--form", "middle4", "--mode", "strong", "--seed", "5"});
  CHECK(a.out == b.out);
}
