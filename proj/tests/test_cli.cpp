#include <doctest.h>

#include <fstream>

#include "morita_cli/commands.hpp"
#include "support.hpp"

using namespace morita;
using namespace morita::cli;
using namespace testing_support;

namespace {

const std::string samples = MORITA_SAMPLES_DIR;

Document sample(const std::string& name) { return parse_document(read_text(samples + "/" + name)); }

ErrorKind parse_error_kind(const std::string& text) {
    try {
        parse_document(text);
    } catch (const Error& e) {
        return e.kind();
    }
    FAIL("document parsed");
    return ErrorKind::BadParams;
}

std::string parse_error_message(const std::string& text) {
    try {
        parse_document(text);
    } catch (const Error& e) {
        return e.what();
    }
    return "";
}

CommandOutput run(const Document& doc, const std::string& command, const std::vector<std::string>& args,
                  const CommandOptions& opt = {}) {
    return run_command(doc, command, args, opt);
}

}  // namespace

TEST_CASE("minimal documents parse") {
    const Document d = parse_document(R"({"algebras": {"M2": {"kind": "matrix", "n": 2}}})");
    REQUIRE(d.algebras.count("M2") == 1);
    CHECK(d.algebra("M2")->dim() == 4);
    CHECK_FALSE(d.deformation);
    CHECK(validate_document(d).ok());
}

TEST_CASE("scalar syntax") {
    const Document d = parse_document(R"({
        "ring": {"base": "deformation"},
        "matrices": {"A": [["2/4", {"re": "0", "im": "-1"}],
                            [{"re": 0, "im": 1}, ["1", "0", "-3"]]],
                     "B": [[{"num": ["1"], "den": ["1", "1"]}]]}})");
    const Matrix& a = d.matrix("A");
    CHECK(a(0, 0) == q(1, 2));
    CHECK(a(0, 1) == FracScalar(Scalar(BaseElement(0), BaseElement(-1))));
    CHECK(a(1, 0) == a(0, 1).conj());
    CHECK(a(1, 1) == FracScalar(Scalar(poly({1, 0, -3}))));
    CHECK(d.matrix("B")(0, 0) == FracScalar(Scalar(BaseElement(1))) / FracScalar(Scalar(poly({1, 1}))));
    CHECK(serialize_document(d)["matrices"]["A"][0][0] == "1/2");
}

TEST_CASE("parse errors") {
    CHECK(parse_error_kind(R"({"matrices": {"A": [["1/0"]]}})") == ErrorKind::MalformedScalar);
    CHECK(parse_error_kind(R"({"matrices": {"A": [["x"]]}})") == ErrorKind::MalformedScalar);
    CHECK(parse_error_kind(R"({"matrices": {"A": [[["0", "1"]]]}})") == ErrorKind::MalformedScalar);
    CHECK(parse_error_kind(R"({"algebras": {"C": {"kind": "scalars"}},
                               "bimodules": {"X": {"kind": "free", "algebra": "D", "n": 2}}})") ==
          ErrorKind::UnresolvedReference);
    CHECK(parse_error_kind(R"({"algebras": {"C": {"kind": "scalars"}},
                               "bimodules": {"X": {"algB": "C", "algA": "Q", "dim": 1, "left": [[["1"]]],
                                                   "right": [[["1"]]], "innerA": [[["1"]]]}}})") ==
          ErrorKind::UnresolvedReference);
    CHECK(parse_error_kind("{\n  \"algebras\": {\n    \"C\": {\"kind\": }\n}") == ErrorKind::SyntaxError);
    CHECK(parse_error_message("{\n  \"algebras\": {\n    \"C\": {\"kind\": }\n}").find("line 3") != std::string::npos);
    CHECK(parse_error_message(R"({"algebras": {"C": {"kind": "scalars"}},
                                  "bimodules": {"X": {"algB": "C", "algA": "C", "dim": 1, "left": [[["1", "2"]]],
                                                      "right": [[["1"]]], "innerA": [[["1"]]]}}})")
              .find("/bimodules/X/left/0") != std::string::npos);
    CHECK(parse_error_kind(R"({"algebras": {"C": {"kind": "octonions"}}})") == ErrorKind::SyntaxError);
    CHECK(parse_error_kind(R"({"extras": {}})") == ErrorKind::SyntaxError);
}

TEST_CASE("serialization round trip") {
    for (const char* name : {"matrices.json", "deformed.json"}) {
        const Document d = sample(name);
        const json s = serialize_document(d);
        const Document again = parse_document(s.dump());
        CHECK(again == d);
        CHECK(serialize_document(again) == s);
    }
    // explicit tables survive a round trip through an equivalent explicit document
    const Document d = sample("matrices.json");
    json explicit_doc = serialize_document(d);
    explicit_doc["algebras"]["T"] = to_json(*d.algebra("M2"));
    const Document e = parse_document(explicit_doc);
    CHECK(e.algebra("T")->dim() == 4);
    CHECK(parse_document(serialize_document(e)) == e);
}

TEST_CASE("document validation") {
    CHECK(validate_document(sample("matrices.json")).ok());
    CHECK(validate_document(sample("deformed.json")).ok());

    const Document bad = parse_document(R"({"modules": {"H": {"dim": 2, "gram": [["1", "2"], ["2", "1"]]}},
                                            "algebras": {"M2": {"kind": "matrix", "n": 2}}})");
    const Report r = validate_document(bad);
    CHECK_FALSE(r.ok());
    CHECK(r.first_failure()->name == "modules/H");

    const CommandOutput out = run(bad, "gns", {"M2", "x"});
    CHECK(out.exit_code == 2);
    CHECK(out.report["status"] == "input-error");
    CHECK(out.report["result"]["validation"].size() == 2);
    CHECK_FALSE(out.report.contains("certificate"));
    CHECK(run(bad, "validate", {}).exit_code == 1);
}

TEST_CASE("commands on the rational sample") {
    const Document d = sample("matrices.json");
    CHECK(run(d, "validate", {}).exit_code == 0);
    CHECK(run(d, "psd", {"gram"}).exit_code == 0);

    const CommandOutput g = run(d, "gns", {"M2", "trace"});
    CHECK(g.exit_code == 0);
    CHECK(g.report["result"]["dim"] == 4);
    CHECK(run(d, "gns", {"M2", "state"}).report["result"]["dim"] == 2);

    const CommandOutput neg = run(d, "gns", {"M2", "skew"});
    CHECK(neg.exit_code == 1);
    CHECK(neg.report.contains("certificate"));
    CHECK(check_certificate(neg.report).exit_code == 0);

    const CommandOutput ind = run(d, "induce", {"C2", "point"});
    CHECK(ind.exit_code == 0);
    CHECK(ind.report["result"]["dim"] == 2);
    CHECK(ind.report["result"]["strongly_non_degenerate"] == true);

    CHECK(run(d, "verify-bimodule", {"C2"}).exit_code == 0);
    CHECK(run(d, "verify-bimodule", {"corner"}).exit_code == 0);
    CommandOptions rigged;
    rigged.level = "rigged";
    CHECK(run(d, "verify-bimodule", {"corner"}, rigged).report["result"]["level"] == "rigged");
    CHECK(run(d, "roundtrip", {"C2", "point"}).exit_code == 0);
    CHECK(run(d, "context", {"corner"}).exit_code == 0);
    CHECK(run(d, "classical-limit", {"C2"}).exit_code == 0);
    CHECK(run(d, "naturality", {"C2", "point"}).exit_code == 0);
}

TEST_CASE("commands on the deformed sample") {
    const Document d = sample("deformed.json");
    const CommandOutput h = run(d, "classical-limit", {"H"});
    CHECK(h.exit_code == 0);
    CHECK(h.report["result"]["limit"]["dim"] == 1);

    const CommandOutput g = run(d, "classical-limit", {"gns_thermal"});
    CHECK(g.exit_code == 0);
    CHECK(g.report["result"]["limit"]["dim"] == 2);

    CHECK(run(d, "classical-limit", {"thermal"}).report["result"]["limit"] == json::array({"1", "0", "0", "0"}));
    CHECK(run(d, "naturality", {"M2M2", "gns_thermal"}).exit_code == 0);
    CHECK(run(d, "classical-limit", {"nothing"}).exit_code == 2);
}

TEST_CASE("input errors exit with 2") {
    const Document d = sample("matrices.json");
    CHECK(run(d, "frobnicate", {}).report["error"]["kind"] == "UnknownCommand");
    CHECK(run(d, "frobnicate", {}).exit_code == 2);
    CHECK(run(d, "gns", {"M2"}).exit_code == 2);
    CHECK(run(d, "gns", {"M3", "trace"}).exit_code == 2);
    CHECK(run(d, "induce", {"C2", "defining"}).exit_code == 2);
    CommandOptions bad_level;
    bad_level.level = "strict";
    CHECK(run(d, "verify-bimodule", {"C2"}, bad_level).exit_code == 2);
    CHECK(run_command(std::nullopt, "gns", {"M2", "trace"}).exit_code == 2);
    CHECK(run_command(std::nullopt, "demo", {"nope"}).exit_code == 2);
    CHECK(run_command(std::nullopt, "psd", {"[[1,2],[3,4]]"}).exit_code == 2);
}

TEST_CASE("psd command") {
    const CommandOutput out = run_command(std::nullopt, "psd", {"[[0,1],[1,0]]"});
    CHECK(out.exit_code == 1);
    CHECK(out.report["status"] == "failed");
    const json& w = out.report["certificate"]["certificate"]["witness"];
    CHECK((w == json::array({"1", "-1"}) || w == json::array({"-1", "1"})));
    CHECK(check_certificate(out.report).exit_code == 0);

    json forged = out.report;
    forged["certificate"]["certificate"]["witness"] = json::array({"1", "1"});
    CHECK(check_certificate(forged).exit_code == 1);

    CommandOptions opt;
    opt.samples = 200;
    opt.seed = 7;
    const CommandOutput pos = run_command(std::nullopt, "psd", {R"([["2", {"re": "0", "im": "1"}], [{"re": "0", "im": "-1"}, "1"]])"}, opt);
    CHECK(pos.exit_code == 0);
    CHECK(pos.report["result"]["sampled_negative"] == 0);
}

TEST_CASE("demos") {
    CommandOptions opt;
    opt.n = 3;
    const CommandOutput cn = run_command(std::nullopt, "demo", {"cn-mn"}, opt);
    CHECK(cn.exit_code == 0);

    opt.n = 2;
    const CommandOutput g = run_command(std::nullopt, "demo", {"grassmann-refusal"}, opt);
    CHECK(g.exit_code == 1);
    CHECK(g.report["certificate"]["type"] == "nilpotent");
    CHECK(g.report["certificate"]["element"] == json::array({"0", "1", "0", "0"}));
    CHECK(check_certificate(g.report).exit_code == 0);

    json forged = g.report;
    forged["certificate"]["element"] = json::array({"1", "0", "0", "0"});
    CHECK(check_certificate(forged).exit_code == 1);

    const CommandOutput lift = run_command(std::nullopt, "demo", {"lift-counterexample"});
    CHECK(lift.exit_code == 1);
    CHECK(lift.report["failure"] == "ConstantLiftFails");
    CHECK(lift.report["certificate"]["certificate"]["witness"] == json::array({"0", "1"}));

    for (const auto& name : demo_names()) {
        const CommandOutput out = run_command(std::nullopt, "demo", {name});
        INFO(name);
        CHECK(out.exit_code != 2);
        if (out.exit_code == 1) CHECK(check_certificate(out.report).exit_code == 0);
    }
}

TEST_CASE("recheck certificates") {
    const Document bad = parse_document(R"({
        "algebras": {"C": {"kind": "scalars"}},
        "representations": {"point": {"algebra": "C", "kind": "defining"}},
        "bimodules": {"X": {"algB": "C", "algA": "C", "dim": 2,
                            "left": [[["1", "0"], ["0", "1"]]], "right": [[["1", "0"], ["0", "1"]]],
                            "innerA": [[["1"], ["0"]], [["0"], ["-1"]]]}}})");
    const CommandOutput out = run(bad, "induce", {"X", "point"});
    CHECK(out.exit_code == 1);
    CHECK(out.report["certificate"]["type"] == "recheck");
    CHECK(check_certificate(out.report).exit_code == 0);

    json tampered = out.report;
    tampered["certificate"]["failure"] = "something else";
    CHECK(check_certificate(tampered).exit_code == 1);

    CHECK(run(bad, "verify-bimodule", {"X"}).exit_code == 1);
    CHECK(check_certificate(run(bad, "verify-bimodule", {"X"}).report).exit_code == 0);
}

TEST_CASE("reports are deterministic") {
    const Document d = sample("matrices.json");
    CommandOptions opt;
    opt.seed = 11;
    CHECK(run(d, "gns", {"M2", "trace"}, opt).report.dump() == run(d, "gns", {"M2", "trace"}, opt).report.dump());
    opt.samples = 50;
    CHECK(run(d, "psd", {"gram"}, opt).report.dump() == run(d, "psd", {"gram"}, opt).report.dump());
    CommandOptions demo;
    demo.seed = 3;
    CHECK(run_command(std::nullopt, "demo", {"gns-rank"}, demo).report.dump() ==
          run_command(std::nullopt, "demo", {"gns-rank"}, demo).report.dump());
    CHECK(check_certificate(json::object({{"type", "tarot"}})).exit_code == 2);
}
