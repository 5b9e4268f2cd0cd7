#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <algorithm>
#include <filesystem>

#include "doctest.h"
#include "json.hpp"
#include "pbc/cli.hpp"

using namespace pbc;

namespace {

std::string fixture(const std::string& f) { return std::string(PBC_FIXTURES) + "/" + f; }

std::vector<std::string> all_fixtures() {
    std::vector<std::string> out;
    for (const auto& e : std::filesystem::recursive_directory_iterator(PBC_FIXTURES)) {
        if (e.path().extension() == ".json") out.push_back(e.path().string());
    }
    std::sort(out.begin(), out.end());
    return out;
}

std::string error_of(const std::string& text) {
    try {
        parse_spec_text(text);
    } catch (const InputError& e) {
        return e.what();
    }
    return "";
}

std::size_t count(const std::string& s, const std::string& needle) {
    std::size_t n = 0;
    for (auto pos = s.find(needle); pos != std::string::npos; pos = s.find(needle, pos + 1)) ++n;
    return n;
}

}  // namespace

TEST_CASE("serialization round trip on every fixture") {
    auto files = all_fixtures();
    CHECK(files.size() >= 14);
    for (const auto& f : files) {
        CAPTURE(f);
        auto text = read_file(f);
        if (f.find("weq_not_closed") != std::string::npos) {
            CHECK_THROWS_AS(parse_spec_text(text), InputError);
            continue;
        }
        auto spec = parse_spec_text(text);
        auto again = serialize_spec(spec);
        CHECK(again == text);
        auto reparsed = parse_spec_text(again);
        CHECK(*reparsed.carrier == *spec.carrier);
    }
}

TEST_CASE("parse errors carry a line or a field") {
    CHECK(error_of("{\n  \"version\": 1,\n  \"objects\": [\"a\"\n}").find("line 4") != std::string::npos);
    CHECK(error_of(R"({"version": 2, "objects": ["a"], "poset": []})").find("version") != std::string::npos);
    CHECK(error_of(R"({"version": 1, "objects": ["a"], "poset": [["a", "b"]]})").find("poset") != std::string::npos);
    auto mixed = error_of(R"({"version": 1, "objects": ["a"], "poset": [], "morphisms": []})");
    CHECK_FALSE(mixed.empty());
    CHECK_FALSE(error_of(R"({"version": 1, "objects": ["a"], "poset": [], "colour": 3})").empty());
    auto closed = error_of(read_file(fixture("mutants/weq_not_closed.json")));
    CHECK(closed.find("1<2") != std::string::npos);
    CHECK(closed.find("0<1") != std::string::npos);
}

TEST_CASE("explicit composition tables") {
    auto spec = parse_spec_text(R"({
      "version": 1, "objects": ["x", "y"],
      "morphisms": [{"id": "a", "src": "x", "tgt": "y"}, {"id": "b", "src": "x", "tgt": "y"}],
      "composition": []
    })");
    CHECK(spec.carrier->morphism_count() == 4);
    CHECK(spec.carrier->hom(0, 1).size() == 2);
    CHECK_THROWS_AS(parse_spec_text(R"({
      "version": 1, "objects": ["x"],
      "morphisms": [{"id": "e", "src": "x", "tgt": "x"}],
      "composition": []
    })"),
                    InputError);
}

TEST_CASE("suites and exit codes") {
    SuiteOptions opts;
    auto p1 = parse_spec(fixture("p1.json"));
    auto seg = run_suite(p1, "segal", opts);
    CHECK(seg.status() == Status::pass);
    CHECK(exit_code(seg) == 0);
    CHECK(seg.checks.size() == 3);

    auto disc = parse_spec(fixture("disc2.json"));
    auto mt = run_suite(disc, "main-theorem", opts);
    CHECK(mt.status() == Status::pass);

    auto bad = parse_spec(fixture("mutants/p1_bad_factorization.json"));
    auto v = run_suite(bad, "validate", opts);
    CHECK(v.status() == Status::fail);
    CHECK(exit_code(v) == 1);
    bool axiom4 = false;
    for (const auto& c : v.checks) axiom4 = axiom4 || (c.name == "axiom4" && c.status == Status::fail);
    CHECK(axiom4);

    for (const char* f : {"p1.json", "p2.json", "disc2.json", "diamond_brown.json", "p1_arrows.json"}) {
        CAPTURE(f);
        CHECK(run_suite(parse_spec(fixture(f)), "validate", opts).status() == Status::pass);
    }

    SuiteOptions tiny = opts;
    tiny.budget = 5;
    CHECK_THROWS_AS(run_suite(parse_spec(fixture("p2.json")), "segal", tiny), BudgetExceeded);
    CHECK_THROWS_AS(run_suite(p1, "nonsense", opts), InputError);
}

TEST_CASE("map-space and compose suites") {
    SuiteOptions opts;
    opts.from = "0";
    opts.to = "0";
    auto p1 = parse_spec(fixture("p1.json"));
    auto r = run_suite(p1, "map-space", opts);
    CHECK(r.status() == Status::pass);
    CHECK(r.checks[0].detail == "2 objects, 3 morphisms");
    opts.z1 = "(0,1,1)";
    opts.z2 = "(1,1,1)";
    auto c = run_suite(p1, "compose", opts);
    CHECK(c.status() == Status::pass);
    CHECK(c.checks[0].detail.find("outer (0,1,1)") != std::string::npos);
    opts.z2 = "(9,9,9)";
    CHECK_THROWS_AS(run_suite(p1, "compose", opts), InputError);
}

TEST_CASE("JSON reports") {
    SuiteOptions opts;
    auto p1 = parse_spec(fixture("p1.json"));
    auto text = emit_report(run_suite(p1, "weiss", opts), "json");
    auto j = nlohmann::ordered_json::parse(text);
    std::vector<std::string> keys;
    for (auto it = j.begin(); it != j.end(); ++it) keys.push_back(it.key());
    CHECK(keys == std::vector<std::string>{"suite", "fixture", "fixture_hash", "status", "checks", "witnesses",
                                           "work_units", "timing"});
    CHECK(j["status"] == "pass");
    CHECK(j["timing"].is_null());
    CHECK_FALSE(j["witnesses"].empty());

    SuiteReport unk;
    unk.suite = "homology";
    unk.checks.push_back({"x", Status::unknown, "too large", ""});
    CHECK(exit_code(unk) == 0);
    auto u = nlohmann::json::parse(emit_report(unk, "json"));
    CHECK(u["status"] == "unknown");
    CHECK(u["checks"][0]["status"] == "unknown");
    CHECK(emit_report(unk, "text").find("1 unknown") != std::string::npos);
    CHECK_THROWS_AS(emit_report(unk, "yaml"), InputError);
}

TEST_CASE("reports are byte-identical across runs") {
    SuiteOptions opts;
    for (const char* f : {"p1.json", "p1_plus_p1.json", "mixed.json"}) {
        for (const char* suite : {"validate", "segal", "weiss", "homology"}) {
            auto spec = parse_spec(fixture(f));
            std::string a, b;
            try {
                a = emit_report(run_suite(spec, suite, opts), "json");
                b = emit_report(run_suite(parse_spec(fixture(f)), suite, opts), "json");
            } catch (const InputError& e) {
                a = b = e.what();
            }
            CHECK(a == b);
        }
    }
}

TEST_CASE("DOT export") {
    SuiteOptions opts;
    auto p1 = parse_spec(fixture("p1.json"));
    auto carrier = export_dot(p1, "carrier", opts);
    CHECK(count(carrier, "[label=\"") == 3);
    CHECK(count(carrier, " -> ") == 1);
    CHECK(count(carrier, "dashed") == 1);

    auto pentagon = export_dot(p1, "cn:2:(0,0,1,0,1,1)", opts);
    CHECK(count(pentagon, "pos=") == 6);
    CHECK(count(pentagon, " -> ") == 6);
    CHECK(count(pentagon, "dashed") == 3);

    auto map = export_dot(p1, "map:0,0", opts);
    CHECK(count(map, "[label=\"") == 3);
    CHECK(count(map, " -> ") == 1);

    CHECK_THROWS_AS(export_dot(p1, "nowhere", opts), InputError);
}
