#include <doctest.h>

#include <filesystem>
#include <fstream>
#include <sstream>

#include "smartperm/cli.hpp"
#include "test_data.hpp"

using namespace smartperm;
using smartperm::testing::data_path;
using smartperm::testing::fixture_path;
using smartperm::testing::read_text;
namespace fs = std::filesystem;

namespace {

struct Run {
    int code;
    std::string out, err;
};

Run run(std::vector<std::string> args) {
    args.insert(args.begin(), {"smartperm", "--kb", data_path("capabilities.kb"), "--lexicon",
                               data_path("lexicon.txt")});
    std::vector<const char*> argv;
    for (const auto& a : args)
        argv.push_back(a.c_str());
    std::ostringstream out, err;
    int code = run_cli(static_cast<int>(argv.size()), argv.data(), out, err);
    return {code, out.str(), err.str()};
}

fs::path scratch(const char* name) {
    auto p = fs::temp_directory_path() / (std::string("smartperm_cli_") + name);
    fs::remove_all(p);
    fs::create_directories(p);
    return p;
}

}  // namespace

TEST_CASE("analyze exit codes") {
    CHECK(run({"analyze", fixture_path("big_turn_off.groovy")}).code == 0);
    auto r = run({"analyze", fixture_path("big_turn_off_siren.groovy")});
    CHECK(r.code == 1);
    CHECK(r.out.find("\"capability\":\"switch\",\"resource\":\"siren\"") != std::string::npos);
    CHECK(r.err.find("apps=1") != std::string::npos);
    CHECK(run({"analyze", fixture_path("nope.groovy")}).code == 2);
    CHECK(run({"analyze", "--cases", "4", fixture_path("big_turn_off.groovy")}).code == 2);
    CHECK(run({"analyze", "--format", "xml", fixture_path("big_turn_off.groovy")}).code == 2);
    CHECK(run({"bogus"}).code == 2);
}

TEST_CASE("unparseable files are errors") {
    auto dir = scratch("broken");
    std::ofstream(dir / "bad.groovy") << "def f() {";
    auto r = run({"analyze", dir.string()});
    CHECK(r.code == 2);
    CHECK(r.err.find("bad.groovy") != std::string::npos);
}

TEST_CASE("case selection and clauses") {
    auto f = fixture_path("motion_light.groovy");
    CHECK(run({"analyze", f}).code == 1);
    CHECK(run({"analyze", "--cases", "1,2", f}).code == 0);
    CHECK(run({"analyze", "--case3-clauses", "none", f}).code == 0);
    CHECK(run({"analyze", "--case3-clauses", "a", f}).code == 0);
    CHECK(run({"analyze", "--case3-clauses", "b", f}).code == 1);
    CHECK(run({"analyze", "--case3-clauses", "q", f}).code == 2);
}

TEST_CASE("table format") {
    auto r = run({"analyze", "--format", "table", fixture_path("big_turn_off_sensor.groovy")});
    CHECK(r.code == 1);
    CHECK(r.out.rfind("case", 0) == 0);
    CHECK(r.out.find("accelerationSensor") != std::string::npos);
    CHECK(r.out.find("apps=1") != std::string::npos);
}

TEST_CASE("facts command") {
    auto r = run({"facts", fixture_path("preferences_only.groovy")});
    CHECK(r.code == 0);
    CHECK(r.out.find("requestedCapability(preferences_only,switch).") != std::string::npos);
    auto dir = scratch("facts");
    CHECK(run({"facts", "--out", dir.string(), fixture_path("motion_light.groovy")}).code == 0);
    auto text = read_text((dir / "motion_light.pl").string());
    CHECK(text.find("actionComposition(code,'Motion Light',rule1,action1,switch,on,on).") !=
          std::string::npos);
}

TEST_CASE("jobs do not change the report") {
    auto dir = scratch("gen");
    REQUIRE(run({"generate", "--count", "30", "--out", dir.string()}).code == 0);
    auto a = run({"analyze", "--jobs", "1", dir.string()});
    auto b = run({"analyze", "--jobs", "4", dir.string()});
    CHECK(a.code == 1);
    CHECK(a.out == b.out);
    CHECK_FALSE(a.out.empty());
}

TEST_CASE("generate, analyze, eval") {
    auto dir = scratch("eval");
    auto g = run({"generate", "--count", "24", "--seed", "3", "--out", dir.string()});
    REQUIRE(g.code == 0);
    CHECK(g.out.find("wrote 24 apps (12 mutants)") != std::string::npos);
    auto report = (dir / "report.jsonl").string();
    CHECK(run({"analyze", "--out", report, dir.string()}).code == 1);
    auto e = run({"eval", "--manifest", (dir / "manifest.json").string(), "--report", report});
    CHECK(e.code == 0);
    std::istringstream lines(e.out);
    std::string line;
    std::getline(lines, line);
    int rows = 0;
    while (std::getline(lines, line)) {
        ++rows;
        // zero false negatives on the generator's own mutants
        std::istringstream cols(line);
        std::string c, tp, fp, fn;
        cols >> c >> tp >> fp >> fn;
        CHECK_MESSAGE(fn == "0", line);
        CHECK_MESSAGE(fp == "0", line);
    }
    CHECK(rows == 3);

    std::ofstream(dir / "stray.jsonl")
        << "{\"case\":1,\"app\":\"x\",\"file\":\"/elsewhere/x.groovy\",\"capability\":\"s\"}\n";
    CHECK(run({"eval", "--manifest", (dir / "manifest.json").string(), "--report",
               (dir / "stray.jsonl").string()})
              .code == 2);
}

TEST_CASE("mutate writes mutants and a manifest") {
    auto dir = scratch("mutate");
    auto r = run({"mutate", "--case", "1", "--seed", "4", "--out", dir.string(),
                  fixture_path("big_turn_off.groovy")});
    REQUIRE(r.code == 0);
    CHECK(fs::exists(dir / "big_turn_off_case1.groovy"));
    auto manifest = read_text((dir / "manifest.json").string());
    CHECK(manifest.find("big_turn_off_case1.groovy") != std::string::npos);
    CHECK(run({"analyze", (dir / "big_turn_off_case1.groovy").string()}).code == 1);
    CHECK(run({"mutate", "--case", "5", "--out", dir.string(), fixture_path("big_turn_off.groovy")})
              .code == 2);
}

TEST_CASE("bench prints csv and an exponent") {
    auto r = run({"bench", "--count", "14", "--repeat", "1", "--group", "rules"});
    CHECK(r.code == 0);
    CHECK(r.out.rfind("label,apps,loc,facts,seconds\n", 0) == 0);
    CHECK(r.out.find("rules=64") != std::string::npos);
    CHECK(r.err.find("exponent=") != std::string::npos);
    auto p = run({"bench", "--count", "16", "--repeat", "1"});
    CHECK(p.code == 0);
    CHECK(p.out.find("apps=2,2,") != std::string::npos);
    CHECK(p.out.find("apps=16,16,") != std::string::npos);
    CHECK(run({"bench", "--group", "size"}).code == 2);
}

TEST_CASE("help exits cleanly") {
    CHECK(run({"--help"}).code == 0);
}
