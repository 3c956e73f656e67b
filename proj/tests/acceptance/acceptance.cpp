#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <functional>
#include <iostream>
#include <map>
#include <random>
#include <set>
#include <sstream>
#include <string>
#include <vector>

#include "brute_force_oracle.hpp"
#include "random_facts.hpp"
#include "smartperm/analysis.hpp"
#include "smartperm/annotator.hpp"
#include "smartperm/cli.hpp"
#include "smartperm/corpus.hpp"
#include "smartperm/evaluation.hpp"
#include "smartperm/fact_extractor.hpp"
#include "smartperm/mutation.hpp"
#include "smartperm/report.hpp"
#include "smartperm/synthetic.hpp"
#include "test_data.hpp"

using namespace smartperm;
using smartperm::testing::bundled_kb;
using smartperm::testing::bundled_lexicon;
using smartperm::testing::data_path;
using smartperm::testing::fixture;
using smartperm::testing::read_text;
namespace fs = std::filesystem;
using Clock = std::chrono::steady_clock;

namespace {

constexpr double kDescSeconds = 1.0;
constexpr int kMetricDecimals = 4;
constexpr int kOracleSets = 1000;
constexpr std::size_t kOracleMaxFacts = 200;
constexpr double kOracleSeconds = 60.0;
constexpr std::size_t kCorpusApps = 230;
constexpr double kCorpusSeconds = 60.0;
constexpr double kMaxExponent = 1.3;
constexpr int kBenchRepeats = 5;
constexpr double kRequiredRecall = 1.0;

struct Outcome {
    bool pass = false;
    std::string detail;
};

double since(Clock::time_point t) {
    return std::chrono::duration<double>(Clock::now() - t).count();
}

std::vector<Fact> compositions(const FactSet& fs) {
    std::vector<Fact> out;
    for (const auto& f : fs.facts())
        if (is_composition(f.rel))
            out.push_back(f);
    return out;
}

Fact comp(Relation r, const char* src, const char* rule, const char* id, const char* c,
          const char* a, const char* v) {
    return Fact{r, {src, "App", rule, id, c, a, v}};
}

std::string facts_text(const std::vector<Fact>& v) {
    std::string s;
    for (const auto& f : v)
        s += format_fact(f) + " ";
    return s;
}

std::string show(const std::vector<Finding>& v) {
    std::string s;
    for (const auto& f : v)
        s += "[" + std::to_string(f.case_id) + " " + f.capability + " " +
             f.resource.value_or("-") + "] ";
    return s.empty() ? "none" : s;
}

bool only(const std::vector<Finding>& v, int case_id, const std::string& cap,
          const std::optional<std::string>& res) {
    return v.size() == 1 && v[0].case_id == case_id && v[0].capability == cap &&
           (!res || v[0].resource == res);
}

Outcome criterion1() {
    auto start = Clock::now();
    auto rules = annotate_description(bundled_lexicon(), bundled_kb(),
                                      "Turn your lights on when motion is detected.");
    auto got = compositions(facts_from_description(rules, "App"));
    double s = since(start);
    std::vector<Fact> want{
        comp(Relation::ActionComposition, "desc", "rule1", "action1", "switch", "on", "on"),
        comp(Relation::TriggerComposition, "desc", "rule1", "trigger1", "motionSensor", "motion",
             "detected"),
    };
    char buf[64];
    std::snprintf(buf, sizeof buf, " in %.4fs", s);
    return {got == want && s < kDescSeconds, facts_text(got) + buf};
}

Outcome criterion2() {
    auto ast = parse_app(fixture("motion_light.groovy"));
    auto got = compositions(facts_from_code(ast, bundled_kb(), "App"));
    std::vector<Fact> want{
        comp(Relation::TriggerComposition, "code", "rule1", "trigger1", "motionSensor", "motion",
             "active"),
        comp(Relation::ConditionComposition, "code", "rule1", "condition1", "switch", "off", "off"),
        comp(Relation::ActionComposition, "code", "rule1", "action1", "switch", "on", "on"),
    };
    return {got == want, facts_text(got)};
}

Outcome criterion3() {
    auto fs = facts_from_preferences(parse_app(fixture("preferences_only.groovy")), "App");
    std::vector<Fact> want{{Relation::RequestedCapability, {"App", "switch"}}};
    return {fs.facts() == want, facts_text(fs.facts())};
}

Outcome criterion4() {
    auto f20 = parse_facts(fixture("case1_facts.pl"));
    auto r20 = run_checks(kb_from_facts(f20), f20);
    auto r22 = run_checks(bundled_kb(), parse_facts(fixture("case2_facts.pl")));
    auto r24 = run_checks(bundled_kb(), parse_facts(fixture("case3_facts.pl")));
    bool ok20 = only(r20, 1, "accelerationSensor", std::string("on"));
    bool ok22 = only(r22, 2, "switch", std::nullopt);
    bool ok24 = !r24.empty();
    for (const auto& f : r24)
        ok24 = ok24 && f.case_id == 3 && f.capability == "switch" &&
               f.resource == std::optional<std::string>("on") &&
               f.detail.find("(switch, on, on)") != std::string::npos;
    return {ok20 && ok22 && ok24,
            "case1 fixture: " + show(r20) + "case2 fixture: " + show(r22) +
                "case3 fixture: " + show(r24)};
}

Outcome criterion5() {
    const auto& kb = bundled_kb();
    const auto& lex = bundled_lexicon();
    auto run = [&](const std::string& src) { return analyze_app(kb, lex, src).findings; };
    auto seed = fixture("big_turn_off.groovy");
    auto seed_findings = run(seed);
    bool seed_ok = true;
    for (const auto& f : seed_findings)
        seed_ok = seed_ok && f.case_id != 1;

    struct Mutant {
        std::string label, source;
        int case_id;
        std::string cap;
        std::optional<std::string> res;
    };
    std::vector<Mutant> mutants{
        {"fixture siren", fixture("big_turn_off_siren.groovy"), 1, "switch", std::string("siren")},
        {"fixture section", fixture("big_turn_off_sensor.groovy"), 2, "accelerationSensor", std::nullopt},
        {"fixture on", fixture("big_turn_off_on.groovy"), 3, "switch", std::string("on")},
        {"injected siren", inject_case1_at(seed, kb, "appTouch", "switches", "siren").mutated_source,
         1, "switch", std::string("siren")},
        {"injected section",
         inject_case2_at(seed, kb, lex, "accelerationSensor").mutated_source, 2,
         "accelerationSensor", std::nullopt},
        {"injected on",
         inject_case3_at(seed, kb, lex, "switches", "off", "on", 1).mutated_source, 3, "switch",
         std::string("on")},
    };
    bool ok = seed_ok;
    std::string detail = "seed: " + show(seed_findings);
    for (const auto& m : mutants) {
        auto f = run(m.source);
        bool good = only(f, m.case_id, m.cap, m.res);
        ok = ok && good;
        detail += "| " + m.label + ": " + show(f);
    }
    return {ok, detail};
}

Outcome criterion6() {
    struct Cell {
        const char* row;
        long tp, fp, fn;
        const char* precision;
        const char* recall;
    };
    const Cell cells[] = {
        {"case 1", 33, 7, 8, "0.8250", "0.8049"},
        {"case 2", 19 + 82, 8 + 0, 0 + 34, "0.9266", "0.7481"},
        {"case 3", 19 + 20, 8 + 0, 1 + 31, "0.8298", "0.5493"},
    };
    bool ok = true;
    std::string detail;
    int serial = 0;
    for (const auto& c : cells) {
        std::vector<FileFindings> report;
        Manifest m;
        auto file = [&] { return "f" + std::to_string(++serial); };
        Finding hit;
        hit.case_id = 1;
        hit.app = "A";
        hit.capability = "switch";
        hit.resource = "on";
        Finding stray = hit;
        stray.capability = "lock";
        for (long i = 0; i < c.tp; ++i) {
            auto f = file();
            m.mutants.push_back({f, 1, "switch", std::string("on")});
            report.push_back({f, {hit}});
        }
        for (long i = 0; i < c.fn; ++i)
            m.mutants.push_back({file(), 1, "switch", std::string("on")});
        for (long i = 0; i < c.fp; ++i) {
            auto f = file();
            m.benign.push_back(f);
            report.push_back({f, {stray}});
        }
        const auto& cc = evaluate(report, m).per_case.at(1);
        char p[32] = "n/a", r[32] = "n/a";
        if (auto v = cc.precision())
            std::snprintf(p, sizeof p, "%.*f", kMetricDecimals, *v);
        if (auto v = cc.recall())
            std::snprintf(r, sizeof r, "%.*f", kMetricDecimals, *v);
        bool good = cc.tp == c.tp && cc.fp == c.fp && cc.fn == c.fn &&
                    std::string(p) == c.precision && std::string(r) == c.recall;
        ok = ok && good;
        detail += std::string(c.row) + " P=" + p + " R=" + r + (good ? "" : " (mismatch)") + "; ";
    }
    return {ok, detail};
}

Outcome criterion7() {
    using Key = std::tuple<int, std::string, std::optional<std::string>, std::optional<std::string>,
                           std::string, std::optional<std::string>>;
    auto keys = [](const std::vector<Finding>& v) {
        std::set<Key> out;
        for (const auto& f : v)
            out.insert({f.case_id, f.app, f.rule_id, f.component_id, f.capability, f.resource});
        return out;
    };
    std::mt19937_64 rng(424242);
    int mismatches = 0;
    long findings = 0;
    std::size_t largest = 0;
    auto start = Clock::now();
    for (int i = 0; i < kOracleSets; ++i) {
        auto kb = smartperm::testing::random_kb(rng);
        auto fs = smartperm::testing::random_facts(rng, kOracleMaxFacts);
        largest = std::max(largest, fs.size());
        auto got = run_checks(kb, fs);
        auto want = smartperm::testing::brute_force_oracle(kb, fs);
        if (keys(got) != keys(want) || keys(got).size() != got.size())
            ++mismatches;
        findings += static_cast<long>(got.size());
    }
    double s = since(start);
    char buf[200];
    std::snprintf(buf, sizeof buf, "%d sets (max %zu facts), %ld findings, %d mismatches, %.2fs",
                  kOracleSets, largest, findings, mismatches, s);
    return {mismatches == 0 && largest <= kOracleMaxFacts && s < kOracleSeconds, buf};
}

Outcome criterion8() {
    const auto& kb = bundled_kb();
    const auto& lex = bundled_lexicon();
    SyntheticOptions so;
    so.count = kCorpusApps;
    auto start = Clock::now();
    auto corpus = generate_corpus(kb, lex, so);
    std::vector<SourceFile> files;
    Manifest m;
    std::map<int, BenchGroup> groups;
    for (const auto& a : corpus) {
        files.push_back({a.file, a.source});
        if (a.mutant)
            m.mutants.push_back(truth_of(*a.mutant, a.file));
        else
            m.benign.push_back(a.file);
        auto& g = groups[a.rules];
        g.label = "rules=" + std::to_string(a.rules);
        g.files.push_back({a.file, a.source});
    }
    auto reports = analyze_sources(kb, lex, files, {}, 1);
    double s = since(start);

    std::vector<FileFindings> ff;
    std::size_t loc = 0;
    for (const auto& r : reports) {
        ff.push_back({r.file, r.findings});
        loc += r.loc;
    }
    auto ev = evaluate(ff, m);
    long tp = 0, fn = 0;
    for (const auto& [c, cc] : ev.per_case) {
        tp += cc.tp;
        fn += cc.fn;
    }
    double rec = recall(tp, fn).value_or(0.0);

    // Sub-corpora are nested prefixes of the corpus, each with the full mix of app sizes.
    std::vector<BenchRow> rows;
    for (const auto& g : prefix_groups(files))
        rows.push_back(bench_group(kb, lex, g, {}, kBenchRepeats));
    double exponent = scaling_exponent(rows);
    std::vector<BenchRow> by_size;
    for (const auto& [n, g] : groups)
        by_size.push_back(bench_group(kb, lex, g, {}, kBenchRepeats));

    char buf[320];
    std::snprintf(buf, sizeof buf,
                  "%zu apps, %zu mutants, %zu loc, %.2fs, exponent %.3f over %zu sub-corpora "
                  "(%.3f across app sizes, not gated), recall %ld/%ld",
                  corpus.size(), m.mutants.size(), loc, s, exponent, rows.size(),
                  scaling_exponent(by_size), tp, tp + fn);
    bool ok = corpus.size() == kCorpusApps && !m.mutants.empty() && !m.benign.empty() &&
              s < kCorpusSeconds && std::isfinite(exponent) && exponent < kMaxExponent &&
              rec >= kRequiredRecall;
    return {ok, buf};
}

Outcome criterion9() {
    auto dir = fs::temp_directory_path() / "smartperm_acceptance_determinism";
    fs::remove_all(dir);
    fs::create_directories(dir / "corpus");
    for (const auto& e : fs::directory_iterator(SMARTPERM_FIXTURE_DIR))
        if (e.path().extension() == ".groovy")
            fs::copy_file(e.path(), dir / "corpus" / e.path().filename());

    std::string kb = data_path("capabilities.kb"), lex = data_path("lexicon.txt");
    auto cli = [&](std::vector<std::string> args) {
        args.insert(args.begin(), {"smartperm", "--kb", kb, "--lexicon", lex});
        std::vector<const char*> argv;
        for (const auto& a : args)
            argv.push_back(a.c_str());
        std::ostringstream out, err;
        return run_cli(static_cast<int>(argv.size()), argv.data(), out, err);
    };
    int g = cli({"generate", "--count", std::to_string(kCorpusApps), "--out",
                 (dir / "corpus" / "synthetic").string()});
    auto one = (dir / "jobs1.jsonl").string(), four = (dir / "jobs4.jsonl").string();
    int a = cli({"analyze", "--jobs", "1", "--out", one, (dir / "corpus").string()});
    int b = cli({"analyze", "--jobs", "4", "--out", four, (dir / "corpus").string()});
    auto ta = read_text(one), tb = read_text(four);
    std::size_t lines = static_cast<std::size_t>(std::count(ta.begin(), ta.end(), '\n'));
    bool ok = g == 0 && a == b && a == 1 && !ta.empty() && ta == tb;
    fs::remove_all(dir);
    return {ok, std::to_string(lines) + " report lines, " + std::to_string(ta.size()) +
                    " bytes, exit codes " + std::to_string(a) + "/" + std::to_string(b) +
                    (ta == tb ? ", identical" : ", DIFFERENT")};
}

}  // namespace

int main() {
    const std::vector<std::pair<const char*, std::function<Outcome()>>> criteria{
        {"description golden facts", criterion1},
        {"code golden facts", criterion2},
        {"preferences golden fact", criterion3},
        {"rules on fact fixtures", criterion4},
        {"mutation round trip", criterion5},
        {"metric arithmetic", criterion6},
        {"oracle equivalence", criterion7},
        {"synthetic corpus scale", criterion8},
        {"worker-count determinism", criterion9},
    };
    int failed = 0;
    int n = 0;
    for (const auto& [name, fn] : criteria) {
        ++n;
        Outcome o;
        try {
            o = fn();
        } catch (const std::exception& e) {
            o = {false, std::string("exception: ") + e.what()};
        }
        failed += !o.pass;
        std::cout << "criterion " << n << " " << (o.pass ? "PASS" : "FAIL") << " " << name << ": "
                  << o.detail << "\n";
    }
    std::cout << (failed ? "acceptance: " + std::to_string(failed) + " failed" : std::string("acceptance: all passed"))
              << "\n";
    return failed ? 1 : 0;
}
