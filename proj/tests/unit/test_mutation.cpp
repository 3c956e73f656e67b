#include <doctest.h>

#include <algorithm>

#include "smartperm/analysis.hpp"
#include "smartperm/mutation.hpp"
#include "smartperm/synthetic.hpp"
#include "test_data.hpp"

using namespace smartperm;
using smartperm::testing::bundled_kb;
using smartperm::testing::bundled_lexicon;
using smartperm::testing::fixture;

namespace {

std::vector<Finding> findings(const std::string& src) {
    return analyze_app(bundled_kb(), bundled_lexicon(), src).findings;
}

bool detected(const MutantRecord& m) {
    for (const auto& f : findings(m.mutated_source))
        if (f.case_id == m.case_id && f.capability == m.capability &&
            (!m.resource || f.resource == m.resource))
            return true;
    return false;
}

std::string line(const std::string& text, int n) {
    std::size_t pos = 0;
    for (int i = 1; i < n; ++i)
        pos = text.find('\n', pos) + 1;
    return text.substr(pos, text.find('\n', pos) - pos);
}

}  // namespace

TEST_CASE("case 1 at a chosen handler reproduces the siren mutant") {
    auto seed = fixture("big_turn_off.groovy");
    auto m = inject_case1_at(seed, bundled_kb(), "appTouch", "switches", "siren");
    CHECK(m.case_id == 1);
    CHECK(m.capability == "switch");
    CHECK(m.resource == std::optional<std::string>("siren"));
    CHECK(line(m.mutated_source, m.line_begin).find("switches?.siren()") != std::string::npos);
    auto f = findings(m.mutated_source);
    REQUIRE(f.size() == 1);
    CHECK(f[0].case_id == 1);
    CHECK(f[0].resource == std::optional<std::string>("siren"));
    CHECK(m.mutated_source == fixture("big_turn_off_siren.groovy"));
}

TEST_CASE("case 1 rejects owned commands and unknown names") {
    auto seed = fixture("big_turn_off.groovy");
    CHECK_THROWS_AS(inject_case1_at(seed, bundled_kb(), "appTouch", "switches", "on"),
                    MutationError);
    CHECK_THROWS_AS(inject_case1_at(seed, bundled_kb(), "nope", "switches", "siren"),
                    MutationError);
    CHECK_THROWS_AS(inject_case1_at(seed, bundled_kb(), "appTouch", "ghost", "siren"),
                    MutationError);
}

TEST_CASE("case 2 at a chosen capability adds a section") {
    auto seed = fixture("big_turn_off.groovy");
    auto m = inject_case2_at(seed, bundled_kb(), bundled_lexicon(), "accelerationSensor");
    CHECK(m.mutated_source.find("input \"sensor\", \"capability.accelerationSensor\"") !=
          std::string::npos);
    CHECK(line(m.mutated_source, m.line_begin).find("section(\"\")") != std::string::npos);
    auto f = findings(m.mutated_source);
    REQUIRE(f.size() == 1);
    CHECK(f[0].case_id == 2);
    CHECK(f[0].capability == "accelerationSensor");
    CHECK_THROWS_AS(inject_case2_at(seed, bundled_kb(), bundled_lexicon(), "switch"),
                    MutationError);
    CHECK_THROWS_AS(inject_case2_at("def installed() {}", bundled_kb(), bundled_lexicon(),
                                    "accelerationSensor"),
                    MutationError);
}

TEST_CASE("case 3 at a chosen call swaps the command") {
    auto seed = fixture("big_turn_off.groovy");
    auto m = inject_case3_at(seed, bundled_kb(), bundled_lexicon(), "switches", "off", "on", 1);
    CHECK(m.capability == "switch");
    CHECK(m.resource == std::optional<std::string>("on"));
    CHECK(line(m.mutated_source, m.line_begin).find("switches?.on()") != std::string::npos);
    auto f = findings(m.mutated_source);
    REQUIRE(f.size() == 1);
    CHECK(f[0].case_id == 3);
    CHECK(f[0].resource == std::optional<std::string>("on"));
    CHECK_THROWS_AS(inject_case3_at(seed, bundled_kb(), bundled_lexicon(), "switches", "off",
                                    "on", 2),
                    MutationError);
    CHECK_THROWS_AS(inject_case3_at(seed, bundled_kb(), bundled_lexicon(), "switches", "off",
                                    "siren"),
                    MutationError);
}

TEST_CASE("seeded injections are reproducible and always detected") {
    const auto& kb = bundled_kb();
    const auto& lex = bundled_lexicon();
    std::vector<std::string> seeds{fixture("big_turn_off.groovy"), fixture("motion_light.groovy")};
    for (int r : {1, 2, 4, 8})
        seeds.push_back(synthetic_benign_app("Seed", r, static_cast<std::uint64_t>(r) * 31));
    for (const auto& app : seeds)
        for (int c = 1; c <= 3; ++c)
            for (std::uint64_t s = 0; s < 8; ++s) {
                MutantRecord m;
                try {
                    m = inject(c, app, kb, lex, s);
                } catch (const MutationError&) {
                    continue;
                }
                CHECK(m.case_id == c);
                CHECK(m.seed_source == app);
                CHECK(m.mutated_source != app);
                CHECK(m.line_begin >= 1);
                CHECK(m.line_end >= m.line_begin);
                CHECK_NOTHROW(parse_app(m.mutated_source));
                CHECK_MESSAGE(detected(m), m.note);
                auto again = inject(c, app, kb, lex, s);
                CHECK(again.mutated_source == m.mutated_source);
            }
}

TEST_CASE("benign synthetic apps have no findings") {
    for (int r : {1, 2, 3, 16, 64})
        for (std::uint64_t s : {1u, 2u, 3u}) {
            auto app = synthetic_benign_app("Benign", r, s);
            CHECK_MESSAGE(findings(app).empty(), app);
        }
}

TEST_CASE("unknown case") {
    CHECK_THROWS_AS(inject(4, fixture("big_turn_off.groovy"), bundled_kb(), bundled_lexicon(), 0),
                    MutationError);
}

TEST_CASE("case 2 candidates exclude described and requested capabilities") {
    auto c = case2_candidates(fixture("motion_light.groovy"), bundled_kb(), bundled_lexicon());
    CHECK(std::is_sorted(c.begin(), c.end()));
    CHECK(std::find(c.begin(), c.end(), "switch") == c.end());
    CHECK(std::find(c.begin(), c.end(), "motionSensor") == c.end());
    CHECK(std::find(c.begin(), c.end(), "accelerationSensor") != c.end());
}
