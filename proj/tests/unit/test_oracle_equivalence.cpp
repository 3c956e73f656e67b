#include <doctest.h>

#include <algorithm>
#include <random>
#include <set>

#include "brute_force_oracle.hpp"
#include "random_facts.hpp"
#include "smartperm/engine.hpp"

using namespace smartperm;
using namespace smartperm::testing;

namespace {

using Key = std::tuple<int, std::string, std::optional<std::string>, std::optional<std::string>,
                       std::string, std::optional<std::string>>;

std::set<Key> keys(const std::vector<Finding>& v) {
    std::set<Key> out;
    for (const auto& f : v)
        out.insert({f.case_id, f.app, f.rule_id, f.component_id, f.capability, f.resource});
    return out;
}

}  // namespace

TEST_CASE("engine agrees with the brute-force oracle on random fact bases") {
    std::mt19937_64 rng(20240601);
    std::size_t nonempty = 0;
    for (int i = 0; i < 1000; ++i) {
        auto kb = random_kb(rng);
        auto fs = random_facts(rng, 200);
        REQUIRE(fs.size() <= 200);
        EngineOptions opts;
        opts.case3_require_owned = (i % 4) != 3;
        opts.case3_trigger_action = (i % 5) != 1;
        auto got = run_checks(kb, fs, opts);
        auto want = brute_force_oracle(kb, fs, opts);
        CHECK(keys(got).size() == got.size());
        CHECK(std::is_sorted(got.begin(), got.end(), finding_less));
        REQUIRE_MESSAGE(keys(got) == keys(want), "iteration " << i << "\n" << serialize_facts(fs));
        nonempty += !got.empty();
    }
    // the generator has to exercise the rules, not just produce empty reports
    CHECK(nonempty > 500);
}

TEST_CASE("per-case functions match their oracle counterparts") {
    std::mt19937_64 rng(99);
    for (int i = 0; i < 300; ++i) {
        auto kb = random_kb(rng);
        auto fs = random_facts(rng, 120);
        CHECK(keys(check_case1(kb, fs)) == keys(oracle_case1(kb, fs)));
        CHECK(keys(check_case2(fs)) == keys(oracle_case2(fs)));
        CHECK(keys(check_case3(fs, {}, &kb)) == keys(oracle_case3(kb, fs)));
    }
}

TEST_CASE("finding sets do not depend on fact order") {
    std::mt19937_64 rng(5);
    for (int i = 0; i < 100; ++i) {
        auto kb = random_kb(rng);
        auto fs = random_facts(rng, 150);
        auto facts = fs.facts();
        std::shuffle(facts.begin(), facts.end(), rng);
        FactSet shuffled(fs.app());
        for (auto& f : facts)
            shuffled.add(f);
        CHECK(keys(run_checks(kb, fs)) == keys(run_checks(kb, shuffled)));
    }
}
