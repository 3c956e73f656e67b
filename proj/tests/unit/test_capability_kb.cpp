#include <doctest.h>

#include <algorithm>
#include <map>
#include <set>
#include <sstream>

#include "smartperm/capability_kb.hpp"
#include "test_data.hpp"

using namespace smartperm;
using smartperm::testing::bundled_kb;
using smartperm::testing::data_path;
using smartperm::testing::read_text;

TEST_CASE("lock entries load with both commands") {
    auto kb = parse_kb("lock -> lock\nlock -> unlock\n");
    CHECK(kb.attribute_command_of("lock", "lock"));
    CHECK(kb.attribute_command_of("lock", "unlock"));
    CHECK(kb.size() == 1);
}

TEST_CASE("empty file gives an empty KB") {
    auto kb = parse_kb("");
    CHECK(kb.empty());
    CHECK(parse_kb("# only a comment\n\n").empty());
}

TEST_CASE("bundled KB covers the capabilities of the grammar snippet") {
    const auto& kb = bundled_kb();
    CHECK(kb.size() >= 40);
    for (const char* c :
         {"accelerationSensor", "alarm", "audioNotification", "battery", "beacon", "bulb",
          "button", "carbonDioxideMeasurement", "colorControl", "colorTemperature",
          "configuration", "consumable", "contactSensor", "doorControl", "energyMeter",
          "estimatedTimeOfArrival", "garageDoorControl", "holdableButton",
          "illuminanceMeasurement", "imageCapture", "indicator", "infraredLevel", "light",
          "lockOnly", "lock", "mediaController", "momentary", "motionSensor", "musicPlayer",
          "notification", "outlet", "pHMeasurement", "polling", "powerMeter", "powerSource",
          "presenceSensor", "refresh"})
        CHECK_MESSAGE(kb.has_capability(c), c);
    CHECK(kb.attribute_command_of("light", "on"));
    CHECK(kb.attribute_command_of("light", "off"));
    CHECK(kb.attribute_command_of("lockOnly", "lock"));
    CHECK(kb.attribute_command_of("powerSource", "powerSource"));
    CHECK(kb.attribute_command_of("presenceSensor", "presence"));
}

TEST_CASE("attribute_command_of") {
    const auto& kb = bundled_kb();
    CHECK(kb.attribute_command_of("lock", "unlock"));
    CHECK_FALSE(kb.attribute_command_of("accelerationSensor", "on"));
    CHECK_FALSE(kb.attribute_command_of("unknownCap", "anything"));
}

TEST_CASE("value_of_attribute_of") {
    const auto& kb = bundled_kb();
    CHECK(kb.value_of_attribute_of("accelerationSensor", "active"));
    CHECK_FALSE(kb.value_of_attribute_of("accelerationSensor", "on"));
    auto bare = parse_kb("actuator\n");
    CHECK_FALSE(bare.value_of_attribute_of("actuator", "active"));
}

TEST_CASE("owners_of_resource") {
    const auto& kb = bundled_kb();
    const auto& on = kb.owners_of_resource("on");
    CHECK(std::find(on.begin(), on.end(), "switch") != on.end());
    CHECK(std::is_sorted(on.begin(), on.end()));
    CHECK(kb.owners_of_resource("noSuchName").empty());
}

// Independent reading of the KB text: every (capability, resource) pair the
// file states, with values pulled in through their attribute lines.
static std::map<std::string, std::set<std::string>> scan_owners(const std::string& text) {
    std::map<std::string, std::set<std::string>> attrs_of;  // cap -> attrs
    std::map<std::string, std::set<std::string>> values_of;
    std::istringstream in(text);
    std::string line;
    while (std::getline(in, line)) {
        auto hash = line.find('#');
        if (hash != std::string::npos)
            line.resize(hash);
        auto strip = [](std::string s) {
            while (!s.empty() && std::isspace(static_cast<unsigned char>(s.back())))
                s.pop_back();
            while (!s.empty() && std::isspace(static_cast<unsigned char>(s.front())))
                s.erase(s.begin());
            return s;
        };
        if (auto p = line.find("->"); p != std::string::npos) {
            auto rhs = strip(line.substr(p + 2));
            if (rhs.size() > 2 && rhs.substr(rhs.size() - 2) == "()")
                rhs.resize(rhs.size() - 2);
            attrs_of[strip(line.substr(0, p))].insert(rhs);
        } else if (auto q = line.find("=>"); q != std::string::npos) {
            values_of[strip(line.substr(0, q))].insert(strip(line.substr(q + 2)));
        }
    }
    std::map<std::string, std::set<std::string>> owners;
    for (const auto& [cap, attrs] : attrs_of)
        for (const auto& a : attrs) {
            owners[a].insert(cap);
            for (const auto& v : values_of[a])
                owners[v].insert(cap);
        }
    return owners;
}

TEST_CASE("owners_of_resource agrees with an exhaustive scan of the KB file") {
    auto text = read_text(data_path("capabilities.kb"));
    auto expected = scan_owners(text);
    const auto& kb = bundled_kb();
    REQUIRE(expected.count("lock"));
    for (const auto& [res, caps] : expected) {
        const auto& got = kb.owners_of_resource(res);
        CHECK_MESSAGE(std::set<std::string>(got.begin(), got.end()) == caps, res);
    }
    CHECK(!kb.owners_of_resource("lock").empty());
}

TEST_CASE("invariants: attribute ownership implies owner membership") {
    const auto& kb = bundled_kb();
    for (const auto& cap : kb.capabilities()) {
        CHECK(cap != kNa);
        for (const auto& a : kb.attribute_commands(cap)) {
            CHECK(a != kNa);
            const auto& owners = kb.owners_of_resource(a);
            CHECK(std::find(owners.begin(), owners.end(), cap) != owners.end());
            for (const auto& v : kb.values(a))
                CHECK(v != kNa);
        }
    }
}

TEST_CASE("reloading is deterministic") {
    CHECK(load_kb(data_path("capabilities.kb")) == load_kb(data_path("capabilities.kb")));
}

TEST_CASE("load errors") {
    CHECK_THROWS_AS(parse_kb("lock -> \n"), KbError);
    CHECK_THROWS_AS(parse_kb("lock -> unlock\nlock -> unlock\n"), KbError);
    CHECK_THROWS_AS(parse_kb("lock -> na\n"), KbError);
    CHECK_THROWS_AS(parse_kb("na\n"), KbError);
    CHECK_THROWS_AS(parse_kb("ghost => boo\n"), KbError);
    try {
        parse_kb("lock -> lock\nthis is not a mapping\n");
        FAIL("expected a parse error");
    } catch (const KbError& e) {
        CHECK(e.line() == 2);
    }
    CHECK_THROWS_AS(load_kb("/nonexistent/capabilities.kb"), Error);
}

TEST_CASE("commands are marked separately from attributes") {
    auto kb = parse_kb("alarm -> alarm\nalarm -> siren()\nalarm => siren\n");
    CHECK(kb.is_command("alarm", "siren"));
    CHECK_FALSE(kb.is_command("alarm", "alarm"));
    CHECK(kb.attribute_command_of("alarm", "siren"));
    CHECK(kb.value_of_attribute_of("alarm", "siren"));
}
