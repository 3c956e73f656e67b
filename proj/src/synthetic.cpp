#include "smartperm/synthetic.hpp"

#include <array>
#include <cstdio>
#include <random>

namespace smartperm {

namespace {

struct Template {
    const char* sentence;
    const char* trigger_device;
    const char* trigger_capability;
    const char* event;
    const char* action_device;
    const char* action_capability;
    const char* command;
    const char* condition;  // switch value tested on the action device, or nullptr
};

constexpr std::array<Template, 6> kTemplates = {{
    {"Turn the lights on when motion is active.", "motion", "motionSensor", "motion.active",
     "lights", "switch", "on", nullptr},
    {"Unlock the door when presence is present.", "person", "presenceSensor", "presence.present",
     "door", "lock", "unlock", nullptr},
    {"Turn the switch off when the contact is open.", "contact", "contactSensor", "contact.open",
     "outlet", "switch", "off", nullptr},
    {"Sound the alarm siren when water is wet.", "leak", "waterSensor", "water.wet", "siren",
     "alarm", "siren", nullptr},
    {"Turn the lights on when motion is active if the switch is off.", "hall", "motionSensor",
     "motion.active", "lamp", "switch", "on", "off"},
    {"Lock the lock when the button is pushed.", "button", "button", "button.pushed", "latch",
     "lock", "lock", nullptr},
}};

}  // namespace

std::string synthetic_benign_app(const std::string& name, int rules, std::uint64_t seed) {
    std::mt19937_64 rng(seed);
    std::vector<const Template*> picked;
    for (int i = 0; i < rules; ++i)
        picked.push_back(&kTemplates[rng() % kTemplates.size()]);

    std::string desc;
    for (const auto* t : picked) {
        if (!desc.empty())
            desc += ' ';
        desc += t->sentence;
    }
    std::string s;
    s += "definition(\n";
    s += "    name: \"" + name + "\",\n";
    s += "    namespace: \"smartperm.synthetic\",\n";
    s += "    author: \"smartperm\",\n";
    s += "    description: \"" + desc + "\",\n";
    s += "    category: \"Convenience\")\n\n";

    s += "preferences {\n    section(\"Devices\") {\n";
    for (int i = 0; i < rules; ++i) {
        const auto* t = picked[i];
        auto n = std::to_string(i + 1);
        s += "        input \"" + std::string(t->trigger_device) + n + "\", \"capability." +
             t->trigger_capability + "\", title: \"Trigger " + n + "\"\n";
        s += "        input \"" + std::string(t->action_device) + n + "\", \"capability." +
             t->action_capability + "\", title: \"Device " + n + "\", multiple: true\n";
    }
    s += "    }\n}\n\n";

    s += "def installed() {\n    log.debug \"Installed with settings: ${settings}\"\n"
         "    initialize()\n}\n\n";
    s += "def updated() {\n    unsubscribe()\n    initialize()\n}\n\n";
    s += "def initialize() {\n";
    for (int i = 0; i < rules; ++i) {
        const auto* t = picked[i];
        auto n = std::to_string(i + 1);
        s += "    subscribe(" + std::string(t->trigger_device) + n + ", \"" + t->event + "\", " +
             t->trigger_device + "Handler" + n + ")\n";
    }
    s += "}\n";

    for (int i = 0; i < rules; ++i) {
        const auto* t = picked[i];
        auto n = std::to_string(i + 1);
        std::string dev = std::string(t->action_device) + n;
        s += "\ndef " + std::string(t->trigger_device) + "Handler" + n + "(evt) {\n";
        s += "    log.debug \"" + std::string(t->trigger_device) + " event: ${evt.value}\"\n";
        if (t->condition) {
            s += "    if (" + dev + ".currentValue(\"switch\") == \"" + t->condition + "\") {\n";
            s += "        " + dev + "." + t->command + "()\n    }\n";
        } else {
            s += "    " + dev + "." + t->command + "()\n";
        }
        s += "}\n";
    }
    return s;
}

std::vector<SyntheticApp> generate_corpus(const CapabilityKB& kb, const Lexicon& lex,
                                          const SyntheticOptions& opts) {
    std::vector<SyntheticApp> out;
    std::mt19937_64 seeds(opts.seed);
    for (std::size_t i = 0; i < opts.count; ++i) {
        SyntheticApp a;
        char buf[32];
        std::snprintf(buf, sizeof buf, "%04zu", i + 1);
        a.file = std::string("app_") + buf + ".groovy";
        a.name = std::string("Synthetic App ") + buf;
        a.rules = 1 << (i % static_cast<std::size_t>(opts.max_log2_rules + 1));
        std::uint64_t app_seed = seeds();
        std::uint64_t mutant_seed = seeds();
        a.source = synthetic_benign_app(a.name, a.rules, app_seed);
        if (opts.mutant_every > 0 && i % static_cast<std::size_t>(opts.mutant_every) ==
                                         static_cast<std::size_t>(opts.mutant_every - 1)) {
            int first = static_cast<int>((i / opts.mutant_every) % 3) + 1;
            for (int k = 0; k < 3 && !a.mutant; ++k) {
                try {
                    a.mutant = inject((first - 1 + k) % 3 + 1, a.source, kb, lex, mutant_seed);
                } catch (const MutationError&) {
                }
            }
            if (a.mutant)
                a.source = a.mutant->mutated_source;
        }
        out.push_back(std::move(a));
    }
    return out;
}

}  // namespace smartperm
