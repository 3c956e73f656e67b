#pragma once

#include <map>
#include <set>
#include <string>
#include <string_view>
#include <vector>

#include "smartperm/capability_kb.hpp"

namespace smartperm {

enum class EntityKind { Capability, AttributeCommand, Value };

const char* to_string(EntityKind k);

struct LexEntry {
    EntityKind kind;
    std::string canonical;
    bool operator==(const LexEntry& o) const { return kind == o.kind && canonical == o.canonical; }
};

// Surface words tagged with permission-model entities. Immutable after load.
struct Lexicon {
    std::set<std::string> trigger_indicators{"when", "whenever", "case"};
    std::set<std::string> condition_indicators;
    std::set<std::string> rule_splitters;
    std::map<std::string, std::vector<LexEntry>> entity_map;  // entries in file order

    const std::vector<LexEntry>* lookup(std::string_view word) const;
    bool operator==(const Lexicon& o) const {
        return trigger_indicators == o.trigger_indicators &&
               condition_indicators == o.condition_indicators &&
               rule_splitters == o.rule_splitters && entity_map == o.entity_map;
    }
};

// Line format: `word : kind : canonical`, or a directive `@trigger w...`,
// `@condition w...`, `@split w...`. `#` starts a comment.
Lexicon parse_lexicon(std::string_view text, const CapabilityKB& kb);
Lexicon load_lexicon(const std::string& path, const CapabilityKB& kb);

}  // namespace smartperm
