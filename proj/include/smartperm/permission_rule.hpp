#pragma once

#include <optional>
#include <string>
#include <tuple>
#include <vector>

#include "smartperm/capability_kb.hpp"

namespace smartperm {

// (capability, attribute-or-command, value); unfilled slots hold "na".
struct RuleComponent {
    std::string capability{kNa};
    std::string attribute_command{kNa};
    std::string value{kNa};

    bool all_na() const {
        return capability == kNa && attribute_command == kNa && value == kNa;
    }
    auto tie() const { return std::tie(capability, attribute_command, value); }
    bool operator==(const RuleComponent& o) const { return tie() == o.tie(); }
    bool operator<(const RuleComponent& o) const { return tie() < o.tie(); }
};

struct AnnotatedRule {
    std::optional<RuleComponent> trigger;
    std::vector<RuleComponent> conditions;
    std::vector<RuleComponent> actions;

    bool empty() const { return !trigger && conditions.empty() && actions.empty(); }
    bool operator==(const AnnotatedRule& o) const {
        return trigger == o.trigger && conditions == o.conditions && actions == o.actions;
    }
};

std::string to_string(const RuleComponent& c);

}  // namespace smartperm
