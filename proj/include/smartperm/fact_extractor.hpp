#pragma once

#include <string>
#include <vector>

#include "smartperm/capability_kb.hpp"
#include "smartperm/facts.hpp"
#include "smartperm/permission_rule.hpp"
#include "smartperm/smartapp.hpp"

namespace smartperm {

struct ExtractOptions {
    // How many helper-call levels below a handler are followed.
    int call_depth = 3;
};

FactSet facts_from_description(const std::vector<AnnotatedRule>& rules, const std::string& app);
FactSet facts_from_preferences(const SmartAppAst& ast, const std::string& app);
FactSet facts_from_code(const SmartAppAst& ast, const CapabilityKB& kb, const std::string& app,
                        const ExtractOptions& opts = {});

// Permission rules recovered from code, one per subscription, before they are
// numbered into facts.
std::vector<AnnotatedRule> rules_from_code(const SmartAppAst& ast, const CapabilityKB& kb,
                                           const ExtractOptions& opts = {});

// Slot filling for a (capability, attribute, optional value) observed in code.
// A word that is both an attribute/command and a value fills both slots.
RuleComponent code_component(const CapabilityKB& kb, const std::string& capability,
                             const std::string& attribute, const std::optional<std::string>& value);

}  // namespace smartperm
