#pragma once

#include <optional>
#include <set>
#include <string>
#include <tuple>
#include <vector>

#include "smartperm/capability_kb.hpp"
#include "smartperm/facts.hpp"

namespace smartperm {

struct Finding {
    int case_id = 0;
    std::string app;
    std::optional<std::string> rule_id;
    std::optional<std::string> component_id;
    std::string capability;
    std::optional<std::string> resource;
    std::string detail;

    // Everything except detail.
    auto identity() const {
        return std::tie(case_id, app, rule_id, component_id, capability, resource);
    }
    bool same_identity(const Finding& o) const { return identity() == o.identity(); }
    bool operator==(const Finding& o) const {
        return same_identity(o) && detail == o.detail;
    }
};

// Natural order on (app, case, rule, component, capability, resource).
bool finding_less(const Finding& a, const Finding& b);

struct EngineOptions {
    std::set<int> cases{1, 2, 3};
    bool case3_action = true;            // (a) code action absent from the description
    bool case3_trigger_action = true;    // (b) trigger/action pair absent from the description
    bool case3_condition_action = true;  // (c) condition/action pair absent from the description
    // Case 3 covers capabilities used within their own resources. Actions on a
    // resource the capability does not own are left to case 1.
    bool case3_require_owned = true;
};

std::vector<Finding> check_case1(const CapabilityKB& kb, const FactSet& fs);
std::vector<Finding> check_case2(const FactSet& fs);
// kb is only consulted for case3_require_owned; pass nullptr to skip that filter.
std::vector<Finding> check_case3(const FactSet& fs, const EngineOptions& opts = {},
                                 const CapabilityKB* kb = nullptr);

// Runs the enabled cases and returns deduplicated findings in finding_less order.
std::vector<Finding> run_checks(const CapabilityKB& kb, const FactSet& fs,
                                const EngineOptions& opts = {});

// Collapses findings with the same identity, keeping the first occurrence, and sorts.
std::vector<Finding> normalize_findings(std::vector<Finding> findings);

// True when capability cap owns the resource of an (attribute_command, value) pair.
bool owns_component(const CapabilityKB& kb, const std::string& cap, const std::string& attr,
                    const std::string& value);

}  // namespace smartperm
