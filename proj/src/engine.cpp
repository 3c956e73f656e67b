#include "smartperm/engine.hpp"

#include <algorithm>
#include <map>

#include "text_util.hpp"

namespace smartperm {

namespace {

using Tuple = std::tuple<std::string, std::string, std::string>;

struct Comp {
    std::string app, rule, id;
    Tuple t;
    const std::string& cap() const { return std::get<0>(t); }
    const std::string& attr() const { return std::get<1>(t); }
    const std::string& value() const { return std::get<2>(t); }
};

Comp comp_of(const Fact& f) {
    const auto& a = f.args;
    return Comp{a[1], a[2], a[3], Tuple{a[4], a[5], a[6]}};
}

bool any_na(const Tuple& t) {
    return std::get<0>(t) == kNa || std::get<1>(t) == kNa || std::get<2>(t) == kNa;
}

std::string show(const Tuple& t) {
    return "(" + std::get<0>(t) + ", " + std::get<1>(t) + ", " + std::get<2>(t) + ")";
}

std::optional<std::string> resource_of(const Comp& c) {
    if (c.attr() != kNa)
        return c.attr();
    if (c.value() != kNa)
        return c.value();
    return std::nullopt;
}

bool less_opt(const std::optional<std::string>& a, const std::optional<std::string>& b) {
    if (!a || !b)
        return !a && b;
    if (natural_less(*a, *b))
        return true;
    if (natural_less(*b, *a))
        return false;
    return *a < *b;
}

bool less_str(const std::string& a, const std::string& b) {
    return less_opt(std::optional<std::string>(a), std::optional<std::string>(b));
}

// Per-app description evidence and code rules, indexed once per FactSet.
struct Index {
    std::set<std::pair<std::string, Tuple>> desc_actions;
    std::set<std::pair<std::string, std::string>> desc_action_caps;
    std::set<std::tuple<std::string, Tuple, Tuple>> desc_trigger_action;
    std::set<std::tuple<std::string, Tuple, Tuple>> desc_condition_action;
    // (app, rule) -> components, code source only
    struct Rule {
        std::vector<Comp> triggers, conditions, actions;
    };
    std::map<std::pair<std::string, std::string>, Rule> code_rules;

    explicit Index(const FactSet& fs) {
        std::map<std::pair<std::string, std::string>, Rule> desc_rules;
        for (const auto& f : fs.facts()) {
            if (!is_composition(f.rel))
                continue;
            const auto& src = f.args[0];
            bool desc = src == kDesc;
            if (!desc && src != kCode)
                continue;
            Comp c = comp_of(f);
            auto& rule = (desc ? desc_rules : code_rules)[{c.app, c.rule}];
            if (f.rel == Relation::TriggerComposition)
                rule.triggers.push_back(c);
            else if (f.rel == Relation::ConditionComposition)
                rule.conditions.push_back(c);
            else {
                if (desc) {
                    desc_actions.insert({c.app, c.t});
                    desc_action_caps.insert({c.app, c.cap()});
                }
                rule.actions.push_back(c);
            }
        }
        for (const auto& [key, rule] : desc_rules)
            for (const auto& a : rule.actions) {
                for (const auto& t : rule.triggers)
                    desc_trigger_action.insert({key.first, t.t, a.t});
                for (const auto& c : rule.conditions)
                    desc_condition_action.insert({key.first, c.t, a.t});
            }
    }
};

Finding make(int case_id, const Comp& c, std::optional<std::string> resource, std::string detail) {
    Finding f;
    f.case_id = case_id;
    f.app = c.app;
    f.rule_id = c.rule;
    f.component_id = c.id;
    f.capability = c.cap();
    f.resource = std::move(resource);
    f.detail = std::move(detail);
    return f;
}

bool has_foreign_owner(const CapabilityKB& kb, const std::string& cap, const std::string& res) {
    for (const auto& o : kb.owners_of_resource(res))
        if (o != cap)
            return true;
    return false;
}

bool identity_less(const Finding& a, const Finding& b) {
    if (a.app != b.app)
        return less_str(a.app, b.app);
    if (a.case_id != b.case_id)
        return a.case_id < b.case_id;
    if (a.rule_id != b.rule_id)
        return less_opt(a.rule_id, b.rule_id);
    if (a.component_id != b.component_id)
        return less_opt(a.component_id, b.component_id);
    if (a.capability != b.capability)
        return less_str(a.capability, b.capability);
    return a.resource != b.resource && less_opt(a.resource, b.resource);
}

}  // namespace

bool finding_less(const Finding& a, const Finding& b) {
    if (identity_less(a, b))
        return true;
    if (identity_less(b, a))
        return false;
    return a.detail < b.detail;
}

bool owns_component(const CapabilityKB& kb, const std::string& cap, const std::string& attr,
                    const std::string& value) {
    if (attr != kNa)
        return kb.attribute_command_of(cap, attr);
    if (value != kNa)
        return kb.attribute_command_of(cap, value) || kb.value_of_attribute_of(cap, value);
    return true;
}

std::vector<Finding> check_case1(const CapabilityKB& kb, const FactSet& fs) {
    std::vector<Finding> out;
    for (const auto& f : fs.facts()) {
        if (!is_composition(f.rel) || f.args[0] != kCode)
            continue;
        Comp c = comp_of(f);
        if (c.cap() == kNa)
            continue;
        const auto& A = c.attr();
        const auto& V = c.value();
        if (A != kNa && !kb.attribute_command_of(c.cap(), A) && has_foreign_owner(kb, c.cap(), A))
            out.push_back(make(1, c, A,
                               "'" + A + "' is not an attribute or command of " + c.cap() +
                                   " but belongs to another capability"));
        if (V != kNa && !kb.attribute_command_of(c.cap(), V) &&
            !kb.value_of_attribute_of(c.cap(), V) && has_foreign_owner(kb, c.cap(), V))
            out.push_back(make(1, c, V,
                               "'" + V + "' is not a value of any attribute of " + c.cap() +
                                   " but belongs to another capability"));
    }
    return normalize_findings(std::move(out));
}

std::vector<Finding> check_case2(const FactSet& fs) {
    std::set<std::string> described;
    for (const auto& f : fs.facts())
        if (f.rel == Relation::DeviceCapability && f.args[0] == kDesc)
            described.insert(f.args[2]);
    std::vector<Finding> out;
    for (const auto& f : fs.facts()) {
        if (f.rel != Relation::RequestedCapability)
            continue;
        const auto& cap = f.args[1];
        if (cap == kNa || described.count(cap))
            continue;
        Finding x;
        x.case_id = 2;
        x.app = f.args[0];
        x.capability = cap;
        x.detail = "capability " + cap + " is requested but never mentioned in the description";
        out.push_back(std::move(x));
    }
    return normalize_findings(std::move(out));
}

std::vector<Finding> check_case3(const FactSet& fs, const EngineOptions& opts,
                                 const CapabilityKB* kb) {
    Index ix(fs);
    std::vector<Finding> out;
    auto eligible = [&](const Comp& a) {
        if (a.cap() == kNa)
            return false;
        return !(kb && opts.case3_require_owned && !owns_component(*kb, a.cap(), a.attr(), a.value()));
    };
    // Emission order puts (a) before (b) before (c) so their details win on collisions.
    if (opts.case3_action)
        for (const auto& [key, rule] : ix.code_rules)
            for (const auto& a : rule.actions) {
                if (!eligible(a))
                    continue;
                if (a.attr() == kNa && a.value() == kNa && ix.desc_action_caps.count({a.app, a.cap()}))
                    continue;
                if (ix.desc_actions.count({a.app, a.t}))
                    continue;
                out.push_back(make(3, a, resource_of(a),
                                   "code action " + show(a.t) + " is not in the description"));
            }
    auto pairs = [&](bool triggers, const auto& desc_pairs, const char* what) {
        for (const auto& [key, rule] : ix.code_rules)
            for (const auto& lhs : triggers ? rule.triggers : rule.conditions) {
                if (any_na(lhs.t))
                    continue;
                for (const auto& a : rule.actions) {
                    if (!eligible(a) || desc_pairs.count({a.app, lhs.t, a.t}))
                        continue;
                    out.push_back(make(3, a, resource_of(a),
                                       std::string(what) + " " + show(lhs.t) + " with action " +
                                           show(a.t) + " is not in the description"));
                }
            }
    };
    if (opts.case3_trigger_action)
        pairs(true, ix.desc_trigger_action, "trigger");
    if (opts.case3_condition_action)
        pairs(false, ix.desc_condition_action, "condition");
    return normalize_findings(std::move(out));
}

std::vector<Finding> run_checks(const CapabilityKB& kb, const FactSet& fs,
                                const EngineOptions& opts) {
    std::vector<Finding> all;
    auto take = [&](std::vector<Finding> v) {
        all.insert(all.end(), std::make_move_iterator(v.begin()), std::make_move_iterator(v.end()));
    };
    if (opts.cases.count(1))
        take(check_case1(kb, fs));
    if (opts.cases.count(2))
        take(check_case2(fs));
    if (opts.cases.count(3))
        take(check_case3(fs, opts, &kb));
    return normalize_findings(std::move(all));
}

std::vector<Finding> normalize_findings(std::vector<Finding> findings) {
    std::vector<Finding> kept;
    std::set<std::tuple<int, std::string, std::optional<std::string>, std::optional<std::string>,
                        std::string, std::optional<std::string>>>
        seen;
    for (auto& f : findings)
        if (seen.insert({f.case_id, f.app, f.rule_id, f.component_id, f.capability, f.resource})
                .second)
            kept.push_back(std::move(f));
    std::stable_sort(kept.begin(), kept.end(), identity_less);
    return kept;
}

}  // namespace smartperm
