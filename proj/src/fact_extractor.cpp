#include "smartperm/fact_extractor.hpp"

#include <algorithm>
#include <set>

namespace smartperm {

namespace {

struct Counters {
    int rule = 0;
    int trigger = 0;
    int condition = 0;
    int action = 0;
};

void emit_component(FactSet& fs, const std::string& src, const std::string& app,
                    const std::string& rule, Relation component, Relation composition,
                    const std::string& id, const RuleComponent& c) {
    fs.add(component, {src, rule, id});
    fs.add(Relation::DeviceCapability, {src, id, c.capability});
    fs.add(Relation::AttributeCommand, {src, id, c.attribute_command});
    fs.add(Relation::Value, {src, id, c.value});
    fs.add(composition, {src, app, rule, id, c.capability, c.attribute_command, c.value});
}

enum class Order { ActionsFirst, TriggerFirst };

FactSet emit_rules(const std::vector<AnnotatedRule>& rules, const std::string& src,
                   const std::string& app, Order order) {
    FactSet fs(app);
    fs.add(Relation::Application, {src, app});
    Counters n;
    for (const auto& r : rules) {
        std::string rule = "rule" + std::to_string(++n.rule);
        fs.add(Relation::PermissionRule, {src, app, rule});
        auto triggers = [&] {
            if (r.trigger)
                emit_component(fs, src, app, rule, Relation::Trigger, Relation::TriggerComposition,
                               "trigger" + std::to_string(++n.trigger), *r.trigger);
        };
        auto conditions = [&] {
            for (const auto& c : r.conditions)
                emit_component(fs, src, app, rule, Relation::Condition,
                               Relation::ConditionComposition,
                               "condition" + std::to_string(++n.condition), c);
        };
        auto actions = [&] {
            for (const auto& c : r.actions)
                emit_component(fs, src, app, rule, Relation::Action, Relation::ActionComposition,
                               "action" + std::to_string(++n.action), c);
        };
        if (order == Order::ActionsFirst) {
            actions();
            conditions();
            triggers();
        } else {
            triggers();
            conditions();
            actions();
        }
    }
    return fs;
}

bool dual_role(const CapabilityKB& kb, const std::string& cap, const std::string& word) {
    if (kb.has_capability(cap) &&
        (kb.attribute_command_of(cap, word) || kb.value_of_attribute_of(cap, word)))
        return kb.attribute_command_of(cap, word) && kb.value_of_attribute_of(cap, word);
    return kb.is_attribute_command(word) && kb.is_value(word);
}

class CodeWalker {
public:
    CodeWalker(const SmartAppAst& ast, const CapabilityKB& kb, const ExtractOptions& opts)
        : ast_(ast), kb_(kb), opts_(opts) {}

    AnnotatedRule rule_for(const Subscription& sub) {
        AnnotatedRule r;
        trigger_cap_ = capability_of(sub.device_id);
        trigger_attr_ = sub.attribute;
        r.trigger = code_component(kb_, trigger_cap_, sub.attribute, sub.value);
        if (const auto* m = ast_.find_method(sub.handler)) {
            std::vector<std::string> stack{m->name};
            walk(m->body, 0, stack, r);
        }
        return r;
    }

private:
    std::string capability_of(const std::string& device) const {
        auto cap = resolve_device_capability(ast_, device);
        return cap ? *cap : std::string(kNa);
    }

    void walk(const std::vector<Stmt>& stmts, int depth, std::vector<std::string>& stack,
              AnnotatedRule& r) {
        for (const auto& s : stmts) {
            switch (s.kind) {
            case StmtKind::Condition:
                for (const auto& c : s.comparisons) {
                    if (c.device_id == "evt")
                        r.conditions.push_back(
                            code_component(kb_, trigger_cap_, trigger_attr_, c.value));
                    else
                        r.conditions.push_back(
                            code_component(kb_, capability_of(c.device_id), c.attribute, c.value));
                }
                walk(s.body, depth, stack, r);
                walk(s.else_body, depth, stack, r);
                break;
            case StmtKind::DeviceCall: {
                RuleComponent c;
                c.capability = capability_of(s.device_id);
                c.attribute_command = s.name;
                c.value = dual_role(kb_, c.capability, s.name) ? s.name : std::string(kNa);
                r.actions.push_back(std::move(c));
                break;
            }
            case StmtKind::DeviceProperty: {
                RuleComponent c;
                c.capability = capability_of(s.device_id);
                c.attribute_command = s.name;
                r.actions.push_back(std::move(c));
                break;
            }
            case StmtKind::MethodCall: {
                if (depth >= opts_.call_depth)
                    break;
                if (std::find(stack.begin(), stack.end(), s.name) != stack.end())
                    break;
                if (const auto* m = ast_.find_method(s.name)) {
                    stack.push_back(m->name);
                    walk(m->body, depth + 1, stack, r);
                    stack.pop_back();
                }
                break;
            }
            case StmtKind::Subscribe:
            case StmtKind::Other:
                walk(s.body, depth, stack, r);
                walk(s.else_body, depth, stack, r);
                break;
            }
        }
    }

    const SmartAppAst& ast_;
    const CapabilityKB& kb_;
    const ExtractOptions& opts_;
    std::string trigger_cap_;
    std::string trigger_attr_;
};

}  // namespace

RuleComponent code_component(const CapabilityKB& kb, const std::string& capability,
                             const std::string& attribute, const std::optional<std::string>& value) {
    RuleComponent c;
    c.capability = capability.empty() ? std::string(kNa) : capability;
    if (value && !value->empty()) {
        if (dual_role(kb, c.capability, *value)) {
            c.attribute_command = *value;
            c.value = *value;
        } else {
            c.attribute_command = attribute.empty() ? std::string(kNa) : attribute;
            c.value = *value;
        }
    } else {
        c.attribute_command = attribute.empty() ? std::string(kNa) : attribute;
        c.value = !attribute.empty() && dual_role(kb, c.capability, attribute) ? attribute
                                                                               : std::string(kNa);
    }
    return c;
}

FactSet facts_from_description(const std::vector<AnnotatedRule>& rules, const std::string& app) {
    return emit_rules(rules, std::string(kDesc), app, Order::ActionsFirst);
}

FactSet facts_from_preferences(const SmartAppAst& ast, const std::string& app) {
    FactSet fs(app);
    for (const auto& in : ast.inputs)
        fs.add(Relation::RequestedCapability, {app, in.capability});
    return fs;
}

std::vector<AnnotatedRule> rules_from_code(const SmartAppAst& ast, const CapabilityKB& kb,
                                           const ExtractOptions& opts) {
    std::vector<AnnotatedRule> rules;
    CodeWalker w(ast, kb, opts);
    for (const auto& sub : extract_subscriptions(ast))
        rules.push_back(w.rule_for(sub));
    return rules;
}

FactSet facts_from_code(const SmartAppAst& ast, const CapabilityKB& kb, const std::string& app,
                        const ExtractOptions& opts) {
    return emit_rules(rules_from_code(ast, kb, opts), std::string(kCode), app, Order::TriggerFirst);
}

}  // namespace smartperm
