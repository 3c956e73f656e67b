#include "smartperm/mutation.hpp"

#include <algorithm>
#include <random>
#include <set>

#include "smartperm/annotator.hpp"
#include "smartperm/fact_extractor.hpp"
#include "smartperm/smartapp.hpp"

namespace smartperm {

namespace {

int line_at(const std::string& s, std::size_t offset) {
    return 1 + static_cast<int>(std::count(s.begin(), s.begin() + std::min(offset, s.size()), '\n'));
}

std::string indent_of_line(const std::string& s, std::size_t offset) {
    std::size_t start = s.rfind('\n', offset == 0 ? 0 : offset - 1);
    start = start == std::string::npos ? 0 : start + 1;
    std::size_t end = start;
    while (end < s.size() && (s[end] == ' ' || s[end] == '\t'))
        ++end;
    return s.substr(start, end - start);
}

std::size_t last_non_space_before(const std::string& s, std::size_t offset) {
    std::size_t i = offset;
    while (i > 0 && std::isspace(static_cast<unsigned char>(s[i - 1])))
        --i;
    return i;
}

std::vector<std::string> handler_names(const SmartAppAst& ast) {
    std::vector<std::string> out;
    for (const auto& sub : extract_subscriptions(ast))
        if (ast.find_method(sub.handler) &&
            std::find(out.begin(), out.end(), sub.handler) == out.end())
            out.push_back(sub.handler);
    return out;
}

void collect_calls(const SmartAppAst& ast, const std::vector<Stmt>& stmts, int depth,
                   std::vector<std::string>& stack, std::set<std::size_t>& seen,
                   std::vector<const Stmt*>& out) {
    for (const auto& s : stmts) {
        if (s.kind == StmtKind::DeviceCall && seen.insert(s.span.begin).second)
            out.push_back(&s);
        if (s.kind == StmtKind::MethodCall && depth < ExtractOptions{}.call_depth &&
            std::find(stack.begin(), stack.end(), s.name) == stack.end()) {
            if (const auto* m = ast.find_method(s.name)) {
                stack.push_back(m->name);
                collect_calls(ast, m->body, depth + 1, stack, seen, out);
                stack.pop_back();
            }
        }
        collect_calls(ast, s.body, depth, stack, seen, out);
        collect_calls(ast, s.else_body, depth, stack, seen, out);
    }
}

// Device calls reachable from subscription handlers, in source order.
std::vector<const Stmt*> reachable_calls(const SmartAppAst& ast) {
    std::vector<const Stmt*> out;
    std::set<std::size_t> seen;
    for (const auto& h : handler_names(ast)) {
        std::vector<std::string> stack{h};
        collect_calls(ast, ast.find_method(h)->body, 0, stack, seen, out);
    }
    std::sort(out.begin(), out.end(),
              [](const Stmt* a, const Stmt* b) { return a->span.begin < b->span.begin; });
    return out;
}

// Words in attribute/command or value slots of description actions.
std::set<std::string> described_action_words(const SmartAppAst& ast, const CapabilityKB& kb,
                                             const Lexicon& lex) {
    std::set<std::string> out;
    for (const auto& r : annotate_description(lex, kb, ast.meta.description))
        for (const auto& a : r.actions) {
            out.insert(a.attribute_command);
            out.insert(a.value);
        }
    out.erase(std::string(kNa));
    return out;
}

std::set<std::string> described_capabilities(const SmartAppAst& ast, const CapabilityKB& kb,
                                             const Lexicon& lex) {
    std::set<std::string> out;
    auto add = [&](const RuleComponent& c) {
        if (c.capability != kNa)
            out.insert(c.capability);
    };
    for (const auto& r : annotate_description(lex, kb, ast.meta.description)) {
        if (r.trigger)
            add(*r.trigger);
        for (const auto& c : r.conditions)
            add(c);
        for (const auto& c : r.actions)
            add(c);
    }
    return out;
}

std::string fresh_device_id(const SmartAppAst& ast, const std::string& base) {
    if (!ast.find_input(base) && !ast.find_method(base))
        return base;
    for (int n = 2;; ++n) {
        auto id = base + std::to_string(n);
        if (!ast.find_input(id) && !ast.find_method(id))
            return id;
    }
}

// Commands of other capabilities that cap does not own.
std::vector<std::string> foreign_commands(const CapabilityKB& kb, const std::string& cap) {
    std::set<std::string> cmds;
    for (const auto& other : kb.capabilities())
        if (other != cap)
            for (const auto& c : kb.commands(other))
                if (!kb.attribute_command_of(cap, c) && !kb.value_of_attribute_of(cap, c))
                    cmds.insert(c);
    return {cmds.begin(), cmds.end()};
}

struct Case3Site {
    const Stmt* call;
    std::string capability;
    std::string replacement;
};

std::vector<Case3Site> case3_sites(const SmartAppAst& ast, const CapabilityKB& kb,
                                   const Lexicon& lex) {
    auto calls = reachable_calls(ast);
    auto described = described_action_words(ast, kb, lex);
    std::set<std::pair<std::string, std::string>> actuated;
    for (const auto* c : calls)
        if (auto cap = resolve_device_capability(ast, c->device_id))
            actuated.insert({*cap, c->name});
    std::vector<Case3Site> out;
    for (const auto* c : calls) {
        auto cap = resolve_device_capability(ast, c->device_id);
        if (!cap || !kb.is_command(*cap, c->name))
            continue;
        for (const auto& sib : kb.commands(*cap))
            if (sib != c->name && !described.count(sib) && !actuated.count({*cap, sib}))
                out.push_back({c, *cap, sib});
    }
    return out;
}

MutantRecord swap_command(const std::string& app, const Case3Site& site) {
    MutantRecord m;
    m.seed_source = app;
    m.case_id = 3;
    const auto& ns = site.call->name_span;
    m.mutated_source = app.substr(0, ns.begin) + site.replacement + app.substr(ns.end);
    m.line_begin = m.line_end = ns.line;
    m.capability = site.capability;
    m.resource = site.replacement;
    m.note = site.call->device_id + "." + site.call->name + " -> " + site.call->device_id + "." +
             site.replacement;
    return m;
}

std::size_t pick(std::mt19937_64& rng, std::size_t n) {
    return static_cast<std::size_t>(rng() % n);
}

}  // namespace

MutantRecord inject_case1_at(const std::string& app, const CapabilityKB& kb,
                             const std::string& handler, const std::string& device,
                             const std::string& command) {
    SmartAppAst ast = parse_app(app);
    const Method* m = ast.find_method(handler);
    if (!m)
        throw MutationError("no method '" + handler + "'");
    auto cap = resolve_device_capability(ast, device);
    if (!cap)
        throw MutationError("no input '" + device + "'");
    if (kb.attribute_command_of(*cap, command) || kb.value_of_attribute_of(*cap, command))
        throw MutationError("'" + command + "' belongs to " + *cap);

    std::size_t at = last_non_space_before(app, m->body_close);
    std::string indent;
    if (at > m->body_open + 1) {
        indent = indent_of_line(app, at);
        if (indent.empty() || app.rfind('\n', at) < m->body_open)
            indent = indent_of_line(app, m->span.begin) + "    ";
    } else {
        indent = indent_of_line(app, m->span.begin) + "    ";
    }
    std::string text = "\n" + indent + device + "?." + command + "()";
    MutantRecord r;
    r.seed_source = app;
    r.case_id = 1;
    r.mutated_source = app.substr(0, at) + text + app.substr(at);
    r.line_begin = r.line_end = line_at(app, at) + 1;
    r.capability = *cap;
    r.resource = command;
    r.note = "added " + device + "?." + command + "() to " + handler;
    return r;
}

MutantRecord inject_case1(const std::string& app, const CapabilityKB& kb, const Lexicon&,
                          std::uint64_t seed) {
    SmartAppAst ast = parse_app(app);
    auto handlers = handler_names(ast);
    std::vector<const InputDecl*> devices;
    for (const auto& in : ast.inputs)
        if (kb.has_capability(in.capability) && !foreign_commands(kb, in.capability).empty())
            devices.push_back(&in);
    if (handlers.empty() || devices.empty())
        throw MutationError("no handler and device to inject case 1 into");
    std::mt19937_64 rng(seed);
    const auto& h = handlers[pick(rng, handlers.size())];
    const auto* d = devices[pick(rng, devices.size())];
    auto cmds = foreign_commands(kb, d->capability);
    return inject_case1_at(app, kb, h, d->device_id, cmds[pick(rng, cmds.size())]);
}

std::vector<std::string> case2_candidates(const std::string& app, const CapabilityKB& kb,
                                          const Lexicon& lex) {
    SmartAppAst ast = parse_app(app);
    auto described = described_capabilities(ast, kb, lex);
    std::set<std::string> requested;
    for (const auto& in : ast.inputs)
        requested.insert(in.capability);
    std::vector<std::string> out;
    for (const auto& c : kb.capabilities())
        if (!described.count(c) && !requested.count(c))
            out.push_back(c);
    return out;
}

MutantRecord inject_case2_at(const std::string& app, const CapabilityKB& kb, const Lexicon& lex,
                             const std::string& capability) {
    auto candidates = case2_candidates(app, kb, lex);
    if (!std::binary_search(candidates.begin(), candidates.end(), capability))
        throw MutationError("capability " + capability + " is described or already requested");
    SmartAppAst ast = parse_app(app);
    if (!ast.has_preferences || ast.section_container_close == 0)
        throw MutationError("app has no preferences section to extend");
    std::size_t close = ast.section_container_close;
    std::size_t at = last_non_space_before(app, close);
    std::string ind = indent_of_line(app, at);
    std::string id = fresh_device_id(ast, "sensor");
    std::string text = "\n" + ind + "section(\"\") {\n" + ind + "    input \"" + id +
                       "\", \"capability." + capability + "\", multiple: true\n" + ind + "}";
    MutantRecord r;
    r.seed_source = app;
    r.case_id = 2;
    r.mutated_source = app.substr(0, at) + text + app.substr(at);
    r.line_begin = line_at(app, at) + 1;
    r.line_end = r.line_begin + 2;
    r.capability = capability;
    r.note = "requested capability." + capability + " as '" + id + "'";
    return r;
}

MutantRecord inject_case2(const std::string& app, const CapabilityKB& kb, const Lexicon& lex,
                          std::uint64_t seed) {
    auto candidates = case2_candidates(app, kb, lex);
    if (candidates.empty())
        throw MutationError("every capability is described or requested");
    std::mt19937_64 rng(seed);
    return inject_case2_at(app, kb, lex, candidates[pick(rng, candidates.size())]);
}

MutantRecord inject_case3_at(const std::string& app, const CapabilityKB& kb, const Lexicon& lex,
                             const std::string& device, const std::string& command,
                             const std::string& replacement, std::size_t occurrence) {
    SmartAppAst ast = parse_app(app);
    std::size_t n = 0;
    for (const auto& s : case3_sites(ast, kb, lex)) {
        if (s.call->device_id != device || s.call->name != command || s.replacement != replacement)
            continue;
        if (n++ == occurrence)
            return swap_command(app, s);
    }
    throw MutationError("no eligible call " + device + "." + command + " to swap for " +
                        replacement);
}

MutantRecord inject_case3(const std::string& app, const CapabilityKB& kb, const Lexicon& lex,
                          std::uint64_t seed) {
    SmartAppAst ast = parse_app(app);
    auto sites = case3_sites(ast, kb, lex);
    if (sites.empty())
        throw MutationError("no actuated command with an undescribed sibling");
    std::mt19937_64 rng(seed);
    return swap_command(app, sites[pick(rng, sites.size())]);
}

MutantRecord inject(int case_id, const std::string& app, const CapabilityKB& kb,
                    const Lexicon& lex, std::uint64_t seed) {
    switch (case_id) {
    case 1:
        return inject_case1(app, kb, lex, seed);
    case 2:
        return inject_case2(app, kb, lex, seed);
    case 3:
        return inject_case3(app, kb, lex, seed);
    default:
        throw MutationError("unknown case " + std::to_string(case_id));
    }
}

}  // namespace smartperm
