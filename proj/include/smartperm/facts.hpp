#pragma once

#include <optional>
#include <set>
#include <string>
#include <string_view>
#include <unordered_set>
#include <vector>

#include "smartperm/capability_kb.hpp"

namespace smartperm {

inline constexpr std::string_view kDesc = "desc";
inline constexpr std::string_view kCode = "code";

enum class Relation {
    Application,           // (source, app)
    PermissionRule,        // (source, app, rule)
    Trigger,               // (source, rule, id)
    Condition,             // (source, rule, id)
    Action,                // (source, rule, id)
    AttributeCommand,      // (source, id, name)
    DeviceCapability,      // (source, id, name)
    Value,                 // (source, id, name)
    TriggerComposition,    // (source, app, rule, id, capability, attribute_command, value)
    ConditionComposition,  // same shape
    ActionComposition,     // same shape
    RequestedCapability,   // (app, capability)
    Capability,            // (capability)            capability model
    AttributeCommandOf,    // (capability, name)      capability model
    ValueOf,               // (attribute, value)      capability model
};

const char* relation_name(Relation r);
std::optional<Relation> relation_from_name(std::string_view name);
std::size_t relation_arity(Relation r);
bool is_composition(Relation r);

struct Fact {
    Relation rel;
    std::vector<std::string> args;

    bool operator==(const Fact& o) const { return rel == o.rel && args == o.args; }
    bool operator<(const Fact& o) const {
        return rel != o.rel ? rel < o.rel : args < o.args;
    }
};

struct FactHash {
    std::size_t operator()(const Fact& f) const noexcept {
        std::size_t h = std::hash<int>{}(static_cast<int>(f.rel));
        for (const auto& a : f.args)
            h = h * 1000003u ^ std::hash<std::string>{}(a);
        return h;
    }
};

// Facts for one app, in insertion order, with duplicates rejected.
class FactSet {
public:
    FactSet() = default;
    explicit FactSet(std::string app) : app_(std::move(app)) {}

    const std::string& app() const { return app_; }
    void set_app(std::string app) { app_ = std::move(app); }

    // Returns false (and keeps the set unchanged) for a duplicate.
    bool add(Fact f);
    bool add(Relation r, std::vector<std::string> args) { return add(Fact{r, std::move(args)}); }
    void merge(const FactSet& other);
    bool contains(const Fact& f) const { return index_.count(f) > 0; }

    const std::vector<Fact>& facts() const { return facts_; }
    std::size_t size() const { return facts_.size(); }
    bool empty() const { return facts_.empty(); }

    bool operator==(const FactSet& o) const { return app_ == o.app_ && facts_ == o.facts_; }

private:
    std::string app_;
    std::vector<Fact> facts_;
    std::unordered_set<Fact, FactHash> index_;
};

// Atoms matching [A-Za-z_][A-Za-z0-9_]* are written bare, anything else single-quoted.
std::string format_atom(std::string_view atom);
std::string format_fact(const Fact& f);

// One `name(arg,...).` per line, preceded by a `% app: <atom>` comment.
std::string serialize_facts(const FactSet& fs);
// Accepts `%` line comments, `/* */` blocks and free whitespace between tokens.
FactSet parse_facts(std::string_view text);

void write_facts(const FactSet& fs, const std::string& path);
FactSet read_facts(const std::string& path);

// Capability model carried inside a fact file (capability/attributeCommandOf/valueOf).
CapabilityKB kb_from_facts(const FactSet& fs);
bool has_kb_facts(const FactSet& fs);

// Consistency problems: composition facts without matching component and slot
// facts, and per-source ids that are not dense. Empty when well formed.
std::vector<std::string> validate_facts(const FactSet& fs);

}  // namespace smartperm
