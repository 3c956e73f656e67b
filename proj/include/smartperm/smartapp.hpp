#pragma once

#include <cstddef>
#include <map>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "smartperm/error.hpp"

namespace smartperm {

// Byte offsets into the original source plus the 1-based position of begin.
struct Span {
    std::size_t begin = 0;
    std::size_t end = 0;
    int line = 0;
    int column = 0;
};

struct AppMeta {
    std::string name;
    std::string description;
    std::map<std::string, std::string> fields;  // every string-valued definition() argument
};

struct InputDecl {
    std::string device_id;
    std::string capability;  // without the "capability." prefix
    std::string section_title;
    Span span;
};

// One `lhs == "literal"` test inside an if condition. device_id is "evt" for
// event-value tests, whatever the handler parameter is called.
struct Comparison {
    std::string device_id;
    std::string attribute;
    std::optional<std::string> value;
};

enum class StmtKind { Condition, DeviceCall, DeviceProperty, Subscribe, MethodCall, Other };

const char* to_string(StmtKind k);

struct Stmt {
    StmtKind kind = StmtKind::Other;
    // DeviceCall: device + command. DeviceProperty: device + attribute.
    // MethodCall: name is the callee. Condition: mirrors comparisons.front().
    std::string device_id;
    std::string name;
    std::vector<Comparison> comparisons;
    std::vector<Stmt> body;       // then-branch
    std::vector<Stmt> else_body;  // else / else-if chain
    std::vector<std::string> args;  // Subscribe: identifiers and string bodies as written
    Span span;
    Span name_span;  // the command/attribute token, for source rewriting
};

struct Method {
    std::string name;
    std::vector<std::string> params;
    std::vector<Stmt> body;
    Span span;
    std::size_t body_open = 0;   // offset of '{'
    std::size_t body_close = 0;  // offset of the matching '}'
};

struct Subscription {
    std::string device_id;
    std::string attribute;
    std::optional<std::string> value;
    std::string handler;
    Span span;
};

struct SmartAppAst {
    AppMeta meta;
    std::vector<InputDecl> inputs;
    std::vector<Method> methods;  // source order, names unique
    std::vector<std::string> warnings;
    bool has_preferences = false;
    // Offset of the '}' closing the block that holds the first section() of
    // preferences (the preferences block itself, or its first page).
    std::size_t section_container_close = 0;
    std::size_t line_count = 0;

    const Method* find_method(std::string_view name) const;
    const InputDecl* find_input(std::string_view id) const;
    // Rebuilds the name lookup tables. Renaming entries in place leaves them stale until this runs.
    void reindex();

private:
    std::map<std::string, std::size_t, std::less<>> method_index_;
    std::map<std::string, std::size_t, std::less<>> input_index_;
};

SmartAppAst parse_app(std::string_view source);

// Subscribe statements from every method body, in source order. Malformed
// calls are skipped and reported through warnings when given.
std::vector<Subscription> extract_subscriptions(const SmartAppAst& ast,
                                                std::vector<std::string>* warnings = nullptr);

std::optional<std::string> resolve_device_capability(const SmartAppAst& ast,
                                                     std::string_view device_id);

// Indented structural listing of the AST; stable across runs.
std::string dump_ast(const SmartAppAst& ast);

}  // namespace smartperm
