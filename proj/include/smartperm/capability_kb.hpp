#pragma once

#include <map>
#include <set>
#include <string>
#include <string_view>
#include <vector>

#include "smartperm/error.hpp"

namespace smartperm {

inline constexpr std::string_view kNa = "na";

// SmartThings capability model: capability -> attributes/commands -> values.
// Immutable once built; share freely between threads.
class CapabilityKB {
public:
    class Builder;

    CapabilityKB() = default;

    bool has_capability(std::string_view cap) const;
    bool attribute_command_of(std::string_view cap, std::string_view res) const;
    bool value_of_attribute_of(std::string_view cap, std::string_view val) const;
    // Lexicographically sorted. Empty for names the KB does not know.
    const std::vector<std::string>& owners_of_resource(std::string_view res) const;

    bool is_attribute_command(std::string_view name) const;
    bool is_value(std::string_view name) const;
    bool is_command(std::string_view cap, std::string_view name) const;

    const std::set<std::string, std::less<>>& capabilities() const { return caps_; }
    const std::set<std::string, std::less<>>& attribute_commands(std::string_view cap) const;
    const std::set<std::string, std::less<>>& values(std::string_view attr) const;
    // Entries marked as commands ("name()" in the KB file). Used by the mutation bench.
    const std::set<std::string, std::less<>>& commands(std::string_view cap) const;

    std::size_t size() const { return caps_.size(); }
    bool empty() const { return caps_.empty(); }

    bool operator==(const CapabilityKB& o) const {
        return caps_ == o.caps_ && attr_cmd_of_ == o.attr_cmd_of_ && value_of_ == o.value_of_ &&
               commands_ == o.commands_;
    }

private:
    using NameSet = std::set<std::string, std::less<>>;

    NameSet caps_;
    std::map<std::string, NameSet, std::less<>> attr_cmd_of_;
    std::map<std::string, NameSet, std::less<>> value_of_;
    std::map<std::string, NameSet, std::less<>> commands_;
    NameSet all_attr_cmds_;
    NameSet all_values_;
    std::map<std::string, std::vector<std::string>, std::less<>> owners_;
};

class CapabilityKB::Builder {
public:
    Builder& add_capability(const std::string& cap);
    Builder& add_attribute_command(const std::string& cap, const std::string& name,
                                   bool is_command = false);
    Builder& add_value(const std::string& attr, const std::string& value, int line = 0);
    // Validates invariants and precomputes the ownership index.
    CapabilityKB build() const;

private:
    CapabilityKB kb_;
    struct PendingValue {
        std::string attr, value;
        int line;
    };
    std::vector<PendingValue> pending_values_;
};

CapabilityKB parse_kb(std::string_view text);
CapabilityKB load_kb(const std::string& path);

}  // namespace smartperm
