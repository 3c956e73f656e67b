#include "smartperm/capability_kb.hpp"

#include <algorithm>
#include <fstream>
#include <sstream>

#include "text_util.hpp"

namespace smartperm {

namespace {

const std::set<std::string, std::less<>> kEmptySet;
const std::vector<std::string> kEmptyVec;

template <typename M>
const typename M::mapped_type* find_in(const M& m, std::string_view key) {
    auto it = m.find(key);
    return it == m.end() ? nullptr : &it->second;
}

void check_name(const std::string& name, int line) {
    if (name.empty())
        throw KbError("empty name", line);
    if (name == kNa)
        throw KbError("'na' is reserved and cannot name a KB entry", line);
}

}  // namespace

bool CapabilityKB::has_capability(std::string_view cap) const {
    return caps_.count(cap) > 0;
}

bool CapabilityKB::attribute_command_of(std::string_view cap, std::string_view res) const {
    auto* s = find_in(attr_cmd_of_, cap);
    return s && s->count(res) > 0;
}

bool CapabilityKB::value_of_attribute_of(std::string_view cap, std::string_view val) const {
    auto* attrs = find_in(attr_cmd_of_, cap);
    if (!attrs)
        return false;
    for (const auto& a : *attrs) {
        auto* vals = find_in(value_of_, a);
        if (vals && vals->count(val))
            return true;
    }
    return false;
}

const std::vector<std::string>& CapabilityKB::owners_of_resource(std::string_view res) const {
    auto* v = find_in(owners_, res);
    return v ? *v : kEmptyVec;
}

bool CapabilityKB::is_attribute_command(std::string_view name) const {
    return all_attr_cmds_.count(name) > 0;
}

bool CapabilityKB::is_value(std::string_view name) const {
    return all_values_.count(name) > 0;
}

bool CapabilityKB::is_command(std::string_view cap, std::string_view name) const {
    auto* s = find_in(commands_, cap);
    return s && s->count(name) > 0;
}

const std::set<std::string, std::less<>>& CapabilityKB::attribute_commands(
    std::string_view cap) const {
    auto* s = find_in(attr_cmd_of_, cap);
    return s ? *s : kEmptySet;
}

const std::set<std::string, std::less<>>& CapabilityKB::values(std::string_view attr) const {
    auto* s = find_in(value_of_, attr);
    return s ? *s : kEmptySet;
}

const std::set<std::string, std::less<>>& CapabilityKB::commands(std::string_view cap) const {
    auto* s = find_in(commands_, cap);
    return s ? *s : kEmptySet;
}

CapabilityKB::Builder& CapabilityKB::Builder::add_capability(const std::string& cap) {
    check_name(cap, 0);
    kb_.caps_.insert(cap);
    return *this;
}

CapabilityKB::Builder& CapabilityKB::Builder::add_attribute_command(const std::string& cap,
                                                                    const std::string& name,
                                                                    bool is_command) {
    check_name(cap, 0);
    check_name(name, 0);
    kb_.caps_.insert(cap);
    kb_.attr_cmd_of_[cap].insert(name);
    if (is_command)
        kb_.commands_[cap].insert(name);
    return *this;
}

CapabilityKB::Builder& CapabilityKB::Builder::add_value(const std::string& attr,
                                                        const std::string& value, int line) {
    check_name(attr, line);
    check_name(value, line);
    pending_values_.push_back({attr, value, line});
    return *this;
}

CapabilityKB CapabilityKB::Builder::build() const {
    CapabilityKB kb = kb_;
    for (const auto& [cap, names] : kb.attr_cmd_of_)
        kb.all_attr_cmds_.insert(names.begin(), names.end());
    for (const auto& [attr, value, line] : pending_values_) {
        if (!kb.all_attr_cmds_.count(attr))
            throw KbError("value '" + value + "' given for '" + attr +
                              "', which is not an attribute/command of any capability",
                          line);
        kb.value_of_[attr].insert(value);
        kb.all_values_.insert(value);
    }

    std::map<std::string, std::set<std::string>, std::less<>> owners;
    for (const auto& [cap, names] : kb.attr_cmd_of_) {
        for (const auto& n : names) {
            owners[n].insert(cap);
            for (const auto& v : kb.values(n))
                owners[v].insert(cap);
        }
    }
    for (auto& [res, caps] : owners)
        kb.owners_[res] = std::vector<std::string>(caps.begin(), caps.end());
    return kb;
}

CapabilityKB parse_kb(std::string_view text) {
    CapabilityKB::Builder b;
    std::set<std::string> seen_caps;
    std::set<std::pair<std::string, std::string>> seen_attr, seen_val;

    int line_no = 0;
    for (std::string_view raw : split_lines(text)) {
        ++line_no;
        std::string_view line = raw;
        if (auto hash = line.find('#'); hash != std::string_view::npos)
            line = line.substr(0, hash);
        line = trim(line);
        if (line.empty())
            continue;

        auto arrow = line.find("->");
        auto fat = line.find("=>");
        try {
            if (arrow != std::string_view::npos && fat == std::string_view::npos) {
                std::string cap(trim(line.substr(0, arrow)));
                std::string name(trim(line.substr(arrow + 2)));
                bool is_cmd = false;
                if (name.size() > 2 && name.compare(name.size() - 2, 2, "()") == 0) {
                    is_cmd = true;
                    name.resize(name.size() - 2);
                }
                if (!is_identifier(cap) || !is_identifier(name))
                    throw KbError("malformed mapping '" + std::string(line) + "'", line_no);
                check_name(cap, line_no);
                check_name(name, line_no);
                if (!seen_attr.emplace(cap, name).second)
                    throw KbError("duplicate entry '" + cap + " -> " + name + "'", line_no);
                b.add_attribute_command(cap, name, is_cmd);
            } else if (fat != std::string_view::npos && arrow == std::string_view::npos) {
                std::string attr(trim(line.substr(0, fat)));
                std::string value(trim(line.substr(fat + 2)));
                if (!is_identifier(attr) || value.empty())
                    throw KbError("malformed value mapping '" + std::string(line) + "'", line_no);
                check_name(attr, line_no);
                check_name(value, line_no);
                if (!seen_val.emplace(attr, value).second)
                    throw KbError("duplicate entry '" + attr + " => " + value + "'", line_no);
                b.add_value(attr, value, line_no);
            } else if (arrow == std::string_view::npos && fat == std::string_view::npos &&
                       is_identifier(line)) {
                std::string cap(line);
                check_name(cap, line_no);
                if (!seen_caps.insert(cap).second)
                    throw KbError("duplicate capability '" + cap + "'", line_no);
                b.add_capability(cap);
            } else {
                throw KbError("cannot parse '" + std::string(line) + "'", line_no);
            }
        } catch (const KbError& e) {
            if (e.line() > 0)
                throw;
            throw KbError(e.what(), line_no);
        }
    }
    return b.build();
}

CapabilityKB load_kb(const std::string& path) {
    return parse_kb(read_file(path));
}

}  // namespace smartperm
