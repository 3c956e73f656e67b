#include "smartperm/facts.hpp"

#include <array>
#include <cctype>
#include <fstream>
#include <map>

#include "text_util.hpp"

namespace smartperm {

namespace {

struct RelInfo {
    Relation rel;
    const char* name;
    std::size_t arity;
};

constexpr std::array<RelInfo, 15> kRelations = {{
    {Relation::Application, "application", 2},
    {Relation::PermissionRule, "permission_rule", 3},
    {Relation::Trigger, "trigger", 3},
    {Relation::Condition, "condition", 3},
    {Relation::Action, "action", 3},
    {Relation::AttributeCommand, "attribute_command", 3},
    {Relation::DeviceCapability, "device_capability", 3},
    {Relation::Value, "value", 3},
    {Relation::TriggerComposition, "triggerComposition", 7},
    {Relation::ConditionComposition, "conditionComposition", 7},
    {Relation::ActionComposition, "actionComposition", 7},
    {Relation::RequestedCapability, "requestedCapability", 2},
    {Relation::Capability, "capability", 1},
    {Relation::AttributeCommandOf, "attributeCommandOf", 2},
    {Relation::ValueOf, "valueOf", 2},
}};

bool bare_atom(std::string_view s) {
    if (s.empty() || !(std::isalpha(static_cast<unsigned char>(s[0])) || s[0] == '_'))
        return false;
    for (char c : s)
        if (!(std::isalnum(static_cast<unsigned char>(c)) || c == '_'))
            return false;
    return true;
}

class FactReader {
public:
    explicit FactReader(std::string_view text) : s_(text) {}

    FactSet run() {
        FactSet fs;
        std::optional<std::string> header_app;
        std::optional<std::string> inferred_app;
        while (true) {
            skip_space(&header_app);
            if (pos_ >= s_.size())
                break;
            int line = line_;
            std::string name = atom();
            auto rel = relation_from_name(name);
            if (!rel)
                throw FactSyntaxError("unknown relation '" + name + "'", line);
            skip_space(nullptr);
            expect('(');
            std::vector<std::string> args;
            skip_space(nullptr);
            if (peek() != ')') {
                while (true) {
                    skip_space(nullptr);
                    args.push_back(atom());
                    skip_space(nullptr);
                    if (peek() == ',') {
                        ++pos_;
                        continue;
                    }
                    break;
                }
            }
            expect(')');
            skip_space(nullptr);
            expect('.');
            if (args.size() != relation_arity(*rel))
                throw FactSyntaxError(name + " expects " + std::to_string(relation_arity(*rel)) +
                                          " arguments, got " + std::to_string(args.size()),
                                      line);
            if (!inferred_app) {
                if (*rel == Relation::Application || *rel == Relation::PermissionRule ||
                    is_composition(*rel))
                    inferred_app = args[1];
                else if (*rel == Relation::RequestedCapability)
                    inferred_app = args[0];
            }
            fs.add(*rel, std::move(args));
        }
        fs.set_app(header_app ? *header_app : inferred_app.value_or(""));
        return fs;
    }

private:
    char peek() const { return pos_ < s_.size() ? s_[pos_] : '\0'; }

    void bump() {
        if (s_[pos_] == '\n')
            ++line_;
        ++pos_;
    }

    void skip_space(std::optional<std::string>* header_app) {
        while (pos_ < s_.size()) {
            char c = s_[pos_];
            if (std::isspace(static_cast<unsigned char>(c))) {
                bump();
            } else if (c == '%') {
                auto start = pos_ + 1;
                while (pos_ < s_.size() && s_[pos_] != '\n')
                    ++pos_;
                auto body = trim(s_.substr(start, pos_ - start));
                constexpr std::string_view kTag = "app:";
                if (header_app && !*header_app && body.substr(0, kTag.size()) == kTag) {
                    FactReader sub(trim(body.substr(kTag.size())));
                    *header_app = sub.atom();
                }
            } else if (c == '/' && pos_ + 1 < s_.size() && s_[pos_ + 1] == '*') {
                int start_line = line_;
                pos_ += 2;
                while (pos_ + 1 < s_.size() && !(s_[pos_] == '*' && s_[pos_ + 1] == '/'))
                    bump();
                if (pos_ + 1 >= s_.size())
                    throw FactSyntaxError("unterminated comment", start_line);
                pos_ += 2;
            } else {
                break;
            }
        }
    }

    void expect(char c) {
        if (peek() != c)
            throw FactSyntaxError(std::string("expected '") + c + "'" +
                                      (pos_ < s_.size() ? std::string(", found '") + s_[pos_] + "'"
                                                        : std::string(" at end of input")),
                                  line_);
        bump();
    }

    std::string atom() {
        if (peek() == '\'') {
            int start_line = line_;
            bump();
            std::string out;
            while (true) {
                if (pos_ >= s_.size())
                    throw FactSyntaxError("unterminated quoted atom", start_line);
                char c = s_[pos_];
                if (c == '\'') {
                    bump();
                    break;
                }
                if (c == '\\') {
                    bump();
                    if (pos_ >= s_.size())
                        throw FactSyntaxError("unterminated quoted atom", start_line);
                    char e = s_[pos_];
                    out += e == 'n' ? '\n' : e == 't' ? '\t' : e;
                    bump();
                    continue;
                }
                out += c;
                bump();
            }
            return out;
        }
        auto start = pos_;
        while (pos_ < s_.size() &&
               (std::isalnum(static_cast<unsigned char>(s_[pos_])) || s_[pos_] == '_'))
            ++pos_;
        if (start == pos_)
            throw FactSyntaxError(pos_ < s_.size()
                                      ? std::string("unexpected '") + s_[pos_] + "'"
                                      : std::string("unexpected end of input"),
                                  line_);
        return std::string(s_.substr(start, pos_ - start));
    }

    std::string_view s_;
    std::size_t pos_ = 0;
    int line_ = 1;
};

}  // namespace

const char* relation_name(Relation r) {
    return kRelations[static_cast<std::size_t>(r)].name;
}

std::optional<Relation> relation_from_name(std::string_view name) {
    for (const auto& info : kRelations)
        if (name == info.name)
            return info.rel;
    return std::nullopt;
}

std::size_t relation_arity(Relation r) {
    return kRelations[static_cast<std::size_t>(r)].arity;
}

bool is_composition(Relation r) {
    return r == Relation::TriggerComposition || r == Relation::ConditionComposition ||
           r == Relation::ActionComposition;
}

bool FactSet::add(Fact f) {
    if (!index_.insert(f).second)
        return false;
    facts_.push_back(std::move(f));
    return true;
}

void FactSet::merge(const FactSet& other) {
    for (const auto& f : other.facts())
        add(f);
}

std::string format_atom(std::string_view atom) {
    if (bare_atom(atom))
        return std::string(atom);
    std::string out = "'";
    for (char c : atom) {
        if (c == '\'' || c == '\\')
            out += '\\';
        if (c == '\n') {
            out += "\\n";
            continue;
        }
        if (c == '\t') {
            out += "\\t";
            continue;
        }
        out += c;
    }
    out += '\'';
    return out;
}

std::string format_fact(const Fact& f) {
    std::string out = relation_name(f.rel);
    out += '(';
    for (std::size_t i = 0; i < f.args.size(); ++i) {
        if (i)
            out += ',';
        out += format_atom(f.args[i]);
    }
    out += ").";
    return out;
}

std::string serialize_facts(const FactSet& fs) {
    std::string out = "% app: " + format_atom(fs.app()) + "\n";
    for (const auto& f : fs.facts()) {
        out += format_fact(f);
        out += '\n';
    }
    return out;
}

FactSet parse_facts(std::string_view text) {
    return FactReader(text).run();
}

void write_facts(const FactSet& fs, const std::string& path) {
    std::ofstream out(path, std::ios::binary);
    if (!out)
        throw Error("cannot write '" + path + "'");
    out << serialize_facts(fs);
}

FactSet read_facts(const std::string& path) {
    return parse_facts(read_file(path));
}

bool has_kb_facts(const FactSet& fs) {
    for (const auto& f : fs.facts())
        if (f.rel == Relation::Capability || f.rel == Relation::AttributeCommandOf ||
            f.rel == Relation::ValueOf)
            return true;
    return false;
}

CapabilityKB kb_from_facts(const FactSet& fs) {
    CapabilityKB::Builder b;
    for (const auto& f : fs.facts()) {
        switch (f.rel) {
        case Relation::Capability:
            b.add_capability(f.args[0]);
            break;
        case Relation::AttributeCommandOf:
            b.add_attribute_command(f.args[0], f.args[1]);
            break;
        case Relation::ValueOf:
            b.add_value(f.args[0], f.args[1]);
            break;
        default:
            break;
        }
    }
    return b.build();
}

std::vector<std::string> validate_facts(const FactSet& fs) {
    std::vector<std::string> problems;
    auto need = [&](Relation r, std::vector<std::string> args, const Fact& because) {
        Fact f{r, std::move(args)};
        if (!fs.contains(f))
            problems.push_back("missing " + format_fact(f) + " for " + format_fact(because));
    };
    // source -> prefix -> numbers seen
    std::map<std::string, std::map<std::string, std::set<long>>> ids;
    auto note_id = [&](const std::string& src, const std::string& id) {
        auto cut = id.find_first_of("0123456789");
        if (cut == std::string::npos || cut == 0)
            return;
        for (std::size_t i = cut; i < id.size(); ++i)
            if (!std::isdigit(static_cast<unsigned char>(id[i])))
                return;
        ids[src][id.substr(0, cut)].insert(std::stol(id.substr(cut)));
    };

    for (const auto& f : fs.facts()) {
        if (!is_composition(f.rel))
            continue;
        const auto& a = f.args;
        Relation comp = f.rel == Relation::TriggerComposition     ? Relation::Trigger
                        : f.rel == Relation::ConditionComposition ? Relation::Condition
                                                                  : Relation::Action;
        need(Relation::PermissionRule, {a[0], a[1], a[2]}, f);
        need(comp, {a[0], a[2], a[3]}, f);
        need(Relation::DeviceCapability, {a[0], a[3], a[4]}, f);
        need(Relation::AttributeCommand, {a[0], a[3], a[5]}, f);
        need(Relation::Value, {a[0], a[3], a[6]}, f);
        note_id(a[0], a[2]);
        note_id(a[0], a[3]);
    }
    for (const auto& [src, by_prefix] : ids)
        for (const auto& [prefix, nums] : by_prefix) {
            long expect = 1;
            for (long n : nums) {
                if (n != expect) {
                    problems.push_back(src + " ids '" + prefix + "' are not dense: missing " +
                                       prefix + std::to_string(expect));
                    break;
                }
                ++expect;
            }
        }
    return problems;
}

}  // namespace smartperm
