#include "smartperm/lexicon.hpp"

#include "smartperm/permission_rule.hpp"
#include "text_util.hpp"

namespace smartperm {

const char* to_string(EntityKind k) {
    switch (k) {
    case EntityKind::Capability:
        return "capability";
    case EntityKind::AttributeCommand:
        return "attribute_command";
    case EntityKind::Value:
        return "value";
    }
    return "value";
}

std::string to_string(const RuleComponent& c) {
    return "(" + c.capability + ", " + c.attribute_command + ", " + c.value + ")";
}

const std::vector<LexEntry>* Lexicon::lookup(std::string_view word) const {
    auto it = entity_map.find(std::string(word));
    return it == entity_map.end() ? nullptr : &it->second;
}

namespace {

EntityKind parse_kind(std::string_view s, int line) {
    if (s == "capability")
        return EntityKind::Capability;
    if (s == "attribute_command" || s == "attribute" || s == "command")
        return EntityKind::AttributeCommand;
    if (s == "value")
        return EntityKind::Value;
    throw LexiconError("unknown entity kind '" + std::string(s) + "'", line);
}

}  // namespace

Lexicon parse_lexicon(std::string_view text, const CapabilityKB& kb) {
    Lexicon lex;
    int line_no = 0;
    for (std::string_view raw : split_lines(text)) {
        ++line_no;
        std::string_view line = raw;
        if (auto hash = line.find('#'); hash != std::string_view::npos)
            line = line.substr(0, hash);
        line = trim(line);
        if (line.empty())
            continue;

        if (line.front() == '@') {
            auto words = split_ws(line);
            std::set<std::string>* target = nullptr;
            if (words[0] == "@trigger")
                target = &lex.trigger_indicators;
            else if (words[0] == "@condition")
                target = &lex.condition_indicators;
            else if (words[0] == "@split")
                target = &lex.rule_splitters;
            else
                throw LexiconError("unknown directive '" + words[0] + "'", line_no);
            if (words.size() < 2)
                throw LexiconError("directive " + words[0] + " needs at least one word", line_no);
            for (std::size_t i = 1; i < words.size(); ++i)
                target->insert(to_lower(words[i]));
            continue;
        }

        auto c1 = line.find(':');
        auto c2 = c1 == std::string_view::npos ? c1 : line.find(':', c1 + 1);
        if (c2 == std::string_view::npos)
            throw LexiconError("expected 'word : kind : canonical'", line_no);
        std::string word = to_lower(trim(line.substr(0, c1)));
        auto kind_text = trim(line.substr(c1 + 1, c2 - c1 - 1));
        std::string canonical(trim(line.substr(c2 + 1)));
        if (word.empty() || canonical.empty() || word.find(' ') != std::string::npos)
            throw LexiconError("expected 'word : kind : canonical'", line_no);
        EntityKind kind = parse_kind(kind_text, line_no);
        if (canonical == kNa)
            throw LexiconError("'na' cannot be a canonical name", line_no);
        if (kind == EntityKind::Capability && !kb.has_capability(canonical))
            throw LexiconError("capability '" + canonical + "' is not in the capability model",
                               line_no);
        auto& entries = lex.entity_map[word];
        for (const auto& e : entries)
            if (e.kind == kind)
                throw LexiconError("duplicate " + std::string(to_string(kind)) + " entry for '" +
                                       word + "'",
                                   line_no);
        entries.push_back({kind, canonical});
    }
    return lex;
}

Lexicon load_lexicon(const std::string& path, const CapabilityKB& kb) {
    return parse_lexicon(read_file(path), kb);
}

}  // namespace smartperm
