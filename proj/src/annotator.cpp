#include "smartperm/annotator.hpp"

#include <cctype>

#include "text_util.hpp"

namespace smartperm {

namespace {

bool strip_char(char c) {
    switch (c) {
    case '.':
    case ',':
    case ';':
    case ':':
    case '!':
    case '?':
    case '"':
    case '\'':
    case '(':
    case ')':
        return true;
    default:
        return false;
    }
}

enum class Mode { Action, Trigger, Condition };

class RuleBuilder {
public:
    RuleBuilder(const Lexicon& lex, const CapabilityKB& kb, std::vector<AnnotatedRule>& out)
        : lex_(lex), kb_(kb), out_(out) {}

    void word(const std::string& w) {
        if (lex_.rule_splitters.count(w)) {
            close_span();
            close_rule();
            mode_ = Mode::Action;
        } else if (lex_.trigger_indicators.count(w)) {
            close_span();
            mode_ = Mode::Trigger;
        } else if (lex_.condition_indicators.count(w)) {
            close_span();
            mode_ = Mode::Condition;
        } else {
            span_.push_back(w);
        }
    }

    void clause_break() {
        close_span();
        mode_ = Mode::Action;
    }

    void sentence_break() {
        close_span();
        close_rule();
        mode_ = Mode::Action;
    }

private:
    static void fill(std::string& slot, const std::string& surface) {
        if (slot == kNa)
            slot = surface;
    }

    void close_span() {
        RuleComponent c;
        for (const auto& w : span_) {
            const auto* entries = lex_.lookup(w);
            if (!entries)
                continue;
            for (const auto& e : *entries) {
                switch (e.kind) {
                case EntityKind::Capability:
                    if (c.capability == kNa && kb_.has_capability(e.canonical))
                        c.capability = e.canonical;
                    break;
                case EntityKind::AttributeCommand:
                    fill(c.attribute_command, w);
                    break;
                case EntityKind::Value:
                    fill(c.value, w);
                    break;
                }
            }
        }
        span_.clear();
        if (c.all_na())
            return;
        switch (mode_) {
        case Mode::Action:
            rule_.actions.push_back(std::move(c));
            break;
        case Mode::Trigger:
            if (!rule_.trigger)
                rule_.trigger = std::move(c);
            else
                rule_.conditions.push_back(std::move(c));
            break;
        case Mode::Condition:
            rule_.conditions.push_back(std::move(c));
            break;
        }
    }

    void close_rule() {
        if (!rule_.empty())
            out_.push_back(std::move(rule_));
        rule_ = AnnotatedRule{};
    }

    const Lexicon& lex_;
    const CapabilityKB& kb_;
    std::vector<AnnotatedRule>& out_;
    AnnotatedRule rule_;
    std::vector<std::string> span_;
    Mode mode_ = Mode::Action;
};

}  // namespace

std::vector<std::string> tokenize_description(std::string_view text) {
    std::vector<std::string> out;
    std::string cur;
    auto flush = [&] {
        if (!cur.empty())
            out.push_back(std::move(cur));
        cur.clear();
    };
    auto mark = [&](const char* m) {
        flush();
        if (!out.empty() && out.back() != "." && out.back() != ",")
            out.emplace_back(m);
        else if (!out.empty() && out.back() == "," && std::string_view(m) == ".")
            out.back() = ".";
    };
    for (std::size_t i = 0; i < text.size(); ++i) {
        char c = text[i];
        bool at_boundary = i + 1 >= text.size() || std::isspace(static_cast<unsigned char>(text[i + 1]));
        if (std::isspace(static_cast<unsigned char>(c))) {
            flush();
        } else if ((c == '.' || c == '!' || c == '?') && at_boundary) {
            mark(".");
        } else if (c == ',' || c == ';' || c == ':') {
            mark(",");
        } else if (strip_char(c)) {
            continue;
        } else {
            cur += static_cast<char>(std::tolower(static_cast<unsigned char>(c)));
        }
    }
    flush();
    return out;
}

std::vector<AnnotatedRule> annotate_description(const Lexicon& lex, const CapabilityKB& kb,
                                                std::string_view text) {
    std::vector<AnnotatedRule> rules;
    RuleBuilder b(lex, kb, rules);
    for (const auto& t : tokenize_description(text)) {
        if (t == ".")
            b.sentence_break();
        else if (t == ",")
            b.clause_break();
        else
            b.word(t);
    }
    b.sentence_break();
    return rules;
}

}  // namespace smartperm
