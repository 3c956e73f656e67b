#include "groovy_lexer.hpp"

#include <array>
#include <cctype>

#include "smartperm/error.hpp"
#include "text_util.hpp"

namespace smartperm::groovy {

namespace {

constexpr std::array<std::string_view, 28> kMultiPunct = {
    "...", "?.", "*.", "?:", "==~", "=~", "<=>", "==", "!=", "<=", ">=", "&&", "||", "->", "++",
    "--", "+=", "-=", "*=", "/=", "<<", ">>", "**", "..", ".&", "::", "%=", "!in"};

class Lexer {
public:
    explicit Lexer(std::string_view src) : src_(src) {}

    TokenStream run() {
        TokenStream ts;
        if (src_.size() >= 2 && src_[0] == '#' && src_[1] == '!')
            skip_to_eol();
        while (pos_ < src_.size()) {
            char c = src_[pos_];
            tok_line_ = line_;
            tok_col_ = col_;
            if (c == '\n') {
                push(ts, Tok::Newline, "\n", pos_, pos_ + 1);
                advance();
            } else if (std::isspace(static_cast<unsigned char>(c))) {
                advance();
            } else if (c == '/' && peek(1) == '/') {
                skip_to_eol();
            } else if (c == '/' && peek(1) == '*') {
                block_comment();
            } else if (c == '"' || c == '\'') {
                string_literal(ts, c);
            } else if (is_ident_start(c)) {
                auto b = pos_;
                while (pos_ < src_.size() && is_ident_char(src_[pos_]))
                    advance();
                push(ts, Tok::Ident, std::string(src_.substr(b, pos_ - b)), b, pos_);
            } else if (std::isdigit(static_cast<unsigned char>(c))) {
                auto b = pos_;
                while (pos_ < src_.size() &&
                       (std::isalnum(static_cast<unsigned char>(src_[pos_])) || src_[pos_] == '_' ||
                        (src_[pos_] == '.' && std::isdigit(static_cast<unsigned char>(peek(1))))))
                    advance();
                push(ts, Tok::Number, std::string(src_.substr(b, pos_ - b)), b, pos_);
            } else {
                punct(ts);
            }
        }
        Token end;
        end.kind = Tok::End;
        end.begin = end.end = src_.size();
        end.line = line_;
        end.column = col_;
        ts.tokens.push_back(end);
        match_brackets(ts);
        return ts;
    }

private:
    char peek(std::size_t off) const {
        return pos_ + off < src_.size() ? src_[pos_ + off] : '\0';
    }

    void advance() {
        if (src_[pos_] == '\n') {
            ++line_;
            col_ = 1;
        } else {
            ++col_;
        }
        ++pos_;
    }

    void skip_to_eol() {
        while (pos_ < src_.size() && src_[pos_] != '\n')
            advance();
    }

    void block_comment() {
        int start_line = line_;
        advance();
        advance();
        while (pos_ < src_.size() && !(src_[pos_] == '*' && peek(1) == '/'))
            advance();
        if (pos_ >= src_.size())
            throw ParseError("unterminated block comment", start_line);
        advance();
        advance();
    }

    void push(TokenStream& ts, Tok kind, std::string text, std::size_t b, std::size_t e) {
        Token t;
        t.kind = kind;
        t.text = std::move(text);
        t.begin = b;
        t.end = e;
        t.line = tok_line_;
        t.column = tok_col_;
        ts.tokens.push_back(std::move(t));
    }

    // Skips a ${...} interpolation body, which may itself contain strings.
    void interpolation(int start_line) {
        advance();  // $
        advance();  // {
        int depth = 1;
        while (pos_ < src_.size() && depth > 0) {
            char c = src_[pos_];
            if (c == '{') {
                ++depth;
                advance();
            } else if (c == '}') {
                --depth;
                advance();
            } else if (c == '"' || c == '\'') {
                char q = c;
                advance();
                while (pos_ < src_.size() && src_[pos_] != q && src_[pos_] != '\n') {
                    if (src_[pos_] == '\\')
                        advance();
                    if (pos_ < src_.size())
                        advance();
                }
                if (pos_ >= src_.size() || src_[pos_] == '\n')
                    throw ParseError("unterminated string", start_line);
                advance();
            } else {
                advance();
            }
        }
        if (depth > 0)
            throw ParseError("unterminated string interpolation", start_line);
    }

    void string_literal(TokenStream& ts, char q) {
        int start_line = line_;
        auto b = pos_;
        bool triple = peek(1) == q && peek(2) == q;
        std::size_t open_len = triple ? 3 : 1;
        for (std::size_t i = 0; i < open_len; ++i)
            advance();
        auto body_begin = pos_;
        while (true) {
            if (pos_ >= src_.size())
                throw ParseError("unterminated string", start_line);
            char c = src_[pos_];
            if (!triple && c == '\n')
                throw ParseError("unterminated string", start_line);
            if (c == '\\') {
                advance();
                if (pos_ < src_.size())
                    advance();
                continue;
            }
            if (q == '"' && c == '$' && peek(1) == '{') {
                interpolation(start_line);
                continue;
            }
            if (c == q && (!triple || (peek(1) == q && peek(2) == q)))
                break;
            advance();
        }
        auto body_end = pos_;
        for (std::size_t i = 0; i < open_len; ++i)
            advance();
        push(ts, Tok::String, std::string(src_.substr(body_begin, body_end - body_begin)), b, pos_);
    }

    void punct(TokenStream& ts) {
        auto b = pos_;
        for (auto p : kMultiPunct) {
            if (src_.substr(pos_, p.size()) == p) {
                // "!in" only as an operator, not "!inside"
                if (p == "!in" && pos_ + 3 < src_.size() && is_ident_char(src_[pos_ + 3]))
                    continue;
                for (std::size_t i = 0; i < p.size(); ++i)
                    advance();
                push(ts, Tok::Punct, std::string(p), b, pos_);
                return;
            }
        }
        advance();
        push(ts, Tok::Punct, std::string(1, src_[b]), b, pos_);
    }

    void match_brackets(TokenStream& ts) {
        ts.partner.assign(ts.tokens.size(), std::string::npos);
        std::vector<std::size_t> stack;
        for (std::size_t i = 0; i < ts.tokens.size(); ++i) {
            const auto& t = ts.tokens[i];
            if (t.kind != Tok::Punct || t.text.size() != 1)
                continue;
            char c = t.text[0];
            if (c == '(' || c == '[' || c == '{') {
                stack.push_back(i);
            } else if (c == ')' || c == ']' || c == '}') {
                char want = c == ')' ? '(' : c == ']' ? '[' : '{';
                if (stack.empty())
                    throw ParseError(std::string("unbalanced '") + c + "'", t.line);
                auto o = stack.back();
                if (ts.tokens[o].text[0] != want)
                    throw ParseError(std::string("'") + c + "' does not match '" +
                                         ts.tokens[o].text + "' opened on line " +
                                         std::to_string(ts.tokens[o].line),
                                     t.line);
                stack.pop_back();
                ts.partner[o] = i;
                ts.partner[i] = o;
            }
        }
        if (!stack.empty()) {
            const auto& t = ts.tokens[stack.back()];
            throw ParseError("unclosed '" + t.text + "'", t.line);
        }
    }

    std::string_view src_;
    std::size_t pos_ = 0;
    int line_ = 1;
    int col_ = 1;
    int tok_line_ = 1;
    int tok_col_ = 1;
};

}  // namespace

TokenStream lex(std::string_view source) {
    return Lexer(source).run();
}

}  // namespace smartperm::groovy
