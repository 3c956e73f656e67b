#pragma once

#include <cstddef>
#include <string>
#include <string_view>
#include <vector>

namespace smartperm::groovy {

enum class Tok { Ident, String, Number, Punct, Newline, End };

struct Token {
    Tok kind = Tok::End;
    std::string text;  // string tokens hold the unquoted body, escapes left as written
    std::size_t begin = 0;
    std::size_t end = 0;
    int line = 1;
    int column = 1;
    bool is(std::string_view p) const { return (kind == Tok::Punct || kind == Tok::Ident) && text == p; }
};

struct TokenStream {
    std::vector<Token> tokens;  // always terminated by one End token
    // For every opening bracket, the index of its partner; npos elsewhere.
    std::vector<std::size_t> partner;
};

// Throws ParseError on an unterminated string/comment or unbalanced brackets.
TokenStream lex(std::string_view source);

}  // namespace smartperm::groovy
