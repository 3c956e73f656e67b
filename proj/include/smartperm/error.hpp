#pragma once

#include <stdexcept>
#include <string>

namespace smartperm {

// Base for every error this library throws. line is 0 when not tied to input text.
class Error : public std::runtime_error {
public:
    explicit Error(const std::string& what, int line = 0)
        : std::runtime_error(line > 0 ? "line " + std::to_string(line) + ": " + what : what),
          line_(line) {}

    int line() const noexcept { return line_; }

private:
    int line_;
};

class KbError : public Error {
    using Error::Error;
};

class LexiconError : public Error {
    using Error::Error;
};

class ParseError : public Error {
    using Error::Error;
};

class FactSyntaxError : public Error {
    using Error::Error;
};

class MutationError : public Error {
    using Error::Error;
};

class CorpusMismatchError : public Error {
    using Error::Error;
};

}  // namespace smartperm
