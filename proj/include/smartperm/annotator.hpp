#pragma once

#include <string_view>
#include <vector>

#include "smartperm/capability_kb.hpp"
#include "smartperm/lexicon.hpp"
#include "smartperm/permission_rule.hpp"

namespace smartperm {

// Lowercased, punctuation-free words. A sentence end is emitted as the
// token "." and a clause break (, ; :) as ",".
std::vector<std::string> tokenize_description(std::string_view text);

std::vector<AnnotatedRule> annotate_description(const Lexicon& lex, const CapabilityKB& kb,
                                                std::string_view text);

}  // namespace smartperm
