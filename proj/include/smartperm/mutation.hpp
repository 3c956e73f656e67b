#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "smartperm/capability_kb.hpp"
#include "smartperm/lexicon.hpp"

namespace smartperm {

struct MutantRecord {
    std::string seed_source;
    std::string mutated_source;
    int case_id = 0;
    int line_begin = 0;  // 1-based, inclusive, in mutated_source
    int line_end = 0;
    // Expected finding signature.
    std::string capability;
    std::optional<std::string> resource;
    std::string note;  // what was changed, for manifests and logs
};

// Case 1: append `device?.cmd()` to a subscription handler, where cmd is a
// command of some other capability that the device's capability does not own.
MutantRecord inject_case1(const std::string& app, const CapabilityKB& kb, const Lexicon& lex,
                          std::uint64_t seed);
MutantRecord inject_case1_at(const std::string& app, const CapabilityKB& kb,
                             const std::string& handler, const std::string& device,
                             const std::string& command);

// Case 2: request a capability the description never mentions, in a new section.
MutantRecord inject_case2(const std::string& app, const CapabilityKB& kb, const Lexicon& lex,
                          std::uint64_t seed);
MutantRecord inject_case2_at(const std::string& app, const CapabilityKB& kb, const Lexicon& lex,
                             const std::string& capability);

// Case 3: swap an actuated command for a sibling command of the same
// capability that the description does not mention. occurrence counts the
// eligible calls of device.command in handler-reachable code, from 0.
MutantRecord inject_case3(const std::string& app, const CapabilityKB& kb, const Lexicon& lex,
                          std::uint64_t seed);
MutantRecord inject_case3_at(const std::string& app, const CapabilityKB& kb, const Lexicon& lex,
                             const std::string& device, const std::string& command,
                             const std::string& replacement, std::size_t occurrence = 0);

MutantRecord inject(int case_id, const std::string& app, const CapabilityKB& kb,
                    const Lexicon& lex, std::uint64_t seed);

// Capabilities eligible for a case-2 injection, sorted.
std::vector<std::string> case2_candidates(const std::string& app, const CapabilityKB& kb,
                                          const Lexicon& lex);

}  // namespace smartperm
