#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "smartperm/capability_kb.hpp"
#include "smartperm/lexicon.hpp"
#include "smartperm/mutation.hpp"

namespace smartperm {

struct SyntheticOptions {
    std::size_t count = 230;
    std::uint64_t seed = 1;
    // App i has 2^(i mod (max_log2_rules + 1)) permission rules.
    int max_log2_rules = 6;
    // Every n-th app (n = mutant_every) is turned into a mutant; 0 keeps all benign.
    int mutant_every = 2;
};

struct SyntheticApp {
    std::string file;  // relative path, e.g. "app_0007.groovy"
    std::string name;
    std::string source;
    int rules = 0;
    std::optional<MutantRecord> mutant;
};

// Benign app with the given number of rules. Each rule pairs one sentence of
// the description with one subscription and handler, so the app has no findings.
std::string synthetic_benign_app(const std::string& name, int rules, std::uint64_t seed);

std::vector<SyntheticApp> generate_corpus(const CapabilityKB& kb, const Lexicon& lex,
                                          const SyntheticOptions& opts = {});

}  // namespace smartperm
