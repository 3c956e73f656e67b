#pragma once

#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "smartperm/capability_kb.hpp"
#include "smartperm/engine.hpp"
#include "smartperm/fact_extractor.hpp"
#include "smartperm/facts.hpp"
#include "smartperm/lexicon.hpp"

namespace smartperm {

struct AnalysisOptions {
    EngineOptions engine;
    ExtractOptions extract;
};

struct AnalysisReport {
    std::string app;
    std::string file;
    std::vector<std::string> warnings;
    FactSet facts;  // desc, preferences and code facts together
    std::vector<Finding> findings;
    std::size_t loc = 0;
    double seconds = 0.0;
    std::optional<std::string> error;  // set by corpus runs when the file could not be analyzed
};

// The app name is the definition() name, or fallback_name when that is empty.
AnalysisReport analyze_app(const CapabilityKB& kb, const Lexicon& lex, std::string_view source,
                           const AnalysisOptions& opts = {}, const std::string& fallback_name = "");

// Description, preferences and code facts for one parsed app.
FactSet extract_all_facts(const CapabilityKB& kb, const Lexicon& lex, const SmartAppAst& ast,
                          const std::string& app, const ExtractOptions& opts = {});

}  // namespace smartperm
