#include "smartperm/analysis.hpp"

#include <chrono>

#include "smartperm/annotator.hpp"

namespace smartperm {

FactSet extract_all_facts(const CapabilityKB& kb, const Lexicon& lex, const SmartAppAst& ast,
                          const std::string& app, const ExtractOptions& opts) {
    FactSet fs = facts_from_description(annotate_description(lex, kb, ast.meta.description), app);
    fs.merge(facts_from_preferences(ast, app));
    fs.merge(facts_from_code(ast, kb, app, opts));
    return fs;
}

AnalysisReport analyze_app(const CapabilityKB& kb, const Lexicon& lex, std::string_view source,
                           const AnalysisOptions& opts, const std::string& fallback_name) {
    auto start = std::chrono::steady_clock::now();
    AnalysisReport r;
    SmartAppAst ast = parse_app(source);
    r.app = ast.meta.name.empty() ? fallback_name : ast.meta.name;
    r.loc = ast.line_count;
    r.warnings = ast.warnings;
    extract_subscriptions(ast, &r.warnings);
    r.facts = extract_all_facts(kb, lex, ast, r.app, opts.extract);
    r.findings = run_checks(kb, r.facts, opts.engine);
    r.seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
    return r;
}

}  // namespace smartperm
