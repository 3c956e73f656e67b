#pragma once

#include <string>
#include <string_view>
#include <vector>

#include "smartperm/analysis.hpp"
#include "smartperm/evaluation.hpp"
#include "smartperm/mutation.hpp"

namespace smartperm {

struct CorpusStats {
    std::size_t apps = 0;
    std::size_t loc = 0;
    std::size_t facts = 0;
    double seconds = 0.0;  // wall clock for the whole run
};

CorpusStats corpus_stats(const std::vector<AnalysisReport>& reports, double wall_seconds);
std::string format_stats(const CorpusStats& s);

// {"case":1,"app":..,"file":..,"ruleId":..,"componentId":..,"capability":..,"resource":..,"detail":..}
// with null for absent values.
std::string finding_to_jsonl(const Finding& f, const std::string& file);
std::string format_jsonl(const std::vector<AnalysisReport>& reports);
std::string format_table(const std::vector<AnalysisReport>& reports);
// Findings grouped by file in first-seen order.
std::vector<FileFindings> parse_jsonl_report(std::string_view text);

std::string manifest_to_json(const Manifest& m);
Manifest parse_manifest(std::string_view text);
TruthRecord truth_of(const MutantRecord& m, const std::string& file);

std::string format_eval(const EvalResult& r);

}  // namespace smartperm
