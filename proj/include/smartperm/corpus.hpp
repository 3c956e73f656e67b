#pragma once

#include <string>
#include <vector>

#include "smartperm/analysis.hpp"

namespace smartperm {

// .groovy files named directly or found below the given directories, sorted.
std::vector<std::string> collect_sources(const std::vector<std::string>& paths);

struct SourceFile {
    std::string file;
    std::string source;
};

// Analyzes every file on `jobs` worker threads. Results are ordered by
// (app, file) whatever the worker count. Files that fail to parse come back
// with error set and no facts.
std::vector<AnalysisReport> analyze_sources(const CapabilityKB& kb, const Lexicon& lex,
                                            const std::vector<SourceFile>& files,
                                            const AnalysisOptions& opts = {}, unsigned jobs = 1);
std::vector<AnalysisReport> analyze_files(const CapabilityKB& kb, const Lexicon& lex,
                                          const std::vector<std::string>& paths,
                                          const AnalysisOptions& opts = {}, unsigned jobs = 1);

struct BenchRow {
    std::string label;
    std::size_t apps = 0;
    std::size_t loc = 0;
    std::size_t facts = 0;
    double seconds = 0.0;  // fastest of the repeats, single thread
};

struct BenchGroup {
    std::string label;
    std::vector<SourceFile> files;
};

BenchRow bench_group(const CapabilityKB& kb, const Lexicon& lex, const BenchGroup& g,
                     const AnalysisOptions& opts = {}, int repeats = 3);

// Nested prefixes of files holding n/2^(levels-1), ..., n/2, n files, smallest first.
std::vector<BenchGroup> prefix_groups(const std::vector<SourceFile>& files, int levels = 4);

// Least-squares slope of log(seconds) against log(loc) over the rows.
double scaling_exponent(const std::vector<BenchRow>& rows);

std::string bench_csv(const std::vector<BenchRow>& rows);

}  // namespace smartperm
