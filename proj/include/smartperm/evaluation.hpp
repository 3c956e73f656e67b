#pragma once

#include <map>
#include <optional>
#include <string>
#include <vector>

#include "smartperm/engine.hpp"

namespace smartperm {

std::optional<double> precision(long tp, long fp);
std::optional<double> recall(long tp, long fn);

// Ground truth for one mutant file.
struct TruthRecord {
    std::string file;
    int case_id = 0;
    std::string capability;
    std::optional<std::string> resource;
};

struct Manifest {
    std::vector<TruthRecord> mutants;
    std::vector<std::string> benign;
};

// Findings of one analyzed file.
struct FileFindings {
    std::string file;
    std::vector<Finding> findings;
};

struct CaseCounts {
    long tp = 0, fp = 0, fn = 0;
    long cross_case = 0;  // findings of this case on mutants injected with another case
    // App-level tally: mutants of this case with a matching finding, benign apps
    // without any finding of this case.
    long mutants_detected = 0, mutants_total = 0;
    long benign_clean = 0, benign_total = 0;

    std::optional<double> precision() const { return smartperm::precision(tp, fp); }
    std::optional<double> recall() const { return smartperm::recall(tp, fn); }
    bool operator==(const CaseCounts& o) const {
        return tp == o.tp && fp == o.fp && fn == o.fn && cross_case == o.cross_case &&
               mutants_detected == o.mutants_detected && mutants_total == o.mutants_total &&
               benign_clean == o.benign_clean && benign_total == o.benign_total;
    }
};

struct EvalResult {
    std::map<int, CaseCounts> per_case;  // keys 1, 2, 3
    bool operator==(const EvalResult& o) const { return per_case == o.per_case; }
};

// A finding matches a truth record on (case, capability) and, when the record
// names one, the resource. Files absent from the report had no findings. A
// report file the manifest does not list raises CorpusMismatchError.
EvalResult evaluate(const std::vector<FileFindings>& report, const Manifest& truth);

}  // namespace smartperm
