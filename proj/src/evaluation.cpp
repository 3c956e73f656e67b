#include "smartperm/evaluation.hpp"

#include <set>

namespace smartperm {

std::optional<double> precision(long tp, long fp) {
    if (tp + fp <= 0)
        return std::nullopt;
    return static_cast<double>(tp) / static_cast<double>(tp + fp);
}

std::optional<double> recall(long tp, long fn) {
    if (tp + fn <= 0)
        return std::nullopt;
    return static_cast<double>(tp) / static_cast<double>(tp + fn);
}

namespace {

bool matches(const Finding& f, const TruthRecord& t) {
    return f.case_id == t.case_id && f.capability == t.capability &&
           (!t.resource || f.resource == t.resource);
}

}  // namespace

EvalResult evaluate(const std::vector<FileFindings>& report, const Manifest& truth) {
    std::map<std::string, const TruthRecord*> mutants;
    for (const auto& t : truth.mutants) {
        if (!mutants.emplace(t.file, &t).second)
            throw CorpusMismatchError("file listed twice in manifest: " + t.file);
    }
    std::set<std::string> benign(truth.benign.begin(), truth.benign.end());
    for (const auto& b : benign)
        if (mutants.count(b))
            throw CorpusMismatchError("file is both benign and a mutant: " + b);

    std::map<std::string, std::vector<const Finding*>> by_file;
    for (const auto& r : report) {
        if (!mutants.count(r.file) && !benign.count(r.file))
            throw CorpusMismatchError("report file not in manifest: " + r.file);
        auto& v = by_file[r.file];
        for (const auto& f : r.findings)
            v.push_back(&f);
    }

    EvalResult res;
    for (int c = 1; c <= 3; ++c)
        res.per_case[c];
    for (const auto& [file, t] : mutants) {
        auto& cc = res.per_case[t->case_id];
        ++cc.mutants_total;
        bool hit = false;
        for (const auto* f : by_file[file]) {
            if (f->case_id != t->case_id) {
                ++res.per_case[f->case_id].cross_case;
                continue;
            }
            if (!hit && matches(*f, *t)) {
                hit = true;
                ++cc.tp;
            } else if (!matches(*f, *t)) {
                ++cc.fp;
            }
        }
        if (hit)
            ++cc.mutants_detected;
        else
            ++cc.fn;
    }
    for (const auto& file : benign) {
        std::set<int> flagged;
        for (const auto* f : by_file[file]) {
            ++res.per_case[f->case_id].fp;
            flagged.insert(f->case_id);
        }
        for (int c = 1; c <= 3; ++c) {
            ++res.per_case[c].benign_total;
            if (!flagged.count(c))
                ++res.per_case[c].benign_clean;
        }
    }
    return res;
}

}  // namespace smartperm
