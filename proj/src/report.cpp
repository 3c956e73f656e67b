#include "smartperm/report.hpp"

#include <algorithm>
#include <array>
#include <cstdio>
#include <map>
#include <sstream>

#include <json.hpp>

#include "text_util.hpp"

namespace smartperm {

using json = nlohmann::ordered_json;

namespace {

json opt(const std::optional<std::string>& v) {
    return v ? json(*v) : json(nullptr);
}

std::optional<std::string> opt_string(const json& j, const char* key) {
    auto it = j.find(key);
    if (it == j.end() || it->is_null())
        return std::nullopt;
    if (!it->is_string())
        throw Error(std::string("field '") + key + "' must be a string or null");
    return it->get<std::string>();
}

std::string fmt_pct(const std::optional<double>& v) {
    if (!v)
        return "n/a";
    char buf[32];
    std::snprintf(buf, sizeof buf, "%.2f%%", *v * 100.0);
    return buf;
}

}  // namespace

CorpusStats corpus_stats(const std::vector<AnalysisReport>& reports, double wall_seconds) {
    CorpusStats s;
    s.apps = reports.size();
    for (const auto& r : reports) {
        s.loc += r.loc;
        s.facts += r.facts.size();
    }
    s.seconds = wall_seconds;
    return s;
}

std::string format_stats(const CorpusStats& s) {
    char buf[160];
    std::snprintf(buf, sizeof buf, "apps=%zu loc=%zu facts=%zu seconds=%.3f", s.apps, s.loc,
                  s.facts, s.seconds);
    return buf;
}

std::string finding_to_jsonl(const Finding& f, const std::string& file) {
    json j;
    j["case"] = f.case_id;
    j["app"] = f.app;
    j["file"] = file;
    j["ruleId"] = opt(f.rule_id);
    j["componentId"] = opt(f.component_id);
    j["capability"] = f.capability;
    j["resource"] = opt(f.resource);
    j["detail"] = f.detail;
    return j.dump();
}

std::string format_jsonl(const std::vector<AnalysisReport>& reports) {
    std::string out;
    for (const auto& r : reports)
        for (const auto& f : r.findings) {
            out += finding_to_jsonl(f, r.file);
            out += '\n';
        }
    return out;
}

std::string format_table(const std::vector<AnalysisReport>& reports) {
    std::vector<std::array<std::string, 6>> rows;
    rows.push_back({"case", "app", "rule", "component", "capability", "resource"});
    for (const auto& r : reports)
        for (const auto& f : r.findings)
            rows.push_back({std::to_string(f.case_id), f.app, f.rule_id.value_or("-"),
                            f.component_id.value_or("-"), f.capability,
                            f.resource.value_or("-")});
    std::array<std::size_t, 6> width{};
    for (const auto& row : rows)
        for (std::size_t i = 0; i < row.size(); ++i)
            width[i] = std::max(width[i], row[i].size());
    std::string out;
    std::size_t k = 0;
    for (const auto& row : rows) {
        std::string line;
        for (std::size_t i = 0; i < row.size(); ++i) {
            line += row[i];
            if (i + 1 < row.size())
                line += std::string(width[i] - row[i].size() + 2, ' ');
        }
        out += line + '\n';
        if (k++ == 0) {
            std::size_t total = 0;
            for (auto w : width)
                total += w + 2;
            out += std::string(total - 2, '-') + '\n';
        }
    }
    return out;
}

std::vector<FileFindings> parse_jsonl_report(std::string_view text) {
    std::vector<FileFindings> out;
    std::map<std::string, std::size_t> index;
    int line_no = 0;
    for (auto line : split_lines(text)) {
        ++line_no;
        if (trim(line).empty())
            continue;
        json j;
        try {
            j = json::parse(line);
        } catch (const json::exception& e) {
            throw Error(std::string("bad report line: ") + e.what(), line_no);
        }
        try {
            Finding f;
            f.case_id = j.at("case").get<int>();
            f.app = j.at("app").get<std::string>();
            f.rule_id = opt_string(j, "ruleId");
            f.component_id = opt_string(j, "componentId");
            f.capability = j.at("capability").get<std::string>();
            f.resource = opt_string(j, "resource");
            f.detail = j.value("detail", "");
            auto file = j.at("file").get<std::string>();
            auto [it, fresh] = index.emplace(file, out.size());
            if (fresh)
                out.push_back({file, {}});
            out[it->second].findings.push_back(std::move(f));
        } catch (const json::exception& e) {
            throw Error(std::string("bad report line: ") + e.what(), line_no);
        }
    }
    return out;
}

TruthRecord truth_of(const MutantRecord& m, const std::string& file) {
    return TruthRecord{file, m.case_id, m.capability, m.resource};
}

std::string manifest_to_json(const Manifest& m) {
    json j;
    j["mutants"] = json::array();
    for (const auto& t : m.mutants) {
        json e;
        e["file"] = t.file;
        e["case"] = t.case_id;
        e["capability"] = t.capability;
        e["resource"] = opt(t.resource);
        j["mutants"].push_back(std::move(e));
    }
    j["benign"] = m.benign;
    return j.dump(2) + "\n";
}

Manifest parse_manifest(std::string_view text) {
    Manifest m;
    try {
        auto j = json::parse(text);
        for (const auto& e : j.at("mutants")) {
            TruthRecord t;
            t.file = e.at("file").get<std::string>();
            t.case_id = e.at("case").get<int>();
            if (t.case_id < 1 || t.case_id > 3)
                throw Error("manifest case must be 1, 2 or 3");
            t.capability = e.at("capability").get<std::string>();
            t.resource = opt_string(e, "resource");
            m.mutants.push_back(std::move(t));
        }
        if (j.contains("benign"))
            m.benign = j.at("benign").get<std::vector<std::string>>();
    } catch (const json::exception& e) {
        throw Error(std::string("bad manifest: ") + e.what());
    }
    return m;
}

std::string format_eval(const EvalResult& r) {
    std::ostringstream os;
    os << "case  TP  FP  FN  precision  recall   cross-case  mutants-detected  benign-clean\n";
    for (const auto& [c, cc] : r.per_case) {
        char buf[200];
        std::snprintf(buf, sizeof buf, "%-4d  %-3ld %-3ld %-3ld %-9s  %-7s  %-10ld  %ld/%-14ld  %ld/%ld\n",
                      c, cc.tp, cc.fp, cc.fn, fmt_pct(cc.precision()).c_str(),
                      fmt_pct(cc.recall()).c_str(), cc.cross_case, cc.mutants_detected,
                      cc.mutants_total, cc.benign_clean, cc.benign_total);
        os << buf;
    }
    return os.str();
}

}  // namespace smartperm
