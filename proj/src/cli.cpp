#include "smartperm/cli.hpp"

#include <chrono>
#include <filesystem>
#include <fstream>
#include <map>
#include <sstream>

#include <CLI11.hpp>

#include "smartperm/corpus.hpp"
#include "smartperm/report.hpp"
#include "smartperm/synthetic.hpp"

namespace smartperm {

namespace {

namespace fs = std::filesystem;

constexpr int kExitClean = 0;
constexpr int kExitFindings = 1;
constexpr int kExitError = 2;

struct Common {
    std::string kb = std::string(SMARTPERM_DEFAULT_DATA_DIR) + "/capabilities.kb";
    std::string lexicon = std::string(SMARTPERM_DEFAULT_DATA_DIR) + "/lexicon.txt";
};

struct RunConfig {
    std::vector<std::string> inputs;
    std::vector<int> cases{1, 2, 3};
    std::string clauses = "a,b,c";
    std::string format = "jsonl";
    unsigned jobs = 1;
    std::uint64_t seed = 1;
    std::string out;
    int call_depth = 3;
};

std::string slurp(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in)
        throw Error("cannot open '" + path + "'");
    std::ostringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

void spit(const fs::path& path, const std::string& text) {
    if (path.has_parent_path())
        fs::create_directories(path.parent_path());
    std::ofstream out(path, std::ios::binary);
    if (!out)
        throw Error("cannot write '" + path.string() + "'");
    out << text;
}

AnalysisOptions analysis_options(const RunConfig& cfg) {
    AnalysisOptions o;
    if (cfg.cases.empty())
        throw Error("--cases must name at least one case");
    o.engine.cases.clear();
    for (int c : cfg.cases) {
        if (c < 1 || c > 3)
            throw Error("--cases accepts 1, 2 and 3");
        o.engine.cases.insert(c);
    }
    o.engine.case3_action = o.engine.case3_trigger_action = o.engine.case3_condition_action = false;
    if (cfg.clauses != "none") {
        std::stringstream ss(cfg.clauses);
        std::string part;
        while (std::getline(ss, part, ',')) {
            if (part == "a")
                o.engine.case3_action = true;
            else if (part == "b")
                o.engine.case3_trigger_action = true;
            else if (part == "c")
                o.engine.case3_condition_action = true;
            else if (!part.empty())
                throw Error("--case3-clauses accepts a, b, c or none");
        }
    }
    if (cfg.call_depth < 0)
        throw Error("--call-depth must be non-negative");
    o.extract.call_depth = cfg.call_depth;
    return o;
}

struct Loaded {
    CapabilityKB kb;
    Lexicon lex;
};

Loaded load(const Common& c) {
    Loaded l;
    l.kb = load_kb(c.kb);
    l.lex = load_lexicon(c.lexicon, l.kb);
    return l;
}

// Writes to --out when given, else to the stream.
void emit(const std::string& path, std::ostream& out, const std::string& text) {
    if (path.empty())
        out << text;
    else
        spit(path, text);
}

int cmd_analyze(const Common& common, const RunConfig& cfg, std::ostream& out, std::ostream& err) {
    auto opts = analysis_options(cfg);
    auto data = load(common);
    auto start = std::chrono::steady_clock::now();
    auto reports = analyze_files(data.kb, data.lex, collect_sources(cfg.inputs), opts, cfg.jobs);
    double wall = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();

    bool errors = false, findings = false;
    for (const auto& r : reports) {
        if (r.error) {
            errors = true;
            err << "error: " << r.file << ": " << *r.error << "\n";
        }
        findings = findings || !r.findings.empty();
    }
    auto stats = format_stats(corpus_stats(reports, wall));
    if (cfg.format == "table") {
        emit(cfg.out, out, format_table(reports) + stats + "\n");
    } else {
        emit(cfg.out, out, format_jsonl(reports));
        err << stats << "\n";
    }
    return errors ? kExitError : findings ? kExitFindings : kExitClean;
}

int cmd_facts(const Common& common, const RunConfig& cfg, std::ostream& out, std::ostream& err) {
    auto opts = analysis_options(cfg);
    auto data = load(common);
    auto reports = analyze_files(data.kb, data.lex, collect_sources(cfg.inputs), opts, cfg.jobs);
    bool errors = false;
    std::string joined;
    for (const auto& r : reports) {
        if (r.error) {
            errors = true;
            err << "error: " << r.file << ": " << *r.error << "\n";
            continue;
        }
        if (cfg.out.empty()) {
            if (!joined.empty())
                joined += "\n";
            joined += serialize_facts(r.facts);
        } else {
            spit(fs::path(cfg.out) / (fs::path(r.file).stem().string() + ".pl"),
                 serialize_facts(r.facts));
        }
    }
    out << joined;
    return errors ? kExitError : kExitClean;
}

int cmd_mutate(const Common& common, const RunConfig& cfg, int case_id, std::ostream& out,
               std::ostream& err) {
    if (cfg.out.empty())
        throw Error("mutate needs --out DIR");
    if (case_id < 0 || case_id > 3)
        throw Error("--case accepts 0 (rotate), 1, 2 or 3");
    auto data = load(common);
    Manifest m;
    std::size_t i = 0;
    for (const auto& path : collect_sources(cfg.inputs)) {
        int c = case_id == 0 ? static_cast<int>(i % 3) + 1 : case_id;
        ++i;
        try {
            auto rec = inject(c, slurp(path), data.kb, data.lex, cfg.seed + i - 1);
            auto name = fs::path(path).stem().string() + "_case" + std::to_string(c) + ".groovy";
            spit(fs::path(cfg.out) / name, rec.mutated_source);
            m.mutants.push_back(truth_of(rec, name));
            out << name << ": " << rec.note << "\n";
        } catch (const MutationError& e) {
            err << "skipped " << path << ": " << e.what() << "\n";
        }
    }
    spit(fs::path(cfg.out) / "manifest.json", manifest_to_json(m));
    return m.mutants.empty() ? kExitError : kExitClean;
}

int cmd_generate(const Common& common, const RunConfig& cfg, std::size_t count, std::ostream& out) {
    if (cfg.out.empty())
        throw Error("generate needs --out DIR");
    auto data = load(common);
    SyntheticOptions so;
    so.count = count;
    so.seed = cfg.seed;
    Manifest m;
    for (const auto& a : generate_corpus(data.kb, data.lex, so)) {
        spit(fs::path(cfg.out) / a.file, a.source);
        if (a.mutant)
            m.mutants.push_back(truth_of(*a.mutant, a.file));
        else
            m.benign.push_back(a.file);
    }
    spit(fs::path(cfg.out) / "manifest.json", manifest_to_json(m));
    out << "wrote " << count << " apps (" << m.mutants.size() << " mutants) to " << cfg.out << "\n";
    return kExitClean;
}

std::string normalized(const fs::path& p) {
    return fs::weakly_canonical(p).generic_string();
}

int cmd_eval(const std::string& manifest_path, const std::string& report_path, std::ostream& out) {
    auto m = parse_manifest(slurp(manifest_path));
    auto base = fs::path(manifest_path).parent_path();
    for (auto& t : m.mutants)
        t.file = normalized(base / t.file);
    for (auto& b : m.benign)
        b = normalized(base / b);
    auto report = parse_jsonl_report(slurp(report_path));
    for (auto& r : report)
        r.file = normalized(r.file);
    out << format_eval(evaluate(report, m));
    return kExitClean;
}

int cmd_bench(const Common& common, const RunConfig& cfg, std::size_t count, int repeats,
              const std::string& grouping, std::ostream& out, std::ostream& err) {
    auto opts = analysis_options(cfg);
    auto data = load(common);
    std::vector<BenchGroup> groups;
    if (cfg.inputs.empty()) {
        SyntheticOptions so;
        so.count = count;
        so.seed = cfg.seed;
        auto corpus = generate_corpus(data.kb, data.lex, so);
        if (grouping == "prefix") {
            std::vector<SourceFile> files;
            for (auto& a : corpus)
                files.push_back({a.file, std::move(a.source)});
            groups = prefix_groups(files);
        } else {
            std::map<int, BenchGroup> by_rules;
            for (auto& a : corpus) {
                auto& g = by_rules[a.rules];
                g.label = "rules=" + std::to_string(a.rules);
                g.files.push_back({a.file, std::move(a.source)});
            }
            for (auto& [n, g] : by_rules)
                groups.push_back(std::move(g));
        }
    } else {
        for (const auto& p : cfg.inputs) {
            BenchGroup g;
            g.label = p;
            for (const auto& f : collect_sources({p}))
                g.files.push_back({f, slurp(f)});
            groups.push_back(std::move(g));
        }
    }
    std::vector<BenchRow> rows;
    for (const auto& g : groups)
        rows.push_back(bench_group(data.kb, data.lex, g, opts, repeats));
    emit(cfg.out, out, bench_csv(rows));
    err << "exponent=" << scaling_exponent(rows) << "\n";
    return kExitClean;
}

}  // namespace

int run_cli(int argc, const char* const* argv, std::ostream& out, std::ostream& err) {
    CLI::App app{"Static over-privilege analyzer for SmartThings apps", "smartperm"};
    app.require_subcommand(1);
    Common common;
    app.add_option("--kb", common.kb, "capability model file")->check(CLI::ExistingFile);
    app.add_option("--lexicon", common.lexicon, "description lexicon file")
        ->check(CLI::ExistingFile);

    RunConfig cfg;
    int case_id = 0;
    std::size_t count = 230;
    int repeats = 3;
    std::string grouping = "prefix";
    std::string manifest, report;

    auto analysis_flags = [&](CLI::App* sub) {
        sub->add_option("--cases", cfg.cases, "cases to check")->delimiter(',');
        sub->add_option("--case3-clauses", cfg.clauses, "case-3 clauses: a,b,c or none");
        sub->add_option("--call-depth", cfg.call_depth, "helper call levels followed");
    };

    auto* analyze = app.add_subcommand("analyze", "report over-privilege findings");
    analyze->add_option("inputs", cfg.inputs, ".groovy files or directories")->required();
    analysis_flags(analyze);
    analyze->add_option("--format", cfg.format)->check(CLI::IsMember({"jsonl", "table"}));
    analyze->add_option("--jobs", cfg.jobs, "worker threads")->check(CLI::PositiveNumber);
    analyze->add_option("--out", cfg.out, "write the report here instead of stdout");

    auto* facts = app.add_subcommand("facts", "emit fact files");
    facts->add_option("inputs", cfg.inputs)->required();
    analysis_flags(facts);
    facts->add_option("--jobs", cfg.jobs)->check(CLI::PositiveNumber);
    facts->add_option("--out", cfg.out, "directory for one .pl file per app");

    auto* mutate = app.add_subcommand("mutate", "inject one over-privilege case per app");
    mutate->add_option("inputs", cfg.inputs)->required();
    mutate->add_option("--case", case_id, "1, 2, 3, or 0 to rotate");
    mutate->add_option("--seed", cfg.seed);
    mutate->add_option("--out", cfg.out, "output directory")->required();

    auto* gen = app.add_subcommand("generate", "write a synthetic labeled corpus");
    gen->add_option("--count", count);
    gen->add_option("--seed", cfg.seed);
    gen->add_option("--out", cfg.out, "output directory")->required();

    auto* eval = app.add_subcommand("eval", "score a findings report against a manifest");
    eval->add_option("--manifest", manifest)->required()->check(CLI::ExistingFile);
    eval->add_option("--report", report, "JSONL report from analyze")
        ->required()
        ->check(CLI::ExistingFile);

    auto* bench = app.add_subcommand("bench", "time analysis per sub-corpus, CSV output");
    bench->add_option("inputs", cfg.inputs, "one sub-corpus per path; synthetic when omitted");
    analysis_flags(bench);
    bench->add_flag("--synthetic", "use the synthetic corpus (the default without inputs)");
    bench->add_option("--count", count, "synthetic app count");
    bench->add_option("--seed", cfg.seed);
    bench->add_option("--repeat", repeats, "timing repeats, fastest kept");
    bench->add_option("--group", grouping, "synthetic sub-corpora: nested prefixes or rules per app")
        ->check(CLI::IsMember({"prefix", "rules"}));
    bench->add_option("--out", cfg.out, "write the CSV here instead of stdout");

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        int code = app.exit(e, out, err);
        return code == 0 ? kExitClean : kExitError;
    }

    try {
        if (*analyze)
            return cmd_analyze(common, cfg, out, err);
        if (*facts)
            return cmd_facts(common, cfg, out, err);
        if (*mutate)
            return cmd_mutate(common, cfg, case_id, out, err);
        if (*gen)
            return cmd_generate(common, cfg, count, out);
        if (*eval)
            return cmd_eval(manifest, report, out);
        if (*bench) {
            if (bench->count("--synthetic"))
                cfg.inputs.clear();
            return cmd_bench(common, cfg, count, repeats, grouping, out, err);
        }
    } catch (const std::exception& e) {
        err << "error: " << e.what() << "\n";
        return kExitError;
    }
    return kExitError;
}

}  // namespace smartperm
