#include "smartperm/corpus.hpp"

#include <algorithm>
#include <atomic>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <thread>

#include "text_util.hpp"

namespace smartperm {

namespace fs = std::filesystem;

std::vector<std::string> collect_sources(const std::vector<std::string>& paths) {
    std::vector<std::string> out;
    for (const auto& p : paths) {
        std::error_code ec;
        auto st = fs::status(p, ec);
        if (ec || !fs::exists(st))
            throw Error("no such file or directory: " + p);
        if (fs::is_directory(st)) {
            for (const auto& e : fs::recursive_directory_iterator(p))
                if (e.is_regular_file() && e.path().extension() == ".groovy")
                    out.push_back(e.path().generic_string());
        } else {
            out.push_back(fs::path(p).generic_string());
        }
    }
    std::sort(out.begin(), out.end());
    out.erase(std::unique(out.begin(), out.end()), out.end());
    return out;
}

std::vector<AnalysisReport> analyze_sources(const CapabilityKB& kb, const Lexicon& lex,
                                            const std::vector<SourceFile>& files,
                                            const AnalysisOptions& opts, unsigned jobs) {
    std::vector<AnalysisReport> out(files.size());
    std::atomic<std::size_t> next{0};
    auto work = [&] {
        for (std::size_t i = next++; i < files.size(); i = next++) {
            const auto& f = files[i];
            auto stem = fs::path(f.file).stem().string();
            try {
                out[i] = analyze_app(kb, lex, f.source, opts, stem);
            } catch (const Error& e) {
                out[i] = AnalysisReport{};
                out[i].app = stem;
                out[i].error = e.what();
            }
            out[i].file = f.file;
        }
    };
    jobs = std::max(1u, std::min<unsigned>(jobs, static_cast<unsigned>(std::max<std::size_t>(files.size(), 1))));
    if (jobs == 1) {
        work();
    } else {
        std::vector<std::thread> pool;
        for (unsigned j = 0; j < jobs; ++j)
            pool.emplace_back(work);
        for (auto& t : pool)
            t.join();
    }
    std::stable_sort(out.begin(), out.end(), [](const AnalysisReport& a, const AnalysisReport& b) {
        if (a.app != b.app)
            return natural_less(a.app, b.app) || (!natural_less(b.app, a.app) && a.app < b.app);
        return a.file < b.file;
    });
    return out;
}

std::vector<AnalysisReport> analyze_files(const CapabilityKB& kb, const Lexicon& lex,
                                          const std::vector<std::string>& paths,
                                          const AnalysisOptions& opts, unsigned jobs) {
    std::vector<SourceFile> files;
    files.reserve(paths.size());
    for (const auto& p : paths)
        files.push_back({p, read_file(p)});
    return analyze_sources(kb, lex, files, opts, jobs);
}

BenchRow bench_group(const CapabilityKB& kb, const Lexicon& lex, const BenchGroup& g,
                     const AnalysisOptions& opts, int repeats) {
    BenchRow row;
    row.label = g.label;
    row.apps = g.files.size();
    for (int k = 0; k < std::max(1, repeats); ++k) {
        auto start = std::chrono::steady_clock::now();
        std::size_t loc = 0, facts = 0;
        for (const auto& f : g.files) {
            auto r = analyze_app(kb, lex, f.source, opts);
            loc += r.loc;
            facts += r.facts.size();
        }
        double s = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
        if (k == 0 || s < row.seconds)
            row.seconds = s;
        row.loc = loc;
        row.facts = facts;
    }
    return row;
}

std::vector<BenchGroup> prefix_groups(const std::vector<SourceFile>& files, int levels) {
    std::vector<BenchGroup> out;
    std::size_t last = 0;
    for (int k = std::max(1, levels) - 1; k >= 0; --k) {
        std::size_t n = (files.size() + (std::size_t{1} << k) - 1) >> k;
        if (n == 0 || n == last)
            continue;
        last = n;
        BenchGroup g;
        g.label = "apps=" + std::to_string(n);
        g.files.assign(files.begin(), files.begin() + static_cast<std::ptrdiff_t>(n));
        out.push_back(std::move(g));
    }
    return out;
}

double scaling_exponent(const std::vector<BenchRow>& rows) {
    double n = 0, sx = 0, sy = 0, sxx = 0, sxy = 0;
    for (const auto& r : rows) {
        if (r.loc == 0 || r.seconds <= 0)
            continue;
        double x = std::log(static_cast<double>(r.loc));
        double y = std::log(r.seconds);
        n += 1;
        sx += x;
        sy += y;
        sxx += x * x;
        sxy += x * y;
    }
    double den = n * sxx - sx * sx;
    if (n < 2 || den == 0)
        return std::nan("");
    return (n * sxy - sx * sy) / den;
}

std::string bench_csv(const std::vector<BenchRow>& rows) {
    std::string out = "label,apps,loc,facts,seconds\n";
    char buf[200];
    for (const auto& r : rows) {
        std::snprintf(buf, sizeof buf, "%s,%zu,%zu,%zu,%.6f\n", r.label.c_str(), r.apps, r.loc,
                      r.facts, r.seconds);
        out += buf;
    }
    return out;
}

}  // namespace smartperm
