#include "commentbench/affinity.hpp"

#include <algorithm>
#include <fstream>
#include <map>
#include <numeric>
#include <regex>
#include <set>
#include <stdexcept>
#include <tuple>
#include <unordered_map>

#include "commentbench/error.hpp"
#include "commentbench/java_scan.hpp"
#include "commentbench/parallel.hpp"
#include "commentbench/rng.hpp"
#include "commentbench/stats.hpp"

namespace commentbench {

using nlohmann::json;
namespace fs = std::filesystem;

std::string MethodRecord::id() const {
    return project + "/" + path + "#" + class_name + "." + method_name + "@" + std::to_string(line);
}

std::string_view to_string(AffinityKind kind) {
    switch (kind) {
    case AffinityKind::inter_project: return "inter_project";
    case AffinityKind::intra_project: return "intra_project";
    case AffinityKind::intra_class: return "intra_class";
    }
    return "?";
}

AffinityKind parse_affinity_kind(std::string_view name) {
    std::string key(name);
    std::replace(key.begin(), key.end(), '-', '_');
    for (auto k : {AffinityKind::inter_project, AffinityKind::intra_project, AffinityKind::intra_class}) {
        if (to_string(k) == key) return k;
    }
    throw UsageError("unknown affinity group '" + std::string(name) + "'");
}

std::vector<MethodRecord> extract_from_source(std::string_view source, const std::string& project,
                                              const std::string& path, const ExtractOptions& options,
                                              ExtractResult* stats) {
    auto scan = scan_java(source);
    if (stats) stats->undelimited += scan.undelimited;
    std::vector<MethodRecord> out;
    for (auto& m : scan.methods) {
        const std::string text = options.full_comment ? javadoc_description(m.doc_comment) : first_sentence(m.doc_comment);
        TokenSequence comment = tokenize(text, options.comment_tokenizer);
        if (comment.empty()) {
            if (stats) ++stats->empty_comments;
            continue;
        }
        MethodRecord r;
        r.project = project;
        r.path = path;
        r.class_name = std::move(m.class_name);
        r.method_name = std::move(m.method_name);
        r.param_count = m.param_count;
        r.line = m.line;
        r.comment = std::move(comment);
        r.body = std::move(m.body);
        out.push_back(std::move(r));
    }
    return out;
}

ExtractResult extract_methods(const fs::path& source_root, const ExtractOptions& options) {
    if (!fs::is_directory(source_root)) throw DataError(source_root.string() + " is not a directory");
    ExtractResult result;
    std::vector<fs::path> projects;
    for (const auto& entry : fs::directory_iterator(source_root)) {
        if (entry.is_directory()) projects.push_back(entry.path());
    }
    std::sort(projects.begin(), projects.end());
    for (const auto& project_dir : projects) {
        const std::string project = project_dir.filename().string();
        std::vector<fs::path> files;
        for (const auto& entry : fs::recursive_directory_iterator(project_dir, fs::directory_options::skip_permission_denied)) {
            if (entry.is_regular_file() && entry.path().extension() == ".java") files.push_back(entry.path());
        }
        std::sort(files.begin(), files.end());
        for (const auto& file : files) {
            ++result.files;
            std::ifstream in(file, std::ios::binary);
            if (!in) {
                ++result.unreadable;
                continue;
            }
            std::string text((std::istreambuf_iterator<char>(in)), std::istreambuf_iterator<char>());
            if (in.bad()) {
                ++result.unreadable;
                continue;
            }
            auto records = extract_from_source(text, project, fs::relative(file, project_dir).generic_string(), options, &result);
            std::move(records.begin(), records.end(), std::back_inserter(result.records));
        }
    }
    return result;
}

bool is_getter_or_setter(const MethodRecord& record) {
    static const std::regex accessor_name(R"(^(get|set|is)[A-Z].*)");
    static const std::regex return_stmt(R"(^return\b[^;]*;$)");
    static const std::regex assignment(R"(^[A-Za-z_$][\w$]*(\.[A-Za-z_$][\w$]*)*(\[[^\]]*\])?\s*=[^=][^;]*;$)");
    if (std::regex_match(record.method_name, accessor_name)) return true;
    const auto first = record.body.find_first_not_of(" \t\r\n");
    if (first == std::string::npos) return false;
    const auto last = record.body.find_last_not_of(" \t\r\n");
    const std::string stmt = record.body.substr(first, last - first + 1);
    if (std::count(stmt.begin(), stmt.end(), ';') != 1 || stmt.find('{') != std::string::npos) return false;
    return std::regex_match(stmt, return_stmt) || std::regex_match(stmt, assignment);
}

std::vector<MethodRecord> filter_records(std::vector<MethodRecord> records) {
    std::set<std::tuple<std::string, std::string, std::string, std::string>> seen;
    std::vector<MethodRecord> out;
    out.reserve(records.size());
    for (auto& r : records) {
        if (is_getter_or_setter(r)) continue;
        if (!seen.emplace(r.project, r.path, r.class_name, r.method_name).second) continue;
        out.push_back(std::move(r));
    }
    return out;
}

bool satisfies(AffinityKind kind, const MethodRecord& a, const MethodRecord& b) {
    const bool same_project = a.project == b.project;
    const bool same_class = same_project && a.path == b.path && a.class_name == b.class_name;
    switch (kind) {
    case AffinityKind::inter_project: return !same_project;
    case AffinityKind::intra_project: return same_project && !same_class;
    case AffinityKind::intra_class:
        return same_class && (a.method_name != b.method_name || a.param_count != b.param_count);
    }
    return false;
}

namespace {

// Records grouped by a key; members of group g are order[begin[g]..begin[g+1]).
struct Grouping {
    std::vector<std::size_t> order;
    std::vector<std::size_t> begin;
    std::vector<std::size_t> group_of; // per record

    std::size_t size(std::size_t g) const { return begin[g + 1] - begin[g]; }
    std::size_t groups() const { return begin.size() - 1; }
};

template <typename KeyFn>
Grouping group_by(std::span<const std::size_t> members, std::size_t n_records, KeyFn key) {
    std::map<decltype(key(0)), std::vector<std::size_t>> groups;
    for (auto i : members) groups[key(i)].push_back(i);
    Grouping g;
    g.group_of.assign(n_records, static_cast<std::size_t>(-1));
    for (auto& [k, list] : groups) {
        g.begin.push_back(g.order.size());
        for (auto i : list) {
            g.group_of[i] = g.begin.size() - 1;
            g.order.push_back(i);
        }
    }
    g.begin.push_back(g.order.size());
    return g;
}

// Uniform draw from `pool` (a contiguous block of an order vector) skipping
// the sub-range [skip_lo, skip_hi).
std::size_t draw_excluding(Rng& rng, std::span<const std::size_t> pool, std::size_t skip_lo, std::size_t skip_hi) {
    const std::size_t available = pool.size() - (skip_hi - skip_lo);
    std::size_t r = rng.below(available);
    if (r >= skip_lo) r += skip_hi - skip_lo;
    return pool[r];
}

RecordPair oriented(Rng& rng, std::size_t a, std::size_t b) {
    return rng.coin() ? RecordPair{a, b} : RecordPair{b, a};
}

std::vector<RecordPair> sample_inter(std::span<const MethodRecord> records, std::size_t count, Rng& rng) {
    std::vector<std::size_t> all(records.size());
    std::iota(all.begin(), all.end(), 0);
    const auto by_project = group_by(all, records.size(), [&](std::size_t i) { return records[i].project; });
    if (by_project.groups() < 2) throw DataError("inter_project pairs need records from at least 2 projects");
    std::vector<RecordPair> out;
    out.reserve(count);
    for (std::size_t k = 0; k < count; ++k) {
        const std::size_t a = rng.below(records.size());
        const std::size_t g = by_project.group_of[a];
        const std::size_t b = draw_excluding(rng, by_project.order, by_project.begin[g], by_project.begin[g + 1]);
        out.push_back(oriented(rng, a, b));
    }
    return out;
}

using ClassKey = std::tuple<std::string, std::string, std::string>;

ClassKey class_key(const MethodRecord& r) { return {r.project, r.path, r.class_name}; }

std::vector<RecordPair> sample_intra_project(std::span<const MethodRecord> records, std::size_t count, Rng& rng) {
    std::vector<std::size_t> all(records.size());
    std::iota(all.begin(), all.end(), 0);
    const auto by_project = group_by(all, records.size(), [&](std::size_t i) { return records[i].project; });
    // Within each project block, order members by class so a class is a
    // contiguous sub-range.
    struct Block {
        std::vector<std::size_t> members;
        std::map<ClassKey, std::pair<std::size_t, std::size_t>> class_range;
    };
    std::vector<Block> blocks(by_project.groups());
    std::vector<std::size_t> eligible;
    for (std::size_t g = 0; g < by_project.groups(); ++g) {
        auto& block = blocks[g];
        std::span<const std::size_t> members(by_project.order.data() + by_project.begin[g], by_project.size(g));
        std::map<ClassKey, std::vector<std::size_t>> classes;
        for (auto i : members) classes[class_key(records[i])].push_back(i);
        for (auto& [key, list] : classes) {
            block.class_range[key] = {block.members.size(), block.members.size() + list.size()};
            block.members.insert(block.members.end(), list.begin(), list.end());
        }
        if (classes.size() >= 2) eligible.insert(eligible.end(), members.begin(), members.end());
    }
    if (eligible.empty()) throw DataError("intra_project pairs need a project with at least 2 classes");
    std::sort(eligible.begin(), eligible.end());
    std::vector<RecordPair> out;
    out.reserve(count);
    for (std::size_t k = 0; k < count; ++k) {
        const std::size_t a = eligible[rng.below(eligible.size())];
        const auto& block = blocks[by_project.group_of[a]];
        const auto [lo, hi] = block.class_range.at(class_key(records[a]));
        out.push_back(oriented(rng, a, draw_excluding(rng, block.members, lo, hi)));
    }
    return out;
}

std::vector<RecordPair> sample_intra_class(std::span<const MethodRecord> records, std::size_t count, Rng& rng,
                                           std::size_t max_per_class) {
    std::vector<std::size_t> all(records.size());
    std::iota(all.begin(), all.end(), 0);
    const auto by_class = group_by(all, records.size(), [&](std::size_t i) { return class_key(records[i]); });
    std::vector<std::size_t> quota(by_class.groups(), 0);
    std::size_t capacity = 0;
    for (std::size_t g = 0; g < by_class.groups(); ++g) {
        const std::size_t m = by_class.size(g);
        quota[g] = std::min(max_per_class, m * (m - 1) / 2);
        capacity += quota[g];
    }
    if (capacity < count) {
        throw DataError("intra_class population supplies at most " + std::to_string(capacity) + " pairs (max " +
                        std::to_string(max_per_class) + " per class), " + std::to_string(count) + " requested");
    }
    auto rebuild = [&] {
        std::vector<std::size_t> eligible;
        for (std::size_t g = 0; g < by_class.groups(); ++g) {
            if (quota[g] == 0) continue;
            for (std::size_t k = by_class.begin[g]; k < by_class.begin[g + 1]; ++k) eligible.push_back(by_class.order[k]);
        }
        std::sort(eligible.begin(), eligible.end());
        return eligible;
    };
    std::vector<std::size_t> eligible = rebuild();
    std::set<std::pair<std::size_t, std::size_t>> used;
    std::vector<RecordPair> out;
    out.reserve(count);
    while (out.size() < count) {
        const std::size_t a = eligible[rng.below(eligible.size())];
        const std::size_t g = by_class.group_of[a];
        const std::size_t lo = by_class.begin[g];
        const std::size_t pos = static_cast<std::size_t>(std::find(by_class.order.begin() + static_cast<std::ptrdiff_t>(lo),
                                                                   by_class.order.begin() + static_cast<std::ptrdiff_t>(by_class.begin[g + 1]), a) -
                                                         by_class.order.begin());
        std::span<const std::size_t> block(by_class.order.data() + lo, by_class.size(g));
        const std::size_t partner = draw_excluding(rng, block, pos - lo, pos - lo + 1);
        const auto key = std::minmax(a, partner);
        if (!used.insert(key).second) continue;
        out.push_back(oriented(rng, a, partner));
        if (--quota[g] == 0) eligible = rebuild();
    }
    return out;
}

} // namespace

std::vector<RecordPair> sample_pairs(std::span<const MethodRecord> records, AffinityKind kind, std::size_t count,
                                     std::uint64_t seed, std::size_t max_per_class) {
    if (records.empty()) throw DataError("no records to sample from");
    Rng rng(seed);
    std::vector<RecordPair> pairs;
    switch (kind) {
    case AffinityKind::inter_project: pairs = sample_inter(records, count, rng); break;
    case AffinityKind::intra_project: pairs = sample_intra_project(records, count, rng); break;
    case AffinityKind::intra_class: pairs = sample_intra_class(records, count, rng, max_per_class); break;
    }
    for (const auto& p : pairs) {
        if (!satisfies(kind, records[p.reference], records[p.candidate])) {
            throw std::logic_error("sampled pair violates " + std::string(to_string(kind)) + ": " +
                                   records[p.reference].id() + " / " + records[p.candidate].id());
        }
    }
    return pairs;
}

AffinityReport affinity_report(std::span<const MethodRecord> records, std::span<const RecordPair> pairs,
                               std::span<const BleuVariant> variants, AffinityKind kind, std::uint64_t seed) {
    if (pairs.empty()) throw DataError("affinity_report: no pairs");
    AffinityReport report;
    report.kind = kind;
    report.n_pairs = pairs.size();
    report.seed = seed;
    std::vector<EvalPair> eval;
    eval.reserve(pairs.size());
    for (const auto& p : pairs) {
        if (p.candidate >= records.size() || p.reference >= records.size())
            throw std::out_of_range("affinity_report: pair index out of range");
        eval.push_back({records[p.candidate].comment, {records[p.reference].comment}});
    }
    for (auto variant : variants) {
        VariantSummary s;
        s.variant = variant;
        s.per_pair.resize(eval.size());
        parallel_for(eval.size(), [&](std::size_t i) { s.per_pair[i] = pair_score(eval[i], variant); });
        if (aggregation_of(variant) == Aggregation::corpus) {
            s.mean = corpus_bleu(eval, variant).score;
        } else {
            double sum = 0.0;
            for (double v : s.per_pair) sum += v;
            s.mean = sum / static_cast<double>(s.per_pair.size());
        }
        s.q1 = quantile(s.per_pair, 0.25);
        s.median = quantile(s.per_pair, 0.5);
        s.q3 = quantile(s.per_pair, 0.75);
        report.variants.push_back(std::move(s));
    }
    return report;
}

json to_json(const AffinityReport& report) {
    json variants = json::array();
    for (const auto& s : report.variants) {
        variants.push_back({{"variant", variant_name(s.variant)},
                            {"aggregation", to_string(aggregation_of(s.variant))},
                            {"mean", round2(s.mean)},
                            {"q1", round2(s.q1)},
                            {"median", round2(s.median)},
                            {"q3", round2(s.q3)}});
    }
    return {{"kind", to_string(report.kind)}, {"n_pairs", report.n_pairs}, {"seed", report.seed}, {"variants", variants}};
}

void write_records(std::span<const MethodRecord> records, const fs::path& path) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw DataError("cannot write " + path.string());
    for (const auto& r : records) {
        json rec = {{"id", r.id()},
                    {"src", r.body},
                    {"tgt", r.comment.joined()},
                    {"meta", {{"project", r.project}, {"class_name", r.class_name}, {"path", r.path}}},
                    {"method", {{"name", r.method_name}, {"param_count", r.param_count}, {"line", r.line}}}};
        out << rec.dump() << '\n';
    }
}

std::vector<MethodRecord> read_records(const fs::path& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw DataError("cannot open " + path.string());
    std::vector<MethodRecord> out;
    std::string line;
    std::size_t lineno = 0;
    while (std::getline(in, line)) {
        ++lineno;
        if (line.find_first_not_of(" \t\r") == std::string::npos) continue;
        try {
            const json rec = json::parse(line);
            MethodRecord r;
            const auto& meta = rec.at("meta");
            r.project = meta.at("project").get<std::string>();
            r.class_name = meta.at("class_name").get<std::string>();
            r.path = meta.at("path").get<std::string>();
            r.method_name = rec.at("method").at("name").get<std::string>();
            r.param_count = rec.at("method").at("param_count").get<int>();
            r.line = rec.at("method").value("line", std::size_t{0});
            r.body = rec.value("src", "");
            r.comment = tokenize(rec.at("tgt").get<std::string>(), TokenizerConfig{});
            out.push_back(std::move(r));
        } catch (const std::exception& e) {
            throw DataError(path.string() + ":" + std::to_string(lineno) + ": bad method record (" + e.what() + ")");
        }
    }
    return out;
}

void write_pairs(std::span<const RecordPair> pairs, std::span<const MethodRecord> records, const fs::path& path) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw DataError("cannot write " + path.string());
    for (const auto& p : pairs) {
        const auto& ref = records[p.reference];
        const auto& cand = records[p.candidate];
        json rec = {{"reference", ref.id()},
                    {"candidate", cand.id()},
                    {"reference_comment", ref.comment.joined()},
                    {"candidate_comment", cand.comment.joined()}};
        out << rec.dump() << '\n';
    }
}

std::vector<RecordPair> read_pairs(const fs::path& path, std::span<const MethodRecord> records) {
    std::unordered_map<std::string, std::size_t> by_id;
    for (std::size_t i = 0; i < records.size(); ++i) by_id.emplace(records[i].id(), i);
    std::ifstream in(path, std::ios::binary);
    if (!in) throw DataError("cannot open " + path.string());
    std::vector<RecordPair> out;
    std::string line;
    std::size_t lineno = 0;
    while (std::getline(in, line)) {
        ++lineno;
        if (line.find_first_not_of(" \t\r") == std::string::npos) continue;
        try {
            const json rec = json::parse(line);
            out.push_back({by_id.at(rec.at("reference").get<std::string>()),
                           by_id.at(rec.at("candidate").get<std::string>())});
        } catch (const std::exception& e) {
            throw DataError(path.string() + ":" + std::to_string(lineno) + ": bad pair (" + e.what() + ")");
        }
    }
    return out;
}

} // namespace commentbench
