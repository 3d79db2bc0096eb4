// commentbench: scoring, corpus analysis, IR baseline and comment-affinity runs.

#include <algorithm>
#include <cstdint>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "json.hpp"

#include "commentbench/affinity.hpp"
#include "commentbench/analysis.hpp"
#include "commentbench/bleu.hpp"
#include "commentbench/corpus.hpp"
#include "commentbench/error.hpp"
#include "commentbench/report.hpp"
#include "commentbench/retrieval.hpp"
#include "commentbench/stats.hpp"

namespace fs = std::filesystem;
using nlohmann::json;
using namespace commentbench;

namespace {

void log(const std::string& msg) { std::cerr << "commentbench: " << msg << '\n'; }

void print_json(const json& j) { std::cout << j.dump(2) << '\n'; }

std::vector<std::string> read_lines(const fs::path& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw DataError("cannot read " + path.string());
    std::vector<std::string> lines;
    std::string line;
    while (std::getline(in, line)) {
        if (!line.empty() && line.back() == '\r') line.pop_back();
        lines.push_back(std::move(line));
    }
    return lines;
}

std::vector<BleuVariant> parse_variants(const std::vector<std::string>& names) {
    std::vector<BleuVariant> out;
    for (const auto& name : names) {
        if (to_lower(name) == "all") {
            for (auto v : all_variants())
                if (std::find(out.begin(), out.end(), v) == out.end()) out.push_back(v);
            continue;
        }
        const auto v = parse_variant(name);
        if (std::find(out.begin(), out.end(), v) == out.end()) out.push_back(v);
    }
    return out;
}

std::vector<std::string> variant_names(const std::vector<BleuVariant>& variants) {
    std::vector<std::string> out;
    for (auto v : variants) out.emplace_back(variant_name(v));
    return out;
}

// ---- corpus arguments -------------------------------------------------------

struct CorpusOptions {
    std::string src_tokenizer = "passthrough";
    std::string tgt_tokenizer = "passthrough";
    bool strict = false;

    LoadOptions load_options() const {
        LoadOptions o;
        o.source_tokenizer = TokenizerConfig::parse(src_tokenizer);
        o.target_tokenizer = TokenizerConfig::parse(tgt_tokenizer);
        o.strict = strict;
        return o;
    }
};

void add_corpus_options(CLI::App* cmd, CorpusOptions& opts) {
    cmd->add_option("--src-tokenizer", opts.src_tokenizer, "Tokenizer for the code side")->capture_default_str();
    cmd->add_option("--tgt-tokenizer", opts.tgt_tokenizer, "Tokenizer for the comment side")->capture_default_str();
    cmd->add_flag("--strict", opts.strict, "Fail on malformed lines and duplicate ids");
}

struct LoadedCorpus {
    std::string label;
    std::vector<fs::path> files;
    ParallelCorpus corpus;
};

// "data.jsonl" or "code.txt,comments.txt", optionally prefixed with "label=".
LoadedCorpus load_corpus_arg(const std::string& arg, const CorpusOptions& opts) {
    LoadedCorpus out;
    std::string spec = arg;
    if (const auto eq = spec.find('='); eq != std::string::npos) {
        out.label = spec.substr(0, eq);
        spec = spec.substr(eq + 1);
    }
    LoadResult result;
    if (const auto comma = spec.find(','); comma != std::string::npos) {
        out.files = {spec.substr(0, comma), spec.substr(comma + 1)};
        result = load_parallel_files(out.files[0], out.files[1], opts.load_options());
    } else {
        out.files = {spec};
        result = load_jsonl(out.files[0], opts.load_options());
    }
    if (out.label.empty()) out.label = out.files[0].stem().string();
    for (const auto& w : result.warnings) log(out.label + ": " + w);
    if (result.skipped) log(out.label + ": skipped " + std::to_string(result.skipped) + " record(s)");
    out.corpus = std::move(result.corpus);
    return out;
}

std::vector<LoadedCorpus> load_corpora(const std::vector<std::string>& args, const CorpusOptions& opts) {
    std::vector<LoadedCorpus> out;
    std::map<std::string, int> seen;
    for (const auto& a : args) {
        out.push_back(load_corpus_arg(a, opts));
        const int n = seen[out.back().label]++;
        if (n) out.back().label += "_" + std::to_string(n + 1);
    }
    return out;
}

// ---- manifests --------------------------------------------------------------

struct Run {
    RunManifest manifest;

    Run(std::string command, int argc, char** argv) {
        manifest.command = std::move(command);
        json args = json::array();
        for (int i = 1; i < argc; ++i) args.push_back(argv[i]);
        manifest.flags["argv"] = std::move(args);
        manifest.timestamp = utc_timestamp();
    }
    void input(const fs::path& p) { add_input(manifest, p); }
    void output(const fs::path& p) { manifest.outputs.push_back(p.string()); }
    void write(const fs::path& path) {
        write_text(path, manifest.to_json().dump(2) + "\n");
        log("wrote " + path.string());
    }
};

fs::path prepare_dir(const fs::path& dir) {
    std::error_code ec;
    fs::create_directories(dir, ec);
    if (ec || !fs::is_directory(dir)) throw DataError("cannot create directory " + dir.string());
    return dir;
}

json optional_spearman(const std::optional<SpearmanResult>& r) {
    if (!r) return json{{"rho", nullptr}, {"p", nullptr}, {"undefined", true}};
    const char* method = r->method == PValueMethod::exact_permutation ? "exact_permutation"
                         : r->method == PValueMethod::monte_carlo     ? "monte_carlo"
                                                                      : "t_approximation";
    return json{{"rho", r->rho}, {"p", r->p}, {"method", method}, {"undefined", false}};
}

// ---- score ------------------------------------------------------------------

struct ScoreArgs {
    std::string cand;
    std::vector<std::string> refs;
    std::vector<std::string> variants{"M2"};
    std::string tokenizer = "passthrough";
    bool per_example = false;
    std::string out;
};

int cmd_score(const ScoreArgs& a, Run& run) {
    const auto variants = parse_variants(a.variants);
    const auto tok = TokenizerConfig::parse(a.tokenizer);
    const auto cands = read_lines(a.cand);
    std::vector<std::vector<std::string>> refs;
    for (const auto& r : a.refs) {
        refs.push_back(read_lines(r));
        if (refs.back().size() != cands.size())
            throw DataError("line count mismatch " + std::to_string(cands.size()) + " vs " +
                            std::to_string(refs.back().size()) + " (" + r + ")");
    }
    std::vector<EvalPair> pairs(cands.size());
    for (std::size_t i = 0; i < cands.size(); ++i) {
        pairs[i].candidate = tokenize(cands[i], tok);
        for (const auto& r : refs) pairs[i].references.push_back(tokenize(r[i], tok));
    }
    json reports = json::array();
    for (auto v : variants) reports.push_back(to_json(score_set(pairs, v), a.per_example));
    json out{{"tokenizer", tok.id()}, {"reports", reports}};
    print_json(out);
    if (!a.out.empty()) {
        write_text(a.out, out.dump(2) + "\n");
        run.input(a.cand);
        for (const auto& r : a.refs) run.input(r);
        run.output(a.out);
        run.write(a.out + ".manifest.json");
    }
    return 0;
}

// ---- analyze ----------------------------------------------------------------

struct AnalyzeArgs {
    std::vector<std::string> corpora;
    CorpusOptions corpus_opts;
    std::string side = "target";
    int n = 1;
    std::size_t head = 10;
    std::size_t k_max = 10;
    std::size_t count = 10000;
    std::uint64_t seed = 0;
    double epsilon = kDefaultEpsilon;
    std::size_t bins = 20;
    std::string out_dir;
};

int cmd_zipf(const AnalyzeArgs& a, Run& run) {
    if (a.side != "target" && a.side != "source") throw UsageError("--side must be source or target");
    const fs::path dir = prepare_dir(a.out_dir);
    const auto corpora = load_corpora(a.corpora, a.corpus_opts);
    std::vector<Series> series;
    json results = json::array();
    for (const auto& c : corpora) {
        const auto side = a.side == "target" ? c.corpus.targets() : c.corpus.sources();
        const auto table = zipf_table(side, a.n);
        const fs::path csv_path = dir / ("zipf_" + c.label + ".csv");
        CsvWriter csv(csv_path);
        csv.row({"rank", "ngram", "count", "relative_frequency"});
        Series s{c.label, {}};
        for (std::size_t r = 0; r < table.rows.size(); ++r) {
            const auto& row = table.rows[r];
            csv.row({std::to_string(r + 1), row.ngram, std::to_string(row.count), format_number(row.relative_frequency)});
            s.points.emplace_back(static_cast<double>(r + 1), row.relative_frequency);
        }
        series.push_back(std::move(s));
        json entry{{"corpus", c.label}, {"n", a.n}, {"side", a.side}, {"total_ngrams", table.total_ngrams},
                   {"types", table.rows.size()}};
        if (table.rows.size() >= std::max<std::size_t>(a.head, 2))
            entry["slope"] = zipf_slope(table, a.head);
        else
            entry["slope"] = nullptr;
        results.push_back(std::move(entry));
        for (const auto& f : c.files) run.input(f);
        run.output(csv_path);
    }
    const fs::path svg = dir / "zipf.svg";
    write_text(svg, line_plot_svg(series, {"Zipf plot (n=" + std::to_string(a.n) + ")", "rank",
                                           "relative frequency", true, true}));
    run.output(svg);
    run.manifest.flags["n"] = a.n;
    run.manifest.flags["side"] = a.side;
    run.manifest.flags["head"] = a.head;
    run.write(dir / "manifest.json");
    print_json({{"zipf", results}});
    return 0;
}

int cmd_ablate(const AnalyzeArgs& a, Run& run) {
    const fs::path dir = prepare_dir(a.out_dir);
    const auto corpora = load_corpora(a.corpora, a.corpus_opts);
    const fs::path csv_path = dir / "ablation.csv";
    CsvWriter csv(csv_path);
    csv.row({"corpus", "n", "k", "bleu4_mean"});
    std::vector<Series> series;
    json results = json::array();
    for (const auto& c : corpora) {
        const auto targets = c.corpus.targets();
        const auto curve = ablation_curve(targets, a.n, a.k_max, a.seed);
        Series s{c.label, {}};
        json points = json::array();
        for (const auto& p : curve.points) {
            csv.row({c.label, std::to_string(a.n), std::to_string(p.k), format_number(p.bleu4_mean)});
            s.points.emplace_back(static_cast<double>(p.k), p.bleu4_mean);
            points.push_back({{"k", p.k}, {"bleu4_mean", round2(p.bleu4_mean)}});
        }
        series.push_back(std::move(s));
        results.push_back({{"corpus", c.label}, {"n", a.n}, {"scored_targets", curve.scored_targets},
                           {"excluded_short", curve.excluded_short}, {"points", points}});
        if (curve.excluded_short) log(c.label + ": excluded " + std::to_string(curve.excluded_short) + " short target(s)");
        for (const auto& f : c.files) run.input(f);
    }
    run.output(csv_path);
    const fs::path svg = dir / "ablation.svg";
    write_text(svg, line_plot_svg(series, {"Frequent n-gram ablation (n=" + std::to_string(a.n) + ")", "k",
                                           "BLEU-M2 vs original", false, false}));
    run.output(svg);
    run.manifest.flags["n"] = a.n;
    run.manifest.flags["k_max"] = a.k_max;
    run.manifest.seeds["seed"] = a.seed;
    run.write(dir / "manifest.json");
    print_json({{"ablation", results}, {"seed", a.seed}});
    return 0;
}

int cmd_bivariate(const AnalyzeArgs& a, Run& run) {
    if (a.bins < 1) throw UsageError("--bins must be at least 1");
    const fs::path dir = prepare_dir(a.out_dir);
    const auto corpora = load_corpora(a.corpora, a.corpus_opts);
    std::vector<CorrelationResult> corr;
    for (const auto& c : corpora) {
        const auto sample = sample_bivariate(c.corpus, a.count, a.seed, a.epsilon);
        corr.push_back(dependence_report(sample));
        const fs::path pairs_csv = dir / ("bivariate_" + c.label + ".csv");
        {
            CsvWriter csv(pairs_csv);
            csv.row({"in_sim", "out_sim"});
            for (const auto& p : sample.pairs) csv.row({format_number(p.in_sim), format_number(p.out_sim)});
        }
        const auto cells = hexbin(sample, a.bins);
        const fs::path hex_csv = dir / ("hexbin_" + c.label + ".csv");
        {
            CsvWriter csv(hex_csv);
            csv.row({"x_center", "y_center", "count"});
            for (const auto& cell : cells)
                csv.row({format_number(cell.x_center), format_number(cell.y_center), std::to_string(cell.count)});
        }
        const fs::path svg = dir / ("hexbin_" + c.label + ".svg");
        write_text(svg, hexbin_svg(cells, a.bins, {c.label + ": input vs output similarity", "input similarity (BLEU-M2)",
                                                   "output similarity (BLEU-M2)"}));
        for (const auto& f : c.files) run.input(f);
        run.output(pairs_csv);
        run.output(hex_csv);
        run.output(svg);
    }
    // BH across corpora, separately for the nonzero and the all-pairs tests.
    auto adjust = [&](auto member) {
        std::vector<double> ps;
        std::vector<std::size_t> idx;
        for (std::size_t i = 0; i < corr.size(); ++i)
            if (const auto& r = corr[i].*member) ps.push_back(r->p), idx.push_back(i);
        std::vector<std::optional<double>> out(corr.size());
        const auto adj = bh_adjust(ps);
        for (std::size_t k = 0; k < idx.size(); ++k) out[idx[k]] = adj[k];
        return out;
    };
    const auto adj_nonzero = adjust(&CorrelationResult::nonzero);
    const auto adj_all = adjust(&CorrelationResult::all);
    const fs::path table = dir / "correlations.csv";
    CsvWriter csv(table);
    csv.row({"corpus", "n_nonzero", "rho_nonzero", "p_nonzero", "p_nonzero_bh", "n_all", "rho_all", "p_all", "p_all_bh"});
    json results = json::array();
    auto cell = [](const std::optional<double>& v) { return v ? format_number(*v) : std::string("NA"); };
    for (std::size_t i = 0; i < corr.size(); ++i) {
        const auto& r = corr[i];
        json nz = optional_spearman(r.nonzero);
        json all = optional_spearman(r.all);
        nz["n"] = r.n_nonzero;
        all["n"] = r.n_all;
        nz["p_adjusted"] = adj_nonzero[i] ? json(*adj_nonzero[i]) : json(nullptr);
        all["p_adjusted"] = adj_all[i] ? json(*adj_all[i]) : json(nullptr);
        results.push_back({{"corpus", corpora[i].label}, {"nonzero", nz}, {"all", all}});
        csv.row({corpora[i].label, std::to_string(r.n_nonzero),
                 cell(r.nonzero ? std::optional(r.nonzero->rho) : std::nullopt),
                 cell(r.nonzero ? std::optional(r.nonzero->p) : std::nullopt), cell(adj_nonzero[i]),
                 std::to_string(r.n_all), cell(r.all ? std::optional(r.all->rho) : std::nullopt),
                 cell(r.all ? std::optional(r.all->p) : std::nullopt), cell(adj_all[i])});
    }
    run.output(table);
    run.manifest.flags["count"] = a.count;
    run.manifest.flags["epsilon"] = a.epsilon;
    run.manifest.flags["bins"] = a.bins;
    run.manifest.seeds["seed"] = a.seed;
    run.write(dir / "manifest.json");
    print_json({{"bivariate", results}, {"seed", a.seed}, {"count", a.count}, {"epsilon", a.epsilon}});
    return 0;
}

// ---- ir ---------------------------------------------------------------------

struct IrArgs {
    std::string train;
    std::string test;
    std::string snapshot;
    CorpusOptions corpus_opts;
    std::string analyzer_tokenizer = "punctuation";
    bool expand_subtokens = false;
    bool stoplist = false;
    std::vector<std::string> variants{"M2"};
    double k1 = 1.2;
    double b = 0.75;
    std::string code;
    std::string code_file;
    std::size_t k = 5;
    std::string tsv;
};

AnalyzerConfig analyzer_of(const IrArgs& a) {
    AnalyzerConfig cfg;
    cfg.tokenizer = TokenizerConfig::parse(a.analyzer_tokenizer);
    cfg.expand_subtokens = a.expand_subtokens;
    if (a.stoplist) cfg.stoplist = default_stoplist();
    return cfg;
}

json index_summary(const Index& index) {
    return {{"docs", index.n_docs()}, {"terms", index.all_postings().size()}, {"avgdl", index.avgdl()}};
}

int cmd_ir_index(const IrArgs& a, Run& run) {
    const auto train = load_corpus_arg(a.train, a.corpus_opts);
    const auto index = build_index(train.corpus, analyzer_of(a));
    index.save(a.snapshot);
    for (const auto& f : train.files) run.input(f);
    run.output(a.snapshot);
    run.manifest.flags["analyzer"] = index.analyzer().tokenizer.id();
    run.manifest.flags["expand_subtokens"] = a.expand_subtokens;
    run.write(a.snapshot + ".manifest.json");
    json out = index_summary(index);
    out["snapshot"] = a.snapshot;
    print_json(out);
    return 0;
}

Index obtain_index(const IrArgs& a, Run& run) {
    if (!a.snapshot.empty()) {
        run.input(a.snapshot);
        return Index::load(a.snapshot);
    }
    if (a.train.empty()) throw UsageError("either --snapshot or --train is required");
    const auto train = load_corpus_arg(a.train, a.corpus_opts);
    for (const auto& f : train.files) run.input(f);
    return build_index(train.corpus, analyzer_of(a));
}

int cmd_ir_query(const IrArgs& a, Run& run) {
    const Bm25Params params{a.k1, a.b};
    params.validate();
    const auto index = obtain_index(a, run);
    std::string code = a.code;
    if (!a.code_file.empty()) {
        std::ifstream in(a.code_file, std::ios::binary);
        if (!in) throw DataError("cannot read " + a.code_file);
        code.assign(std::istreambuf_iterator<char>(in), {});
    }
    const auto hits = retrieve(index, code, a.k, params);
    json list = json::array();
    for (const auto& h : hits)
        list.push_back({{"doc", h.doc}, {"id", index.doc_id(h.doc)}, {"score", h.score},
                        {"comment", index.payload(h.doc).joined()}});
    if (hits.empty()) log("no document shares a term with the query; fallback to empty comment");
    print_json({{"hits", list}, {"fallback", hits.empty()}});
    return 0;
}

std::string tsv_clean(std::string s) {
    std::replace_if(s.begin(), s.end(), [](char c) { return c == '\t' || c == '\n' || c == '\r'; }, ' ');
    return s;
}

int cmd_ir_eval(const IrArgs& a, Run& run) {
    const Bm25Params params{a.k1, a.b};
    params.validate();
    const auto variants = parse_variants(a.variants);
    const auto index = obtain_index(a, run);
    const auto test = load_corpus_arg(a.test, a.corpus_opts);
    for (const auto& f : test.files) run.input(f);
    std::vector<IrEvalReport> evals;
    for (auto v : variants) evals.push_back(ir_eval(index, test.corpus, v, params));
    json reports = json::array();
    for (const auto& e : evals) reports.push_back(to_json(e.report));
    const std::size_t fallbacks = evals.front().fallbacks;
    if (fallbacks) log(std::to_string(fallbacks) + " test example(s) fell back to the empty comment");
    print_json({{"reports", reports}, {"fallbacks", fallbacks}, {"n_test", test.corpus.size()},
                {"index", index_summary(index)}, {"k1", a.k1}, {"b", a.b}});
    if (!a.tsv.empty()) {
        std::ofstream out(a.tsv, std::ios::binary);
        if (!out) throw DataError("cannot write " + a.tsv);
        out << "id\tretrieved_doc";
        for (auto v : variants) out << "\tscore_" << variant_name(v);
        out << "\tcandidate\treference\n";
        for (std::size_t i = 0; i < evals.front().rows.size(); ++i) {
            const auto& row = evals.front().rows[i];
            out << tsv_clean(row.id) << '\t' << (row.retrieved_doc ? tsv_clean(*row.retrieved_doc) : std::string());
            for (const auto& e : evals) out << '\t' << format_number(e.rows[i].score);
            out << '\t' << row.candidate.joined() << '\t' << row.reference.joined() << '\n';
        }
        run.output(a.tsv);
        run.manifest.flags["variants"] = variant_names(variants);
        run.write(a.tsv + ".manifest.json");
    }
    return 0;
}

// ---- affinity ---------------------------------------------------------------

struct AffinityArgs {
    std::string root;
    std::string records;
    std::string out;
    std::string out_dir;
    bool full_comment = false;
    bool no_filter = false;
    std::vector<std::string> kinds;
    std::vector<std::string> pairs;
    std::size_t count = 1000;
    std::uint64_t seed = 0;
    bool seed_given = false;
    std::size_t max_per_class = 6;
    std::vector<std::string> variants{"all"};
    std::string plot_variant = "M2";
};

int cmd_affinity_extract(const AffinityArgs& a, Run& run) {
    ExtractOptions opts;
    opts.full_comment = a.full_comment;
    auto result = extract_methods(a.root, opts);
    const std::size_t raw = result.records.size();
    auto records = a.no_filter ? std::move(result.records) : filter_records(std::move(result.records));
    write_records(records, a.out);
    run.input(a.root);
    run.output(a.out);
    run.manifest.flags["full_comment"] = a.full_comment;
    run.manifest.flags["filter"] = !a.no_filter;
    run.write(a.out + ".manifest.json");
    print_json({{"files", result.files},
                {"unreadable", result.unreadable},
                {"undelimited", result.undelimited},
                {"empty_comments", result.empty_comments},
                {"extracted", raw},
                {"records", records.size()},
                {"out", a.out}});
    return 0;
}

std::vector<AffinityKind> parse_kinds(const std::vector<std::string>& names) {
    std::vector<AffinityKind> out;
    for (const auto& n : names) out.push_back(parse_affinity_kind(n));
    return out;
}

int cmd_affinity_sample(const AffinityArgs& a, Run& run) {
    if (a.kinds.size() != 1) throw UsageError("sample takes exactly one --kind");
    const auto kind = parse_affinity_kind(a.kinds.front());
    const auto records = read_records(a.records);
    const auto pairs = sample_pairs(records, kind, a.count, a.seed, a.max_per_class);
    write_pairs(pairs, records, a.out);
    run.input(a.records);
    run.output(a.out);
    run.manifest.flags["kind"] = std::string(to_string(kind));
    run.manifest.flags["count"] = a.count;
    run.manifest.flags["max_per_class"] = a.max_per_class;
    run.manifest.seeds["seed"] = a.seed;
    run.write(a.out + ".manifest.json");
    print_json({{"kind", to_string(kind)}, {"pairs", pairs.size()}, {"seed", a.seed}, {"out", a.out}});
    return 0;
}

int cmd_affinity_report(const AffinityArgs& a, Run& run) {
    const auto variants = parse_variants(a.variants);
    const auto plot_variant = parse_variant(a.plot_variant);
    auto kinds = parse_kinds(a.kinds);
    const auto records = read_records(a.records);
    run.input(a.records);
    std::vector<std::vector<RecordPair>> groups;
    if (!a.pairs.empty()) {
        if (kinds.size() != a.pairs.size()) throw UsageError("give one --kind per --pairs file");
        for (const auto& p : a.pairs) {
            groups.push_back(read_pairs(p, records));
            run.input(p);
        }
    } else {
        if (!a.seed_given) throw UsageError("--seed is required when pairs are sampled");
        if (kinds.empty()) kinds = {AffinityKind::inter_project, AffinityKind::intra_project, AffinityKind::intra_class};
        for (auto k : kinds) groups.push_back(sample_pairs(records, k, a.count, a.seed, a.max_per_class));
        run.manifest.seeds["seed"] = a.seed;
    }
    const fs::path dir = prepare_dir(a.out_dir);
    json reports = json::array();
    std::vector<std::pair<std::string, std::vector<double>>> violins;
    std::vector<AffinityReport> all_reports;
    for (std::size_t g = 0; g < groups.size(); ++g) {
        const auto report = affinity_report(records, groups[g], variants, kinds[g], a.seed);
        reports.push_back(to_json(report));
        const fs::path csv_path = dir / ("affinity_" + std::string(to_string(kinds[g])) + ".csv");
        CsvWriter csv(csv_path);
        std::vector<std::string> header{"reference", "candidate"};
        for (const auto& s : report.variants) header.emplace_back(variant_name(s.variant));
        csv.row(header);
        for (std::size_t i = 0; i < groups[g].size(); ++i) {
            std::vector<std::string> row{records[groups[g][i].reference].id(), records[groups[g][i].candidate].id()};
            for (const auto& s : report.variants) row.push_back(format_number(s.per_pair[i]));
            csv.row(row);
        }
        run.output(csv_path);
        all_reports.push_back(report);
    }
    if (all_reports.size() == 1) {
        for (const auto& s : all_reports.front().variants) violins.emplace_back(variant_name(s.variant), s.per_pair);
    } else {
        for (const auto& r : all_reports)
            for (const auto& s : r.variants)
                if (s.variant == plot_variant) violins.emplace_back(to_string(r.kind), s.per_pair);
    }
    const fs::path svg = dir / "affinity_violin.svg";
    write_text(svg, violin_svg(violins, {"Comment similarity by affinity group", "",
                                         all_reports.size() == 1 ? "BLEU" : "BLEU-" + std::string(variant_name(plot_variant))}));
    run.output(svg);
    run.manifest.flags["variants"] = variant_names(variants);
    run.manifest.flags["count"] = a.count;
    run.manifest.flags["max_per_class"] = a.max_per_class;
    run.write(dir / "manifest.json");
    print_json({{"reports", reports}});
    return 0;
}

// ---- stats ------------------------------------------------------------------

json side_json(const SideStats& s) {
    return {{"tokens", s.tokens},         {"vocab", s.vocab},           {"mean_length", s.mean_length},
            {"min_length", s.min_length}, {"p50_length", s.p50_length}, {"p90_length", s.p90_length},
            {"p99_length", s.p99_length}, {"max_length", s.max_length}};
}

int cmd_stats(const std::vector<std::string>& corpora_args, const CorpusOptions& opts) {
    const auto corpora = load_corpora(corpora_args, opts);
    json out = json::array();
    for (const auto& c : corpora) {
        const auto s = corpus_stats(c.corpus);
        out.push_back({{"corpus", c.label}, {"examples", s.examples}, {"source", side_json(s.source)},
                       {"target", side_json(s.target)}});
    }
    print_json({{"stats", out}});
    return 0;
}

} // namespace

int main(int argc, char** argv) {
    CLI::App app{"Code-comment translation evaluation toolkit"};
    app.set_version_flag("--version", tool_version());
    app.require_subcommand(1);

    ScoreArgs score;
    auto* score_cmd = app.add_subcommand("score", "Score candidate comments against references");
    score_cmd->add_option("--cand", score.cand, "Candidate file, one comment per line")->required()->check(CLI::ExistingFile);
    score_cmd->add_option("--ref", score.refs, "Reference file (repeat for multiple references)")
        ->required()
        ->check(CLI::ExistingFile);
    score_cmd->add_option("--variant", score.variants, "BLEU variant(s) or 'all'")->capture_default_str();
    score_cmd->add_option("--tokenizer", score.tokenizer, "whitespace|punctuation|passthrough[+subtoken][+lower][+stop]")
        ->capture_default_str();
    score_cmd->add_flag("--per-example", score.per_example, "Include per-example scores for sentence variants");
    score_cmd->add_option("--out", score.out, "Also write the JSON report (and its manifest) here");

    AnalyzeArgs analyze;
    auto* analyze_cmd = app.add_subcommand("analyze", "Corpus analyses");
    analyze_cmd->require_subcommand(1);
    auto common_analyze = [&](CLI::App* cmd) {
        cmd->add_option("--corpus", analyze.corpora, "[label=]corpus.jsonl or [label=]code.txt,comments.txt")
            ->required();
        cmd->add_option("--out-dir", analyze.out_dir, "Directory for CSV, SVG and manifest")->required();
        add_corpus_options(cmd, analyze.corpus_opts);
    };
    auto* zipf_cmd = analyze_cmd->add_subcommand("zipf", "n-gram frequency table and log-log plot");
    common_analyze(zipf_cmd);
    zipf_cmd->add_option("--n", analyze.n, "n-gram order")->capture_default_str()->check(CLI::PositiveNumber);
    zipf_cmd->add_option("--side", analyze.side, "source or target")->capture_default_str();
    zipf_cmd->add_option("--head", analyze.head, "Rows used for the slope fit")->capture_default_str();
    auto* ablate_cmd = analyze_cmd->add_subcommand("ablate", "Frequent n-gram ablation curve");
    common_analyze(ablate_cmd);
    ablate_cmd->add_option("--n", analyze.n, "n-gram order (1 or 3)")->capture_default_str();
    ablate_cmd->add_option("--k-max", analyze.k_max, "Largest number of ablated n-grams")->capture_default_str();
    ablate_cmd->add_option("--seed", analyze.seed, "Seed for placeholder tokens")->required();
    auto* bivariate_cmd = analyze_cmd->add_subcommand("bivariate", "Input/output similarity dependence");
    common_analyze(bivariate_cmd);
    bivariate_cmd->add_option("--count", analyze.count, "Number of sampled pairs")->capture_default_str();
    bivariate_cmd->add_option("--seed", analyze.seed, "Sampling seed")->required();
    bivariate_cmd->add_option("--epsilon", analyze.epsilon, "Zero threshold on the 0..1 scale")->capture_default_str();
    bivariate_cmd->add_option("--bins", analyze.bins, "Hexbin grid size")->capture_default_str();

    IrArgs ir;
    auto* ir_cmd = app.add_subcommand("ir", "BM25 retrieval baseline");
    ir_cmd->require_subcommand(1);
    auto analyzer_opts = [&](CLI::App* cmd) {
        cmd->add_option("--analyzer", ir.analyzer_tokenizer, "Tokenizer applied to code")->capture_default_str();
        cmd->add_flag("--expand-subtokens", ir.expand_subtokens, "Also index identifier subtokens");
        cmd->add_flag("--stoplist", ir.stoplist, "Drop Java keywords and punctuation from code");
        add_corpus_options(cmd, ir.corpus_opts);
    };
    auto bm25_opts = [&](CLI::App* cmd) {
        cmd->add_option("--k1", ir.k1, "BM25 k1")->capture_default_str();
        cmd->add_option("--b", ir.b, "BM25 b")->capture_default_str();
    };
    auto* ir_index = ir_cmd->add_subcommand("index", "Build and save an index over training code");
    ir_index->add_option("--train", ir.train, "Training corpus")->required();
    ir_index->add_option("--snapshot", ir.snapshot, "Output snapshot file")->required();
    analyzer_opts(ir_index);
    auto* ir_query = ir_cmd->add_subcommand("query", "Retrieve training documents for a code snippet");
    ir_query->add_option("--snapshot", ir.snapshot, "Index snapshot");
    ir_query->add_option("--train", ir.train, "Training corpus (when no snapshot)");
    auto* code_opt = ir_query->add_option("--code", ir.code, "Query code text");
    ir_query->add_option("--code-file", ir.code_file, "File holding the query code")->excludes(code_opt);
    ir_query->add_option("--k", ir.k, "Number of hits")->capture_default_str();
    analyzer_opts(ir_query);
    bm25_opts(ir_query);
    auto* ir_eval_cmd = ir_cmd->add_subcommand("eval", "Retrieve a comment for every test example and score");
    ir_eval_cmd->add_option("--snapshot", ir.snapshot, "Index snapshot");
    ir_eval_cmd->add_option("--train", ir.train, "Training corpus (when no snapshot)");
    ir_eval_cmd->add_option("--test", ir.test, "Test corpus")->required();
    ir_eval_cmd->add_option("--variant", ir.variants, "BLEU variant(s) or 'all'")->capture_default_str();
    ir_eval_cmd->add_option("--tsv", ir.tsv, "Per-example TSV output");
    analyzer_opts(ir_eval_cmd);
    bm25_opts(ir_eval_cmd);

    AffinityArgs aff;
    auto* aff_cmd = app.add_subcommand("affinity", "Comment similarity across method affinity groups");
    aff_cmd->require_subcommand(1);
    auto* aff_extract = aff_cmd->add_subcommand("extract", "Extract documented Java methods");
    aff_extract->add_option("--root", aff.root, "Directory of projects (one per subdirectory)")
        ->required()
        ->check(CLI::ExistingDirectory);
    aff_extract->add_option("--out", aff.out, "Records JSONL")->required();
    aff_extract->add_flag("--full-comment", aff.full_comment, "Keep the whole description, not the first sentence");
    aff_extract->add_flag("--no-filter", aff.no_filter, "Keep getters, setters and overloads");
    auto* aff_sample = aff_cmd->add_subcommand("sample", "Sample method pairs of one affinity kind");
    aff_sample->add_option("--records", aff.records, "Records JSONL")->required();
    aff_sample->add_option("--kind", aff.kinds, "inter_project|intra_project|intra_class")->required();
    aff_sample->add_option("--count", aff.count, "Number of pairs")->capture_default_str();
    aff_sample->add_option("--seed", aff.seed, "Sampling seed")->required();
    aff_sample->add_option("--max-per-class", aff.max_per_class, "Pair cap per class")->capture_default_str();
    aff_sample->add_option("--out", aff.out, "Pairs JSONL")->required();
    auto* aff_report = aff_cmd->add_subcommand("report", "Score pairs under BLEU variants");
    aff_report->add_option("--records", aff.records, "Records JSONL")->required();
    aff_report->add_option("--pairs", aff.pairs, "Pairs JSONL from 'affinity sample' (repeatable)");
    aff_report->add_option("--kind", aff.kinds, "Kind per pairs file, or kinds to sample (default all three)");
    aff_report->add_option("--count", aff.count, "Pairs per kind when sampling")->capture_default_str();
    aff_report->add_option("--seed", aff.seed, "Sampling seed")->each([&](const std::string&) { aff.seed_given = true; });
    aff_report->add_option("--max-per-class", aff.max_per_class, "Pair cap per class")->capture_default_str();
    aff_report->add_option("--variant", aff.variants, "BLEU variant(s) or 'all'")->capture_default_str();
    aff_report->add_option("--plot-variant", aff.plot_variant, "Variant drawn when several kinds are compared")
        ->capture_default_str();
    aff_report->add_option("--out-dir", aff.out_dir, "Directory for CSV, SVG and manifest")->required();

    std::vector<std::string> stats_corpora;
    CorpusOptions stats_opts;
    auto* stats_cmd = app.add_subcommand("stats", "Corpus size and length statistics");
    stats_cmd->add_option("--corpus", stats_corpora, "[label=]corpus.jsonl or [label=]code.txt,comments.txt")->required();
    add_corpus_options(stats_cmd, stats_opts);

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e);
        return code == 0 ? 0 : 1;
    }

    try {
        auto path_of = [](CLI::App* cmd) {
            std::string p;
            for (auto* c = cmd; c && c->get_parent(); c = c->get_parent()) p = c->get_name() + (p.empty() ? "" : " " + p);
            return p;
        };
        auto make_run = [&](CLI::App* cmd) { return Run(path_of(cmd), argc, argv); };
        if (score_cmd->parsed()) {
            auto run = make_run(score_cmd);
            return cmd_score(score, run);
        }
        if (zipf_cmd->parsed()) {
            auto run = make_run(zipf_cmd);
            return cmd_zipf(analyze, run);
        }
        if (ablate_cmd->parsed()) {
            auto run = make_run(ablate_cmd);
            return cmd_ablate(analyze, run);
        }
        if (bivariate_cmd->parsed()) {
            auto run = make_run(bivariate_cmd);
            return cmd_bivariate(analyze, run);
        }
        if (ir_index->parsed()) {
            auto run = make_run(ir_index);
            return cmd_ir_index(ir, run);
        }
        if (ir_query->parsed()) {
            auto run = make_run(ir_query);
            return cmd_ir_query(ir, run);
        }
        if (ir_eval_cmd->parsed()) {
            auto run = make_run(ir_eval_cmd);
            return cmd_ir_eval(ir, run);
        }
        if (aff_extract->parsed()) {
            auto run = make_run(aff_extract);
            return cmd_affinity_extract(aff, run);
        }
        if (aff_sample->parsed()) {
            auto run = make_run(aff_sample);
            return cmd_affinity_sample(aff, run);
        }
        if (aff_report->parsed()) {
            auto run = make_run(aff_report);
            return cmd_affinity_report(aff, run);
        }
        if (stats_cmd->parsed()) return cmd_stats(stats_corpora, stats_opts);
    } catch (const UsageError& e) {
        log(std::string("usage error: ") + e.what());
        return 1;
    } catch (const std::invalid_argument& e) {
        log(std::string("usage error: ") + e.what());
        return 1;
    } catch (const DataError& e) {
        log(std::string("data error: ") + e.what());
        return 2;
    } catch (const std::exception& e) {
        log(std::string("error: ") + e.what());
        return 2;
    }
    return 1;
}
