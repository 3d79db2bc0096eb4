#include "commentbench/corpus.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <map>
#include <unordered_set>

#include "json.hpp"

#include "commentbench/error.hpp"

namespace commentbench {

using nlohmann::json;

std::string to_string(Split split) {
    switch (split) {
    case Split::train: return "train";
    case Split::valid: return "valid";
    case Split::test: return "test";
    case Split::unsplit: return "unsplit";
    }
    return "unsplit";
}

Split parse_split(std::string_view name) {
    if (name == "train") return Split::train;
    if (name == "valid") return Split::valid;
    if (name == "test") return Split::test;
    if (name == "unsplit") return Split::unsplit;
    throw UsageError("unknown split '" + std::string(name) + "'");
}

void ParallelCorpus::validate() const {
    if (fold) {
        if (split != Split::train && split != Split::test) {
            throw DataError("fold is only meaningful for train/test splits");
        }
        if (*fold < 0) throw DataError("fold must be non-negative");
    }
    std::unordered_set<std::string> seen;
    for (const auto& ex : examples) {
        if (!seen.insert(ex.id).second) throw DataError("duplicate id \"" + ex.id + "\"");
    }
}

std::vector<TokenSequence> ParallelCorpus::sources() const {
    std::vector<TokenSequence> out;
    out.reserve(examples.size());
    for (const auto& ex : examples) out.push_back(ex.source);
    return out;
}

std::vector<TokenSequence> ParallelCorpus::targets() const {
    std::vector<TokenSequence> out;
    out.reserve(examples.size());
    for (const auto& ex : examples) out.push_back(ex.target);
    return out;
}

namespace {

std::vector<std::string> read_lines(const std::filesystem::path& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw DataError("cannot open " + path.string());
    std::vector<std::string> lines;
    std::string line;
    while (std::getline(in, line)) {
        if (!line.empty() && line.back() == '\r') line.pop_back();
        lines.push_back(std::move(line));
    }
    if (in.bad()) throw DataError("read error on " + path.string());
    return lines;
}

std::string optional_string(const json& obj, const char* key) {
    auto it = obj.find(key);
    if (it == obj.end() || it->is_null()) return {};
    if (!it->is_string()) throw std::invalid_argument(std::string("field '") + key + "' is not a string");
    return it->get<std::string>();
}

// Records one malformed line: throws in strict mode, counts otherwise.
void reject(LoadResult& result, bool strict, const std::string& message) {
    if (strict) throw DataError(message);
    ++result.skipped;
    result.warnings.push_back(message);
}

} // namespace

LoadResult load_jsonl(const std::filesystem::path& path, const LoadOptions& options) {
    LoadResult result;
    std::map<std::string, std::size_t> id_lines;
    auto lines = read_lines(path);
    for (std::size_t i = 0; i < lines.size(); ++i) {
        const std::size_t lineno = i + 1;
        const std::string where = path.string() + ":" + std::to_string(lineno);
        if (lines[i].find_first_not_of(" \t") == std::string::npos) {
            reject(result, options.strict, where + ": blank line");
            continue;
        }
        ParallelExample ex;
        try {
            json rec = json::parse(lines[i]);
            if (!rec.is_object()) throw std::invalid_argument("record is not an object");
            if (!rec.contains("src") || !rec.contains("tgt")) {
                throw std::invalid_argument("missing src or tgt");
            }
            auto id_it = rec.find("id");
            if (id_it != rec.end() && !id_it->is_null()) {
                ex.id = id_it->is_string() ? id_it->get<std::string>() : id_it->dump();
            } else {
                ex.id = std::to_string(lineno);
            }
            ex.source = tokenize(rec.at("src").get<std::string>(), options.source_tokenizer);
            ex.target = tokenize(rec.at("tgt").get<std::string>(), options.target_tokenizer);
            if (auto m = rec.find("meta"); m != rec.end() && m->is_object()) {
                ex.meta = ExampleMeta{optional_string(*m, "project"), optional_string(*m, "class_name"),
                                      optional_string(*m, "path")};
            }
        } catch (const std::exception& e) {
            reject(result, options.strict, where + ": malformed record (" + e.what() + ")");
            continue;
        }
        if (!options.allow_empty && (ex.source.empty() || ex.target.empty())) {
            reject(result, options.strict, where + ": empty src or tgt");
            continue;
        }
        auto [it, inserted] = id_lines.emplace(ex.id, lineno);
        if (!inserted) {
            reject(result, options.strict,
                   path.string() + ": duplicate id \"" + ex.id + "\" at lines " + std::to_string(it->second) +
                       " and " + std::to_string(lineno));
            continue;
        }
        result.corpus.examples.push_back(std::move(ex));
    }
    return result;
}

LoadResult load_parallel_files(const std::filesystem::path& src_path, const std::filesystem::path& tgt_path,
                               const LoadOptions& options) {
    auto src = read_lines(src_path);
    auto tgt = read_lines(tgt_path);
    if (src.size() != tgt.size()) {
        throw DataError("line count mismatch " + std::to_string(src.size()) + " vs " + std::to_string(tgt.size()));
    }
    LoadResult result;
    result.corpus.examples.reserve(src.size());
    for (std::size_t i = 0; i < src.size(); ++i) {
        ParallelExample ex;
        ex.id = std::to_string(i);
        ex.source = tokenize(src[i], options.source_tokenizer);
        ex.target = tokenize(tgt[i], options.target_tokenizer);
        if (!options.allow_empty && (ex.source.empty() || ex.target.empty())) {
            reject(result, options.strict, "line " + std::to_string(i) + ": empty src or tgt");
            continue;
        }
        result.corpus.examples.push_back(std::move(ex));
    }
    return result;
}

void write_jsonl(const ParallelCorpus& corpus, const std::filesystem::path& path) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw DataError("cannot write " + path.string());
    for (const auto& ex : corpus.examples) {
        json rec = {{"id", ex.id}, {"src", ex.source.joined()}, {"tgt", ex.target.joined()}};
        if (ex.meta) {
            rec["meta"] = {{"project", ex.meta->project},
                           {"class_name", ex.meta->class_name},
                           {"path", ex.meta->path}};
        }
        out << rec.dump() << '\n';
    }
}

std::size_t nearest_rank(const std::vector<std::size_t>& sorted, double percent) {
    if (sorted.empty()) return 0;
    auto rank = static_cast<std::size_t>(std::ceil(percent / 100.0 * static_cast<double>(sorted.size())));
    rank = std::clamp<std::size_t>(rank, 1, sorted.size());
    return sorted[rank - 1];
}

namespace {

SideStats side_stats(const ParallelCorpus& corpus, bool source) {
    SideStats st;
    std::vector<std::size_t> lengths;
    std::unordered_set<std::string> vocab;
    for (const auto& ex : corpus.examples) {
        const auto& seq = source ? ex.source : ex.target;
        lengths.push_back(seq.size());
        st.tokens += seq.size();
        vocab.insert(seq.begin(), seq.end());
    }
    st.vocab = vocab.size();
    if (lengths.empty()) return st;
    std::sort(lengths.begin(), lengths.end());
    st.mean_length = static_cast<double>(st.tokens) / static_cast<double>(lengths.size());
    st.min_length = lengths.front();
    st.max_length = lengths.back();
    st.p50_length = nearest_rank(lengths, 50);
    st.p90_length = nearest_rank(lengths, 90);
    st.p99_length = nearest_rank(lengths, 99);
    return st;
}

} // namespace

CorpusStats corpus_stats(const ParallelCorpus& corpus) {
    return {corpus.size(), side_stats(corpus, true), side_stats(corpus, false)};
}

} // namespace commentbench
