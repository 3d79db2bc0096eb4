#include "commentbench/retrieval.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>
#include <unordered_map>

#include "commentbench/error.hpp"
#include "commentbench/parallel.hpp"

namespace commentbench {

std::vector<std::string> AnalyzerConfig::analyze(std::string_view text) const {
    const TokenSequence base = tokenize(text, tokenizer);
    std::vector<std::string> terms;
    terms.reserve(base.size());
    for (const auto& tok : base) {
        if (!stoplist.contains(tok)) terms.push_back(tok);
        if (!expand_subtokens) continue;
        auto parts = split_subtokens(tok, tokenizer.lowercase);
        if (parts.size() < 2) continue;
        for (auto& part : parts) {
            if (!stoplist.contains(part)) terms.push_back(std::move(part));
        }
    }
    return terms;
}

void Bm25Params::validate() const {
    if (!(k1 >= 0.0)) throw std::invalid_argument("BM25 k1 must be >= 0");
    if (!(b >= 0.0 && b <= 1.0)) throw std::invalid_argument("BM25 b must be in [0, 1]");
}

const std::vector<Posting>& Index::postings(std::string_view term) const {
    static const std::vector<Posting> none;
    auto it = postings_.find(term);
    return it == postings_.end() ? none : it->second;
}

Index build_index(const ParallelCorpus& train, const AnalyzerConfig& analyzer) {
    if (train.empty()) throw DataError("cannot build an index over an empty corpus");
    Index index;
    index.analyzer_ = analyzer;
    const auto n = static_cast<std::uint32_t>(train.size());
    index.doc_lengths_.reserve(n);
    index.doc_ids_.reserve(n);
    index.payloads_.reserve(n);
    std::uint64_t total_length = 0;
    for (std::uint32_t doc = 0; doc < n; ++doc) {
        const auto& ex = train.examples[doc];
        const auto terms = analyzer.analyze(ex.source.joined());
        std::map<std::string_view, std::uint32_t> tf;
        for (const auto& t : terms) ++tf[t];
        for (const auto& [term, count] : tf) {
            auto it = index.postings_.find(term);
            if (it == index.postings_.end()) it = index.postings_.emplace(std::string(term), std::vector<Posting>{}).first;
            it->second.push_back({doc, count});
        }
        index.doc_lengths_.push_back(static_cast<std::uint32_t>(terms.size()));
        index.doc_ids_.push_back(ex.id);
        index.payloads_.push_back(ex.target);
        total_length += terms.size();
    }
    index.avgdl_ = static_cast<double>(total_length) / static_cast<double>(n);
    return index;
}

std::vector<std::string> query_terms(const Index& index, std::string_view code) {
    auto terms = index.analyzer().analyze(code);
    std::sort(terms.begin(), terms.end());
    terms.erase(std::unique(terms.begin(), terms.end()), terms.end());
    return terms;
}

double idf(const Index& index, std::string_view term) {
    const auto n = static_cast<double>(index.n_docs());
    const auto df = static_cast<double>(index.df(term));
    return std::log(1.0 + (n - df + 0.5) / (df + 0.5));
}

namespace {

double term_weight(double idf_value, std::uint32_t tf, std::uint32_t dl, double avgdl, const Bm25Params& p) {
    const double norm = avgdl > 0.0 ? static_cast<double>(dl) / avgdl : 1.0;
    const double f = static_cast<double>(tf);
    return idf_value * f * (p.k1 + 1.0) / (f + p.k1 * (1.0 - p.b + p.b * norm));
}

} // namespace

double score_doc(const Index& index, std::span<const std::string> terms, std::uint32_t doc,
                 const Bm25Params& params) {
    if (doc >= index.n_docs()) throw std::out_of_range("unknown doc " + std::to_string(doc));
    double score = 0.0;
    for (const auto& term : terms) {
        const auto& list = index.postings(term);
        auto it = std::lower_bound(list.begin(), list.end(), doc,
                                   [](const Posting& p, std::uint32_t d) { return p.doc < d; });
        if (it == list.end() || it->doc != doc) continue;
        score += term_weight(idf(index, term), it->tf, index.doc_length(doc), index.avgdl(), params);
    }
    return score;
}

std::vector<Hit> retrieve(const Index& index, std::string_view code, std::size_t k, const Bm25Params& params) {
    if (k < 1) throw std::invalid_argument("retrieve: k must be >= 1");
    params.validate();
    const auto terms = query_terms(index, code);
    // Term-at-a-time accumulation in the same term order as score_doc, so
    // both paths produce bit-identical sums.
    std::unordered_map<std::uint32_t, double> acc;
    for (const auto& term : terms) {
        const auto& list = index.postings(term);
        if (list.empty()) continue;
        const double w = idf(index, term);
        for (const auto& p : list) {
            acc[p.doc] += term_weight(w, p.tf, index.doc_length(p.doc), index.avgdl(), params);
        }
    }
    std::vector<Hit> hits;
    hits.reserve(acc.size());
    for (const auto& [doc, score] : acc) hits.push_back({doc, score});
    auto better = [](const Hit& a, const Hit& b) { return a.score != b.score ? a.score > b.score : a.doc < b.doc; };
    if (hits.size() > k) {
        std::partial_sort(hits.begin(), hits.begin() + static_cast<std::ptrdiff_t>(k), hits.end(), better);
        hits.resize(k);
    } else {
        std::sort(hits.begin(), hits.end(), better);
    }
    return hits;
}

Generation ir_generate(const Index& index, std::string_view code, const Bm25Params& params) {
    Generation gen;
    auto hits = retrieve(index, code, 1, params);
    if (hits.empty()) return gen;
    gen.hit = hits.front();
    gen.candidate = index.payload(hits.front().doc);
    return gen;
}

IrEvalReport ir_eval(const Index& index, const ParallelCorpus& test, BleuVariant variant, const Bm25Params& params) {
    if (test.empty()) throw DataError("ir_eval: empty test corpus");
    params.validate();
    IrEvalReport out;
    std::vector<Generation> gens(test.size());
    parallel_for(test.size(), [&](std::size_t i) {
        gens[i] = ir_generate(index, test.examples[i].source.joined(), params);
    });
    std::vector<EvalPair> pairs;
    pairs.reserve(test.size());
    for (std::size_t i = 0; i < test.size(); ++i) {
        const auto& ex = test.examples[i];
        if (gens[i].fallback()) ++out.fallbacks;
        pairs.push_back({gens[i].candidate, {ex.target}});
    }
    out.report = score_set(pairs, variant);
    out.rows.resize(test.size());
    parallel_for(test.size(), [&](std::size_t i) {
        IrRow& row = out.rows[i];
        row.id = test.examples[i].id;
        if (gens[i].hit) row.retrieved_doc = index.doc_id(gens[i].hit->doc);
        row.score = out.report.per_example ? (*out.report.per_example)[i] : pair_score(pairs[i], variant);
        row.candidate = pairs[i].candidate;
        row.reference = test.examples[i].target;
    });
    return out;
}

} // namespace commentbench
