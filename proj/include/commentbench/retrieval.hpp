#pragma once

#include <cstddef>
#include <cstdint>
#include <filesystem>
#include <map>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "commentbench/bleu.hpp"
#include "commentbench/corpus.hpp"
#include "commentbench/tokenize.hpp"

namespace commentbench {

/// Query and index text go through the same analyzer.
struct AnalyzerConfig {
    TokenizerConfig tokenizer;
    bool expand_subtokens = false; // index the original token and its split parts
    Stoplist stoplist;

    std::vector<std::string> analyze(std::string_view text) const;
};

struct Bm25Params {
    double k1 = 1.2;
    double b = 0.75;

    /// Throws std::invalid_argument unless k1 >= 0 and 0 <= b <= 1.
    void validate() const;
};

struct Posting {
    std::uint32_t doc = 0;
    std::uint32_t tf = 0;

    friend bool operator==(const Posting&, const Posting&) = default;
};

/// Frozen inverted index over training code; each document carries the
/// comment of its training example as payload.
class Index {
  public:
    std::size_t n_docs() const { return doc_lengths_.size(); }
    double avgdl() const { return avgdl_; }
    std::uint32_t doc_length(std::uint32_t doc) const { return doc_lengths_.at(doc); }
    const std::string& doc_id(std::uint32_t doc) const { return doc_ids_.at(doc); }
    const TokenSequence& payload(std::uint32_t doc) const { return payloads_.at(doc); }
    const AnalyzerConfig& analyzer() const { return analyzer_; }

    /// Postings of `term`, ascending by doc; empty for unknown terms.
    const std::vector<Posting>& postings(std::string_view term) const;
    std::size_t df(std::string_view term) const { return postings(term).size(); }
    const std::map<std::string, std::vector<Posting>, std::less<>>& all_postings() const { return postings_; }

    /// Versioned binary snapshot; byte-identical for identical builds.
    std::string serialize() const;
    static Index deserialize(std::string_view bytes);
    void save(const std::filesystem::path& path) const;
    static Index load(const std::filesystem::path& path);

  private:
    friend Index build_index(const ParallelCorpus& train, const AnalyzerConfig& analyzer);

    std::map<std::string, std::vector<Posting>, std::less<>> postings_;
    std::vector<std::uint32_t> doc_lengths_;
    std::vector<std::string> doc_ids_;
    std::vector<TokenSequence> payloads_;
    double avgdl_ = 0.0;
    AnalyzerConfig analyzer_;
};

/// Indexes every training example by its analyzed source. Throws DataError
/// on an empty corpus.
Index build_index(const ParallelCorpus& train, const AnalyzerConfig& analyzer);

/// Distinct query terms in sorted order; duplicates in the query add nothing.
std::vector<std::string> query_terms(const Index& index, std::string_view code);

double idf(const Index& index, std::string_view term);

/// BM25 of one document: sum over distinct query terms of
/// idf(t) * tf*(k1+1) / (tf + k1*(1 - b + b*dl/avgdl)),
/// idf(t) = ln(1 + (N - df + 0.5)/(df + 0.5)). Throws std::out_of_range
/// for an unknown doc.
double score_doc(const Index& index, std::span<const std::string> terms, std::uint32_t doc,
                 const Bm25Params& params = {});

struct Hit {
    std::uint32_t doc = 0;
    double score = 0.0;
};

/// Top-k documents matching at least one term, by score descending then
/// doc ascending.
std::vector<Hit> retrieve(const Index& index, std::string_view code, std::size_t k,
                          const Bm25Params& params = {});

struct Generation {
    std::optional<Hit> hit; // empty when nothing matched
    TokenSequence candidate;

    bool fallback() const { return !hit.has_value(); }
};

/// Comment of the best-matching training document, or the empty sequence
/// when no document shares a term with the query.
Generation ir_generate(const Index& index, std::string_view code, const Bm25Params& params = {});

struct IrRow {
    std::string id;
    std::optional<std::string> retrieved_doc;
    double score = 0.0; // BLEU of this example under the requested variant
    TokenSequence candidate;
    TokenSequence reference;
};

struct IrEvalReport {
    ScoreReport report;
    std::size_t fallbacks = 0;
    std::vector<IrRow> rows;
};

/// Retrieves a candidate for every test example and scores the set under
/// `variant`. Throws DataError on an empty test corpus.
IrEvalReport ir_eval(const Index& index, const ParallelCorpus& test, BleuVariant variant,
                     const Bm25Params& params = {});

} // namespace commentbench
