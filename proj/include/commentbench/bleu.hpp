#pragma once

#include <array>
#include <cstddef>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <unordered_map>
#include <vector>

#include "json.hpp"

#include "commentbench/tokenize.hpp"

namespace commentbench {

inline constexpr int kMaxOrder = 4;

/// The seven BLEU flavours found in code-comment evaluation code.
///  - CN, M2: sentence BLEU, add-one on p_n for n >= 2.
///  - NCS: sentence BLEU, add-one on every order including unigrams.
///  - DC: sentence BLEU, zero p_n replaced by 1/((n-1) + 5/ln(len(hyp))).
///  - FC, Moses: unsmoothed corpus BLEU.
///  - Sacre: corpus BLEU with exponential smoothing of zero-match orders.
enum class BleuVariant { CN, DC, FC, Moses, NCS, Sacre, M2 };

enum class Aggregation { sentence, corpus };

Aggregation aggregation_of(BleuVariant variant);
std::string_view variant_name(BleuVariant variant);
std::string_view to_string(Aggregation aggregation);

/// Accepts the short names ("CN", "M2", "Sacre", ...) case-insensitively,
/// with or without a "bleu-" prefix, plus "sacrebleu". Throws UsageError.
BleuVariant parse_variant(std::string_view name);

/// All variants in canonical order: CN, DC, FC, Moses, NCS, Sacre, M2.
const std::array<BleuVariant, 7>& all_variants();

/// n-gram multiset; keys are the n tokens joined by single spaces.
using NgramCounts = std::unordered_map<std::string, std::size_t>;

/// Throws std::invalid_argument when n < 1.
NgramCounts ngrams(const TokenSequence& seq, int n);

struct PrecisionFraction {
    int order = 1;
    std::size_t matches = 0; // clipped overlap count
    std::size_t total = 0;   // candidate n-gram count
};

/// Clipped n-gram precision: each candidate n-gram is credited at most as
/// many times as it occurs in the single most generous reference.
PrecisionFraction modified_precision(const TokenSequence& cand, std::span<const TokenSequence> refs, int n);

double brevity_penalty(std::size_t cand_len, std::size_t ref_len);

/// Reference length closest to `cand_len`; the shorter one wins ties.
std::size_t closest_ref_length(std::size_t cand_len, std::span<const TokenSequence> refs);

struct BleuBreakdown {
    std::array<PrecisionFraction, kMaxOrder> precisions{};
    std::array<double, kMaxOrder> smoothed_p{};
    double bp = 0.0;
    std::size_t cand_len = 0;
    std::size_t ref_len = 0;
    double score = 0.0; // 0..100
};

struct EvalPair {
    TokenSequence candidate;
    std::vector<TokenSequence> references;
};

/// Sentence BLEU for CN, M2, NCS and DC. An empty candidate scores 0; an
/// empty reference list throws std::invalid_argument, as does a corpus
/// variant.
BleuBreakdown sentence_bleu(const TokenSequence& cand, std::span<const TokenSequence> refs, BleuVariant variant);

/// Corpus BLEU for FC, Moses and Sacre: matches, totals and lengths are
/// summed over all pairs before the precisions are combined.
BleuBreakdown corpus_bleu(std::span<const EvalPair> pairs, BleuVariant variant);

/// Score of one pair under any variant (corpus variants treat the pair as a
/// one-example corpus).
double pair_score(const EvalPair& pair, BleuVariant variant);

struct ScoreReport {
    BleuVariant variant = BleuVariant::M2;
    std::size_t n_examples = 0;
    double score = 0.0;
    std::optional<std::vector<double>> per_example; // sentence variants only
    std::optional<BleuBreakdown> breakdown;         // corpus variants only
};

/// Sentence variants: arithmetic mean of per-example scores. Corpus
/// variants: one cumulative computation. Throws DataError on an empty set.
ScoreReport score_set(std::span<const EvalPair> pairs, BleuVariant variant);

/// Rounds to two decimals, the reporting precision for scores.
double round2(double score);

nlohmann::json to_json(const BleuBreakdown& breakdown);

/// {variant, aggregation, n_examples, score, per_example?, breakdown?}
nlohmann::json to_json(const ScoreReport& report, bool include_per_example = false);

} // namespace commentbench
