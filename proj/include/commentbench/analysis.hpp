#pragma once

#include <cstddef>
#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "commentbench/corpus.hpp"
#include "commentbench/stats.hpp"
#include "commentbench/tokenize.hpp"

namespace commentbench {

struct ZipfRow {
    std::string ngram;
    std::size_t count = 0;
    double relative_frequency = 0.0;
};

struct ZipfTable {
    int n = 1;
    std::vector<ZipfRow> rows; // count descending, ties lexicographic
    std::size_t total_ngrams = 0;
};

ZipfTable zipf_table(std::span<const TokenSequence> side, int n);

/// Least-squares slope of ln(relative frequency) against ln(rank) over the
/// first `head` rows. Throws std::invalid_argument when head < 2 or the
/// table is shorter than `head`.
double zipf_slope(const ZipfTable& table, std::size_t head);

struct AblationPoint {
    std::size_t k = 0;
    double bleu4_mean = 0.0;
};

struct AblationCurve {
    int n = 1;
    std::vector<AblationPoint> points;
    std::uint64_t seed = 0;
    std::size_t scored_targets = 0;
    std::size_t excluded_short = 0; // targets shorter than 4 tokens
};

/// Replaces every occurrence of the k most frequent n-grams (k = 0..k_max)
/// by out-of-vocabulary placeholder tokens, one per covered position, and
/// records the mean sentence BLEU-M2 of perturbed against original targets.
/// Targets shorter than 4 tokens are excluded because they cannot reach 100
/// even unperturbed. Throws std::invalid_argument for n outside {1, 3} or
/// empty targets.
AblationCurve ablation_curve(std::span<const TokenSequence> targets, int n, std::size_t k_max,
                             std::uint64_t seed);

inline constexpr double kDefaultEpsilon = 1e-5;

struct SimilarityPair {
    double in_sim = 0.0;  // 0..100
    double out_sim = 0.0; // 0..100
};

struct BivariateSample {
    std::vector<SimilarityPair> pairs;
    std::size_t count_requested = 0;
    double epsilon = kDefaultEpsilon; // on the 0..1 scale
    std::uint64_t seed = 0;

    /// Pairs whose input and output similarity both exceed epsilon.
    std::vector<SimilarityPair> surviving() const;
};

/// Draws `count` random pairs of distinct examples (with replacement across
/// pairs). The first-drawn example acts as reference for both the source
/// and the target similarity, scored with sentence BLEU-M2.
BivariateSample sample_bivariate(const ParallelCorpus& corpus, std::size_t count, std::uint64_t seed,
                                 double epsilon = kDefaultEpsilon);

struct CorrelationResult {
    std::optional<SpearmanResult> nonzero; // pairs with both sims > epsilon
    std::optional<SpearmanResult> all;
    std::size_t n_nonzero = 0;
    std::size_t n_all = 0;
};

/// Spearman correlation over all pairs and over the surviving pairs.
/// Fewer than 3 pairs (or constant ranks) leaves the entry undefined.
CorrelationResult dependence_report(const BivariateSample& sample);

struct HexCell {
    double x_center = 0.0;
    double y_center = 0.0;
    std::size_t count = 0;
};

/// bins x bins square grid over [0,100]^2 counting surviving pairs, row
/// major by y then x. Throws std::invalid_argument for bins < 1.
std::vector<HexCell> hexbin(const BivariateSample& sample, std::size_t bins);

} // namespace commentbench
