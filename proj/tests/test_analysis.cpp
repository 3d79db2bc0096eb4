#include <cmath>
#include <numeric>
#include <random>

#include <gtest/gtest.h>

#include "commentbench/analysis.hpp"
#include "commentbench/error.hpp"
#include "helpers.hpp"

using namespace commentbench;
using testing_helpers::seq;

namespace {

ParallelCorpus corpus_of(const std::vector<std::pair<const char*, const char*>>& rows) {
    ParallelCorpus c;
    for (std::size_t i = 0; i < rows.size(); ++i)
        c.examples.push_back({std::to_string(i), seq(rows[i].first), seq(rows[i].second), std::nullopt});
    return c;
}

ZipfTable table_from(const std::vector<double>& counts) {
    ZipfTable t;
    const double total = std::accumulate(counts.begin(), counts.end(), 0.0);
    for (std::size_t i = 0; i < counts.size(); ++i)
        t.rows.push_back({"w" + std::to_string(i), static_cast<std::size_t>(counts[i]), counts[i] / total});
    t.total_ngrams = static_cast<std::size_t>(total);
    return t;
}

} // namespace

TEST(Zipf, TiesLexicographic) {
    const std::vector<TokenSequence> side{seq("b a"), seq("a b")};
    const auto t = zipf_table(side, 1);
    ASSERT_EQ(t.rows.size(), 2u);
    EXPECT_EQ(t.rows[0].ngram, "a");
    EXPECT_EQ(t.rows[0].count, 2u);
    EXPECT_DOUBLE_EQ(t.rows[0].relative_frequency, 0.5);
}

TEST(Zipf, ShortSequencesGiveEmptyTable) {
    const std::vector<TokenSequence> side{seq("a b"), seq("c")};
    EXPECT_TRUE(zipf_table(side, 3).rows.empty());
    EXPECT_TRUE(zipf_table(std::vector<TokenSequence>{}, 1).rows.empty());
}

TEST(Zipf, HandCountedTrigrams) {
    // trigrams: "a b c" x3, "b c d" x2, "b c a" x1, "c a b" x1
    const std::vector<TokenSequence> side{seq("a b c d"), seq("a b c a b c"), seq("b c d")};
    const auto t = zipf_table(side, 3);
    EXPECT_EQ(t.total_ngrams, 7u);
    ASSERT_EQ(t.rows.size(), 4u);
    EXPECT_EQ(t.rows[0].ngram, "a b c");
    EXPECT_EQ(t.rows[0].count, 3u);
    EXPECT_EQ(t.rows[1].ngram, "b c d");
    EXPECT_EQ(t.rows[2].ngram, "b c a");
    EXPECT_EQ(t.rows[3].ngram, "c a b");
}

TEST(Zipf, SlopeOfExactPowerLaw) {
    std::vector<double> counts;
    for (int r = 1; r <= 100; ++r) counts.push_back(1e6 / r);
    EXPECT_NEAR(zipf_slope(table_from(counts), 100), -1.0, 1e-6);
    EXPECT_NEAR(zipf_slope(table_from(std::vector<double>(50, 7.0)), 50), 0.0, 1e-6);
}

TEST(Zipf, SlopeErrors) {
    const auto t = table_from({5, 4, 3});
    EXPECT_THROW(zipf_slope(t, 1), std::invalid_argument);
    EXPECT_THROW(zipf_slope(t, 4), std::invalid_argument);
    EXPECT_NO_THROW(zipf_slope(t, 3));
}

TEST(Zipf, TemplatedSteeperThanShuffled) {
    std::mt19937_64 rng(11);
    std::vector<std::string> vocab;
    for (int i = 0; i < 200; ++i) vocab.push_back("v" + std::to_string(i));
    std::vector<TokenSequence> templated, shuffled;
    for (int s = 0; s < 300; ++s) {
        std::string t = "returns the value of the " + vocab[rng() % vocab.size()];
        templated.push_back(seq(t));
        std::string u;
        for (int k = 0; k < 6; ++k) u += vocab[rng() % vocab.size()] + " ";
        shuffled.push_back(seq(u));
    }
    const double a = zipf_slope(zipf_table(templated, 1), 20);
    const double b = zipf_slope(zipf_table(shuffled, 1), 20);
    EXPECT_LT(a, b);
}

TEST(Ablation, SingleSentenceTypeHandValue) {
    const std::vector<TokenSequence> targets(5, seq("a b c d"));
    const auto c = ablation_curve(targets, 1, 4, 3);
    ASSERT_EQ(c.points.size(), 5u);
    EXPECT_DOUBLE_EQ(c.points[0].bleu4_mean, 100.0);
    // [P b c d] vs [a b c d]: 3/4, 3/4, 2/3, 1/2
    EXPECT_NEAR(c.points[1].bleu4_mean, 100.0 * std::pow(0.75 * 0.75 * (2.0 / 3) * 0.5, 0.25), 1e-9);
    // [P Q c d]: 2/4, 2/4, 1/3, 1/2
    EXPECT_NEAR(c.points[2].bleu4_mean, 100.0 * std::pow(0.5 * 0.5 * (1.0 / 3) * 0.5, 0.25), 1e-9);
    EXPECT_EQ(c.points[4].bleu4_mean, 0.0);
    EXPECT_EQ(c.scored_targets, 5u);
}

TEST(Ablation, TrigramsPreserveLengthAndMonotone) {
    const std::vector<TokenSequence> targets{seq("returns the value of x"), seq("returns the value of y"),
                                             seq("sets the value of z to w"), seq("closes the stream now")};
    const auto c = ablation_curve(targets, 3, 6, 9);
    EXPECT_DOUBLE_EQ(c.points.front().bleu4_mean, 100.0);
    for (std::size_t i = 1; i < c.points.size(); ++i)
        EXPECT_LE(c.points[i].bleu4_mean, c.points[i - 1].bleu4_mean + 1e-12);
}

TEST(Ablation, ShortTargetsExcluded) {
    const std::vector<TokenSequence> targets{seq("a b"), seq("a b c d e")};
    const auto c = ablation_curve(targets, 1, 2, 1);
    EXPECT_EQ(c.excluded_short, 1u);
    EXPECT_EQ(c.scored_targets, 1u);
    EXPECT_DOUBLE_EQ(c.points[0].bleu4_mean, 100.0);
    const std::vector<TokenSequence> tiny{seq("a"), seq("b c")};
    EXPECT_THROW(ablation_curve(tiny, 1, 2, 1), DataError);
}

TEST(Ablation, Errors) {
    const std::vector<TokenSequence> targets{seq("a b c d")};
    EXPECT_THROW(ablation_curve(targets, 2, 3, 0), std::invalid_argument);
    EXPECT_THROW(ablation_curve(std::vector<TokenSequence>{}, 1, 3, 0), std::invalid_argument);
}

TEST(Bivariate, IdenticalExamples) {
    const auto c = corpus_of({{"int get value x", "returns the value x"},
                              {"int get value x", "returns the value x"},
                              {"int get value x", "returns the value x"}});
    const auto s = sample_bivariate(c, 50, 4);
    ASSERT_EQ(s.pairs.size(), 50u);
    for (const auto& p : s.pairs) {
        EXPECT_DOUBLE_EQ(p.in_sim, 100.0);
        EXPECT_DOUBLE_EQ(p.out_sim, 100.0);
    }
    const auto r = dependence_report(s);
    EXPECT_FALSE(r.all);
    EXPECT_EQ(r.n_nonzero, 50u);
}

TEST(Bivariate, DisjointVocabulariesHaveNoSurvivors) {
    const auto c = corpus_of({{"a1 a2 a3 a4", "b1 b2 b3 b4"}, {"c1 c2 c3 c4", "d1 d2 d3 d4"},
                              {"e1 e2 e3 e4", "f1 f2 f3 f4"}});
    const auto s = sample_bivariate(c, 30, 2);
    EXPECT_TRUE(s.surviving().empty());
    EXPECT_EQ(dependence_report(s).n_nonzero, 0u);
    EXPECT_FALSE(dependence_report(s).nonzero);
}

TEST(Bivariate, Deterministic) {
    const auto c = corpus_of({{"a b c d", "x y z w"}, {"a b e f", "x y q r"}, {"g h c d", "s t z w"},
                              {"a h c f", "x t q w"}});
    const auto s1 = sample_bivariate(c, 200, 99);
    const auto s2 = sample_bivariate(c, 200, 99);
    ASSERT_EQ(s1.pairs.size(), s2.pairs.size());
    for (std::size_t i = 0; i < s1.pairs.size(); ++i) {
        EXPECT_EQ(s1.pairs[i].in_sim, s2.pairs[i].in_sim);
        EXPECT_EQ(s1.pairs[i].out_sim, s2.pairs[i].out_sim);
    }
}

TEST(Bivariate, TooSmallCorpus) {
    EXPECT_THROW(sample_bivariate(corpus_of({{"a", "b"}}), 5, 1), DataError);
}

TEST(Dependence, PerfectAndReversed) {
    BivariateSample s;
    for (int i = 1; i <= 20; ++i) s.pairs.push_back({double(i), double(i)});
    s.count_requested = s.pairs.size();
    EXPECT_NEAR(dependence_report(s).nonzero->rho, 1.0, 1e-12);
    for (auto& p : s.pairs) p.out_sim = 100 - p.in_sim;
    EXPECT_NEAR(dependence_report(s).all->rho, -1.0, 1e-12);
}

TEST(Hexbin, SingleCornerCell) {
    BivariateSample s;
    s.pairs.assign(7, {100.0, 100.0});
    const auto cells = hexbin(s, 5);
    ASSERT_EQ(cells.size(), 25u);
    std::size_t nonzero = 0;
    for (const auto& c : cells) nonzero += c.count > 0;
    EXPECT_EQ(nonzero, 1u);
    EXPECT_EQ(cells.back().count, 7u);
    EXPECT_DOUBLE_EQ(cells.back().x_center, 90.0);
}

TEST(Hexbin, EmptyAndErrors) {
    const auto cells = hexbin(BivariateSample{}, 3);
    for (const auto& c : cells) EXPECT_EQ(c.count, 0u);
    EXPECT_THROW(hexbin(BivariateSample{}, 0), std::invalid_argument);
}

TEST(Hexbin, UniformWithinThreeSigma) {
    std::mt19937_64 rng(5);
    std::uniform_real_distribution<double> u(0.01, 100.0);
    BivariateSample s;
    const std::size_t n = 40000;
    for (std::size_t i = 0; i < n; ++i) s.pairs.push_back({u(rng), u(rng)});
    const std::size_t bins = 10;
    const auto cells = hexbin(s, bins);
    const double p = 1.0 / (bins * bins);
    const double mean = n * p;
    const double sigma = std::sqrt(n * p * (1 - p));
    std::size_t total = 0;
    for (const auto& c : cells) {
        EXPECT_NEAR(static_cast<double>(c.count), mean, 3 * sigma + 0.05 * mean);
        total += c.count;
    }
    EXPECT_EQ(total, n);
}
