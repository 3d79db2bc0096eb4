#include "commentbench/analysis.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>
#include <unordered_map>
#include <unordered_set>

#include "commentbench/bleu.hpp"
#include "commentbench/error.hpp"
#include "commentbench/parallel.hpp"
#include "commentbench/rng.hpp"

namespace commentbench {

ZipfTable zipf_table(std::span<const TokenSequence> side, int n) {
    ZipfTable table;
    table.n = n;
    NgramCounts totals;
    for (const auto& seq : side) {
        for (auto& [gram, count] : ngrams(seq, n)) {
            totals[gram] += count;
            table.total_ngrams += count;
        }
    }
    table.rows.reserve(totals.size());
    for (auto& [gram, count] : totals) table.rows.push_back({gram, count, 0.0});
    std::sort(table.rows.begin(), table.rows.end(), [](const ZipfRow& a, const ZipfRow& b) {
        return a.count != b.count ? a.count > b.count : a.ngram < b.ngram;
    });
    for (auto& row : table.rows) {
        row.relative_frequency = static_cast<double>(row.count) / static_cast<double>(table.total_ngrams);
    }
    return table;
}

double zipf_slope(const ZipfTable& table, std::size_t head) {
    if (head < 2) throw std::invalid_argument("zipf_slope: head must be >= 2");
    if (table.rows.size() < head) {
        throw std::invalid_argument("zipf_slope: table has " + std::to_string(table.rows.size()) +
                                    " rows, fewer than head=" + std::to_string(head));
    }
    double sx = 0.0;
    double sy = 0.0;
    double sxx = 0.0;
    double sxy = 0.0;
    const auto m = static_cast<double>(head);
    for (std::size_t i = 0; i < head; ++i) {
        const double x = std::log(static_cast<double>(i + 1));
        const double y = std::log(table.rows[i].relative_frequency);
        sx += x;
        sy += y;
        sxx += x * x;
        sxy += x * y;
    }
    return (m * sxy - sx * sy) / (m * sxx - sx * sx);
}

namespace {

// Rank (0-based position in the Zipf table) of the most frequent n-gram
// window covering each position; positions covered by no window get
// SIZE_MAX.
std::vector<std::size_t> coverage_ranks(const TokenSequence& seq, int n,
                                        const std::unordered_map<std::string, std::size_t>& rank_of) {
    const auto order = static_cast<std::size_t>(n);
    std::vector<std::size_t> covered(seq.size(), std::numeric_limits<std::size_t>::max());
    std::string key;
    for (std::size_t i = 0; i + order <= seq.size(); ++i) {
        key = seq[i];
        for (std::size_t j = 1; j < order; ++j) {
            key.push_back(' ');
            key += seq[i + j];
        }
        const std::size_t rank = rank_of.at(key);
        for (std::size_t j = i; j < i + order; ++j) covered[j] = std::min(covered[j], rank);
    }
    return covered;
}

std::string placeholder_salt(std::uint64_t seed, std::span<const TokenSequence> targets) {
    std::unordered_set<std::string_view> vocab;
    for (const auto& seq : targets) {
        for (const auto& t : seq) vocab.insert(t);
    }
    Rng rng(seed);
    while (true) {
        char buf[32];
        std::snprintf(buf, sizeof buf, "<rnd-%016llx", static_cast<unsigned long long>(rng.next()));
        std::string salt = buf;
        // Placeholders are salt + "-k-i>"; reject salts any corpus token starts with.
        bool clash = false;
        for (auto tok : vocab) {
            if (tok.starts_with(salt)) {
                clash = true;
                break;
            }
        }
        if (!clash) return salt;
    }
}

} // namespace

AblationCurve ablation_curve(std::span<const TokenSequence> targets, int n, std::size_t k_max,
                             std::uint64_t seed) {
    if (n != 1 && n != 3) throw std::invalid_argument("ablation_curve: n must be 1 or 3");
    if (targets.empty()) throw std::invalid_argument("ablation_curve: no targets");

    AblationCurve curve;
    curve.n = n;
    curve.seed = seed;

    const ZipfTable table = zipf_table(targets, n);
    std::unordered_map<std::string, std::size_t> rank_of;
    rank_of.reserve(table.rows.size());
    for (std::size_t r = 0; r < table.rows.size(); ++r) rank_of.emplace(table.rows[r].ngram, r);
    const std::string salt = placeholder_salt(seed, targets);

    std::vector<const TokenSequence*> scored;
    for (const auto& seq : targets) {
        if (seq.size() >= static_cast<std::size_t>(kMaxOrder)) {
            scored.push_back(&seq);
        } else {
            ++curve.excluded_short;
        }
    }
    curve.scored_targets = scored.size();
    if (scored.empty()) throw DataError("ablation_curve: no target has at least 4 tokens");

    std::vector<double> sums(k_max + 1, 0.0);
    std::vector<std::vector<double>> per_target(scored.size());
    parallel_for(scored.size(), [&](std::size_t t) {
        const TokenSequence& original = *scored[t];
        const auto covered = coverage_ranks(original, n, rank_of);
        const std::span<const TokenSequence> ref(&original, 1);
        TokenSequence perturbed = original;
        std::vector<double> scores(k_max + 1);
        double current = sentence_bleu(perturbed, ref, BleuVariant::M2).score;
        scores[0] = current;
        for (std::size_t k = 1; k <= k_max; ++k) {
            bool changed = false;
            for (std::size_t i = 0; i < covered.size(); ++i) {
                if (covered[i] == k - 1) {
                    perturbed.tokens[i] = salt + "-" + std::to_string(k) + "-" + std::to_string(i) + ">";
                    changed = true;
                }
            }
            if (changed) current = sentence_bleu(perturbed, ref, BleuVariant::M2).score;
            scores[k] = current;
        }
        per_target[t] = std::move(scores);
    });
    for (const auto& scores : per_target) {
        for (std::size_t k = 0; k <= k_max; ++k) sums[k] += scores[k];
    }
    curve.points.reserve(k_max + 1);
    for (std::size_t k = 0; k <= k_max; ++k) {
        curve.points.push_back({k, sums[k] / static_cast<double>(scored.size())});
    }
    return curve;
}

std::vector<SimilarityPair> BivariateSample::surviving() const {
    std::vector<SimilarityPair> out;
    for (const auto& p : pairs) {
        if (p.in_sim / 100.0 > epsilon && p.out_sim / 100.0 > epsilon) out.push_back(p);
    }
    return out;
}

BivariateSample sample_bivariate(const ParallelCorpus& corpus, std::size_t count, std::uint64_t seed,
                                 double epsilon) {
    const std::size_t n = corpus.size();
    if (n < 2) throw DataError("sample_bivariate: corpus needs at least 2 examples, has " + std::to_string(n));
    BivariateSample sample;
    sample.count_requested = count;
    sample.epsilon = epsilon;
    sample.seed = seed;

    Rng rng(seed);
    std::vector<std::pair<std::size_t, std::size_t>> draws(count);
    for (auto& [first, second] : draws) {
        first = rng.below(n);
        second = rng.below(n - 1);
        if (second >= first) ++second;
    }
    sample.pairs.resize(count);
    parallel_for(count, [&](std::size_t i) {
        const auto& ref = corpus.examples[draws[i].first];
        const auto& cand = corpus.examples[draws[i].second];
        sample.pairs[i].in_sim =
            sentence_bleu(cand.source, std::span(&ref.source, 1), BleuVariant::M2).score;
        sample.pairs[i].out_sim =
            sentence_bleu(cand.target, std::span(&ref.target, 1), BleuVariant::M2).score;
    });
    return sample;
}

namespace {

std::optional<SpearmanResult> maybe_spearman(const std::vector<SimilarityPair>& pairs) {
    if (pairs.size() < 3) return std::nullopt;
    std::vector<double> xs;
    std::vector<double> ys;
    xs.reserve(pairs.size());
    ys.reserve(pairs.size());
    for (const auto& p : pairs) {
        xs.push_back(p.in_sim);
        ys.push_back(p.out_sim);
    }
    return spearman(xs, ys);
}

} // namespace

CorrelationResult dependence_report(const BivariateSample& sample) {
    if (sample.pairs.empty()) throw std::invalid_argument("dependence_report: empty sample");
    CorrelationResult r;
    const auto survivors = sample.surviving();
    r.n_all = sample.pairs.size();
    r.n_nonzero = survivors.size();
    r.all = maybe_spearman(sample.pairs);
    r.nonzero = maybe_spearman(survivors);
    return r;
}

std::vector<HexCell> hexbin(const BivariateSample& sample, std::size_t bins) {
    if (bins < 1) throw std::invalid_argument("hexbin: bins must be >= 1");
    const double width = 100.0 / static_cast<double>(bins);
    std::vector<HexCell> grid(bins * bins);
    for (std::size_t iy = 0; iy < bins; ++iy) {
        for (std::size_t ix = 0; ix < bins; ++ix) {
            auto& cell = grid[iy * bins + ix];
            cell.x_center = (static_cast<double>(ix) + 0.5) * width;
            cell.y_center = (static_cast<double>(iy) + 0.5) * width;
        }
    }
    auto index = [&](double v) {
        auto i = static_cast<std::size_t>(std::clamp(v, 0.0, 100.0) / width);
        return std::min(i, bins - 1);
    };
    for (const auto& p : sample.surviving()) ++grid[index(p.out_sim) * bins + index(p.in_sim)].count;
    return grid;
}

} // namespace commentbench
