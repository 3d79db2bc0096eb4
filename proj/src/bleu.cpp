#include "commentbench/bleu.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

#include "commentbench/error.hpp"
#include "commentbench/parallel.hpp"

namespace commentbench {

using nlohmann::json;

Aggregation aggregation_of(BleuVariant variant) {
    switch (variant) {
    case BleuVariant::FC:
    case BleuVariant::Moses:
    case BleuVariant::Sacre: return Aggregation::corpus;
    default: return Aggregation::sentence;
    }
}

std::string_view variant_name(BleuVariant variant) {
    switch (variant) {
    case BleuVariant::CN: return "CN";
    case BleuVariant::DC: return "DC";
    case BleuVariant::FC: return "FC";
    case BleuVariant::Moses: return "Moses";
    case BleuVariant::NCS: return "NCS";
    case BleuVariant::Sacre: return "Sacre";
    case BleuVariant::M2: return "M2";
    }
    return "?";
}

std::string_view to_string(Aggregation aggregation) {
    return aggregation == Aggregation::sentence ? "sentence" : "corpus";
}

BleuVariant parse_variant(std::string_view name) {
    std::string key = to_lower(name);
    if (key.starts_with("bleu-")) key.erase(0, 5);
    if (key == "sacrebleu") key = "sacre";
    for (auto v : all_variants()) {
        if (to_lower(variant_name(v)) == key) return v;
    }
    throw UsageError("unknown BLEU variant '" + std::string(name) + "'");
}

const std::array<BleuVariant, 7>& all_variants() {
    static const std::array<BleuVariant, 7> variants = {BleuVariant::CN,  BleuVariant::DC,    BleuVariant::FC,
                                                        BleuVariant::Moses, BleuVariant::NCS, BleuVariant::Sacre,
                                                        BleuVariant::M2};
    return variants;
}

NgramCounts ngrams(const TokenSequence& seq, int n) {
    if (n < 1) throw std::invalid_argument("n-gram order must be >= 1");
    NgramCounts counts;
    const auto order = static_cast<std::size_t>(n);
    if (seq.size() < order) return counts;
    std::string key;
    for (std::size_t i = 0; i + order <= seq.size(); ++i) {
        key = seq[i];
        for (std::size_t j = 1; j < order; ++j) {
            key.push_back(' ');
            key += seq[i + j];
        }
        ++counts[key];
    }
    return counts;
}

PrecisionFraction modified_precision(const TokenSequence& cand, std::span<const TokenSequence> refs, int n) {
    PrecisionFraction frac{n, 0, 0};
    const auto cand_counts = ngrams(cand, n);
    NgramCounts max_ref;
    for (const auto& ref : refs) {
        for (const auto& [gram, count] : ngrams(ref, n)) {
            auto& slot = max_ref[gram];
            slot = std::max(slot, count);
        }
    }
    for (const auto& [gram, count] : cand_counts) {
        frac.total += count;
        if (auto it = max_ref.find(gram); it != max_ref.end()) frac.matches += std::min(count, it->second);
    }
    return frac;
}

double brevity_penalty(std::size_t cand_len, std::size_t ref_len) {
    if (cand_len == 0) return 0.0;
    if (cand_len > ref_len) return 1.0;
    return std::exp(1.0 - static_cast<double>(ref_len) / static_cast<double>(cand_len));
}

std::size_t closest_ref_length(std::size_t cand_len, std::span<const TokenSequence> refs) {
    std::size_t best = 0;
    std::size_t best_diff = static_cast<std::size_t>(-1);
    for (const auto& ref : refs) {
        const std::size_t len = ref.size();
        const std::size_t diff = len > cand_len ? len - cand_len : cand_len - len;
        if (diff < best_diff || (diff == best_diff && len < best)) {
            best = len;
            best_diff = diff;
        }
    }
    return best;
}

namespace {

// Orders with no candidate n-grams are scored as 0 matches out of 1 so
// every smoothing rule stays defined for short candidates.
std::pair<double, double> effective_counts(const PrecisionFraction& p) {
    if (p.total == 0) return {0.0, 1.0};
    return {static_cast<double>(p.matches), static_cast<double>(p.total)};
}

double combine(BleuBreakdown& b) {
    if (b.cand_len == 0) return 0.0;
    double log_sum = 0.0;
    for (double p : b.smoothed_p) {
        if (!(p > 0.0)) return 0.0;
        log_sum += std::log(p);
    }
    return 100.0 * b.bp * std::exp(log_sum / kMaxOrder);
}

void smooth_sentence(BleuBreakdown& b, BleuVariant variant) {
    for (int i = 0; i < kMaxOrder; ++i) {
        const int n = i + 1;
        auto [m, c] = effective_counts(b.precisions[i]);
        double p = m / c;
        switch (variant) {
        case BleuVariant::CN:
        case BleuVariant::M2:
            if (n >= 2) p = (m + 1.0) / (c + 1.0);
            break;
        case BleuVariant::NCS: p = (m + 1.0) / (c + 1.0); break;
        case BleuVariant::DC:
            if (m == 0.0) {
                // ln(1) = 0 would divide by zero; such candidates score 0.
                p = b.cand_len <= 1
                        ? 0.0
                        : 1.0 / ((n - 1) + 5.0 / std::log(static_cast<double>(b.cand_len)));
            }
            break;
        default: throw std::invalid_argument("not a sentence-level BLEU variant");
        }
        b.smoothed_p[i] = p;
    }
}

void smooth_corpus(BleuBreakdown& b, BleuVariant variant) {
    int zero_orders = 0;
    for (int i = 0; i < kMaxOrder; ++i) {
        auto [m, c] = effective_counts(b.precisions[i]);
        double p = m / c;
        if (variant == BleuVariant::Sacre && m == 0.0) {
            ++zero_orders;
            p = 1.0 / (std::ldexp(1.0, zero_orders) * c);
        }
        b.smoothed_p[i] = p;
    }
}

} // namespace

BleuBreakdown sentence_bleu(const TokenSequence& cand, std::span<const TokenSequence> refs, BleuVariant variant) {
    if (aggregation_of(variant) != Aggregation::sentence) {
        throw std::invalid_argument(std::string(variant_name(variant)) + " is a corpus-level variant");
    }
    if (refs.empty()) throw std::invalid_argument("sentence_bleu needs at least one reference");
    BleuBreakdown b;
    for (int n = 1; n <= kMaxOrder; ++n) b.precisions[n - 1] = modified_precision(cand, refs, n);
    b.cand_len = cand.size();
    b.ref_len = closest_ref_length(b.cand_len, refs);
    b.bp = brevity_penalty(b.cand_len, b.ref_len);
    smooth_sentence(b, variant);
    b.score = combine(b);
    return b;
}

BleuBreakdown corpus_bleu(std::span<const EvalPair> pairs, BleuVariant variant) {
    if (aggregation_of(variant) != Aggregation::corpus) {
        throw std::invalid_argument(std::string(variant_name(variant)) + " is a sentence-level variant");
    }
    if (pairs.empty()) throw DataError("corpus_bleu needs at least one pair");
    BleuBreakdown b;
    for (int n = 1; n <= kMaxOrder; ++n) b.precisions[n - 1].order = n;
    for (const auto& pair : pairs) {
        if (pair.references.empty()) throw std::invalid_argument("pair without reference");
        for (int n = 1; n <= kMaxOrder; ++n) {
            auto frac = modified_precision(pair.candidate, pair.references, n);
            b.precisions[n - 1].matches += frac.matches;
            b.precisions[n - 1].total += frac.total;
        }
        b.cand_len += pair.candidate.size();
        b.ref_len += closest_ref_length(pair.candidate.size(), pair.references);
    }
    b.bp = brevity_penalty(b.cand_len, b.ref_len);
    smooth_corpus(b, variant);
    b.score = combine(b);
    return b;
}

double pair_score(const EvalPair& pair, BleuVariant variant) {
    if (aggregation_of(variant) == Aggregation::sentence) {
        return sentence_bleu(pair.candidate, pair.references, variant).score;
    }
    return corpus_bleu(std::span(&pair, 1), variant).score;
}

ScoreReport score_set(std::span<const EvalPair> pairs, BleuVariant variant) {
    if (pairs.empty()) throw DataError("cannot score an empty pair set");
    ScoreReport report;
    report.variant = variant;
    report.n_examples = pairs.size();
    if (aggregation_of(variant) == Aggregation::corpus) {
        report.breakdown = corpus_bleu(pairs, variant);
        report.score = report.breakdown->score;
        return report;
    }
    std::vector<double> scores(pairs.size());
    parallel_for(pairs.size(), [&](std::size_t i) {
        scores[i] = sentence_bleu(pairs[i].candidate, pairs[i].references, variant).score;
    });
    double sum = 0.0;
    for (double s : scores) sum += s;
    report.score = sum / static_cast<double>(scores.size());
    report.per_example = std::move(scores);
    return report;
}

double round2(double score) { return std::round(score * 100.0) / 100.0; }

json to_json(const BleuBreakdown& b) {
    json precisions = json::array();
    for (const auto& p : b.precisions) {
        precisions.push_back({{"order", p.order}, {"matches", p.matches}, {"total", p.total}});
    }
    return {{"precisions", precisions},
            {"smoothed_p", b.smoothed_p},
            {"bp", b.bp},
            {"cand_len", b.cand_len},
            {"ref_len", b.ref_len},
            {"score", b.score}};
}

json to_json(const ScoreReport& report, bool include_per_example) {
    json out = {{"variant", variant_name(report.variant)},
                {"aggregation", to_string(aggregation_of(report.variant))},
                {"n_examples", report.n_examples},
                {"score", round2(report.score)}};
    if (include_per_example && report.per_example) {
        json per = json::array();
        for (double s : *report.per_example) per.push_back(round2(s));
        out["per_example"] = std::move(per);
    }
    if (report.breakdown) out["breakdown"] = to_json(*report.breakdown);
    return out;
}

} // namespace commentbench
