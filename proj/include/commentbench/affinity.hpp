#pragma once

#include <cstddef>
#include <cstdint>
#include <filesystem>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "commentbench/bleu.hpp"
#include "commentbench/tokenize.hpp"

namespace commentbench {

struct MethodRecord {
    std::string project;
    std::string path; // relative to the project folder
    std::string class_name;
    std::string method_name;
    int param_count = 0;
    std::size_t line = 0; // 1-based line of the declaration
    TokenSequence comment; // first sentence unless extracted with full_comment
    std::string body;

    std::string id() const;
};

/// Affinity groups ordered by expected comment similarity.
enum class AffinityKind { inter_project, intra_project, intra_class };

std::string_view to_string(AffinityKind kind);
AffinityKind parse_affinity_kind(std::string_view name);

struct ExtractOptions {
    bool full_comment = false;
    TokenizerConfig comment_tokenizer = TokenizerConfig::parse("punctuation+lower");
};

struct ExtractResult {
    std::vector<MethodRecord> records;
    std::size_t files = 0;
    std::size_t unreadable = 0;
    std::size_t undelimited = 0;
    std::size_t empty_comments = 0;
};

/// Records from one Java source text.
std::vector<MethodRecord> extract_from_source(std::string_view source, const std::string& project,
                                              const std::string& path, const ExtractOptions& options,
                                              ExtractResult* stats = nullptr);

/// Walks `source_root`, treating each top-level directory as a project and
/// every *.java file below it as a source. Files are visited in sorted path
/// order. Throws DataError when the root is not a directory.
ExtractResult extract_methods(const std::filesystem::path& source_root, const ExtractOptions& options = {});

/// get/set/is prefix followed by an uppercase letter, or a body consisting
/// of a single return or assignment statement.
bool is_getter_or_setter(const MethodRecord& record);

/// Drops getters and setters, then keeps the first record per
/// (project, path, class, method name). Idempotent.
std::vector<MethodRecord> filter_records(std::vector<MethodRecord> records);

struct RecordPair {
    std::size_t reference = 0; // index into the record list
    std::size_t candidate = 0;
};

bool satisfies(AffinityKind kind, const MethodRecord& a, const MethodRecord& b);

/// `count` random pairs obeying `kind`: different projects, same project
/// but different classes, or same class (at most `max_per_class` distinct
/// pairs from one class). A record is drawn uniformly, its partner uniformly
/// among valid partners, and a coin flip picks the reference. Throws
/// DataError when the population cannot supply the pairs.
std::vector<RecordPair> sample_pairs(std::span<const MethodRecord> records, AffinityKind kind, std::size_t count,
                                     std::uint64_t seed, std::size_t max_per_class = 6);

struct VariantSummary {
    BleuVariant variant = BleuVariant::M2;
    double mean = 0.0; // set-level score (sentence mean or corpus BLEU)
    double q1 = 0.0;
    double median = 0.0;
    double q3 = 0.0;
    std::vector<double> per_pair;
};

struct AffinityReport {
    AffinityKind kind = AffinityKind::intra_class;
    std::size_t n_pairs = 0;
    std::uint64_t seed = 0;
    std::vector<VariantSummary> variants;
};

/// Scores every pair's candidate comment against its reference comment
/// under each variant. Quartiles use linear interpolation over per-pair
/// scores. Throws DataError on an empty pair list.
AffinityReport affinity_report(std::span<const MethodRecord> records, std::span<const RecordPair> pairs,
                               std::span<const BleuVariant> variants, AffinityKind kind, std::uint64_t seed);

nlohmann::json to_json(const AffinityReport& report);

/// Records as corpus JSONL (src = body, tgt = comment, meta populated) with
/// an extra "method" object carrying name and parameter count.
void write_records(std::span<const MethodRecord> records, const std::filesystem::path& path);
std::vector<MethodRecord> read_records(const std::filesystem::path& path);

void write_pairs(std::span<const RecordPair> pairs, std::span<const MethodRecord> records,
                 const std::filesystem::path& path);
std::vector<RecordPair> read_pairs(const std::filesystem::path& path, std::span<const MethodRecord> records);

} // namespace commentbench
