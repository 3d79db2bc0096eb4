#pragma once

#include <cstddef>
#include <filesystem>
#include <optional>
#include <string>
#include <vector>

#include "commentbench/tokenize.hpp"

namespace commentbench {

struct ExampleMeta {
    std::string project;
    std::string class_name;
    std::string path;
};

struct ParallelExample {
    std::string id;
    TokenSequence source; // code
    TokenSequence target; // comment
    std::optional<ExampleMeta> meta;
};

enum class Split { train, valid, test, unsplit };

std::string to_string(Split split);
Split parse_split(std::string_view name);

struct ParallelCorpus {
    std::vector<ParallelExample> examples;
    Split split = Split::unsplit;
    std::optional<int> fold; // cross-project folds; only with train/test

    std::size_t size() const { return examples.size(); }
    bool empty() const { return examples.empty(); }

    /// Throws DataError when the fold/split combination or id uniqueness is
    /// violated.
    void validate() const;

    std::vector<TokenSequence> sources() const;
    std::vector<TokenSequence> targets() const;
};

struct LoadOptions {
    TokenizerConfig source_tokenizer;
    TokenizerConfig target_tokenizer;
    /// Strict mode turns malformed lines and duplicate ids into errors;
    /// lenient mode skips and counts them.
    bool strict = false;
    bool allow_empty = false;
};

struct LoadResult {
    ParallelCorpus corpus;
    std::size_t skipped = 0;
    std::vector<std::string> warnings;
};

/// Reads JSON Lines records {"id"?, "src", "tgt", "meta"?}. A missing id is
/// replaced by the 1-based line number.
LoadResult load_jsonl(const std::filesystem::path& path, const LoadOptions& options = {});

/// Pairs line i of `src_path` with line i of `tgt_path`; ids are 0-based
/// line numbers.
LoadResult load_parallel_files(const std::filesystem::path& src_path,
                               const std::filesystem::path& tgt_path,
                               const LoadOptions& options = {});

/// Writes the corpus in the JSONL schema, tokens joined by single spaces.
void write_jsonl(const ParallelCorpus& corpus, const std::filesystem::path& path);

struct SideStats {
    std::size_t tokens = 0;
    std::size_t vocab = 0;
    double mean_length = 0.0;
    std::size_t min_length = 0;
    std::size_t p50_length = 0;
    std::size_t p90_length = 0;
    std::size_t p99_length = 0;
    std::size_t max_length = 0;
};

struct CorpusStats {
    std::size_t examples = 0;
    SideStats source;
    SideStats target;
};

CorpusStats corpus_stats(const ParallelCorpus& corpus);

/// Nearest-rank percentile of an ascending-sorted list; 0 for empty input.
std::size_t nearest_rank(const std::vector<std::size_t>& sorted, double percent);

} // namespace commentbench
