#pragma once

#include <cstddef>
#include <set>
#include <span>
#include <string>
#include <string_view>
#include <vector>

namespace commentbench {

/// Ordered tokens of one code or comment side. Tokens are never empty and
/// never contain whitespace; `tokenizer_id` names the configuration that
/// produced them.
struct TokenSequence {
    std::vector<std::string> tokens;
    std::string tokenizer_id = "passthrough";

    TokenSequence() = default;
    explicit TokenSequence(std::vector<std::string> toks, std::string id = "passthrough")
        : tokens(std::move(toks)), tokenizer_id(std::move(id)) {}

    std::size_t size() const { return tokens.size(); }
    bool empty() const { return tokens.empty(); }
    const std::string& operator[](std::size_t i) const { return tokens[i]; }
    auto begin() const { return tokens.begin(); }
    auto end() const { return tokens.end(); }

    /// Tokens joined with single spaces.
    std::string joined() const;

    friend bool operator==(const TokenSequence& a, const TokenSequence& b) {
        return a.tokens == b.tokens;
    }
};

using Stoplist = std::set<std::string, std::less<>>;

enum class TokenizerMode { whitespace, punctuation, passthrough };

struct TokenizerConfig {
    TokenizerMode mode = TokenizerMode::passthrough;
    bool subtoken_split = false;
    bool lowercase = false;
    Stoplist stoplist;

    /// Canonical spec string, e.g. "punctuation+subtoken+lower". A non-empty
    /// stoplist adds "+stop<N>".
    std::string id() const;

    /// Parses "whitespace", "punctuation" or "passthrough" optionally followed
    /// by "+subtoken", "+lower" and "+stop" (default stoplist). Throws
    /// UsageError on anything else.
    static TokenizerConfig parse(std::string_view spec);
};

/// Whitespace or punctuation tokenization followed, when enabled, by
/// subtoken splitting, lowercasing and stoplist filtering (in that order).
/// Passthrough mode splits pre-tokenized text on whitespace and never
/// rewrites a token.
TokenSequence tokenize(std::string_view text, const TokenizerConfig& config);

/// Splits an identifier at underscores, lower->upper camelCase boundaries,
/// acronym ends ("HTTPServer" -> HTTP|Server) and letter/digit boundaries.
/// Characters other than letters, digits and '_' stay attached to the part
/// they follow.
std::vector<std::string> split_subtokens(std::string_view token, bool lowercase = true);

TokenSequence apply_stoplist(const TokenSequence& tokens, const Stoplist& stoplist);

/// The 30 most common Java reserved words and literals plus single-character
/// punctuation tokens.
const Stoplist& default_stoplist();

/// Stoplist built from the `k` most frequent tokens across `side`
/// (ties broken lexicographically).
Stoplist frequency_stoplist(std::span<const TokenSequence> side, std::size_t k);

std::string to_lower(std::string_view s);

} // namespace commentbench
