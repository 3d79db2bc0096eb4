#include "commentbench/tokenize.hpp"

#include <algorithm>
#include <map>
#include <unordered_map>

#include "commentbench/error.hpp"

namespace commentbench {

namespace {

bool is_space(char c) {
    return c == ' ' || c == '\t' || c == '\n' || c == '\r' || c == '\f' || c == '\v';
}

bool is_upper(char c) { return c >= 'A' && c <= 'Z'; }
bool is_lower(char c) { return c >= 'a' && c <= 'z'; }
bool is_digit(char c) { return c >= '0' && c <= '9'; }
bool is_letter(char c) { return is_upper(c) || is_lower(c); }

// Bytes >= 0x80 are UTF-8 continuation/lead bytes; they count as word
// characters so multi-byte code points are never split.
bool is_word_char(char c) {
    return is_letter(c) || is_digit(c) || c == '_' || static_cast<unsigned char>(c) >= 0x80;
}

std::vector<std::string> split_on_whitespace(std::string_view text) {
    std::vector<std::string> out;
    std::size_t i = 0;
    while (i < text.size()) {
        while (i < text.size() && is_space(text[i])) ++i;
        std::size_t start = i;
        while (i < text.size() && !is_space(text[i])) ++i;
        if (i > start) out.emplace_back(text.substr(start, i - start));
    }
    return out;
}

std::vector<std::string> split_punctuation(std::string_view text) {
    std::vector<std::string> out;
    std::string cur;
    auto flush = [&] {
        if (!cur.empty()) out.push_back(std::move(cur));
        cur.clear();
    };
    for (char c : text) {
        if (is_space(c)) {
            flush();
        } else if (is_word_char(c)) {
            cur.push_back(c);
        } else {
            flush();
            out.emplace_back(1, c);
        }
    }
    flush();
    return out;
}

} // namespace

std::string TokenSequence::joined() const {
    std::string out;
    for (std::size_t i = 0; i < tokens.size(); ++i) {
        if (i) out.push_back(' ');
        out += tokens[i];
    }
    return out;
}

std::string to_lower(std::string_view s) {
    std::string out(s);
    for (char& c : out) {
        if (is_upper(c)) c = static_cast<char>(c - 'A' + 'a');
    }
    return out;
}

std::string TokenizerConfig::id() const {
    std::string out;
    switch (mode) {
    case TokenizerMode::whitespace: out = "whitespace"; break;
    case TokenizerMode::punctuation: out = "punctuation"; break;
    case TokenizerMode::passthrough: out = "passthrough"; break;
    }
    if (mode != TokenizerMode::passthrough) {
        if (subtoken_split) out += "+subtoken";
        if (lowercase) out += "+lower";
    }
    if (!stoplist.empty()) out += "+stop" + std::to_string(stoplist.size());
    return out;
}

TokenizerConfig TokenizerConfig::parse(std::string_view spec) {
    TokenizerConfig cfg;
    std::vector<std::string> parts;
    std::size_t start = 0;
    while (start <= spec.size()) {
        auto plus = spec.find('+', start);
        if (plus == std::string_view::npos) plus = spec.size();
        parts.emplace_back(spec.substr(start, plus - start));
        start = plus + 1;
    }
    const std::string& mode = parts.front();
    if (mode == "whitespace") {
        cfg.mode = TokenizerMode::whitespace;
    } else if (mode == "punctuation") {
        cfg.mode = TokenizerMode::punctuation;
    } else if (mode == "passthrough") {
        cfg.mode = TokenizerMode::passthrough;
    } else {
        throw UsageError("unknown tokenizer mode '" + mode + "'");
    }
    for (std::size_t i = 1; i < parts.size(); ++i) {
        if (parts[i] == "subtoken") {
            cfg.subtoken_split = true;
        } else if (parts[i] == "lower") {
            cfg.lowercase = true;
        } else if (parts[i] == "stop") {
            cfg.stoplist = default_stoplist();
        } else {
            throw UsageError("unknown tokenizer option '" + parts[i] + "' in '" + std::string(spec) + "'");
        }
    }
    return cfg;
}

std::vector<std::string> split_subtokens(std::string_view token, bool lowercase) {
    std::vector<std::string> parts;
    std::string cur;
    auto flush = [&] {
        if (!cur.empty()) parts.push_back(lowercase ? to_lower(cur) : std::move(cur));
        cur.clear();
    };
    for (std::size_t i = 0; i < token.size(); ++i) {
        char c = token[i];
        if (c == '_') {
            flush();
            continue;
        }
        if (!cur.empty()) {
            char prev = token[i - 1];
            char next = i + 1 < token.size() ? token[i + 1] : '\0';
            bool boundary = (is_lower(prev) && is_upper(c)) ||
                            (is_upper(prev) && is_upper(c) && is_lower(next)) ||
                            (is_letter(prev) && is_digit(c)) || (is_digit(prev) && is_letter(c));
            if (boundary) flush();
        }
        cur.push_back(c);
    }
    flush();
    return parts;
}

TokenSequence apply_stoplist(const TokenSequence& tokens, const Stoplist& stoplist) {
    TokenSequence out;
    out.tokenizer_id = tokens.tokenizer_id;
    out.tokens.reserve(tokens.size());
    for (const auto& t : tokens) {
        if (!stoplist.contains(t)) out.tokens.push_back(t);
    }
    return out;
}

TokenSequence tokenize(std::string_view text, const TokenizerConfig& config) {
    TokenSequence seq;
    seq.tokenizer_id = config.id();
    if (config.mode == TokenizerMode::passthrough) {
        seq.tokens = split_on_whitespace(text);
    } else {
        auto raw = config.mode == TokenizerMode::whitespace ? split_on_whitespace(text)
                                                            : split_punctuation(text);
        if (config.subtoken_split) {
            for (const auto& tok : raw) {
                for (auto& part : split_subtokens(tok, config.lowercase)) {
                    seq.tokens.push_back(std::move(part));
                }
            }
        } else {
            seq.tokens = std::move(raw);
        }
        if (config.lowercase) {
            for (auto& t : seq.tokens) t = to_lower(t);
        }
    }
    if (!config.stoplist.empty()) seq = apply_stoplist(seq, config.stoplist);
    return seq;
}

const Stoplist& default_stoplist() {
    static const Stoplist words = {
        // keywords and literals
        "abstract", "boolean", "catch", "class", "else", "extends", "false", "final", "for",
        "if", "implements", "import", "int", "interface", "new", "null", "package",
        "private", "protected", "public", "return", "static", "super", "this", "throw",
        "throws", "true", "try", "void", "while",
        // punctuation
        "(", ")", "{", "}", "[", "]", ";", ",", ".", "=", "<", ">", "+", "-", "*", "/", "!",
        "&", "|", ":", "?", "@", "\"", "'", "%", "^", "~", "#", "$", "\\"};
    return words;
}

Stoplist frequency_stoplist(std::span<const TokenSequence> side, std::size_t k) {
    std::unordered_map<std::string, std::size_t> counts;
    for (const auto& seq : side) {
        for (const auto& t : seq) ++counts[t];
    }
    std::vector<std::pair<std::string, std::size_t>> ranked(counts.begin(), counts.end());
    std::sort(ranked.begin(), ranked.end(), [](const auto& a, const auto& b) {
        return a.second != b.second ? a.second > b.second : a.first < b.first;
    });
    Stoplist out;
    for (std::size_t i = 0; i < std::min(k, ranked.size()); ++i) out.insert(ranked[i].first);
    return out;
}

} // namespace commentbench
