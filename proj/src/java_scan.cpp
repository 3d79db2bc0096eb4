#include "commentbench/java_scan.hpp"

#include <algorithm>
#include <optional>
#include <regex>

namespace commentbench {

namespace {

enum class Kind { ident, punct, literal, doc };

struct Lexeme {
    Kind kind;
    std::string_view text;
    std::size_t offset;
};

bool ident_char(char c) {
    return (c >= 'a' && c <= 'z') || (c >= 'A' && c <= 'Z') || (c >= '0' && c <= '9') || c == '_' || c == '$' ||
           static_cast<unsigned char>(c) >= 0x80;
}

std::vector<Lexeme> lex(std::string_view src) {
    std::vector<Lexeme> out;
    std::size_t i = 0;
    const std::size_t n = src.size();
    auto skip_quoted = [&](char quote) {
        ++i;
        while (i < n && src[i] != quote && src[i] != '\n') {
            if (src[i] == '\\') ++i;
            ++i;
        }
        if (i < n && src[i] == quote) ++i;
    };
    while (i < n) {
        const char c = src[i];
        if (c == ' ' || c == '\t' || c == '\n' || c == '\r' || c == '\f') {
            ++i;
        } else if (src.substr(i, 2) == "//") {
            while (i < n && src[i] != '\n') ++i;
        } else if (src.substr(i, 2) == "/*") {
            const std::size_t start = i;
            const bool doc = src.substr(i, 3) == "/**" && src.substr(i, 4) != "/**/";
            const auto end = src.find("*/", i + 2);
            i = end == std::string_view::npos ? n : end + 2;
            if (doc) out.push_back({Kind::doc, src.substr(start, i - start), start});
        } else if (src.substr(i, 3) == "\"\"\"") {
            const std::size_t start = i;
            const auto end = src.find("\"\"\"", i + 3);
            i = end == std::string_view::npos ? n : end + 3;
            out.push_back({Kind::literal, src.substr(start, i - start), start});
        } else if (c == '"' || c == '\'') {
            const std::size_t start = i;
            skip_quoted(c);
            out.push_back({Kind::literal, src.substr(start, i - start), start});
        } else if (ident_char(c)) {
            const std::size_t start = i;
            while (i < n && ident_char(src[i])) ++i;
            out.push_back({Kind::ident, src.substr(start, i - start), start});
        } else {
            out.push_back({Kind::punct, src.substr(i, 1), i});
            ++i;
        }
    }
    return out;
}

bool is_punct(const Lexeme& l, char c) { return l.kind == Kind::punct && l.text[0] == c; }

bool is_type_keyword(std::string_view s) {
    return s == "class" || s == "interface" || s == "enum" || s == "record";
}

class Scanner {
  public:
    explicit Scanner(std::string_view src) : src_(src), toks_(lex(src)) {}

    JavaScan run() {
        while (pos_ < toks_.size()) step();
        return std::move(result_);
    }

  private:
    void step() {
        const Lexeme& t = toks_[pos_];
        if (t.kind == Kind::doc) {
            pending_doc_ = t.text;
            ++pos_;
            return;
        }
        if (is_punct(t, '@') && pos_ + 1 < toks_.size() && toks_[pos_ + 1].kind == Kind::ident &&
            toks_[pos_ + 1].text != "interface") {
            skip_annotation();
            return;
        }
        if (t.kind == Kind::punct) {
            switch (t.text[0]) {
            case ';':
                if (auto m = method_signature()) record(*m, std::nullopt);
                reset();
                ++pos_;
                return;
            case '=':
                skip_initializer();
                reset();
                return;
            case '{': open_brace(); return;
            case '}':
                if (!classes_.empty()) classes_.pop_back();
                reset();
                ++pos_;
                return;
            default: break;
            }
        }
        decl_.push_back(pos_);
        ++pos_;
    }

    struct Signature {
        std::size_t name_tok;
        int params;
    };

    // Method name and parameter count when the pending declaration looks like
    // `... name ( params ) ...`.
    std::optional<Signature> method_signature() const {
        for (std::size_t k = 0; k < decl_.size(); ++k) {
            if (!is_punct(toks_[decl_[k]], '(')) continue;
            if (k == 0 || toks_[decl_[k - 1]].kind != Kind::ident) return std::nullopt;
            int depth = 0;
            int angle = 0;
            int commas = 0;
            bool any = false;
            for (std::size_t j = k; j < decl_.size(); ++j) {
                const Lexeme& l = toks_[decl_[j]];
                if (is_punct(l, '(')) {
                    if (depth++ > 0) any = true;
                    continue;
                }
                if (is_punct(l, ')')) {
                    if (--depth == 0) return Signature{decl_[k - 1], any ? commas + 1 : 0};
                    continue;
                }
                any = true;
                if (is_punct(l, '<')) ++angle;
                if (is_punct(l, '>')) angle = std::max(0, angle - 1);
                if (is_punct(l, ',') && depth == 1 && angle == 0) ++commas;
            }
            return std::nullopt;
        }
        return std::nullopt;
    }

    std::optional<std::string_view> type_declaration() const {
        for (std::size_t k = 0; k < decl_.size(); ++k) {
            const Lexeme& l = toks_[decl_[k]];
            if (l.kind != Kind::ident || !is_type_keyword(l.text)) continue;
            if (k > 0 && is_punct(toks_[decl_[k - 1]], '.')) continue;
            if (k + 1 < decl_.size() && toks_[decl_[k + 1]].kind == Kind::ident) return toks_[decl_[k + 1]].text;
        }
        return std::nullopt;
    }

    void open_brace() {
        if (auto name = type_declaration()) {
            classes_.emplace_back(*name);
            reset();
            ++pos_;
            return;
        }
        const auto sig = method_signature();
        const std::size_t open = pos_;
        const auto close = matching_brace(open);
        if (!close) {
            ++result_.undelimited;
            pos_ = toks_.size();
            return;
        }
        if (sig) {
            const std::size_t from = toks_[open].offset + 1;
            record(*sig, src_.substr(from, toks_[*close].offset - from));
        }
        reset();
        pos_ = *close + 1;
    }

    std::optional<std::size_t> matching_brace(std::size_t open) const {
        int depth = 0;
        for (std::size_t k = open; k < toks_.size(); ++k) {
            if (is_punct(toks_[k], '{')) ++depth;
            if (is_punct(toks_[k], '}') && --depth == 0) return k;
        }
        return std::nullopt;
    }

    void skip_annotation() {
        pos_ += 2; // '@' name
        while (pos_ + 1 < toks_.size() && is_punct(toks_[pos_], '.') && toks_[pos_ + 1].kind == Kind::ident) pos_ += 2;
        if (pos_ < toks_.size() && is_punct(toks_[pos_], '(')) {
            int depth = 0;
            for (; pos_ < toks_.size(); ++pos_) {
                if (is_punct(toks_[pos_], '(')) ++depth;
                if (is_punct(toks_[pos_], ')') && --depth == 0) {
                    ++pos_;
                    break;
                }
            }
        }
    }

    // Field initializer: skip to the terminating ';' outside any nesting.
    void skip_initializer() {
        int depth = 0;
        for (; pos_ < toks_.size(); ++pos_) {
            const Lexeme& l = toks_[pos_];
            if (l.kind != Kind::punct) continue;
            const char c = l.text[0];
            if (c == '(' || c == '{' || c == '[') ++depth;
            if (c == ')' || c == '}' || c == ']') {
                if (depth == 0) return; // unbalanced: let the caller see the closer
                --depth;
            }
            if (c == ';' && depth == 0) {
                ++pos_;
                return;
            }
        }
    }

    void record(const Signature& sig, std::optional<std::string_view> body) {
        if (!pending_doc_) return;
        ScannedMethod m;
        for (std::size_t i = 0; i < classes_.size(); ++i) {
            if (i) m.class_name.push_back('.');
            m.class_name += classes_[i];
        }
        m.method_name = std::string(toks_[sig.name_tok].text);
        m.param_count = sig.params;
        m.doc_comment = std::string(*pending_doc_);
        m.body = body ? std::string(*body) : std::string();
        const std::size_t at = toks_[sig.name_tok].offset;
        m.line = 1 + static_cast<std::size_t>(std::count(src_.begin(), src_.begin() + static_cast<std::ptrdiff_t>(at), '\n'));
        result_.methods.push_back(std::move(m));
    }

    void reset() {
        decl_.clear();
        pending_doc_.reset();
    }

    std::string_view src_;
    std::vector<Lexeme> toks_;
    std::size_t pos_ = 0;
    std::vector<std::size_t> decl_;
    std::optional<std::string_view> pending_doc_;
    std::vector<std::string> classes_;
    JavaScan result_;
};

std::string collapse_whitespace(std::string_view s) {
    std::string out;
    bool space = false;
    for (char c : s) {
        if (c == ' ' || c == '\t' || c == '\n' || c == '\r') {
            space = !out.empty();
        } else {
            if (space) out.push_back(' ');
            space = false;
            out.push_back(c);
        }
    }
    return out;
}

// Description lines (before the first block tag) with markers stripped,
// inline tags unwrapped and HTML removed; paragraph breaks kept as blank lines.
std::string description_lines(std::string_view doc) {
    if (doc.starts_with("/**")) doc.remove_prefix(3);
    if (doc.ends_with("*/")) doc.remove_suffix(2);
    std::string text;
    std::size_t start = 0;
    while (start <= doc.size()) {
        auto nl = doc.find('\n', start);
        if (nl == std::string_view::npos) nl = doc.size();
        std::string_view line = doc.substr(start, nl - start);
        start = nl + 1;
        const auto first = line.find_first_not_of(" \t\r");
        line = first == std::string_view::npos ? std::string_view{} : line.substr(first);
        while (line.starts_with("*")) line.remove_prefix(1);
        const auto content = line.find_first_not_of(" \t\r");
        line = content == std::string_view::npos ? std::string_view{} : line.substr(content);
        if (line.starts_with("@")) break;
        text.append(line);
        text.push_back('\n');
    }
    static const std::regex inline_tag(R"(\{@\w+\s*([^}]*)\})");
    static const std::regex paragraph(R"(<\s*/?\s*[pP]\s*/?\s*>)");
    static const std::regex html(R"(<[^>\n]*>)");
    text = std::regex_replace(text, inline_tag, "$1");
    text = std::regex_replace(text, paragraph, "\n\n");
    text = std::regex_replace(text, html, " ");
    return text;
}

} // namespace

JavaScan scan_java(std::string_view source) { return Scanner(source).run(); }

std::string javadoc_description(std::string_view doc_comment) {
    return collapse_whitespace(description_lines(doc_comment));
}

std::string first_sentence(std::string_view doc_comment) {
    std::string text = description_lines(doc_comment);
    // Cut at the first paragraph break after some content.
    static const std::regex blank_line(R"(\S[\s\S]*?\n[ \t\r]*\n)");
    std::smatch m;
    if (std::regex_search(text, m, blank_line)) text.resize(static_cast<std::size_t>(m.position(0) + m.length(0)));
    for (std::size_t i = 0; i < text.size(); ++i) {
        if (text[i] != '.') continue;
        if (i + 1 == text.size() || text[i + 1] == ' ' || text[i + 1] == '\n' || text[i + 1] == '\t' ||
            text[i + 1] == '\r') {
            text.resize(i);
            break;
        }
    }
    return collapse_whitespace(text);
}

} // namespace commentbench
