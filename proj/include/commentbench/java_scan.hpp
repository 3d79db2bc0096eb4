#pragma once

#include <cstddef>
#include <string>
#include <string_view>
#include <vector>

namespace commentbench {

/// A documented method found by scan_java.
struct ScannedMethod {
    std::string class_name; // dotted for nested classes, e.g. "Outer.Inner"
    std::string method_name;
    int param_count = 0;
    std::string doc_comment; // raw "/** ... */" text
    std::string body;        // text between the braces; empty for abstract methods
    std::size_t line = 0;    // 1-based line of the method name
};

struct JavaScan {
    std::vector<ScannedMethod> methods;
    std::size_t undelimited = 0; // declarations whose braces never closed
};

/// Lightweight scanner: lexes strings, comments and braces, tracks class
/// nesting, and reports every method or constructor preceded by a Javadoc
/// comment. Not a grammar-complete parser; method bodies (and anything
/// declared inside them) are skipped wholesale.
JavaScan scan_java(std::string_view source);

/// Javadoc description text: comment markers, leading '*', block tags,
/// HTML tags and inline-tag braces removed, whitespace collapsed.
std::string javadoc_description(std::string_view doc_comment);

/// First sentence of a description: text up to the first '.' followed by
/// whitespace (or end), or up to the first blank line, without the period.
std::string first_sentence(std::string_view doc_comment);

} // namespace commentbench
