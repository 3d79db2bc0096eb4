#pragma once

#include <stdexcept>
#include <string>

namespace commentbench {

/// Bad input data: unreadable files, malformed records, populations too small
/// for the requested sampling. The CLI maps it to exit code 2.
class DataError : public std::runtime_error {
  public:
    using std::runtime_error::runtime_error;
};

/// Caller misuse that the CLI reports as a usage error (exit code 1), such as
/// an unknown variant name or an unparsable tokenizer spec.
class UsageError : public std::invalid_argument {
  public:
    using std::invalid_argument::invalid_argument;
};

} // namespace commentbench
