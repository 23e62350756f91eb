#pragma once

#include <stdexcept>
#include <string>

namespace ocrloop {

// Base class for everything this library throws on purpose.
struct Error : std::runtime_error {
    explicit Error(const std::string& what) : std::runtime_error(what) {}
};

// Transport/HTTP failure after the retry budget is spent, or a
// non-retryable response (4xx, malformed body, invalid request).
struct BackendError : Error {
    explicit BackendError(const std::string& what, int status = 0, int retries = 0)
        : Error(what), http_status(status), retries(retries) {}
    int http_status = 0;  // 0 when no HTTP status applies
    int retries = 0;      // retries performed before giving up
};

// Scripted mock asked for a key it has no entry for. A test-authoring
// bug, so it fails loudly instead of returning a default.
struct FixtureMissError : Error {
    using Error::Error;
};

struct TemplateError : Error {
    using Error::Error;
};

// Memory append with an iteration gap or repeat.
struct SequenceError : Error {
    using Error::Error;
};

struct TaxonomyParseError : Error {
    TaxonomyParseError(const std::string& what, int line) : Error(what), line(line) {}
    int line = 0;
};

struct ImageReadError : Error {
    using Error::Error;
};

struct UnsupportedMediaTypeError : Error {
    using Error::Error;
};

struct ConfigError : Error {
    using Error::Error;
};

struct EmptyGoldError : Error {
    using Error::Error;
};

struct LengthMismatchError : Error {
    using Error::Error;
};

struct DatasetFormatError : Error {
    using Error::Error;
};

struct EmptyRunError : Error {
    using Error::Error;
};

struct NotIterativeError : Error {
    using Error::Error;
};

struct DatasetMismatchError : Error {
    using Error::Error;
};

}  // namespace ocrloop
