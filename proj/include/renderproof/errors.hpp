#pragma once

#include <stdexcept>
#include <string>

namespace renderproof {

// Malformed document text (bad tokens, unbalanced braces, ...).
struct SyntaxError : std::runtime_error {
    explicit SyntaxError(const std::string& msg) : std::runtime_error(msg) {}
};

// Structurally well-formed document violating the schema: missing or unknown
// keys, wrong types, out-of-range values, duplicate or unresolved names.
struct SchemaError : std::runtime_error {
    explicit SchemaError(const std::string& msg) : std::runtime_error(msg) {}
};

// Invalid input data beyond the document itself: scene invariant violations,
// lightmap/primitive mismatches, bad settings.
struct ValidationError : std::runtime_error {
    explicit ValidationError(const std::string& msg) : std::runtime_error(msg) {}
};

// File could not be opened, read, or written.
struct IoError : std::runtime_error {
    explicit IoError(const std::string& msg) : std::runtime_error(msg) {}
};

// Metric precondition failure: dimension mismatch, image too small.
struct MetricError : std::runtime_error {
    explicit MetricError(const std::string& msg) : std::runtime_error(msg) {}
};

}  // namespace renderproof
