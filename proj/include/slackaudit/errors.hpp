#pragma once

#include <stdexcept>
#include <string>

namespace slackaudit {

// One exception class per failure family so callers can map them to
// distinct diagnostics without string matching.

struct SchemaError : std::runtime_error {
    explicit SchemaError(const std::string& msg) : std::runtime_error(msg) {}
};

struct ValidationError : std::runtime_error {
    explicit ValidationError(const std::string& msg) : std::runtime_error(msg) {}
};

struct AlignmentError : std::runtime_error {
    explicit AlignmentError(const std::string& msg) : std::runtime_error(msg) {}
};

// EqOpp metrics on a group with no positive labels.
struct UndefinedDenominatorError : std::runtime_error {
    explicit UndefinedDenominatorError(const std::string& msg) : std::runtime_error(msg) {}
};

struct SizeError : std::runtime_error {
    explicit SizeError(const std::string& msg) : std::runtime_error(msg) {}
};

// Policy evaluated against a dataset it was not realized on.
struct StateError : std::runtime_error {
    explicit StateError(const std::string& msg) : std::runtime_error(msg) {}
};

// No threshold pair satisfies the bias bound; carries the smallest
// attainable |bias| so callers can suggest a workable slack.
struct InfeasibleError : std::runtime_error {
    InfeasibleError(const std::string& msg, double min_bias)
        : std::runtime_error(msg), min_attainable_bias(min_bias) {}
    double min_attainable_bias;
};

struct DivergenceError : std::runtime_error {
    explicit DivergenceError(const std::string& msg) : std::runtime_error(msg) {}
};

struct IoError : std::runtime_error {
    explicit IoError(const std::string& msg) : std::runtime_error(msg) {}
};

}  // namespace slackaudit
