#pragma once

#include <stdexcept>
#include <string>
#include <string_view>

namespace relevant {

enum class ErrorKind {
    // corpus
    MalformedLine,
    DuplicateId,
    MissingLabel,
    EmptyCorpus,
    // preprocess
    SpanOutOfBounds,
    OverlappingSpans,
    // keyword extraction / scoring
    BothClassesRequired,
    NoKeywordsSelected,
    CorruptKeywordFile,
    // features / classifier
    DimensionMismatch,
    SingleClassTrainingSet,
    NonFiniteLoss,
    CorruptModelFile,
    VersionMismatch,
    // evaluation
    LengthMismatch,
    EmptyKeywordFile,
    InsufficientKeywords,
    // plumbing
    InvalidConfig,
    InvalidArgument,
    MissingFile,
    Io,
};

std::string_view to_string(ErrorKind kind) noexcept;

/// Every failure raised by the library carries one of the kinds above so that
/// callers (the CLI in particular) can map it onto an exit status.
class Error : public std::runtime_error {
public:
    Error(ErrorKind kind, const std::string& message);

    [[nodiscard]] ErrorKind kind() const noexcept { return kind_; }
    /// The message without the kind prefix.
    [[nodiscard]] const std::string& message() const noexcept { return message_; }

private:
    ErrorKind kind_;
    std::string message_;
};

}  // namespace relevant
