#include "relevant/error.hpp"

namespace relevant {

std::string_view to_string(ErrorKind kind) noexcept
{
    switch (kind) {
    case ErrorKind::MalformedLine: return "MalformedLine";
    case ErrorKind::DuplicateId: return "DuplicateId";
    case ErrorKind::MissingLabel: return "MissingLabel";
    case ErrorKind::EmptyCorpus: return "EmptyCorpus";
    case ErrorKind::SpanOutOfBounds: return "SpanOutOfBounds";
    case ErrorKind::OverlappingSpans: return "OverlappingSpans";
    case ErrorKind::BothClassesRequired: return "BothClassesRequired";
    case ErrorKind::NoKeywordsSelected: return "NoKeywordsSelected";
    case ErrorKind::CorruptKeywordFile: return "CorruptKeywordFile";
    case ErrorKind::DimensionMismatch: return "DimensionMismatch";
    case ErrorKind::SingleClassTrainingSet: return "SingleClassTrainingSet";
    case ErrorKind::NonFiniteLoss: return "NonFiniteLoss";
    case ErrorKind::CorruptModelFile: return "CorruptModelFile";
    case ErrorKind::VersionMismatch: return "VersionMismatch";
    case ErrorKind::LengthMismatch: return "LengthMismatch";
    case ErrorKind::EmptyKeywordFile: return "EmptyKeywordFile";
    case ErrorKind::InsufficientKeywords: return "InsufficientKeywords";
    case ErrorKind::InvalidConfig: return "InvalidConfig";
    case ErrorKind::InvalidArgument: return "InvalidArgument";
    case ErrorKind::MissingFile: return "MissingFile";
    case ErrorKind::Io: return "Io";
    }
    return "Unknown";
}

Error::Error(ErrorKind kind, const std::string& message)
    : std::runtime_error(std::string(to_string(kind)) + ": " + message), kind_(kind), message_(message)
{}

}  // namespace relevant
