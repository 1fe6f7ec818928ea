#pragma once

#include <cstddef>
#include <cstdint>
#include <filesystem>
#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

namespace relevant {

/// Binary relevance label. Files encode Relevant as 1 and Irrelevant as 0.
enum class Label : std::uint8_t { Irrelevant = 0, Relevant = 1 };

/// Half-open byte range [begin, end) into a document's text.
struct Span {
    std::size_t begin = 0;
    std::size_t end = 0;

    friend bool operator==(const Span&, const Span&) = default;
};

struct Document {
    std::string id;
    std::string text;
    std::optional<Label> label;
    /// Person-name spans supplied alongside the text (sidecar annotations).
    std::vector<Span> entities;

    friend bool operator==(const Document&, const Document&) = default;
};

/// A corpus in which every document carries a label. Immutable once built.
class LabeledCorpus {
public:
    /// Throws MissingLabel if any document is unlabeled and EmptyCorpus if
    /// `documents` is empty.
    explicit LabeledCorpus(std::vector<Document> documents);

    [[nodiscard]] const std::vector<Document>& documents() const noexcept { return documents_; }
    [[nodiscard]] std::size_t size() const noexcept { return documents_.size(); }
    [[nodiscard]] std::size_t n_positive() const noexcept { return n_positive_; }
    [[nodiscard]] std::size_t n_negative() const noexcept { return n_negative_; }
    [[nodiscard]] bool has_both_classes() const noexcept { return n_positive_ > 0 && n_negative_ > 0; }

    /// Throws BothClassesRequired unless both classes are present.
    void require_both_classes() const;

    [[nodiscard]] std::vector<Label> labels() const;

private:
    std::vector<Document> documents_;
    std::size_t n_positive_ = 0;
    std::size_t n_negative_ = 0;
};

enum class LabelPolicy { Optional, Required };

/// Parses JSONL records (id, text, optional label, optional entities) in
/// stream order. Blank lines are skipped; line numbers in errors are 1-based.
std::vector<Document> read_documents(std::istream& in, LabelPolicy policy);
std::vector<Document> load_documents(const std::filesystem::path& path, LabelPolicy policy);
LabeledCorpus load_corpus(const std::filesystem::path& path);

/// Serializes one record per line with keys in the order id, text, label,
/// entities. Absent labels and empty entity lists are omitted.
void write_documents(std::ostream& out, const std::vector<Document>& documents);
void save_documents(const std::filesystem::path& path, const std::vector<Document>& documents);

struct CorpusSummary {
    std::size_t n_documents = 0;
    std::size_t n_positive = 0;
    std::size_t n_negative = 0;
    /// N+ / (N+ + N-), in percent, unrounded.
    double positive_percent = 0.0;
    /// Whitespace-delimited word count over all texts.
    std::size_t token_estimate = 0;

    /// "47.0%-53.0%" style ratio string, rounded half-up to one decimal.
    [[nodiscard]] std::string ratio_string() const;
};

CorpusSummary corpus_stats(const LabeledCorpus& corpus);

}  // namespace relevant
