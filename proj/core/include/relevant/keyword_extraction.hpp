#pragma once

#include <cstddef>
#include <cstdint>
#include <filesystem>
#include <iosfwd>
#include <string>
#include <unordered_map>
#include <vector>

#include "relevant/corpus.hpp"
#include "relevant/preprocess.hpp"

namespace relevant {

/// Class-conditional counts for one n-gram over a labeled corpus.
struct TermStats {
    std::uint64_t pos_freq = 0;  // occurrences in relevant documents
    std::uint64_t neg_freq = 0;  // occurrences in irrelevant documents
    std::uint64_t pos_docs = 0;  // relevant documents containing the term
    std::uint64_t neg_docs = 0;  // irrelevant documents containing the term

    [[nodiscard]] std::uint64_t total_freq() const noexcept { return pos_freq + neg_freq; }

    friend bool operator==(const TermStats&, const TermStats&) = default;
};

/// Term (space-joined n-gram) to its counts.
using TermStatsMap = std::unordered_map<std::string, TermStats>;

/// Occurrence counts per term.
using NgramCounts = std::unordered_map<std::string, std::uint64_t>;

struct ExtractionConfig {
    int max_n = 4;
    std::uint64_t min_term_freq = 30;

    /// Throws InvalidConfig unless max_n >= 1 and min_term_freq >= 1.
    void validate() const;
    [[nodiscard]] std::string canonical() const;
};

/// Every contiguous n-gram of length 1..max_n inside each segment, with
/// occurrence counts. Never spans a segment boundary.
NgramCounts extract_ngrams(const TokenStream& stream, int max_n);

/// Calls `visit(term)` for every n-gram occurrence, lengths 1..max_n, in
/// segment order. `term` is only valid during the call.
template <typename Visitor>
void for_each_ngram(const TokenStream& stream, int max_n, Visitor&& visit)
{
    std::string term;
    for (const auto& segment : stream.segments) {
        for (std::size_t start = 0; start < segment.size(); ++start) {
            term.clear();
            for (std::size_t len = 1; len <= static_cast<std::size_t>(max_n) && start + len <= segment.size();
                 ++len) {
                if (len > 1) {
                    term.push_back(' ');
                }
                term.append(segment[start + len - 1]);
                visit(static_cast<const std::string&>(term));
            }
        }
    }
}

/// Counts every n-gram over the corpus (both classes required), then drops
/// terms whose total frequency is below min_term_freq. `threads` > 1 splits
/// documents across workers; the result does not depend on it.
TermStatsMap accumulate_stats(const LabeledCorpus& corpus, const PreprocessConfig& preprocess,
                              const ExtractionConfig& extraction, unsigned threads = 1);

/// Same counting over already-preprocessed streams; `labels[i]` belongs to
/// `streams[i]`.
TermStatsMap accumulate_stats(const std::vector<TokenStream>& streams, const std::vector<Label>& labels,
                              const ExtractionConfig& extraction, unsigned threads = 1);

/// Drops terms whose total frequency is below `min_term_freq`.
TermStatsMap apply_min_term_freq(const TermStatsMap& stats, std::uint64_t min_term_freq);

/// Debug dump: "term\tf+\tf-\td+\td-" lines sorted by term.
void write_stats_tsv(std::ostream& out, const TermStatsMap& stats);

/// Preprocesses each document; parallel over `threads` workers.
std::vector<TokenStream> preprocess_all(const std::vector<Document>& documents, const PreprocessConfig& config,
                                        unsigned threads = 1);

}  // namespace relevant
