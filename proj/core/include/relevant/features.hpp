#pragma once

#include <cstddef>
#include <cstdint>
#include <filesystem>
#include <iosfwd>
#include <string>
#include <string_view>
#include <vector>

#include "relevant/corpus.hpp"
#include "relevant/preprocess.hpp"
#include "relevant/scoring.hpp"

namespace relevant {

struct FeatureEntry {
    std::uint32_t index = 0;
    double value = 0.0;

    friend bool operator==(const FeatureEntry&, const FeatureEntry&) = default;
};

/// Sparse vector over keyword indices: strictly increasing indices, no stored
/// zeros.
struct FeatureVector {
    std::size_t dim = 0;
    std::vector<FeatureEntry> entries;

    [[nodiscard]] std::vector<double> to_dense() const;
    [[nodiscard]] double norm() const;

    friend bool operator==(const FeatureVector&, const FeatureVector&) = default;
};

enum class FeatureWeighting { ScoreWeighted, RawCount };

struct FeatureMode {
    FeatureWeighting weighting = FeatureWeighting::ScoreWeighted;
    bool l2_normalize = false;
};

/// Occurrences (overlapping) of the space-joined token sequence `term` inside
/// the segments of `stream`.
std::uint64_t count_term(std::string_view term, const TokenStream& stream);

/// Keyword counts for an already-preprocessed document, from a single pass
/// over its n-grams.
/// Throws InvalidArgument for an empty keyword list.
FeatureVector vectorize_stream(const TokenStream& stream, const KeywordList& keywords, const FeatureMode& mode);

FeatureVector vectorize(const Document& doc, const KeywordList& keywords, const PreprocessConfig& preprocess,
                        const FeatureMode& mode);

std::vector<FeatureVector> vectorize_all(const std::vector<Document>& documents, const KeywordList& keywords,
                                         const PreprocessConfig& preprocess, const FeatureMode& mode,
                                         unsigned threads = 1);

/// Vector cache: "id\tdim\tidx:val,idx:val" per line, values at 9
/// significant digits.
void write_vector_cache(std::ostream& out, const std::vector<std::string>& ids,
                        const std::vector<FeatureVector>& vectors);

struct CachedVectors {
    std::vector<std::string> ids;
    std::vector<FeatureVector> vectors;
};

/// Throws DimensionMismatch if any cached vector's dim differs from
/// `expected_dim`.
CachedVectors read_vector_cache(std::istream& in, std::size_t expected_dim);
CachedVectors load_vector_cache(const std::filesystem::path& path, std::size_t expected_dim);
void save_vector_cache(const std::filesystem::path& path, const std::vector<std::string>& ids,
                       const std::vector<FeatureVector>& vectors);

}  // namespace relevant
