#pragma once

#include <cstddef>
#include <cstdint>
#include <filesystem>
#include <iosfwd>
#include <span>
#include <string>
#include <vector>

#include "relevant/corpus.hpp"
#include "relevant/features.hpp"
#include "relevant/preprocess.hpp"
#include "relevant/scoring.hpp"

namespace relevant {

/// Binary metrics with Relevant as the positive class. Percentages are kept
/// unrounded; round with round_half_up_1dp / format_percent for display.
struct Metrics {
    double accuracy = 0.0;
    double f1 = 0.0;
    double precision = 0.0;
    double recall = 0.0;
    std::size_t tp = 0;
    std::size_t fp = 0;
    std::size_t fn = 0;
    std::size_t tn = 0;

    [[nodiscard]] std::size_t total() const noexcept { return tp + fp + fn + tn; }

    friend bool operator==(const Metrics&, const Metrics&) = default;
};

/// Throws LengthMismatch if the lengths differ and InvalidArgument if both
/// are empty.
Metrics compute_metrics(std::span<const Label> predictions, std::span<const Label> truths);

/// Predicts the training majority for every test document; a tie predicts
/// Irrelevant.
Metrics baseline_majority(std::span<const Label> train_labels, std::span<const Label> test_truths);

Metrics baseline_always_positive(std::span<const Label> test_truths);

/// One keyword or phrase per line; blank lines and lines starting with '#'
/// are ignored. Throws EmptyKeywordFile if nothing remains.
std::vector<std::string> read_manual_keywords(std::istream& in);
std::vector<std::string> load_manual_keywords(const std::filesystem::path& path);

/// Relevant iff the preprocessed document contains at least one keyword as a
/// contiguous token sequence. Keywords are tokenized (and stemmed when the
/// config stems) but not entity- or citation-filtered.
std::vector<Label> manual_keyword_predictions(const std::vector<std::string>& keywords,
                                              const std::vector<TokenStream>& documents,
                                              const PreprocessConfig& preprocess);

Metrics baseline_manual_keywords(const std::vector<std::string>& keywords, const LabeledCorpus& corpus,
                                 const PreprocessConfig& preprocess, unsigned threads = 1);

/// How "top" keywords are ranked for the subset ablations.
enum class TopBy { TotalFrequency, PositiveFrequency };

struct AblationMode {
    enum class Kind { Full, TopK, ExcludeTopK, RandomVectors };
    Kind kind = Kind::Full;
    std::size_t k = 0;

    static AblationMode full() { return {Kind::Full, 0}; }
    static AblationMode top(std::size_t k) { return {Kind::TopK, k}; }
    static AblationMode exclude_top(std::size_t k) { return {Kind::ExcludeTopK, k}; }
    static AblationMode random_vectors() { return {Kind::RandomVectors, 0}; }

    /// "full", "top3", "exclude_top3", "random_vectors".
    [[nodiscard]] std::string name() const;
    static AblationMode parse(std::string_view text);
};

/// Keyword positions ordered by descending frequency; ties keep list order.
std::vector<std::size_t> rank_by_frequency(const KeywordList& keywords, TopBy by);

/// The keyword set an ablation trains on. Full and RandomVectors return the
/// list unchanged. Throws InsufficientKeywords unless k < size (and k >= 1
/// for TopK).
KeywordList ablation_keywords(const KeywordList& keywords, const AblationMode& mode, TopBy by);

/// `count` vectors of dimension `dim` with every coordinate uniform in [0, 1).
std::vector<FeatureVector> random_vectors(std::size_t count, std::size_t dim, std::uint64_t seed);

struct ResultRow {
    std::string run_name;
    Metrics metrics;
    std::size_t n_keywords = 0;
    double wall_seconds = 0.0;
};

/// Header plus one row per result; percentages at one decimal, rounded half
/// up. `with_timing` false writes the wall_seconds column as "-".
void write_results_tsv(std::ostream& out, const std::vector<ResultRow>& rows, bool with_timing = true);
void write_summary(std::ostream& out, const std::vector<ResultRow>& rows);

}  // namespace relevant
