#pragma once

#include <iosfwd>
#include <span>
#include <string>
#include <vector>

#include "relevant/classifier.hpp"
#include "relevant/config.hpp"
#include "relevant/corpus.hpp"
#include "relevant/evaluation.hpp"
#include "relevant/features.hpp"
#include "relevant/scoring.hpp"

namespace relevant {

/// A corpus after preprocessing, in file order.
struct PreparedCorpus {
    std::vector<std::string> ids;
    std::vector<TokenStream> streams;
    std::vector<Label> labels;

    [[nodiscard]] std::size_t size() const noexcept { return streams.size(); }
};

PreparedCorpus prepare_corpus(const LabeledCorpus& corpus, const PreprocessConfig& preprocess, unsigned threads = 1);

/// Counts, scores and selects keywords on a prepared training corpus.
KeywordList extract_keywords(const PreparedCorpus& train, const PipelineConfig& config, unsigned threads = 1);

/// KE stage from raw counts, for callers that cache the counting pass.
KeywordList select_from_stats(const TermStatsMap& stats, const PreparedCorpus& train, const PipelineConfig& config);

std::vector<FeatureVector> vectorize_streams(const std::vector<TokenStream>& streams, const KeywordList& keywords,
                                             const FeatureMode& mode, unsigned threads = 1);

TrainResult train_classifier(std::span<const FeatureVector> vectors, std::span<const Label> labels,
                             const PipelineConfig& config);

std::vector<Prediction> predict_all(const MlpModel& model, std::span<const FeatureVector> vectors,
                                    unsigned threads = 1);

std::vector<Label> labels_of(std::span<const Prediction> predictions);

struct ExperimentOutcome {
    KeywordList keywords;
    MlpModel model;
    std::vector<EpochRecord> history;
    std::vector<Prediction> predictions;
    ResultRow row;
};

/// Keyword extraction (unless `keywords` is given), vectorization under the
/// ablation mode, training and evaluation on `test`. RandomVectors replaces
/// both splits' vectors with seeded uniform noise of the full dimension.
ExperimentOutcome run_experiment(const PreparedCorpus& train, const PreparedCorpus& test,
                                 const PipelineConfig& config, const AblationMode& mode, const std::string& run_name,
                                 unsigned threads = 1, const KeywordList* keywords = nullptr);

/// One sweep axis: a config key and the values it takes.
struct SweepAxis {
    std::string key;
    std::vector<std::string> values;
};

/// Grid lines read `key = v1, v2, ...` ('|' separates values instead when the
/// line contains one, e.g. for architecture width lists). Keys are checked
/// against PipelineConfig. Throws InvalidConfig on an empty grid.
std::vector<SweepAxis> parse_grid(std::istream& in);
std::vector<SweepAxis> load_grid(const std::filesystem::path& path);

/// Every combination of the grid, first axis outermost; each row is named
/// "key=value;key=value". Counting passes are shared between combinations
/// with the same preprocessing and extraction settings.
std::vector<ResultRow> run_sweep(const LabeledCorpus& train, const LabeledCorpus& test, const PipelineConfig& base,
                                 const std::vector<SweepAxis>& grid, unsigned threads = 1,
                                 std::ostream* log = nullptr);

}  // namespace relevant
