#pragma once

#include <filesystem>
#include <iosfwd>
#include <string>
#include <string_view>
#include <vector>

#include "relevant/classifier.hpp"
#include "relevant/evaluation.hpp"
#include "relevant/features.hpp"
#include "relevant/keyword_extraction.hpp"
#include "relevant/preprocess.hpp"
#include "relevant/scoring.hpp"

namespace relevant {

/// Every pipeline knob in one place. The text form is one `dotted.key = value`
/// per line; '#' starts a comment. Unknown keys are rejected.
struct PipelineConfig {
    PreprocessConfig preprocess;
    ExtractionConfig extraction;
    ScoringConfig scoring;
    FeatureMode features;
    MlpArchitecture architecture = MlpArchitecture::a1();
    double threshold = kDefaultThreshold;
    TrainConfig train;
    TopBy top_by = TopBy::TotalFrequency;

    std::filesystem::path train_path;
    std::filesystem::path test_path;
    std::filesystem::path keywords_path;
    std::filesystem::path model_path;
    std::filesystem::path output_path;
    std::filesystem::path manual_keywords_path;

    /// Sets one key from its text value. Throws InvalidConfig for unknown
    /// keys or unparsable values.
    void set(std::string_view key, std::string_view value);
    /// Current value of `key` in the same text form `set` accepts.
    [[nodiscard]] std::string get(std::string_view key) const;
    /// Checks every section's invariants.
    void validate() const;

    /// All keys in documentation order.
    static const std::vector<std::string>& keys();

    static PipelineConfig parse(std::istream& in);
    static PipelineConfig load(const std::filesystem::path& path);
    /// Every key with its current value, one per line.
    void write(std::ostream& out) const;
};

}  // namespace relevant
