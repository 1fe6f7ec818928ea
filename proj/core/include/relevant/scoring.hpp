#pragma once

#include <cstddef>
#include <filesystem>
#include <iosfwd>
#include <limits>
#include <string>
#include <string_view>
#include <unordered_map>
#include <vector>

#include "relevant/keyword_extraction.hpp"

namespace relevant {

/// Exponent applied to the negative-class frequency in the contrastive
/// score. Either a finite value >= 1 or Infinite, which zeroes the score of
/// any term seen in an irrelevant document.
class PenaltyExponent {
public:
    constexpr PenaltyExponent() = default;
    /// Throws InvalidConfig for values below 1 or NaN. +inf maps to Infinite.
    explicit PenaltyExponent(double value);

    static constexpr PenaltyExponent infinite() noexcept
    {
        PenaltyExponent p;
        p.value_ = std::numeric_limits<double>::infinity();
        return p;
    }
    /// Accepts a decimal number or "inf"/"infinite" (any case).
    static PenaltyExponent parse(std::string_view text);

    [[nodiscard]] constexpr bool is_infinite() const noexcept
    {
        return value_ == std::numeric_limits<double>::infinity();
    }
    [[nodiscard]] constexpr double value() const noexcept { return value_; }
    [[nodiscard]] std::string to_string() const;

    friend constexpr bool operator==(PenaltyExponent, PenaltyExponent) = default;

private:
    double value_ = 10.0;
};

struct ScoringConfig {
    double epsilon = 0.01;
    PenaltyExponent penalty_exponent{};
    /// Weight on the document-frequency score; the contrastive score gets
    /// 1 - df_weight.
    double df_weight = 0.75;
    bool hard_filter = false;
    double score_min = 0.5;

    void validate() const;
    [[nodiscard]] std::string canonical() const;
};

/// (f-)^p. Integer exponents use exact repeated squaring; others exp(p ln f).
/// Overflow saturates to +inf.
double negative_penalty(std::uint64_t neg_freq, PenaltyExponent p);

/// Contrastive score f+ / (f+ + (f-)^p + eps), in [0, 1).
double csm(const TermStats& stats, double epsilon, PenaltyExponent p);

/// Document-spread score r+ / (r+ + r- + eps), r+ = d+/N+, r- = d-/N-.
double df(const TermStats& stats, std::size_t n_pos, std::size_t n_neg, double epsilon);

/// (1 - df_weight) * csm + df_weight * df.
double combined_score(double csm_value, double df_value, double df_weight);

struct ScoredKeyword {
    std::string term;
    double csm = 0.0;
    double df = 0.0;
    double score = 0.0;
    TermStats stats;

    friend bool operator==(const ScoredKeyword&, const ScoredKeyword&) = default;
};

/// Selected keywords in descending score order (ties by term). A keyword's
/// position is its feature index.
class KeywordList {
public:
    KeywordList() = default;
    KeywordList(std::vector<ScoredKeyword> keywords, std::string config_fingerprint);

    [[nodiscard]] const std::vector<ScoredKeyword>& keywords() const noexcept { return keywords_; }
    [[nodiscard]] std::size_t size() const noexcept { return keywords_.size(); }
    [[nodiscard]] bool empty() const noexcept { return keywords_.empty(); }
    [[nodiscard]] const ScoredKeyword& operator[](std::size_t i) const { return keywords_[i]; }
    [[nodiscard]] const std::string& config_fingerprint() const noexcept { return fingerprint_; }

    /// Feature index of `term`, or -1.
    [[nodiscard]] long index_of(std::string_view term) const;
    /// Longest keyword, in tokens.
    [[nodiscard]] int max_order() const noexcept { return max_order_; }

    /// Keeps the listed positions (in the given order) and reindexes.
    [[nodiscard]] KeywordList subset(const std::vector<std::size_t>& positions) const;

    friend bool operator==(const KeywordList& a, const KeywordList& b)
    {
        return a.fingerprint_ == b.fingerprint_ && a.keywords_ == b.keywords_;
    }

private:
    struct StringHash {
        using is_transparent = void;
        std::size_t operator()(std::string_view s) const noexcept { return std::hash<std::string_view>{}(s); }
    };

    std::vector<ScoredKeyword> keywords_;
    std::string fingerprint_;
    std::unordered_map<std::string, std::size_t, StringHash, std::equal_to<>> index_;
    int max_order_ = 0;
};

/// Fingerprint of everything that shapes the keyword list.
std::string ke_fingerprint(const PreprocessConfig& preprocess, const ExtractionConfig& extraction,
                           const ScoringConfig& scoring);

/// Scores every (already MTF-filtered) term, applies the optional hard filter
/// and the score_min cutoff, and sorts. Throws NoKeywordsSelected when nothing
/// survives.
KeywordList select_keywords(const TermStatsMap& stats, std::size_t n_pos, std::size_t n_neg,
                            const ScoringConfig& config, std::string config_fingerprint = {});

/// JSON keyword file; reals carry 12 significant digits.
void write_keyword_list(std::ostream& out, const KeywordList& keywords);
void save_keyword_list(const std::filesystem::path& path, const KeywordList& keywords);
KeywordList read_keyword_list(std::istream& in);
KeywordList load_keyword_list(const std::filesystem::path& path);

}  // namespace relevant
