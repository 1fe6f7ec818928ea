#include "relevant/scoring.hpp"

#include <algorithm>
#include <cctype>
#include <cmath>
#include <fstream>
#include <ostream>

#include <json.hpp>

#include "relevant/error.hpp"
#include "relevant/util.hpp"

namespace relevant {

PenaltyExponent::PenaltyExponent(double value) : value_(value)
{
    if (std::isnan(value) || value < 1.0) {
        throw Error(ErrorKind::InvalidConfig, "penalty exponent must be >= 1 or infinite");
    }
}

PenaltyExponent PenaltyExponent::parse(std::string_view text)
{
    std::string lowered;
    for (const char c : text) {
        lowered.push_back(static_cast<char>(std::tolower(static_cast<unsigned char>(c))));
    }
    if (lowered == "inf" || lowered == "infinite" || lowered == "infinity") {
        return infinite();
    }
    try {
        std::size_t used = 0;
        const double v = std::stod(lowered, &used);
        if (used != lowered.size()) {
            throw std::invalid_argument("trailing characters");
        }
        return PenaltyExponent(v);
    } catch (const std::logic_error&) {
        throw Error(ErrorKind::InvalidConfig, "bad penalty exponent '" + std::string(text) + "'");
    }
}

std::string PenaltyExponent::to_string() const
{
    return is_infinite() ? "inf" : format_significant(value_, 17);
}

void ScoringConfig::validate() const
{
    if (!(epsilon > 0.0) || !std::isfinite(epsilon)) {
        throw Error(ErrorKind::InvalidConfig, "scoring.epsilon must be a positive finite number");
    }
    if (!(df_weight >= 0.0 && df_weight <= 1.0)) {
        throw Error(ErrorKind::InvalidConfig, "scoring.df_weight must lie in [0, 1]");
    }
    if (!(score_min >= 0.0 && score_min <= 1.0)) {
        throw Error(ErrorKind::InvalidConfig, "scoring.score_min must lie in [0, 1]");
    }
}

std::string ScoringConfig::canonical() const
{
    return "scoring.epsilon=" + format_significant(epsilon, 17) +
           "\nscoring.penalty_exponent=" + penalty_exponent.to_string() +
           "\nscoring.df_weight=" + format_significant(df_weight, 17) +
           "\nscoring.hard_filter=" + (hard_filter ? "true" : "false") +
           "\nscoring.score_min=" + format_significant(score_min, 17) + "\n";
}

double negative_penalty(std::uint64_t neg_freq, PenaltyExponent p)
{
    if (neg_freq == 0) {
        return 0.0;
    }
    if (neg_freq == 1) {
        return 1.0;
    }
    if (p.is_infinite()) {
        return std::numeric_limits<double>::infinity();
    }
    const double base = static_cast<double>(neg_freq);
    const double e = p.value();
    if (e == std::floor(e) && e <= 1e9) {
        auto n = static_cast<std::uint64_t>(e);
        double result = 1.0;
        double power = base;
        while (n > 0) {
            if (n & 1U) {
                result *= power;
            }
            n >>= 1U;
            if (n > 0) {
                power *= power;
            }
        }
        return result;  // IEEE overflow already saturates to +inf
    }
    return std::exp(e * std::log(base));
}

double csm(const TermStats& stats, double epsilon, PenaltyExponent p)
{
    if (stats.pos_freq == 0) {
        return 0.0;
    }
    const double pos = static_cast<double>(stats.pos_freq);
    if (p.is_infinite()) {
        return stats.neg_freq == 0 ? pos / (pos + epsilon) : 0.0;
    }
    return pos / (pos + negative_penalty(stats.neg_freq, p) + epsilon);
}

double df(const TermStats& stats, std::size_t n_pos, std::size_t n_neg, double epsilon)
{
    if (n_pos == 0 || n_neg == 0) {
        throw Error(ErrorKind::BothClassesRequired, "document-frequency score needs N+ >= 1 and N- >= 1");
    }
    const double r_pos = static_cast<double>(stats.pos_docs) / static_cast<double>(n_pos);
    const double r_neg = static_cast<double>(stats.neg_docs) / static_cast<double>(n_neg);
    return r_pos / (r_pos + r_neg + epsilon);
}

double combined_score(double csm_value, double df_value, double df_weight)
{
    return (1.0 - df_weight) * csm_value + df_weight * df_value;
}

KeywordList::KeywordList(std::vector<ScoredKeyword> keywords, std::string config_fingerprint)
    : keywords_(std::move(keywords)), fingerprint_(std::move(config_fingerprint))
{
    index_.reserve(keywords_.size());
    for (std::size_t i = 0; i < keywords_.size(); ++i) {
        if (!index_.emplace(keywords_[i].term, i).second) {
            throw Error(ErrorKind::InvalidArgument, "duplicate keyword '" + keywords_[i].term + "'");
        }
        const auto& term = keywords_[i].term;
        max_order_ = std::max(max_order_, 1 + static_cast<int>(std::count(term.begin(), term.end(), ' ')));
    }
}

long KeywordList::index_of(std::string_view term) const
{
    const auto it = index_.find(term);
    return it == index_.end() ? -1 : static_cast<long>(it->second);
}

KeywordList KeywordList::subset(const std::vector<std::size_t>& positions) const
{
    std::vector<ScoredKeyword> kept;
    kept.reserve(positions.size());
    for (const auto pos : positions) {
        kept.push_back(keywords_.at(pos));
    }
    return KeywordList(std::move(kept), fingerprint_);
}

std::string ke_fingerprint(const PreprocessConfig& preprocess, const ExtractionConfig& extraction,
                           const ScoringConfig& scoring)
{
    return hex_digest(fnv1a64(preprocess.canonical() + extraction.canonical() + scoring.canonical()));
}

KeywordList select_keywords(const TermStatsMap& stats, std::size_t n_pos, std::size_t n_neg,
                            const ScoringConfig& config, std::string config_fingerprint)
{
    config.validate();
    std::vector<ScoredKeyword> selected;
    for (const auto& [term, s] : stats) {
        if (config.hard_filter && s.neg_docs > 0) {
            continue;
        }
        ScoredKeyword k;
        k.term = term;
        k.stats = s;
        k.csm = csm(s, config.epsilon, config.penalty_exponent);
        k.df = df(s, n_pos, n_neg, config.epsilon);
        k.score = combined_score(k.csm, k.df, config.df_weight);
        if (k.score >= config.score_min) {
            selected.push_back(std::move(k));
        }
    }
    if (selected.empty()) {
        throw Error(ErrorKind::NoKeywordsSelected,
                    "no term reached scoring.score_min=" + format_significant(config.score_min, 6) + " out of " +
                        std::to_string(stats.size()) + " candidates");
    }
    std::sort(selected.begin(), selected.end(), [](const ScoredKeyword& a, const ScoredKeyword& b) {
        return a.score != b.score ? a.score > b.score : a.term < b.term;
    });
    return KeywordList(std::move(selected), std::move(config_fingerprint));
}

void write_keyword_list(std::ostream& out, const KeywordList& keywords)
{
    out << "{\n  \"config_fingerprint\": " << nlohmann::json(keywords.config_fingerprint()).dump()
        << ",\n  \"keywords\": [";
    for (std::size_t i = 0; i < keywords.size(); ++i) {
        const auto& k = keywords[i];
        out << (i == 0 ? "\n" : ",\n") << "    {\"term\": " << nlohmann::json(k.term).dump()
            << ", \"csm\": " << format_significant(k.csm, 12) << ", \"df\": " << format_significant(k.df, 12)
            << ", \"score\": " << format_significant(k.score, 12) << ", \"pos_freq\": " << k.stats.pos_freq
            << ", \"neg_freq\": " << k.stats.neg_freq << ", \"pos_docs\": " << k.stats.pos_docs
            << ", \"neg_docs\": " << k.stats.neg_docs << "}";
    }
    out << (keywords.empty() ? "]\n}\n" : "\n  ]\n}\n");
}

void save_keyword_list(const std::filesystem::path& path, const KeywordList& keywords)
{
    std::ofstream out(path, std::ios::binary);
    if (!out) {
        throw Error(ErrorKind::Io, "cannot write keyword file " + path.string());
    }
    write_keyword_list(out, keywords);
}

KeywordList read_keyword_list(std::istream& in)
{
    using nlohmann::json;
    try {
        const json doc = json::parse(in);
        std::vector<ScoredKeyword> keywords;
        for (const auto& entry : doc.at("keywords")) {
            ScoredKeyword k;
            k.term = entry.at("term").get<std::string>();
            k.csm = entry.at("csm").get<double>();
            k.df = entry.at("df").get<double>();
            k.score = entry.at("score").get<double>();
            k.stats.pos_freq = entry.at("pos_freq").get<std::uint64_t>();
            k.stats.neg_freq = entry.at("neg_freq").get<std::uint64_t>();
            k.stats.pos_docs = entry.at("pos_docs").get<std::uint64_t>();
            k.stats.neg_docs = entry.at("neg_docs").get<std::uint64_t>();
            if (k.term.empty()) {
                throw Error(ErrorKind::CorruptKeywordFile, "empty term");
            }
            keywords.push_back(std::move(k));
        }
        return KeywordList(std::move(keywords), doc.at("config_fingerprint").get<std::string>());
    } catch (const json::exception& e) {
        throw Error(ErrorKind::CorruptKeywordFile, e.what());
    } catch (const Error& e) {
        if (e.kind() == ErrorKind::InvalidArgument) {
            throw Error(ErrorKind::CorruptKeywordFile, e.what());
        }
        throw;
    }
}

KeywordList load_keyword_list(const std::filesystem::path& path)
{
    std::ifstream in(path, std::ios::binary);
    if (!in) {
        throw Error(ErrorKind::MissingFile, "cannot open keyword file " + path.string());
    }
    return read_keyword_list(in);
}

}  // namespace relevant
