#include "relevant/evaluation.hpp"

#include <algorithm>
#include <fstream>
#include <istream>
#include <numeric>
#include <ostream>

#include "relevant/error.hpp"
#include "relevant/keyword_extraction.hpp"
#include "relevant/util.hpp"

namespace relevant {

namespace {

double percent(std::size_t num, std::size_t den)
{
    return den == 0 ? 0.0 : 100.0 * static_cast<double>(num) / static_cast<double>(den);
}

std::string trim(const std::string& s)
{
    const auto first = s.find_first_not_of(" \t\r\n");
    if (first == std::string::npos) {
        return {};
    }
    const auto last = s.find_last_not_of(" \t\r\n");
    return s.substr(first, last - first + 1);
}

std::string join_tokens(const TokenStream& stream)
{
    std::string out;
    for (const auto& segment : stream.segments) {
        for (const auto& token : segment) {
            out += (out.empty() ? "" : " ") + token;
        }
    }
    return out;
}

}  // namespace

Metrics compute_metrics(std::span<const Label> predictions, std::span<const Label> truths)
{
    if (predictions.size() != truths.size()) {
        throw Error(ErrorKind::LengthMismatch, std::to_string(predictions.size()) + " predictions for " +
                                                   std::to_string(truths.size()) + " truths");
    }
    if (truths.empty()) {
        throw Error(ErrorKind::InvalidArgument, "cannot compute metrics over zero documents");
    }
    Metrics m;
    for (std::size_t i = 0; i < truths.size(); ++i) {
        const bool predicted = predictions[i] == Label::Relevant;
        const bool actual = truths[i] == Label::Relevant;
        if (predicted && actual) {
            ++m.tp;
        } else if (predicted) {
            ++m.fp;
        } else if (actual) {
            ++m.fn;
        } else {
            ++m.tn;
        }
    }
    m.accuracy = percent(m.tp + m.tn, m.total());
    m.precision = percent(m.tp, m.tp + m.fp);
    m.recall = percent(m.tp, m.tp + m.fn);
    // 2tp / (2tp + fp + fn) equals 2PR/(P+R) without compounding rounding
    m.f1 = percent(2 * m.tp, 2 * m.tp + m.fp + m.fn);
    return m;
}

Metrics baseline_majority(std::span<const Label> train_labels, std::span<const Label> test_truths)
{
    if (train_labels.empty()) {
        throw Error(ErrorKind::InvalidArgument, "majority baseline needs training labels");
    }
    const auto positives = std::count(train_labels.begin(), train_labels.end(), Label::Relevant);
    const auto negatives = static_cast<std::ptrdiff_t>(train_labels.size()) - positives;
    const Label majority = positives > negatives ? Label::Relevant : Label::Irrelevant;
    const std::vector<Label> predictions(test_truths.size(), majority);
    return compute_metrics(predictions, test_truths);
}

Metrics baseline_always_positive(std::span<const Label> test_truths)
{
    const std::vector<Label> predictions(test_truths.size(), Label::Relevant);
    return compute_metrics(predictions, test_truths);
}

std::vector<std::string> read_manual_keywords(std::istream& in)
{
    std::vector<std::string> keywords;
    std::string line;
    while (std::getline(in, line)) {
        line = trim(line);
        if (!line.empty() && line.front() != '#') {
            keywords.push_back(line);
        }
    }
    if (keywords.empty()) {
        throw Error(ErrorKind::EmptyKeywordFile, "manual keyword file lists no keywords");
    }
    return keywords;
}

std::vector<std::string> load_manual_keywords(const std::filesystem::path& path)
{
    std::ifstream in(path, std::ios::binary);
    if (!in) {
        throw Error(ErrorKind::MissingFile, "cannot open manual keyword file " + path.string());
    }
    return read_manual_keywords(in);
}

std::vector<Label> manual_keyword_predictions(const std::vector<std::string>& keywords,
                                              const std::vector<TokenStream>& documents,
                                              const PreprocessConfig& preprocess)
{
    std::vector<std::string> terms;
    for (const auto& keyword : keywords) {
        TokenStream stream = tokenize(keyword);
        if (preprocess.stem_and_lemmatize) {
            stream = stem_tokens(std::move(stream));
        }
        if (auto term = join_tokens(stream); !term.empty()) {
            terms.push_back(std::move(term));
        }
    }
    if (terms.empty()) {
        throw Error(ErrorKind::EmptyKeywordFile, "no manual keyword survives tokenization");
    }
    std::vector<Label> predictions;
    predictions.reserve(documents.size());
    for (const auto& doc : documents) {
        const bool hit = std::any_of(terms.begin(), terms.end(),
                                     [&](const std::string& term) { return count_term(term, doc) > 0; });
        predictions.push_back(hit ? Label::Relevant : Label::Irrelevant);
    }
    return predictions;
}

Metrics baseline_manual_keywords(const std::vector<std::string>& keywords, const LabeledCorpus& corpus,
                                 const PreprocessConfig& preprocess, unsigned threads)
{
    if (keywords.empty()) {
        throw Error(ErrorKind::EmptyKeywordFile, "manual keyword list is empty");
    }
    const auto streams = preprocess_all(corpus.documents(), preprocess, threads);
    return compute_metrics(manual_keyword_predictions(keywords, streams, preprocess), corpus.labels());
}

std::string AblationMode::name() const
{
    switch (kind) {
    case Kind::Full:
        return "full";
    case Kind::TopK:
        return "top" + std::to_string(k);
    case Kind::ExcludeTopK:
        return "exclude_top" + std::to_string(k);
    case Kind::RandomVectors:
        return "random_vectors";
    }
    return "unknown";
}

AblationMode AblationMode::parse(std::string_view text)
{
    auto number = [&](std::string_view digits) {
        std::size_t k = 0;
        if (digits.empty() || digits.find_first_not_of("0123456789") != std::string_view::npos) {
            throw Error(ErrorKind::InvalidConfig, "bad ablation mode '" + std::string(text) + "'");
        }
        for (const char c : digits) {
            k = k * 10 + static_cast<std::size_t>(c - '0');
        }
        return k;
    };
    if (text == "full") {
        return full();
    }
    if (text == "random_vectors") {
        return random_vectors();
    }
    if (text.starts_with("exclude_top")) {
        return exclude_top(number(text.substr(11)));
    }
    if (text.starts_with("top")) {
        return top(number(text.substr(3)));
    }
    throw Error(ErrorKind::InvalidConfig, "bad ablation mode '" + std::string(text) + "'");
}

std::vector<std::size_t> rank_by_frequency(const KeywordList& keywords, TopBy by)
{
    std::vector<std::size_t> order(keywords.size());
    std::iota(order.begin(), order.end(), std::size_t{0});
    auto freq = [&](std::size_t i) {
        const auto& s = keywords[i].stats;
        return by == TopBy::TotalFrequency ? s.total_freq() : s.pos_freq;
    };
    std::stable_sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) { return freq(a) > freq(b); });
    return order;
}

KeywordList ablation_keywords(const KeywordList& keywords, const AblationMode& mode, TopBy by)
{
    using Kind = AblationMode::Kind;
    if (mode.kind == Kind::Full || mode.kind == Kind::RandomVectors) {
        return keywords;
    }
    if (mode.k >= keywords.size() || (mode.kind == Kind::TopK && mode.k == 0)) {
        throw Error(ErrorKind::InsufficientKeywords, mode.name() + " needs 0 < k < " +
                                                         std::to_string(keywords.size()) + " keywords");
    }
    const auto ranked = rank_by_frequency(keywords, by);
    std::vector<std::size_t> chosen(mode.kind == Kind::TopK ? ranked.begin() : ranked.begin() + mode.k,
                                    mode.kind == Kind::TopK ? ranked.begin() + mode.k : ranked.end());
    // keep the score order of the original list
    std::sort(chosen.begin(), chosen.end());
    return keywords.subset(chosen);
}

std::vector<FeatureVector> random_vectors(std::size_t count, std::size_t dim, std::uint64_t seed)
{
    Rng rng(seed);
    std::vector<FeatureVector> vectors(count);
    for (auto& v : vectors) {
        v.dim = dim;
        for (std::size_t i = 0; i < dim; ++i) {
            const double value = rng.uniform01();
            if (value != 0.0) {
                v.entries.push_back({static_cast<std::uint32_t>(i), value});
            }
        }
    }
    return vectors;
}

void write_results_tsv(std::ostream& out, const std::vector<ResultRow>& rows, bool with_timing)
{
    out << "run_name\taccuracy\tf1\tprecision\trecall\ttp\tfp\tfn\ttn\tn_keywords\twall_seconds\n";
    for (const auto& row : rows) {
        const auto& m = row.metrics;
        out << row.run_name << '\t' << format_percent(m.accuracy) << '\t' << format_percent(m.f1) << '\t'
            << format_percent(m.precision) << '\t' << format_percent(m.recall) << '\t' << m.tp << '\t' << m.fp
            << '\t' << m.fn << '\t' << m.tn << '\t' << row.n_keywords << '\t'
            << (with_timing ? format_significant(row.wall_seconds, 4) : std::string("-")) << '\n';
    }
}

void write_summary(std::ostream& out, const std::vector<ResultRow>& rows)
{
    std::size_t width = 8;
    for (const auto& row : rows) {
        width = std::max(width, row.run_name.size());
    }
    for (const auto& row : rows) {
        const auto& m = row.metrics;
        out << row.run_name << std::string(width - row.run_name.size() + 2, ' ') << "accuracy "
            << format_percent(m.accuracy) << "  F1 " << format_percent(m.f1) << "  (tp " << m.tp << ", fp " << m.fp
            << ", fn " << m.fn << ", tn " << m.tn << ")\n";
    }
}

}  // namespace relevant
