#include "relevant/pipeline.hpp"

#include <algorithm>
#include <chrono>
#include <fstream>
#include <istream>
#include <map>
#include <ostream>

#include "parallel.hpp"
#include "relevant/error.hpp"
#include "relevant/keyword_extraction.hpp"

namespace relevant {

namespace {

std::string_view trim(std::string_view s)
{
    const auto first = s.find_first_not_of(" \t\r\n");
    if (first == std::string_view::npos) {
        return {};
    }
    return s.substr(first, s.find_last_not_of(" \t\r\n") - first + 1);
}

}  // namespace

PreparedCorpus prepare_corpus(const LabeledCorpus& corpus, const PreprocessConfig& preprocess, unsigned threads)
{
    PreparedCorpus out;
    out.streams = preprocess_all(corpus.documents(), preprocess, threads);
    out.labels = corpus.labels();
    out.ids.reserve(corpus.size());
    for (const auto& doc : corpus.documents()) {
        out.ids.push_back(doc.id);
    }
    return out;
}

KeywordList select_from_stats(const TermStatsMap& stats, const PreparedCorpus& train, const PipelineConfig& config)
{
    const auto n_pos = static_cast<std::size_t>(std::count(train.labels.begin(), train.labels.end(), Label::Relevant));
    return select_keywords(stats, n_pos, train.labels.size() - n_pos, config.scoring,
                           ke_fingerprint(config.preprocess, config.extraction, config.scoring));
}

KeywordList extract_keywords(const PreparedCorpus& train, const PipelineConfig& config, unsigned threads)
{
    config.extraction.validate();
    config.scoring.validate();
    return select_from_stats(accumulate_stats(train.streams, train.labels, config.extraction, threads), train, config);
}

std::vector<FeatureVector> vectorize_streams(const std::vector<TokenStream>& streams, const KeywordList& keywords,
                                             const FeatureMode& mode, unsigned threads)
{
    if (keywords.empty()) {
        throw Error(ErrorKind::InvalidArgument, "cannot vectorize against an empty keyword list");
    }
    std::vector<FeatureVector> vectors(streams.size());
    detail::parallel_chunks(streams.size(), threads, [&](std::size_t begin, std::size_t end, std::size_t) {
        for (std::size_t i = begin; i < end; ++i) {
            vectors[i] = vectorize_stream(streams[i], keywords, mode);
        }
    });
    return vectors;
}

TrainResult train_classifier(std::span<const FeatureVector> vectors, std::span<const Label> labels,
                             const PipelineConfig& config)
{
    return train(vectors, labels, config.architecture, config.train, config.threshold);
}

std::vector<Prediction> predict_all(const MlpModel& model, std::span<const FeatureVector> vectors, unsigned threads)
{
    std::vector<Prediction> out(vectors.size());
    detail::parallel_chunks(vectors.size(), threads, [&](std::size_t begin, std::size_t end, std::size_t) {
        for (std::size_t i = begin; i < end; ++i) {
            out[i] = model.predict(vectors[i]);
        }
    });
    return out;
}

std::vector<Label> labels_of(std::span<const Prediction> predictions)
{
    std::vector<Label> out;
    out.reserve(predictions.size());
    for (const auto& p : predictions) {
        out.push_back(p.label);
    }
    return out;
}

ExperimentOutcome run_experiment(const PreparedCorpus& train, const PreparedCorpus& test,
                                 const PipelineConfig& config, const AblationMode& mode, const std::string& run_name,
                                 unsigned threads, const KeywordList* keywords)
{
    const auto start = std::chrono::steady_clock::now();
    KeywordList full = keywords != nullptr ? *keywords : extract_keywords(train, config, threads);
    KeywordList used = ablation_keywords(full, mode, config.top_by);

    std::vector<FeatureVector> train_vectors;
    std::vector<FeatureVector> test_vectors;
    if (mode.kind == AblationMode::Kind::RandomVectors) {
        train_vectors = random_vectors(train.size(), used.size(), config.train.seed ^ 0x5851f42d4c957f2dULL);
        test_vectors = random_vectors(test.size(), used.size(), config.train.seed ^ 0x14057b7ef767814fULL);
    } else {
        train_vectors = vectorize_streams(train.streams, used, config.features, threads);
        test_vectors = vectorize_streams(test.streams, used, config.features, threads);
    }
    TrainResult trained = train_classifier(train_vectors, train.labels, config);
    auto predictions = predict_all(trained.model, test_vectors, threads);
    const auto metrics = compute_metrics(labels_of(predictions), test.labels);
    const std::chrono::duration<double> elapsed = std::chrono::steady_clock::now() - start;
    ResultRow row{run_name, metrics, used.size(), elapsed.count()};
    return {std::move(used), std::move(trained.model), std::move(trained.history), std::move(predictions),
            std::move(row)};
}

std::vector<SweepAxis> parse_grid(std::istream& in)
{
    std::vector<SweepAxis> grid;
    std::string raw;
    std::size_t line_no = 0;
    PipelineConfig probe;
    while (std::getline(in, raw)) {
        ++line_no;
        std::string_view line(raw);
        if (const auto hash = line.find('#'); hash != std::string_view::npos) {
            line = line.substr(0, hash);
        }
        line = trim(line);
        if (line.empty()) {
            continue;
        }
        const auto where = "grid line " + std::to_string(line_no) + ": ";
        const auto eq = line.find('=');
        if (eq == std::string_view::npos) {
            throw Error(ErrorKind::InvalidConfig, where + "expected key = v1, v2, ...");
        }
        SweepAxis axis{std::string(trim(line.substr(0, eq))), {}};
        const auto values = line.substr(eq + 1);
        const char sep = values.find('|') != std::string_view::npos ? '|' : ',';
        std::size_t pos = 0;
        while (pos <= values.size()) {
            const auto next = std::min(values.find(sep, pos), values.size());
            const auto value = trim(values.substr(pos, next - pos));
            if (value.empty()) {
                throw Error(ErrorKind::InvalidConfig, where + "empty value for " + axis.key);
            }
            try {
                probe.set(axis.key, value);
            } catch (const Error& e) {
                throw Error(ErrorKind::InvalidConfig, where + e.message());
            }
            axis.values.emplace_back(value);
            pos = next + 1;
        }
        for (const auto& existing : grid) {
            if (existing.key == axis.key) {
                throw Error(ErrorKind::InvalidConfig, where + "key " + axis.key + " listed twice");
            }
        }
        grid.push_back(std::move(axis));
    }
    if (grid.empty()) {
        throw Error(ErrorKind::InvalidConfig, "sweep grid lists no parameters");
    }
    return grid;
}

std::vector<SweepAxis> load_grid(const std::filesystem::path& path)
{
    std::ifstream in(path, std::ios::binary);
    if (!in) {
        throw Error(ErrorKind::MissingFile, "cannot open grid file " + path.string());
    }
    return parse_grid(in);
}

std::vector<ResultRow> run_sweep(const LabeledCorpus& train, const LabeledCorpus& test, const PipelineConfig& base,
                                 const std::vector<SweepAxis>& grid, unsigned threads, std::ostream* log)
{
    if (grid.empty()) {
        throw Error(ErrorKind::InvalidConfig, "sweep grid lists no parameters");
    }
    train.require_both_classes();
    std::map<std::string, std::pair<PreparedCorpus, PreparedCorpus>> prepared;
    std::map<std::string, TermStatsMap> counted;
    std::vector<ResultRow> rows;
    std::vector<std::size_t> digits(grid.size(), 0);

    while (true) {
        PipelineConfig config = base;
        std::string name;
        for (std::size_t a = 0; a < grid.size(); ++a) {
            config.set(grid[a].key, grid[a].values[digits[a]]);
            name += (a == 0 ? "" : ";") + grid[a].key + "=" + grid[a].values[digits[a]];
        }
        config.validate();
        if (log != nullptr) {
            *log << "sweep: " << name << '\n';
        }

        const auto pre_key = config.preprocess.canonical();
        auto corpora = prepared.find(pre_key);
        if (corpora == prepared.end()) {
            corpora = prepared
                          .emplace(pre_key, std::pair{prepare_corpus(train, config.preprocess, threads),
                                                      prepare_corpus(test, config.preprocess, threads)})
                          .first;
        }
        const auto& [train_prep, test_prep] = corpora->second;
        const auto count_key = pre_key + config.extraction.canonical();
        auto stats = counted.find(count_key);
        if (stats == counted.end()) {
            stats = counted
                        .emplace(count_key,
                                 accumulate_stats(train_prep.streams, train_prep.labels, config.extraction, threads))
                        .first;
        } else if (log != nullptr) {
            *log << "sweep: reusing counts\n";
        }
        const auto start = std::chrono::steady_clock::now();
        const KeywordList keywords = select_from_stats(stats->second, train_prep, config);
        auto outcome = run_experiment(train_prep, test_prep, config, AblationMode::full(), name, threads, &keywords);
        const std::chrono::duration<double> elapsed = std::chrono::steady_clock::now() - start;
        outcome.row.wall_seconds = elapsed.count();
        rows.push_back(std::move(outcome.row));

        // odometer increment, last axis fastest
        std::size_t a = grid.size();
        while (a > 0) {
            --a;
            if (++digits[a] < grid[a].values.size()) {
                break;
            }
            digits[a] = 0;
            if (a == 0) {
                return rows;
            }
        }
    }
}

}  // namespace relevant
