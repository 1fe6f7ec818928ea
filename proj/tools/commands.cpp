#include "commands.hpp"

#include <algorithm>
#include <chrono>
#include <cstdio>
#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>
#include <thread>

#include <CLI11.hpp>
#include <json.hpp>

#include "relevant/config.hpp"
#include "relevant/pipeline.hpp"
#include "relevant/util.hpp"

namespace relevant::cli {

namespace fs = std::filesystem;

int exit_code_for(ErrorKind kind) noexcept
{
    switch (kind) {
    case ErrorKind::Io:
    case ErrorKind::NonFiniteLoss:
        return kExitFailure;
    default:
        return kExitUsage;
    }
}

namespace {

struct Options {
    fs::path config;
    std::optional<std::uint64_t> seed;
    unsigned threads = 0;

    fs::path train;
    fs::path test;
    fs::path keywords;
    fs::path model;
    fs::path output;
    fs::path manual_keywords;
    fs::path input;
    fs::path grid;
    fs::path log;
    fs::path stats;
    bool with_baselines = false;
};

struct Context {
    PipelineConfig config;
    unsigned threads = 1;
    std::ostream& out;
    std::ostream& err;
};

/// The flag value if given, else the config entry, else a usage error.
fs::path pick(const fs::path& flag, const fs::path& configured, const std::string& what, const std::string& key)
{
    if (!flag.empty()) {
        return flag;
    }
    if (!configured.empty()) {
        return configured;
    }
    throw Error(ErrorKind::InvalidConfig, "no " + what + " given: pass the flag or set " + key);
}

std::ofstream open_output(const fs::path& path)
{
    std::ofstream out(path, std::ios::binary);
    if (!out) {
        throw Error(ErrorKind::Io, "cannot write " + path.string());
    }
    return out;
}

void finish_output(std::ofstream& out, const fs::path& path)
{
    out.flush();
    if (!out) {
        throw Error(ErrorKind::Io, "failed writing " + path.string());
    }
}

double seconds_since(std::chrono::steady_clock::time_point start)
{
    return std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
}

void warn_on_fingerprint(const Context& ctx, const KeywordList& keywords)
{
    const auto expected = ke_fingerprint(ctx.config.preprocess, ctx.config.extraction, ctx.config.scoring);
    if (keywords.config_fingerprint() != expected) {
        ctx.err << "warning: keyword file was extracted under a different configuration (fingerprint "
                << keywords.config_fingerprint() << ", current " << expected << ")\n";
    }
}

void check_model_dims(const MlpModel& model, const KeywordList& keywords)
{
    if (model.input_dim() != keywords.size()) {
        throw Error(ErrorKind::DimensionMismatch, "model expects " + std::to_string(model.input_dim()) +
                                                      " features but the keyword file defines " +
                                                      std::to_string(keywords.size()));
    }
}

int cmd_extract_keywords(Context& ctx, const Options& opt)
{
    const auto train_path = pick(opt.train, ctx.config.train_path, "training corpus", "paths.train");
    const auto out_path = pick(opt.output, ctx.config.keywords_path, "keyword output path", "paths.keywords");
    const auto start = std::chrono::steady_clock::now();

    const LabeledCorpus corpus = load_corpus(train_path);
    corpus.require_both_classes();
    ctx.err << "loaded " << corpus.size() << " documents (" << corpus_stats(corpus).ratio_string()
            << " relevant-irrelevant)\n";
    const auto prepared = prepare_corpus(corpus, ctx.config.preprocess, ctx.threads);
    const auto stats = accumulate_stats(prepared.streams, prepared.labels, ctx.config.extraction, ctx.threads);
    ctx.err << stats.size() << " candidate terms after min_term_freq=" << ctx.config.extraction.min_term_freq << '\n';
    if (!opt.stats.empty()) {
        auto stats_out = open_output(opt.stats);
        write_stats_tsv(stats_out, stats);
        finish_output(stats_out, opt.stats);
    }
    const auto keywords = select_from_stats(stats, prepared, ctx.config);

    auto file = open_output(out_path);
    write_keyword_list(file, keywords);
    finish_output(file, out_path);

    ctx.out << keywords.size() << " keywords written to " << out_path.string() << '\n';
    for (std::size_t i = 0; i < std::min<std::size_t>(10, keywords.size()); ++i) {
        const auto& k = keywords[i];
        ctx.out << "  " << (i + 1) << ". " << k.term << "  score " << format_significant(k.score, 4) << "  (f+ "
                << k.stats.pos_freq << ", f- " << k.stats.neg_freq << ")\n";
    }
    ctx.err << "done in " << format_significant(seconds_since(start), 3) << " s\n";
    return kExitOk;
}

int cmd_train(Context& ctx, const Options& opt)
{
    const auto train_path = pick(opt.train, ctx.config.train_path, "training corpus", "paths.train");
    const auto keyword_path = pick(opt.keywords, ctx.config.keywords_path, "keyword file", "paths.keywords");
    const auto model_path = pick(opt.model, ctx.config.model_path, "model output path", "paths.model");
    const auto log_path = opt.log.empty() ? fs::path(model_path.string() + ".log.tsv") : opt.log;

    const KeywordList keywords = load_keyword_list(keyword_path);
    warn_on_fingerprint(ctx, keywords);
    if (keywords.empty()) {
        throw Error(ErrorKind::CorruptKeywordFile, "keyword file " + keyword_path.string() + " lists no keywords");
    }
    const LabeledCorpus corpus = load_corpus(train_path);
    const auto prepared = prepare_corpus(corpus, ctx.config.preprocess, ctx.threads);
    const auto vectors = vectorize_streams(prepared.streams, keywords, ctx.config.features, ctx.threads);
    ctx.err << "training " << ctx.config.architecture.to_string() << " on " << vectors.size() << " documents x "
            << keywords.size() << " features\n";

    const auto start = std::chrono::steady_clock::now();
    const auto result = train_classifier(vectors, prepared.labels, ctx.config);

    auto log = open_output(log_path);
    log << "epoch\ttrain_loss\tval_loss\tbest_val_loss\tlearning_rate\n";
    double best = std::numeric_limits<double>::infinity();
    for (const auto& e : result.history) {
        best = std::min(best, e.val_loss);
        log << e.epoch << '\t' << format_significant(e.train_loss, 9) << '\t' << format_significant(e.val_loss, 9)
            << '\t' << format_significant(best, 9) << '\t' << format_significant(e.learning_rate, 9) << '\n';
    }
    finish_output(log, log_path);

    auto file = open_output(model_path);
    write_model(file, result.model);
    finish_output(file, model_path);

    ctx.out << "model written to " << model_path.string() << " after " << result.model.training_meta().epochs_run
            << " epochs (best validation loss " << format_significant(result.model.training_meta().final_val_loss, 6)
            << ")\n";
    ctx.err << "training log: " << log_path.string() << "; took " << format_significant(seconds_since(start), 3)
            << " s\n";
    return kExitOk;
}

int cmd_evaluate(Context& ctx, const Options& opt)
{
    const auto test_path = pick(opt.test, ctx.config.test_path, "test corpus", "paths.test");
    const auto keyword_path = pick(opt.keywords, ctx.config.keywords_path, "keyword file", "paths.keywords");
    const auto model_path = pick(opt.model, ctx.config.model_path, "model file", "paths.model");

    const KeywordList keywords = load_keyword_list(keyword_path);
    warn_on_fingerprint(ctx, keywords);
    const MlpModel model = load_model(model_path);
    check_model_dims(model, keywords);
    const LabeledCorpus test = load_corpus(test_path);

    std::optional<LabeledCorpus> train;
    std::vector<std::string> manual;
    if (opt.with_baselines) {
        train.emplace(load_corpus(pick(opt.train, ctx.config.train_path, "training corpus (for the majority baseline)",
                                       "paths.train")));
        manual = load_manual_keywords(pick(opt.manual_keywords, ctx.config.manual_keywords_path,
                                           "manual keyword file", "paths.manual_keywords"));
    }

    const auto start = std::chrono::steady_clock::now();
    const auto prepared = prepare_corpus(test, ctx.config.preprocess, ctx.threads);
    const auto vectors = vectorize_streams(prepared.streams, keywords, ctx.config.features, ctx.threads);
    const auto predictions = predict_all(model, vectors, ctx.threads);
    std::vector<ResultRow> rows;
    rows.push_back({"relevant", compute_metrics(labels_of(predictions), prepared.labels), keywords.size(),
                    seconds_since(start)});
    if (train) {
        auto timed = [&](const std::string& name, std::size_t n_keywords, auto&& metrics) {
            const auto t0 = std::chrono::steady_clock::now();
            const Metrics m = metrics();
            rows.push_back({name, m, n_keywords, seconds_since(t0)});
        };
        const auto train_labels = train->labels();
        timed("majority", 0, [&] { return baseline_majority(train_labels, prepared.labels); });
        timed("always_positive", 0, [&] { return baseline_always_positive(prepared.labels); });
        timed("manual_keywords", manual.size(), [&] {
            return compute_metrics(manual_keyword_predictions(manual, prepared.streams, ctx.config.preprocess),
                                   prepared.labels);
        });
    }

    if (opt.output.empty()) {
        write_results_tsv(ctx.out, rows);
    } else {
        auto file = open_output(opt.output);
        write_results_tsv(file, rows);
        finish_output(file, opt.output);
    }
    write_summary(ctx.err, rows);
    return kExitOk;
}

std::vector<Document> read_classify_input(const fs::path& input)
{
    if (!fs::exists(input)) {
        throw Error(ErrorKind::MissingFile, "input " + input.string() + " does not exist");
    }
    if (!fs::is_directory(input)) {
        return load_documents(input, LabelPolicy::Optional);
    }
    std::vector<fs::path> files;
    for (const auto& entry : fs::recursive_directory_iterator(input)) {
        if (entry.is_regular_file() && entry.path().extension() == ".txt") {
            files.push_back(entry.path());
        }
    }
    std::sort(files.begin(), files.end());
    std::vector<Document> docs;
    docs.reserve(files.size());
    for (const auto& file : files) {
        std::ifstream in(file, std::ios::binary);
        if (!in) {
            throw Error(ErrorKind::MissingFile, "cannot open " + file.string());
        }
        std::ostringstream text;
        text << in.rdbuf();
        docs.push_back({file.string(), text.str(), std::nullopt, {}});
    }
    return docs;
}

int cmd_classify(Context& ctx, const Options& opt)
{
    const auto keyword_path = pick(opt.keywords, ctx.config.keywords_path, "keyword file", "paths.keywords");
    const auto model_path = pick(opt.model, ctx.config.model_path, "model file", "paths.model");
    if (opt.input.empty()) {
        throw Error(ErrorKind::InvalidConfig, "no input given: pass --input FILE.jsonl or --input DIR");
    }
    const KeywordList keywords = load_keyword_list(keyword_path);
    warn_on_fingerprint(ctx, keywords);
    const MlpModel model = load_model(model_path);
    check_model_dims(model, keywords);
    const auto docs = read_classify_input(opt.input);

    const auto start = std::chrono::steady_clock::now();
    const auto streams = preprocess_all(docs, ctx.config.preprocess, ctx.threads);
    const auto vectors = vectorize_streams(streams, keywords, ctx.config.features, ctx.threads);
    const auto predictions = predict_all(model, vectors, ctx.threads);
    const double elapsed = seconds_since(start);

    std::ofstream file;
    if (!opt.output.empty()) {
        file = open_output(opt.output);
    }
    std::ostream& sink = opt.output.empty() ? ctx.out : file;
    for (std::size_t i = 0; i < docs.size(); ++i) {
        nlohmann::ordered_json record;
        record["id"] = docs[i].id;
        record["label"] = predictions[i].label == Label::Relevant ? 1 : 0;
        record["probability"] = predictions[i].probability;
        sink << record.dump() << '\n';
    }
    if (!opt.output.empty()) {
        finish_output(file, opt.output);
    }
    const auto relevant = std::count_if(predictions.begin(), predictions.end(),
                                        [](const Prediction& p) { return p.label == Label::Relevant; });
    ctx.err << "classified " << docs.size() << " documents (" << relevant << " relevant) in "
            << format_significant(elapsed, 3) << " s";
    if (elapsed > 0.0) {
        ctx.err << ", " << format_significant(static_cast<double>(docs.size()) / elapsed, 4) << " docs/s";
    }
    ctx.err << '\n';
    return kExitOk;
}

int cmd_sweep(Context& ctx, const Options& opt)
{
    if (opt.grid.empty()) {
        throw Error(ErrorKind::InvalidConfig, "no grid file given: pass --grid");
    }
    const auto grid = load_grid(opt.grid);
    const auto train_path = pick(opt.train, ctx.config.train_path, "training corpus", "paths.train");
    const auto test_path = pick(opt.test, ctx.config.test_path, "test corpus", "paths.test");
    const LabeledCorpus train = load_corpus(train_path);
    const LabeledCorpus test = load_corpus(test_path);
    const auto rows = run_sweep(train, test, ctx.config, grid, ctx.threads, &ctx.err);

    const auto out_path = opt.output.empty() ? ctx.config.output_path : opt.output;
    if (out_path.empty()) {
        write_results_tsv(ctx.out, rows);
    } else {
        auto file = open_output(out_path);
        write_results_tsv(file, rows);
        finish_output(file, out_path);
    }
    write_summary(ctx.err, rows);
    return kExitOk;
}

}  // namespace

int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err)
{
    CLI::App app{"Keyword-based binary relevance classification of legal documents", "relevant"};
    app.require_subcommand(1);
    Options opt;
    app.add_option("--config", opt.config, "Config file of dotted key = value lines");
    app.add_option("--seed", opt.seed, "Seed for training (overrides train.seed)");
    app.add_option("--threads", opt.threads, "Worker threads for per-document work (0 = all cores)");

    auto* extract = app.add_subcommand("extract-keywords", "Score n-grams on a labeled corpus and write keywords");
    extract->add_option("--train", opt.train, "Labeled JSONL training corpus");
    extract->add_option("--out", opt.output, "Keyword file to write");
    extract->add_option("--stats", opt.stats, "Also dump per-term counts as TSV");

    auto* train = app.add_subcommand("train", "Train the classifier on keyword features");
    train->add_option("--train", opt.train, "Labeled JSONL training corpus");
    train->add_option("--keywords", opt.keywords, "Keyword file from extract-keywords");
    train->add_option("--model", opt.model, "Model file to write");
    train->add_option("--log", opt.log, "Per-epoch training log (default: MODEL.log.tsv)");

    auto* evaluate = app.add_subcommand("evaluate", "Score a model on a labeled test corpus");
    evaluate->add_option("--test", opt.test, "Labeled JSONL test corpus");
    evaluate->add_option("--keywords", opt.keywords, "Keyword file");
    evaluate->add_option("--model", opt.model, "Model file");
    evaluate->add_option("--out", opt.output, "Write the results TSV here instead of stdout");
    evaluate->add_flag("--with-baselines", opt.with_baselines,
                       "Add majority, always-positive and manual-keyword rows");
    evaluate->add_option("--train", opt.train, "Training corpus (majority baseline)");
    evaluate->add_option("--manual-keywords", opt.manual_keywords, "One keyword per line (manual baseline)");

    auto* classify = app.add_subcommand("classify", "Label unlabeled documents");
    classify->add_option("--input", opt.input, "JSONL corpus or a directory of .txt files");
    classify->add_option("--keywords", opt.keywords, "Keyword file");
    classify->add_option("--model", opt.model, "Model file");
    classify->add_option("--out", opt.output, "Write JSONL here instead of stdout");

    auto* sweep = app.add_subcommand("sweep", "Run every combination of a parameter grid");
    sweep->add_option("--grid", opt.grid, "Grid file of key = v1, v2, ... lines");
    sweep->add_option("--train", opt.train, "Labeled JSONL training corpus");
    sweep->add_option("--test", opt.test, "Labeled JSONL test corpus");
    sweep->add_option("--out", opt.output, "Write the results TSV here instead of stdout");

    try {
        std::vector<std::string> reversed(args.rbegin(), args.rend());
        app.parse(reversed);
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e, out, err);
        return code == 0 ? kExitOk : kExitUsage;
    }

    try {
        Context ctx{opt.config.empty() ? PipelineConfig{} : PipelineConfig::load(opt.config), opt.threads, out, err};
        if (opt.seed) {
            ctx.config.train.seed = *opt.seed;
        }
        ctx.config.validate();
        if (ctx.threads == 0) {
            ctx.threads = std::max(1U, std::thread::hardware_concurrency());
        }
        if (*extract) {
            return cmd_extract_keywords(ctx, opt);
        }
        if (*train) {
            return cmd_train(ctx, opt);
        }
        if (*evaluate) {
            return cmd_evaluate(ctx, opt);
        }
        if (*classify) {
            return cmd_classify(ctx, opt);
        }
        return cmd_sweep(ctx, opt);
    } catch (const Error& e) {
        err << "error: " << e.what() << '\n';
        return exit_code_for(e.kind());
    } catch (const std::exception& e) {
        err << "error: " << e.what() << '\n';
        return kExitFailure;
    }
}

}  // namespace relevant::cli
