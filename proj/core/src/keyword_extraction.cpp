#include "relevant/keyword_extraction.hpp"

#include <algorithm>
#include <ostream>

#include "parallel.hpp"
#include "relevant/error.hpp"

namespace relevant {

void ExtractionConfig::validate() const
{
    if (max_n < 1) {
        throw Error(ErrorKind::InvalidConfig, "extraction.max_n must be >= 1");
    }
    if (min_term_freq < 1) {
        throw Error(ErrorKind::InvalidConfig, "extraction.min_term_freq must be >= 1");
    }
}

std::string ExtractionConfig::canonical() const
{
    return "extraction.max_n=" + std::to_string(max_n) + "\nextraction.min_term_freq=" +
           std::to_string(min_term_freq) + "\n";
}

NgramCounts extract_ngrams(const TokenStream& stream, int max_n)
{
    if (max_n < 1) {
        throw Error(ErrorKind::InvalidArgument, "max_n must be >= 1");
    }
    NgramCounts counts;
    for_each_ngram(stream, max_n, [&](const std::string& term) { ++counts[term]; });
    return counts;
}

std::vector<TokenStream> preprocess_all(const std::vector<Document>& documents, const PreprocessConfig& config,
                                        unsigned threads)
{
    std::vector<TokenStream> streams(documents.size());
    detail::parallel_chunks(documents.size(), threads, [&](std::size_t begin, std::size_t end, std::size_t) {
        for (std::size_t i = begin; i < end; ++i) {
            streams[i] = preprocess(documents[i], config);
        }
    });
    return streams;
}

TermStatsMap apply_min_term_freq(const TermStatsMap& stats, std::uint64_t min_term_freq)
{
    TermStatsMap kept;
    for (const auto& [term, s] : stats) {
        if (s.total_freq() >= min_term_freq) {
            kept.emplace(term, s);
        }
    }
    return kept;
}

TermStatsMap accumulate_stats(const std::vector<TokenStream>& streams, const std::vector<Label>& labels,
                              const ExtractionConfig& extraction, unsigned threads)
{
    extraction.validate();
    if (streams.size() != labels.size()) {
        throw Error(ErrorKind::LengthMismatch, "streams and labels differ in length");
    }
    const bool has_pos = std::find(labels.begin(), labels.end(), Label::Relevant) != labels.end();
    const bool has_neg = std::find(labels.begin(), labels.end(), Label::Irrelevant) != labels.end();
    if (!has_pos || !has_neg) {
        throw Error(ErrorKind::BothClassesRequired, "keyword extraction needs relevant and irrelevant documents");
    }

    std::vector<TermStatsMap> partial(detail::chunk_count(streams.size(), threads));
    detail::parallel_chunks(streams.size(), threads, [&](std::size_t begin, std::size_t end, std::size_t chunk) {
        auto& acc = partial[chunk];
        for (std::size_t i = begin; i < end; ++i) {
            const bool relevant = labels[i] == Label::Relevant;
            for (const auto& [term, count] : extract_ngrams(streams[i], extraction.max_n)) {
                auto& s = acc[term];
                if (relevant) {
                    s.pos_freq += count;
                    ++s.pos_docs;
                } else {
                    s.neg_freq += count;
                    ++s.neg_docs;
                }
            }
        }
    });

    // integer sums, so merge order cannot change the result
    TermStatsMap merged = std::move(partial.front());
    for (std::size_t c = 1; c < partial.size(); ++c) {
        for (const auto& [term, s] : partial[c]) {
            auto& m = merged[term];
            m.pos_freq += s.pos_freq;
            m.neg_freq += s.neg_freq;
            m.pos_docs += s.pos_docs;
            m.neg_docs += s.neg_docs;
        }
    }
    std::erase_if(merged, [&](const auto& kv) { return kv.second.total_freq() < extraction.min_term_freq; });
    return merged;
}

TermStatsMap accumulate_stats(const LabeledCorpus& corpus, const PreprocessConfig& preprocess,
                              const ExtractionConfig& extraction, unsigned threads)
{
    corpus.require_both_classes();
    return accumulate_stats(preprocess_all(corpus.documents(), preprocess, threads), corpus.labels(), extraction,
                            threads);
}

void write_stats_tsv(std::ostream& out, const TermStatsMap& stats)
{
    std::vector<const TermStatsMap::value_type*> rows;
    rows.reserve(stats.size());
    for (const auto& kv : stats) {
        rows.push_back(&kv);
    }
    std::sort(rows.begin(), rows.end(), [](const auto* a, const auto* b) { return a->first < b->first; });
    for (const auto* kv : rows) {
        const auto& s = kv->second;
        out << kv->first << '\t' << s.pos_freq << '\t' << s.neg_freq << '\t' << s.pos_docs << '\t' << s.neg_docs
            << '\n';
    }
}

}  // namespace relevant
