#include "relevant/features.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <fstream>
#include <map>
#include <ostream>
#include <sstream>

#include "parallel.hpp"
#include "relevant/error.hpp"
#include "relevant/keyword_extraction.hpp"
#include "relevant/util.hpp"

namespace relevant {

std::vector<double> FeatureVector::to_dense() const
{
    std::vector<double> dense(dim, 0.0);
    for (const auto& e : entries) {
        dense[e.index] = e.value;
    }
    return dense;
}

double FeatureVector::norm() const
{
    double sum = 0.0;
    for (const auto& e : entries) {
        sum += e.value * e.value;
    }
    return std::sqrt(sum);
}

std::uint64_t count_term(std::string_view term, const TokenStream& stream)
{
    std::vector<std::string_view> parts;
    std::size_t start = 0;
    while (start <= term.size()) {
        const std::size_t space = term.find(' ', start);
        const std::size_t end = space == std::string_view::npos ? term.size() : space;
        parts.push_back(term.substr(start, end - start));
        start = end + 1;
    }
    std::uint64_t count = 0;
    for (const auto& segment : stream.segments) {
        if (segment.size() < parts.size()) {
            continue;
        }
        for (std::size_t i = 0; i + parts.size() <= segment.size(); ++i) {
            bool match = true;
            for (std::size_t j = 0; j < parts.size() && match; ++j) {
                match = segment[i + j] == parts[j];
            }
            count += match ? 1 : 0;
        }
    }
    return count;
}

FeatureVector vectorize_stream(const TokenStream& stream, const KeywordList& keywords, const FeatureMode& mode)
{
    if (keywords.empty()) {
        throw Error(ErrorKind::InvalidArgument, "cannot vectorize against an empty keyword list");
    }
    FeatureVector out;
    out.dim = keywords.size();
    std::map<std::uint32_t, std::uint64_t> counts;
    for_each_ngram(stream, keywords.max_order(), [&](const std::string& term) {
        if (const long idx = keywords.index_of(term); idx >= 0) {
            ++counts[static_cast<std::uint32_t>(idx)];
        }
    });
    out.entries.reserve(counts.size());
    for (const auto& [idx, count] : counts) {
        const double raw = static_cast<double>(count);
        const double value = mode.weighting == FeatureWeighting::ScoreWeighted ? keywords[idx].score * raw : raw;
        if (value != 0.0) {
            out.entries.push_back({idx, value});
        }
    }
    if (mode.l2_normalize) {
        const double n = out.norm();
        if (n > 0.0) {
            for (auto& e : out.entries) {
                e.value /= n;
            }
        }
    }
    return out;
}

FeatureVector vectorize(const Document& doc, const KeywordList& keywords, const PreprocessConfig& preprocess,
                        const FeatureMode& mode)
{
    return vectorize_stream(relevant::preprocess(doc, preprocess), keywords, mode);
}

std::vector<FeatureVector> vectorize_all(const std::vector<Document>& documents, const KeywordList& keywords,
                                         const PreprocessConfig& preprocess, const FeatureMode& mode,
                                         unsigned threads)
{
    std::vector<FeatureVector> vectors(documents.size());
    detail::parallel_chunks(documents.size(), threads, [&](std::size_t begin, std::size_t end, std::size_t) {
        for (std::size_t i = begin; i < end; ++i) {
            vectors[i] = vectorize(documents[i], keywords, preprocess, mode);
        }
    });
    return vectors;
}

void write_vector_cache(std::ostream& out, const std::vector<std::string>& ids,
                        const std::vector<FeatureVector>& vectors)
{
    if (ids.size() != vectors.size()) {
        throw Error(ErrorKind::LengthMismatch, "ids and vectors differ in length");
    }
    for (std::size_t i = 0; i < ids.size(); ++i) {
        out << ids[i] << '\t' << vectors[i].dim << '\t';
        for (std::size_t k = 0; k < vectors[i].entries.size(); ++k) {
            const auto& e = vectors[i].entries[k];
            out << (k == 0 ? "" : ",") << e.index << ':' << format_significant(e.value, 9);
        }
        out << '\n';
    }
}

namespace {

[[noreturn]] void corrupt_cache(std::size_t line_no, const std::string& why)
{
    throw Error(ErrorKind::InvalidArgument, "vector cache line " + std::to_string(line_no) + ": " + why);
}

}  // namespace

CachedVectors read_vector_cache(std::istream& in, std::size_t expected_dim)
{
    CachedVectors cache;
    std::string line;
    std::size_t line_no = 0;
    while (std::getline(in, line)) {
        ++line_no;
        if (line.empty()) {
            continue;
        }
        const auto tab1 = line.find('\t');
        const auto tab2 = tab1 == std::string::npos ? std::string::npos : line.find('\t', tab1 + 1);
        if (tab2 == std::string::npos) {
            corrupt_cache(line_no, "expected three tab-separated fields");
        }
        FeatureVector v;
        const std::string_view dim_field(line.data() + tab1 + 1, tab2 - tab1 - 1);
        if (std::from_chars(dim_field.data(), dim_field.data() + dim_field.size(), v.dim).ec != std::errc{}) {
            corrupt_cache(line_no, "bad dimension");
        }
        if (v.dim != expected_dim) {
            throw Error(ErrorKind::DimensionMismatch, "cached vector for '" + line.substr(0, tab1) + "' has dim " +
                                                          std::to_string(v.dim) + ", keywords define " +
                                                          std::to_string(expected_dim));
        }
        std::istringstream entries(line.substr(tab2 + 1));
        std::string item;
        while (std::getline(entries, item, ',')) {
            const auto colon = item.find(':');
            if (colon == std::string::npos) {
                corrupt_cache(line_no, "entry without ':'");
            }
            FeatureEntry e;
            try {
                e.index = static_cast<std::uint32_t>(std::stoul(item.substr(0, colon)));
                e.value = std::stod(item.substr(colon + 1));
            } catch (const std::logic_error&) {
                corrupt_cache(line_no, "unparsable entry '" + item + "'");
            }
            if (e.index >= v.dim || (!v.entries.empty() && e.index <= v.entries.back().index)) {
                corrupt_cache(line_no, "indices must be increasing and below dim");
            }
            v.entries.push_back(e);
        }
        cache.ids.push_back(line.substr(0, tab1));
        cache.vectors.push_back(std::move(v));
    }
    return cache;
}

CachedVectors load_vector_cache(const std::filesystem::path& path, std::size_t expected_dim)
{
    std::ifstream in(path, std::ios::binary);
    if (!in) {
        throw Error(ErrorKind::MissingFile, "cannot open vector cache " + path.string());
    }
    return read_vector_cache(in, expected_dim);
}

void save_vector_cache(const std::filesystem::path& path, const std::vector<std::string>& ids,
                       const std::vector<FeatureVector>& vectors)
{
    std::ofstream out(path, std::ios::binary);
    if (!out) {
        throw Error(ErrorKind::Io, "cannot write vector cache " + path.string());
    }
    write_vector_cache(out, ids, vectors);
}

}  // namespace relevant
