#include <gtest/gtest.h>

#include <cmath>
#include <sstream>

#include "expect_error.hpp"
#include "oracles.hpp"
#include "relevant/features.hpp"
#include "relevant/util.hpp"

using namespace relevant;

namespace {

ScoredKeyword keyword(const std::string& term, double score)
{
    ScoredKeyword k;
    k.term = term;
    k.score = score;
    k.csm = score;
    k.df = score;
    return k;
}

KeywordList keywords(std::vector<std::pair<std::string, double>> items)
{
    std::vector<ScoredKeyword> list;
    for (auto& [term, score] : items) {
        list.push_back(keyword(term, score));
    }
    return KeywordList(std::move(list), "fp");
}

FeatureMode mode(FeatureWeighting weighting, bool l2 = false)
{
    return {weighting, l2};
}

TokenStream random_stream(Rng& rng)
{
    TokenStream s;
    const auto n_segments = 1 + rng.below(3);
    for (std::uint64_t k = 0; k < n_segments; ++k) {
        std::vector<std::string> seg;
        const auto len = 1 + rng.below(30);
        for (std::uint64_t i = 0; i < len; ++i) {
            seg.push_back(std::string(1, static_cast<char>('a' + rng.below(3))));
        }
        s.segments.push_back(std::move(seg));
    }
    return s;
}

std::vector<std::string> all_terms(int max_n)
{
    std::vector<std::string> out;
    std::vector<std::string> frontier = {""};
    for (int n = 1; n <= max_n; ++n) {
        std::vector<std::string> next;
        for (const auto& prefix : frontier) {
            for (const char c : std::string("abc")) {
                next.push_back(prefix.empty() ? std::string(1, c) : prefix + " " + c);
            }
        }
        out.insert(out.end(), next.begin(), next.end());
        frontier = next;
    }
    return out;
}

}  // namespace

TEST(CountTerm, Examples)
{
    const TokenStream s{{{"motion", "to", "dismiss", "and", "to", "dismiss"}}};
    EXPECT_EQ(count_term("to dismiss", s), 2U);
    EXPECT_EQ(count_term("a a", TokenStream{{{"a", "a", "a"}}}), 2U);
    EXPECT_EQ(count_term("remanded", s), 0U);
}

TEST(CountTerm, DoesNotCrossSegments)
{
    EXPECT_EQ(count_term("a b", TokenStream{{{"a"}, {"b"}}}), 0U);
}

TEST(CountTerm, MatchesScanOracle)
{
    Rng rng(43);
    const auto terms = all_terms(3);
    for (int trial = 0; trial < 60; ++trial) {
        const auto s = random_stream(rng);
        for (const auto& t : terms) {
            ASSERT_EQ(count_term(t, s), oracle::count_term(t, s)) << t;
        }
    }
}

TEST(Vectorize, ScoreWeightedAndRawCount)
{
    const auto kw = keywords({{"remanded", 0.9}});
    const TokenStream s{{{"remanded", "x", "remanded"}, {"remanded"}}};
    const auto weighted = vectorize_stream(s, kw, mode(FeatureWeighting::ScoreWeighted));
    ASSERT_EQ(weighted.entries.size(), 1U);
    EXPECT_NEAR(weighted.entries[0].value, 2.7, 1e-15);
    const auto raw = vectorize_stream(s, kw, mode(FeatureWeighting::RawCount));
    EXPECT_EQ(raw.entries[0].value, 3.0);
}

TEST(Vectorize, NoSharedKeywordsGivesEmptyVector)
{
    const auto kw = keywords({{"remanded", 0.9}, {"testimony", 0.8}});
    const auto v = vectorize_stream(TokenStream{{{"nothing", "here"}}}, kw, mode(FeatureWeighting::ScoreWeighted, true));
    EXPECT_TRUE(v.entries.empty());
    EXPECT_EQ(v.dim, 2U);
    EXPECT_EQ(vectorize_stream(TokenStream{}, kw, mode(FeatureWeighting::RawCount)).dim, 2U);
}

TEST(Vectorize, EmptyKeywordListRejected)
{
    EXPECT_ERROR_KIND(vectorize_stream(TokenStream{{{"a"}}}, KeywordList{}, mode(FeatureWeighting::RawCount)),
                      ErrorKind::InvalidArgument);
}

TEST(Vectorize, SinglePassMatchesPerKeywordScan)
{
    Rng rng(47);
    const auto terms = all_terms(3);
    std::vector<std::pair<std::string, double>> items;
    for (std::size_t i = 0; i < terms.size(); i += 2) {
        items.emplace_back(terms[i], rng.uniform(0.5, 1.0));
    }
    const auto kw = keywords(items);
    for (int trial = 0; trial < 50; ++trial) {
        const auto s = random_stream(rng);
        const auto raw = vectorize_stream(s, kw, mode(FeatureWeighting::RawCount));
        const auto weighted = vectorize_stream(s, kw, mode(FeatureWeighting::ScoreWeighted));
        std::vector<double> expected(kw.size(), 0.0);
        for (std::size_t j = 0; j < kw.size(); ++j) {
            expected[j] = static_cast<double>(oracle::count_term(kw[j].term, s));
        }
        EXPECT_EQ(raw.to_dense(), expected);
        ASSERT_EQ(raw.entries.size(), weighted.entries.size());
        for (std::size_t e = 0; e < raw.entries.size(); ++e) {
            EXPECT_EQ(raw.entries[e].index, weighted.entries[e].index);
            EXPECT_EQ(weighted.entries[e].value, raw.entries[e].value * kw[raw.entries[e].index].score);
            EXPECT_NE(raw.entries[e].value, 0.0);
            if (e > 0) {
                EXPECT_LT(raw.entries[e - 1].index, raw.entries[e].index);
            }
        }
    }
}

TEST(Vectorize, L2NormalizedVectorsHaveUnitNorm)
{
    Rng rng(53);
    const auto kw = keywords({{"a", 0.7}, {"b", 0.9}, {"a b", 0.6}, {"c c", 0.55}});
    for (int trial = 0; trial < 100; ++trial) {
        const auto s = random_stream(rng);
        for (const auto w : {FeatureWeighting::ScoreWeighted, FeatureWeighting::RawCount}) {
            const auto v = vectorize_stream(s, kw, mode(w, true));
            if (!v.entries.empty()) {
                EXPECT_NEAR(v.norm(), 1.0, 1e-9);
            }
        }
    }
}

TEST(Vectorize, DocumentPathAppliesPreprocessing)
{
    const auto kw = keywords({{"motion to dismiss", 0.8}, {"smith", 0.9}});
    const Document doc{"d", "Plaintiff John Smith filed a Motion to Dismiss; see 410 U.S. 113. Motion to dismiss!",
                       Label::Relevant, {}};
    const auto v = vectorize(doc, kw, PreprocessConfig{}, mode(FeatureWeighting::RawCount));
    EXPECT_EQ(v.to_dense(), (std::vector<double>{2.0, 0.0}));
}

TEST(Vectorize, PureFunction)
{
    const auto kw = keywords({{"a", 0.7}, {"b a", 0.9}});
    std::vector<Document> docs;
    for (int i = 0; i < 40; ++i) {
        docs.push_back({"d" + std::to_string(i), std::string(static_cast<std::size_t>(i % 7), 'a') + " b a b a", std::nullopt, {}});
    }
    const auto a = vectorize_all(docs, kw, PreprocessConfig{}, mode(FeatureWeighting::ScoreWeighted), 1);
    const auto b = vectorize_all(docs, kw, PreprocessConfig{}, mode(FeatureWeighting::ScoreWeighted), 4);
    EXPECT_EQ(a, b);
}

TEST(VectorCache, RoundTripAndDimCheck)
{
    const std::vector<std::string> ids = {"x", "y"};
    const std::vector<FeatureVector> vectors = {{3, {{0, 1.5}, {2, 0.25}}}, {3, {}}};
    std::ostringstream out;
    write_vector_cache(out, ids, vectors);
    std::istringstream in(out.str());
    const auto back = read_vector_cache(in, 3);
    EXPECT_EQ(back.ids, ids);
    EXPECT_EQ(back.vectors, vectors);
    std::istringstream again(out.str());
    EXPECT_ERROR_KIND(read_vector_cache(again, 4), ErrorKind::DimensionMismatch);
}

TEST(FeatureVectorType, DenseAndNorm)
{
    const FeatureVector v{4, {{1, 3.0}, {3, 4.0}}};
    EXPECT_EQ(v.to_dense(), (std::vector<double>{0.0, 3.0, 0.0, 4.0}));
    EXPECT_DOUBLE_EQ(v.norm(), 5.0);
}
