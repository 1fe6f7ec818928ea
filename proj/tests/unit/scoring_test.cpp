#include <gtest/gtest.h>

#include <cmath>
#include <limits>
#include <sstream>

#include "expect_error.hpp"
#include "oracles.hpp"
#include "relevant/scoring.hpp"
#include "relevant/util.hpp"

using namespace relevant;

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

TermStats counts(std::uint64_t fp, std::uint64_t fn, std::uint64_t dp = 0, std::uint64_t dn = 0)
{
    return {fp, fn, dp, dn};
}

ScoringConfig defaults()
{
    return {};
}

}  // namespace

TEST(Csm, ZeroNegativeFrequencyApproachesOne)
{
    EXPECT_NEAR(csm(counts(100, 0), 0.01, PenaltyExponent(10)), 100.0 / 100.01, 1e-15);
}

TEST(Csm, ZeroNumeratorIsZero)
{
    for (const std::uint64_t fn : {0, 1, 5, 1000}) {
        EXPECT_EQ(csm(counts(0, fn), 0.01, PenaltyExponent(10)), 0.0);
        EXPECT_EQ(csm(counts(0, fn), 0.01, PenaltyExponent::infinite()), 0.0);
    }
}

TEST(Csm, HandEvaluatedPenalty)
{
    EXPECT_NEAR(csm(counts(5, 2), 0.01, PenaltyExponent(10)), 5.0 / 1029.01, 1e-15);
    EXPECT_NEAR(csm(counts(5, 2), 0.01, PenaltyExponent(10)), 0.0048590, 5e-7);
}

TEST(Csm, InfiniteExponentLimit)
{
    EXPECT_EQ(csm(counts(7, 0), 0.01, PenaltyExponent::infinite()), 7.0 / 7.01);
    EXPECT_EQ(csm(counts(7, 1), 0.01, PenaltyExponent::infinite()), 0.0);
    EXPECT_EQ(csm(counts(7, 9), 0.01, PenaltyExponent::infinite()), 0.0);
}

TEST(Csm, OverflowSaturatesToZero)
{
    EXPECT_EQ(negative_penalty(1000, PenaltyExponent(200)), kInf);
    EXPECT_EQ(csm(counts(5, 1000), 0.01, PenaltyExponent(200)), 0.0);
}

TEST(Csm, NonIntegerExponent)
{
    EXPECT_NEAR(negative_penalty(3, PenaltyExponent(2.5)), std::pow(3.0, 2.5), 1e-12);
}

TEST(Csm, IntegerExponentIsExact)
{
    EXPECT_EQ(negative_penalty(2, PenaltyExponent(10)), 1024.0);
    EXPECT_EQ(negative_penalty(3, PenaltyExponent(5)), 243.0);
    EXPECT_EQ(negative_penalty(0, PenaltyExponent(1)), 0.0);
    EXPECT_EQ(negative_penalty(1, PenaltyExponent(50)), 1.0);
}

TEST(Csm, MonotoneInCounts)
{
    for (const double p : {1.0, 2.0, 10.0}) {
        for (std::uint64_t fn = 0; fn < 6; ++fn) {
            double prev = -1.0;
            for (std::uint64_t fp = 0; fp < 50; ++fp) {
                const double v = csm(counts(fp, fn), 0.01, PenaltyExponent(p));
                EXPECT_GT(v, prev);
                prev = v;
            }
        }
        for (std::uint64_t fp = 1; fp < 20; ++fp) {
            double prev = 2.0;
            for (std::uint64_t fn = 0; fn < 30; ++fn) {
                const double v = csm(counts(fp, fn), 0.01, PenaltyExponent(p));
                EXPECT_LE(v, prev);
                prev = v;
            }
        }
    }
}

TEST(Csm, LargerExponentNeverHelps)
{
    const double exponents[] = {1.0, 1.5, 2.0, 3.0, 10.0, 50.0, kInf};
    for (std::uint64_t fp = 1; fp < 40; fp += 3) {
        for (std::uint64_t fn = 0; fn < 12; ++fn) {
            double prev = 2.0;
            for (const double p : exponents) {
                const auto e = std::isinf(p) ? PenaltyExponent::infinite() : PenaltyExponent(p);
                const double v = csm(counts(fp, fn), 0.01, e);
                if (fn >= 2) {
                    EXPECT_LE(v, prev);
                } else if (!std::isinf(p)) {
                    EXPECT_EQ(v, csm(counts(fp, fn), 0.01, PenaltyExponent(1)));
                }
                prev = v;
            }
        }
    }
}

TEST(Df, HandEvaluated)
{
    EXPECT_NEAR(df(counts(0, 0, 30, 0), 100, 200, 0.01), 0.3 / 0.31, 1e-15);
    EXPECT_NEAR(df(counts(0, 0, 30, 0), 100, 200, 0.01), 0.9677, 5e-5);
    EXPECT_EQ(df(counts(0, 0, 0, 40), 100, 200, 0.01), 0.0);
    EXPECT_NEAR(df(counts(0, 0, 50, 100), 100, 200, 0.01), 0.5 / 1.01, 1e-15);
    EXPECT_NEAR(df(counts(0, 0, 50, 100), 100, 200, 0.01), 0.4950, 5e-5);
}

TEST(Df, NeedsBothClasses)
{
    EXPECT_ERROR_KIND(df(counts(1, 0, 1, 0), 0, 5, 0.01), ErrorKind::BothClassesRequired);
}

TEST(CombinedScore, HandEvaluated)
{
    EXPECT_NEAR(combined_score(0.8, 0.4, 0.75), 0.5, 1e-15);
    EXPECT_EQ(combined_score(0.37, 0.91, 0.0), 0.37);
    EXPECT_EQ(combined_score(0.37, 0.91, 1.0), 0.91);
}

TEST(Scores, MatchDirectEvaluationAndStayInRange)
{
    Rng rng(31);
    for (int i = 0; i < 2000; ++i) {
        const std::uint64_t n_pos = 1 + rng.below(500);
        const std::uint64_t n_neg = 1 + rng.below(500);
        const TermStats s{rng.below(200), rng.below(4), rng.below(n_pos + 1), rng.below(n_neg + 1)};
        const double eps = rng.uniform(1e-4, 1.0);
        const double p = rng.uniform(1.0, 12.0);
        const double w = rng.uniform01();
        const double c = csm(s, eps, PenaltyExponent(p));
        const double d = df(s, n_pos, n_neg, eps);
        const double expected_c = oracle::csm(static_cast<double>(s.pos_freq), static_cast<double>(s.neg_freq), eps, p);
        EXPECT_NEAR(c, expected_c, 1e-12);
        EXPECT_NEAR(d, oracle::df(static_cast<double>(s.pos_docs), static_cast<double>(n_pos),
                                  static_cast<double>(s.neg_docs), static_cast<double>(n_neg), eps),
                    1e-12);
        const double score = combined_score(c, d, w);
        EXPECT_NEAR(score, oracle::combined(c, d, w), 1e-12);
        for (const double v : {c, d, score}) {
            EXPECT_GE(v, 0.0);
            EXPECT_LT(v, 1.0);
        }
        EXPECT_EQ(c == 0.0, s.pos_freq == 0);
        EXPECT_EQ(d == 0.0, s.pos_docs == 0);
    }
}

TEST(PenaltyExponentType, ParseAndValidate)
{
    EXPECT_TRUE(PenaltyExponent::parse("inf").is_infinite());
    EXPECT_TRUE(PenaltyExponent::parse("Infinite").is_infinite());
    EXPECT_EQ(PenaltyExponent::parse("10").value(), 10.0);
    EXPECT_EQ(PenaltyExponent::parse("2.5").value(), 2.5);
    EXPECT_ERROR_KIND(PenaltyExponent::parse("0.5"), ErrorKind::InvalidConfig);
    EXPECT_ERROR_KIND(PenaltyExponent::parse("ten"), ErrorKind::InvalidConfig);
    EXPECT_ERROR_KIND(PenaltyExponent::parse("nan"), ErrorKind::InvalidConfig);
    EXPECT_EQ(PenaltyExponent::parse("inf").to_string(), "inf");
    EXPECT_EQ(PenaltyExponent(10).to_string(), "10");
}

TEST(ScoringConfigType, Validate)
{
    auto c = defaults();
    EXPECT_NO_THROW(c.validate());
    c.epsilon = 0.0;
    EXPECT_ERROR_KIND(c.validate(), ErrorKind::InvalidConfig);
    c = defaults();
    c.df_weight = 1.5;
    EXPECT_ERROR_KIND(c.validate(), ErrorKind::InvalidConfig);
    c = defaults();
    c.score_min = -0.1;
    EXPECT_ERROR_KIND(c.validate(), ErrorKind::InvalidConfig);
}

TEST(SelectKeywords, HardFilterExcludesNegativeDocs)
{
    TermStatsMap stats = {{"strong", counts(1000, 1, 90, 1)}, {"clean", counts(1000, 0, 90, 0)}};
    auto c = defaults();
    c.hard_filter = true;
    const auto kw = select_keywords(stats, 100, 100, c);
    ASSERT_EQ(kw.size(), 1U);
    EXPECT_EQ(kw[0].term, "clean");
    c.hard_filter = false;
    EXPECT_EQ(select_keywords(stats, 100, 100, c).size(), 2U);
}

TEST(SelectKeywords, StrongTermScoresAbove095)
{
    TermStatsMap stats = {{"remanded", counts(1000, 0, 90, 0)}};
    const auto kw = select_keywords(stats, 100, 100, defaults());
    ASSERT_EQ(kw.size(), 1U);
    const double expected = oracle::combined(oracle::csm(1000, 0, 0.01, 10), oracle::df(90, 100, 0, 100, 0.01), 0.75);
    EXPECT_NEAR(kw[0].score, expected, 1e-12);
    EXPECT_GT(kw[0].score, 0.95);
}

TEST(SelectKeywords, ScoreInvariantAndCutoff)
{
    Rng rng(37);
    TermStatsMap stats;
    for (int i = 0; i < 300; ++i) {
        stats["t" + std::to_string(i)] = {1 + rng.below(100), rng.below(3), 1 + rng.below(50), rng.below(20)};
    }
    const auto c = defaults();
    const auto kw = select_keywords(stats, 50, 50, c);
    std::size_t expected_count = 0;
    for (const auto& [term, s] : stats) {
        const double score = oracle::combined(oracle::csm(static_cast<double>(s.pos_freq), static_cast<double>(s.neg_freq), 0.01, 10),
                                              oracle::df(static_cast<double>(s.pos_docs), 50, static_cast<double>(s.neg_docs), 50, 0.01), 0.75);
        expected_count += score >= c.score_min ? 1 : 0;
    }
    EXPECT_EQ(kw.size(), expected_count);
    for (std::size_t i = 0; i < kw.size(); ++i) {
        EXPECT_NEAR(kw[i].score, (1.0 - c.df_weight) * kw[i].csm + c.df_weight * kw[i].df, 1e-12);
        EXPECT_GE(kw[i].score, c.score_min);
        EXPECT_EQ(kw.index_of(kw[i].term), static_cast<long>(i));
        if (i > 0) {
            EXPECT_TRUE(kw[i - 1].score > kw[i].score ||
                        (kw[i - 1].score == kw[i].score && kw[i - 1].term < kw[i].term));
        }
    }
}

TEST(SelectKeywords, TiesBrokenByTerm)
{
    TermStatsMap stats = {{"b", counts(10, 0, 5, 0)}, {"a", counts(10, 0, 5, 0)}, {"c", counts(10, 0, 5, 0)}};
    const auto kw = select_keywords(stats, 10, 10, defaults());
    ASSERT_EQ(kw.size(), 3U);
    EXPECT_EQ(kw[0].term, "a");
    EXPECT_EQ(kw[1].term, "b");
    EXPECT_EQ(kw[2].term, "c");
}

TEST(SelectKeywords, NothingSelected)
{
    TermStatsMap stats = {{"shared", counts(10, 10, 5, 5)}};
    EXPECT_ERROR_KIND(select_keywords(stats, 10, 10, defaults()), ErrorKind::NoKeywordsSelected);
}

TEST(SelectKeywords, HardFilterEqualsInfiniteExponentOnCleanTerms)
{
    Rng rng(41);
    TermStatsMap stats;
    for (int i = 0; i < 200; ++i) {
        const bool clean = rng.below(2) == 0;
        const std::uint64_t fn = clean ? 0 : 1 + rng.below(5);
        stats["t" + std::to_string(i)] = {1 + rng.below(60), fn, 1 + rng.below(30), clean ? 0 : 1 + rng.below(fn)};
    }
    auto hard = defaults();
    hard.hard_filter = true;
    hard.score_min = 0.0;
    auto infinite = defaults();
    infinite.penalty_exponent = PenaltyExponent::infinite();
    infinite.score_min = 0.0;
    const auto a = select_keywords(stats, 40, 40, hard);
    const auto b = select_keywords(stats, 40, 40, infinite);
    std::vector<ScoredKeyword> clean_b;
    for (const auto& k : b.keywords()) {
        if (k.stats.neg_docs == 0) {
            clean_b.push_back(k);
        }
    }
    ASSERT_EQ(a.size(), clean_b.size());
    for (std::size_t i = 0; i < a.size(); ++i) {
        EXPECT_EQ(a[i].term, clean_b[i].term);
        EXPECT_EQ(a[i].score, clean_b[i].score);
        EXPECT_EQ(a[i].csm, clean_b[i].csm);
    }
}

TEST(SelectKeywords, DeterministicSerialization)
{
    TermStatsMap stats;
    for (int i = 0; i < 100; ++i) {
        stats["w" + std::to_string(i)] = {static_cast<std::uint64_t>(50 + i % 7), 0, static_cast<std::uint64_t>(5 + i % 4), 0};
    }
    TermStatsMap reversed;
    for (int i = 99; i >= 0; --i) {
        reversed["w" + std::to_string(i)] = stats["w" + std::to_string(i)];
    }
    std::ostringstream a;
    std::ostringstream b;
    write_keyword_list(a, select_keywords(stats, 10, 10, defaults(), "ff"));
    write_keyword_list(b, select_keywords(reversed, 10, 10, defaults(), "ff"));
    EXPECT_EQ(a.str(), b.str());
}

TEST(KeywordFile, RoundTripIsStable)
{
    TermStatsMap stats = {{"motion to dismiss", counts(120, 0, 40, 0)}, {"remanded", counts(77, 1, 30, 1)}};
    const auto kw = select_keywords(stats, 50, 60, defaults(), "0123456789abcdef");
    std::ostringstream first;
    write_keyword_list(first, kw);
    std::istringstream in(first.str());
    const auto back = read_keyword_list(in);
    EXPECT_EQ(back.config_fingerprint(), "0123456789abcdef");
    ASSERT_EQ(back.size(), kw.size());
    for (std::size_t i = 0; i < kw.size(); ++i) {
        EXPECT_EQ(back[i].term, kw[i].term);
        EXPECT_EQ(back[i].stats, kw[i].stats);
        EXPECT_NEAR(back[i].score, kw[i].score, 1e-11);
    }
    std::ostringstream second;
    write_keyword_list(second, back);
    EXPECT_EQ(first.str(), second.str());
    EXPECT_EQ(back.max_order(), 3);
}

TEST(KeywordFile, CorruptInput)
{
    std::istringstream truncated("{\"config_fingerprint\": \"x\", \"keywords\": [{\"term\": \"a\"");
    EXPECT_ERROR_KIND(read_keyword_list(truncated), ErrorKind::CorruptKeywordFile);
    std::istringstream duplicate(
        "{\"config_fingerprint\":\"x\",\"keywords\":["
        "{\"term\":\"a\",\"csm\":1,\"df\":1,\"score\":1,\"pos_freq\":1,\"neg_freq\":0,\"pos_docs\":1,\"neg_docs\":0},"
        "{\"term\":\"a\",\"csm\":1,\"df\":1,\"score\":1,\"pos_freq\":1,\"neg_freq\":0,\"pos_docs\":1,\"neg_docs\":0}]}");
    EXPECT_ERROR_KIND(read_keyword_list(duplicate), ErrorKind::CorruptKeywordFile);
    EXPECT_ERROR_KIND(load_keyword_list("/nonexistent/keywords.json"), ErrorKind::MissingFile);
}

TEST(KeywordListType, SubsetReindexes)
{
    TermStatsMap stats = {{"a", counts(10, 0, 9, 0)}, {"b", counts(10, 0, 8, 0)}, {"c d", counts(10, 0, 7, 0)}};
    const auto kw = select_keywords(stats, 10, 10, defaults());
    const auto sub = kw.subset({2, 0});
    ASSERT_EQ(sub.size(), 2U);
    EXPECT_EQ(sub[0].term, "c d");
    EXPECT_EQ(sub.index_of("a"), 1);
    EXPECT_EQ(sub.index_of("b"), -1);
    EXPECT_EQ(sub.max_order(), 2);
}

TEST(Fingerprint, ChangesWithAnyKeStageKnob)
{
    const PreprocessConfig pre;
    const ExtractionConfig ext;
    const ScoringConfig sc;
    const auto base = ke_fingerprint(pre, ext, sc);
    EXPECT_EQ(base.size(), 16U);
    auto ext2 = ext;
    ext2.max_n = 3;
    EXPECT_NE(ke_fingerprint(pre, ext2, sc), base);
    auto sc2 = sc;
    sc2.penalty_exponent = PenaltyExponent::infinite();
    EXPECT_NE(ke_fingerprint(pre, ext, sc2), base);
    EXPECT_EQ(ke_fingerprint(pre, ext, sc), base);
}
