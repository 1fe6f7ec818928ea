#include <gtest/gtest.h>

#include <string>
#include <utility>
#include <vector>

#include "expect_error.hpp"
#include "relevant/preprocess.hpp"
#include "relevant/util.hpp"

using namespace relevant;

namespace {

PreprocessConfig rule_based()
{
    return {};
}

PreprocessConfig all_off()
{
    PreprocessConfig c;
    c.filter_person_names = false;
    c.filter_citations = false;
    c.stem_and_lemmatize = false;
    return c;
}

TokenStream stream(std::vector<std::vector<std::string>> segments)
{
    return TokenStream{std::move(segments)};
}

// Reference outputs of the 1980 algorithm (NLTK, ORIGINAL_ALGORITHM mode).
const std::vector<std::pair<std::string, std::string>> kPorterCases = {
    {"caresses", "caress"},
    {"ponies", "poni"},
    {"ties", "ti"},
    {"caress", "caress"},
    {"cats", "cat"},
    {"feed", "feed"},
    {"agreed", "agre"},
    {"plastered", "plaster"},
    {"bled", "bled"},
    {"motoring", "motor"},
    {"sing", "sing"},
    {"conflated", "conflat"},
    {"troubled", "troubl"},
    {"sized", "size"},
    {"hopping", "hop"},
    {"tanned", "tan"},
    {"falling", "fall"},
    {"hissing", "hiss"},
    {"fizzed", "fizz"},
    {"failing", "fail"},
    {"filing", "file"},
    {"happy", "happi"},
    {"sky", "sky"},
    {"relational", "relat"},
    {"conditional", "condit"},
    {"rational", "ration"},
    {"valenci", "valenc"},
    {"hesitanci", "hesit"},
    {"digitizer", "digit"},
    {"conformabli", "conform"},
    {"radicalli", "radic"},
    {"differentli", "differ"},
    {"vileli", "vile"},
    {"analogousli", "analog"},
    {"vietnamization", "vietnam"},
    {"predication", "predic"},
    {"operator", "oper"},
    {"feudalism", "feudal"},
    {"decisiveness", "decis"},
    {"hopefulness", "hope"},
    {"callousness", "callous"},
    {"formaliti", "formal"},
    {"sensitiviti", "sensit"},
    {"sensibiliti", "sensibl"},
    {"triplicate", "triplic"},
    {"formative", "form"},
    {"formalize", "formal"},
    {"electriciti", "electr"},
    {"electrical", "electr"},
    {"hopeful", "hope"},
    {"goodness", "good"},
    {"revival", "reviv"},
    {"allowance", "allow"},
    {"inference", "infer"},
    {"airliner", "airlin"},
    {"gyroscopic", "gyroscop"},
    {"adjustable", "adjust"},
    {"defensible", "defens"},
    {"irritant", "irrit"},
    {"replacement", "replac"},
    {"adjustment", "adjust"},
    {"dependent", "depend"},
    {"adoption", "adopt"},
    {"communism", "commun"},
    {"activate", "activ"},
    {"angulariti", "angular"},
    {"homologous", "homolog"},
    {"effective", "effect"},
    {"bowdlerize", "bowdler"},
    {"probate", "probat"},
    {"rate", "rate"},
    {"cease", "ceas"},
    {"controll", "control"},
    {"roll", "roll"},
    {"generalizations", "gener"},
    {"oscillators", "oscil"},
    {"pleading", "plead"},
    {"dismissal", "dismiss"},
    {"dismissed", "dismiss"},
    {"remanded", "remand"},
    {"testimony", "testimoni"},
    {"congressional", "congression"},
    {"motion", "motion"},
    {"litigation", "litig"},
    {"plaintiff", "plaintiff"},
    {"defendant", "defend"},
    {"relevant", "relev"},
    {"court", "court"},
    {"proceedings", "proceed"},
};

}  // namespace

TEST(FilterEntities, RemovesNameAfterRoleCue)
{
    EXPECT_EQ(filter_entities("Plaintiff John Smith moved to dismiss", {}, rule_based()), "Plaintiff moved to dismiss");
}

TEST(FilterEntities, KeepsOrganizationsAndLocations)
{
    const std::string text = "The United Nations filed in New York";
    EXPECT_EQ(filter_entities(text, {}, rule_based()), text);
}

TEST(FilterEntities, OffIsIdentity)
{
    PreprocessConfig off;
    off.entity_source = EntitySource::Off;
    const std::string text = "Judge  Ann Lee\n\tsaid so";
    EXPECT_EQ(filter_entities(text, {}, off), text);
    PreprocessConfig disabled;
    disabled.filter_person_names = false;
    EXPECT_EQ(filter_entities(text, {}, disabled), text);
}

TEST(FilterEntities, CaseNameAroundVersus)
{
    EXPECT_EQ(filter_entities("in Smith v. Jones the court held", {}, rule_based()), "in v. the court held");
}

TEST(FilterEntities, TitlesAndInitials)
{
    EXPECT_EQ(filter_entities("Mr. J. Doe testified", {}, rule_based()), "Mr. testified");
    EXPECT_EQ(filter_entities("Justice Ada Renwick, writing for the court", {}, rule_based()),
              "Justice , writing for the court");
}

TEST(FilterEntities, CueWithoutNameLeavesText)
{
    EXPECT_EQ(filter_entities("the plaintiff argued", {}, rule_based()), "the plaintiff argued");
}

TEST(FilterEntities, SidecarSpans)
{
    PreprocessConfig sidecar;
    sidecar.entity_source = EntitySource::Sidecar;
    const std::string text = "Judge Ann Lee ruled for Bob";
    const std::vector<Span> spans = {{6, 13}, {24, 27}};
    EXPECT_EQ(filter_entities(text, spans, sidecar), "Judge ruled for");
}

TEST(FilterEntities, SidecarErrors)
{
    PreprocessConfig sidecar;
    sidecar.entity_source = EntitySource::Sidecar;
    const std::vector<Span> out_of_bounds = {{3, 40}};
    EXPECT_ERROR_KIND(filter_entities("short text", out_of_bounds, sidecar), ErrorKind::SpanOutOfBounds);
    const std::vector<Span> reversed = {{5, 2}};
    EXPECT_ERROR_KIND(filter_entities("short text", reversed, sidecar), ErrorKind::SpanOutOfBounds);
    const std::vector<Span> overlapping = {{0, 5}, {3, 7}};
    EXPECT_ERROR_KIND(filter_entities("short text", overlapping, sidecar), ErrorKind::OverlappingSpans);
}

TEST(FilterEntities, CollapsesWhitespace)
{
    EXPECT_EQ(filter_entities("  a   b\n\nc ", {}, rule_based()), "a b c");
}

TEST(FilterCitations, ReporterCitation)
{
    EXPECT_EQ(filter_citations("see 410 U.S. 113 (1973) at 120"), "see [CITE] at 120");
}

TEST(FilterCitations, StatuteAndSection)
{
    EXPECT_EQ(filter_citations("under 42 U.S.C. § 1983 and § 1985"), "under [CITE] and [CITE]");
}

TEST(FilterCitations, PlainTextUnchanged)
{
    EXPECT_EQ(filter_citations("no citations here"), "no citations here");
    EXPECT_EQ(filter_citations(""), "");
}

TEST(FilterCitations, AdjacentPlaceholdersMerge)
{
    EXPECT_EQ(filter_citations("see 512 F.3d 1190, 531 U.S. 98; § 12 here"), "see [CITE] here");
}

TEST(FilterCitations, ConstitutionalReference)
{
    EXPECT_EQ(filter_citations("violates U.S. Const. amend. XIV, § 1 plainly"), "violates [CITE] plainly");
}

TEST(FilterCitations, Idempotent)
{
    const std::vector<std::string> inputs = {
        "see 410 U.S. 113 (1973) at 120",
        "under 42 U.S.C. § 1983 and § 1985",
        "[CITE] [CITE] text [CITE]",
        "cf. 17 C.F.R. § 240.10b-5 and 999 F.2d 12 (2d Cir. 1999).",
        "no citations here",
    };
    for (const auto& x : inputs) {
        const auto once = filter_citations(x);
        EXPECT_EQ(filter_citations(once), once) << x;
    }
}

TEST(FilterCitations, IdempotentOnRandomMixtures)
{
    const std::vector<std::string> pieces = {"see",       "410 U.S. 113", "(1973)", "§",     "1983",
                                             "U.S.C.",    "42",           ",",      "[CITE]", "the court",
                                             "F.3d",      "12(b)(6)",     "§§",     ";",     "Const.",
                                             "U.S. Const. art. III"};
    Rng rng(5);
    for (int trial = 0; trial < 500; ++trial) {
        std::string x;
        const auto n = 1 + rng.below(10);
        for (std::uint64_t i = 0; i < n; ++i) {
            x += pieces[rng.below(pieces.size())];
            x += rng.below(3) == 0 ? "" : " ";
        }
        const auto once = filter_citations(x);
        ASSERT_EQ(filter_citations(once), once) << x;
        for (const auto& segment : tokenize(once).segments) {
            for (const auto& token : segment) {
                ASSERT_EQ(token.find_first_of("[]"), std::string::npos) << x;
            }
        }
    }
}

TEST(Tokenize, Basic)
{
    EXPECT_EQ(tokenize("Motion to Dismiss, filed"), stream({{"motion", "to", "dismiss", "filed"}}));
}

TEST(Tokenize, PlaceholderIsBoundary)
{
    EXPECT_EQ(tokenize("dismissed [CITE] granted"), stream({{"dismissed"}, {"granted"}}));
    EXPECT_EQ(tokenize("[CITE] a [CITE] [CITE]"), stream({{"a"}}));
}

TEST(Tokenize, EmptyText)
{
    EXPECT_TRUE(tokenize("").empty());
    EXPECT_TRUE(tokenize(" ,;. ").empty());
}

TEST(Tokenize, KeepsNumeralsAndSplitsPunctuation)
{
    EXPECT_EQ(tokenize("Rule 12(b)(6) don't"), stream({{"rule", "12", "b", "6", "don", "t"}}));
}

TEST(Tokenize, TokensAreNonEmptyLowercase)
{
    const auto s = tokenize("A-B  C\tD!!E [CITE]F");
    for (const auto& segment : s.segments) {
        EXPECT_FALSE(segment.empty());
        for (const auto& token : segment) {
            EXPECT_FALSE(token.empty());
            for (const char c : token) {
                EXPECT_FALSE(c >= 'A' && c <= 'Z');
                EXPECT_FALSE(c == ' ' || c == '\t');
            }
        }
    }
    EXPECT_EQ(s.token_count(), 6U);
}

TEST(PorterStem, MatchesReferenceOutputs)
{
    for (const auto& [word, stem] : kPorterCases) {
        EXPECT_EQ(porter_stem(word), stem) << word;
    }
}

TEST(PorterStem, ShortWordsAreFixedPoints)
{
    for (const std::string w : {"to", "is", "as", "a", "be"}) {
        EXPECT_EQ(porter_stem(w), w);
    }
}

TEST(StemTokens, PaperExamples)
{
    EXPECT_EQ(stem_tokens(stream({{"pleading"}})), stream({{"plead"}}));
    const auto s = stem_tokens(stream({{"dismissal", "dismissed"}}));
    EXPECT_EQ(s.segments[0][0], s.segments[0][1]);
    EXPECT_EQ(stem_tokens(stream({{"to"}})), stream({{"to"}}));
}

TEST(StemTokens, PreservesShape)
{
    const auto in = stream({{"motions", "granted"}, {"filing"}, {"the", "courts", "held", "it"}});
    const auto out = stem_tokens(in);
    ASSERT_EQ(out.segments.size(), in.segments.size());
    for (std::size_t i = 0; i < in.segments.size(); ++i) {
        EXPECT_EQ(out.segments[i].size(), in.segments[i].size());
    }
}

TEST(Preprocess, AllFlagsOffIsTokenization)
{
    const std::string text = "Plaintiff John Smith cites 410 U.S. 113 (1973).";
    EXPECT_EQ(preprocess_text(text, all_off()), tokenize(text));
}

TEST(Preprocess, FullChain)
{
    PreprocessConfig c;
    c.stem_and_lemmatize = true;
    const auto s = preprocess_text("Plaintiff John Smith moved for dismissal, see 410 U.S. 113 (1973) pleadings", c);
    EXPECT_EQ(s, stream({{"plaintiff", "move", "for", "dismiss", "see"}, {"plead"}}));
}

TEST(Preprocess, DocumentUsesSidecarSpans)
{
    PreprocessConfig c;
    c.entity_source = EntitySource::Sidecar;
    const Document doc{"a", "Judge Ann Lee ruled", Label::Relevant, {{6, 13}}};
    EXPECT_EQ(preprocess(doc, c), stream({{"judge", "ruled"}}));
}

TEST(PreprocessConfigType, CanonicalDiffersPerField)
{
    PreprocessConfig a;
    PreprocessConfig b;
    EXPECT_EQ(a.canonical(), b.canonical());
    b.stem_and_lemmatize = true;
    EXPECT_NE(a.canonical(), b.canonical());
}
