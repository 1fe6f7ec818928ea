#include <algorithm>
#include <array>
#include <cctype>

#include "relevant/error.hpp"
#include "relevant/preprocess.hpp"

namespace relevant {

namespace {

constexpr std::array<std::string_view, 12> kRoleCues = {
    "Plaintiff", "Defendant", "Petitioner", "Respondent", "Appellant", "Appellee",
    "Judge",     "Justice",   "Mr",         "Ms",         "Mrs",       "Dr",
};

constexpr std::size_t kMaxNameWords = 3;

bool is_space(char c)
{
    return c == ' ' || c == '\t' || c == '\n' || c == '\r' || c == '\f' || c == '\v';
}

bool is_upper(char c) { return c >= 'A' && c <= 'Z'; }
bool is_alpha(char c) { return (c >= 'A' && c <= 'Z') || (c >= 'a' && c <= 'z'); }

bool is_trailing_punct(char c)
{
    return c == '.' || c == ',' || c == ';' || c == ':' || c == ')' || c == '!' || c == '?' || c == '"';
}

struct Word {
    std::size_t begin;
    std::size_t end;       // end of the raw whitespace-delimited word
    std::size_t core_end;  // end after stripping trailing punctuation
    std::string_view core;
    std::string_view trailing;
};

std::vector<Word> split_words(std::string_view text)
{
    std::vector<Word> words;
    std::size_t i = 0;
    while (i < text.size()) {
        while (i < text.size() && is_space(text[i])) {
            ++i;
        }
        if (i == text.size()) {
            break;
        }
        const std::size_t begin = i;
        while (i < text.size() && !is_space(text[i])) {
            ++i;
        }
        std::size_t core_end = i;
        while (core_end > begin && is_trailing_punct(text[core_end - 1])) {
            --core_end;
        }
        words.push_back({begin, i, core_end, text.substr(begin, core_end - begin),
                         text.substr(core_end, i - core_end)});
    }
    return words;
}

bool is_role_cue(const Word& w)
{
    // "Mr." is fine; "Plaintiff," breaks the link to the following name
    if (!w.trailing.empty() && w.trailing != ".") {
        return false;
    }
    for (const auto cue : kRoleCues) {
        if (w.core.size() == cue.size() &&
            std::tolower(static_cast<unsigned char>(w.core[0])) ==
                std::tolower(static_cast<unsigned char>(cue[0])) &&
            w.core.substr(1) == cue.substr(1)) {
            return true;
        }
    }
    return false;
}

bool is_versus(const Word& w) { return w.core == "v" || w.core == "vs"; }

bool is_name_word(const Word& w)
{
    if (w.core.empty() || !is_upper(w.core[0]) || is_versus(w) || is_role_cue(w)) {
        return false;
    }
    return std::all_of(w.core.begin(), w.core.end(),
                       [](char c) { return is_alpha(c) || c == '-' || c == '\'' || c == '.'; });
}

/// A name run continues past a word only if nothing but an initial's period
/// follows it.
bool continues_run(const Word& w) { return w.trailing.empty() || (w.trailing == "." && w.core.size() == 1); }

}  // namespace

std::vector<Span> find_person_names(std::string_view text)
{
    const auto words = split_words(text);
    std::vector<Span> spans;
    auto add = [&](std::size_t first, std::size_t last) {
        spans.push_back({words[first].begin, words[last].core_end});
    };

    for (std::size_t i = 0; i < words.size(); ++i) {
        const bool cue = is_role_cue(words[i]);
        const bool versus = is_versus(words[i]);
        if (!cue && !versus) {
            continue;
        }
        if (versus && i > 0 && continues_run(words[i - 1]) && is_name_word(words[i - 1])) {
            std::size_t first = i - 1;
            while (first > 0 && i - first < kMaxNameWords && is_name_word(words[first - 1]) &&
                   continues_run(words[first - 1])) {
                --first;
            }
            add(first, i - 1);
        }
        if ((cue || versus) && i + 1 < words.size() && is_name_word(words[i + 1])) {
            std::size_t last = i + 1;
            while (last + 1 < words.size() && last - i < kMaxNameWords && continues_run(words[last]) &&
                   is_name_word(words[last + 1])) {
                ++last;
            }
            add(i + 1, last);
        }
    }

    std::sort(spans.begin(), spans.end(), [](const Span& a, const Span& b) { return a.begin < b.begin; });
    std::vector<Span> merged;
    for (const auto& s : spans) {
        if (!merged.empty() && s.begin <= merged.back().end) {
            merged.back().end = std::max(merged.back().end, s.end);
        } else {
            merged.push_back(s);
        }
    }
    return merged;
}

namespace {

void validate_spans(std::string_view text, std::span<const Span> spans)
{
    std::size_t previous_end = 0;
    for (std::size_t i = 0; i < spans.size(); ++i) {
        const auto& s = spans[i];
        if (s.begin > s.end || s.end > text.size()) {
            throw Error(ErrorKind::SpanOutOfBounds,
                        "[" + std::to_string(s.begin) + ", " + std::to_string(s.end) + ") in text of " +
                            std::to_string(text.size()) + " bytes");
        }
        if (i > 0 && s.begin < previous_end) {
            throw Error(ErrorKind::OverlappingSpans,
                        "span starting at " + std::to_string(s.begin) + " overlaps its predecessor");
        }
        previous_end = s.end;
    }
}

std::string remove_and_collapse(std::string_view text, std::span<const Span> spans)
{
    std::string out;
    out.reserve(text.size());
    bool pending_space = false;
    std::size_t next = 0;
    for (std::size_t i = 0; i < text.size();) {
        if (next < spans.size() && i == spans[next].begin) {
            i = std::max(i, spans[next].end);
            ++next;
            pending_space = true;
            continue;
        }
        const char c = text[i++];
        if (is_space(c)) {
            pending_space = true;
            continue;
        }
        if (pending_space && !out.empty()) {
            out.push_back(' ');
        }
        pending_space = false;
        out.push_back(c);
    }
    return out;
}

}  // namespace

std::string filter_entities(std::string_view text, std::span<const Span> sidecar,
                            const PreprocessConfig& config)
{
    if (!config.filter_person_names || config.entity_source == EntitySource::Off) {
        return std::string(text);
    }
    if (config.entity_source == EntitySource::Sidecar) {
        validate_spans(text, sidecar);
        return remove_and_collapse(text, sidecar);
    }
    const auto spans = find_person_names(text);
    return remove_and_collapse(text, spans);
}

}  // namespace relevant
