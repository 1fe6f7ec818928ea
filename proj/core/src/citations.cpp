// Rule-based scrubber for US legal citations and clause references.
//
// Recognized forms (reporter abbreviations are case-sensitive):
//   <vol> <reporter> <page>          410 U.S. 113, 999 F.2d 12, 5 S. Ct. 7
//   <vol> <code> [§[§]] <section>    42 U.S.C. § 1983, 29 C.F.R. § 1630.2(h)
//   §[§] <section>                   § 1985, §§ 12(b)(6)
//   U.S. Const. art./amend. <n> [, § <n> | , cl. <n>]...
// Any of these may carry a trailing parenthesized year, "(1973)" or
// "(2d Cir. 1999)", which is removed with it. Section tokens are
// \d[\w.()-]* with balanced parentheses and no trailing period.

#include <algorithm>
#include <optional>
#include <vector>

#include "relevant/preprocess.hpp"

namespace relevant {

namespace {

constexpr std::string_view kSection = "\xC2\xA7";  // U+00A7 SECTION SIGN

struct Reporter {
    std::string_view abbrev;
    bool statute;
};

// clang-format off
constexpr Reporter kReporters[] = {
    {"U.S.C.A.", true}, {"U.S.C.", true}, {"C.F.R.", true},
    {"U.S.", false}, {"S. Ct.", false}, {"S.Ct.", false},
    {"L. Ed. 2d", false}, {"L.Ed.2d", false}, {"L. Ed.", false}, {"L.Ed.", false},
    {"F.", false}, {"F.2d", false}, {"F.3d", false}, {"F.4th", false},
    {"F. Supp.", false}, {"F. Supp. 2d", false}, {"F. Supp. 3d", false},
    {"F.Supp.", false}, {"F.Supp.2d", false}, {"F.Supp.3d", false},
    {"F. App'x", false}, {"F.App'x", false}, {"Fed. Cl.", false}, {"Fed. Reg.", false},
    {"B.R.", false}, {"Stat.", false},
    {"A.", false}, {"A.2d", false}, {"A.3d", false},
    {"P.", false}, {"P.2d", false}, {"P.3d", false},
    {"N.E.", false}, {"N.E.2d", false}, {"N.E.3d", false},
    {"N.W.", false}, {"N.W.2d", false}, {"S.E.", false}, {"S.E.2d", false},
    {"S.W.", false}, {"S.W.2d", false}, {"S.W.3d", false},
    {"So.", false}, {"So. 2d", false}, {"So. 3d", false},
    {"Cal. Rptr.", false}, {"N.Y.S.", false}, {"N.Y.S.2d", false},
};
// clang-format on

const std::vector<Reporter>& reporters_longest_first()
{
    static const std::vector<Reporter> sorted = [] {
        std::vector<Reporter> v(std::begin(kReporters), std::end(kReporters));
        std::stable_sort(v.begin(), v.end(),
                         [](const Reporter& a, const Reporter& b) { return a.abbrev.size() > b.abbrev.size(); });
        return v;
    }();
    return sorted;
}

bool is_digit(char c) { return c >= '0' && c <= '9'; }
bool is_alnum(char c) { return is_digit(c) || (c >= 'a' && c <= 'z') || (c >= 'A' && c <= 'Z'); }
bool is_word(char c) { return is_alnum(c) || c == '_'; }
bool is_space(char c) { return c == ' ' || c == '\t' || c == '\n' || c == '\r'; }

class Scanner {
public:
    explicit Scanner(std::string_view text) : text_(text) {}

    /// End of the citation starting at `pos`, if one starts there.
    std::optional<std::size_t> match_at(std::size_t pos) const
    {
        if (starts_with(pos, kCitePlaceholder)) {
            return pos + kCitePlaceholder.size();
        }
        if (!at_boundary(pos)) {
            return std::nullopt;
        }
        std::optional<std::size_t> end;
        if (text_[pos] == 'U') {
            end = constitution(pos);
        } else if (is_digit(text_[pos])) {
            end = volume_citation(pos);
        } else if (starts_with(pos, kSection)) {
            end = section_clause(pos);
        }
        if (end) {
            return year_suffix(*end);
        }
        return std::nullopt;
    }

private:
    bool starts_with(std::size_t pos, std::string_view s) const { return text_.substr(pos).starts_with(s); }

    bool at_boundary(std::size_t pos) const { return pos == 0 || !is_word(text_[pos - 1]); }

    std::size_t skip_spaces(std::size_t pos) const
    {
        while (pos < text_.size() && is_space(text_[pos])) {
            ++pos;
        }
        return pos;
    }

    std::size_t skip_digits(std::size_t pos) const
    {
        while (pos < text_.size() && is_digit(text_[pos])) {
            ++pos;
        }
        return pos;
    }

    std::size_t skip_section_signs(std::size_t pos) const
    {
        while (starts_with(pos, kSection)) {
            pos += kSection.size();
        }
        return pos;
    }

    /// \d[\w.()-]* with balanced parentheses and no trailing period.
    std::optional<std::size_t> section_token(std::size_t pos) const
    {
        if (pos >= text_.size() || !is_digit(text_[pos])) {
            return std::nullopt;
        }
        int depth = 0;
        std::size_t end = pos;
        std::size_t balanced_end = pos;
        while (end < text_.size()) {
            const char c = text_[end];
            if (c == '(') {
                ++depth;
            } else if (c == ')') {
                if (depth == 0) {
                    break;
                }
                --depth;
            } else if (!is_word(c) && c != '.' && c != '-') {
                break;
            }
            ++end;
            if (depth == 0) {
                balanced_end = end;
            }
        }
        while (balanced_end > pos + 1 && (text_[balanced_end - 1] == '.' || text_[balanced_end - 1] == '-')) {
            --balanced_end;
        }
        return balanced_end;
    }

    std::optional<std::size_t> volume_citation(std::size_t pos) const
    {
        std::size_t p = skip_digits(pos);
        if (p == pos || p == text_.size() || !is_space(text_[p])) {
            return std::nullopt;
        }
        p = skip_spaces(p);
        for (const auto& reporter : reporters_longest_first()) {
            if (!starts_with(p, reporter.abbrev)) {
                continue;
            }
            std::size_t q = p + reporter.abbrev.size();
            if (reporter.statute) {
                q = skip_spaces(skip_section_signs(skip_spaces(q)));
                if (auto end = section_token(q)) {
                    return end;
                }
                continue;
            }
            if (q == text_.size() || !is_space(text_[q])) {
                continue;
            }
            q = skip_spaces(q);
            const std::size_t page_end = skip_digits(q);
            if (page_end == q || (page_end < text_.size() && is_word(text_[page_end]))) {
                continue;
            }
            return page_end;
        }
        return std::nullopt;
    }

    std::optional<std::size_t> section_clause(std::size_t pos) const
    {
        const std::size_t p = skip_spaces(skip_section_signs(pos));
        return section_token(p);
    }

    std::optional<std::size_t> constitution(std::size_t pos) const
    {
        constexpr std::string_view kHead = "U.S. Const.";
        if (!starts_with(pos, kHead)) {
            return std::nullopt;
        }
        std::size_t p = skip_spaces(pos + kHead.size());
        if (starts_with(p, "art.")) {
            p += 4;
        } else if (starts_with(p, "amend.")) {
            p += 6;
        } else {
            return std::nullopt;
        }
        p = skip_spaces(p);
        std::size_t end = p;
        while (end < text_.size() && (is_digit(text_[end]) || std::string_view("IVXLCivxlc").find(text_[end]) !=
                                                                   std::string_view::npos)) {
            ++end;
        }
        if (end == p || (end < text_.size() && is_word(text_[end]))) {
            return std::nullopt;
        }
        // optional ", § 8" / ", cl. 3" qualifiers
        for (;;) {
            std::size_t q = end;
            if (q >= text_.size() || text_[q] != ',') {
                break;
            }
            q = skip_spaces(q + 1);
            if (starts_with(q, kSection)) {
                q = skip_spaces(skip_section_signs(q));
            } else if (starts_with(q, "cl.")) {
                q = skip_spaces(q + 3);
            } else {
                break;
            }
            const auto token = section_token(q);
            if (!token) {
                break;
            }
            end = *token;
        }
        return end;
    }

    /// Extends `end` over a following "(...1999)" if there is one.
    std::size_t year_suffix(std::size_t end) const
    {
        const std::size_t open = skip_spaces(end);
        if (open >= text_.size() || text_[open] != '(') {
            return end;
        }
        constexpr std::size_t kMaxInner = 60;
        std::size_t close = open + 1;
        while (close < text_.size() && close - open <= kMaxInner && text_[close] != ')' && text_[close] != '(') {
            ++close;
        }
        if (close >= text_.size() || text_[close] != ')') {
            return end;
        }
        for (std::size_t i = open + 1; i + 4 <= close; ++i) {
            const bool four_digits = is_digit(text_[i]) && is_digit(text_[i + 1]) && is_digit(text_[i + 2]) &&
                                     is_digit(text_[i + 3]);
            const bool isolated = !is_digit(text_[i - 1]) && (i + 4 == close || !is_digit(text_[i + 4]));
            const bool plausible = (text_[i] == '1' && text_[i + 1] >= '6') || (text_[i] == '2' && text_[i + 1] == '0');
            if (four_digits && isolated && plausible) {
                return close + 1;
            }
        }
        return end;
    }

    std::string_view text_;
};

bool is_joiner(char c) { return is_space(c) || c == ',' || c == ';'; }

}  // namespace

std::string filter_citations(std::string_view text)
{
    const Scanner scanner(text);
    std::string out;
    out.reserve(text.size());
    std::size_t i = 0;
    while (i < text.size()) {
        const auto end = scanner.match_at(i);
        if (!end) {
            out.push_back(text[i++]);
            continue;
        }
        // merge with a placeholder separated from this one only by joiners
        std::size_t trimmed = out.size();
        while (trimmed > 0 && is_joiner(out[trimmed - 1])) {
            --trimmed;
        }
        if (std::string_view(out).substr(0, trimmed).ends_with(kCitePlaceholder)) {
            out.resize(trimmed);
        } else {
            out.append(kCitePlaceholder);
        }
        i = *end;
    }
    return out;
}

}  // namespace relevant
