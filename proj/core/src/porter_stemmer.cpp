// Porter's 1980 suffix-stripping algorithm, rule set as published (no
// later "bli"/"logi" departures). Operates on lowercase ASCII; other bytes
// are treated as consonants.

#include <array>
#include <utility>

#include "relevant/preprocess.hpp"

namespace relevant {

namespace {

class PorterStemmer {
public:
    explicit PorterStemmer(std::string_view word) : b_(word) {}

    std::string run() &&
    {
        if (b_.size() <= 2) {
            return std::move(b_);
        }
        step1a();
        step1b();
        step1c();
        step2();
        step3();
        step4();
        step5a();
        step5b();
        return std::move(b_);
    }

private:
    // b_[0, j_) is the stem under consideration once a suffix has matched
    std::string b_;
    std::size_t j_ = 0;

    bool is_consonant(std::size_t i) const
    {
        switch (b_[i]) {
        case 'a': case 'e': case 'i': case 'o': case 'u': return false;
        case 'y': return i == 0 || !is_consonant(i - 1);
        default: return true;
        }
    }

    /// Number of VC sequences in b_[0, end).
    int measure(std::size_t end) const
    {
        int m = 0;
        std::size_t i = 0;
        while (i < end && is_consonant(i)) {
            ++i;
        }
        while (i < end) {
            while (i < end && !is_consonant(i)) {
                ++i;
            }
            if (i >= end) {
                break;
            }
            ++m;
            while (i < end && is_consonant(i)) {
                ++i;
            }
        }
        return m;
    }

    bool has_vowel(std::size_t end) const
    {
        for (std::size_t i = 0; i < end; ++i) {
            if (!is_consonant(i)) {
                return true;
            }
        }
        return false;
    }

    bool double_consonant(std::size_t end) const
    {
        return end >= 2 && b_[end - 1] == b_[end - 2] && is_consonant(end - 1);
    }

    /// *o: stem ends consonant-vowel-consonant, last consonant not w, x or y.
    bool cvc(std::size_t end) const
    {
        if (end < 3 || !is_consonant(end - 1) || is_consonant(end - 2) || !is_consonant(end - 3)) {
            return false;
        }
        const char c = b_[end - 1];
        return c != 'w' && c != 'x' && c != 'y';
    }

    bool ends(std::string_view suffix)
    {
        if (suffix.size() > b_.size() || std::string_view(b_).substr(b_.size() - suffix.size()) != suffix) {
            return false;
        }
        j_ = b_.size() - suffix.size();
        return true;
    }

    void set_to(std::string_view replacement)
    {
        b_.resize(j_);
        b_.append(replacement);
    }

    void replace_if_measure_positive(std::string_view replacement)
    {
        if (measure(j_) > 0) {
            set_to(replacement);
        }
    }

    void step1a()
    {
        if (ends("sses")) {
            set_to("ss");
        } else if (ends("ies")) {
            set_to("i");
        } else if (ends("ss")) {
        } else if (ends("s")) {
            set_to("");
        }
    }

    void step1b()
    {
        if (ends("eed")) {
            replace_if_measure_positive("ee");
            return;
        }
        if (!((ends("ed") || ends("ing")) && has_vowel(j_))) {
            return;
        }
        set_to("");
        if (ends("at")) {
            set_to("ate");
        } else if (ends("bl")) {
            set_to("ble");
        } else if (ends("iz")) {
            set_to("ize");
        } else if (double_consonant(b_.size())) {
            const char c = b_.back();
            if (c != 'l' && c != 's' && c != 'z') {
                b_.pop_back();
            }
        } else if (measure(b_.size()) == 1 && cvc(b_.size())) {
            b_.push_back('e');
        }
    }

    void step1c()
    {
        if (ends("y") && has_vowel(j_)) {
            set_to("i");
        }
    }

    void apply_table(std::span<const std::pair<std::string_view, std::string_view>> rules)
    {
        for (const auto& [suffix, replacement] : rules) {
            if (ends(suffix)) {
                replace_if_measure_positive(replacement);
                return;
            }
        }
    }

    void step2()
    {
        static constexpr std::array<std::pair<std::string_view, std::string_view>, 20> kRules = {{
            {"ational", "ate"}, {"tional", "tion"}, {"enci", "ence"},   {"anci", "ance"},
            {"izer", "ize"},    {"abli", "able"},  {"alli", "al"},      {"entli", "ent"},
            {"eli", "e"},       {"ousli", "ous"},  {"ization", "ize"},  {"ation", "ate"},
            {"ator", "ate"},    {"alism", "al"},   {"iveness", "ive"},  {"fulness", "ful"},
            {"ousness", "ous"}, {"aliti", "al"},   {"iviti", "ive"},    {"biliti", "ble"},
        }};
        apply_table(kRules);
    }

    void step3()
    {
        static constexpr std::array<std::pair<std::string_view, std::string_view>, 7> kRules = {{
            {"icate", "ic"}, {"ative", ""}, {"alize", "al"}, {"iciti", "ic"},
            {"ical", "ic"},  {"ful", ""},   {"ness", ""},
        }};
        apply_table(kRules);
    }

    void step4()
    {
        static constexpr std::array<std::string_view, 19> kSuffixes = {
            "al",  "ance", "ence", "er",  "ic",  "able", "ible", "ant", "ement", "ment",
            "ent", "ion",  "ou",   "ism", "ate", "iti",  "ous",  "ive", "ize",
        };
        for (const auto suffix : kSuffixes) {
            if (!ends(suffix)) {
                continue;
            }
            if (suffix == "ion" && !(j_ > 0 && (b_[j_ - 1] == 's' || b_[j_ - 1] == 't'))) {
                return;
            }
            if (measure(j_) > 1) {
                set_to("");
            }
            return;
        }
    }

    void step5a()
    {
        if (!ends("e")) {
            return;
        }
        const int m = measure(j_);
        if (m > 1 || (m == 1 && !cvc(j_))) {
            set_to("");
        }
    }

    void step5b()
    {
        if (measure(b_.size()) > 1 && double_consonant(b_.size()) && b_.back() == 'l') {
            b_.pop_back();
        }
    }
};

}  // namespace

std::string porter_stem(std::string_view word)
{
    return PorterStemmer(word).run();
}

}  // namespace relevant
