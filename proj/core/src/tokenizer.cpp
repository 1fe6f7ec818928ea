#include <cstdint>

#include "relevant/preprocess.hpp"

namespace relevant {

namespace {

/// Decodes one UTF-8 code point at `pos`. Malformed input yields U+FFFD and
/// advances a single byte.
char32_t decode(std::string_view s, std::size_t& pos)
{
    const auto b0 = static_cast<unsigned char>(s[pos]);
    if (b0 < 0x80) {
        ++pos;
        return b0;
    }
    int len = 0;
    char32_t cp = 0;
    if ((b0 & 0xE0) == 0xC0) {
        len = 2;
        cp = b0 & 0x1F;
    } else if ((b0 & 0xF0) == 0xE0) {
        len = 3;
        cp = b0 & 0x0F;
    } else if ((b0 & 0xF8) == 0xF0) {
        len = 4;
        cp = b0 & 0x07;
    } else {
        ++pos;
        return 0xFFFD;
    }
    if (pos + static_cast<std::size_t>(len) > s.size()) {
        ++pos;
        return 0xFFFD;
    }
    for (int i = 1; i < len; ++i) {
        const auto b = static_cast<unsigned char>(s[pos + static_cast<std::size_t>(i)]);
        if ((b & 0xC0) != 0x80) {
            ++pos;
            return 0xFFFD;
        }
        cp = (cp << 6) | (b & 0x3F);
    }
    pos += static_cast<std::size_t>(len);
    return cp;
}

void encode(char32_t cp, std::string& out)
{
    if (cp < 0x80) {
        out.push_back(static_cast<char>(cp));
    } else if (cp < 0x800) {
        out.push_back(static_cast<char>(0xC0 | (cp >> 6)));
        out.push_back(static_cast<char>(0x80 | (cp & 0x3F)));
    } else if (cp < 0x10000) {
        out.push_back(static_cast<char>(0xE0 | (cp >> 12)));
        out.push_back(static_cast<char>(0x80 | ((cp >> 6) & 0x3F)));
        out.push_back(static_cast<char>(0x80 | (cp & 0x3F)));
    } else {
        out.push_back(static_cast<char>(0xF0 | (cp >> 18)));
        out.push_back(static_cast<char>(0x80 | ((cp >> 12) & 0x3F)));
        out.push_back(static_cast<char>(0x80 | ((cp >> 6) & 0x3F)));
        out.push_back(static_cast<char>(0x80 | (cp & 0x3F)));
    }
}

/// ASCII letters and digits, plus non-ASCII letters outside the Latin-1
/// symbol block and the general punctuation/symbol planes.
bool is_token_char(char32_t cp)
{
    if (cp < 0x80) {
        return (cp >= '0' && cp <= '9') || (cp >= 'a' && cp <= 'z') || (cp >= 'A' && cp <= 'Z');
    }
    if (cp < 0xC0 || cp == 0xD7 || cp == 0xF7 || cp == 0xFFFD) {
        return false;
    }
    if ((cp >= 0x2000 && cp <= 0x2BFF) || (cp >= 0x3000 && cp <= 0x303F) || (cp >= 0xFE00 && cp <= 0xFE0F) ||
        cp == 0xFEFF) {
        return false;
    }
    return true;
}

char32_t to_lower(char32_t cp)
{
    if ((cp >= 'A' && cp <= 'Z') || (cp >= 0xC0 && cp <= 0xDE && cp != 0xD7)) {
        return cp + 0x20;
    }
    return cp;
}

}  // namespace

std::size_t TokenStream::token_count() const noexcept
{
    std::size_t n = 0;
    for (const auto& seg : segments) {
        n += seg.size();
    }
    return n;
}

TokenStream tokenize(std::string_view text)
{
    TokenStream stream;
    std::vector<std::string> segment;
    std::string token;

    auto flush_token = [&] {
        if (!token.empty()) {
            segment.push_back(std::move(token));
            token.clear();
        }
    };
    auto flush_segment = [&] {
        flush_token();
        if (!segment.empty()) {
            stream.segments.push_back(std::move(segment));
            segment.clear();
        }
    };

    std::size_t pos = 0;
    while (pos < text.size()) {
        if (text[pos] == '[' && text.substr(pos).starts_with(kCitePlaceholder)) {
            flush_segment();
            pos += kCitePlaceholder.size();
            continue;
        }
        const char32_t cp = decode(text, pos);
        if (is_token_char(cp)) {
            encode(to_lower(cp), token);
        } else {
            flush_token();
        }
    }
    flush_segment();
    return stream;
}

TokenStream stem_tokens(TokenStream stream)
{
    for (auto& segment : stream.segments) {
        for (auto& token : segment) {
            token = porter_stem(token);
        }
    }
    return stream;
}

std::string PreprocessConfig::canonical() const
{
    std::string out;
    out += "preprocess.filter_person_names=" + std::string(filter_person_names ? "true" : "false") + "\n";
    out += "preprocess.filter_citations=" + std::string(filter_citations ? "true" : "false") + "\n";
    out += "preprocess.stem_and_lemmatize=" + std::string(stem_and_lemmatize ? "true" : "false") + "\n";
    out += "preprocess.entity_source=";
    switch (entity_source) {
    case EntitySource::RuleBased: out += "rule"; break;
    case EntitySource::Sidecar: out += "sidecar"; break;
    case EntitySource::Off: out += "off"; break;
    }
    out += "\n";
    return out;
}

TokenStream preprocess_text(std::string_view text, const PreprocessConfig& config)
{
    Document doc;
    doc.text = std::string(text);
    return preprocess(doc, config);
}

TokenStream preprocess(const Document& doc, const PreprocessConfig& config)
{
    std::string text = filter_entities(doc.text, doc.entities, config);
    if (config.filter_citations) {
        text = filter_citations(text);
    }
    TokenStream stream = tokenize(text);
    if (config.stem_and_lemmatize) {
        stream = stem_tokens(std::move(stream));
    }
    return stream;
}

}  // namespace relevant
