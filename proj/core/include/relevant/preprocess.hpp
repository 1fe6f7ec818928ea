#pragma once

#include <cstddef>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "relevant/corpus.hpp"

namespace relevant {

/// Literal left in place of every scrubbed citation or clause reference.
inline constexpr std::string_view kCitePlaceholder = "[CITE]";

/// Lowercase tokens grouped into segments. A segment ends wherever a citation
/// was scrubbed, so n-grams never bridge a removed reference.
struct TokenStream {
    std::vector<std::vector<std::string>> segments;

    [[nodiscard]] std::size_t token_count() const noexcept;
    [[nodiscard]] bool empty() const noexcept { return segments.empty(); }

    friend bool operator==(const TokenStream&, const TokenStream&) = default;
};

enum class EntitySource { RuleBased, Sidecar, Off };

struct PreprocessConfig {
    bool filter_person_names = true;
    bool filter_citations = true;
    bool stem_and_lemmatize = false;
    EntitySource entity_source = EntitySource::RuleBased;

    /// Canonical "key=value" lines; feeds the KE-stage fingerprint.
    [[nodiscard]] std::string canonical() const;
};

/// Removes person-name spans and collapses whitespace. With
/// EntitySource::Sidecar the spans come from `sidecar` (sorted, disjoint,
/// in-bounds byte ranges); with RuleBased from the built-in role-cue
/// heuristic; with Off, or when person-name filtering is disabled, the text is
/// returned unchanged.
std::string filter_entities(std::string_view text, std::span<const Span> sidecar,
                            const PreprocessConfig& config);

/// Person-name spans found by the role-cue heuristic: a run of one to three
/// capitalized words right after a cue (Plaintiff, Defendant, Judge, Mr, ...)
/// or on either side of a case-name "v".
std::vector<Span> find_person_names(std::string_view text);

/// Replaces reporter citations, statute references, section clauses and
/// constitutional references with `[CITE]`; adjacent placeholders (separated
/// only by whitespace, commas or semicolons) merge into one. Idempotent.
std::string filter_citations(std::string_view text);

/// Lowercases and splits on non-alphanumeric runs. Each `[CITE]` closes the
/// current segment. Empty segments are dropped.
TokenStream tokenize(std::string_view text);

/// Porter (1980) stemmer. Words of one or two letters are returned as is.
std::string porter_stem(std::string_view word);

TokenStream stem_tokens(TokenStream stream);

/// Full KE/CLS text chain for one document: entity filter, citation filter,
/// tokenization, optional stemming.
TokenStream preprocess(const Document& doc, const PreprocessConfig& config);
TokenStream preprocess_text(std::string_view text, const PreprocessConfig& config);

}  // namespace relevant
