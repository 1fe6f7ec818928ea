#pragma once

#include <string>

#include "relevant/util.hpp"

namespace bench {

/// Sentence-structured filler with a citation and a named party every few
/// hundred words, roughly the shape of a court opinion.
inline std::string opinion_text(std::size_t words, std::uint64_t seed)
{
    static const char* kWords[] = {"court", "appeal", "motion", "dismiss", "claim", "record", "trial", "evidence",
                                   "held", "finding", "judgment", "order", "review", "standard", "party", "contract"};
    relevant::Rng rng(seed);
    std::string text;
    for (std::size_t i = 0; i < words; ++i) {
        text += kWords[rng.below(16)];
        if (i % 300 == 150) {
            text += " see 512 F.3d 1190, 1195 (9th Cir. 2008)";
        }
        if (i % 300 == 250) {
            text += " Plaintiff Henrietta Vance";
        }
        text += i % 17 == 16 ? ". " : " ";
    }
    return text;
}

}  // namespace bench
