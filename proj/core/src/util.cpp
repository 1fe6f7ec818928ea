#include "relevant/util.hpp"

#include <cmath>
#include <cstdio>

namespace relevant {

double round_half_up_1dp(double value)
{
    return std::floor(value * 10.0 + 0.5) / 10.0;
}

std::string format_percent(double percent)
{
    char buf[64];
    std::snprintf(buf, sizeof buf, "%.1f", round_half_up_1dp(percent));
    return buf;
}

std::string format_significant(double value, int digits)
{
    char buf[64];
    std::snprintf(buf, sizeof buf, "%.*g", digits, value);
    return buf;
}

std::uint64_t fnv1a64(std::string_view data) noexcept
{
    std::uint64_t hash = 0xcbf29ce484222325ULL;
    for (const unsigned char c : data) {
        hash ^= c;
        hash *= 0x100000001b3ULL;
    }
    return hash;
}

std::string hex_digest(std::uint64_t value)
{
    char buf[17];
    std::snprintf(buf, sizeof buf, "%016llx", static_cast<unsigned long long>(value));
    return buf;
}

std::uint64_t Rng::below(std::uint64_t bound)
{
    // rejection sampling keeps the draw unbiased
    const std::uint64_t limit = UINT64_MAX - UINT64_MAX % bound;
    std::uint64_t x = engine_();
    while (x >= limit) {
        x = engine_();
    }
    return x % bound;
}

}  // namespace relevant
