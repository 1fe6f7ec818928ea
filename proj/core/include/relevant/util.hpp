#pragma once

#include <cstdint>
#include <random>
#include <span>
#include <string>
#include <string_view>
#include <utility>

namespace relevant {

/// Rounds half-up to one decimal and prints with exactly one decimal.
std::string format_percent(double percent);
double round_half_up_1dp(double value);

/// printf("%.*g") with the given number of significant digits.
std::string format_significant(double value, int digits);

/// 64-bit FNV-1a, rendered as 16 lowercase hex digits by `hex_digest`.
std::uint64_t fnv1a64(std::string_view data) noexcept;
std::string hex_digest(std::uint64_t value);

/// Seeded generator whose output is fully specified (mt19937_64 plus our own
/// distributions), so sequences are identical across standard libraries.
class Rng {
public:
    explicit Rng(std::uint64_t seed) : engine_(seed) {}

    std::uint64_t next() { return engine_(); }
    /// Uniform in [0, 1) with 53 random bits.
    double uniform01() { return static_cast<double>(engine_() >> 11) * 0x1.0p-53; }
    double uniform(double lo, double hi) { return lo + (hi - lo) * uniform01(); }
    /// Uniform in [0, bound); bound must be positive.
    std::uint64_t below(std::uint64_t bound);

    template <typename T>
    void shuffle(std::span<T> items)
    {
        for (std::size_t i = items.size(); i > 1; --i) {
            std::swap(items[i - 1], items[static_cast<std::size_t>(below(i))]);
        }
    }

private:
    std::mt19937_64 engine_;
};

}  // namespace relevant
