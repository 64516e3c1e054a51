#ifndef MEMEXT_UTIL_HPP
#define MEMEXT_UTIL_HPP

#include <cmath>
#include <cstdint>
#include <limits>
#include <span>
#include <stdexcept>
#include <string>
#include <vector>

namespace memext {

inline constexpr double kNegInf = -std::numeric_limits<double>::infinity();

// Stable log(sum(exp(x))) over a span of values.
double logsumexp(std::span<const double> values);

// Deterministic RNG for sampling decisions. std::mt19937_64 state with a
// rejection-sampled bounded draw so results do not depend on the standard
// library's distribution implementations.
class Rng {
public:
    explicit Rng(std::uint64_t seed) : state_(seed) {
        // splitmix64 warm-up so nearby seeds diverge
        for (int i = 0; i < 4; ++i) next_u64();
    }

    std::uint64_t next_u64() {
        std::uint64_t z = (state_ += 0x9e3779b97f4a7c15ULL);
        z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
        z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
        return z ^ (z >> 31);
    }

    // Uniform integer in [0, bound). bound must be > 0.
    std::uint64_t uniform_below(std::uint64_t bound) {
        if (bound == 0) throw std::invalid_argument("uniform_below: bound == 0");
        const std::uint64_t limit = UINT64_MAX - UINT64_MAX % bound;
        std::uint64_t v = next_u64();
        while (v >= limit) v = next_u64();
        return v % bound;
    }

    // Uniform double in [0, 1) with 53 bits of entropy.
    double uniform01() {
        return static_cast<double>(next_u64() >> 11) * 0x1.0p-53;
    }

    template <typename T>
    void shuffle(std::vector<T>& items) {
        for (std::size_t i = items.size(); i > 1; --i) {
            std::size_t j = static_cast<std::size_t>(uniform_below(i));
            std::swap(items[i - 1], items[j]);
        }
    }

private:
    std::uint64_t state_;
};

// Offsets of Unicode scalar values in a UTF-8 string. All character
// arithmetic in the toolkit (strides, chunk sizes, span bounds) is in
// scalar values, never bytes.
class Utf8Index {
public:
    explicit Utf8Index(const std::string& text);

    std::size_t char_count() const { return offsets_.size() - 1; }

    // Byte offset of character index i; i may equal char_count() (end).
    std::size_t byte_offset(std::size_t char_index) const;

    // Substring covering characters [first, last).
    std::string slice(const std::string& text, std::size_t first, std::size_t last) const;

private:
    std::vector<std::size_t> offsets_;  // byte offset per char, plus end sentinel
};

// Number of Unicode scalar values in a UTF-8 string.
std::size_t utf8_char_count(const std::string& text);

// Number of *complete* scalar values in the first `byte_count` bytes.
std::size_t utf8_chars_in_prefix(const std::string& text, std::size_t byte_count);

// Shortest decimal form that parses back to the same double; "-inf"/"inf"
// for infinities. Used for CSV output and config fingerprints.
std::string format_double(double v);

// FNV-1a 64-bit hash, hex-encoded. Used for config fingerprints.
std::string fnv1a_hex(const std::string& data);

}  // namespace memext

#endif
