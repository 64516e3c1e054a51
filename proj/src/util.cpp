#include "memext/util.hpp"

#include <algorithm>
#include <charconv>
#include <cstdio>

namespace memext {

double logsumexp(std::span<const double> values) {
    if (values.empty()) return kNegInf;
    double m = kNegInf;
    for (double v : values) m = std::max(m, v);
    if (std::isinf(m)) return m;  // all -inf, or +inf dominates
    double acc = 0.0;
    for (double v : values) acc += std::exp(v - m);
    return m + std::log(acc);
}

namespace {

// Length of the UTF-8 sequence introduced by lead byte b. Invalid lead
// bytes are treated as single replacement-width units so indexing never
// fails on malformed input.
std::size_t utf8_seq_len(unsigned char b) {
    if (b < 0x80) return 1;
    if ((b & 0xe0) == 0xc0) return 2;
    if ((b & 0xf0) == 0xe0) return 3;
    if ((b & 0xf8) == 0xf0) return 4;
    return 1;
}

}  // namespace

Utf8Index::Utf8Index(const std::string& text) {
    offsets_.reserve(text.size() + 1);
    std::size_t i = 0;
    while (i < text.size()) {
        offsets_.push_back(i);
        std::size_t n = utf8_seq_len(static_cast<unsigned char>(text[i]));
        i += std::min(n, text.size() - i);
    }
    offsets_.push_back(text.size());
}

std::size_t Utf8Index::byte_offset(std::size_t char_index) const {
    if (char_index >= offsets_.size()) return offsets_.back();
    return offsets_[char_index];
}

std::string Utf8Index::slice(const std::string& text, std::size_t first, std::size_t last) const {
    std::size_t b0 = byte_offset(first);
    std::size_t b1 = byte_offset(last);
    if (b1 < b0) b1 = b0;
    return text.substr(b0, b1 - b0);
}

std::size_t utf8_char_count(const std::string& text) {
    std::size_t count = 0;
    std::size_t i = 0;
    while (i < text.size()) {
        i += std::min(utf8_seq_len(static_cast<unsigned char>(text[i])), text.size() - i);
        ++count;
    }
    return count;
}

std::size_t utf8_chars_in_prefix(const std::string& text, std::size_t byte_count) {
    byte_count = std::min(byte_count, text.size());
    std::size_t count = 0;
    std::size_t i = 0;
    while (i < byte_count) {
        std::size_t n = std::min(utf8_seq_len(static_cast<unsigned char>(text[i])),
                                 text.size() - i);
        if (i + n > byte_count) break;  // partial trailing sequence
        i += n;
        ++count;
    }
    return count;
}

std::string format_double(double v) {
    if (std::isinf(v)) return v > 0 ? "inf" : "-inf";
    if (std::isnan(v)) return "nan";
    char buf[64];
    // round-trippable shortest form
    auto res = std::to_chars(buf, buf + sizeof(buf), v);
    return std::string(buf, res.ptr);
}

std::string fnv1a_hex(const std::string& data) {
    std::uint64_t h = 0xcbf29ce484222325ULL;
    for (unsigned char c : data) {
        h ^= c;
        h *= 0x100000001b3ULL;
    }
    char buf[17];
    std::snprintf(buf, sizeof(buf), "%016llx", static_cast<unsigned long long>(h));
    return std::string(buf);
}

}  // namespace memext
