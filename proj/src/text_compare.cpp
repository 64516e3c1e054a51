#include "memext/text_compare.hpp"

#include <algorithm>
#include <cctype>
#include <cmath>
#include <stdexcept>
#include <unordered_map>

namespace memext {

namespace {

// Replace every occurrence of `from` with `to`, repeating until nothing
// changes. Each pass shortens the text, so this terminates.
std::string replace_to_fixpoint(std::string text, const std::string& from, const std::string& to) {
    while (true) {
        std::string next;
        next.reserve(text.size());
        std::size_t pos = 0;
        bool changed = false;
        while (pos < text.size()) {
            std::size_t hit = text.find(from, pos);
            if (hit == std::string::npos) {
                next.append(text, pos, std::string::npos);
                break;
            }
            next.append(text, pos, hit - pos);
            next.append(to);
            pos = hit + from.size();
            changed = true;
        }
        if (!changed) return text;
        text = std::move(next);
    }
}

bool is_space(char c) {
    return std::isspace(static_cast<unsigned char>(c)) != 0;
}

}  // namespace

std::string normalize(const std::string& text, const NormalizationRules& rules) {
    std::string out;
    if (rules.strip_underscores) {
        out.reserve(text.size());
        for (char c : text) {
            if (c != '_') out.push_back(c);
        }
    } else {
        out = text;
    }
    if (rules.unify_ellipses) {
        // ". . ." -> "..." also maps the leading-space form " . . ."
        // to " ...", which is the shape the comparison targets
        out = replace_to_fixpoint(std::move(out), ". . .", "...");
    }
    return out;
}

std::vector<std::string> split_words(const std::string& text) {
    std::vector<std::string> words;
    std::size_t i = 0;
    while (i < text.size()) {
        while (i < text.size() && is_space(text[i])) ++i;
        std::size_t start = i;
        while (i < text.size() && !is_space(text[i])) ++i;
        if (i > start) words.push_back(text.substr(start, i - start));
    }
    return words;
}

std::vector<std::string> split_sentences(const std::string& text) {
    std::vector<std::string> sentences;
    std::size_t start = 0;
    for (std::size_t i = 0; i < text.size(); ++i) {
        char c = text[i];
        bool terminal = (c == '.' || c == '!' || c == '?');
        if (terminal && (i + 1 == text.size() || is_space(text[i + 1]))) {
            std::size_t first = start;
            while (first <= i && is_space(text[first])) ++first;
            if (first <= i) sentences.push_back(text.substr(first, i - first + 1));
            start = i + 1;
        }
    }
    std::size_t first = start;
    while (first < text.size() && is_space(text[first])) ++first;
    if (first < text.size()) {
        std::string tail = text.substr(first);
        while (!tail.empty() && is_space(tail.back())) tail.pop_back();
        if (!tail.empty()) sentences.push_back(std::move(tail));
    }
    return sentences;
}

namespace {

MatchBlock find_longest_match(std::span<const std::string> a, std::size_t alo, std::size_t ahi,
                              std::span<const std::string> b, std::size_t blo, std::size_t bhi,
                              const std::unordered_map<std::string, std::vector<std::size_t>>& b_index) {
    MatchBlock best{alo, blo, 0};
    // longest match ending at each b position for the previous a row
    std::unordered_map<std::size_t, std::size_t> row;
    for (std::size_t i = alo; i < ahi; ++i) {
        std::unordered_map<std::size_t, std::size_t> next_row;
        auto it = b_index.find(a[i]);
        if (it != b_index.end()) {
            for (std::size_t j : it->second) {
                if (j < blo) continue;
                if (j >= bhi) break;
                std::size_t k = 1;
                if (j > blo) {
                    auto prev = row.find(j - 1);
                    if (prev != row.end()) k = prev->second + 1;
                }
                next_row[j] = k;
                if (k > best.length) {
                    best = MatchBlock{i - k + 1, j - k + 1, k};
                }
            }
        }
        row = std::move(next_row);
    }
    return best;
}

void collect_blocks(std::span<const std::string> a, std::size_t alo, std::size_t ahi,
                    std::span<const std::string> b, std::size_t blo, std::size_t bhi,
                    const std::unordered_map<std::string, std::vector<std::size_t>>& b_index,
                    std::vector<MatchBlock>& out) {
    if (alo >= ahi || blo >= bhi) return;
    MatchBlock block = find_longest_match(a, alo, ahi, b, blo, bhi, b_index);
    if (block.length == 0) return;
    collect_blocks(a, alo, block.a_start, b, blo, block.b_start, b_index, out);
    out.push_back(block);
    collect_blocks(a, block.a_start + block.length, ahi, b, block.b_start + block.length, bhi,
                   b_index, out);
}

}  // namespace

std::vector<MatchBlock> gestalt_blocks(std::span<const std::string> a,
                                       std::span<const std::string> b) {
    std::unordered_map<std::string, std::vector<std::size_t>> b_index;
    for (std::size_t j = 0; j < b.size(); ++j) b_index[b[j]].push_back(j);
    std::vector<MatchBlock> blocks;
    collect_blocks(a, 0, a.size(), b, 0, b.size(), b_index, blocks);
    return blocks;
}

double gestalt_ratio(std::span<const std::string> a, std::span<const std::string> b) {
    if (a.empty() && b.empty()) return 1.0;
    std::size_t matched = 0;
    for (const MatchBlock& block : gestalt_blocks(a, b)) matched += block.length;
    return 2.0 * static_cast<double>(matched) / static_cast<double>(a.size() + b.size());
}

namespace {

std::vector<std::string> chars_of(const std::string& s) {
    std::vector<std::string> units;
    units.reserve(s.size());
    for (char c : s) units.emplace_back(1, c);
    return units;
}

}  // namespace

std::vector<MatchBlock> gestalt_blocks(const std::string& a, const std::string& b) {
    auto ua = chars_of(a);
    auto ub = chars_of(b);
    return gestalt_blocks(std::span<const std::string>(ua), std::span<const std::string>(ub));
}

double gestalt_ratio(const std::string& a, const std::string& b) {
    auto ua = chars_of(a);
    auto ub = chars_of(b);
    return gestalt_ratio(std::span<const std::string>(ua), std::span<const std::string>(ub));
}

double tfidf_cosine(const std::string& a, const std::string& b, bool smooth_idf) {
    std::vector<std::string> wa = split_words(a);
    std::vector<std::string> wb = split_words(b);
    if (wa.empty() || wb.empty()) {
        throw std::invalid_argument("tfidf_cosine: empty document after word segmentation");
    }

    std::unordered_map<std::string, std::pair<double, double>> counts;
    for (const std::string& w : wa) counts[w].first += 1.0;
    for (const std::string& w : wb) counts[w].second += 1.0;

    double dot = 0.0, norm_a = 0.0, norm_b = 0.0;
    for (const auto& [word, tf] : counts) {
        int df = (tf.first > 0 ? 1 : 0) + (tf.second > 0 ? 1 : 0);
        double idf = std::log(2.0 / df) + (smooth_idf ? 1.0 : 0.0);
        double va = tf.first * idf;
        double vb = tf.second * idf;
        dot += va * vb;
        norm_a += va * va;
        norm_b += vb * vb;
    }
    if (norm_a == 0.0 || norm_b == 0.0) return 0.0;
    return dot / (std::sqrt(norm_a) * std::sqrt(norm_b));
}

SimilarityReport compare_documents(const std::string& a, const std::string& b,
                                   const NormalizationRules& rules) {
    std::string na = normalize(a, rules);
    std::string nb = normalize(b, rules);

    SimilarityReport report;
    report.tfidf = tfidf_cosine(na, nb);

    std::vector<std::string> wa = split_words(na);
    std::vector<std::string> wb = split_words(nb);
    report.word_ratio = gestalt_ratio(std::span<const std::string>(wa),
                                      std::span<const std::string>(wb));

    std::vector<std::string> sa = split_sentences(na);
    std::vector<std::string> sb = split_sentences(nb);
    report.sentence_ratio = gestalt_ratio(std::span<const std::string>(sa),
                                          std::span<const std::string>(sb));
    return report;
}

}  // namespace memext
