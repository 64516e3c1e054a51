#ifndef MEMEXT_TEXT_COMPARE_HPP
#define MEMEXT_TEXT_COMPARE_HPP

#include <cstddef>
#include <span>
#include <string>
#include <vector>

namespace memext {

// Minimal text rewrites applied before similarity scoring.
struct NormalizationRules {
    bool strip_underscores = true;
    bool unify_ellipses = true;
};

// Remove underscores and/or rewrite spaced ellipses (". . .") to "...".
// Ellipsis rewriting runs to a fixed point, so the result is idempotent.
std::string normalize(const std::string& text, const NormalizationRules& rules);

// Whitespace-delimited words.
std::vector<std::string> split_words(const std::string& text);

// Sentences end after '.', '!' or '?' followed by whitespace (or end of
// text). Leading/trailing whitespace of each sentence is trimmed.
std::vector<std::string> split_sentences(const std::string& text);

// One maximal matching block between two unit sequences.
struct MatchBlock {
    std::size_t a_start = 0;
    std::size_t b_start = 0;
    std::size_t length = 0;
};

// Recursive longest-contiguous-matching-block decomposition over unit
// sequences (Ratcliff/Obershelp). Ties pick the leftmost block in the
// first sequence, then in the second.
std::vector<MatchBlock> gestalt_blocks(std::span<const std::string> a,
                                       std::span<const std::string> b);

// 2M / (|a| + |b|) where M is the total matched unit count; two empty
// sequences compare as 1.
double gestalt_ratio(std::span<const std::string> a, std::span<const std::string> b);

// Convenience overloads treating each character as a unit.
std::vector<MatchBlock> gestalt_blocks(const std::string& a, const std::string& b);
double gestalt_ratio(const std::string& a, const std::string& b);

// Cosine similarity of the two documents' TF-IDF vectors over the
// two-document corpus: term frequency is the raw count, inverse document
// frequency is ln(2/df) plus 1 when smooth_idf is set (without smoothing
// two near-identical documents share only zero-weight terms).
double tfidf_cosine(const std::string& a, const std::string& b, bool smooth_idf = true);

struct SimilarityReport {
    double tfidf = 0.0;
    double word_ratio = 0.0;
    double sentence_ratio = 0.0;
};

SimilarityReport compare_documents(const std::string& a, const std::string& b,
                                   const NormalizationRules& rules);

}  // namespace memext

#endif
