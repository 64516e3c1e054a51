#ifndef MEMEXT_ANALYSIS_HPP
#define MEMEXT_ANALYSIS_HPP

#include <map>
#include <span>
#include <string>
#include <vector>

#include "memext/corpus.hpp"
#include "memext/logit_math.hpp"

namespace memext {

// Example identity plus its suffix score. The full character interval is
// [char_start, char_end); the interval the suffix detokenizes to is
// [suffix_char_start, char_end).
struct ScoredExample {
    std::string doc_id;
    std::size_t char_start = 0;
    std::size_t char_end = 0;
    std::size_t suffix_char_start = 0;
    double prob = 0.0;
    double logprob = kNegInf;
    bool impossible = true;
};

// Maximal merged character interval where example probabilities reach the
// merge threshold.
struct MemorizedSpan {
    std::string doc_id;
    std::size_t char_start = 0;
    std::size_t char_end = 0;
    double max_prob = 0.0;
    std::size_t example_count = 0;
};

// Per-character maxima of extraction probability, run-length encoded:
// runs[i].second holds from character runs[i].first up to the next run
// boundary (or char_len).
struct HeatmapSeries {
    std::string doc_id;
    std::size_t char_len = 0;
    std::vector<std::pair<std::size_t, double>> runs;

    double value_at(std::size_t char_pos) const;
};

// Keep scores with prob >= threshold and union their full example
// intervals; touching intervals (end == start) merge. Output is sorted
// and pairwise disjoint, each span carrying the max probability and the
// number of contributing examples. Input order does not matter.
std::vector<MemorizedSpan> merge_spans(std::span<const ScoredExample> scores, double threshold);

// Fraction of the document's characters inside the (disjoint, in-bounds)
// spans.
double coverage(std::span<const MemorizedSpan> spans, const BookDocument& doc);

// Highest probability over all examples whose suffix interval covers each
// character; characters under no suffix read 0.
HeatmapSeries heatmap(std::span<const ScoredExample> scores, const BookDocument& doc);

// merge_spans + coverage at each threshold; antitone in the threshold.
std::map<double, double> coverage_report(std::span<const ScoredExample> scores,
                                         const BookDocument& doc,
                                         std::span<const double> thresholds);

// CSV with header char_pos,max_prob, one row per run boundary.
std::string heatmap_csv(const HeatmapSeries& series);

}  // namespace memext

#endif
