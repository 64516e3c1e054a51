#ifndef MEMEXT_LOGIT_MATH_HPP
#define MEMEXT_LOGIT_MATH_HPP

#include <cstdint>
#include <span>
#include <vector>

#include "memext/util.hpp"

namespace memext {

using TokenId = std::int32_t;

// Decoding scheme under audit: temperature plus top-k truncation with
// renormalization. top_k == 0 means no truncation.
struct DecodingConfig {
    double temperature = 1.0;
    std::int32_t top_k = 0;  // 0 = unlimited
    bool prepend_bos = true;

    bool unlimited_k() const { return top_k <= 0; }
    void validate() const;
};

// One position of the next-token distribution, sparsified to the top-M
// raw logits plus the fields needed to score an arbitrary target exactly.
//
// entries are sorted by raw logit descending, token id ascending on ties,
// so entries[j] has 1-based full-vocabulary rank j+1. target_rank uses the
// same tie-break. logsumexp_full is log(sum(exp(logit / T))) over the full
// vocabulary at the temperature the request was scored with; it is only
// consulted when top_k is unlimited.
struct LogitRow {
    std::vector<std::pair<TokenId, double>> entries;
    TokenId target_token = 0;
    double target_logit = 0.0;
    std::int32_t target_rank = 0;
    double logsumexp_full = 0.0;
};

// Log-probability of the exact target suffix under a decoding scheme.
// prob may underflow to exactly 0 while logprob stays finite; impossible
// is true only when some suffix token falls outside the top-k (logprob
// is then -inf).
struct SuffixScore {
    double logprob = 0.0;
    double prob = 1.0;
    bool impossible = false;
    std::vector<double> per_token_logprobs;
};

// Conditional log-probability of row.target_token under cfg: raw logits
// divided by T, truncated to the k highest (ties to the lower token id),
// renormalized over the kept set. Returns -inf when target_rank > k.
//
// Requires row.entries to hold at least cfg.top_k entries when k is
// finite ("insufficient top-M width" otherwise), and row.logsumexp_full
// to have been produced at cfg.temperature when k is unlimited.
double conditional_token_logprob(const LogitRow& row, const DecodingConfig& cfg);

// Sum of per-token conditional log-probabilities over suffix positions.
// Any -inf term short-circuits the walk and marks the score impossible.
// Empty input is the degenerate suffix: logprob 0, prob 1.
SuffixScore sequence_score(std::span<const LogitRow> rows, const DecodingConfig& cfg);

// Greedy-decoding special case (requires cfg.top_k == 1): prob is 1 when
// every target is the argmax of its row, 0 otherwise.
SuffixScore greedy_match_score(std::span<const LogitRow> rows, const DecodingConfig& cfg);

}  // namespace memext

#endif
