#include "memext/logit_math.hpp"

#include <cmath>
#include <stdexcept>

namespace memext {

void DecodingConfig::validate() const {
    if (!(temperature > 0.0)) {
        throw std::invalid_argument("DecodingConfig: temperature must be > 0");
    }
}

double conditional_token_logprob(const LogitRow& row, const DecodingConfig& cfg) {
    cfg.validate();
    const double t = cfg.temperature;
    if (cfg.unlimited_k()) {
        return row.target_logit / t - row.logsumexp_full;
    }
    const std::size_t k = static_cast<std::size_t>(cfg.top_k);
    if (k > row.entries.size()) {
        throw std::invalid_argument("conditional_token_logprob: insufficient top-M width");
    }
    if (row.target_rank > cfg.top_k) {
        return kNegInf;
    }
    std::vector<double> kept(k);
    for (std::size_t j = 0; j < k; ++j) kept[j] = row.entries[j].second / t;
    return row.target_logit / t - logsumexp(kept);
}

SuffixScore sequence_score(std::span<const LogitRow> rows, const DecodingConfig& cfg) {
    SuffixScore score;
    score.per_token_logprobs.reserve(rows.size());
    for (const LogitRow& row : rows) {
        double lp = conditional_token_logprob(row, cfg);
        score.per_token_logprobs.push_back(lp);
        if (std::isinf(lp)) {
            score.logprob = kNegInf;
            score.prob = 0.0;
            score.impossible = true;
            return score;
        }
        score.logprob += lp;
    }
    score.prob = std::exp(score.logprob);  // may underflow to 0; logprob stays exact
    return score;
}

SuffixScore greedy_match_score(std::span<const LogitRow> rows, const DecodingConfig& cfg) {
    if (cfg.top_k != 1) {
        throw std::invalid_argument("greedy_match_score: cfg.top_k must be 1");
    }
    // With k=1 every per-token term is exactly 0 (target is the argmax,
    // renormalized to probability 1) or -inf, so the sum is already the
    // indicator the greedy metric wants.
    return sequence_score(rows, cfg);
}

}  // namespace memext
