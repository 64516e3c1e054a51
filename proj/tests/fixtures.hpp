#ifndef MEMEXT_TESTS_FIXTURES_HPP
#define MEMEXT_TESTS_FIXTURES_HPP

// Shared fixtures and independent oracles. Everything here recomputes the
// quantities under test from first principles (dense softmax, explicit
// chain rule, brute-force counting) so library changes can't silently
// re-derive their own expected values.

#include <algorithm>
#include <cmath>
#include <map>
#include <numeric>
#include <string>
#include <vector>

#include "memext/logit_math.hpp"
#include "memext/reference_model.hpp"
#include "memext/util.hpp"

namespace fixtures {

using memext::DecodingConfig;
using memext::LogitRow;
using memext::ReferenceModel;
using memext::TokenId;

// Dense distribution under temperature + top-k, computed the obvious way:
// softmax(logits / T), sort by (prob desc, id asc), zero everything past
// rank k, renormalize by division.
inline std::vector<double> dense_topk_distribution(const std::vector<double>& logits,
                                                   const DecodingConfig& cfg) {
    const std::size_t vocab = logits.size();
    std::vector<double> probs(vocab);
    double max_logit = *std::max_element(logits.begin(), logits.end());
    double denom = 0.0;
    for (std::size_t i = 0; i < vocab; ++i) {
        probs[i] = std::exp((logits[i] - max_logit) / cfg.temperature);
        denom += probs[i];
    }
    for (double& p : probs) p /= denom;

    if (!cfg.unlimited_k() && static_cast<std::size_t>(cfg.top_k) < vocab) {
        std::vector<std::size_t> order(vocab);
        std::iota(order.begin(), order.end(), 0);
        std::sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) {
            if (probs[a] != probs[b]) return probs[a] > probs[b];
            return a < b;
        });
        std::vector<double> kept(vocab, 0.0);
        double kept_mass = 0.0;
        for (std::size_t r = 0; r < static_cast<std::size_t>(cfg.top_k); ++r) {
            kept[order[r]] = probs[order[r]];
            kept_mass += probs[order[r]];
        }
        for (double& p : kept) p /= kept_mass;
        probs = std::move(kept);
    }
    return probs;
}

// Exact P(suffix | prefix) under cfg by walking the chain rule densely
// over the model's raw logits.
inline double dense_chain_prob(const ReferenceModel& model, const std::vector<TokenId>& tokens,
                               std::int32_t suffix_start, const DecodingConfig& cfg) {
    double prob = 1.0;
    std::vector<TokenId> context(tokens.begin(), tokens.begin() + (suffix_start - 1));
    for (std::size_t pos = static_cast<std::size_t>(suffix_start) - 1; pos < tokens.size(); ++pos) {
        std::vector<double> dist = dense_topk_distribution(model.logits_after(context), cfg);
        prob *= dist[static_cast<std::size_t>(tokens[pos])];
        context.push_back(tokens[pos]);
    }
    return prob;
}

// LogitRow with raw logits chosen so the dense softmax equals `probs`
// exactly (logit = log p); target fields filled per the rank rules.
inline LogitRow row_from_probs(const std::vector<double>& probs, TokenId target,
                               std::int32_t top_m = 0, double temperature = 1.0) {
    std::vector<double> logits(probs.size());
    for (std::size_t i = 0; i < probs.size(); ++i) logits[i] = std::log(probs[i]);
    if (top_m <= 0) top_m = static_cast<std::int32_t>(probs.size());
    return memext::make_logit_row(logits, target, top_m, temperature);
}

// Chain model over `vocab` tokens: context token c puts probability
// main_prob[c] on token (c+1) % vocab and spreads the rest uniformly.
// Suffix probabilities are then exact products of the chosen per-step
// probabilities.
inline ReferenceModel chain_model(std::int32_t vocab, const std::vector<double>& main_prob) {
    ReferenceModel model(vocab, 2, 1e-9);
    for (std::int32_t c = 0; c < static_cast<std::int32_t>(main_prob.size()); ++c) {
        double p = main_prob[static_cast<std::size_t>(c)];
        std::vector<double> weights(static_cast<std::size_t>(vocab),
                                    (1.0 - p) / static_cast<double>(vocab - 1));
        weights[static_cast<std::size_t>((c + 1) % vocab)] = p;
        // scale so weights are the probabilities themselves up to the
        // (negligible) alpha floor
        for (double& w : weights) w *= 1e9;
        model.set_row({c}, weights);
    }
    return model;
}

}  // namespace fixtures

#endif
