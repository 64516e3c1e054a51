#include "memext/beam.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace memext {

namespace {

struct Hypothesis {
    std::vector<TokenId> tokens;  // generated tokens only
    double cum_logprob = 0.0;
};

struct Candidate {
    double cum_logprob;
    TokenId token;
    std::size_t parent;

    bool operator<(const Candidate& other) const {
        if (cum_logprob != other.cum_logprob) return cum_logprob > other.cum_logprob;
        if (token != other.token) return token < other.token;
        return parent < other.parent;
    }
};

double final_score(const Hypothesis& hyp, double length_penalty) {
    return hyp.cum_logprob / std::pow(static_cast<double>(hyp.tokens.size()), length_penalty);
}

}  // namespace

std::vector<TokenId> generate_step(const Provider& provider,
                                   const std::vector<TokenId>& context,
                                   std::int32_t width, std::int32_t new_tokens,
                                   const DecodingConfig& cfg, double length_penalty) {
    if (width < 1) throw std::invalid_argument("generate_step: width must be >= 1");
    if (new_tokens < 1) throw std::invalid_argument("generate_step: new_tokens must be >= 1");
    cfg.validate();

    const TokenizerInfo info = provider.tokenizer_info();
    if (width > info.vocab_size) {
        throw std::invalid_argument("generate_step: width exceeds vocabulary size");
    }
    const std::int32_t top_m = std::max(width, cfg.unlimited_k() ? width : cfg.top_k);

    std::vector<Hypothesis> active{Hypothesis{}};
    std::vector<Hypothesis> finished;

    // The pure argmax chain rides along as a protected hypothesis so the
    // final answer can never score below greedy decoding. The beam can
    // prune the greedy path mid-way and still end up worse; keeping the
    // chain in the final comparison closes that hole.
    Hypothesis greedy;
    bool greedy_alive = true;

    std::vector<TokenId> extended;
    for (std::int32_t step = 0; step < new_tokens && !active.empty(); ++step) {
        std::vector<Candidate> candidates;
        candidates.reserve(active.size() * static_cast<std::size_t>(width));
        for (std::size_t parent = 0; parent < active.size(); ++parent) {
            extended = context;
            extended.insert(extended.end(), active[parent].tokens.begin(),
                            active[parent].tokens.end());
            LogitRow row = next_token_row(provider, extended, cfg.temperature, top_m);

            const std::size_t fan_out =
                std::min<std::size_t>(static_cast<std::size_t>(width), row.entries.size());
            for (std::size_t j = 0; j < fan_out; ++j) {
                // entries are rank-ordered, so entry j is the rank-(j+1)
                // token; reuse the exact scoring path so beam probabilities
                // match audited ones bit for bit
                LogitRow probe = row;
                probe.target_token = row.entries[j].first;
                probe.target_logit = row.entries[j].second;
                probe.target_rank = static_cast<std::int32_t>(j + 1);
                double lp = conditional_token_logprob(probe, cfg);
                if (std::isinf(lp)) continue;  // outside top-k, unreachable
                candidates.push_back(Candidate{active[parent].cum_logprob + lp,
                                               row.entries[j].first, parent});
            }
        }
        if (greedy_alive) {
            extended = context;
            extended.insert(extended.end(), greedy.tokens.begin(), greedy.tokens.end());
            LogitRow row = next_token_row(provider, extended, cfg.temperature, top_m);
            LogitRow probe = row;
            probe.target_token = row.entries[0].first;
            probe.target_logit = row.entries[0].second;
            probe.target_rank = 1;
            greedy.cum_logprob += conditional_token_logprob(probe, cfg);
            greedy.tokens.push_back(row.entries[0].first);
            if (info.eos_token && greedy.tokens.back() == *info.eos_token) {
                finished.push_back(greedy);
                greedy_alive = false;
            }
        }

        if (candidates.empty()) break;  // every continuation truncated away

        std::sort(candidates.begin(), candidates.end());
        const std::size_t keep = std::min<std::size_t>(static_cast<std::size_t>(width),
                                                       candidates.size());

        std::vector<Hypothesis> next;
        next.reserve(keep);
        for (std::size_t i = 0; i < keep; ++i) {
            const Candidate& c = candidates[i];
            Hypothesis hyp;
            hyp.tokens = active[c.parent].tokens;
            hyp.tokens.push_back(c.token);
            hyp.cum_logprob = c.cum_logprob;
            if (info.eos_token && c.token == *info.eos_token) {
                finished.push_back(std::move(hyp));
            } else {
                next.push_back(std::move(hyp));
            }
        }
        active = std::move(next);
    }
    for (Hypothesis& hyp : active) finished.push_back(std::move(hyp));
    if (greedy_alive && !greedy.tokens.empty()) finished.push_back(std::move(greedy));
    if (finished.empty()) throw BackendError("generate_step: no viable hypothesis");

    const Hypothesis* best = nullptr;
    double best_score = 0.0;
    for (const Hypothesis& hyp : finished) {
        double score = final_score(hyp, length_penalty);
        if (!best || score > best_score ||
            (score == best_score && (hyp.cum_logprob > best->cum_logprob ||
                                     (hyp.cum_logprob == best->cum_logprob &&
                                      hyp.tokens < best->tokens)))) {
            best = &hyp;
            best_score = score;
        }
    }
    return best->tokens;
}

}  // namespace memext
