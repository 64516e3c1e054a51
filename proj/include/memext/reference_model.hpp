#ifndef MEMEXT_REFERENCE_MODEL_HPP
#define MEMEXT_REFERENCE_MODEL_HPP

#include <cstdint>
#include <memory>
#include <string>
#include <unordered_map>
#include <vector>

#include "memext/provider.hpp"

namespace memext {

// Byte-level tokenizer: token ids 0..255 are the UTF-8 bytes, 256 is BOS,
// 257 is EOS. detokenize drops the special ids, so round-trips hold for
// any byte string.
class ByteTokenizer {
public:
    static constexpr TokenId kBos = 256;
    static constexpr TokenId kEos = 257;
    static constexpr std::int32_t kVocabSize = 258;

    static TokenizerInfo info() {
        return TokenizerInfo{kVocabSize, kBos, kEos};
    }
    static std::vector<TokenId> tokenize(const std::string& text);
    static std::string detokenize(const std::vector<TokenId>& tokens);
};

// Add-alpha smoothed n-gram model over token ids. Conditions on the last
// order-1 tokens (fewer near the start of a sequence); unseen contexts
// fall back to the uniform smoothed row. Immutable once built, so it can
// be scored from any number of threads.
class ReferenceModel {
public:
    ReferenceModel(std::int32_t vocab_size, int order, double alpha = 1e-6);

    std::int32_t vocab_size() const { return vocab_size_; }
    int order() const { return order_; }
    double alpha() const { return alpha_; }

    // Accumulate n-gram counts from a training sequence.
    void train(const std::vector<TokenId>& sequence);

    // Pin a context's weight row directly (weights are clamped up to
    // alpha, then treated like accumulated counts). For building fixtures
    // with exact probabilities.
    void set_row(const std::vector<TokenId>& context, std::vector<double> weights);

    // Raw logits (log smoothed weights) for the token following `context`;
    // only the last order-1 entries of context are consulted.
    std::vector<double> logits_after(const std::vector<TokenId>& context) const;

    // Exact conditional probability P(next | context) at T=1, no top-k.
    double conditional_prob(const std::vector<TokenId>& context, TokenId next) const;

private:
    const std::vector<double>* find_row(const std::vector<TokenId>& context) const;
    static std::string key_of(const TokenId* begin, const TokenId* end);

    std::int32_t vocab_size_;
    int order_;
    double alpha_;
    std::unordered_map<std::string, std::vector<double>> rows_;  // context -> weights
};

// In-process provider: byte tokenizer plus a reference model. The model's
// vocabulary may be smaller than the tokenizer's when it is used purely
// on token ids (fixture models never touch text).
class ReferenceProvider : public Provider {
public:
    explicit ReferenceProvider(std::shared_ptr<const ReferenceModel> model);

    TokenizerInfo tokenizer_info() const override;
    std::vector<TokenId> tokenize(const std::string& text) const override;
    std::string detokenize(const std::vector<TokenId>& tokens) const override;
    std::vector<LogitRow> score_positions(const ScoreRequest& req) const override;

    const ReferenceModel& model() const { return *model_; }

private:
    std::shared_ptr<const ReferenceModel> model_;
};

// LogitRow for a dense logit vector: top-M entries sorted by (logit desc,
// id asc), full-vocabulary rank of the target under the same order, and
// the full-vocabulary logsumexp at the given temperature.
LogitRow make_logit_row(const std::vector<double>& logits, TokenId target,
                        std::int32_t top_m, double temperature);

}  // namespace memext

#endif
