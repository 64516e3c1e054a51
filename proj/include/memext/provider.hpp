#ifndef MEMEXT_PROVIDER_HPP
#define MEMEXT_PROVIDER_HPP

#include <cstdint>
#include <memory>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include "memext/logit_math.hpp"

namespace memext {

struct TokenizerInfo {
    std::int32_t vocab_size = 0;
    std::optional<TokenId> bos_token;
    std::optional<TokenId> eos_token;
};

// One scoring request: a token sequence with a 1-based index of the first
// suffix position. The provider answers with one LogitRow per suffix
// position; row i describes the next-token distribution after the first
// suffix_start-1+i tokens, with tokens[suffix_start-1+i] (0-based) as the
// target. The caller is responsible for any BOS prepending.
struct ScoreRequest {
    std::vector<TokenId> tokens;
    std::int32_t suffix_start = 1;  // 1-based, <= tokens.size()
    double temperature = 1.0;
    std::int32_t top_m = 128;

    void validate() const {
        if (tokens.empty() || suffix_start < 1 ||
            static_cast<std::size_t>(suffix_start) > tokens.size()) {
            throw std::invalid_argument("ScoreRequest: suffix_start out of range");
        }
        if (top_m < 1) throw std::invalid_argument("ScoreRequest: top_m must be >= 1");
        if (!(temperature > 0.0)) throw std::invalid_argument("ScoreRequest: temperature must be > 0");
    }
};

struct BackendError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

// The model behind the audit: tokenization plus per-position logit
// scoring. Implementations must tolerate concurrent calls.
class Provider {
public:
    virtual ~Provider() = default;

    virtual TokenizerInfo tokenizer_info() const = 0;
    virtual std::vector<TokenId> tokenize(const std::string& text) const = 0;
    virtual std::string detokenize(const std::vector<TokenId>& tokens) const = 0;
    virtual std::vector<LogitRow> score_positions(const ScoreRequest& req) const = 0;
};

// Distribution over the token that would follow `context`: a single
// LogitRow whose target fields are meaningless (a placeholder target is
// appended to fit the scoring interface). Used by the beam-search driver.
LogitRow next_token_row(const Provider& provider, const std::vector<TokenId>& context,
                        double temperature, std::int32_t top_m);

}  // namespace memext

#endif
