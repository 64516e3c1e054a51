#ifndef MEMEXT_HTTP_PROVIDER_HPP
#define MEMEXT_HTTP_PROVIDER_HPP

#include <memory>
#include <string>

#include "memext/provider.hpp"

namespace memext {

// Provider backed by an inference server speaking the JSON protocol:
//
//   POST /v1/tokenize   {"text": s}                     -> {"tokens": [int]}
//   POST /v1/detokenize {"tokens": [int]}               -> {"text": s}
//   POST /v1/score      {"tokens", "suffix_start",
//                        "temperature", "top_m"}        -> {"rows": [...]}
//   POST /v1/info       {}                              -> {"vocab_size", "bos", "eos"}
//
// Errors arrive as non-2xx with {"error": string}. Each score request is
// a single round trip. Connections are kept per thread, so concurrent
// in-flight requests are fine.
class HttpProvider : public Provider {
public:
    explicit HttpProvider(std::string base_url);
    ~HttpProvider() override;

    TokenizerInfo tokenizer_info() const override;
    std::vector<TokenId> tokenize(const std::string& text) const override;
    std::string detokenize(const std::vector<TokenId>& tokens) const override;
    std::vector<LogitRow> score_positions(const ScoreRequest& req) const override;

private:
    struct Impl;
    std::unique_ptr<Impl> impl_;
};

}  // namespace memext

#endif
