#ifndef MEMEXT_BEAM_HPP
#define MEMEXT_BEAM_HPP

#include <cstdint>
#include <vector>

#include "memext/provider.hpp"

namespace memext {

// Deterministic beam search over the provider's next-token distributions.
//
// Maintains `width` hypotheses ranked by cumulative conditional
// log-probability under cfg. Each step expands every live hypothesis with
// its top-`width` continuations; candidate ties break by higher
// cumulative log-probability, then lower token id, then lower parent
// index. A hypothesis that emits EOS stops extending (the EOS stays in
// its token list). Final comparison divides cumulative log-probability by
// length^length_penalty, length being the number of generated tokens.
//
// Returns the winning hypothesis's new tokens; at most new_tokens of
// them, fewer when the winner finished on EOS early.
std::vector<TokenId> generate_step(const Provider& provider,
                                   const std::vector<TokenId>& context,
                                   std::int32_t width, std::int32_t new_tokens,
                                   const DecodingConfig& cfg, double length_penalty);

}  // namespace memext

#endif
