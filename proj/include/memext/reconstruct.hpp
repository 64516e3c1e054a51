#ifndef MEMEXT_RECONSTRUCT_HPP
#define MEMEXT_RECONSTRUCT_HPP

#include <cstdint>
#include <functional>
#include <string>
#include <vector>

#include "memext/provider.hpp"

namespace memext {

std::vector<std::string> default_chapter_words();  // "One" .. "Seventeen"

struct ReconstructionConfig {
    std::int32_t max_context_tokens = 3000;
    std::int32_t step_tokens = 50;
    std::int32_t beams = 8;
    double length_penalty = 1.2;
    std::int64_t max_story_tokens = 0;
    std::vector<std::string> chapter_words = default_chapter_words();
    std::int64_t missed_chapter_gap = 10000;
    DecodingConfig decoding;

    void validate() const;
};

// Chapter bookkeeping for EOS handling across generation steps.
struct ChapterState {
    std::int32_t chapter_count = 1;
    std::int64_t tokens_since_last_eos = 0;
};

struct GenerationStep {
    std::int64_t generation = 0;  // 1-based step index
    std::string prompt_text;
    std::string generated_text;
    std::int64_t total_generated_tokens = 0;
};

struct ReconstructionLog {
    std::string seed_text;
    std::vector<GenerationStep> steps;
    std::vector<TokenId> token_ids;  // seed + generated, EOS handling applied
    std::string assembled_text;      // seed + concatenated generated chunks
    ChapterState final_state;
};

// EOS handling for one generated chunk. If the chunk carries EOS tokens:
// when at least missed_chapter_gap tokens passed since the last EOS, the
// chapter counter advances once extra (a chapter break was missed); then
// all EOS tokens are stripped, the counter advances, and the tokens of
// "\n\nCHAPTER <WORD>\n" are appended (just "\n" once the word list runs
// out); the counter of tokens since the last EOS resets. Chunks without
// EOS only grow that counter.
std::vector<TokenId> handle_eos(std::vector<TokenId> chunk, ChapterState& state,
                                const Provider& provider, const ReconstructionConfig& cfg);

// Autoregressive document reconstruction from a seed prompt: repeatedly
// prompt with the last max_context_tokens - step_tokens tokens, beam-
// generate step_tokens more, apply EOS handling, append, and log, until
// the running total reaches max_story_tokens. on_step (optional) fires
// after each appended step, e.g. to flush artifacts.
ReconstructionLog reconstruct(const std::string& seed_text, const Provider& provider,
                              const ReconstructionConfig& cfg,
                              const std::function<void(const ReconstructionLog&)>& on_step = {});

// Listing-style artifacts: generation_log.json, generated_ids.json,
// generated_story.txt under out_dir.
void write_reconstruction_artifacts(const ReconstructionLog& log, const std::string& out_dir);

// Rebuild a ReconstructionLog from previously written artifacts so an
// interrupted run can continue.
ReconstructionLog load_reconstruction_artifacts(const std::string& out_dir);

// Continue a loaded run until max_story_tokens.
ReconstructionLog resume(ReconstructionLog log, const Provider& provider,
                         const ReconstructionConfig& cfg,
                         const std::function<void(const ReconstructionLog&)>& on_step = {});

}  // namespace memext

#endif
