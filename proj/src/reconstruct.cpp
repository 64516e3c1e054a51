#include "memext/reconstruct.hpp"

#include <algorithm>
#include <cctype>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <stdexcept>

#include <nlohmann/json.hpp>

#include "memext/beam.hpp"

namespace memext {

using nlohmann::json;

std::vector<std::string> default_chapter_words() {
    return {"One",     "Two",     "Three",    "Four",    "Five",    "Six",
            "Seven",   "Eight",   "Nine",     "Ten",     "Eleven",  "Twelve",
            "Thirteen", "Fourteen", "Fifteen", "Sixteen", "Seventeen"};
}

void ReconstructionConfig::validate() const {
    if (step_tokens < 1) throw std::invalid_argument("ReconstructionConfig: step_tokens must be >= 1");
    if (step_tokens >= max_context_tokens) {
        throw std::invalid_argument("ReconstructionConfig: step_tokens must be < max_context_tokens");
    }
    if (beams < 1) throw std::invalid_argument("ReconstructionConfig: beams must be >= 1");
    decoding.validate();
}

std::vector<TokenId> handle_eos(std::vector<TokenId> chunk, ChapterState& state,
                                const Provider& provider, const ReconstructionConfig& cfg) {
    const TokenizerInfo info = provider.tokenizer_info();
    const bool has_eos = info.eos_token &&
        std::find(chunk.begin(), chunk.end(), *info.eos_token) != chunk.end();
    if (!has_eos) {
        state.tokens_since_last_eos += static_cast<std::int64_t>(chunk.size());
        return chunk;
    }

    if (state.tokens_since_last_eos >= cfg.missed_chapter_gap) {
        // long silence since the last EOS: a chapter break went unvoiced
        ++state.chapter_count;
    }
    chunk.erase(std::remove(chunk.begin(), chunk.end(), *info.eos_token), chunk.end());
    ++state.chapter_count;

    std::string insert = "\n";
    if (state.chapter_count >= 1 &&
        static_cast<std::size_t>(state.chapter_count) <= cfg.chapter_words.size()) {
        std::string header = "\n\nChapter " + cfg.chapter_words[state.chapter_count - 1] + "\n";
        for (char& c : header) c = static_cast<char>(std::toupper(static_cast<unsigned char>(c)));
        insert = std::move(header);
    }
    std::vector<TokenId> header_tokens = provider.tokenize(insert);
    chunk.insert(chunk.end(), header_tokens.begin(), header_tokens.end());
    state.tokens_since_last_eos = 0;
    return chunk;
}

namespace {

void run_loop(ReconstructionLog& log, const Provider& provider, const ReconstructionConfig& cfg,
              const std::function<void(const ReconstructionLog&)>& on_step) {
    const TokenizerInfo info = provider.tokenizer_info();
    const std::size_t window_tokens =
        static_cast<std::size_t>(cfg.max_context_tokens - cfg.step_tokens);

    while (static_cast<std::int64_t>(log.token_ids.size()) < cfg.max_story_tokens) {
        const std::size_t begin =
            log.token_ids.size() > window_tokens ? log.token_ids.size() - window_tokens : 0;
        std::vector<TokenId> window(log.token_ids.begin() + static_cast<std::ptrdiff_t>(begin),
                                    log.token_ids.end());

        std::vector<TokenId> context;
        if (cfg.decoding.prepend_bos && info.bos_token) context.push_back(*info.bos_token);
        context.insert(context.end(), window.begin(), window.end());

        std::vector<TokenId> chunk = generate_step(provider, context, cfg.beams,
                                                   cfg.step_tokens, cfg.decoding,
                                                   cfg.length_penalty);
        chunk = handle_eos(std::move(chunk), log.final_state, provider, cfg);

        GenerationStep step;
        step.generation = static_cast<std::int64_t>(log.steps.size()) + 1;
        step.prompt_text = provider.detokenize(window);
        step.generated_text = provider.detokenize(chunk);
        log.token_ids.insert(log.token_ids.end(), chunk.begin(), chunk.end());
        step.total_generated_tokens = static_cast<std::int64_t>(log.token_ids.size());
        log.assembled_text += step.generated_text;
        log.steps.push_back(std::move(step));

        if (on_step) on_step(log);
    }
}

void write_file_atomic(const std::filesystem::path& path, const std::string& content) {
    std::filesystem::path tmp = path;
    tmp += ".tmp";
    {
        std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
        if (!out) throw std::runtime_error("cannot write " + tmp.string());
        out << content;
    }
    std::filesystem::rename(tmp, path);
}

std::string read_file(const std::filesystem::path& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw std::runtime_error("cannot read " + path.string());
    std::ostringstream buf;
    buf << in.rdbuf();
    return buf.str();
}

}  // namespace

ReconstructionLog reconstruct(const std::string& seed_text, const Provider& provider,
                              const ReconstructionConfig& cfg,
                              const std::function<void(const ReconstructionLog&)>& on_step) {
    cfg.validate();
    if (seed_text.empty()) throw std::invalid_argument("reconstruct: seed text is empty");

    ReconstructionLog log;
    log.seed_text = seed_text;
    log.token_ids = provider.tokenize(seed_text);
    if (log.token_ids.empty()) throw std::invalid_argument("reconstruct: seed tokenized to nothing");
    log.assembled_text = seed_text;
    run_loop(log, provider, cfg, on_step);
    return log;
}

ReconstructionLog resume(ReconstructionLog log, const Provider& provider,
                         const ReconstructionConfig& cfg,
                         const std::function<void(const ReconstructionLog&)>& on_step) {
    cfg.validate();
    run_loop(log, provider, cfg, on_step);
    return log;
}

void write_reconstruction_artifacts(const ReconstructionLog& log, const std::string& out_dir) {
    std::filesystem::create_directories(out_dir);
    std::filesystem::path dir(out_dir);

    json steps = json::array();
    for (const GenerationStep& step : log.steps) {
        steps.push_back(json{{"generation", step.generation},
                             {"prompt_text", step.prompt_text},
                             {"generated_text", step.generated_text},
                             {"total_generated_tokens", step.total_generated_tokens}});
    }
    write_file_atomic(dir / "generation_log.json", steps.dump(2));
    write_file_atomic(dir / "generated_ids.json", json(log.token_ids).dump());
    write_file_atomic(dir / "generated_story.txt", log.assembled_text);
    write_file_atomic(dir / "reconstruct_state.json",
                      json{{"seed_text", log.seed_text},
                           {"chapter_count", log.final_state.chapter_count},
                           {"tokens_since_last_eos", log.final_state.tokens_since_last_eos}}
                          .dump(2));
}

ReconstructionLog load_reconstruction_artifacts(const std::string& out_dir) {
    std::filesystem::path dir(out_dir);
    ReconstructionLog log;

    json state = json::parse(read_file(dir / "reconstruct_state.json"));
    log.seed_text = state.at("seed_text").get<std::string>();
    log.final_state.chapter_count = state.at("chapter_count").get<std::int32_t>();
    log.final_state.tokens_since_last_eos = state.at("tokens_since_last_eos").get<std::int64_t>();

    log.token_ids = json::parse(read_file(dir / "generated_ids.json")).get<std::vector<TokenId>>();

    log.assembled_text = log.seed_text;
    for (const json& jstep : json::parse(read_file(dir / "generation_log.json"))) {
        GenerationStep step;
        step.generation = jstep.at("generation").get<std::int64_t>();
        step.prompt_text = jstep.at("prompt_text").get<std::string>();
        step.generated_text = jstep.at("generated_text").get<std::string>();
        step.total_generated_tokens = jstep.at("total_generated_tokens").get<std::int64_t>();
        log.assembled_text += step.generated_text;
        log.steps.push_back(std::move(step));
    }
    return log;
}

}  // namespace memext
