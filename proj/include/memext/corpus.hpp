#ifndef MEMEXT_CORPUS_HPP
#define MEMEXT_CORPUS_HPP

#include <cstdint>
#include <functional>
#include <string>
#include <vector>

#include "memext/provider.hpp"

namespace memext {

// One document of the corpus. char_len counts Unicode scalar values, as
// does every other character quantity in the toolkit.
struct BookDocument {
    std::string doc_id;
    std::string text;
    std::size_t char_len = 0;

    static BookDocument from_text(std::string doc_id, std::string text);
};

// One scoring unit: a fixed-length token window with its prefix/suffix
// split and the character span of the source text it consumed.
struct Example {
    std::string doc_id;
    std::size_t char_start = 0;        // first character consumed
    std::size_t char_end = 0;          // one past the last character consumed
    std::size_t suffix_char_start = 0; // first character the suffix detokenizes to
    std::vector<TokenId> tokens;
    std::int32_t prefix_len = 0;
    std::int32_t suffix_len = 0;
};

struct SamplerConfig {
    std::size_t chunk_chars = 800;
    std::size_t stride_chars = 10;
    std::int32_t example_tokens = 100;
    std::int32_t prefix_tokens = 50;

    void validate() const;
};

struct SamplerStats {
    std::size_t offsets_attempted = 0;
    std::size_t skipped_short = 0;  // chunks that tokenized to fewer than example_tokens
    std::size_t emitted = 0;
};

// Sliding-window sampling: at each stride offset, tokenize a chunk of
// chunk_chars characters, keep the first example_tokens tokens, split at
// prefix_tokens. Chunks that tokenize short are skipped and counted.
// Examples arrive in ascending char_start order.
SamplerStats slide_windows(const BookDocument& doc, const Provider& tokenizer,
                           const SamplerConfig& cfg,
                           const std::function<void(Example&&)>& sink);

std::vector<Example> slide_windows(const BookDocument& doc, const Provider& tokenizer,
                                   const SamplerConfig& cfg, SamplerStats* stats = nullptr);

// Random sampling: n_docs documents without replacement, then per_doc
// non-overlapping examples per document, each starting on a U+0020
// character. Deterministic under rng_seed. Documents too short to host
// per_doc examples yield fewer (reflected in stats.emitted).
std::vector<Example> sample_random_examples(const std::vector<BookDocument>& corpus,
                                            const Provider& tokenizer, std::size_t n_docs,
                                            std::size_t per_doc, const SamplerConfig& cfg,
                                            std::uint64_t rng_seed,
                                            SamplerStats* stats = nullptr);

// Corpus manifest: one document per line, "path<TAB>doc_id" (doc_id
// defaults to the file stem). '#' lines and blank lines are ignored.
// Relative paths resolve against the manifest's directory.
std::vector<BookDocument> load_manifest(const std::string& manifest_path);

BookDocument load_document(const std::string& path, std::string doc_id);

}  // namespace memext

#endif
