#include "memext/corpus.hpp"

#include <algorithm>
#include <filesystem>
#include <fstream>
#include <optional>
#include <sstream>

#include "memext/util.hpp"

namespace memext {

BookDocument BookDocument::from_text(std::string doc_id, std::string text) {
    if (doc_id.empty()) throw std::invalid_argument("BookDocument: doc_id must be non-empty");
    BookDocument doc;
    doc.doc_id = std::move(doc_id);
    doc.char_len = utf8_char_count(text);
    doc.text = std::move(text);
    return doc;
}

void SamplerConfig::validate() const {
    if (stride_chars < 1) throw std::invalid_argument("SamplerConfig: stride_chars must be >= 1");
    if (chunk_chars < 1) throw std::invalid_argument("SamplerConfig: chunk_chars must be >= 1");
    if (example_tokens < 1) throw std::invalid_argument("SamplerConfig: example_tokens must be >= 1");
    if (prefix_tokens < 1 || prefix_tokens >= example_tokens) {
        throw std::invalid_argument("SamplerConfig: need 1 <= prefix_tokens < example_tokens");
    }
}

namespace {

// Build the example at a single character offset, or nothing when the
// chunk tokenizes to fewer than example_tokens tokens.
std::optional<Example> example_at(const BookDocument& doc, const Utf8Index& index,
                                  std::size_t offset, const Provider& tokenizer,
                                  const SamplerConfig& cfg) {
    const std::size_t chunk_end = std::min(offset + cfg.chunk_chars, doc.char_len);
    std::string chunk = index.slice(doc.text, offset, chunk_end);

    std::vector<TokenId> tokens;
    try {
        tokens = tokenizer.tokenize(chunk);
    } catch (const std::exception& e) {
        throw BackendError("tokenize failed for doc '" + doc.doc_id + "' at char " +
                           std::to_string(offset) + ": " + e.what());
    }
    if (tokens.size() < static_cast<std::size_t>(cfg.example_tokens)) return std::nullopt;
    tokens.resize(static_cast<std::size_t>(cfg.example_tokens));

    // Character spans come from detokenized lengths, so they stay
    // consistent with whatever the backend's tokenizer does.
    std::string consumed = tokenizer.detokenize(tokens);
    std::size_t consumed_chars = utf8_chars_in_prefix(consumed, consumed.size());
    if (consumed_chars == 0) return std::nullopt;

    std::vector<TokenId> prefix(tokens.begin(), tokens.begin() + cfg.prefix_tokens);
    std::string prefix_text = tokenizer.detokenize(prefix);
    std::size_t prefix_chars = utf8_chars_in_prefix(prefix_text, prefix_text.size());

    Example ex;
    ex.doc_id = doc.doc_id;
    ex.char_start = offset;
    ex.char_end = offset + consumed_chars;
    ex.suffix_char_start = std::min(offset + prefix_chars, ex.char_end);
    ex.tokens = std::move(tokens);
    ex.prefix_len = cfg.prefix_tokens;
    ex.suffix_len = cfg.example_tokens - cfg.prefix_tokens;
    return ex;
}

}  // namespace

SamplerStats slide_windows(const BookDocument& doc, const Provider& tokenizer,
                           const SamplerConfig& cfg,
                           const std::function<void(Example&&)>& sink) {
    cfg.validate();
    SamplerStats stats;
    if (doc.char_len == 0) return stats;

    Utf8Index index(doc.text);
    for (std::size_t offset = 0; offset < doc.char_len; offset += cfg.stride_chars) {
        ++stats.offsets_attempted;
        auto ex = example_at(doc, index, offset, tokenizer, cfg);
        if (!ex) {
            ++stats.skipped_short;
            continue;
        }
        ++stats.emitted;
        sink(std::move(*ex));
    }
    return stats;
}

std::vector<Example> slide_windows(const BookDocument& doc, const Provider& tokenizer,
                                   const SamplerConfig& cfg, SamplerStats* stats) {
    std::vector<Example> out;
    SamplerStats s = slide_windows(doc, tokenizer, cfg,
                                   [&](Example&& ex) { out.push_back(std::move(ex)); });
    if (stats) *stats = s;
    return out;
}

std::vector<Example> sample_random_examples(const std::vector<BookDocument>& corpus,
                                            const Provider& tokenizer, std::size_t n_docs,
                                            std::size_t per_doc, const SamplerConfig& cfg,
                                            std::uint64_t rng_seed, SamplerStats* stats) {
    cfg.validate();
    if (n_docs > corpus.size()) {
        throw std::invalid_argument("sample_random_examples: requested " +
                                    std::to_string(n_docs) + " documents from a corpus of " +
                                    std::to_string(corpus.size()));
    }
    SamplerStats local;
    std::vector<Example> out;
    if (per_doc == 0 || n_docs == 0) {
        if (stats) *stats = local;
        return out;
    }

    Rng rng(rng_seed);
    std::vector<std::size_t> doc_order(corpus.size());
    for (std::size_t i = 0; i < doc_order.size(); ++i) doc_order[i] = i;
    rng.shuffle(doc_order);
    doc_order.resize(n_docs);

    for (std::size_t doc_idx : doc_order) {
        const BookDocument& doc = corpus[doc_idx];
        Utf8Index index(doc.text);

        std::vector<std::size_t> candidates;
        for (std::size_t c = 0; c < doc.char_len; ++c) {
            std::size_t b = index.byte_offset(c);
            if (doc.text[b] == ' ') candidates.push_back(c);
        }
        rng.shuffle(candidates);

        std::vector<std::pair<std::size_t, std::size_t>> taken;
        for (std::size_t offset : candidates) {
            if (taken.size() >= per_doc) break;
            ++local.offsets_attempted;
            auto ex = example_at(doc, index, offset, tokenizer, cfg);
            if (!ex) {
                ++local.skipped_short;
                continue;
            }
            bool overlaps = std::any_of(taken.begin(), taken.end(), [&](const auto& iv) {
                return ex->char_start < iv.second && iv.first < ex->char_end;
            });
            if (overlaps) continue;
            taken.emplace_back(ex->char_start, ex->char_end);
            ++local.emitted;
            out.push_back(std::move(*ex));
        }
    }
    if (stats) *stats = local;
    return out;
}

BookDocument load_document(const std::string& path, std::string doc_id) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw std::runtime_error("cannot open document: " + path);
    std::ostringstream buf;
    buf << in.rdbuf();
    return BookDocument::from_text(std::move(doc_id), buf.str());
}

std::vector<BookDocument> load_manifest(const std::string& manifest_path) {
    std::ifstream in(manifest_path);
    if (!in) throw std::runtime_error("cannot open manifest: " + manifest_path);
    std::filesystem::path base = std::filesystem::path(manifest_path).parent_path();

    std::vector<BookDocument> corpus;
    std::string line;
    while (std::getline(in, line)) {
        if (!line.empty() && line.back() == '\r') line.pop_back();
        if (line.empty() || line[0] == '#') continue;
        std::string path_part = line;
        std::string id_part;
        if (auto tab = line.find('\t'); tab != std::string::npos) {
            path_part = line.substr(0, tab);
            id_part = line.substr(tab + 1);
        }
        std::filesystem::path p(path_part);
        if (p.is_relative()) p = base / p;
        if (id_part.empty()) id_part = p.stem().string();
        corpus.push_back(load_document(p.string(), id_part));
    }
    return corpus;
}

}  // namespace memext
