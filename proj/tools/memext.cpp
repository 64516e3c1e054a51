// memext: measure verbatim memorization of text corpora in autoregressive
// language models via probabilistic discoverable extraction.
//
// Subcommands: audit, rates, spans, heatmap, coverage, reconstruct,
// compare, serve. Exit codes: 0 success, 1 usage error, 2 backend error,
// 3 data error.

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <sstream>

#include <CLI11.hpp>
#include <nlohmann/json.hpp>

#include "memext/analysis.hpp"
#include "memext/beam.hpp"
#include "memext/corpus.hpp"
#include "memext/http_provider.hpp"
#include "memext/rates.hpp"
#include "memext/reconstruct.hpp"
#include "memext/records.hpp"
#include "memext/reference_model.hpp"
#include "memext/server.hpp"
#include "memext/text_compare.hpp"
#include "memext/util.hpp"

namespace {

using nlohmann::json;
using namespace memext;

constexpr int kExitOk = 0;
constexpr int kExitUsage = 1;
constexpr int kExitBackend = 2;
constexpr int kExitData = 3;

struct BackendOptions {
    std::string backend;  // "reference" or a URL; env MEMEXT_BACKEND_URL fills the default
    std::vector<std::string> ref_train;
    int ref_order = 3;
    double ref_alpha = 1e-6;
};

void add_backend_options(CLI::App* cmd, BackendOptions& opts) {
    const char* env_url = std::getenv("MEMEXT_BACKEND_URL");
    opts.backend = env_url && *env_url ? env_url : "reference";
    cmd->add_option("--backend", opts.backend,
                    "Model backend: 'reference' or an http(s) URL (default from "
                    "MEMEXT_BACKEND_URL when set)");
    cmd->add_option("--ref-train", opts.ref_train,
                    "Text file(s) the reference model memorizes (reference backend)");
    cmd->add_option("--ref-order", opts.ref_order, "Reference model n-gram order");
    cmd->add_option("--ref-alpha", opts.ref_alpha, "Reference model smoothing constant");
}

std::shared_ptr<const Provider> make_backend(const BackendOptions& opts,
                                             const std::vector<BookDocument>& fallback_corpus) {
    if (opts.backend != "reference") {
        return std::make_shared<HttpProvider>(opts.backend);
    }
    auto model = std::make_shared<ReferenceModel>(ByteTokenizer::kVocabSize, opts.ref_order,
                                                  opts.ref_alpha);
    auto feed = [&](const std::string& text) {
        std::vector<TokenId> seq{ByteTokenizer::kBos};
        for (TokenId t : ByteTokenizer::tokenize(text)) seq.push_back(t);
        seq.push_back(ByteTokenizer::kEos);
        model->train(seq);
    };
    if (!opts.ref_train.empty()) {
        for (const std::string& path : opts.ref_train) {
            feed(load_document(path, "train").text);
        }
    } else {
        for (const BookDocument& doc : fallback_corpus) feed(doc.text);
    }
    return std::make_shared<ReferenceProvider>(std::move(model));
}

std::string read_text_file(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw std::runtime_error("cannot open " + path);
    std::ostringstream buf;
    buf << in.rdbuf();
    return buf.str();
}

void write_output(const std::string& out_path, const std::string& content) {
    if (out_path.empty() || out_path == "-") {
        std::cout << content;
        if (content.empty() || content.back() != '\n') std::cout << '\n';
        return;
    }
    std::ofstream out(out_path, std::ios::binary | std::ios::trunc);
    if (!out) throw std::runtime_error("cannot write " + out_path);
    out << content;
}

std::vector<ScoredExample> scored_from_records(const std::vector<AuditRecord>& records) {
    std::vector<ScoredExample> scores;
    scores.reserve(records.size());
    for (const AuditRecord& r : records) scores.push_back(r.scored());
    return scores;
}

json threshold_map_json(const std::map<double, double>& values) {
    json out = json::object();
    for (const auto& [t, v] : values) out[format_double(t)] = v;
    return out;
}

// ---- audit ----------------------------------------------------------------

struct AuditOptions {
    std::string manifest;
    std::string out_path;
    BackendOptions backend;
    std::string mode = "slide";
    double temperature = 1.0;
    std::int32_t top_k = 40;
    std::int32_t top_m = 128;
    bool prepend_bos = true;
    std::int32_t prefix_tokens = 50;
    std::int32_t suffix_tokens = 50;
    std::size_t stride_chars = 10;
    std::size_t chunk_chars = 800;
    std::size_t n_docs = 0;  // random mode; 0 = whole corpus
    std::size_t per_doc = 10;
    std::uint64_t seed = 0;
    std::size_t jobs = 1;
    bool resume = false;
};

int run_audit_cmd(const AuditOptions& opts) {
    std::vector<BookDocument> corpus = load_manifest(opts.manifest);

    AuditConfig cfg;
    cfg.decoding.temperature = opts.temperature;
    cfg.decoding.top_k = opts.top_k;
    cfg.decoding.prepend_bos = opts.prepend_bos;
    cfg.top_m = opts.top_m;
    cfg.sampler.stride_chars = opts.stride_chars;
    cfg.sampler.chunk_chars = opts.chunk_chars;
    cfg.sampler.example_tokens = opts.prefix_tokens + opts.suffix_tokens;
    cfg.sampler.prefix_tokens = opts.prefix_tokens;
    cfg.backend = opts.backend.backend;
    cfg.mode = opts.mode;
    cfg.seed = opts.seed;
    cfg.sampler.validate();
    cfg.decoding.validate();

    std::shared_ptr<const Provider> provider = make_backend(opts.backend, corpus);

    std::vector<Example> examples;
    SamplerStats stats;
    if (opts.mode == "slide") {
        for (const BookDocument& doc : corpus) {
            SamplerStats doc_stats;
            std::vector<Example> batch = slide_windows(doc, *provider, cfg.sampler, &doc_stats);
            examples.insert(examples.end(), batch.begin(), batch.end());
            stats.offsets_attempted += doc_stats.offsets_attempted;
            stats.skipped_short += doc_stats.skipped_short;
            stats.emitted += doc_stats.emitted;
        }
    } else if (opts.mode == "random") {
        std::size_t n_docs = opts.n_docs == 0 ? corpus.size() : opts.n_docs;
        examples = sample_random_examples(corpus, *provider, n_docs, opts.per_doc, cfg.sampler,
                                          opts.seed, &stats);
    } else {
        throw std::invalid_argument("--mode must be slide or random");
    }

    AuditWriter writer(opts.out_path, opts.resume, cfg.fingerprint());
    std::size_t skip = writer.resumed();
    if (skip > examples.size()) {
        throw std::runtime_error("resume: existing file has more records than the sampler "
                                 "produced; configuration mismatch?");
    }

    auto factory = [&]() { return make_backend(opts.backend, corpus); };
    run_audit(examples, factory, cfg, opts.jobs, skip,
              [&](const AuditRecord& record) { writer.append(record); });
    writer.close();

    std::cerr << "audited " << examples.size() << " examples (" << stats.skipped_short
              << " short chunks skipped, " << skip << " resumed) -> " << opts.out_path << "\n";
    return kExitOk;
}

// ---- rates ------------------------------------------------------------------

int run_rates_cmd(const std::string& audit_path, std::vector<double> thresholds,
                  const std::vector<double>& curve_p, const std::vector<std::int64_t>& curve_n,
                  const std::string& out_path) {
    std::vector<AuditRecord> records = read_audit_file(audit_path);
    if (thresholds.empty()) thresholds = default_thresholds();

    std::vector<std::pair<SuffixScore, SuffixScore>> pairs;
    pairs.reserve(records.size());
    for (const AuditRecord& r : records) {
        SuffixScore sampling;
        sampling.prob = r.prob;
        sampling.logprob = r.logprob;
        sampling.impossible = r.impossible;
        SuffixScore greedy;
        greedy.prob = r.greedy_prob;
        greedy.logprob = r.greedy_prob > 0 ? 0.0 : kNegInf;
        greedy.impossible = r.greedy_prob == 0.0;
        pairs.emplace_back(std::move(sampling), std::move(greedy));
    }
    RateReport report = aggregate_rates(pairs, thresholds);

    json out{{"total_examples", report.total_examples},
             {"greedy_rate", report.greedy_rate},
             {"max_rate", report.max_rate},
             {"rate_at_thresholds", threshold_map_json(report.rate_at_thresholds)}};

    if (!curve_p.empty() && !curve_n.empty()) {
        // (n,p)-extraction curves: fraction of examples whose n-attempt
        // success probability reaches p
        json curves = json::object();
        for (double p : curve_p) {
            json points = json::array();
            for (std::int64_t n : curve_n) {
                std::size_t hits = 0;
                for (const auto& [sampling, greedy] : pairs) {
                    if (prob_at_n(sampling.prob, n) >= p) ++hits;
                }
                points.push_back(
                    json{{"n", n}, {"rate", double(hits) / double(report.total_examples)}});
            }
            curves[format_double(p)] = std::move(points);
        }
        out["curves"] = std::move(curves);
    }
    write_output(out_path, out.dump(2));
    return kExitOk;
}

// ---- spans / heatmap / coverage --------------------------------------------

int run_spans_cmd(const std::string& audit_path, double threshold, const std::string& out_path) {
    std::vector<ScoredExample> scores = scored_from_records(read_audit_file(audit_path));
    std::vector<MemorizedSpan> spans = merge_spans(scores, threshold);
    json out = json::array();
    for (const MemorizedSpan& span : spans) {
        out.push_back(json{{"doc_id", span.doc_id},
                           {"char_start", span.char_start},
                           {"char_end", span.char_end},
                           {"max_prob", span.max_prob},
                           {"example_count", span.example_count}});
    }
    write_output(out_path, out.dump(2));
    return kExitOk;
}

int run_heatmap_cmd(const std::string& audit_path, const std::string& doc_path,
                    std::string doc_id, const std::string& out_path) {
    if (doc_id.empty()) doc_id = std::filesystem::path(doc_path).stem().string();
    BookDocument doc = load_document(doc_path, doc_id);

    std::vector<ScoredExample> scores;
    for (const AuditRecord& r : read_audit_file(audit_path)) {
        if (r.doc_id == doc.doc_id) scores.push_back(r.scored());
    }
    if (scores.empty()) {
        throw std::runtime_error("no audit records for doc_id '" + doc.doc_id + "'");
    }
    write_output(out_path, heatmap_csv(heatmap(scores, doc)));
    return kExitOk;
}

int run_coverage_cmd(const std::string& audit_path, const std::string& manifest,
                     std::vector<double> thresholds, const std::string& out_path) {
    if (thresholds.empty()) thresholds = default_thresholds();
    std::vector<AuditRecord> records = read_audit_file(audit_path);
    std::vector<BookDocument> corpus = load_manifest(manifest);

    json out = json::object();
    for (const BookDocument& doc : corpus) {
        std::vector<ScoredExample> scores;
        for (const AuditRecord& r : records) {
            if (r.doc_id == doc.doc_id) scores.push_back(r.scored());
        }
        out[doc.doc_id] = threshold_map_json(coverage_report(scores, doc, thresholds));
    }
    write_output(out_path, out.dump(2));
    return kExitOk;
}

// ---- reconstruct -------------------------------------------------------------

struct ReconstructOptions {
    std::string seed_file;
    std::string out_dir;
    BackendOptions backend;
    ReconstructionConfig cfg;
    std::string chapter_words_csv;
    bool resume = false;
    bool quiet = false;
};

int run_reconstruct_cmd(ReconstructOptions& opts) {
    if (!opts.chapter_words_csv.empty()) {
        opts.cfg.chapter_words.clear();
        std::stringstream ss(opts.chapter_words_csv);
        std::string word;
        while (std::getline(ss, word, ',')) {
            if (!word.empty()) opts.cfg.chapter_words.push_back(word);
        }
    }
    std::shared_ptr<const Provider> provider = make_backend(opts.backend, {});

    auto flush = [&](const ReconstructionLog& log) {
        write_reconstruction_artifacts(log, opts.out_dir);
        if (!opts.quiet) {
            std::cerr << "step " << log.steps.size() << ": " << log.token_ids.size() << "/"
                      << opts.cfg.max_story_tokens << " tokens\r";
        }
    };

    ReconstructionLog log;
    if (opts.resume) {
        log = resume(load_reconstruction_artifacts(opts.out_dir), *provider, opts.cfg, flush);
    } else {
        if (opts.seed_file.empty()) {
            throw std::invalid_argument("--seed-file is required unless --resume is given");
        }
        std::string seed = read_text_file(opts.seed_file);
        // trim outer whitespace, as a seed file usually ends with a newline
        while (!seed.empty() && std::isspace(static_cast<unsigned char>(seed.back()))) {
            seed.pop_back();
        }
        std::size_t first = 0;
        while (first < seed.size() && std::isspace(static_cast<unsigned char>(seed[first]))) {
            ++first;
        }
        seed = seed.substr(first);
        if (opts.cfg.max_story_tokens <= 0) {
            throw std::invalid_argument("--max-story-tokens must be positive");
        }
        log = reconstruct(seed, *provider, opts.cfg, flush);
    }
    write_reconstruction_artifacts(log, opts.out_dir);
    if (!opts.quiet) {
        std::cerr << "\nreconstructed " << log.token_ids.size() << " tokens in "
                  << log.steps.size() << " steps -> " << opts.out_dir << "\n";
    }
    return kExitOk;
}

// ---- compare ------------------------------------------------------------------

int run_compare_cmd(const std::string& a_path, const std::string& b_path,
                    const NormalizationRules& rules, const std::string& blocks_level,
                    const std::string& out_path) {
    std::string a = read_text_file(a_path);
    std::string b = read_text_file(b_path);
    SimilarityReport report = compare_documents(a, b, rules);
    json out{{"tfidf_cosine", report.tfidf},
             {"word_ratio", report.word_ratio},
             {"sentence_ratio", report.sentence_ratio}};

    if (!blocks_level.empty()) {
        std::string na = normalize(a, rules);
        std::string nb = normalize(b, rules);
        std::vector<std::string> ua =
            blocks_level == "sentence" ? split_sentences(na) : split_words(na);
        std::vector<std::string> ub =
            blocks_level == "sentence" ? split_sentences(nb) : split_words(nb);
        json blocks = json::array();
        for (const MatchBlock& blk : gestalt_blocks(std::span<const std::string>(ua),
                                                    std::span<const std::string>(ub))) {
            blocks.push_back(json{{"a_start", blk.a_start},
                                  {"b_start", blk.b_start},
                                  {"length", blk.length}});
        }
        out["matched_blocks"] = std::move(blocks);
        out["block_unit"] = blocks_level;
    }
    write_output(out_path, out.dump(2));
    return kExitOk;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"memext: probabilistic extraction auditing for language models"};
    app.require_subcommand(1);

    // audit
    AuditOptions audit;
    CLI::App* audit_cmd =
        app.add_subcommand("audit", "Score sampled examples and write a JSONL audit file");
    audit_cmd->add_option("--manifest", audit.manifest, "Corpus manifest (path<TAB>doc_id lines)")
        ->required();
    audit_cmd->add_option("--out", audit.out_path, "Output JSONL path")->required();
    add_backend_options(audit_cmd, audit.backend);
    audit_cmd->add_option("--mode", audit.mode, "Sampling mode: slide or random");
    audit_cmd->add_option("--temperature", audit.temperature, "Decoding temperature");
    audit_cmd->add_option("--top-k", audit.top_k, "Top-k truncation width (0 = unlimited)");
    audit_cmd->add_option("--top-m", audit.top_m, "Sparse logit row width");
    audit_cmd->add_flag("--prepend-bos,!--no-prepend-bos", audit.prepend_bos,
                        "Prepend the BOS token before scoring");
    audit_cmd->add_option("--prefix-tokens", audit.prefix_tokens, "Prompt length in tokens");
    audit_cmd->add_option("--suffix-tokens", audit.suffix_tokens, "Target length in tokens");
    audit_cmd->add_option("--stride-chars", audit.stride_chars, "Sliding-window stride");
    audit_cmd->add_option("--chunk-chars", audit.chunk_chars, "Characters tokenized per window");
    audit_cmd->add_option("--n-docs", audit.n_docs, "Documents to draw (random mode)");
    audit_cmd->add_option("--per-doc", audit.per_doc, "Examples per document (random mode)");
    audit_cmd->add_option("--seed", audit.seed, "RNG seed (random mode)");
    audit_cmd->add_option("--jobs", audit.jobs, "Concurrent scoring workers");
    audit_cmd->add_flag("--resume", audit.resume, "Continue an interrupted audit");

    // rates
    std::string rates_audit, rates_out;
    std::vector<double> rates_thresholds, curve_p;
    std::vector<std::int64_t> curve_n;
    CLI::App* rates_cmd = app.add_subcommand("rates", "Aggregate an audit into extraction rates");
    rates_cmd->add_option("--audit", rates_audit, "Audit JSONL file")->required();
    rates_cmd->add_option("--thresholds", rates_thresholds, "Probability thresholds");
    rates_cmd->add_option("--curve-p", curve_p, "Emit rate-vs-n curves for these p targets");
    rates_cmd->add_option("--curve-n", curve_n, "Attempt counts for the curves");
    rates_cmd->add_option("--out", rates_out, "Output path ('-' for stdout)");

    // spans
    std::string spans_audit, spans_out;
    double spans_threshold = 0.5;
    CLI::App* spans_cmd = app.add_subcommand("spans", "Merge high-probability examples into spans");
    spans_cmd->add_option("--audit", spans_audit, "Audit JSONL file")->required();
    spans_cmd->add_option("--threshold", spans_threshold, "Minimum example probability");
    spans_cmd->add_option("--out", spans_out, "Output path ('-' for stdout)");

    // heatmap
    std::string heatmap_audit, heatmap_doc, heatmap_doc_id, heatmap_out;
    CLI::App* heatmap_cmd =
        app.add_subcommand("heatmap", "Per-character extraction-probability maxima as CSV");
    heatmap_cmd->add_option("--audit", heatmap_audit, "Audit JSONL file")->required();
    heatmap_cmd->add_option("--doc", heatmap_doc, "Document text file")->required();
    heatmap_cmd->add_option("--doc-id", heatmap_doc_id, "Document id (default: file stem)");
    heatmap_cmd->add_option("--out", heatmap_out, "Output path ('-' for stdout)");

    // coverage
    std::string coverage_audit, coverage_manifest, coverage_out;
    std::vector<double> coverage_thresholds;
    CLI::App* coverage_cmd =
        app.add_subcommand("coverage", "Fraction of each document inside memorized spans");
    coverage_cmd->add_option("--audit", coverage_audit, "Audit JSONL file")->required();
    coverage_cmd->add_option("--manifest", coverage_manifest, "Corpus manifest")->required();
    coverage_cmd->add_option("--thresholds", coverage_thresholds, "Probability thresholds");
    coverage_cmd->add_option("--out", coverage_out, "Output path ('-' for stdout)");

    // reconstruct
    ReconstructOptions rec;
    CLI::App* rec_cmd = app.add_subcommand(
        "reconstruct", "Rebuild a document from a seed prompt via windowed beam search");
    rec_cmd->add_option("--seed-file", rec.seed_file, "Seed prompt text file");
    rec_cmd->add_option("--out-dir", rec.out_dir, "Artifact directory")->required();
    add_backend_options(rec_cmd, rec.backend);
    rec_cmd->add_option("--max-context-tokens", rec.cfg.max_context_tokens, "Prompt window bound");
    rec_cmd->add_option("--step-tokens", rec.cfg.step_tokens, "Tokens generated per step");
    rec_cmd->add_option("--beams", rec.cfg.beams, "Beam width");
    rec_cmd->add_option("--length-penalty", rec.cfg.length_penalty,
                        "Finished-hypothesis exponent");
    rec_cmd->add_option("--max-story-tokens", rec.cfg.max_story_tokens, "Total token budget");
    rec_cmd->add_option("--chapter-words", rec.chapter_words_csv,
                        "Comma-separated spelled-out chapter numbers");
    rec_cmd->add_option("--missed-chapter-gap", rec.cfg.missed_chapter_gap,
                        "Tokens without EOS before assuming a missed chapter break");
    rec_cmd->add_option("--temperature", rec.cfg.decoding.temperature, "Decoding temperature");
    rec_cmd->add_option("--top-k", rec.cfg.decoding.top_k, "Top-k truncation (0 = unlimited)");
    rec_cmd->add_flag("--prepend-bos,!--no-prepend-bos", rec.cfg.decoding.prepend_bos,
                      "Prepend BOS to each window");
    rec_cmd->add_flag("--resume", rec.resume, "Continue from --out-dir artifacts");
    rec_cmd->add_flag("--quiet", rec.quiet, "No progress output");

    // compare
    std::string cmp_a, cmp_b, cmp_blocks, cmp_out;
    bool no_strip_underscores = false, no_unify_ellipses = false;
    CLI::App* cmp_cmd = app.add_subcommand("compare", "Similarity between two text files");
    cmp_cmd->add_option("a", cmp_a, "First file")->required();
    cmp_cmd->add_option("b", cmp_b, "Second file")->required();
    cmp_cmd->add_flag("--no-strip-underscores", no_strip_underscores,
                      "Keep underscores during normalization");
    cmp_cmd->add_flag("--no-unify-ellipses", no_unify_ellipses, "Keep spaced ellipses");
    cmp_cmd->add_option("--blocks", cmp_blocks, "Also emit matched blocks: word or sentence");
    cmp_cmd->add_option("--out", cmp_out, "Output path ('-' for stdout)");

    // serve
    BackendOptions serve_backend;
    std::string serve_host = "127.0.0.1";
    int serve_port = 8311;
    CLI::App* serve_cmd =
        app.add_subcommand("serve", "Expose a reference model over the HTTP scoring protocol");
    add_backend_options(serve_cmd, serve_backend);
    serve_cmd->add_option("--host", serve_host, "Bind address");
    serve_cmd->add_option("--port", serve_port, "Port");

    CLI11_PARSE(app, argc, argv);

    try {
        if (audit_cmd->parsed()) return run_audit_cmd(audit);
        if (rates_cmd->parsed()) {
            return run_rates_cmd(rates_audit, rates_thresholds, curve_p, curve_n, rates_out);
        }
        if (spans_cmd->parsed()) return run_spans_cmd(spans_audit, spans_threshold, spans_out);
        if (heatmap_cmd->parsed()) {
            return run_heatmap_cmd(heatmap_audit, heatmap_doc, heatmap_doc_id, heatmap_out);
        }
        if (coverage_cmd->parsed()) {
            return run_coverage_cmd(coverage_audit, coverage_manifest, coverage_thresholds,
                                    coverage_out);
        }
        if (rec_cmd->parsed()) return run_reconstruct_cmd(rec);
        if (cmp_cmd->parsed()) {
            NormalizationRules rules{!no_strip_underscores, !no_unify_ellipses};
            return run_compare_cmd(cmp_a, cmp_b, rules, cmp_blocks, cmp_out);
        }
        if (serve_cmd->parsed()) {
            std::shared_ptr<const Provider> provider = make_backend(serve_backend, {});
            ProviderServer server(provider);
            std::cerr << "serving on http://" << serve_host << ":" << serve_port << "\n";
            server.run(serve_host, serve_port);
            return kExitOk;
        }
    } catch (const BackendError& e) {
        std::cerr << "backend error: " << e.what() << "\n";
        return kExitBackend;
    } catch (const std::invalid_argument& e) {
        std::cerr << "usage error: " << e.what() << "\n";
        return kExitUsage;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kExitData;
    }
    return kExitUsage;
}
