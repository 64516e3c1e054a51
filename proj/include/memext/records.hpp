#ifndef MEMEXT_RECORDS_HPP
#define MEMEXT_RECORDS_HPP

#include <cstdint>
#include <functional>
#include <string>
#include <vector>

#include "memext/analysis.hpp"
#include "memext/corpus.hpp"
#include "memext/provider.hpp"

namespace memext {

// One audited example, one JSONL line. greedy_prob is the greedy-decoding
// (T=1, k=1) score computed from the same logit rows as the sampling
// score; it costs nothing extra and keeps rate reports self-contained.
struct AuditRecord {
    std::string doc_id;
    std::size_t char_start = 0;
    std::size_t char_end = 0;
    std::size_t suffix_char_start = 0;
    std::int32_t prefix_len = 0;
    std::int32_t suffix_len = 0;
    double logprob = kNegInf;
    double prob = 0.0;
    bool impossible = true;
    double greedy_prob = 0.0;
    std::string config;  // fingerprint, identical within a run

    ScoredExample scored() const {
        return ScoredExample{doc_id, char_start, char_end, suffix_char_start,
                             prob,   logprob,    impossible};
    }
};

// Everything that pins a run's outputs, canonicalized and hashed into the
// per-record fingerprint.
struct AuditConfig {
    DecodingConfig decoding;
    std::int32_t top_m = 128;
    SamplerConfig sampler;
    std::string backend;        // "reference" or the backend URL
    std::string mode = "slide"; // "slide" or "random"
    std::uint64_t seed = 0;

    std::string fingerprint() const;
};

// Score one example under cfg; the second element is the greedy score
// derived from the same rows.
std::pair<SuffixScore, SuffixScore> score_example(const Provider& provider, const Example& ex,
                                                  const DecodingConfig& cfg, std::int32_t top_m);

AuditRecord make_record(const Example& ex, const SuffixScore& sampling,
                        const SuffixScore& greedy, const std::string& fingerprint);

std::string record_to_json_line(const AuditRecord& record);
AuditRecord record_from_json_line(const std::string& line);

// Read every complete record of a JSONL audit file.
std::vector<AuditRecord> read_audit_file(const std::string& path);

// Append-only JSONL writer; every append leaves the file line-valid.
class AuditWriter {
public:
    // When resume is set, existing complete records are kept (their count
    // is reported via resumed()) and a trailing partial line, if any, is
    // dropped. Without resume the file is truncated.
    AuditWriter(const std::string& path, bool resume, const std::string& fingerprint);
    ~AuditWriter();

    std::size_t resumed() const { return resumed_; }
    void append(const AuditRecord& record);
    void close();

private:
    struct Impl;
    std::unique_ptr<Impl> impl_;
    std::size_t resumed_ = 0;
};

// Score `examples` with `jobs` worker threads (order of the output
// follows the input regardless of completion order) and hand each record
// to `sink` in input order. provider_factory is called once per worker.
void run_audit(const std::vector<Example>& examples,
               const std::function<std::shared_ptr<const Provider>()>& provider_factory,
               const AuditConfig& cfg, std::size_t jobs, std::size_t skip,
               const std::function<void(const AuditRecord&)>& sink);

}  // namespace memext

#endif
