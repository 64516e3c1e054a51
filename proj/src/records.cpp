#include "memext/records.hpp"

#include <atomic>
#include <cmath>
#include <filesystem>
#include <fstream>
#include <mutex>
#include <sstream>
#include <thread>

#include <nlohmann/json.hpp>

#include "memext/util.hpp"

namespace memext {

using nlohmann::json;

std::string AuditConfig::fingerprint() const {
    std::ostringstream canon;
    canon << "backend=" << backend << ";mode=" << mode
          << ";T=" << format_double(decoding.temperature) << ";k=" << decoding.top_k
          << ";M=" << top_m << ";bos=" << (decoding.prepend_bos ? 1 : 0)
          << ";prefix=" << sampler.prefix_tokens
          << ";suffix=" << (sampler.example_tokens - sampler.prefix_tokens)
          << ";stride=" << sampler.stride_chars << ";chunk=" << sampler.chunk_chars
          << ";seed=" << seed;
    return fnv1a_hex(canon.str());
}

std::pair<SuffixScore, SuffixScore> score_example(const Provider& provider, const Example& ex,
                                                  const DecodingConfig& cfg, std::int32_t top_m) {
    ScoreRequest req;
    req.temperature = cfg.temperature;
    req.top_m = std::max({top_m, cfg.top_k, std::int32_t(1)});

    const TokenizerInfo info = provider.tokenizer_info();
    if (cfg.prepend_bos && info.bos_token) req.tokens.push_back(*info.bos_token);
    req.tokens.insert(req.tokens.end(), ex.tokens.begin(), ex.tokens.end());
    req.suffix_start = ex.prefix_len + 1 + (req.tokens.size() > ex.tokens.size() ? 1 : 0);

    std::vector<LogitRow> rows = provider.score_positions(req);
    SuffixScore sampling = sequence_score(rows, cfg);

    DecodingConfig greedy_cfg;
    greedy_cfg.temperature = 1.0;
    greedy_cfg.top_k = 1;
    greedy_cfg.prepend_bos = cfg.prepend_bos;
    SuffixScore greedy = greedy_match_score(rows, greedy_cfg);
    return {std::move(sampling), std::move(greedy)};
}

AuditRecord make_record(const Example& ex, const SuffixScore& sampling,
                        const SuffixScore& greedy, const std::string& fingerprint) {
    AuditRecord record;
    record.doc_id = ex.doc_id;
    record.char_start = ex.char_start;
    record.char_end = ex.char_end;
    record.suffix_char_start = ex.suffix_char_start;
    record.prefix_len = ex.prefix_len;
    record.suffix_len = ex.suffix_len;
    record.logprob = sampling.logprob;
    record.prob = sampling.prob;
    record.impossible = sampling.impossible;
    record.greedy_prob = greedy.prob;
    record.config = fingerprint;
    return record;
}

std::string record_to_json_line(const AuditRecord& record) {
    json j{{"doc_id", record.doc_id},
           {"char_start", record.char_start},
           {"char_end", record.char_end},
           {"suffix_char_start", record.suffix_char_start},
           {"prefix_len", record.prefix_len},
           {"suffix_len", record.suffix_len},
           {"prob", record.prob},
           {"impossible", record.impossible},
           {"greedy_prob", record.greedy_prob},
           {"config", record.config}};
    // JSON has no -inf literal; an impossible score serializes as null
    j["logprob"] = std::isinf(record.logprob) ? json(nullptr) : json(record.logprob);
    return j.dump();
}

AuditRecord record_from_json_line(const std::string& line) {
    json j = json::parse(line);
    AuditRecord record;
    record.doc_id = j.at("doc_id").get<std::string>();
    record.char_start = j.at("char_start").get<std::size_t>();
    record.char_end = j.at("char_end").get<std::size_t>();
    record.suffix_char_start = j.at("suffix_char_start").get<std::size_t>();
    record.prefix_len = j.at("prefix_len").get<std::int32_t>();
    record.suffix_len = j.at("suffix_len").get<std::int32_t>();
    record.logprob = j.at("logprob").is_null() ? kNegInf : j.at("logprob").get<double>();
    record.prob = j.at("prob").get<double>();
    record.impossible = j.at("impossible").get<bool>();
    record.greedy_prob = j.value("greedy_prob", 0.0);
    record.config = j.value("config", std::string());
    return record;
}

std::vector<AuditRecord> read_audit_file(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw std::runtime_error("cannot open audit file: " + path);
    std::vector<AuditRecord> records;
    std::string line;
    while (std::getline(in, line)) {
        if (line.empty()) continue;
        records.push_back(record_from_json_line(line));
    }
    return records;
}

struct AuditWriter::Impl {
    std::ofstream out;
    std::string path;
};

AuditWriter::AuditWriter(const std::string& path, bool resume, const std::string& fingerprint)
    : impl_(new Impl) {
    impl_->path = path;
    if (resume && std::filesystem::exists(path)) {
        // keep complete lines, drop a partial trailing one
        std::string content;
        {
            std::ifstream in(path, std::ios::binary);
            std::ostringstream buf;
            buf << in.rdbuf();
            content = buf.str();
        }
        std::size_t valid_end = 0;
        std::size_t pos = 0;
        while (pos < content.size()) {
            std::size_t nl = content.find('\n', pos);
            if (nl == std::string::npos) break;
            std::string line = content.substr(pos, nl - pos);
            if (!line.empty()) {
                AuditRecord rec = record_from_json_line(line);
                if (!rec.config.empty() && rec.config != fingerprint) {
                    throw std::runtime_error("resume: existing records were produced with a "
                                             "different configuration");
                }
                ++resumed_;
            }
            pos = nl + 1;
            valid_end = pos;
        }
        if (valid_end != content.size()) {
            std::filesystem::resize_file(path, valid_end);
        }
        impl_->out.open(path, std::ios::binary | std::ios::app);
    } else {
        impl_->out.open(path, std::ios::binary | std::ios::trunc);
    }
    if (!impl_->out) throw std::runtime_error("cannot open audit output: " + path);
}

AuditWriter::~AuditWriter() = default;

void AuditWriter::append(const AuditRecord& record) {
    impl_->out << record_to_json_line(record) << '\n';
    impl_->out.flush();
    if (!impl_->out) throw std::runtime_error("write failed: " + impl_->path);
}

void AuditWriter::close() {
    if (impl_->out.is_open()) impl_->out.close();
}

void run_audit(const std::vector<Example>& examples,
               const std::function<std::shared_ptr<const Provider>()>& provider_factory,
               const AuditConfig& cfg, std::size_t jobs, std::size_t skip,
               const std::function<void(const AuditRecord&)>& sink) {
    const std::string fingerprint = cfg.fingerprint();
    if (skip >= examples.size()) return;
    const std::size_t count = examples.size() - skip;
    if (jobs < 1) jobs = 1;
    jobs = std::min(jobs, count);

    if (jobs == 1) {
        std::shared_ptr<const Provider> provider = provider_factory();
        for (std::size_t i = skip; i < examples.size(); ++i) {
            auto [sampling, greedy] = score_example(*provider, examples[i], cfg.decoding, cfg.top_m);
            sink(make_record(examples[i], sampling, greedy, fingerprint));
        }
        return;
    }

    // fan out, then emit in input order
    std::vector<AuditRecord> results(count);
    std::vector<char> done(count, 0);
    std::atomic<std::size_t> cursor{0};
    std::exception_ptr failure;
    std::mutex failure_mutex;

    std::vector<std::thread> workers;
    workers.reserve(jobs);
    for (std::size_t w = 0; w < jobs; ++w) {
        workers.emplace_back([&, w] {
            try {
                std::shared_ptr<const Provider> provider = provider_factory();
                while (true) {
                    std::size_t i = cursor.fetch_add(1);
                    if (i >= count) break;
                    const Example& ex = examples[skip + i];
                    auto [sampling, greedy] = score_example(*provider, ex, cfg.decoding, cfg.top_m);
                    results[i] = make_record(ex, sampling, greedy, fingerprint);
                    done[i] = 1;
                }
            } catch (...) {
                std::lock_guard<std::mutex> lock(failure_mutex);
                if (!failure) failure = std::current_exception();
                cursor.store(count);  // stop the other workers
            }
        });
    }
    for (std::thread& t : workers) t.join();
    if (failure) std::rethrow_exception(failure);
    for (std::size_t i = 0; i < count; ++i) {
        if (!done[i]) throw std::runtime_error("run_audit: example was not scored");
        sink(results[i]);
    }
}

}  // namespace memext
