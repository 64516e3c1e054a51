#include "memext/reference_model.hpp"

#include <algorithm>
#include <cmath>
#include <cstring>
#include <numeric>

namespace memext {

std::vector<TokenId> ByteTokenizer::tokenize(const std::string& text) {
    std::vector<TokenId> tokens;
    tokens.reserve(text.size());
    for (unsigned char c : text) tokens.push_back(static_cast<TokenId>(c));
    return tokens;
}

std::string ByteTokenizer::detokenize(const std::vector<TokenId>& tokens) {
    std::string text;
    text.reserve(tokens.size());
    for (TokenId t : tokens) {
        if (t >= 0 && t < 256) text.push_back(static_cast<char>(t));
        // special and out-of-range ids are skipped
    }
    return text;
}

ReferenceModel::ReferenceModel(std::int32_t vocab_size, int order, double alpha)
    : vocab_size_(vocab_size), order_(order), alpha_(alpha) {
    if (vocab_size < 1) throw std::invalid_argument("ReferenceModel: vocab_size must be >= 1");
    if (order < 1) throw std::invalid_argument("ReferenceModel: order must be >= 1");
    if (!(alpha > 0.0)) throw std::invalid_argument("ReferenceModel: alpha must be > 0");
}

std::string ReferenceModel::key_of(const TokenId* begin, const TokenId* end) {
    return std::string(reinterpret_cast<const char*>(begin),
                       static_cast<std::size_t>(end - begin) * sizeof(TokenId));
}

void ReferenceModel::train(const std::vector<TokenId>& sequence) {
    const std::size_t ctx_len = static_cast<std::size_t>(order_ - 1);
    for (std::size_t t = 1; t < sequence.size(); ++t) {
        std::size_t first = t > ctx_len ? t - ctx_len : 0;
        auto key = key_of(sequence.data() + first, sequence.data() + t);
        auto& row = rows_[key];
        if (row.empty()) row.assign(static_cast<std::size_t>(vocab_size_), 0.0);
        TokenId next = sequence[t];
        if (next < 0 || next >= vocab_size_) {
            throw std::invalid_argument("ReferenceModel::train: token out of vocabulary");
        }
        row[static_cast<std::size_t>(next)] += 1.0;
    }
}

void ReferenceModel::set_row(const std::vector<TokenId>& context, std::vector<double> weights) {
    if (weights.size() != static_cast<std::size_t>(vocab_size_)) {
        throw std::invalid_argument("ReferenceModel::set_row: weight vector size mismatch");
    }
    for (double& w : weights) {
        if (w < 0.0) throw std::invalid_argument("ReferenceModel::set_row: negative weight");
    }
    rows_[key_of(context.data(), context.data() + context.size())] = std::move(weights);
}

const std::vector<double>* ReferenceModel::find_row(const std::vector<TokenId>& context) const {
    const std::size_t ctx_len = std::min(context.size(), static_cast<std::size_t>(order_ - 1));
    auto it = rows_.find(key_of(context.data() + (context.size() - ctx_len),
                                context.data() + context.size()));
    return it == rows_.end() ? nullptr : &it->second;
}

std::vector<double> ReferenceModel::logits_after(const std::vector<TokenId>& context) const {
    const std::vector<double>* row = find_row(context);
    std::vector<double> logits(static_cast<std::size_t>(vocab_size_));
    for (std::size_t i = 0; i < logits.size(); ++i) {
        double w = (row ? (*row)[i] : 0.0) + alpha_;
        logits[i] = std::log(w);
    }
    return logits;
}

double ReferenceModel::conditional_prob(const std::vector<TokenId>& context, TokenId next) const {
    const std::vector<double>* row = find_row(context);
    double total = 0.0;
    for (std::int32_t i = 0; i < vocab_size_; ++i) {
        total += (row ? (*row)[static_cast<std::size_t>(i)] : 0.0) + alpha_;
    }
    double w = (row ? (*row)[static_cast<std::size_t>(next)] : 0.0) + alpha_;
    return w / total;
}

LogitRow make_logit_row(const std::vector<double>& logits, TokenId target,
                        std::int32_t top_m, double temperature) {
    const std::int32_t vocab = static_cast<std::int32_t>(logits.size());
    std::vector<TokenId> order(static_cast<std::size_t>(vocab));
    std::iota(order.begin(), order.end(), 0);
    std::sort(order.begin(), order.end(), [&](TokenId a, TokenId b) {
        double la = logits[static_cast<std::size_t>(a)];
        double lb = logits[static_cast<std::size_t>(b)];
        if (la != lb) return la > lb;
        return a < b;
    });

    LogitRow row;
    const std::int32_t m = std::min(top_m, vocab);
    row.entries.reserve(static_cast<std::size_t>(m));
    for (std::int32_t j = 0; j < m; ++j) {
        TokenId id = order[static_cast<std::size_t>(j)];
        row.entries.emplace_back(id, logits[static_cast<std::size_t>(id)]);
    }

    row.target_token = target;
    row.target_logit = logits.at(static_cast<std::size_t>(target));
    row.target_rank = 1 + static_cast<std::int32_t>(
        std::find(order.begin(), order.end(), target) - order.begin());

    std::vector<double> scaled(logits.size());
    for (std::size_t i = 0; i < logits.size(); ++i) scaled[i] = logits[i] / temperature;
    row.logsumexp_full = logsumexp(scaled);
    return row;
}

ReferenceProvider::ReferenceProvider(std::shared_ptr<const ReferenceModel> model)
    : model_(std::move(model)) {
    if (!model_) throw std::invalid_argument("ReferenceProvider: null model");
}

TokenizerInfo ReferenceProvider::tokenizer_info() const {
    TokenizerInfo info = ByteTokenizer::info();
    info.vocab_size = std::max(info.vocab_size, model_->vocab_size());
    if (model_->vocab_size() <= ByteTokenizer::kEos) {
        // Fixture models with tiny vocabularies have no special ids.
        if (model_->vocab_size() <= ByteTokenizer::kBos) info.bos_token.reset();
        if (model_->vocab_size() <= ByteTokenizer::kEos) info.eos_token.reset();
        info.vocab_size = model_->vocab_size();
    }
    return info;
}

std::vector<TokenId> ReferenceProvider::tokenize(const std::string& text) const {
    return ByteTokenizer::tokenize(text);
}

std::string ReferenceProvider::detokenize(const std::vector<TokenId>& tokens) const {
    return ByteTokenizer::detokenize(tokens);
}

std::vector<LogitRow> ReferenceProvider::score_positions(const ScoreRequest& req) const {
    req.validate();
    std::vector<LogitRow> rows;
    const std::size_t start = static_cast<std::size_t>(req.suffix_start) - 1;
    rows.reserve(req.tokens.size() - start);
    std::vector<TokenId> context(req.tokens.begin(),
                                 req.tokens.begin() + static_cast<std::ptrdiff_t>(start));
    for (std::size_t pos = start; pos < req.tokens.size(); ++pos) {
        TokenId target = req.tokens[pos];
        if (target < 0 || target >= model_->vocab_size()) {
            throw BackendError("score_positions: token out of vocabulary");
        }
        std::vector<double> logits = model_->logits_after(context);
        rows.push_back(make_logit_row(logits, target, req.top_m, req.temperature));
        context.push_back(target);
    }
    return rows;
}

LogitRow next_token_row(const Provider& provider, const std::vector<TokenId>& context,
                        double temperature, std::int32_t top_m) {
    ScoreRequest req;
    req.tokens = context;
    req.tokens.push_back(0);  // placeholder target; only the distribution matters
    req.suffix_start = static_cast<std::int32_t>(req.tokens.size());
    req.temperature = temperature;
    req.top_m = top_m;
    std::vector<LogitRow> rows = provider.score_positions(req);
    if (rows.empty()) throw BackendError("next_token_row: provider returned no rows");
    return std::move(rows.front());
}

}  // namespace memext
