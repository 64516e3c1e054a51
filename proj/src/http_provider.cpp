#include "memext/http_provider.hpp"

#include <mutex>
#include <thread>
#include <unordered_map>

#include <httplib.h>
#include <nlohmann/json.hpp>

namespace memext {

using nlohmann::json;

namespace {

std::string body_excerpt(const std::string& body) {
    constexpr std::size_t kMax = 200;
    if (body.size() <= kMax) return body;
    return body.substr(0, kMax) + "...";
}

}  // namespace

struct HttpProvider::Impl {
    std::string base_url;

    // One connection per thread and target; httplib clients are not safe
    // to share across concurrent requests.
    httplib::Client& client() const {
        thread_local std::unordered_map<std::string, std::unique_ptr<httplib::Client>> clients;
        auto& slot = clients[base_url];
        if (!slot) {
            slot = std::make_unique<httplib::Client>(base_url);
            slot->set_connection_timeout(10, 0);
            slot->set_read_timeout(300, 0);
            slot->set_keep_alive(true);
        }
        return *slot;
    }

    json post(const std::string& path, const json& payload) const {
        auto res = client().Post(path, payload.dump(), "application/json");
        if (!res) {
            throw BackendError("backend unreachable at " + base_url + path + " (" +
                               httplib::to_string(res.error()) + ")");
        }
        if (res->status < 200 || res->status >= 300) {
            std::string detail = body_excerpt(res->body);
            try {
                json err = json::parse(res->body);
                if (err.contains("error")) detail = err["error"].get<std::string>();
            } catch (const json::exception&) {
            }
            throw BackendError("backend error " + std::to_string(res->status) + " at " + path +
                               ": " + detail);
        }
        try {
            return json::parse(res->body);
        } catch (const json::exception& e) {
            throw BackendError(std::string("malformed backend response at ") + path + ": " +
                               e.what() + " body=" + body_excerpt(res->body));
        }
    }
};

HttpProvider::HttpProvider(std::string base_url) : impl_(new Impl) {
    if (base_url.empty()) throw std::invalid_argument("HttpProvider: empty URL");
    while (base_url.size() > 1 && base_url.back() == '/') base_url.pop_back();
    impl_->base_url = std::move(base_url);
}

HttpProvider::~HttpProvider() = default;

TokenizerInfo HttpProvider::tokenizer_info() const {
    json res = impl_->post("/v1/info", json::object());
    try {
        TokenizerInfo info;
        info.vocab_size = res.at("vocab_size").get<std::int32_t>();
        if (res.contains("bos") && !res["bos"].is_null()) info.bos_token = res["bos"].get<TokenId>();
        if (res.contains("eos") && !res["eos"].is_null()) info.eos_token = res["eos"].get<TokenId>();
        return info;
    } catch (const json::exception& e) {
        throw BackendError(std::string("malformed /v1/info response: ") + e.what());
    }
}

std::vector<TokenId> HttpProvider::tokenize(const std::string& text) const {
    json res = impl_->post("/v1/tokenize", json{{"text", text}});
    try {
        return res.at("tokens").get<std::vector<TokenId>>();
    } catch (const json::exception& e) {
        throw BackendError(std::string("malformed /v1/tokenize response: ") + e.what());
    }
}

std::string HttpProvider::detokenize(const std::vector<TokenId>& tokens) const {
    json res = impl_->post("/v1/detokenize", json{{"tokens", tokens}});
    try {
        return res.at("text").get<std::string>();
    } catch (const json::exception& e) {
        throw BackendError(std::string("malformed /v1/detokenize response: ") + e.what());
    }
}

std::vector<LogitRow> HttpProvider::score_positions(const ScoreRequest& req) const {
    req.validate();
    json payload{{"tokens", req.tokens},
                 {"suffix_start", req.suffix_start},
                 {"temperature", req.temperature},
                 {"top_m", req.top_m}};
    json res = impl_->post("/v1/score", payload);
    try {
        std::vector<LogitRow> rows;
        for (const json& jrow : res.at("rows")) {
            LogitRow row;
            for (const json& e : jrow.at("entries")) {
                row.entries.emplace_back(e.at(0).get<TokenId>(), e.at(1).get<double>());
            }
            row.target_token = jrow.at("target").get<TokenId>();
            row.target_logit = jrow.at("target_logit").get<double>();
            row.target_rank = jrow.at("target_rank").get<std::int32_t>();
            row.logsumexp_full = jrow.at("logsumexp").get<double>();
            rows.push_back(std::move(row));
        }
        return rows;
    } catch (const json::exception& e) {
        throw BackendError(std::string("malformed /v1/score response: ") + e.what());
    }
}

}  // namespace memext
