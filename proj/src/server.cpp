#include "memext/server.hpp"

#include <atomic>
#include <thread>

#include <httplib.h>
#include <nlohmann/json.hpp>

namespace memext {

using nlohmann::json;

struct ProviderServer::Impl {
    std::shared_ptr<const Provider> provider;
    httplib::Server server;
    std::thread worker;
    std::string host;
    int port = 0;

    void wire_routes() {
        server.Post("/v1/info", [this](const httplib::Request&, httplib::Response& res) {
            handle(res, [&] {
                TokenizerInfo info = provider->tokenizer_info();
                json out{{"vocab_size", info.vocab_size}};
                out["bos"] = info.bos_token ? json(*info.bos_token) : json(nullptr);
                out["eos"] = info.eos_token ? json(*info.eos_token) : json(nullptr);
                return out;
            });
        });
        server.Post("/v1/tokenize", [this](const httplib::Request& req, httplib::Response& res) {
            handle(res, [&] {
                json in = json::parse(req.body);
                return json{{"tokens", provider->tokenize(in.at("text").get<std::string>())}};
            });
        });
        server.Post("/v1/detokenize", [this](const httplib::Request& req, httplib::Response& res) {
            handle(res, [&] {
                json in = json::parse(req.body);
                return json{{"text", provider->detokenize(in.at("tokens").get<std::vector<TokenId>>())}};
            });
        });
        server.Post("/v1/score", [this](const httplib::Request& req, httplib::Response& res) {
            handle(res, [&] {
                json in = json::parse(req.body);
                ScoreRequest sreq;
                sreq.tokens = in.at("tokens").get<std::vector<TokenId>>();
                sreq.suffix_start = in.at("suffix_start").get<std::int32_t>();
                if (in.contains("temperature")) sreq.temperature = in["temperature"].get<double>();
                if (in.contains("top_m")) sreq.top_m = in["top_m"].get<std::int32_t>();
                json jrows = json::array();
                for (const LogitRow& row : provider->score_positions(sreq)) {
                    json entries = json::array();
                    for (const auto& [id, logit] : row.entries) {
                        entries.push_back(json::array({id, logit}));
                    }
                    jrows.push_back(json{{"entries", std::move(entries)},
                                         {"target", row.target_token},
                                         {"target_logit", row.target_logit},
                                         {"target_rank", row.target_rank},
                                         {"logsumexp", row.logsumexp_full}});
                }
                return json{{"rows", std::move(jrows)}};
            });
        });
    }

    template <typename Fn>
    static void handle(httplib::Response& res, Fn&& fn) {
        try {
            res.set_content(fn().dump(), "application/json");
        } catch (const json::exception& e) {
            res.status = 400;
            res.set_content(json{{"error", std::string("bad request: ") + e.what()}}.dump(),
                            "application/json");
        } catch (const std::invalid_argument& e) {
            res.status = 400;
            res.set_content(json{{"error", e.what()}}.dump(), "application/json");
        } catch (const std::exception& e) {
            res.status = 500;
            res.set_content(json{{"error", e.what()}}.dump(), "application/json");
        }
    }
};

ProviderServer::ProviderServer(std::shared_ptr<const Provider> provider) : impl_(new Impl) {
    if (!provider) throw std::invalid_argument("ProviderServer: null provider");
    impl_->provider = std::move(provider);
    impl_->wire_routes();
}

ProviderServer::~ProviderServer() {
    stop();
}

int ProviderServer::start(const std::string& host) {
    impl_->host = host;
    impl_->port = impl_->server.bind_to_any_port(host);
    if (impl_->port <= 0) throw std::runtime_error("ProviderServer: failed to bind on " + host);
    impl_->worker = std::thread([this] { impl_->server.listen_after_bind(); });
    impl_->server.wait_until_ready();
    return impl_->port;
}

void ProviderServer::run(const std::string& host, int port) {
    impl_->host = host;
    impl_->port = port;
    if (!impl_->server.listen(host, port)) {
        throw std::runtime_error("ProviderServer: failed to listen on " + host + ":" +
                                 std::to_string(port));
    }
}

void ProviderServer::stop() {
    if (impl_->server.is_running()) impl_->server.stop();
    if (impl_->worker.joinable()) impl_->worker.join();
}

std::string ProviderServer::base_url() const {
    return "http://" + impl_->host + ":" + std::to_string(impl_->port);
}

}  // namespace memext
