#ifndef MEMEXT_SERVER_HPP
#define MEMEXT_SERVER_HPP

#include <memory>
#include <string>

#include "memext/provider.hpp"

namespace memext {

// Loopback HTTP shim exposing any Provider over the wire protocol that
// HttpProvider speaks. Used to serve the reference model to external
// clients and to test backend equivalence.
class ProviderServer {
public:
    explicit ProviderServer(std::shared_ptr<const Provider> provider);
    ~ProviderServer();

    ProviderServer(const ProviderServer&) = delete;
    ProviderServer& operator=(const ProviderServer&) = delete;

    // Bind to an ephemeral port on `host` and serve from a background
    // thread. Returns the bound port.
    int start(const std::string& host = "127.0.0.1");

    // Serve on a fixed port from the calling thread (blocks).
    void run(const std::string& host, int port);

    void stop();

    std::string base_url() const;

private:
    struct Impl;
    std::unique_ptr<Impl> impl_;
};

}  // namespace memext

#endif
