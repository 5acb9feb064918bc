#include "cogevo/embedder.hpp"

#include <cmath>

#include <httplib.h>
#include <json.hpp>

#include "cogevo/errors.hpp"
#include "cogevo/icap.hpp"
#include "cogevo/rng.hpp"

namespace cogevo {

std::vector<double> HashedBowEmbedder::embed(const std::string& text) const {
    std::vector<double> v(kDim, 0.0);
    auto tokens = tokenize(text);
    if (tokens.empty()) return v;
    for (const auto& tok : tokens) v[fnv1a64(tok) % kDim] += 1.0;
    double norm = 0.0;
    for (double x : v) norm += x * x;
    norm = std::sqrt(norm);
    for (double& x : v) x /= norm;
    return v;
}

namespace {

// "host:port" or "http://host:port"
std::pair<std::string, int> parse_url(const std::string& url) {
    std::string s = url;
    if (s.rfind("http://", 0) == 0) s = s.substr(7);
    auto colon = s.rfind(':');
    if (colon == std::string::npos)
        throw ConfigError("remote url must be host:port, got '" + url + "'");
    return {s.substr(0, colon), std::stoi(s.substr(colon + 1))};
}

} // namespace

RemoteEmbedder::RemoteEmbedder(std::string base_url) {
    auto [host, port] = parse_url(base_url);
    host_ = host;
    port_ = port;
}

std::vector<double> RemoteEmbedder::embed(const std::string& text) const {
    httplib::Client client(host_, port_);
    nlohmann::json req = {{"text", text}};
    auto res = client.Post("/embed", req.dump(), "application/json");
    if (!res || res->status != 200)
        throw DataError("remote embedder at " + host_ + ":" + std::to_string(port_) +
                        " failed" + (res ? " (status " + std::to_string(res->status) + ")" : ""));
    auto body = nlohmann::json::parse(res->body);
    return body.at("vector").get<std::vector<double>>();
}

std::unique_ptr<TextEmbedder> make_embedder(const std::string& kind, const std::string& url) {
    if (kind == "hashed") return std::make_unique<HashedBowEmbedder>();
    if (kind == "remote") {
        if (url.empty()) throw ConfigError("embedder_url required for remote embedder");
        return std::make_unique<RemoteEmbedder>(url);
    }
    throw ConfigError("unknown embedder kind '" + kind + "' (expected hashed|remote)");
}

} // namespace cogevo
