#pragma once

#include <algorithm>
#include <cctype>
#include <optional>
#include <string>
#include <vector>

#include <httplib.h>

#include "nftaudit/fetcher.hpp"

namespace nftaudit {

struct HttpTarget {
    std::string scheme; // "http" only in this build
    std::string host;   // lowercased
    int port = 80;
    std::string path; // path plus query, at least "/"
};

// Just enough url surgery to drive a plain-http client. Https needs a TLS
// build of the transport and is rejected here; so are urls with credentials.
inline std::optional<HttpTarget> parse_http_url(const std::string& url) {
    size_t sep = url.find("://");
    if (sep == std::string::npos) return std::nullopt;
    HttpTarget t;
    t.scheme = url.substr(0, sep);
    std::transform(t.scheme.begin(), t.scheme.end(), t.scheme.begin(),
                   [](unsigned char c) { return char(std::tolower(c)); });
    if (t.scheme != "http") return std::nullopt;

    size_t auth_begin = sep + 3;
    size_t auth_end = url.find_first_of("/?#", auth_begin);
    std::string authority = url.substr(
        auth_begin, auth_end == std::string::npos ? std::string::npos : auth_end - auth_begin);
    if (authority.empty() || authority.find('@') != std::string::npos) return std::nullopt;

    size_t colon = authority.rfind(':');
    if (colon != std::string::npos) {
        std::string port_text = authority.substr(colon + 1);
        if (port_text.empty() ||
            !std::all_of(port_text.begin(), port_text.end(),
                         [](unsigned char c) { return std::isdigit(c); }))
            return std::nullopt;
        long p = std::stol(port_text);
        if (p < 1 || p > 65535) return std::nullopt;
        t.port = int(p);
        authority.resize(colon);
    }
    if (authority.empty()) return std::nullopt;
    t.host = authority;
    std::transform(t.host.begin(), t.host.end(), t.host.begin(),
                   [](unsigned char c) { return char(std::tolower(c)); });

    t.path = auth_end == std::string::npos ? std::string("/") : url.substr(auth_end);
    if (t.path.empty() || t.path[0] == '?' || t.path[0] == '#') t.path.insert(0, "/");
    if (size_t frag = t.path.find('#'); frag != std::string::npos) t.path.resize(frag);
    return t;
}

inline bool host_allowed(const std::string& host, std::span<const std::string> allowlist) {
    for (const auto& a : allowlist) {
        std::string low = a;
        std::transform(low.begin(), low.end(), low.begin(),
                       [](unsigned char c) { return char(std::tolower(c)); });
        if (low == host) return true;
    }
    return false;
}

// Live transport. Never follows redirects (a 301 is a result, not a detour),
// gives every phase a bounded wait, and only speaks to allowlisted hosts.
class HttpFetcher : public Fetcher {
  public:
    explicit HttpFetcher(std::vector<std::string> allowlist, time_t timeout_seconds = 10)
        : allowlist_(std::move(allowlist)), timeout_(timeout_seconds) {}

    int fetch(FetchMethod method, const std::string& url) override {
        auto target = parse_http_url(url);
        if (!target || !host_allowed(target->host, allowlist_)) return 0;

        httplib::Client client(target->host, target->port);
        client.set_connection_timeout(timeout_, 0);
        client.set_read_timeout(timeout_, 0);
        client.set_write_timeout(timeout_, 0);
        client.set_follow_location(false);

        auto res = method == FetchMethod::head ? client.Head(target->path)
                                               : client.Get(target->path);
        return res ? res->status : 0;
    }

  private:
    std::vector<std::string> allowlist_;
    time_t timeout_;
};

} // namespace nftaudit
