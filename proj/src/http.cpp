#define CPPHTTPLIB_OPENSSL_SUPPORT
#include <httplib.h>

#include "tovo/http.hpp"

#include "tovo/errors.hpp"

namespace tovo {

std::pair<std::string, std::string> split_url(const std::string& url) {
    const auto scheme_end = url.find("://");
    if (scheme_end == std::string::npos) {
        throw Error::config("endpoint URL missing scheme: " + url);
    }
    const auto path_start = url.find('/', scheme_end + 3);
    if (path_start == std::string::npos) {
        return {url, "/"};
    }
    return {url.substr(0, path_start), url.substr(path_start)};
}

HttpResult http_post_json(const std::string& url, const json& body,
                          const std::vector<std::pair<std::string, std::string>>& headers,
                          std::chrono::milliseconds timeout) {
    const auto [base, path] = split_url(url);
    httplib::Client client(base);
    client.set_connection_timeout(timeout);
    client.set_read_timeout(timeout);
    client.set_write_timeout(timeout);

    httplib::Headers hdrs;
    for (const auto& [k, v] : headers) hdrs.emplace(k, v);

    auto result = client.Post(path, hdrs, body.dump(), "application/json");
    if (!result) {
        throw Error::io("POST " + url + " failed: " + httplib::to_string(result.error()));
    }
    return {result->status, result->body};
}

}  // namespace tovo
