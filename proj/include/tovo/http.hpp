#pragma once

#include "tovo/json_util.hpp"

#include <chrono>
#include <string>
#include <utility>
#include <vector>

namespace tovo {

struct HttpResult {
    int status = 0;
    std::string body;
};

/// POST a JSON body to a full URL ("http://host:port/path"). Throws
/// Error::io on transport failure; HTTP status is returned, not thrown.
HttpResult http_post_json(const std::string& url, const json& body,
                          const std::vector<std::pair<std::string, std::string>>& headers = {},
                          std::chrono::milliseconds timeout = std::chrono::milliseconds(30000));

/// Split "scheme://host:port/path?query" into (scheme://host:port, /path?query).
std::pair<std::string, std::string> split_url(const std::string& url);

}  // namespace tovo
