#pragma once

#include <nlohmann/json.hpp>

#include <string>

namespace tovo {

using json = nlohmann::json;

/// Parse a whole document, reporting the 1-based line of the failure.
json parse_json(const std::string& text, const std::string& origin,
                bool allow_comments = false);

std::string read_file(const std::string& path);

/// Write via a ".partial" sidecar and rename, so a crash never leaves a
/// truncated file at the target path.
void write_file_atomic(const std::string& path, const std::string& content);

void append_line(const std::string& path, const std::string& line);

/// Canonical serialization: sorted keys (nlohmann objects are ordered maps),
/// no insignificant whitespace, shortest round-trip float form. Golden-file
/// and byte-identity tests rely on this being the only writer.
std::string canonical_dump(const json& value);

}  // namespace tovo
