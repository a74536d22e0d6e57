#include "tovo/json_util.hpp"

#include "tovo/errors.hpp"

#include <cstdio>
#include <filesystem>
#include <fstream>
#include <sstream>

namespace tovo {

namespace {

std::size_t line_of_offset(const std::string& text, std::size_t offset) {
    std::size_t line = 1;
    for (std::size_t i = 0; i < offset && i < text.size(); ++i) {
        if (text[i] == '\n') ++line;
    }
    return line;
}

}  // namespace

json parse_json(const std::string& text, const std::string& origin,
                bool allow_comments) {
    try {
        return json::parse(text, nullptr, true, allow_comments);
    } catch (const json::parse_error& e) {
        // e.byte is 1-based offset of the failure
        const std::size_t line = line_of_offset(text, e.byte > 0 ? e.byte - 1 : 0);
        throw Error::config(origin + ":" + std::to_string(line) + ": " + e.what());
    }
}

std::string read_file(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw Error::io("cannot open " + path);
    std::ostringstream buf;
    buf << in.rdbuf();
    if (in.bad()) throw Error::io("read failure on " + path);
    return buf.str();
}

void write_file_atomic(const std::string& path, const std::string& content) {
    const std::string partial = path + ".partial";
    {
        std::ofstream out(partial, std::ios::binary | std::ios::trunc);
        if (!out) throw Error::io("cannot open " + partial + " for writing");
        out << content;
        out.flush();
        if (!out) {
            out.close();
            std::remove(partial.c_str());
            throw Error::io("write failure on " + partial);
        }
    }
    std::error_code ec;
    std::filesystem::rename(partial, path, ec);
    if (ec) {
        std::remove(partial.c_str());
        throw Error::io("cannot rename " + partial + " to " + path + ": " + ec.message());
    }
}

void append_line(const std::string& path, const std::string& line) {
    std::ofstream out(path, std::ios::binary | std::ios::app);
    if (!out) throw Error::io("cannot open " + path + " for append");
    out << line << '\n';
    out.flush();
    if (!out) throw Error::io("append failure on " + path);
}

std::string canonical_dump(const json& value) {
    return value.dump(-1, ' ', false, json::error_handler_t::replace);
}

}  // namespace tovo
