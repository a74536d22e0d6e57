#pragma once

#include "tovo/errors.hpp"

#include <doctest.h>

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <string>

namespace tovo::test {

/// Self-cleaning scratch directory for file-round-trip tests.
class TempDir {
public:
    TempDir() {
        auto base = std::filesystem::temp_directory_path();
        for (int i = 0; i < 10000; ++i) {
            auto candidate = base / ("tovo-test-" + std::to_string(::rand()) + "-" + std::to_string(i));
            std::error_code ec;
            if (std::filesystem::create_directory(candidate, ec)) {
                path_ = candidate;
                return;
            }
        }
        throw std::runtime_error("could not create temp dir");
    }
    ~TempDir() {
        std::error_code ec;
        std::filesystem::remove_all(path_, ec);
    }
    TempDir(const TempDir&) = delete;
    TempDir& operator=(const TempDir&) = delete;

    std::string file(const std::string& name) const { return (path_ / name).string(); }
    std::string dir() const { return path_.string(); }

private:
    std::filesystem::path path_;
};

inline void write_text(const std::string& path, const std::string& content) {
    std::ofstream out(path, std::ios::binary);
    out << content;
}

inline std::string slurp(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    return {std::istreambuf_iterator<char>(in), std::istreambuf_iterator<char>()};
}

inline std::string fixtures_dir() {
    const char* dir = std::getenv("TOVO_FIXTURES");
    REQUIRE_MESSAGE(dir != nullptr, "TOVO_FIXTURES env var not set");
    return dir;
}

inline std::string cli_path() {
    const char* path = std::getenv("TOVO_CLI");
    REQUIRE_MESSAGE(path != nullptr, "TOVO_CLI env var not set");
    return path;
}

#define CHECK_THROWS_CODE(expr, expected_code)                     \
    do {                                                           \
        try {                                                      \
            (void)(expr);                                          \
            FAIL("expected tovo::Error from " #expr);              \
        } catch (const tovo::Error& e) {                           \
            CHECK(e.code() == (expected_code));                    \
        }                                                          \
    } while (0)

}  // namespace tovo::test
