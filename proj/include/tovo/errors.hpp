#pragma once

#include <stdexcept>
#include <string>

namespace tovo {

enum class ErrorCode {
    duplicate_metric,
    invalid_metric,
    empty_registry,
    unknown_metric,
    io_error,
    corpus_rejected,
    stratum_exhausted,
    generation_failed,
    backend_failed,
    even_panel_rejected,
    roster_exhausted,
    empty_comparison,
    invalid_fractions,
    adapter_degraded,
    invalid_config,
};

/// Every failure the pipeline can raise carries one of the codes above so
/// callers (and the CLI exit-code mapping) can dispatch without string
/// matching.
class Error : public std::runtime_error {
public:
    Error(ErrorCode code, std::string message)
        : std::runtime_error(std::move(message)), code_(code) {}

    ErrorCode code() const noexcept { return code_; }

    static Error duplicate_metric(const std::string& id) {
        return {ErrorCode::duplicate_metric, "duplicate metric id: " + id};
    }
    static Error invalid_metric(const std::string& id, const std::string& why) {
        return {ErrorCode::invalid_metric, "invalid metric '" + id + "': " + why};
    }
    static Error empty_registry() {
        return {ErrorCode::empty_registry, "metric registry is empty"};
    }
    static Error unknown_metric(const std::string& id) {
        return {ErrorCode::unknown_metric, "unknown metric id: " + id};
    }
    static Error io(const std::string& what) {
        return {ErrorCode::io_error, what};
    }
    static Error corpus_rejected(std::size_t malformed, std::size_t total) {
        return {ErrorCode::corpus_rejected,
                "corpus rejected: " + std::to_string(malformed) + " of " +
                    std::to_string(total) + " lines malformed (>10%)"};
    }
    static Error stratum_exhausted(const std::string& origin, std::size_t have,
                                   std::size_t want) {
        return {ErrorCode::stratum_exhausted,
                "stratum '" + origin + "' exhausted: have " + std::to_string(have) +
                    ", want " + std::to_string(want)};
    }
    static Error generation_failed() {
        return {ErrorCode::generation_failed, "response generation failed for every item"};
    }
    static Error backend_failed(const std::string& judge_id, const std::string& why) {
        return {ErrorCode::backend_failed, "judge '" + judge_id + "' failed: " + why};
    }
    static Error even_panel(int size) {
        return {ErrorCode::even_panel_rejected,
                "panel size must be odd, got " + std::to_string(size)};
    }
    static Error roster_exhausted(const std::string& what) {
        return {ErrorCode::roster_exhausted, what};
    }
    static Error empty_comparison() {
        return {ErrorCode::empty_comparison,
                "empty comparison: no (sample, metric) keys are shared between the sources"};
    }
    static Error invalid_fractions(const std::string& why) {
        return {ErrorCode::invalid_fractions, "invalid split fractions: " + why};
    }
    static Error adapter_degraded(std::size_t failures, std::size_t attempts) {
        return {ErrorCode::adapter_degraded,
                "adapter degraded: " + std::to_string(failures) + " of " +
                    std::to_string(attempts) + " requests failed (>20%)"};
    }
    static Error config(const std::string& why) {
        return {ErrorCode::invalid_config, why};
    }

private:
    ErrorCode code_;
};

}  // namespace tovo
