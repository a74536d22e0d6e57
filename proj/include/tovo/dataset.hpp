#pragma once

#include "tovo/sourcing.hpp"
#include "tovo/voting.hpp"

#include <cstdint>
#include <map>
#include <string>
#include <vector>

namespace tovo {

inline constexpr int kDatasetSchemaVersion = 1;

/// One emitted dataset row: the sample, what it was judged against, the
/// majority labels, the selected rationales, and enough provenance to replay
/// the run.
struct GoldRecord {
    struct RationaleEntry {
        std::string judge_id;
        std::string text;

        bool operator==(const RationaleEntry&) const = default;
    };

    struct Provenance {
        Panel panel;
        std::map<std::string, std::uint64_t> seeds;
        std::string template_id;
        std::string run_id;
        std::map<std::string, std::string> timestamps;
        std::vector<std::string> empty_rationale;  // metrics flagged EmptyRationale

        bool operator==(const Provenance&) const = default;
    };

    Sample sample;
    std::vector<std::pair<std::string, int>> metrics;  // (metric_id, definition_version)
    std::map<std::string, int> labels;
    std::map<std::string, RationaleEntry> rationales;
    Provenance provenance;

    /// Throws unless labels/metrics/rationales line up (EmptyRationale
    /// metrics may lack a rationale entry).
    void validate() const;

    json to_json() const;
    static GoldRecord from_json(const json& j);
};

struct RunCounts {
    std::size_t ingested = 0;
    std::size_t filtered = 0;
    std::size_t sampled = 0;
    std::size_t voted = 0;
    std::size_t dropped = 0;
};

struct RunManifest {
    std::string run_id;
    std::string registry_hash;  // hex
    json resolved_config;
    json roster;
    std::map<std::string, std::uint64_t> seeds;
    RunCounts counts;
    std::string timestamp;     // empty unless the run was stamped
    std::string failed_stage;  // empty when the run completed

    /// Enforces sampled == voted + dropped.
    void validate() const;

    json to_json() const;
    static RunManifest from_json(const json& j);
};

/// Write one canonical JSON line per record ("tovo_schema": 1 on every
/// line). All-or-nothing: on failure no partial file remains at path.
std::size_t emit(const std::vector<GoldRecord>& records, const std::string& path);

struct LoadResult {
    std::vector<GoldRecord> records;
    std::size_t quarantined = 0;  // invalid lines, copied to <path>.rejected
};

LoadResult load(const std::string& path);

/// Seed-deterministic disjoint partitions; fractions must sum to 1 (1e-9).
/// Sizes follow largest-remainder allocation, and records keep their input
/// order inside each partition.
std::map<std::string, std::vector<GoldRecord>> split(const std::vector<GoldRecord>& records,
                                                     const std::map<std::string, double>& fractions,
                                                     std::uint64_t seed);

}  // namespace tovo
