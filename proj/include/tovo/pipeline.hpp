#pragma once

#include "tovo/dataset.hpp"
#include "tovo/eval.hpp"
#include "tovo/judge.hpp"
#include "tovo/simharness.hpp"
#include "tovo/sourcing.hpp"
#include "tovo/taxonomy.hpp"
#include "tovo/voting.hpp"

#include <cstdint>
#include <string>
#include <vector>

namespace tovo {

struct ResponderConfig {
    std::string type = "passthrough";  // passthrough | mock | http
    std::string endpoint;
    std::string model;
    int max_retries = 1;

    json to_json() const;
    static ResponderConfig from_json(const json& j);
};

/// Fully resolved run configuration. The manifest records it verbatim, so a
/// run is reproducible from its manifest alone.
struct RunConfig {
    std::string corpus;
    std::vector<std::string> registry_paths;  // empty -> builtins
    std::string roster_path;                  // empty -> default six-judge roster
    int panel_size = 3;
    int k_min = 1;
    int k_max = 6;
    double threshold = 0.5;
    std::string prefilter_target = "response";
    std::string scorer = "lexicon";  // lexicon | remote:<url>
    std::size_t n_single = 5000;
    std::size_t n_multi = 5000;
    std::uint64_t seed = 0;
    int parallelism = 4;
    std::string out_dir;
    std::string template_id = "reasoning-v1";
    bool per_metric_prompts = false;
    bool consensus_per_metric = false;
    bool stamp = false;  // wall-clock timestamps break rerun byte-identity, so opt-in
    ResponderConfig responder;

    json to_json() const;
    static RunConfig from_json(const json& j);
    static RunConfig from_file(const std::string& path);

    /// Deterministic run id derived from the resolved config.
    std::string run_id() const;
};

struct ValidatedRun {
    RunConfig config;
    Registry registry;
    std::vector<JudgeProfile> roster;
    PromptTemplate prompt_template;
};

/// Check every config invariant (referenced files exist, panel odd and
/// within the roster, k-range within the registry, threshold in range)
/// without touching any backend.
ValidatedRun validate_run(const RunConfig& config);

struct BuildResult {
    RunManifest manifest;
    std::string dataset_path;
    std::string manifest_path;
    std::string vote_log_path;
};

/// The end-to-end dataset build:
/// ingest -> prefilter -> sample -> respond -> assign -> vote -> rationale -> emit.
/// Crash-resumable through the vote log; identical config+seed reproduces
/// identical bytes.
BuildResult run_build(const RunConfig& config);

}  // namespace tovo
