#pragma once

#include "tovo/eval.hpp"
#include "tovo/voting.hpp"

#include <cstdint>
#include <string>
#include <vector>

namespace tovo {

/// A synthetic judge that emits the planted label with probability
/// `accuracy` and the flipped label otherwise, independently per
/// (sample, metric).
struct SyntheticJudgeSpec {
    std::string judge_id;
    double accuracy = 1.0;
    std::string rationale_stub = "synthetic rationale";
    std::uint64_t rng_seed = 0;

    json to_json() const;
    static SyntheticJudgeSpec from_json(const json& j);
};

std::vector<SyntheticJudgeSpec> load_judge_specs(const std::string& path);

/// IID Bernoulli(positive_rate) truth labels over n_samples x metrics.
LabelSource plant_truth(std::size_t n_samples, const std::vector<std::string>& metrics,
                        double positive_rate, std::uint64_t seed);

struct SyntheticRun {
    LabelSource gold;
    JudgeConsensusTable consensus;
    std::vector<VoteRecord> records;
    std::map<std::string, std::size_t> rationale_counts;  // judge_id -> times selected
    double gold_accuracy = 0.0;                           // % agreement of gold with truth
};

/// Drive the real voting machinery (panel selection, aggregation, consensus
/// ranking, rationale selection) with synthetic verdicts against the planted
/// truth.
SyntheticRun run_synthetic_vote(const std::vector<SyntheticJudgeSpec>& specs,
                                const LabelSource& truth, int panel_size, std::uint64_t seed);

}  // namespace tovo
