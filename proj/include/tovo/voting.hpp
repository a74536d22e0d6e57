#pragma once

#include "tovo/judge.hpp"

#include <cstdint>
#include <map>
#include <mutex>
#include <string>
#include <utility>
#include <vector>

namespace tovo {

struct Panel {
    std::string sample_id;
    std::vector<std::string> judge_ids;  // distinct, odd count
    std::uint64_t rng_seed = 0;

    json to_json() const;
    static Panel from_json(const json& j);
};

/// Uniform without-replacement draw of panel_size judges from the roster.
/// panel_size must be odd so a binary majority can never tie.
Panel select_panel(const std::vector<JudgeProfile>& roster, int panel_size,
                   const std::string& sample_id, std::uint64_t seed);

/// Strict majority of an odd number of binary labels.
int aggregate_votes(const std::vector<std::pair<std::string, int>>& verdicts);

/// Replace a failed judge with a uniformly drawn roster member not already
/// in the panel. Throws RosterExhausted when nobody is left.
Panel repair_panel(const Panel& panel, const std::string& failed_judge,
                   const std::vector<JudgeProfile>& roster, std::uint64_t seed);

/// One (sample, metric) row of the vote ledger.
struct VoteRecord {
    std::string sample_id;
    std::string metric_id;
    Panel panel;
    std::vector<std::pair<std::string, int>> verdicts;  // (judge_id, label)
    int majority_label = 0;
    std::string rationale_judge_id;
    std::string rationale;
    bool empty_rationale = false;

    json to_json() const;
    static VoteRecord from_json(const json& j);
};

struct JudgeConsensusEntry {
    std::size_t agreements = 0;
    std::size_t comparisons = 0;
    double rate = 0.0;  // percentage, 100 * agreements / comparisons
};

/// judge_id -> agreement with the panel majority, over every ok verdict the
/// judge cast. Judges with zero comparisons do not appear.
using JudgeConsensusTable = std::map<std::string, JudgeConsensusEntry>;

JudgeConsensusTable compute_judge_consensus(const std::vector<VoteRecord>& records);

enum class ConsensusGranularity { global, per_metric };

struct RationaleChoice {
    std::string judge_id;
    std::string rationale;
    bool empty_rationale = false;
};

/// Among the judges whose verdict equals the majority, pick the one with the
/// highest consensus rate (ties broken by lexicographically smallest
/// judge_id). A chosen judge with an empty rationale falls back to the next
/// ranked agreeing judge; all empty sets the EmptyRationale flag.
RationaleChoice select_rationale(const std::vector<JudgeVerdict>& verdicts,
                                 const std::string& metric_id, int majority,
                                 const JudgeConsensusTable& consensus);

/// Everything the panel produced for one sample: the final (post-repair)
/// panel, its ok verdicts, and the metrics that were assigned.
struct SampleVotes {
    std::string sample_id;
    Panel panel;
    std::vector<std::string> metric_ids;
    std::vector<JudgeVerdict> verdicts;  // status ok, one per panel judge
};

/// Pass 1: majorities per (sample, metric). Rationale fields left empty.
std::vector<VoteRecord> aggregate_sample(const SampleVotes& votes);

struct VotingOutcome {
    std::vector<VoteRecord> records;
    JudgeConsensusTable consensus;                            // global table
    std::map<std::string, JudgeConsensusTable> per_metric;    // populated for per_metric runs
};

/// The two-pass finalization: aggregate every sample, rank judges by
/// consensus against the majorities, then attach rationales. Deterministic
/// given its input, so replaying persisted verdicts reproduces identical
/// records.
VotingOutcome finalize_votes(const std::vector<SampleVotes>& all_votes,
                             ConsensusGranularity granularity = ConsensusGranularity::global);

/// Append-only JSONL persistence for crash-resume. One JudgeVerdict per
/// line; a (sample_id, judge_id) pair already present is skipped on resume.
class VoteLog {
public:
    explicit VoteLog(std::string path) : path_(std::move(path)) {}

    const std::string& path() const { return path_; }
    void append(const JudgeVerdict& verdict);

    using Key = std::pair<std::string, std::string>;  // (sample_id, judge_id)
    static std::map<Key, JudgeVerdict> load(const std::string& path);

private:
    std::string path_;
    std::mutex mutex_;
};

}  // namespace tovo
