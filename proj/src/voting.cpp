#include "tovo/voting.hpp"

#include "tovo/errors.hpp"
#include "tovo/rng.hpp"

#include <spdlog/spdlog.h>

#include <algorithm>
#include <filesystem>
#include <fstream>
#include <sstream>

namespace tovo {

json Panel::to_json() const {
    return json{{"sample_id", sample_id}, {"judge_ids", judge_ids}, {"rng_seed", rng_seed}};
}

Panel Panel::from_json(const json& j) {
    Panel p;
    p.sample_id = j.at("sample_id").get<std::string>();
    p.judge_ids = j.at("judge_ids").get<std::vector<std::string>>();
    p.rng_seed = j.value("rng_seed", 0ull);
    return p;
}

Panel select_panel(const std::vector<JudgeProfile>& roster, int panel_size,
                   const std::string& sample_id, std::uint64_t seed) {
    if (panel_size < 1 || panel_size % 2 == 0) throw Error::even_panel(panel_size);
    if (static_cast<std::size_t>(panel_size) > roster.size()) {
        throw Error::roster_exhausted("panel size " + std::to_string(panel_size) +
                                      " exceeds roster of " + std::to_string(roster.size()));
    }
    SeededRng rng(seed);
    Panel panel;
    panel.sample_id = sample_id;
    panel.rng_seed = seed;
    for (std::size_t idx : rng.sample_indices(static_cast<std::size_t>(panel_size), roster.size())) {
        panel.judge_ids.push_back(roster[idx].judge_id);
    }
    return panel;
}

int aggregate_votes(const std::vector<std::pair<std::string, int>>& verdicts) {
    if (verdicts.empty() || verdicts.size() % 2 == 0) {
        throw Error::even_panel(static_cast<int>(verdicts.size()));
    }
    std::size_t positives = 0;
    for (const auto& [judge_id, label] : verdicts) {
        if (label != 0 && label != 1) {
            throw Error::config("non-binary label " + std::to_string(label) + " from judge " + judge_id);
        }
        positives += static_cast<std::size_t>(label);
    }
    return positives * 2 > verdicts.size() ? 1 : 0;
}

Panel repair_panel(const Panel& panel, const std::string& failed_judge,
                   const std::vector<JudgeProfile>& roster, std::uint64_t seed) {
    const auto slot = std::find(panel.judge_ids.begin(), panel.judge_ids.end(), failed_judge);
    if (slot == panel.judge_ids.end()) {
        throw Error::config("judge '" + failed_judge + "' is not in the panel for sample " +
                            panel.sample_id);
    }
    std::vector<std::string> candidates;
    for (const auto& profile : roster) {
        if (std::find(panel.judge_ids.begin(), panel.judge_ids.end(), profile.judge_id) ==
            panel.judge_ids.end()) {
            candidates.push_back(profile.judge_id);
        }
    }
    if (candidates.empty()) {
        throw Error::roster_exhausted("no replacement left in roster for failed judge '" +
                                      failed_judge + "' on sample " + panel.sample_id);
    }
    SeededRng rng(seed);
    const std::string replacement = candidates[rng.bounded(candidates.size())];
    Panel repaired = panel;
    repaired.judge_ids[static_cast<std::size_t>(slot - panel.judge_ids.begin())] = replacement;
    spdlog::info("panel repair on sample {}: {} -> {}", panel.sample_id, failed_judge, replacement);
    return repaired;
}

json VoteRecord::to_json() const {
    json verdicts_json = json::array();
    for (const auto& [judge_id, label] : verdicts) {
        verdicts_json.push_back(json{{"judge_id", judge_id}, {"label", label}});
    }
    return json{{"sample_id", sample_id},
                {"metric_id", metric_id},
                {"panel", panel.to_json()},
                {"verdicts", std::move(verdicts_json)},
                {"majority_label", majority_label},
                {"rationale_judge_id", rationale_judge_id},
                {"rationale", rationale},
                {"empty_rationale", empty_rationale}};
}

VoteRecord VoteRecord::from_json(const json& j) {
    VoteRecord r;
    r.sample_id = j.at("sample_id").get<std::string>();
    r.metric_id = j.at("metric_id").get<std::string>();
    r.panel = Panel::from_json(j.at("panel"));
    for (const auto& v : j.at("verdicts")) {
        r.verdicts.emplace_back(v.at("judge_id").get<std::string>(), v.at("label").get<int>());
    }
    r.majority_label = j.at("majority_label").get<int>();
    r.rationale_judge_id = j.value("rationale_judge_id", std::string());
    r.rationale = j.value("rationale", std::string());
    r.empty_rationale = j.value("empty_rationale", false);
    return r;
}

JudgeConsensusTable compute_judge_consensus(const std::vector<VoteRecord>& records) {
    JudgeConsensusTable table;
    for (const auto& record : records) {
        for (const auto& [judge_id, label] : record.verdicts) {
            auto& entry = table[judge_id];
            ++entry.comparisons;
            if (label == record.majority_label) ++entry.agreements;
        }
    }
    for (auto& [judge_id, entry] : table) {
        entry.rate = 100.0 * static_cast<double>(entry.agreements) /
                     static_cast<double>(entry.comparisons);
    }
    return table;
}

RationaleChoice select_rationale(const std::vector<JudgeVerdict>& verdicts,
                                 const std::string& metric_id, int majority,
                                 const JudgeConsensusTable& consensus) {
    struct Candidate {
        double rate;
        std::string judge_id;
        const JudgeVerdict* verdict;
    };
    std::vector<Candidate> agreeing;
    for (const auto& verdict : verdicts) {
        if (verdict.status != VerdictStatus::ok) continue;
        auto it = verdict.labels.find(metric_id);
        if (it == verdict.labels.end() || it->second != majority) continue;
        auto entry = consensus.find(verdict.judge_id);
        const double rate = entry == consensus.end() ? -1.0 : entry->second.rate;
        agreeing.push_back(Candidate{rate, verdict.judge_id, &verdict});
    }
    if (agreeing.empty()) {
        throw Error::config("no verdict agrees with the majority for metric " + metric_id);
    }
    std::sort(agreeing.begin(), agreeing.end(), [](const Candidate& a, const Candidate& b) {
        if (a.rate != b.rate) return a.rate > b.rate;
        return a.judge_id < b.judge_id;
    });
    for (const auto& candidate : agreeing) {
        auto it = candidate.verdict->rationales.find(metric_id);
        if (it != candidate.verdict->rationales.end() && !it->second.empty()) {
            return RationaleChoice{candidate.judge_id, it->second, false};
        }
    }
    // every agreeing rationale empty: keep the top-ranked judge, flag the record
    return RationaleChoice{agreeing.front().judge_id, "", true};
}

std::vector<VoteRecord> aggregate_sample(const SampleVotes& votes) {
    std::vector<VoteRecord> records;
    records.reserve(votes.metric_ids.size());
    for (const auto& metric_id : votes.metric_ids) {
        VoteRecord record;
        record.sample_id = votes.sample_id;
        record.metric_id = metric_id;
        record.panel = votes.panel;
        for (const auto& verdict : votes.verdicts) {
            if (verdict.status != VerdictStatus::ok) continue;
            auto it = verdict.labels.find(metric_id);
            if (it == verdict.labels.end()) {
                throw Error::config("ok verdict from " + verdict.judge_id +
                                    " is missing metric " + metric_id);
            }
            record.verdicts.emplace_back(verdict.judge_id, it->second);
        }
        record.majority_label = aggregate_votes(record.verdicts);
        records.push_back(std::move(record));
    }
    return records;
}

VotingOutcome finalize_votes(const std::vector<SampleVotes>& all_votes,
                             ConsensusGranularity granularity) {
    VotingOutcome outcome;
    std::vector<std::size_t> sample_of_record;
    for (std::size_t s = 0; s < all_votes.size(); ++s) {
        for (auto& record : aggregate_sample(all_votes[s])) {
            outcome.records.push_back(std::move(record));
            sample_of_record.push_back(s);
        }
    }

    outcome.consensus = compute_judge_consensus(outcome.records);
    if (granularity == ConsensusGranularity::per_metric) {
        std::map<std::string, std::vector<VoteRecord>> by_metric;
        for (const auto& record : outcome.records) by_metric[record.metric_id].push_back(record);
        for (const auto& [metric_id, records] : by_metric) {
            outcome.per_metric[metric_id] = compute_judge_consensus(records);
        }
    }

    for (std::size_t i = 0; i < outcome.records.size(); ++i) {
        VoteRecord& record = outcome.records[i];
        const SampleVotes& votes = all_votes[sample_of_record[i]];
        const JudgeConsensusTable& table = granularity == ConsensusGranularity::per_metric
                                               ? outcome.per_metric[record.metric_id]
                                               : outcome.consensus;
        RationaleChoice choice =
            select_rationale(votes.verdicts, record.metric_id, record.majority_label, table);
        record.rationale_judge_id = choice.judge_id;
        record.rationale = std::move(choice.rationale);
        record.empty_rationale = choice.empty_rationale;
    }
    return outcome;
}

void VoteLog::append(const JudgeVerdict& verdict) {
    std::lock_guard<std::mutex> lock(mutex_);
    append_line(path_, canonical_dump(verdict.to_json()));
}

std::map<VoteLog::Key, JudgeVerdict> VoteLog::load(const std::string& path) {
    std::map<Key, JudgeVerdict> verdicts;
    if (!std::filesystem::exists(path)) return verdicts;
    std::ifstream in(path, std::ios::binary);
    if (!in) throw Error::io("cannot open vote log " + path);
    std::string line;
    std::size_t line_no = 0;
    while (std::getline(in, line)) {
        ++line_no;
        if (line.empty()) continue;
        try {
            JudgeVerdict verdict = JudgeVerdict::from_json(json::parse(line));
            verdicts[{verdict.sample_id, verdict.judge_id}] = std::move(verdict);
        } catch (const std::exception& e) {
            spdlog::warn("{}:{}: skipping unreadable vote-log line: {}", path, line_no, e.what());
        }
    }
    return verdicts;
}

}  // namespace tovo
