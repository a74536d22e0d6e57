#include "tovo/simharness.hpp"

#include "tovo/errors.hpp"
#include "tovo/rng.hpp"

#include <cstdio>
#include <map>

namespace tovo {

json SyntheticJudgeSpec::to_json() const {
    return json{{"judge_id", judge_id},
                {"accuracy", accuracy},
                {"rationale_stub", rationale_stub},
                {"rng_seed", rng_seed}};
}

SyntheticJudgeSpec SyntheticJudgeSpec::from_json(const json& j) {
    SyntheticJudgeSpec spec;
    spec.judge_id = j.at("judge_id").get<std::string>();
    spec.accuracy = j.at("accuracy").get<double>();
    if (spec.accuracy < 0.0 || spec.accuracy > 1.0) {
        throw Error::config("accuracy for judge '" + spec.judge_id + "' must be in [0, 1]");
    }
    spec.rationale_stub = j.value("rationale_stub", std::string("synthetic rationale"));
    spec.rng_seed = j.value("rng_seed", 0ull);
    return spec;
}

std::vector<SyntheticJudgeSpec> load_judge_specs(const std::string& path) {
    const json doc = parse_json(read_file(path), path, /*allow_comments=*/true);
    if (!doc.is_array()) throw Error::config(path + ": judge spec file must be a JSON array");
    std::vector<SyntheticJudgeSpec> specs;
    for (const auto& entry : doc) specs.push_back(SyntheticJudgeSpec::from_json(entry));
    return specs;
}

LabelSource plant_truth(std::size_t n_samples, const std::vector<std::string>& metrics,
                        double positive_rate, std::uint64_t seed) {
    if (positive_rate < 0.0 || positive_rate > 1.0) {
        throw Error::config("positive_rate must be in [0, 1]");
    }
    if (metrics.empty()) throw Error::config("plant_truth needs at least one metric");
    LabelSource truth;
    truth.source_id = "truth";
    SeededRng rng(seed);
    char buf[24];
    for (std::size_t i = 0; i < n_samples; ++i) {
        std::snprintf(buf, sizeof(buf), "s%08zu", i);
        for (const auto& metric : metrics) {
            truth.add(buf, metric, rng.bernoulli(positive_rate) ? 1 : 0);
        }
    }
    return truth;
}

SyntheticRun run_synthetic_vote(const std::vector<SyntheticJudgeSpec>& specs,
                                const LabelSource& truth, int panel_size, std::uint64_t seed) {
    if (panel_size < 1 || panel_size % 2 == 0) throw Error::even_panel(panel_size);
    if (static_cast<std::size_t>(panel_size) > specs.size()) {
        throw Error::roster_exhausted("panel size exceeds synthetic roster");
    }

    // group the truth by sample (std::map keys keep samples in sorted order)
    std::map<std::string, std::vector<std::pair<std::string, int>>> by_sample;
    for (const auto& [key, label] : truth.labels) {
        by_sample[key.first].emplace_back(key.second, label);
    }

    std::vector<JudgeProfile> roster;
    std::map<std::string, const SyntheticJudgeSpec*> spec_of;
    for (const auto& spec : specs) {
        JudgeProfile profile;
        profile.judge_id = spec.judge_id;
        profile.endpoint = "mock://synthetic";
        roster.push_back(std::move(profile));
        spec_of[spec.judge_id] = &spec;
    }

    std::vector<SampleVotes> all_votes;
    all_votes.reserve(by_sample.size());
    for (const auto& [sample_id, metric_labels] : by_sample) {
        SampleVotes votes;
        votes.sample_id = sample_id;
        votes.panel = select_panel(roster, panel_size, sample_id,
                                   derive_seed(seed, "panel:" + sample_id));
        for (const auto& [metric_id, label] : metric_labels) votes.metric_ids.push_back(metric_id);

        for (const auto& judge_id : votes.panel.judge_ids) {
            const SyntheticJudgeSpec& spec = *spec_of.at(judge_id);
            SeededRng rng(derive_seed(seed ^ spec.rng_seed, "verdict:" + judge_id + ":" + sample_id));
            JudgeVerdict verdict;
            verdict.judge_id = judge_id;
            verdict.sample_id = sample_id;
            verdict.status = VerdictStatus::ok;
            for (const auto& [metric_id, truth_label] : metric_labels) {
                const bool faithful = rng.bernoulli(spec.accuracy);
                verdict.labels[metric_id] = faithful ? truth_label : 1 - truth_label;
                verdict.rationales[metric_id] = spec.rationale_stub;
            }
            votes.verdicts.push_back(std::move(verdict));
        }
        all_votes.push_back(std::move(votes));
    }

    const VotingOutcome outcome = finalize_votes(all_votes);

    SyntheticRun run;
    run.records = outcome.records;
    run.consensus = outcome.consensus;
    run.gold.source_id = "synthetic-gold";
    std::size_t agree = 0;
    for (const auto& record : run.records) {
        run.gold.add(record.sample_id, record.metric_id, record.majority_label);
        ++run.rationale_counts[record.rationale_judge_id];
        if (truth.labels.at({record.sample_id, record.metric_id}) == record.majority_label) {
            ++agree;
        }
    }
    run.gold_accuracy =
        100.0 * static_cast<double>(agree) / static_cast<double>(run.records.size());
    return run;
}

}  // namespace tovo
