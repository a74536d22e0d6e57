#include "tovo/voting.hpp"

#include "tovo/errors.hpp"
#include "tovo/rng.hpp"
#include "test_util.hpp"

#include <doctest.h>

#include <algorithm>
#include <set>

using namespace tovo;

namespace {

std::vector<JudgeProfile> roster_of(std::vector<std::string> ids) {
    std::vector<JudgeProfile> roster;
    for (auto& id : ids) {
        JudgeProfile p;
        p.judge_id = std::move(id);
        p.endpoint = "mock://x";
        roster.push_back(std::move(p));
    }
    return roster;
}

JudgeVerdict verdict_of(const std::string& judge, const std::string& sample,
                        std::map<std::string, int> labels,
                        std::map<std::string, std::string> rationales = {}) {
    JudgeVerdict v;
    v.judge_id = judge;
    v.sample_id = sample;
    v.labels = std::move(labels);
    for (const auto& [metric, label] : v.labels) {
        if (rationales.count(metric)) {
            v.rationales[metric] = rationales[metric];
        } else {
            v.rationales[metric] = judge + " explains " + metric;
        }
    }
    v.status = VerdictStatus::ok;
    return v;
}

/// Independent counting oracle for the majority of binary labels.
int brute_force_majority(const std::vector<int>& labels) {
    int ones = 0;
    for (int l : labels) ones += l;
    const int zeros = static_cast<int>(labels.size()) - ones;
    return ones > zeros ? 1 : 0;
}

}  // namespace

TEST_CASE("select_panel draws odd distinct panels deterministically") {
    const auto roster = roster_of({"a", "b", "c", "d", "e", "f"});

    SUBCASE("three of six") {
        const Panel panel = select_panel(roster, 3, "s1", 9);
        CHECK(panel.judge_ids.size() == 3);
        std::set<std::string> unique(panel.judge_ids.begin(), panel.judge_ids.end());
        CHECK(unique.size() == 3);
        for (const auto& id : panel.judge_ids) {
            CHECK(std::any_of(roster.begin(), roster.end(),
                              [&](const JudgeProfile& p) { return p.judge_id == id; }));
        }
    }

    SUBCASE("full roster when sizes match") {
        const auto small = roster_of({"a", "b", "c"});
        const Panel panel = select_panel(small, 3, "s1", 4);
        std::set<std::string> got(panel.judge_ids.begin(), panel.judge_ids.end());
        CHECK(got == std::set<std::string>{"a", "b", "c"});
    }

    SUBCASE("even size rejected") {
        CHECK_THROWS_CODE(select_panel(roster, 4, "s1", 0), ErrorCode::even_panel_rejected);
    }

    SUBCASE("roster too small") {
        CHECK_THROWS_CODE(select_panel(roster_of({"a"}), 3, "s1", 0),
                          ErrorCode::roster_exhausted);
    }

    SUBCASE("same seed same panel") {
        CHECK(select_panel(roster, 3, "s1", 17).judge_ids ==
              select_panel(roster, 3, "s1", 17).judge_ids);
    }

    SUBCASE("every C(6,3) combination is reachable") {
        std::set<std::set<std::string>> seen;
        for (std::uint64_t seed = 0; seed < 2000; ++seed) {
            const Panel p = select_panel(roster, 3, "s", seed);
            seen.insert(std::set<std::string>(p.judge_ids.begin(), p.judge_ids.end()));
        }
        CHECK(seen.size() == 20);
    }
}

TEST_CASE("aggregate_votes takes the strict majority of odd binary panels") {
    CHECK(aggregate_votes({{"a", 1}, {"b", 1}, {"c", 0}}) == 1);
    CHECK(aggregate_votes({{"a", 0}, {"b", 0}, {"c", 0}}) == 0);
    CHECK_THROWS_CODE(aggregate_votes({{"a", 1}, {"b", 0}}), ErrorCode::even_panel_rejected);
    CHECK_THROWS_CODE(aggregate_votes({}), ErrorCode::even_panel_rejected);
    CHECK_THROWS(aggregate_votes({{"a", 2}, {"b", 0}, {"c", 0}}));
}

TEST_CASE("aggregate_votes matches the exhaustive counting oracle") {
    for (std::size_t n : {std::size_t{3}, std::size_t{5}}) {
        for (std::uint32_t bits = 0; bits < (1u << n); ++bits) {
            std::vector<std::pair<std::string, int>> verdicts;
            std::vector<int> labels;
            for (std::size_t i = 0; i < n; ++i) {
                const int label = (bits >> i) & 1;
                verdicts.emplace_back("j" + std::to_string(i), label);
                labels.push_back(label);
            }
            CAPTURE(bits);
            CHECK(aggregate_votes(verdicts) == brute_force_majority(labels));
        }
    }
}

TEST_CASE("majority is invariant under permutation and flips with all votes") {
    SeededRng rng(5);
    for (int trial = 0; trial < 200; ++trial) {
        const std::size_t n = rng.bounded(2) ? 3 : 5;
        std::vector<std::pair<std::string, int>> verdicts;
        for (std::size_t i = 0; i < n; ++i) {
            verdicts.emplace_back("j" + std::to_string(i), static_cast<int>(rng.bounded(2)));
        }
        const int majority = aggregate_votes(verdicts);

        auto shuffled = verdicts;
        rng.shuffle(shuffled);
        CHECK(aggregate_votes(shuffled) == majority);

        auto flipped = verdicts;
        for (auto& [id, label] : flipped) label = 1 - label;
        CHECK(aggregate_votes(flipped) == 1 - majority);
    }
}

TEST_CASE("repair_panel replaces the failed judge from outside the panel") {
    const auto roster = roster_of({"a", "b", "c", "d", "e", "f"});
    Panel panel;
    panel.sample_id = "s1";
    panel.judge_ids = {"a", "b", "c"};

    SUBCASE("replacement comes from the remaining roster") {
        const Panel repaired = repair_panel(panel, "c", roster, 7);
        CHECK(repaired.judge_ids.size() == 3);
        CHECK(repaired.judge_ids[0] == "a");
        CHECK(repaired.judge_ids[1] == "b");
        const std::string& replacement = repaired.judge_ids[2];
        CHECK((replacement == "d" || replacement == "e" || replacement == "f"));
    }

    SUBCASE("exhausted roster") {
        CHECK_THROWS_CODE(repair_panel(panel, "c", roster_of({"a", "b", "c"}), 0),
                          ErrorCode::roster_exhausted);
    }

    SUBCASE("deterministic replacement") {
        CHECK(repair_panel(panel, "c", roster, 42).judge_ids ==
              repair_panel(panel, "c", roster, 42).judge_ids);
    }

    SUBCASE("failed judge must be in the panel") {
        CHECK_THROWS(repair_panel(panel, "z", roster, 0));
    }
}

TEST_CASE("compute_judge_consensus rates agreement with the majority") {
    std::vector<VoteRecord> records;
    for (int i = 0; i < 4; ++i) {
        VoteRecord r;
        r.sample_id = "s" + std::to_string(i);
        r.metric_id = "m";
        r.majority_label = 1;
        r.verdicts = {{"agreeing", 1}, {"mixed", i < 3 ? 1 : 0}, {"contrarian", 0}};
        records.push_back(std::move(r));
    }
    const JudgeConsensusTable table = compute_judge_consensus(records);
    CHECK(table.at("agreeing").rate == 100.0);
    CHECK(table.at("mixed").rate == 75.0);
    CHECK(table.at("contrarian").rate == 0.0);
    CHECK(table.at("mixed").comparisons == 4);
    CHECK(table.at("mixed").agreements == 3);
    CHECK(table.count("never-voted") == 0);
}

TEST_CASE("select_rationale picks the highest-consensus agreeing judge") {
    JudgeConsensusTable table;
    table["a"] = {9, 10, 90.0};
    table["b"] = {8, 10, 80.0};
    table["c"] = {10, 10, 100.0};

    SUBCASE("argmax over agreeing judges") {
        const std::vector<JudgeVerdict> verdicts = {
            verdict_of("a", "s", {{"m", 1}}),
            verdict_of("b", "s", {{"m", 1}}),
        };
        const RationaleChoice choice = select_rationale(verdicts, "m", 1, table);
        CHECK(choice.judge_id == "a");
        CHECK(choice.rationale == "a explains m");
        CHECK_FALSE(choice.empty_rationale);
    }

    SUBCASE("ties break to the lexicographically smallest judge") {
        JudgeConsensusTable tied;
        tied["a"] = {9, 10, 90.0};
        tied["b"] = {9, 10, 90.0};
        const std::vector<JudgeVerdict> verdicts = {
            verdict_of("b", "s", {{"m", 0}}),
            verdict_of("a", "s", {{"m", 0}}),
        };
        CHECK(select_rationale(verdicts, "m", 0, tied).judge_id == "a");
    }

    SUBCASE("a dissenting judge with the top rate is excluded") {
        const std::vector<JudgeVerdict> verdicts = {
            verdict_of("c", "s", {{"m", 0}}),  // top rate but dissents
            verdict_of("a", "s", {{"m", 1}}),
            verdict_of("b", "s", {{"m", 1}}),
        };
        CHECK(select_rationale(verdicts, "m", 1, table).judge_id == "a");
    }

    SUBCASE("empty rationale falls back to the next agreeing judge") {
        const std::vector<JudgeVerdict> verdicts = {
            verdict_of("a", "s", {{"m", 1}}, {{"m", ""}}),
            verdict_of("b", "s", {{"m", 1}}),
        };
        const RationaleChoice choice = select_rationale(verdicts, "m", 1, table);
        CHECK(choice.judge_id == "b");
        CHECK_FALSE(choice.empty_rationale);
    }

    SUBCASE("all empty flags the record") {
        const std::vector<JudgeVerdict> verdicts = {
            verdict_of("a", "s", {{"m", 1}}, {{"m", ""}}),
            verdict_of("b", "s", {{"m", 1}}, {{"m", ""}}),
        };
        const RationaleChoice choice = select_rationale(verdicts, "m", 1, table);
        CHECK(choice.empty_rationale);
        CHECK(choice.judge_id == "a");
        CHECK(choice.rationale.empty());
    }
}

TEST_CASE("finalize_votes is a deterministic two-pass computation") {
    std::vector<SampleVotes> all_votes;
    for (int s = 0; s < 5; ++s) {
        SampleVotes votes;
        votes.sample_id = "s" + std::to_string(s);
        votes.panel.sample_id = votes.sample_id;
        votes.panel.judge_ids = {"a", "b", "c"};
        votes.metric_ids = {"m1", "m2"};
        votes.verdicts = {
            verdict_of("a", votes.sample_id, {{"m1", 1}, {"m2", s % 2}}),
            verdict_of("b", votes.sample_id, {{"m1", 1}, {"m2", 0}}),
            verdict_of("c", votes.sample_id, {{"m1", 0}, {"m2", 1}}),
        };
        all_votes.push_back(std::move(votes));
    }

    const VotingOutcome first = finalize_votes(all_votes);
    const VotingOutcome second = finalize_votes(all_votes);
    REQUIRE(first.records.size() == second.records.size());
    for (std::size_t i = 0; i < first.records.size(); ++i) {
        CHECK(canonical_dump(first.records[i].to_json()) ==
              canonical_dump(second.records[i].to_json()));
    }

    for (const auto& record : first.records) {
        // the rationale judge sat on the panel and voted the majority
        CHECK(std::find(record.panel.judge_ids.begin(), record.panel.judge_ids.end(),
                        record.rationale_judge_id) != record.panel.judge_ids.end());
        for (const auto& [judge, label] : record.verdicts) {
            if (judge == record.rationale_judge_id) CHECK(label == record.majority_label);
        }
    }
}

TEST_CASE("per-metric consensus tables rank within each metric") {
    // judge c agrees on m1 but never on m2
    std::vector<SampleVotes> all_votes;
    for (int s = 0; s < 4; ++s) {
        SampleVotes votes;
        votes.sample_id = "s" + std::to_string(s);
        votes.panel.judge_ids = {"a", "b", "c"};
        votes.metric_ids = {"m1", "m2"};
        votes.verdicts = {
            verdict_of("a", votes.sample_id, {{"m1", 1}, {"m2", 1}}),
            verdict_of("b", votes.sample_id, {{"m1", 1}, {"m2", 1}}),
            verdict_of("c", votes.sample_id, {{"m1", 1}, {"m2", 0}}),
        };
        all_votes.push_back(std::move(votes));
    }
    const VotingOutcome outcome = finalize_votes(all_votes, ConsensusGranularity::per_metric);
    CHECK(outcome.per_metric.at("m1").at("c").rate == 100.0);
    CHECK(outcome.per_metric.at("m2").at("c").rate == 0.0);
    const double global_c = outcome.consensus.at("c").rate;
    CHECK(global_c == 50.0);
}

TEST_CASE("vote log appends and reloads verdicts keyed by sample and judge") {
    tovo::test::TempDir tmp;
    const std::string path = tmp.file("votes.jsonl");
    VoteLog log(path);

    const auto v1 = verdict_of("a", "s1", {{"m", 1}});
    const auto v2 = verdict_of("b", "s1", {{"m", 0}});
    JudgeVerdict failed;
    failed.judge_id = "c";
    failed.sample_id = "s1";
    failed.status = VerdictStatus::parse_failed;
    failed.raw_output = "gibberish";

    log.append(v1);
    log.append(v2);
    log.append(failed);

    const auto loaded = VoteLog::load(path);
    REQUIRE(loaded.size() == 3);
    CHECK(loaded.at({"s1", "a"}).labels.at("m") == 1);
    CHECK(loaded.at({"s1", "b"}).labels.at("m") == 0);
    CHECK(loaded.at({"s1", "c"}).status == VerdictStatus::parse_failed);
    CHECK(loaded.at({"s1", "c"}).raw_output == "gibberish");

    CHECK(VoteLog::load(tmp.file("missing.jsonl")).empty());
}
