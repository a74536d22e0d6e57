#include "tovo/pipeline.hpp"

#include "tovo/errors.hpp"
#include "tovo/parallel.hpp"
#include "tovo/rng.hpp"

#include <spdlog/spdlog.h>

#include <algorithm>
#include <chrono>
#include <cstdio>
#include <ctime>
#include <filesystem>
#include <memory>
#include <set>

namespace tovo {

json ResponderConfig::to_json() const {
    return json{{"type", type}, {"endpoint", endpoint}, {"model", model},
                {"max_retries", max_retries}};
}

ResponderConfig ResponderConfig::from_json(const json& j) {
    ResponderConfig c;
    c.type = j.value("type", std::string("passthrough"));
    c.endpoint = j.value("endpoint", std::string());
    c.model = j.value("model", std::string());
    c.max_retries = j.value("max_retries", 1);
    if (c.type != "passthrough" && c.type != "mock" && c.type != "http") {
        throw Error::config("responder type must be passthrough, mock, or http; got " + c.type);
    }
    return c;
}

json RunConfig::to_json() const {
    return json{{"corpus", corpus},
                {"registry_paths", registry_paths},
                {"roster_path", roster_path},
                {"panel_size", panel_size},
                {"k_min", k_min},
                {"k_max", k_max},
                {"threshold", threshold},
                {"prefilter_target", prefilter_target},
                {"scorer", scorer},
                {"n_single", n_single},
                {"n_multi", n_multi},
                {"seed", seed},
                {"parallelism", parallelism},
                {"out_dir", out_dir},
                {"template_id", template_id},
                {"per_metric_prompts", per_metric_prompts},
                {"consensus_per_metric", consensus_per_metric},
                {"stamp", stamp},
                {"responder", responder.to_json()}};
}

RunConfig RunConfig::from_json(const json& j) {
    RunConfig c;
    c.corpus = j.value("corpus", std::string());
    c.registry_paths = j.value("registry_paths", std::vector<std::string>{});
    c.roster_path = j.value("roster_path", std::string());
    c.panel_size = j.value("panel_size", 3);
    c.k_min = j.value("k_min", 1);
    c.k_max = j.value("k_max", 6);
    c.threshold = j.value("threshold", 0.5);
    c.prefilter_target = j.value("prefilter_target", std::string("response"));
    c.scorer = j.value("scorer", std::string("lexicon"));
    c.n_single = j.value("n_single", std::size_t{5000});
    c.n_multi = j.value("n_multi", std::size_t{5000});
    c.seed = j.value("seed", 0ull);
    c.parallelism = j.value("parallelism", 4);
    c.out_dir = j.value("out_dir", std::string());
    c.template_id = j.value("template_id", std::string("reasoning-v1"));
    c.per_metric_prompts = j.value("per_metric_prompts", false);
    c.consensus_per_metric = j.value("consensus_per_metric", false);
    c.stamp = j.value("stamp", false);
    if (j.contains("responder")) c.responder = ResponderConfig::from_json(j.at("responder"));
    return c;
}

RunConfig RunConfig::from_file(const std::string& path) {
    return from_json(parse_json(read_file(path), path, /*allow_comments=*/true));
}

std::string RunConfig::run_id() const {
    // identity covers everything that shapes the output records; where the
    // files land and how many workers ran do not
    json semantic = to_json();
    semantic.erase("out_dir");
    semantic.erase("parallelism");
    char buf[32];
    std::snprintf(buf, sizeof(buf), "run-%016llx",
                  static_cast<unsigned long long>(fnv1a64(canonical_dump(semantic))));
    return buf;
}

ValidatedRun validate_run(const RunConfig& config) {
    ValidatedRun run;
    run.config = config;

    if (config.corpus.empty()) throw Error::config("corpus path is required");
    if (!std::filesystem::exists(config.corpus)) {
        throw Error::config("corpus file does not exist: " + config.corpus);
    }
    for (const auto& path : config.registry_paths) {
        if (!std::filesystem::exists(path)) {
            throw Error::config("registry file does not exist: " + path);
        }
    }
    run.registry = load_registry(config.registry_paths);

    if (!config.roster_path.empty()) {
        if (!std::filesystem::exists(config.roster_path)) {
            throw Error::config("roster file does not exist: " + config.roster_path);
        }
        run.roster = load_roster(config.roster_path);
    } else {
        run.roster = default_roster();
    }

    if (config.panel_size < 1 || config.panel_size % 2 == 0) {
        throw Error::even_panel(config.panel_size);
    }
    if (static_cast<std::size_t>(config.panel_size) > run.roster.size()) {
        throw Error::config("panel_size " + std::to_string(config.panel_size) +
                            " exceeds roster of " + std::to_string(run.roster.size()));
    }
    if (config.k_min < 1 || config.k_min > config.k_max ||
        static_cast<std::size_t>(config.k_max) > run.registry.size()) {
        throw Error::config("metric range [k_min, k_max] must satisfy 1 <= k_min <= k_max <= " +
                            std::to_string(run.registry.size()));
    }
    if (config.threshold < 0.0 || config.threshold > 1.0) {
        throw Error::config("threshold must be in [0, 1]");
    }
    parse_prefilter_target(config.prefilter_target);
    if (config.scorer != "lexicon" && config.scorer.rfind("remote:", 0) != 0) {
        throw Error::config("scorer must be 'lexicon' or 'remote:<url>'");
    }
    if (config.parallelism < 1) throw Error::config("parallelism must be >= 1");
    ResponderConfig::from_json(config.responder.to_json());  // revalidates type
    run.prompt_template = builtin_template(config.template_id);
    return run;
}

namespace {

std::string iso_timestamp_now() {
    const std::time_t now = std::chrono::system_clock::to_time_t(std::chrono::system_clock::now());
    std::tm tm{};
    gmtime_r(&now, &tm);
    char buf[32];
    std::strftime(buf, sizeof(buf), "%Y-%m-%dT%H:%M:%SZ", &tm);
    return buf;
}

std::unique_ptr<ToxicityScorer> make_scorer(const std::string& spec) {
    if (spec == "lexicon") return std::make_unique<LexiconScorer>();
    return std::make_unique<RemoteScorer>(spec.substr(std::string("remote:").size()));
}

/// Responses from a chat-completions backend; satisfies the sourcing
/// responder interface.
class ChatResponder : public ResponderBackend {
public:
    ChatResponder(const ResponderConfig& config) : config_(config) {
        JudgeProfile profile;
        profile.judge_id = "responder";
        profile.endpoint = config.endpoint;
        backend_ = make_chat_backend(profile);
    }

    std::string id() const override { return "chat:" + config_.model; }
    int max_retries() const override { return config_.max_retries; }

    std::string generate(const Conversation& conv) override {
        ChatRequest request;
        request.model = config_.model;
        request.messages.push_back(ChatMessage{"user", conv.prompt_transcript()});
        request.temperature = 0.0;
        return backend_->complete(request);
    }

private:
    ResponderConfig config_;
    std::unique_ptr<ChatBackend> backend_;
};

std::unique_ptr<ResponderBackend> make_responder(const ResponderConfig& config) {
    if (config.type == "passthrough") return std::make_unique<PassthroughResponder>();
    if (config.type == "mock") return std::make_unique<MockResponder>();
    if (config.endpoint.empty()) {
        throw Error::config("http responder requires an endpoint");
    }
    return std::make_unique<ChatResponder>(config);
}

struct SampleOutcome {
    bool voted = false;
    SampleVotes votes;
    MetricAssignment assignment;
};

}  // namespace

BuildResult run_build(const RunConfig& config) {
    ValidatedRun run = validate_run(config);
    if (config.out_dir.empty()) throw Error::config("out_dir is required to execute a build");
    std::filesystem::create_directories(config.out_dir);

    BuildResult result;
    result.dataset_path = config.out_dir + "/dataset.jsonl";
    result.manifest_path = config.out_dir + "/manifest.json";
    result.vote_log_path = config.out_dir + "/votes.jsonl";

    RunManifest manifest;
    manifest.run_id = config.run_id();
    char hash_buf[24];
    std::snprintf(hash_buf, sizeof(hash_buf), "%016llx",
                  static_cast<unsigned long long>(run.registry.content_hash()));
    manifest.registry_hash = hash_buf;
    manifest.resolved_config = config.to_json();
    manifest.roster = json::array();
    for (const auto& profile : run.roster) manifest.roster.push_back(profile.to_json());
    manifest.seeds = {{"root", config.seed},
                      {"stratified", derive_seed(config.seed, "stratified")}};
    if (config.stamp) manifest.timestamp = iso_timestamp_now();

    auto abort_with_stage = [&](const std::string& stage) {
        manifest.failed_stage = stage;
        write_file_atomic(result.manifest_path, canonical_dump(manifest.to_json()) + "\n");
    };

    std::string stage = "ingest";
    try {
        // ingest
        const IngestResult ingested = ingest(config.corpus);
        manifest.counts.ingested = ingested.conversations.size();
        spdlog::info("ingested {} conversations ({} malformed lines skipped)",
                     ingested.conversations.size(), ingested.malformed);

        // prefilter
        stage = "prefilter";
        auto scorer = make_scorer(config.scorer);
        const PrefilterResult filtered =
            prefilter(ingested.conversations, *scorer, config.threshold,
                      parse_prefilter_target(config.prefilter_target));
        manifest.counts.filtered = filtered.retained.size();
        spdlog::info("prefilter retained {} of {} (threshold {})", filtered.retained.size(),
                     filtered.scored, config.threshold);

        // stratified sample
        stage = "sample";
        const std::vector<Conversation> sampled = stratified_sample(
            filtered.retained, config.n_single, config.n_multi, manifest.seeds.at("stratified"));

        // responses
        stage = "respond";
        auto responder = make_responder(config.responder);
        AttachResult attached = attach_responses(sampled, *responder, config.parallelism);
        manifest.counts.sampled = sampled.size();
        manifest.counts.dropped = attached.dropped;

        // duplicate ids would collide in the vote log and the seed streams
        {
            std::set<std::string> ids;
            for (const auto& sample : attached.samples) {
                if (!ids.insert(sample.id).second) {
                    throw Error::config("duplicate conversation id in corpus: " + sample.id);
                }
            }
        }

        // votes (crash-resume through the log)
        stage = "vote";
        VoteLog vote_log(result.vote_log_path);
        auto resumed = VoteLog::load(result.vote_log_path);
        if (!resumed.empty()) {
            spdlog::info("resuming from vote log with {} verdicts", resumed.size());
        }

        std::map<std::string, std::unique_ptr<ChatBackend>> backends;
        std::map<std::string, const JudgeProfile*> profiles;
        for (const auto& profile : run.roster) {
            backends[profile.judge_id] = make_chat_backend(profile);
            profiles[profile.judge_id] = &profile;
        }

        auto outcomes = parallel_map(
            attached.samples, config.parallelism, [&](std::size_t, const Sample& sample) {
                SampleOutcome outcome;
                outcome.assignment =
                    assign_metrics(run.registry, sample.id, config.k_min, config.k_max,
                                   derive_seed(config.seed, "assign:" + sample.id));
                Panel panel = select_panel(run.roster, config.panel_size, sample.id,
                                           derive_seed(config.seed, "panel:" + sample.id));

                std::map<std::string, JudgeVerdict> verdicts;
                std::set<std::string> failed_ids;
                std::uint64_t repair_attempt = 0;
                for (;;) {
                    for (const auto& judge_id : panel.judge_ids) {
                        if (verdicts.count(judge_id)) continue;
                        if (auto it = resumed.find({sample.id, judge_id}); it != resumed.end()) {
                            verdicts[judge_id] = it->second;
                            continue;
                        }
                        JudgeVerdict verdict = collect_verdict(
                            *profiles.at(judge_id), *backends.at(judge_id), sample,
                            outcome.assignment, run.registry, run.prompt_template,
                            config.per_metric_prompts);
                        vote_log.append(verdict);
                        verdicts[judge_id] = std::move(verdict);
                    }

                    std::vector<std::string> newly_failed;
                    for (const auto& judge_id : panel.judge_ids) {
                        if (verdicts.at(judge_id).status != VerdictStatus::ok) {
                            newly_failed.push_back(judge_id);
                        }
                    }
                    if (newly_failed.empty()) break;

                    bool exhausted = false;
                    for (const auto& judge_id : newly_failed) {
                        failed_ids.insert(judge_id);
                        // exclude judges that already failed on this sample,
                        // otherwise repair could redraw them forever
                        std::vector<JudgeProfile> eligible;
                        for (const auto& profile : run.roster) {
                            if (!failed_ids.count(profile.judge_id)) eligible.push_back(profile);
                        }
                        try {
                            panel = repair_panel(panel, judge_id, eligible,
                                                 derive_seed(config.seed, "repair:" + sample.id,
                                                             repair_attempt++));
                        } catch (const Error& e) {
                            if (e.code() != ErrorCode::roster_exhausted) throw;
                            spdlog::warn("dropping sample {}: {}", sample.id, e.what());
                            exhausted = true;
                            break;
                        }
                    }
                    if (exhausted) return outcome;  // voted stays false
                }

                outcome.votes.sample_id = sample.id;
                outcome.votes.panel = panel;
                outcome.votes.metric_ids = outcome.assignment.metric_ids;
                for (const auto& judge_id : panel.judge_ids) {
                    outcome.votes.verdicts.push_back(verdicts.at(judge_id));
                }
                outcome.voted = true;
                return outcome;
            });

        // rationale selection over the full run, then gold assembly
        stage = "rationale";
        std::vector<SampleVotes> all_votes;
        for (const auto& outcome : outcomes) {
            if (outcome.voted) all_votes.push_back(outcome.votes);
        }
        const VotingOutcome voting =
            finalize_votes(all_votes, config.consensus_per_metric
                                          ? ConsensusGranularity::per_metric
                                          : ConsensusGranularity::global);
        for (const auto& profile : run.roster) {
            if (!voting.consensus.count(profile.judge_id)) {
                spdlog::warn("judge {} cast no ok verdicts; excluded from the consensus table",
                             profile.judge_id);
            }
        }
        std::map<std::pair<std::string, std::string>, const VoteRecord*> record_of;
        for (const auto& record : voting.records) {
            record_of[{record.sample_id, record.metric_id}] = &record;
        }

        stage = "emit";
        std::vector<GoldRecord> gold;
        std::map<std::string, const Sample*> sample_of;
        for (const auto& sample : attached.samples) sample_of[sample.id] = &sample;
        for (const auto& outcome : outcomes) {
            if (!outcome.voted) continue;
            GoldRecord record;
            record.sample = *sample_of.at(outcome.votes.sample_id);
            for (const auto& metric_id : outcome.assignment.metric_ids) {
                record.metrics.emplace_back(metric_id, run.registry.at(metric_id).version);
                const VoteRecord& vote = *record_of.at({outcome.votes.sample_id, metric_id});
                record.labels[metric_id] = vote.majority_label;
                if (vote.empty_rationale) {
                    record.provenance.empty_rationale.push_back(metric_id);
                } else {
                    record.rationales[metric_id] =
                        GoldRecord::RationaleEntry{vote.rationale_judge_id, vote.rationale};
                }
            }
            record.provenance.panel = outcome.votes.panel;
            record.provenance.seeds = {
                {"root", config.seed},
                {"assign", outcome.assignment.rng_seed},
                {"panel", outcome.votes.panel.rng_seed},
            };
            record.provenance.template_id = config.template_id;
            record.provenance.run_id = manifest.run_id;
            if (config.stamp) record.provenance.timestamps["built_at"] = manifest.timestamp;
            record.validate();
            gold.push_back(std::move(record));
        }

        manifest.counts.voted = gold.size();
        manifest.counts.dropped = manifest.counts.sampled - gold.size();
        manifest.validate();
        emit(gold, result.dataset_path);
        write_file_atomic(result.manifest_path, canonical_dump(manifest.to_json()) + "\n");
        result.manifest = manifest;
        spdlog::info("emitted {} gold records to {}", gold.size(), result.dataset_path);
        return result;
    } catch (...) {
        abort_with_stage(stage);
        throw;
    }
}

}  // namespace tovo
