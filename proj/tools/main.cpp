#include "tovo/pipeline.hpp"

#include "tovo/errors.hpp"
#include "tovo/rng.hpp"

#include <CLI11.hpp>
#include <spdlog/sinks/stdout_color_sinks.h>
#include <spdlog/spdlog.h>

#include <filesystem>
#include <fstream>
#include <iostream>
#include <sstream>

namespace {

using namespace tovo;

int exit_code_for(const Error& e) {
    switch (e.code()) {
        case ErrorCode::generation_failed:
        case ErrorCode::backend_failed:
            return 1;  // runtime/backend failure
        default:
            return 2;  // user, config, or data problem
    }
}

void write_output(const std::string& path, const std::string& content) {
    if (path.empty() || path == "-") {
        std::cout << content;
        return;
    }
    write_file_atomic(path, content);
}

struct BuildArgs {
    std::string config_path;
    RunConfig overrides;
    bool validate_only = false;
    // presence flags for overrides that have non-trivial defaults
    bool has_corpus = false, has_out = false, has_seed = false, has_threshold = false;
    bool has_n_single = false, has_n_multi = false, has_panel = false;
    bool has_k_min = false, has_k_max = false, has_roster = false, has_registry = false;
    bool has_template = false, has_parallelism = false, has_target = false, has_scorer = false;
    bool has_resp_type = false, has_resp_endpoint = false, has_resp_model = false;
    bool per_metric = false, per_metric_consensus = false, stamp = false;
};

RunConfig merge_build_config(const BuildArgs& args) {
    RunConfig config;
    if (!args.config_path.empty()) config = RunConfig::from_file(args.config_path);
    if (args.has_corpus) config.corpus = args.overrides.corpus;
    if (args.has_out) config.out_dir = args.overrides.out_dir;
    if (args.has_seed) config.seed = args.overrides.seed;
    if (args.has_threshold) config.threshold = args.overrides.threshold;
    if (args.has_n_single) config.n_single = args.overrides.n_single;
    if (args.has_n_multi) config.n_multi = args.overrides.n_multi;
    if (args.has_panel) config.panel_size = args.overrides.panel_size;
    if (args.has_k_min) config.k_min = args.overrides.k_min;
    if (args.has_k_max) config.k_max = args.overrides.k_max;
    if (args.has_roster) config.roster_path = args.overrides.roster_path;
    if (args.has_registry) config.registry_paths = args.overrides.registry_paths;
    if (args.has_template) config.template_id = args.overrides.template_id;
    if (args.has_parallelism) config.parallelism = args.overrides.parallelism;
    if (args.has_target) config.prefilter_target = args.overrides.prefilter_target;
    if (args.has_scorer) config.scorer = args.overrides.scorer;
    if (args.has_resp_type) config.responder.type = args.overrides.responder.type;
    if (args.has_resp_endpoint) config.responder.endpoint = args.overrides.responder.endpoint;
    if (args.has_resp_model) config.responder.model = args.overrides.responder.model;
    if (args.per_metric) config.per_metric_prompts = true;
    if (args.per_metric_consensus) config.consensus_per_metric = true;
    if (args.stamp) config.stamp = true;
    return config;
}

int cmd_build(const BuildArgs& args) {
    const RunConfig config = merge_build_config(args);
    if (args.validate_only) {
        const ValidatedRun run = validate_run(config);
        std::cout << "config valid: registry=" << run.registry.size()
                  << " metrics, roster=" << run.roster.size() << " judges, panel="
                  << config.panel_size << ", k=[" << config.k_min << ", " << config.k_max
                  << "], strata=" << config.n_single << "/" << config.n_multi << "\n";
        return 0;
    }
    const BuildResult result = run_build(config);
    std::cout << "run " << result.manifest.run_id << " complete: " << result.manifest.counts.voted
              << " records -> " << result.dataset_path << "\n"
              << "manifest: " << result.manifest_path << "\n";
    return 0;
}

struct EvaluateArgs {
    std::string pred;
    std::string gold;
    std::string group_by = "none";
    std::string format = "markdown";
    std::string out;
    std::string audit_out;
    bool with_f1 = false;
    std::vector<std::string> registry_paths;
    std::string adapter_endpoint;
    std::string adapter_model;
    double adapter_cut = 0.5;
    std::string samples_path;  // dataset file used as adapter input
};

LabelSource resolve_pred(const EvaluateArgs& args, const Registry& registry) {
    if (args.pred.rfind("adapter:", 0) != 0) {
        return load_label_file(args.pred, "pred");
    }
    const std::string provider_name = args.pred.substr(std::string("adapter:").size());
    if (args.adapter_endpoint.empty()) {
        throw Error::config("--adapter-endpoint is required with --pred adapter:<provider>");
    }
    if (args.samples_path.empty()) {
        throw Error::config("--samples is required with --pred adapter:<provider>");
    }
    AdapterConfig adapter;
    adapter.provider = parse_provider(provider_name);
    adapter.endpoint = args.adapter_endpoint;
    adapter.model = args.adapter_model;
    adapter.cut = args.adapter_cut;
    std::vector<Sample> samples;
    for (const auto& record : load(args.samples_path).records) samples.push_back(record.sample);
    AdapterResult result = adapter_reference_labels(adapter, samples, registry);
    if (!args.audit_out.empty()) {
        json audit = json::object();
        for (const auto& [sample_id, raw] : result.raw_payloads) audit[sample_id] = raw;
        write_file_atomic(args.audit_out, canonical_dump(audit) + "\n");
    }
    result.labels.source_id = "pred";
    return result.labels;
}

int cmd_evaluate(const EvaluateArgs& args) {
    const Registry registry = load_registry(args.registry_paths);
    const LabelSource pred = resolve_pred(args, registry);
    LabelSource gold = load_label_file(args.gold, "gold");

    const ConsensusReport report = consensus(pred, gold, &registry);
    std::string text = render_report(report, parse_report_layout(args.group_by),
                                     parse_report_format(args.format));
    if (args.with_f1) {
        const F1Result f1 = unsafe_f1(pred, gold);
        char line[160];
        std::snprintf(line, sizeof(line),
                      "\nUnsafe F1: precision=%.4f recall=%.4f f1=%.4f%s\n", f1.precision,
                      f1.recall, f1.f1, f1.zero_positives ? " (zero positives)" : "");
        text += line;
    }
    write_output(args.out, text);
    return 0;
}

struct SimulateArgs {
    std::string judges_path;
    std::size_t n = 20000;
    int panel = 3;
    std::uint64_t seed = 0;
    int metrics = 1;
    double positive_rate = 0.5;
    std::string format = "markdown";
    std::string out;
};

int cmd_simulate(const SimulateArgs& args) {
    const auto specs = load_judge_specs(args.judges_path);
    std::vector<std::string> metrics;
    for (int i = 0; i < args.metrics; ++i) metrics.push_back("m" + std::to_string(i));
    const LabelSource truth = plant_truth(args.n, metrics, args.positive_rate, args.seed);
    const SyntheticRun run =
        run_synthetic_vote(specs, truth, args.panel, derive_seed(args.seed, "vote"));

    std::ostringstream out;
    out << "gold accuracy " << format_rate(run.gold_accuracy) << "\n\n";
    out << "judge consensus:\n";
    for (const auto& [judge_id, entry] : run.consensus) {
        out << "  " << judge_id << " " << format_rate(entry.rate) << " (" << entry.agreements
            << "/" << entry.comparisons << ")\n";
    }
    out << "\nrationale selections:\n";
    for (const auto& [judge_id, count] : run.rationale_counts) {
        out << "  " << judge_id << " " << count << "\n";
    }
    out << "\nagreement with planted truth:\n";
    const ConsensusReport report = consensus(run.gold, truth, nullptr);
    out << render_report(report, ReportLayout::single_table, parse_report_format(args.format));
    write_output(args.out, out.str());
    return 0;
}

int cmd_registry_list(const std::vector<std::string>& paths, const std::string& source_filter) {
    Registry registry = load_registry(paths);
    if (!source_filter.empty()) {
        registry = filter_by_source(registry, parse_source(source_filter));
    }
    std::cout << "id\tsource\tversion\tname\n";
    for (const auto& metric : registry.metrics()) {
        std::cout << metric.id << '\t' << source_name(metric.source) << '\t' << metric.version
                  << '\t' << metric.name << '\n';
    }
    std::cerr << registry.size() << " metrics\n";
    return 0;
}

int cmd_registry_validate(const std::vector<std::string>& paths) {
    const Registry registry = load_registry(paths);
    std::cout << "ok: " << registry.size() << " metrics\n";
    return 0;
}

}  // namespace

int main(int argc, char** argv) {
    spdlog::set_default_logger(spdlog::stderr_color_mt("tovo"));
    spdlog::set_level(spdlog::level::info);

    CLI::App app{"tovo: taxonomy-voting dataset pipeline"};
    app.require_subcommand(1);
    app.fallthrough();  // let -v/-q appear after the subcommand too
    bool verbose = false;
    bool quiet = false;
    app.add_flag("-v,--verbose", verbose, "Debug logging");
    app.add_flag("-q,--quiet", quiet, "Warnings only");

    // build
    BuildArgs build;
    auto* build_cmd = app.add_subcommand("build", "Run the dataset build pipeline");
    build_cmd->add_option("-c,--config", build.config_path, "Run config file (JSON, // comments ok)");
    build_cmd->add_option("--corpus", build.overrides.corpus, "Corpus file, one conversation per line");
    build_cmd->add_option("--out", build.overrides.out_dir, "Output directory");
    build_cmd->add_option("--seed", build.overrides.seed, "Root RNG seed");
    build_cmd->add_option("--threshold", build.overrides.threshold, "Prefilter toxicity threshold");
    build_cmd->add_option("--n-single", build.overrides.n_single, "Single-turn quota");
    build_cmd->add_option("--n-multi", build.overrides.n_multi, "Multi-turn quota");
    build_cmd->add_option("--panel-size", build.overrides.panel_size, "Judges per panel (odd)");
    build_cmd->add_option("--k-min", build.overrides.k_min, "Min metrics per sample");
    build_cmd->add_option("--k-max", build.overrides.k_max, "Max metrics per sample");
    build_cmd->add_option("--roster", build.overrides.roster_path, "Judge roster file");
    build_cmd->add_option("--registry", build.overrides.registry_paths, "Metric files (default builtins)");
    build_cmd->add_option("--template", build.overrides.template_id, "Prompt template id");
    build_cmd->add_option("--parallelism", build.overrides.parallelism, "Worker bound");
    build_cmd->add_option("--prefilter-target", build.overrides.prefilter_target,
                          "response | prompt | transcript");
    build_cmd->add_option("--scorer", build.overrides.scorer, "lexicon | remote:<url>");
    build_cmd->add_option("--responder-type", build.overrides.responder.type,
                          "passthrough | mock | http");
    build_cmd->add_option("--responder-endpoint", build.overrides.responder.endpoint);
    build_cmd->add_option("--responder-model", build.overrides.responder.model);
    build_cmd->add_flag("--per-metric-prompts", build.per_metric, "One prompt per metric");
    build_cmd->add_flag("--consensus-per-metric", build.per_metric_consensus,
                        "Rank judges per metric instead of globally");
    build_cmd->add_flag("--stamp", build.stamp, "Record wall-clock timestamps (breaks rerun byte-identity)");
    build_cmd->add_flag("--validate-only", build.validate_only, "Validate the config and exit");

    // evaluate
    EvaluateArgs eval_args;
    auto* eval_cmd = app.add_subcommand("evaluate", "Consensus report between two label sources");
    eval_cmd->add_option("--pred", eval_args.pred, "Label file or adapter:<provider>")->required();
    eval_cmd->add_option("--gold", eval_args.gold, "Gold label file")->required();
    eval_cmd->add_option("--group-by", eval_args.group_by, "source | none");
    eval_cmd->add_option("--format", eval_args.format, "markdown | csv");
    eval_cmd->add_option("--out", eval_args.out, "Write the report here instead of stdout");
    eval_cmd->add_option("--registry", eval_args.registry_paths, "Metric files (default builtins)");
    eval_cmd->add_flag("--f1", eval_args.with_f1, "Also report unsafe-class F1");
    eval_cmd->add_option("--adapter-endpoint", eval_args.adapter_endpoint);
    eval_cmd->add_option("--adapter-model", eval_args.adapter_model);
    eval_cmd->add_option("--adapter-cut", eval_args.adapter_cut, "Score binarization cut");
    eval_cmd->add_option("--samples", eval_args.samples_path, "Dataset file fed to the adapter");
    eval_cmd->add_option("--audit-out", eval_args.audit_out, "Write raw adapter payloads here");

    // simulate
    SimulateArgs sim;
    auto* sim_cmd = app.add_subcommand("simulate", "Synthetic-judge statistics run");
    sim_cmd->add_option("--judges", sim.judges_path, "Synthetic judge spec file")->required();
    sim_cmd->add_option("--n", sim.n, "Number of samples");
    sim_cmd->add_option("--panel", sim.panel, "Panel size (odd)");
    sim_cmd->add_option("--seed", sim.seed);
    sim_cmd->add_option("--metrics", sim.metrics, "Number of synthetic metrics");
    sim_cmd->add_option("--positive-rate", sim.positive_rate);
    sim_cmd->add_option("--format", sim.format, "markdown | csv");
    sim_cmd->add_option("--out", sim.out);

    // registry
    auto* registry_cmd = app.add_subcommand("registry", "Inspect or validate metric files");
    std::vector<std::string> registry_paths;
    std::string source_filter;
    auto* list_cmd = registry_cmd->add_subcommand("list", "List metrics");
    list_cmd->add_option("--registry", registry_paths, "Metric files (default builtins)");
    list_cmd->add_option("--source", source_filter, "Filter by source pool");
    auto* validate_cmd = registry_cmd->add_subcommand("validate", "Validate metric files");
    validate_cmd->add_option("files", registry_paths, "Metric files")->required();
    registry_cmd->require_subcommand(1);

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e);
        return code == 0 ? 0 : 2;
    }

    if (verbose) spdlog::set_level(spdlog::level::debug);
    if (quiet) spdlog::set_level(spdlog::level::warn);

    build.has_corpus = build_cmd->count("--corpus") > 0;
    build.has_out = build_cmd->count("--out") > 0;
    build.has_seed = build_cmd->count("--seed") > 0;
    build.has_threshold = build_cmd->count("--threshold") > 0;
    build.has_n_single = build_cmd->count("--n-single") > 0;
    build.has_n_multi = build_cmd->count("--n-multi") > 0;
    build.has_panel = build_cmd->count("--panel-size") > 0;
    build.has_k_min = build_cmd->count("--k-min") > 0;
    build.has_k_max = build_cmd->count("--k-max") > 0;
    build.has_roster = build_cmd->count("--roster") > 0;
    build.has_registry = build_cmd->count("--registry") > 0;
    build.has_template = build_cmd->count("--template") > 0;
    build.has_parallelism = build_cmd->count("--parallelism") > 0;
    build.has_target = build_cmd->count("--prefilter-target") > 0;
    build.has_scorer = build_cmd->count("--scorer") > 0;
    build.has_resp_type = build_cmd->count("--responder-type") > 0;
    build.has_resp_endpoint = build_cmd->count("--responder-endpoint") > 0;
    build.has_resp_model = build_cmd->count("--responder-model") > 0;

    try {
        if (build_cmd->parsed()) return cmd_build(build);
        if (eval_cmd->parsed()) return cmd_evaluate(eval_args);
        if (sim_cmd->parsed()) return cmd_simulate(sim);
        if (list_cmd->parsed()) return cmd_registry_list(registry_paths, source_filter);
        if (validate_cmd->parsed()) return cmd_registry_validate(registry_paths);
    } catch (const Error& e) {
        std::cerr << "error: " << e.what() << "\n";
        return exit_code_for(e);
    } catch (const std::exception& e) {
        std::cerr << "internal error: " << e.what() << "\n";
        return 1;
    }
    return 2;
}
