#pragma once

#include "tovo/dataset.hpp"
#include "tovo/taxonomy.hpp"

#include <chrono>
#include <map>
#include <string>
#include <utility>
#include <vector>

namespace tovo {

/// Binary labels keyed by (sample_id, metric_id).
struct LabelSource {
    std::string source_id;
    std::map<std::pair<std::string, std::string>, int> labels;

    /// Throws on non-binary labels or a duplicate key.
    void add(const std::string& sample_id, const std::string& metric_id, int label);
};

LabelSource labels_from_records(const std::vector<GoldRecord>& records,
                                const std::string& source_id);

/// Accepts either a dataset file (tovo_schema lines) or plain label lines
/// {"sample_id":..., "metric_id":..., "label":0|1}.
LabelSource load_label_file(const std::string& path, const std::string& source_id = "");

struct MetricAgreement {
    std::size_t agree = 0;
    std::size_t total = 0;
    double rate = 0.0;   // percentage
    std::string source;  // pool name when a registry was provided, else "Custom"
};

struct ConsensusReport {
    std::string source_a;
    std::string source_b;
    std::map<std::string, MetricAgreement> per_metric;
    double overall_micro = 0.0;  // 100 * sum(agree) / sum(total)
    double overall_macro = 0.0;  // unweighted mean of per-metric rates
    std::size_t shared = 0;      // |a ∩ b|
    std::size_t only_a = 0;      // |a \ b|
    std::size_t only_b = 0;      // |b \ a|
};

/// Percentage agreement over the keys both sources labeled. Symmetric in
/// (a, b); throws EmptyComparison when no keys are shared.
ConsensusReport consensus(const LabelSource& a, const LabelSource& b,
                          const Registry* registry = nullptr);

struct F1Result {
    double precision = 0.0;
    double recall = 0.0;
    double f1 = 0.0;
    bool zero_positives = false;  // no positive preds and no positive golds
    std::size_t tp = 0, fp = 0, fn = 0, tn = 0;
};

/// Precision/recall/F1 for the positive ("unsafe") class over shared keys.
F1Result unsafe_f1(const LabelSource& pred, const LabelSource& gold);

enum class ReportLayout { grouped_by_source, single_table };
enum class ReportFormat { markdown, csv };

ReportLayout parse_report_layout(const std::string& name);
ReportFormat parse_report_format(const std::string& name);

/// Rates carry three decimals ("86.576").
std::string format_rate(double rate);

std::string render_report(const ConsensusReport& report, ReportLayout layout,
                          ReportFormat format);

enum class Provider { LlamaGuard2Endpoint, OAIMEndpoint, PerspectiveEndpoint };

Provider parse_provider(const std::string& name);

struct AdapterConfig {
    Provider provider = Provider::OAIMEndpoint;
    std::string endpoint;
    std::string model;       // LlamaGuard2Endpoint only
    double cut = 0.5;        // binarization cut for score-style providers
    std::chrono::milliseconds timeout{30000};
    int parallelism = 4;
};

struct AdapterResult {
    LabelSource labels;
    std::map<std::string, std::string> raw_payloads;  // sample_id -> raw body, for audit
    std::size_t attempts = 0;
    std::size_t failures = 0;
};

/// Pull reference labels for the samples from a moderation provider,
/// restricted to the registry metrics of the provider's own pool. Items that
/// keep failing are skipped (absent keys fall out of any comparison); more
/// than 20% failures throws AdapterDegraded.
AdapterResult adapter_reference_labels(const AdapterConfig& config,
                                       const std::vector<Sample>& samples,
                                       const Registry& registry);

}  // namespace tovo
