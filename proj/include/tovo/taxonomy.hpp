#pragma once

#include "tovo/json_util.hpp"

#include <cstdint>
#include <string>
#include <unordered_map>
#include <vector>

namespace tovo {

enum class MetricSource {
    LlamaGuard2,
    OAIM,
    PerspectiveAPI,
    BeaverTails,
    OOD,
    Custom,
};

MetricSource parse_source(const std::string& name);
std::string source_name(MetricSource source);

/// One taxonomy metric. The definition is the prose the judges see verbatim;
/// version pins which revision of that prose a dataset row was labeled under.
struct MetricDef {
    std::string id;
    std::string name;
    MetricSource source = MetricSource::Custom;
    std::string definition;
    int version = 1;

    json to_json() const;
    static MetricDef from_json(const json& j, const std::string& origin);
};

/// Immutable after load; safe to share across threads.
class Registry {
public:
    Registry() = default;

    /// Throws DuplicateMetric / InvalidMetric.
    void add(MetricDef def);

    const MetricDef* find(const std::string& id) const;
    const MetricDef& at(const std::string& id) const;
    bool contains(const std::string& id) const { return find(id) != nullptr; }

    const std::vector<MetricDef>& metrics() const { return metrics_; }
    std::size_t size() const { return metrics_.size(); }
    bool empty() const { return metrics_.empty(); }

    json to_json() const;
    /// Stable content hash over the canonical serialization, recorded in the
    /// run manifest so a dataset can be traced to the exact metric text.
    std::uint64_t content_hash() const;

private:
    std::vector<MetricDef> metrics_;
    std::unordered_map<std::string, std::size_t> index_;
};

struct MetricAssignment {
    std::string sample_id;
    std::vector<std::string> metric_ids;  // 1..6 unique ids, draw order
    std::uint64_t rng_seed = 0;           // recorded for replay
};

/// Lowercase; '/', ' ' and any other non [a-z0-9] character become '-';
/// dash runs collapse. "Suicide & Self-Harm" -> "suicide-self-harm".
std::string slugify(const std::string& name);

/// The shipped 42 toxicity metrics (11 LlamaGuard2 + 11 OAIM + 6 Perspective
/// + 14 BeaverTails) plus the 10 out-of-domain metrics.
Registry builtin_registry();

/// Merge metric files into one registry; builtins when paths is empty.
Registry load_registry(const std::vector<std::string>& paths);

/// Parse one metric-file document (a JSON array of metric objects; unknown
/// keys rejected) into `into`.
void parse_metric_file(Registry& into, const std::string& text,
                       const std::string& origin);

/// Draw k uniform in [k_min, k_max], then k distinct metrics uniformly
/// without replacement. Deterministic given seed.
MetricAssignment assign_metrics(const Registry& registry, const std::string& sample_id,
                                int k_min, int k_max, std::uint64_t seed);

Registry filter_by_source(const Registry& registry, MetricSource source);

}  // namespace tovo
