#include "tovo/taxonomy.hpp"

#include "tovo/errors.hpp"
#include "tovo/rng.hpp"

#include <cctype>

namespace tovo {

extern const char* kBuiltinMetricsJson;  // builtin_metrics.cpp

MetricSource parse_source(const std::string& name) {
    if (name == "LlamaGuard2") return MetricSource::LlamaGuard2;
    if (name == "OAIM") return MetricSource::OAIM;
    if (name == "PerspectiveAPI") return MetricSource::PerspectiveAPI;
    if (name == "BeaverTails") return MetricSource::BeaverTails;
    if (name == "OOD") return MetricSource::OOD;
    if (name == "Custom") return MetricSource::Custom;
    throw Error::config("unknown metric source: " + name);
}

std::string source_name(MetricSource source) {
    switch (source) {
        case MetricSource::LlamaGuard2: return "LlamaGuard2";
        case MetricSource::OAIM: return "OAIM";
        case MetricSource::PerspectiveAPI: return "PerspectiveAPI";
        case MetricSource::BeaverTails: return "BeaverTails";
        case MetricSource::OOD: return "OOD";
        case MetricSource::Custom: return "Custom";
    }
    return "Custom";
}

std::string slugify(const std::string& name) {
    std::string out;
    out.reserve(name.size());
    for (unsigned char c : name) {
        if (std::isalnum(c)) {
            out.push_back(static_cast<char>(std::tolower(c)));
        } else if (!out.empty() && out.back() != '-') {
            out.push_back('-');
        }
    }
    while (!out.empty() && out.back() == '-') out.pop_back();
    return out;
}

json MetricDef::to_json() const {
    return json{{"id", id},
                {"name", name},
                {"source", source_name(source)},
                {"definition", definition},
                {"version", version}};
}

MetricDef MetricDef::from_json(const json& j, const std::string& origin) {
    if (!j.is_object()) throw Error::config(origin + ": metric entry is not an object");
    static const char* kKeys[] = {"id", "name", "source", "definition", "version"};
    for (const auto& item : j.items()) {
        bool known = false;
        for (const char* k : kKeys) known = known || item.key() == k;
        if (!known) throw Error::config(origin + ": unknown key '" + item.key() + "' in metric entry");
    }
    MetricDef def;
    def.id = j.at("id").get<std::string>();
    def.name = j.value("name", def.id);
    def.source = parse_source(j.value("source", std::string("Custom")));
    def.definition = j.value("definition", std::string());
    def.version = j.value("version", 1);
    return def;
}

void Registry::add(MetricDef def) {
    if (def.id.empty()) throw Error::invalid_metric("(empty)", "id is empty");
    if (def.definition.empty()) throw Error::invalid_metric(def.id, "definition is empty");
    if (index_.count(def.id)) throw Error::duplicate_metric(def.id);
    index_.emplace(def.id, metrics_.size());
    metrics_.push_back(std::move(def));
}

const MetricDef* Registry::find(const std::string& id) const {
    auto it = index_.find(id);
    return it == index_.end() ? nullptr : &metrics_[it->second];
}

const MetricDef& Registry::at(const std::string& id) const {
    const MetricDef* def = find(id);
    if (!def) throw Error::unknown_metric(id);
    return *def;
}

json Registry::to_json() const {
    json arr = json::array();
    for (const auto& m : metrics_) arr.push_back(m.to_json());
    return arr;
}

std::uint64_t Registry::content_hash() const {
    return fnv1a64(canonical_dump(to_json()));
}

void parse_metric_file(Registry& into, const std::string& text,
                       const std::string& origin) {
    const json doc = parse_json(text, origin, /*allow_comments=*/true);
    if (!doc.is_array()) throw Error::config(origin + ": metric file must be a JSON array");
    for (const auto& entry : doc) {
        into.add(MetricDef::from_json(entry, origin));
    }
}

Registry builtin_registry() {
    Registry reg;
    parse_metric_file(reg, kBuiltinMetricsJson, "<builtin>");
    return reg;
}

Registry load_registry(const std::vector<std::string>& paths) {
    if (paths.empty()) return builtin_registry();
    Registry reg;
    for (const auto& path : paths) {
        parse_metric_file(reg, read_file(path), path);
    }
    return reg;
}

MetricAssignment assign_metrics(const Registry& registry, const std::string& sample_id,
                                int k_min, int k_max, std::uint64_t seed) {
    if (registry.empty()) throw Error::empty_registry();
    if (k_min < 1 || k_min > k_max || static_cast<std::size_t>(k_max) > registry.size()) {
        throw Error::config("assign_metrics requires 1 <= k_min <= k_max <= registry size, got [" +
                            std::to_string(k_min) + ", " + std::to_string(k_max) + "] over " +
                            std::to_string(registry.size()));
    }
    SeededRng rng(seed);
    const int k = k_min + static_cast<int>(rng.bounded(static_cast<std::uint64_t>(k_max - k_min + 1)));
    MetricAssignment assignment;
    assignment.sample_id = sample_id;
    assignment.rng_seed = seed;
    for (std::size_t idx : rng.sample_indices(static_cast<std::size_t>(k), registry.size())) {
        assignment.metric_ids.push_back(registry.metrics()[idx].id);
    }
    return assignment;
}

Registry filter_by_source(const Registry& registry, MetricSource source) {
    Registry out;
    for (const auto& m : registry.metrics()) {
        if (m.source == source) out.add(m);
    }
    return out;
}

}  // namespace tovo
