#include "tovo/dataset.hpp"

#include "tovo/errors.hpp"
#include "tovo/rng.hpp"

#include <spdlog/spdlog.h>

#include <algorithm>
#include <cmath>
#include <fstream>
#include <sstream>

namespace tovo {

void GoldRecord::validate() const {
    if (metrics.empty()) throw Error::config("gold record " + sample.id + " has no metrics");
    for (const auto& [metric_id, version] : metrics) {
        if (!labels.count(metric_id)) {
            throw Error::config("gold record " + sample.id + " missing label for " + metric_id);
        }
        const bool flagged =
            std::find(provenance.empty_rationale.begin(), provenance.empty_rationale.end(),
                      metric_id) != provenance.empty_rationale.end();
        if (!rationales.count(metric_id) && !flagged) {
            throw Error::config("gold record " + sample.id + " missing rationale for " + metric_id);
        }
    }
    if (labels.size() != metrics.size()) {
        throw Error::config("gold record " + sample.id + " has labels outside its metric set");
    }
    for (const auto& [metric_id, label] : labels) {
        if (label != 0 && label != 1) {
            throw Error::config("gold record " + sample.id + " has non-binary label for " + metric_id);
        }
    }
    for (const auto& [metric_id, entry] : rationales) {
        if (!labels.count(metric_id)) {
            throw Error::config("gold record " + sample.id + " has a rationale outside its metric set: " +
                                metric_id);
        }
    }
}

json GoldRecord::to_json() const {
    json metrics_json = json::array();
    for (const auto& [metric_id, version] : metrics) {
        metrics_json.push_back(json{{"metric_id", metric_id}, {"definition_version", version}});
    }
    json rationales_json = json::object();
    for (const auto& [metric_id, entry] : rationales) {
        rationales_json[metric_id] = json{{"judge_id", entry.judge_id}, {"text", entry.text}};
    }
    json provenance_json{{"panel", provenance.panel.to_json()},
                         {"seeds", provenance.seeds},
                         {"template_id", provenance.template_id},
                         {"run_id", provenance.run_id},
                         {"timestamps", provenance.timestamps},
                         {"empty_rationale", provenance.empty_rationale}};
    return json{{"tovo_schema", kDatasetSchemaVersion},
                {"sample", sample.to_json()},
                {"metrics", std::move(metrics_json)},
                {"labels", labels},
                {"rationales", std::move(rationales_json)},
                {"provenance", std::move(provenance_json)}};
}

GoldRecord GoldRecord::from_json(const json& j) {
    if (j.value("tovo_schema", -1) != kDatasetSchemaVersion) {
        throw Error::config("unsupported or missing tovo_schema version");
    }
    GoldRecord record;
    record.sample = Sample::from_json(j.at("sample"));
    for (const auto& m : j.at("metrics")) {
        record.metrics.emplace_back(m.at("metric_id").get<std::string>(),
                                    m.at("definition_version").get<int>());
    }
    record.labels = j.at("labels").get<std::map<std::string, int>>();
    for (const auto& [metric_id, entry] : j.at("rationales").items()) {
        record.rationales[metric_id] = RationaleEntry{entry.at("judge_id").get<std::string>(),
                                                      entry.at("text").get<std::string>()};
    }
    const json& prov = j.at("provenance");
    record.provenance.panel = Panel::from_json(prov.at("panel"));
    record.provenance.seeds = prov.value("seeds", std::map<std::string, std::uint64_t>{});
    record.provenance.template_id = prov.value("template_id", std::string());
    record.provenance.run_id = prov.value("run_id", std::string());
    record.provenance.timestamps = prov.value("timestamps", std::map<std::string, std::string>{});
    record.provenance.empty_rationale =
        prov.value("empty_rationale", std::vector<std::string>{});
    record.validate();
    return record;
}

void RunManifest::validate() const {
    if (counts.sampled != counts.voted + counts.dropped) {
        throw Error::config("manifest counts inconsistent: sampled " +
                            std::to_string(counts.sampled) + " != voted " +
                            std::to_string(counts.voted) + " + dropped " +
                            std::to_string(counts.dropped));
    }
}

json RunManifest::to_json() const {
    return json{{"run_id", run_id},
                {"registry_hash", registry_hash},
                {"resolved_config", resolved_config},
                {"roster", roster},
                {"seeds", seeds},
                {"counts",
                 json{{"ingested", counts.ingested},
                      {"filtered", counts.filtered},
                      {"sampled", counts.sampled},
                      {"voted", counts.voted},
                      {"dropped", counts.dropped}}},
                {"timestamp", timestamp},
                {"failed_stage", failed_stage}};
}

RunManifest RunManifest::from_json(const json& j) {
    RunManifest m;
    m.run_id = j.at("run_id").get<std::string>();
    m.registry_hash = j.value("registry_hash", std::string());
    m.resolved_config = j.value("resolved_config", json::object());
    m.roster = j.value("roster", json::array());
    m.seeds = j.value("seeds", std::map<std::string, std::uint64_t>{});
    const json& c = j.at("counts");
    m.counts = RunCounts{c.value("ingested", std::size_t{0}), c.value("filtered", std::size_t{0}),
                         c.value("sampled", std::size_t{0}), c.value("voted", std::size_t{0}),
                         c.value("dropped", std::size_t{0})};
    m.timestamp = j.value("timestamp", std::string());
    m.failed_stage = j.value("failed_stage", std::string());
    return m;
}

std::size_t emit(const std::vector<GoldRecord>& records, const std::string& path) {
    std::ostringstream out;
    for (const auto& record : records) {
        out << canonical_dump(record.to_json()) << '\n';
    }
    write_file_atomic(path, out.str());
    return records.size();
}

LoadResult load(const std::string& path) {
    const std::string text = read_file(path);
    LoadResult result;
    std::vector<std::string> rejected;
    std::istringstream in(text);
    std::string line;
    std::size_t line_no = 0;
    while (std::getline(in, line)) {
        ++line_no;
        if (line.empty()) continue;
        try {
            result.records.push_back(GoldRecord::from_json(json::parse(line)));
        } catch (const std::exception& e) {
            spdlog::warn("{}:{}: quarantining record: {}", path, line_no, e.what());
            rejected.push_back(line);
        }
    }
    result.quarantined = rejected.size();
    if (!rejected.empty()) {
        std::ostringstream out;
        for (const auto& r : rejected) out << r << '\n';
        write_file_atomic(path + ".rejected", out.str());
    }
    return result;
}

std::map<std::string, std::vector<GoldRecord>> split(const std::vector<GoldRecord>& records,
                                                     const std::map<std::string, double>& fractions,
                                                     std::uint64_t seed) {
    if (fractions.empty()) throw Error::invalid_fractions("no partitions given");
    double sum = 0.0;
    for (const auto& [name, fraction] : fractions) {
        if (name.empty()) throw Error::invalid_fractions("empty partition name");
        if (fraction < 0.0) throw Error::invalid_fractions("negative fraction for " + name);
        sum += fraction;
    }
    if (std::abs(sum - 1.0) > 1e-9) {
        throw Error::invalid_fractions("fractions sum to " + std::to_string(sum));
    }

    const std::size_t n = records.size();
    // largest-remainder allocation of n across partitions
    struct Part {
        std::string name;
        std::size_t count;
        double remainder;
    };
    std::vector<Part> parts;
    std::size_t allocated = 0;
    for (const auto& [name, fraction] : fractions) {
        const double exact = fraction * static_cast<double>(n);
        const auto count = static_cast<std::size_t>(std::floor(exact));
        parts.push_back(Part{name, count, exact - std::floor(exact)});
        allocated += count;
    }
    std::vector<std::size_t> order(parts.size());
    for (std::size_t i = 0; i < order.size(); ++i) order[i] = i;
    std::stable_sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) {
        if (parts[a].remainder != parts[b].remainder) return parts[a].remainder > parts[b].remainder;
        return parts[a].name < parts[b].name;
    });
    for (std::size_t i = 0; allocated < n; ++i) {
        ++parts[order[i % order.size()]].count;
        ++allocated;
    }

    std::vector<std::size_t> indices(n);
    for (std::size_t i = 0; i < n; ++i) indices[i] = i;
    SeededRng rng(seed);
    rng.shuffle(indices);

    std::map<std::string, std::vector<GoldRecord>> out;
    std::size_t cursor = 0;
    for (const auto& part : parts) {
        std::vector<std::size_t> block(indices.begin() + static_cast<std::ptrdiff_t>(cursor),
                                       indices.begin() + static_cast<std::ptrdiff_t>(cursor + part.count));
        cursor += part.count;
        std::sort(block.begin(), block.end());  // input order within the partition
        auto& bucket = out[part.name];
        bucket.reserve(block.size());
        for (std::size_t i : block) bucket.push_back(records[i]);
    }
    return out;
}

}  // namespace tovo
