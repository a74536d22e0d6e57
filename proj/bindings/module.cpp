#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include "tovo/dataset.hpp"
#include "tovo/errors.hpp"
#include "tovo/eval.hpp"
#include "tovo/judge.hpp"
#include "tovo/pipeline.hpp"
#include "tovo/simharness.hpp"
#include "tovo/taxonomy.hpp"
#include "tovo/voting.hpp"

#include <string>
#include <vector>

namespace py = pybind11;
using namespace tovo;

namespace {

// python-facing record I/O goes through the same canonical JSON lines the
// CLI writes, so both surfaces stay bit-compatible
std::string record_to_line(const GoldRecord& record) {
    return canonical_dump(record.to_json());
}

GoldRecord record_from_line(const std::string& line) {
    return GoldRecord::from_json(json::parse(line));
}

}  // namespace

PYBIND11_MODULE(_tovo, m) {
    m.doc() = "Taxonomy-voting dataset pipeline core";

    py::register_exception<Error>(m, "TovoError");

    py::enum_<MetricSource>(m, "MetricSource")
        .value("LlamaGuard2", MetricSource::LlamaGuard2)
        .value("OAIM", MetricSource::OAIM)
        .value("PerspectiveAPI", MetricSource::PerspectiveAPI)
        .value("BeaverTails", MetricSource::BeaverTails)
        .value("OOD", MetricSource::OOD)
        .value("Custom", MetricSource::Custom);

    py::class_<MetricDef>(m, "MetricDef")
        .def_readonly("id", &MetricDef::id)
        .def_readonly("name", &MetricDef::name)
        .def_readonly("source", &MetricDef::source)
        .def_readonly("definition", &MetricDef::definition)
        .def_readonly("version", &MetricDef::version);

    py::class_<Registry>(m, "Registry")
        .def("__len__", &Registry::size)
        .def("contains", &Registry::contains)
        .def("metrics", &Registry::metrics, py::return_value_policy::copy)
        .def("find", [](const Registry& r, const std::string& id) -> py::object {
            const MetricDef* def = r.find(id);
            return def ? py::cast(*def) : py::none();
        });

    m.def("builtin_registry", &builtin_registry);
    m.def("load_registry", &load_registry, py::arg("paths") = std::vector<std::string>{});
    m.def("filter_by_source", &filter_by_source);
    m.def("slugify", &slugify);

    py::class_<MetricAssignment>(m, "MetricAssignment")
        .def_readonly("sample_id", &MetricAssignment::sample_id)
        .def_readonly("metric_ids", &MetricAssignment::metric_ids)
        .def_readonly("rng_seed", &MetricAssignment::rng_seed);

    m.def("assign_metrics", &assign_metrics, py::arg("registry"), py::arg("sample_id"),
          py::arg("k_min"), py::arg("k_max"), py::arg("seed"));

    py::class_<JudgeProfile>(m, "JudgeProfile")
        .def_readonly("judge_id", &JudgeProfile::judge_id)
        .def_readonly("endpoint", &JudgeProfile::endpoint)
        .def_readonly("model_name", &JudgeProfile::model_name);

    m.def("default_roster", &default_roster);

    py::enum_<VerdictStatus>(m, "VerdictStatus")
        .value("ok", VerdictStatus::ok)
        .value("parse_failed", VerdictStatus::parse_failed)
        .value("backend_failed", VerdictStatus::backend_failed);

    py::class_<JudgeVerdict>(m, "JudgeVerdict")
        .def_readonly("judge_id", &JudgeVerdict::judge_id)
        .def_readonly("sample_id", &JudgeVerdict::sample_id)
        .def_readonly("labels", &JudgeVerdict::labels)
        .def_readonly("rationales", &JudgeVerdict::rationales)
        .def_readonly("raw_output", &JudgeVerdict::raw_output)
        .def_readonly("status", &JudgeVerdict::status);

    m.def("parse_verdict", &parse_verdict, py::arg("raw"), py::arg("expected_metrics"));
    m.def("format_verdict", &format_verdict);

    m.def("aggregate_votes", &aggregate_votes);

    py::class_<Panel>(m, "Panel")
        .def_readonly("sample_id", &Panel::sample_id)
        .def_readonly("judge_ids", &Panel::judge_ids)
        .def_readonly("rng_seed", &Panel::rng_seed);

    m.def("select_panel", &select_panel, py::arg("roster"), py::arg("panel_size"),
          py::arg("sample_id"), py::arg("seed"));

    py::class_<JudgeConsensusEntry>(m, "JudgeConsensusEntry")
        .def_readonly("agreements", &JudgeConsensusEntry::agreements)
        .def_readonly("comparisons", &JudgeConsensusEntry::comparisons)
        .def_readonly("rate", &JudgeConsensusEntry::rate);

    py::class_<LabelSource>(m, "LabelSource")
        .def(py::init<>())
        .def_readwrite("source_id", &LabelSource::source_id)
        .def_readonly("labels", &LabelSource::labels)
        .def("add", &LabelSource::add)
        .def("__len__", [](const LabelSource& s) { return s.labels.size(); });

    m.def("load_label_file", &load_label_file, py::arg("path"), py::arg("source_id") = "");

    py::class_<MetricAgreement>(m, "MetricAgreement")
        .def_readonly("agree", &MetricAgreement::agree)
        .def_readonly("total", &MetricAgreement::total)
        .def_readonly("rate", &MetricAgreement::rate)
        .def_readonly("source", &MetricAgreement::source);

    py::class_<ConsensusReport>(m, "ConsensusReport")
        .def_readonly("per_metric", &ConsensusReport::per_metric)
        .def_readonly("overall_micro", &ConsensusReport::overall_micro)
        .def_readonly("overall_macro", &ConsensusReport::overall_macro)
        .def_readonly("shared", &ConsensusReport::shared)
        .def_readonly("only_a", &ConsensusReport::only_a)
        .def_readonly("only_b", &ConsensusReport::only_b);

    m.def(
        "consensus",
        [](const LabelSource& a, const LabelSource& b, const Registry* registry) {
            return consensus(a, b, registry);
        },
        py::arg("a"), py::arg("b"), py::arg("registry") = nullptr);

    py::class_<F1Result>(m, "F1Result")
        .def_readonly("precision", &F1Result::precision)
        .def_readonly("recall", &F1Result::recall)
        .def_readonly("f1", &F1Result::f1)
        .def_readonly("zero_positives", &F1Result::zero_positives)
        .def_readonly("tp", &F1Result::tp)
        .def_readonly("fp", &F1Result::fp)
        .def_readonly("fn", &F1Result::fn)
        .def_readonly("tn", &F1Result::tn);

    m.def("unsafe_f1", &unsafe_f1);

    m.def("format_rate", &format_rate);
    m.def("render_report", [](const ConsensusReport& report, const std::string& layout,
                              const std::string& format) {
        return render_report(report, parse_report_layout(layout), parse_report_format(format));
    });

    py::class_<SyntheticJudgeSpec>(m, "SyntheticJudgeSpec")
        .def(py::init([](const std::string& judge_id, double accuracy,
                         const std::string& rationale_stub, std::uint64_t rng_seed) {
                 SyntheticJudgeSpec spec;
                 spec.judge_id = judge_id;
                 spec.accuracy = accuracy;
                 spec.rationale_stub = rationale_stub;
                 spec.rng_seed = rng_seed;
                 return spec;
             }),
             py::arg("judge_id"), py::arg("accuracy"),
             py::arg("rationale_stub") = "synthetic rationale", py::arg("rng_seed") = 0)
        .def_readwrite("judge_id", &SyntheticJudgeSpec::judge_id)
        .def_readwrite("accuracy", &SyntheticJudgeSpec::accuracy);

    m.def("plant_truth", &plant_truth, py::arg("n_samples"), py::arg("metrics"),
          py::arg("positive_rate"), py::arg("seed"));

    py::class_<SyntheticRun>(m, "SyntheticRun")
        .def_readonly("gold", &SyntheticRun::gold)
        .def_readonly("consensus", &SyntheticRun::consensus)
        .def_readonly("rationale_counts", &SyntheticRun::rationale_counts)
        .def_readonly("gold_accuracy", &SyntheticRun::gold_accuracy);

    m.def("run_synthetic_vote", &run_synthetic_vote, py::arg("specs"), py::arg("truth"),
          py::arg("panel_size"), py::arg("seed"));

    py::class_<GoldRecord>(m, "GoldRecord")
        .def_property_readonly("sample_id", [](const GoldRecord& r) { return r.sample.id; })
        .def_readonly("labels", &GoldRecord::labels)
        .def("to_line", &record_to_line)
        .def_static("from_line", &record_from_line);

    py::class_<LoadResult>(m, "LoadResult")
        .def_readonly("records", &LoadResult::records)
        .def_readonly("quarantined", &LoadResult::quarantined);

    m.def("emit", &emit, py::arg("records"), py::arg("path"));
    m.def("load", &load, py::arg("path"));
    m.def("split", &split, py::arg("records"), py::arg("fractions"), py::arg("seed"));
    m.def("labels_from_records", &labels_from_records);

    py::class_<RunConfig>(m, "RunConfig")
        .def(py::init<>())
        .def_readwrite("corpus", &RunConfig::corpus)
        .def_readwrite("roster_path", &RunConfig::roster_path)
        .def_readwrite("panel_size", &RunConfig::panel_size)
        .def_readwrite("k_min", &RunConfig::k_min)
        .def_readwrite("k_max", &RunConfig::k_max)
        .def_readwrite("threshold", &RunConfig::threshold)
        .def_readwrite("n_single", &RunConfig::n_single)
        .def_readwrite("n_multi", &RunConfig::n_multi)
        .def_readwrite("seed", &RunConfig::seed)
        .def_readwrite("out_dir", &RunConfig::out_dir)
        .def_readwrite("template_id", &RunConfig::template_id)
        .def_static("from_file", &RunConfig::from_file)
        .def("run_id", &RunConfig::run_id);

    py::class_<BuildResult>(m, "BuildResult")
        .def_readonly("dataset_path", &BuildResult::dataset_path)
        .def_readonly("manifest_path", &BuildResult::manifest_path)
        .def_readonly("vote_log_path", &BuildResult::vote_log_path);

    m.def("run_build", &run_build, py::call_guard<py::gil_scoped_release>());

    m.attr("__version__") = "0.1.0";
}
