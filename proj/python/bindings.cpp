#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include <string>
#include <vector>

#include <json.hpp>

#include "fundscale/report.hpp"

namespace py = pybind11;
using namespace fundscale;

namespace {

AlphabetMode mode_from_string(const std::string& name) {
    if (name == "bytes") return AlphabetMode::bytes;
    if (name == "chars" || name == "unicode-chars") return AlphabetMode::unicode_chars;
    throw ConfigError("unknown alphabet '" + name + "' (expected bytes or chars)");
}

ProbabilityModel model_from_string(const std::string& name) {
    if (name == "coverage") return ProbabilityModel::coverage;
    if (name == "instance") return ProbabilityModel::instance;
    throw ConfigError("unknown probability model '" + name + "'");
}

py::dict report_dict(const EntropyReport& report) {
    py::dict out;
    out["h"] = report.h;
    out["diversity"] = report.diversity;
    out["n_units"] = report.n_units;
    out["n_instances"] = report.n_instances;
    out["specific_diversity"] = report.specific_diversity;
    out["model"] = to_string(report.model);
    return out;
}

py::list language_rows(const Language& language, AlphabetMode mode) {
    const ZipfProfile profile =
        zipf_profile(language, ProbabilityModel::instance, language.occupied_units(), mode);
    py::list rows;
    for (const ZipfRow& row : profile.rows) {
        py::dict item;
        item["rank"] = row.rank;
        item["symbol"] = row.rendered;
        item["units"] = std::vector<std::uint32_t>(row.units.begin(), row.units.end());
        item["occurrences"] = row.occurrences;
        item["length"] = row.length;
        rows.append(std::move(item));
    }
    return rows;
}

} // namespace

PYBIND11_MODULE(_fundscale, m) {
    m.doc() = "Minimal-entropy symbol discovery for text and binary messages";

    py::register_exception<ConfigError>(m, "FundscaleConfigError", PyExc_ValueError);
    py::register_exception<DomainError>(m, "FundscaleDomainError", PyExc_ValueError);
    py::register_exception<IngestError>(m, "FundscaleIngestError", PyExc_ValueError);

    py::class_<Message>(m, "Message")
        .def_static(
            "from_text", [](const std::string& text) { return Message::from_text_utf8(text); },
            py::arg("text"), "Decode UTF-8 text, one unit per Unicode scalar")
        .def_static(
            "from_bytes",
            [](const py::bytes& raw) { return Message::from_bytes(std::string(raw)); },
            py::arg("raw"), "Wrap raw bytes, one unit per byte")
        .def_property_readonly("n_units", &Message::size)
        .def_property_readonly("alphabet_mode",
                               [](const Message& msg) { return to_string(msg.alphabet_mode()); })
        .def("__len__", &Message::size)
        .def("to_bytes", [](const Message& msg) { return py::bytes(msg.to_bytes()); });

    py::class_<SolverConfig>(m, "SolverConfig")
        .def(py::init([](std::size_t v_max, double lambda_, const std::string& model,
                         std::uint64_t min_frequency, bool band_per_insertion, bool paranoid) {
                 SolverConfig cfg;
                 cfg.v_max = v_max;
                 cfg.lambda = lambda_;
                 cfg.model = model_from_string(model);
                 cfg.min_prospective_frequency = min_frequency;
                 cfg.band_recompute_per_insertion = band_per_insertion;
                 cfg.paranoid_checks = paranoid;
                 cfg.validate();
                 return cfg;
             }),
             py::arg("v_max") = 13, py::arg("lambda_") = 0.01, py::arg("model") = "coverage",
             py::arg("min_frequency") = 2, py::arg("band_per_insertion") = false,
             py::arg("paranoid") = false)
        .def_readwrite("v_max", &SolverConfig::v_max)
        .def_readwrite("lambda_", &SolverConfig::lambda)
        .def_readwrite("min_frequency", &SolverConfig::min_prospective_frequency);

    m.def(
        "char_report",
        [](const Message& message, const std::string& model) {
            return report_dict(char_scale_report(message, model_from_string(model)));
        },
        py::arg("message"), py::arg("model") = "coverage",
        "Character-scale entropy report of a message");

    m.def(
        "solve",
        [](const Message& message, const SolverConfig& cfg) {
            const SolveResult result = solve(message, cfg);
            py::dict out;
            out["report"] = report_dict(result.report);
            out["language"] = language_rows(result.language, message.alphabet_mode());
            out["h_initial"] = result.trace.h_initial;
            out["h_final"] = result.trace.h_final;
            out["steps"] = result.trace.steps.size();
            return out;
        },
        py::arg("message"), py::arg("config") = SolverConfig{},
        "Minimal-entropy symbol search over one message");

    m.def(
        "analyze_file",
        [](const std::string& path, const std::string& alphabet, const std::string& scales,
           const SolverConfig& cfg, std::size_t chunk_size, unsigned jobs) {
            const AlphabetMode mode = mode_from_string(alphabet);
            AnalyzeOptions options;
            options.solver = cfg;
            options.scales = scales.empty() ? ScaleSelection::defaults_for(mode)
                                            : ScaleSelection::parse(scales);
            options.chunk_size = chunk_size;
            options.jobs = jobs;
            const Message message = ingest(path, mode);
            const ComparisonReport report =
                compare_scales(message, options, std::filesystem::path(path).filename().string());
            return report_to_json(report).dump(2);
        },
        py::arg("path"), py::arg("alphabet") = "chars", py::arg("scales") = "",
        py::arg("config") = SolverConfig{}, py::arg("chunk_size") = 0, py::arg("jobs") = 0,
        "Run the full multi-scale analysis of a file; returns the JSON report");

    m.def(
        "analyze_text",
        [](const std::string& text, const std::string& scales, const SolverConfig& cfg,
           std::size_t chunk_size, unsigned jobs) {
            AnalyzeOptions options;
            options.solver = cfg;
            options.scales = scales.empty()
                                 ? ScaleSelection::defaults_for(AlphabetMode::unicode_chars)
                                 : ScaleSelection::parse(scales);
            options.chunk_size = chunk_size;
            options.jobs = jobs;
            const Message message = Message::from_text_utf8(text);
            return report_to_json(compare_scales(message, options, "<text>")).dump(2);
        },
        py::arg("text"), py::arg("scales") = "", py::arg("config") = SolverConfig{},
        py::arg("chunk_size") = 0, py::arg("jobs") = 0,
        "Multi-scale analysis of an in-memory string; returns the JSON report");

    m.attr("schema_version") = report_schema_version;
}
