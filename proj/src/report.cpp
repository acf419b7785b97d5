#include "fundscale/report.hpp"

#include <algorithm>
#include <charconv>
#include <cstdio>
#include <fstream>
#include <map>
#include <sstream>

namespace fundscale {

using nlohmann::json;

Message ingest(const std::filesystem::path& path, AlphabetMode mode) {
    std::ifstream in(path, std::ios::binary);
    if (!in) {
        throw IngestError("cannot open file: " + path.string());
    }
    std::ostringstream buffer;
    buffer << in.rdbuf();
    if (in.bad()) {
        throw IngestError("failed reading file: " + path.string());
    }
    const std::string raw = buffer.str();
    if (raw.empty()) {
        throw DomainError("empty file: " + path.string());
    }
    return mode == AlphabetMode::bytes ? Message::from_bytes(raw) : Message::from_text_utf8(raw);
}

namespace {

const char kHexDigits[] = "0123456789abcdef";

void append_utf8(char32_t cp, std::string& out) {
    if (cp < 0x80) {
        out.push_back(static_cast<char>(cp));
    } else if (cp < 0x800) {
        out.push_back(static_cast<char>(0xC0 | (cp >> 6)));
        out.push_back(static_cast<char>(0x80 | (cp & 0x3F)));
    } else if (cp < 0x10000) {
        out.push_back(static_cast<char>(0xE0 | (cp >> 12)));
        out.push_back(static_cast<char>(0x80 | ((cp >> 6) & 0x3F)));
        out.push_back(static_cast<char>(0x80 | (cp & 0x3F)));
    } else {
        out.push_back(static_cast<char>(0xF0 | (cp >> 18)));
        out.push_back(static_cast<char>(0x80 | ((cp >> 12) & 0x3F)));
        out.push_back(static_cast<char>(0x80 | ((cp >> 6) & 0x3F)));
        out.push_back(static_cast<char>(0x80 | (cp & 0x3F)));
    }
}

std::string format_double(double value) {
    char buf[64];
    auto [end, ec] = std::to_chars(buf, buf + sizeof(buf), value);
    return std::string(buf, end);
}

std::string csv_quote(const std::string& field) {
    if (field.find_first_of(",\"\n\r") == std::string::npos) return field;
    std::string quoted = "\"";
    for (char c : field) {
        if (c == '"') quoted += "\"\"";
        else quoted.push_back(c);
    }
    quoted.push_back('"');
    return quoted;
}

} // namespace

std::string render_symbol(const Units& units, AlphabetMode mode, const RenderOptions& opts) {
    std::string out;
    if (mode == AlphabetMode::bytes) {
        out.reserve(units.size() * 2);
        for (Unit u : units) {
            out.push_back(kHexDigits[(u >> 4) & 0xF]);
            out.push_back(kHexDigits[u & 0xF]);
        }
        return out;
    }
    for (Unit u : units) {
        switch (u) {
            case U' ': out += opts.space_glyph; break;
            case U'\t': out += "\\t"; break;
            case U'\n': out += "\\n"; break;
            case U'\r': out += "\\r"; break;
            case U'\\': out += "\\\\"; break;
            default:
                if (u < 0x20 || u == 0x7F || (u >= 0x80 && u <= 0x9F)) {
                    char buf[16];
                    std::snprintf(buf, sizeof(buf), "\\u{%04X}", static_cast<unsigned>(u));
                    out += buf;
                } else {
                    append_utf8(u, out);
                }
        }
    }
    return out;
}

ZipfProfile zipf_profile(const Language& language, ProbabilityModel model, std::size_t n_units,
                         AlphabetMode mode, const RenderOptions& opts) {
    if (language.empty()) throw DomainError("profile of an empty language");

    const double denominator = model == ProbabilityModel::coverage
                                   ? static_cast<double>(n_units)
                                   : static_cast<double>(language.n_instances());

    ZipfProfile profile;
    profile.rows.reserve(language.entries().size());
    for (const auto& [symbol, entry] : language.entries()) {
        ZipfRow row;
        row.units = symbol;
        row.rendered = render_symbol(symbol, mode, opts);
        row.occurrences = entry.frequency;
        row.length = symbol.size();
        const std::uint64_t weight = model == ProbabilityModel::coverage
                                         ? entry.frequency * symbol.size()
                                         : entry.frequency;
        row.probability = static_cast<double>(weight) / denominator;
        profile.rows.push_back(std::move(row));
    }
    std::sort(profile.rows.begin(), profile.rows.end(), [](const ZipfRow& a, const ZipfRow& b) {
        if (a.occurrences != b.occurrences) return a.occurrences > b.occurrences;
        if (a.length != b.length) return a.length < b.length;
        return a.units < b.units;
    });
    for (std::size_t i = 0; i < profile.rows.size(); ++i) {
        profile.rows[i].rank = i + 1;
    }
    return profile;
}

LengthHistogram length_histogram(const Language& language) {
    std::map<std::size_t, LengthHistogram::Bin> bins;
    for (const auto& [symbol, entry] : language.entries()) {
        LengthHistogram::Bin& bin = bins[symbol.size()];
        bin.length = symbol.size();
        bin.distinct_symbols += 1;
        bin.total_occurrences += entry.frequency;
    }
    LengthHistogram histogram;
    histogram.bins.reserve(bins.size());
    for (auto& [length, bin] : bins) histogram.bins.push_back(bin);
    return histogram;
}

ScaleSelection ScaleSelection::parse(const std::string& csv) {
    ScaleSelection sel{false, false, false};
    std::istringstream in(csv);
    std::string item;
    bool any = false;
    while (std::getline(in, item, ',')) {
        if (item.empty()) continue;
        any = true;
        if (item == "char") sel.char_scale = true;
        else if (item == "word") sel.word_scale = true;
        else if (item == "fundamental") sel.fundamental = true;
        else throw ConfigError("unknown scale '" + item + "' (expected char, word, fundamental)");
    }
    if (!any) throw ConfigError("no scales selected");
    return sel;
}

ScaleSelection ScaleSelection::defaults_for(AlphabetMode mode) {
    ScaleSelection sel;
    sel.char_scale = true;
    sel.word_scale = mode == AlphabetMode::unicode_chars;
    sel.fundamental = true;
    return sel;
}

ComparisonReport compare_scales(const Message& message, const AnalyzeOptions& options,
                                const std::string& input_name) {
    if (message.empty()) throw DomainError("cannot analyze an empty message");
    options.solver.validate();

    ComparisonReport report;
    report.input_name = input_name;
    report.mode = message.alphabet_mode();
    report.n_units = message.size();
    report.options = options;

    const ProbabilityModel model = options.solver.model;
    const AlphabetMode mode = message.alphabet_mode();

    if (options.scales.word_scale && mode != AlphabetMode::unicode_chars) {
        throw UnsupportedScaleError("word scale is not defined for bytes-mode messages");
    }

    if (options.scales.char_scale) {
        auto [language, cover] = char_cover(message);
        ScaleOutput out;
        out.report = entropy_report(language, message, model);
        out.zipf = zipf_profile(language, model, message.size(), mode, options.render);
        out.histogram = length_histogram(language);
        report.char_scale = std::move(out);
    }

    if (options.scales.word_scale) {
        WordScaleResult words = word_scale(message, options.token_rules);
        // Tokens do not tile the message, so word-scale probabilities are
        // frequency-based and N is the token count.
        ScaleOutput out;
        out.report = entropy_report_for_counts(words.language, words.language.n_instances(),
                                               ProbabilityModel::instance);
        out.zipf = zipf_profile(words.language, ProbabilityModel::instance,
                                words.language.n_instances(), mode, options.render);
        out.histogram = length_histogram(words.language);
        report.word_scale = std::move(out);
    }

    if (options.scales.fundamental) {
        PipelineResult pipeline =
            solve_chunked(message, options.solver, options.chunk_size, options.jobs);
        ScaleOutput out;
        out.report = pipeline.merged.report;
        out.zipf = zipf_profile(pipeline.merged.language, model, message.size(), mode,
                                options.render);
        out.histogram = length_histogram(pipeline.merged.language);
        report.fundamental = std::move(out);
        report.fundamental_chunks = pipeline.chunks.size();
        report.traces.reserve(pipeline.chunks.size());
        for (ChunkResult& chunk : pipeline.chunks) {
            report.traces.push_back(std::move(chunk.result.trace));
        }
    }

    return report;
}

namespace {

json report_json(const EntropyReport& report) {
    return json{
        {"h", report.h},
        {"diversity", report.diversity},
        {"n_units", report.n_units},
        {"n_instances", report.n_instances},
        {"specific_diversity", report.specific_diversity},
        {"model", to_string(report.model)},
    };
}

json zipf_json(const ZipfProfile& profile) {
    json rows = json::array();
    for (const ZipfRow& row : profile.rows) {
        json units = json::array();
        for (Unit u : row.units) units.push_back(static_cast<std::uint32_t>(u));
        rows.push_back(json{
            {"rank", row.rank},
            {"symbol", row.rendered},
            {"units", std::move(units)},
            {"probability", row.probability},
            {"occurrences", row.occurrences},
            {"length", row.length},
        });
    }
    return rows;
}

json histogram_json(const LengthHistogram& histogram) {
    json bins = json::array();
    for (const LengthHistogram::Bin& bin : histogram.bins) {
        bins.push_back(json{
            {"length", bin.length},
            {"distinct_symbols", bin.distinct_symbols},
            {"total_occurrences", bin.total_occurrences},
        });
    }
    return bins;
}

json scale_json(const ScaleOutput& output) {
    return json{
        {"report", report_json(output.report)},
        {"zipf_profile", zipf_json(output.zipf)},
        {"length_histogram", histogram_json(output.histogram)},
    };
}

} // namespace

json report_to_json(const ComparisonReport& report) {
    json scales = json::object();
    if (report.char_scale) scales["char"] = scale_json(*report.char_scale);
    if (report.word_scale) scales["word"] = scale_json(*report.word_scale);
    if (report.fundamental) {
        scales["fundamental"] = scale_json(*report.fundamental);
        scales["fundamental"]["chunks"] = report.fundamental_chunks;
    }

    const SolverConfig& solver = report.options.solver;
    json config{
        {"v_max", solver.v_max},
        {"lambda", solver.lambda},
        {"model", to_string(solver.model)},
        {"min_prospective_frequency", solver.min_prospective_frequency},
        {"band_recompute_per_insertion", solver.band_recompute_per_insertion},
        {"chunk_size", report.options.chunk_size == 0 ? default_chunk_size(report.mode)
                                                      : report.options.chunk_size},
        {"space_glyph", report.options.render.space_glyph},
    };

    return json{
        {"schema_version", report_schema_version},
        {"input", json{{"name", report.input_name},
                       {"alphabet_mode", to_string(report.mode)},
                       {"n_units", report.n_units}}},
        {"config", std::move(config)},
        {"scales", std::move(scales)},
    };
}

json traces_to_json(const std::vector<SolverTrace>& traces, AlphabetMode mode,
                    const RenderOptions& opts) {
    json out = json::array();
    for (const SolverTrace& trace : traces) {
        json steps = json::array();
        for (const SolverStep& step : trace.steps) {
            steps.push_back(json{
                {"symbol", render_symbol(step.symbol, mode, opts)},
                {"v", step.v},
                {"action", to_string(step.action)},
                {"h_before", step.h_before},
                {"h_after", step.h_after},
                {"h_attempted", step.h_attempted},
                {"d_before", step.d_before},
                {"d_after", step.d_after},
            });
        }
        out.push_back(json{
            {"h_initial", trace.h_initial},
            {"h_final", trace.h_final},
            {"steps", std::move(steps)},
        });
    }
    return out;
}

std::string zipf_to_csv(const ZipfProfile& profile) {
    std::string csv = "rank,symbol,probability,occurrences,length\n";
    for (const ZipfRow& row : profile.rows) {
        csv += std::to_string(row.rank);
        csv.push_back(',');
        csv += csv_quote(row.rendered);
        csv.push_back(',');
        csv += format_double(row.probability);
        csv.push_back(',');
        csv += std::to_string(row.occurrences);
        csv.push_back(',');
        csv += std::to_string(row.length);
        csv.push_back('\n');
    }
    return csv;
}

std::string histogram_to_csv(const LengthHistogram& histogram) {
    std::string csv = "length,distinct_symbols,total_occurrences\n";
    for (const LengthHistogram::Bin& bin : histogram.bins) {
        csv += std::to_string(bin.length);
        csv.push_back(',');
        csv += std::to_string(bin.distinct_symbols);
        csv.push_back(',');
        csv += std::to_string(bin.total_occurrences);
        csv.push_back('\n');
    }
    return csv;
}

} // namespace fundscale
