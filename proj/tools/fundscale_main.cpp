#include <filesystem>
#include <fstream>
#include <iostream>
#include <string>

#include <CLI11.hpp>
#include <json.hpp>

#include "fundscale/report.hpp"
#include "oracle/oracle.hpp"

namespace {

using namespace fundscale;
using nlohmann::json;

constexpr int kExitOk = 0;
constexpr int kExitConfig = 2;
constexpr int kExitIngest = 3;

AlphabetMode parse_mode(const std::string& name) {
    if (name == "bytes") return AlphabetMode::bytes;
    if (name == "chars") return AlphabetMode::unicode_chars;
    throw ConfigError("unknown alphabet '" + name + "' (expected bytes or chars)");
}

ProbabilityModel parse_model(const std::string& name) {
    if (name == "coverage") return ProbabilityModel::coverage;
    if (name == "instance") return ProbabilityModel::instance;
    throw ConfigError("unknown probability model '" + name + "'");
}

void write_file(const std::filesystem::path& path, const std::string& contents) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw Error("cannot write " + path.string());
    out.write(contents.data(), static_cast<std::streamsize>(contents.size()));
    if (!out) throw Error("failed writing " + path.string());
}

struct AnalyzeArgs {
    std::string file;
    std::string alphabet = "chars";
    std::string scales;
    std::size_t v_max = 13;
    double lambda = 0.01;
    std::string prob_model = "coverage";
    std::size_t chunk_size = 0;
    std::uint64_t min_freq = 2;
    unsigned jobs = 0;
    bool band_per_insertion = false;
    bool paranoid = false;
    std::string out_path;
    std::string profiles_dir;
    std::string trace_path;
    std::string token_rules_path;
    std::string space_glyph = "·";
};

int run_analyze(const AnalyzeArgs& args) {
    const AlphabetMode mode = parse_mode(args.alphabet);

    AnalyzeOptions options;
    options.solver.v_max = args.v_max;
    options.solver.lambda = args.lambda;
    options.solver.model = parse_model(args.prob_model);
    options.solver.min_prospective_frequency = args.min_freq;
    options.solver.band_recompute_per_insertion = args.band_per_insertion;
    options.solver.paranoid_checks = args.paranoid;
    options.solver.validate();
    options.chunk_size = args.chunk_size;
    options.jobs = args.jobs;
    options.render.space_glyph = args.space_glyph;
    options.scales = args.scales.empty() ? ScaleSelection::defaults_for(mode)
                                         : ScaleSelection::parse(args.scales);
    if (!args.token_rules_path.empty()) {
        std::ifstream rules_in(args.token_rules_path, std::ios::binary);
        if (!rules_in) throw ConfigError("cannot open token rules " + args.token_rules_path);
        std::string text((std::istreambuf_iterator<char>(rules_in)),
                         std::istreambuf_iterator<char>());
        options.token_rules = WordTokenRules::from_config(text);
    }
    if (options.scales.word_scale && mode == AlphabetMode::bytes) {
        throw UnsupportedScaleError("word scale is not defined for bytes-mode input");
    }

    Message message = [&] {
        try {
            return ingest(args.file, mode);
        } catch (const Error& e) {
            // any failure while loading the input is an ingest failure
            std::cerr << "error: " << e.what() << "\n";
            std::exit(kExitIngest);
        }
    }();

    const std::string input_name = std::filesystem::path(args.file).filename().string();
    const ComparisonReport report = compare_scales(message, options, input_name);
    const std::string report_text = report_to_json(report).dump(2) + "\n";

    if (args.out_path.empty()) {
        std::cout << report_text;
    } else {
        write_file(args.out_path, report_text);
    }

    if (!args.profiles_dir.empty()) {
        const std::filesystem::path dir(args.profiles_dir);
        std::filesystem::create_directories(dir);
        const std::string stem = std::filesystem::path(input_name).stem().string();
        auto dump_scale = [&](const char* name, const ScaleOutput& output) {
            write_file(dir / (stem + "_" + name + "_zipf.csv"), zipf_to_csv(output.zipf));
            write_file(dir / (stem + "_" + name + "_lengths.csv"),
                       histogram_to_csv(output.histogram));
        };
        if (report.char_scale) dump_scale("char", *report.char_scale);
        if (report.word_scale) dump_scale("word", *report.word_scale);
        if (report.fundamental) dump_scale("fundamental", *report.fundamental);
    }

    if (!args.trace_path.empty()) {
        write_file(args.trace_path,
                   traces_to_json(report.traces, mode, options.render).dump(2) + "\n");
    }
    return kExitOk;
}

struct OracleArgs {
    std::string file;
    std::string alphabet = "chars";
    std::size_t v_max = 13;
    std::string prob_model = "coverage";
};

int run_oracle(const OracleArgs& args) {
    const AlphabetMode mode = parse_mode(args.alphabet);
    const ProbabilityModel model = parse_model(args.prob_model);

    Message message = [&] {
        try {
            return ingest(args.file, mode);
        } catch (const Error& e) {
            std::cerr << "error: " << e.what() << "\n";
            std::exit(kExitIngest);
        }
    }();

    const auto unconstrained =
        oracle::brute_force_min_entropy(message, model, args.v_max, false);
    const auto constrained =
        oracle::brute_force_min_entropy(message, model, args.v_max, true);

    RenderOptions render;
    auto witness_json = [&](const Language& witness) {
        json rows = json::array();
        for (const auto& [symbol, entry] : witness.entries()) {
            rows.push_back(json{{"symbol", render_symbol(symbol, mode, render)},
                                {"frequency", entry.frequency},
                                {"length", symbol.size()}});
        }
        return rows;
    };

    const json out{
        {"n_units", message.size()},
        {"model", to_string(model)},
        {"v_max", args.v_max},
        {"unconstrained",
         json{{"h_min", unconstrained.h_min},
              {"tilings", unconstrained.tilings_enumerated},
              {"witness", witness_json(unconstrained.witness)}}},
        {"multiunit_frequency2",
         json{{"h_min", constrained.h_min},
              {"tilings", constrained.tilings_enumerated},
              {"witness", witness_json(constrained.witness)}}},
    };
    std::cout << out.dump(2) << "\n";
    return kExitOk;
}

} // namespace

int main(int argc, char** argv) {
    CLI::App app{"Minimal-entropy symbol discovery for text and binary messages"};
    app.require_subcommand(1);

    AnalyzeArgs analyze_args;
    CLI::App* analyze = app.add_subcommand(
        "analyze", "Analyze a file at the character, word and fundamental scales");
    analyze->add_option("file", analyze_args.file, "Input file")->required();
    analyze->add_option("--alphabet", analyze_args.alphabet, "bytes|chars (default chars)");
    analyze->add_option("--scales", analyze_args.scales,
                        "Comma list of char,word,fundamental (default: all valid for the mode)");
    analyze->add_option("--vmax", analyze_args.v_max, "Maximum symbol length (default 13)");
    analyze->add_option("--lambda", analyze_args.lambda,
                        "Uncertainty band half-width (default 0.01)");
    analyze->add_option("--prob-model", analyze_args.prob_model,
                        "coverage|instance (default coverage)");
    analyze->add_option("--chunk-size", analyze_args.chunk_size,
                        "Units per chunk; 0 = 40000 for chars, 8000 for bytes");
    analyze->add_option("--min-freq", analyze_args.min_freq,
                        "Prospective frequency floor (default 2)");
    analyze->add_option("--jobs", analyze_args.jobs, "Parallel chunk workers; 0 = all cores");
    analyze->add_flag("--band-per-insertion", analyze_args.band_per_insertion,
                      "Recompute the band reference before every candidate");
    analyze->add_flag("--paranoid", analyze_args.paranoid,
                      "Verify conservation and revert integrity during solving");
    analyze->add_option("--out", analyze_args.out_path, "Write the JSON report here");
    analyze->add_option("--profiles-dir", analyze_args.profiles_dir,
                        "Write Zipf and length CSV profiles into this directory");
    analyze->add_option("--trace", analyze_args.trace_path, "Write the solver trace JSON here");
    analyze->add_option("--token-rules", analyze_args.token_rules_path,
                        "Plain-text word tokenizer rules file");
    analyze->add_option("--space-glyph", analyze_args.space_glyph,
                        "Rendering for the space character (default ·)");

    OracleArgs oracle_args;
    CLI::App* oracle_cmd = app.add_subcommand(
        "oracle", "Exact minimum over all tilings (dev tool, inputs of at most 16 units)");
    oracle_cmd->add_option("file", oracle_args.file, "Input file")->required();
    oracle_cmd->add_option("--alphabet", oracle_args.alphabet, "bytes|chars (default chars)");
    oracle_cmd->add_option("--vmax", oracle_args.v_max, "Maximum segment length (default 13)");
    oracle_cmd->add_option("--prob-model", oracle_args.prob_model,
                           "coverage|instance (default coverage)");

    try {
        app.parse(argc, argv);
        if (analyze->parsed()) return run_analyze(analyze_args);
        if (oracle_cmd->parsed()) return run_oracle(oracle_args);
        return kExitConfig;
    } catch (const CLI::ParseError& e) {
        if (e.get_exit_code() == 0) return app.exit(e); // --help
        app.exit(e);
        return kExitConfig;
    } catch (const ConfigError& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kExitConfig;
    } catch (const DomainError& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kExitConfig;
    } catch (const IngestError& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kExitIngest;
    } catch (const fundscale::Error& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 1;
    }
}
