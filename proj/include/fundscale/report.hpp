#pragma once

#include <cstdint>
#include <filesystem>
#include <optional>
#include <string>
#include <vector>

#include <json.hpp>

#include "fundscale/chunk.hpp"
#include "fundscale/entropy.hpp"
#include "fundscale/message.hpp"
#include "fundscale/scales.hpp"
#include "fundscale/solver.hpp"

namespace fundscale {

inline constexpr int report_schema_version = 1;

/// Loads a file as a Message. bytes mode reads raw bytes; unicode-chars mode
/// decodes UTF-8 strictly. Throws IngestError (unreadable file, bad UTF-8
/// with byte offset) or DomainError (empty file).
Message ingest(const std::filesystem::path& path, AlphabetMode mode);

/// How symbols are rendered for humans. Unicode symbols print verbatim
/// except space (shown as space_glyph) and control characters (shown as
/// backslash escapes); bytes-mode symbols print as lowercase hex pairs.
struct RenderOptions {
    std::string space_glyph = "·"; // middle dot; "ø" gives the ø style
};

std::string render_symbol(const Units& units, AlphabetMode mode, const RenderOptions& opts = {});

struct ZipfRow {
    std::uint64_t rank = 0; // 1-based
    Units units;
    std::string rendered;
    double probability = 0.0;
    std::uint64_t occurrences = 0;
    std::size_t length = 0;
};

/// Rank-frequency table: occurrences descending, ties broken by shorter
/// length then lexicographic unit order.
struct ZipfProfile {
    std::vector<ZipfRow> rows;
};

ZipfProfile zipf_profile(const Language& language, ProbabilityModel model, std::size_t n_units,
                         AlphabetMode mode, const RenderOptions& opts = {});

struct LengthHistogram {
    struct Bin {
        std::size_t length = 0;
        std::uint64_t distinct_symbols = 0;
        std::uint64_t total_occurrences = 0;
    };
    std::vector<Bin> bins; // sorted by length
};

LengthHistogram length_histogram(const Language& language);

struct ScaleSelection {
    bool char_scale = true;
    bool word_scale = false;
    bool fundamental = true;

    /// Parses a comma list like "char,word,fundamental".
    static ScaleSelection parse(const std::string& csv); // throws ConfigError

    /// char + fundamental always; word only for unicode text.
    static ScaleSelection defaults_for(AlphabetMode mode);
};

struct AnalyzeOptions {
    SolverConfig solver;
    ScaleSelection scales;
    std::size_t chunk_size = 0; // 0 = mode default
    unsigned jobs = 0;          // 0 = hardware concurrency
    WordTokenRules token_rules = WordTokenRules::defaults();
    RenderOptions render;
};

struct ScaleOutput {
    EntropyReport report;
    ZipfProfile zipf;
    LengthHistogram histogram;
};

/// Everything `analyze` emits for one input.
struct ComparisonReport {
    std::string input_name;
    AlphabetMode mode = AlphabetMode::bytes;
    std::size_t n_units = 0;
    AnalyzeOptions options;

    std::optional<ScaleOutput> char_scale;
    std::optional<ScaleOutput> word_scale;      // report model is always instance
    std::optional<ScaleOutput> fundamental;
    std::size_t fundamental_chunks = 0;
    std::vector<SolverTrace> traces;            // one per chunk, message order
};

/// Runs the requested scales over a message. Word scale on a bytes-mode
/// message throws UnsupportedScaleError.
ComparisonReport compare_scales(const Message& message, const AnalyzeOptions& options,
                                const std::string& input_name = "");

nlohmann::json report_to_json(const ComparisonReport& report);
nlohmann::json traces_to_json(const std::vector<SolverTrace>& traces, AlphabetMode mode,
                              const RenderOptions& opts = {});

/// CSV with header "rank,symbol,probability,occurrences,length".
std::string zipf_to_csv(const ZipfProfile& profile);

/// CSV with header "length,distinct_symbols,total_occurrences".
std::string histogram_to_csv(const LengthHistogram& histogram);

} // namespace fundscale
