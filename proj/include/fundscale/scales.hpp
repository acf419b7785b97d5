#pragma once

#include <set>
#include <string_view>
#include <vector>

#include "fundscale/entropy.hpp"
#include "fundscale/message.hpp"

namespace fundscale {

/// Tokenization rules for the word scale. Delimiters never appear inside a
/// token; every punctuation unit becomes its own token; an apostrophe with a
/// regular unit on both sides stays inside its token (contractions are kept
/// joined).
struct WordTokenRules {
    std::set<Unit> punctuation;
    std::set<Unit> delimiters;

    /// ASCII punctuation plus common typographic quotes/dashes; Unicode
    /// whitespace as delimiters.
    static WordTokenRules defaults();

    /// Parses a plain-text rule config: one directive per line,
    ///   punct <literal char or U+XXXX>
    ///   delim <literal char or U+XXXX>
    /// Blank lines and lines starting with '#' are ignored.
    /// Throws ConfigError on malformed lines.
    static WordTokenRules from_config(std::string_view text);

    bool is_punctuation(Unit u) const { return punctuation.count(u) > 0; }
    bool is_delimiter(Unit u) const { return delimiters.count(u) > 0; }
};

struct WordScaleResult {
    Language language;                   // positions are token start offsets
    std::vector<SymbolInstance> tokens;  // in reading order
};

/// Tokenizes a unicode-chars message into words and punctuation symbols.
/// Throws UnsupportedScaleError for bytes-mode messages; words are not
/// defined for binary data.
WordScaleResult word_scale(const Message& message, const WordTokenRules& rules);

/// Character-scale entropy report (base language B1 of the message).
EntropyReport char_scale_report(const Message& message, ProbabilityModel model);

} // namespace fundscale
