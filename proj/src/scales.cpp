#include "fundscale/scales.hpp"

#include <sstream>
#include <string>

namespace fundscale {

namespace {

constexpr Unit kAsciiPunct[] = {
    U'!', U'"', U'#', U'$', U'%', U'&', U'\'', U'(', U')', U'*', U'+', U',', U'-',
    U'.', U'/', U':', U';', U'<', U'=', U'>',  U'?', U'@', U'[', U'\\', U']', U'^',
    U'_', U'`', U'{', U'|', U'}', U'~',
};

// Typographic quotes, dashes, ellipsis, inverted marks, guillemets.
constexpr Unit kExtraPunct[] = {
    U'«', U'»', U'¿', U'¡', U'‐', U'‑', U'‒',
    U'–', U'—', U'―', U'‘', U'’', U'‚', U'“',
    U'”', U'„', U'…', U'′', U'″',
};

constexpr Unit kWhitespace[] = {
    U'\t',     U'\n',     U'\v',     U'\f',     U'\r',     U' ',      U'',
    U' ', U' ', U' ', U' ', U' ', U' ', U' ',
    U' ', U' ', U' ', U' ', U' ', U' ', U' ',
    U' ', U' ', U' ', U'　',
};

bool is_apostrophe(Unit u) {
    return u == U'\'' || u == U'’';
}

Unit parse_codepoint(const std::string& token, int line_no) {
    if (token.size() >= 3 && (token[0] == 'U' || token[0] == 'u') && token[1] == '+') {
        char32_t cp = 0;
        for (std::size_t i = 2; i < token.size(); ++i) {
            const char c = token[i];
            int digit;
            if (c >= '0' && c <= '9') digit = c - '0';
            else if (c >= 'a' && c <= 'f') digit = c - 'a' + 10;
            else if (c >= 'A' && c <= 'F') digit = c - 'A' + 10;
            else {
                std::ostringstream msg;
                msg << "token rules line " << line_no << ": bad codepoint '" << token << "'";
                throw ConfigError(msg.str());
            }
            cp = cp * 16 + static_cast<char32_t>(digit);
        }
        if (cp > 0x10FFFF) {
            std::ostringstream msg;
            msg << "token rules line " << line_no << ": codepoint above U+10FFFF";
            throw ConfigError(msg.str());
        }
        return cp;
    }
    Message decoded = [&] {
        try {
            return Message::from_text_utf8(token);
        } catch (const IngestError&) {
            std::ostringstream msg;
            msg << "token rules line " << line_no << ": invalid UTF-8 literal";
            throw ConfigError(msg.str());
        }
    }();
    if (decoded.size() != 1) {
        std::ostringstream msg;
        msg << "token rules line " << line_no << ": expected a single character, got '"
            << token << "'";
        throw ConfigError(msg.str());
    }
    return decoded.at(0);
}

} // namespace

WordTokenRules WordTokenRules::defaults() {
    WordTokenRules rules;
    for (Unit u : kAsciiPunct) rules.punctuation.insert(u);
    for (Unit u : kExtraPunct) rules.punctuation.insert(u);
    for (Unit u : kWhitespace) rules.delimiters.insert(u);
    return rules;
}

WordTokenRules WordTokenRules::from_config(std::string_view text) {
    WordTokenRules rules;
    std::istringstream in{std::string(text)};
    std::string line;
    int line_no = 0;
    while (std::getline(in, line)) {
        ++line_no;
        if (!line.empty() && line.back() == '\r') line.pop_back();
        std::istringstream fields(line);
        std::string kind;
        if (!(fields >> kind) || kind[0] == '#') continue;
        std::string value;
        if (!(fields >> value)) {
            std::ostringstream msg;
            msg << "token rules line " << line_no << ": missing value";
            throw ConfigError(msg.str());
        }
        const Unit u = parse_codepoint(value, line_no);
        if (kind == "punct" || kind == "punctuation") {
            rules.punctuation.insert(u);
        } else if (kind == "delim" || kind == "delimiter") {
            rules.delimiters.insert(u);
        } else {
            std::ostringstream msg;
            msg << "token rules line " << line_no << ": unknown class '" << kind
                << "' (expected punct or delim)";
            throw ConfigError(msg.str());
        }
    }
    return rules;
}

WordScaleResult word_scale(const Message& message, const WordTokenRules& rules) {
    if (message.alphabet_mode() != AlphabetMode::unicode_chars) {
        throw UnsupportedScaleError("word scale is not defined for bytes-mode messages");
    }
    if (message.empty()) throw DomainError("cannot analyze an empty message");

    WordScaleResult out;
    const std::size_t n = message.size();
    std::size_t i = 0;
    auto is_word_unit = [&](std::size_t k) {
        const Unit u = message.at(k);
        return !rules.is_delimiter(u) && !rules.is_punctuation(u);
    };
    while (i < n) {
        const Unit u = message.at(i);
        if (rules.is_delimiter(u)) {
            ++i;
            continue;
        }
        if (rules.is_punctuation(u)) {
            // An apostrophe flanked by word units stays inside its word.
            const bool joined = is_apostrophe(u) && i > 0 && i + 1 < n && is_word_unit(i - 1) &&
                                is_word_unit(i + 1);
            if (!joined) {
                out.tokens.push_back(SymbolInstance{i, Units(1, u)});
                ++i;
                continue;
            }
        }
        // Maximal run of word units, keeping joined apostrophes.
        const std::size_t start = i;
        while (i < n) {
            const Unit v = message.at(i);
            if (rules.is_delimiter(v)) break;
            if (rules.is_punctuation(v)) {
                const bool joined = is_apostrophe(v) && i > start && i + 1 < n && is_word_unit(i + 1);
                if (!joined) break;
            }
            ++i;
        }
        out.tokens.push_back(SymbolInstance{start, message.slice(start, i - start)});
    }
    for (const SymbolInstance& token : out.tokens) {
        out.language.add_instance(token.units, token.start);
    }
    return out;
}

EntropyReport char_scale_report(const Message& message, ProbabilityModel model) {
    auto [language, cover] = char_cover(message);
    return entropy_report(language, message, model);
}

} // namespace fundscale
