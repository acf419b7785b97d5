#include "fundscale/message.hpp"

#include <algorithm>
#include <sstream>

namespace fundscale {

std::string to_string(AlphabetMode mode) {
    return mode == AlphabetMode::bytes ? "bytes" : "unicode-chars";
}

Message Message::from_bytes(std::string_view raw) {
    Units units;
    units.reserve(raw.size());
    for (unsigned char byte : raw) {
        units.push_back(static_cast<Unit>(byte));
    }
    return Message(std::move(units), AlphabetMode::bytes);
}

namespace {

// Strict RFC 3629 decoder. Returns the scalar value and advances `i`, or
// throws IngestError pointing at the start of the bad sequence.
char32_t decode_utf8_at(std::string_view s, std::size_t& i) {
    const std::size_t start = i;
    auto fail = [&](const char* why) -> char32_t {
        std::ostringstream msg;
        msg << "invalid UTF-8 (" << why << ") at byte offset " << start;
        throw IngestError(msg.str(), start);
    };

    const unsigned char b0 = static_cast<unsigned char>(s[i++]);
    if (b0 < 0x80) return b0;
    if (b0 < 0xC2) return fail(b0 < 0xC0 ? "stray continuation byte" : "overlong encoding");

    int extra = 0;
    char32_t cp = 0;
    char32_t min_cp = 0;
    if (b0 < 0xE0) {
        extra = 1;
        cp = b0 & 0x1F;
        min_cp = 0x80;
    } else if (b0 < 0xF0) {
        extra = 2;
        cp = b0 & 0x0F;
        min_cp = 0x800;
    } else if (b0 < 0xF5) {
        extra = 3;
        cp = b0 & 0x07;
        min_cp = 0x10000;
    } else {
        return fail("byte out of range");
    }

    for (int k = 0; k < extra; ++k) {
        if (i >= s.size()) return fail("truncated sequence");
        const unsigned char b = static_cast<unsigned char>(s[i]);
        if ((b & 0xC0) != 0x80) return fail("missing continuation byte");
        cp = (cp << 6) | (b & 0x3F);
        ++i;
    }
    if (cp < min_cp) return fail("overlong encoding");
    if (cp > 0x10FFFF) return fail("code point above U+10FFFF");
    if (cp >= 0xD800 && cp <= 0xDFFF) return fail("surrogate code point");
    return cp;
}

void encode_utf8(char32_t cp, std::string& out) {
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

} // namespace

Message Message::from_text_utf8(std::string_view utf8) {
    Units units;
    units.reserve(utf8.size());
    std::size_t i = 0;
    while (i < utf8.size()) {
        units.push_back(decode_utf8_at(utf8, i));
    }
    units.shrink_to_fit();
    return Message(std::move(units), AlphabetMode::unicode_chars);
}

Message Message::from_units(Units units, AlphabetMode mode) {
    if (mode == AlphabetMode::bytes) {
        for (Unit u : units) {
            if (u > 0xFF) throw DomainError("bytes-mode unit above 0xFF");
        }
    }
    return Message(std::move(units), mode);
}

Message Message::sub_message(std::size_t pos, std::size_t len) const {
    if (pos > units_.size() || pos + len > units_.size()) {
        throw DomainError("sub_message range outside message");
    }
    return Message(units_.substr(pos, len), mode_);
}

std::string Message::to_bytes() const {
    std::string out;
    out.reserve(units_.size());
    if (mode_ == AlphabetMode::bytes) {
        for (Unit u : units_) out.push_back(static_cast<char>(u));
    } else {
        for (Unit u : units_) encode_utf8(u, out);
    }
    return out;
}

std::uint64_t Language::occupied_units() const {
    std::uint64_t total = 0;
    for (const auto& [symbol, entry] : entries_) {
        total += entry.frequency * symbol.size();
    }
    return total;
}

const Language::Entry* Language::find(const Units& symbol) const {
    auto it = entries_.find(symbol);
    return it == entries_.end() ? nullptr : &it->second;
}

void Language::add_instance(const Units& symbol, std::size_t position) {
    if (symbol.empty()) throw DomainError("empty symbol");
    Entry& entry = entries_[symbol];
    entry.frequency += 1;
    entry.positions.insert(
        std::upper_bound(entry.positions.begin(), entry.positions.end(), position), position);
    n_instances_ += 1;
}

std::pair<Language, Cover> char_cover(const Message& message) {
    if (message.empty()) throw DomainError("cannot analyze an empty message");
    Language language;
    Cover cover;
    cover.instances.reserve(message.size());
    for (std::size_t i = 0; i < message.size(); ++i) {
        Units symbol(1, message.at(i));
        language.add_instance(symbol, i);
        cover.instances.push_back(SymbolInstance{i, std::move(symbol)});
    }
    return {std::move(language), std::move(cover)};
}

Message cover_reconstruct(const Cover& cover, AlphabetMode mode) {
    Units units;
    std::size_t expected = 0;
    for (const SymbolInstance& instance : cover.instances) {
        if (instance.units.empty()) {
            throw CoverIntegrityError("empty instance in cover", instance.start);
        }
        if (instance.start > expected) {
            std::ostringstream msg;
            msg << "cover gap at offset " << expected;
            throw CoverIntegrityError(msg.str(), expected);
        }
        if (instance.start < expected) {
            std::ostringstream msg;
            msg << "cover overlap at offset " << instance.start;
            throw CoverIntegrityError(msg.str(), instance.start);
        }
        units.append(instance.units);
        expected = instance.end();
    }
    return Message::from_units(std::move(units), mode);
}

Language language_from_cover(const Cover& cover, const Message& message) {
    Language language;
    std::size_t expected = 0;
    for (const SymbolInstance& instance : cover.instances) {
        if (instance.start != expected || instance.end() > message.size()) {
            std::ostringstream msg;
            msg << (instance.start > expected ? "cover gap at offset " : "cover overlap at offset ")
                << std::min(expected, instance.start);
            throw CoverIntegrityError(msg.str(), std::min(expected, instance.start));
        }
        if (message.slice(instance.start, instance.length()) != instance.units) {
            std::ostringstream msg;
            msg << "instance at offset " << instance.start << " does not match message content";
            throw CoverIntegrityError(msg.str(), instance.start);
        }
        language.add_instance(instance.units, instance.start);
        expected = instance.end();
    }
    if (expected != message.size()) {
        std::ostringstream msg;
        msg << "cover gap at offset " << expected;
        throw CoverIntegrityError(msg.str(), expected);
    }
    return language;
}

void validate_cover(const Cover& cover, const Language& language, const Message& message) {
    Language derived = language_from_cover(cover, message);
    if (!(derived == language)) {
        throw InvariantViolation("language disagrees with its cover");
    }
    if (language.occupied_units() != message.size()) {
        throw InvariantViolation("space conservation violated: sum F*E != N");
    }
}

} // namespace fundscale
