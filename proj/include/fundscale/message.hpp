#pragma once

#include <cstddef>
#include <cstdint>
#include <map>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "fundscale/errors.hpp"

namespace fundscale {

/// Smallest indivisible element of a message. In bytes mode each unit is one
/// byte value (0..255); in unicode-chars mode each unit is one Unicode scalar.
/// Either way a unit occupies exactly one message position.
using Unit = char32_t;

/// A contiguous run of units; the identity of a symbol is its exact unit
/// string (no folding, no normalization).
using Units = std::u32string;

enum class AlphabetMode {
    bytes,
    unicode_chars,
};

std::string to_string(AlphabetMode mode);

/// Immutable ordered sequence of N atomic units under analysis.
class Message {
public:
    Message() : mode_(AlphabetMode::bytes) {}

    /// Wraps raw bytes, one unit per byte.
    static Message from_bytes(std::string_view raw);

    /// Strict UTF-8 decode, one unit per Unicode scalar value. Throws
    /// IngestError carrying the byte offset of the first bad sequence.
    static Message from_text_utf8(std::string_view utf8);

    static Message from_units(Units units, AlphabetMode mode);

    AlphabetMode alphabet_mode() const { return mode_; }
    std::size_t size() const { return units_.size(); }
    bool empty() const { return units_.empty(); }
    Unit at(std::size_t i) const { return units_.at(i); }
    const Units& units() const { return units_; }

    Units slice(std::size_t pos, std::size_t len) const { return units_.substr(pos, len); }

    /// Contiguous sub-message [pos, pos+len), same alphabet mode.
    Message sub_message(std::size_t pos, std::size_t len) const;

    /// Inverse of the constructors: raw bytes for bytes mode, UTF-8 for
    /// unicode-chars mode.
    std::string to_bytes() const;

    bool operator==(const Message& other) const = default;

private:
    Message(Units units, AlphabetMode mode) : units_(std::move(units)), mode_(mode) {}

    Units units_;
    AlphabetMode mode_;
};

/// One placed occurrence of a symbol inside a message.
struct SymbolInstance {
    std::size_t start = 0;
    Units units;

    std::size_t length() const { return units.size(); }
    std::size_t end() const { return start + units.size(); }

    bool operator==(const SymbolInstance&) const = default;
};

/// Exhaustive non-overlapping tiling of a message: instances sorted by start,
/// no gaps, no overlaps, total length N.
struct Cover {
    std::vector<SymbolInstance> instances;

    bool operator==(const Cover&) const = default;
};

/// A symbol set with frequencies and sorted instance positions. The sum of
/// frequency times symbol length always equals the N of the covered message.
class Language {
public:
    struct Entry {
        std::uint64_t frequency = 0;
        std::vector<std::size_t> positions; // sorted ascending

        bool operator==(const Entry&) const = default;
    };

    using Map = std::map<Units, Entry>;

    /// Number of distinct symbols (D).
    std::uint64_t diversity() const { return entries_.size(); }

    /// Total symbol instances (sum of frequencies).
    std::uint64_t n_instances() const { return n_instances_; }

    /// Sum over entries of frequency * length; equals N for a valid cover.
    std::uint64_t occupied_units() const;

    const Map& entries() const { return entries_; }
    const Entry* find(const Units& symbol) const;
    bool empty() const { return entries_.empty(); }

    void add_instance(const Units& symbol, std::size_t position);

    bool operator==(const Language&) const = default;

private:
    Map entries_;
    std::uint64_t n_instances_ = 0;
};

/// Splits the message into single units: the base language B1 and its cover.
/// Throws DomainError on an empty message.
std::pair<Language, Cover> char_cover(const Message& message);

/// Rebuilds the message a cover describes. Throws CoverIntegrityError naming
/// the first gap or overlap offset if the cover does not tile.
Message cover_reconstruct(const Cover& cover, AlphabetMode mode);

/// Frequencies and positions induced by a cover. Validates that the cover
/// tiles the message and that every instance matches the message content.
Language language_from_cover(const Cover& cover, const Message& message);

/// Checks that cover tiles message exactly and agrees with language's
/// frequencies and positions. Throws on any mismatch.
void validate_cover(const Cover& cover, const Language& language, const Message& message);

} // namespace fundscale
