#include "fundscale/solver.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <map>
#include <unordered_map>

namespace fundscale {

std::string to_string(StepAction action) {
    switch (action) {
        case StepAction::rejected_band: return "rejected-band";
        case StepAction::rejected_survival: return "rejected-survival";
        case StepAction::accepted: return "accepted";
    }
    return "unknown";
}

void SolverConfig::validate() const {
    if (v_max < 1) throw ConfigError("v_max must be >= 1");
    if (!(lambda > 0.0)) throw ConfigError("lambda must be > 0");
    if (min_prospective_frequency < 2) {
        throw ConfigError("min_prospective_frequency must be >= 2");
    }
}

std::vector<SymbolInstance> scan_phase(const Message& message, std::size_t v, std::size_t phase) {
    if (v < 2) throw DomainError("scan_phase requires symbol size >= 2");
    if (phase >= v) throw DomainError("scan phase must be < symbol size");
    std::vector<SymbolInstance> windows;
    const std::size_t n = message.size();
    for (std::size_t s = phase; s + v <= n; s += v) {
        windows.push_back(SymbolInstance{s, message.slice(s, v)});
    }
    return windows;
}

std::vector<ProspectiveSymbol> detect_prospective(const Message& message, std::size_t v,
                                                  const SolverConfig& cfg) {
    if (v < 2 || v > cfg.v_max) {
        throw DomainError("prospective symbol size must be in [2, v_max]");
    }
    std::map<Units, std::vector<std::size_t>> grouped;
    for (std::size_t phase = 0; phase < v; ++phase) {
        for (SymbolInstance& window : scan_phase(message, v, phase)) {
            grouped[std::move(window.units)].push_back(window.start);
        }
    }
    std::vector<ProspectiveSymbol> out;
    out.reserve(grouped.size());
    for (auto& [units, positions] : grouped) {
        std::sort(positions.begin(), positions.end());
        out.push_back(ProspectiveSymbol{units, std::move(positions)});
    }
    return out;
}

namespace {

// Priority used both for cross-symbol consolidation and for the candidate
// processing order: higher frequency first, then longer symbols, then the
// earliest first occurrence, then lexicographic unit order.
bool higher_priority(const ProspectiveSymbol& a, const ProspectiveSymbol& b) {
    if (a.frequency() != b.frequency()) return a.frequency() > b.frequency();
    if (a.length() != b.length()) return a.length() > b.length();
    const std::size_t first_a = a.positions.empty() ? 0 : a.positions.front();
    const std::size_t first_b = b.positions.empty() ? 0 : b.positions.front();
    if (first_a != first_b) return first_a < first_b;
    return a.units < b.units;
}

} // namespace

std::vector<ProspectiveSymbol> consolidate_phases(std::vector<ProspectiveSymbol> prospectives,
                                                  const SolverConfig& cfg) {
    std::stable_sort(prospectives.begin(), prospectives.end(), higher_priority);

    // Retained intervals across all symbols, keyed by start.
    std::map<std::size_t, std::size_t> kept_intervals; // start -> end
    auto overlaps_kept = [&](std::size_t s, std::size_t e) {
        auto it = kept_intervals.lower_bound(e);
        if (it == kept_intervals.begin()) return false;
        --it;
        return it->second > s;
    };

    std::vector<ProspectiveSymbol> out;
    for (ProspectiveSymbol& prospective : prospectives) {
        const std::size_t v = prospective.length();
        std::vector<std::size_t> kept;
        for (std::size_t s : prospective.positions) {
            if (!overlaps_kept(s, s + v)) {
                kept_intervals.emplace(s, s + v);
                kept.push_back(s);
            }
        }
        if (kept.size() >= cfg.min_prospective_frequency) {
            out.push_back(ProspectiveSymbol{std::move(prospective.units), std::move(kept)});
        }
    }
    return out;
}

namespace {

using SymbolId = std::uint32_t;

// Mutable tiling with an undo journal: placing and removing instances is
// recorded so a failed insertion can be rolled back without copying state.
class SolverState {
public:
    SolverState(const Message& message, ProbabilityModel model)
        : message_(message), model_(model) {
        for (std::size_t i = 0; i < message.size(); ++i) {
            place(i, intern(message.slice(i, 1)));
        }
        journal_.clear();
    }

    SymbolId intern(const Units& units) {
        auto [it, inserted] = ids_.try_emplace(units, static_cast<SymbolId>(strings_.size()));
        if (inserted) {
            strings_.push_back(units);
            freq_.push_back(0);
        }
        return it->second;
    }

    std::uint64_t diversity() const { return diversity_; }
    std::uint64_t n_instances() const { return n_instances_; }

    double entropy() const {
        std::vector<std::uint64_t> weights;
        weights.reserve(diversity_);
        for (SymbolId id = 0; id < freq_.size(); ++id) {
            if (freq_[id] > 0) {
                const std::uint64_t f = static_cast<std::uint64_t>(freq_[id]);
                weights.push_back(model_ == ProbabilityModel::coverage
                                      ? f * strings_[id].size()
                                      : f);
            }
        }
        return normalized_entropy_weights(weights);
    }

    std::size_t begin_txn() const { return journal_.size(); }

    void rollback(std::size_t mark) {
        while (journal_.size() > mark) {
            const Op op = journal_.back();
            journal_.pop_back();
            if (op.placed) {
                erase_tile(op.start, op.symbol);
            } else {
                put_tile(op.start, op.symbol);
            }
        }
    }

    void commit(std::size_t mark) { journal_.resize(mark); }

    // Places candidate instances, breaking established instances and
    // re-tiling vacated space. Returns how many instances were placed.
    std::size_t insert_candidate(const ProspectiveSymbol& candidate) {
        const SymbolId sym = intern(candidate.units);
        const std::size_t v = candidate.length();
        std::size_t placed = 0;
        std::vector<std::pair<std::size_t, SymbolId>> overlapped;
        for (std::size_t s : candidate.positions) {
            const std::size_t end = s + v;
            overlapped.clear();
            bool self_conflict = false;
            auto it = tiles_.upper_bound(s);
            if (it != tiles_.begin()) --it;
            for (; it != tiles_.end() && it->first < end; ++it) {
                const std::size_t tile_end = it->first + strings_[it->second].size();
                if (tile_end <= s) continue;
                if (it->second == sym) {
                    self_conflict = true;
                    break;
                }
                overlapped.emplace_back(it->first, it->second);
            }
            if (self_conflict) continue;
            if (overlapped.empty()) {
                throw InvariantViolation("candidate position not covered by the tiling");
            }

            const std::size_t span_begin = overlapped.front().first;
            const std::size_t span_end =
                overlapped.back().first + strings_[overlapped.back().second].size();
            for (const auto& [start, id] : overlapped) {
                remove(start, id);
            }
            place(s, sym);
            ++placed;
            retile(span_begin, s);
            retile(end, span_end);
        }
        return placed;
    }

    Cover cover() const {
        Cover out;
        out.instances.reserve(tiles_.size());
        for (const auto& [start, id] : tiles_) {
            out.instances.push_back(SymbolInstance{start, strings_[id]});
        }
        return out;
    }

    // Exact integrity checks used by paranoid mode.
    void verify_conservation() const {
        std::uint64_t occupied = 0;
        for (SymbolId id = 0; id < freq_.size(); ++id) {
            if (freq_[id] < 0) throw InvariantViolation("negative symbol frequency");
            occupied += static_cast<std::uint64_t>(freq_[id]) * strings_[id].size();
        }
        if (occupied != message_.size()) {
            throw InvariantViolation("space conservation violated: sum F*E != N");
        }
        std::size_t expected = 0;
        Units rebuilt;
        rebuilt.reserve(message_.size());
        for (const auto& [start, id] : tiles_) {
            if (start != expected) throw InvariantViolation("tiling gap or overlap");
            rebuilt.append(strings_[id]);
            expected += strings_[id].size();
        }
        if (expected != message_.size() || rebuilt != message_.units()) {
            throw InvariantViolation("tiling does not reconstruct the message");
        }
    }

    struct Snapshot {
        std::map<std::size_t, SymbolId> tiles;
        std::vector<std::int64_t> freq;
        std::uint64_t n_instances;
        std::uint64_t diversity;
    };

    Snapshot snapshot() const { return Snapshot{tiles_, freq_, n_instances_, diversity_}; }

    void verify_matches(const Snapshot& snap) const {
        const bool freq_same =
            freq_.size() >= snap.freq.size() &&
            std::equal(snap.freq.begin(), snap.freq.end(), freq_.begin()) &&
            std::all_of(freq_.begin() + snap.freq.size(), freq_.end(),
                        [](std::int64_t f) { return f == 0; });
        if (!freq_same || tiles_ != snap.tiles || n_instances_ != snap.n_instances ||
            diversity_ != snap.diversity) {
            throw InvariantViolation("state changed across a rejected insertion");
        }
    }

private:
    struct Op {
        bool placed; // true: op placed a tile; false: op removed a tile
        std::size_t start;
        SymbolId symbol;
    };

    void put_tile(std::size_t start, SymbolId id) {
        tiles_.emplace(start, id);
        if (freq_[id] == 0) ++diversity_;
        ++freq_[id];
        ++n_instances_;
    }

    void erase_tile(std::size_t start, SymbolId id) {
        tiles_.erase(start);
        --freq_[id];
        if (freq_[id] == 0) --diversity_;
        --n_instances_;
    }

    void place(std::size_t start, SymbolId id) {
        put_tile(start, id);
        journal_.push_back(Op{true, start, id});
    }

    void remove(std::size_t start, SymbolId id) {
        erase_tile(start, id);
        journal_.push_back(Op{false, start, id});
    }

    // Fills [begin, end) with the longest matching live symbols, scanning
    // left to right; single units always re-enter the language as fallback.
    void retile(std::size_t begin, std::size_t end) {
        std::size_t p = begin;
        while (p < end) {
            std::size_t taken = 1;
            SymbolId chosen = std::numeric_limits<SymbolId>::max();
            for (std::size_t len = end - p; len >= 2; --len) {
                auto it = ids_.find(message_.slice(p, len));
                if (it != ids_.end() && freq_[it->second] > 0) {
                    chosen = it->second;
                    taken = len;
                    break;
                }
            }
            if (taken == 1) {
                chosen = intern(message_.slice(p, 1));
            }
            place(p, chosen);
            p += taken;
        }
    }

    const Message& message_;
    ProbabilityModel model_;
    std::unordered_map<Units, SymbolId> ids_;
    std::vector<Units> strings_;
    std::vector<std::int64_t> freq_;
    std::map<std::size_t, SymbolId> tiles_;
    std::uint64_t n_instances_ = 0;
    std::uint64_t diversity_ = 0;
    std::vector<Op> journal_;
};

double band_probability(std::uint64_t candidate_frequency, std::size_t candidate_length,
                        std::size_t n_units, std::uint64_t established_instances,
                        ProbabilityModel model) {
    if (model == ProbabilityModel::coverage) {
        return static_cast<double>(candidate_frequency * candidate_length) /
               static_cast<double>(n_units);
    }
    return static_cast<double>(candidate_frequency) /
           static_cast<double>(established_instances);
}

bool band_accepts(double h, std::uint64_t diversity, double p, double lambda) {
    if (diversity < 2) return false; // no reduction is possible below h = 0
    if (!(p > 0.0) || p > 1.0) return false;
    const double center = h / static_cast<double>(diversity);
    const double u = symbol_uncertainty(p, diversity);
    return center - lambda < u && u < center + lambda;
}

} // namespace

bool band_filter(const ProspectiveSymbol& candidate, const Language& established,
                 const Message& message, const SolverConfig& cfg) {
    if (established.empty()) throw DomainError("band filter needs an established language");
    const double h = normalized_entropy(established, message.size(), cfg.model);
    const double p = band_probability(candidate.frequency(), candidate.length(), message.size(),
                                      established.n_instances(), cfg.model);
    return band_accepts(h, established.diversity(), p, cfg.lambda);
}

std::pair<Language, Cover> insert_symbol(const Language& language, const Cover& cover,
                                         const ProspectiveSymbol& candidate,
                                         const Message& message) {
    validate_cover(cover, language, message);
    for (std::size_t s : candidate.positions) {
        if (s + candidate.length() > message.size() ||
            message.slice(s, candidate.length()) != candidate.units) {
            throw DomainError("candidate instance does not match message content");
        }
    }
    // Replay the existing cover through a fresh state: over the single-unit
    // base tiling each multi-unit instance removes exactly the units it
    // spans, so the replayed tiling equals `cover`.
    SolverState state(message, ProbabilityModel::coverage);
    for (const SymbolInstance& instance : cover.instances) {
        if (instance.length() > 1) {
            state.insert_candidate(ProspectiveSymbol{instance.units, {instance.start}});
        }
    }
    state.insert_candidate(candidate);
    Cover out_cover = state.cover();
    Language out_language = language_from_cover(out_cover, message);
    return {std::move(out_language), std::move(out_cover)};
}

bool survival_check(double h_before, const Language& language_after, const Message& message,
                    const SolverConfig& cfg) {
    return normalized_entropy(language_after, message.size(), cfg.model) < h_before;
}

SolveResult solve(const Message& message, const SolverConfig& cfg) {
    cfg.validate();
    if (message.empty()) throw DomainError("cannot analyze an empty message");

    SolverState state(message, cfg.model);
    SolverTrace trace;
    double h_current = state.entropy();
    trace.h_initial = h_current;

    const std::size_t n = message.size();
    const std::size_t v_limit = std::min(cfg.v_max, n);
    for (std::size_t v = 2; v <= v_limit; ++v) {
        if (state.diversity() <= 1) break; // h = 0 cannot strictly decrease

        std::vector<ProspectiveSymbol> candidates =
            consolidate_phases(detect_prospective(message, v, cfg), cfg);
        if (candidates.empty()) continue;
        std::stable_sort(candidates.begin(), candidates.end(), higher_priority);

        // Band reference frozen per level unless configured otherwise.
        double h_band = h_current;
        std::uint64_t d_band = state.diversity();
        std::uint64_t instances_band = state.n_instances();

        for (const ProspectiveSymbol& candidate : candidates) {
            if (cfg.band_recompute_per_insertion) {
                h_band = h_current;
                d_band = state.diversity();
                instances_band = state.n_instances();
            }

            SolverStep step;
            step.symbol = candidate.units;
            step.v = v;
            step.h_before = h_current;
            step.d_before = state.diversity();

            const double p = band_probability(candidate.frequency(), v, n, instances_band,
                                              cfg.model);
            if (!band_accepts(h_band, d_band, p, cfg.lambda)) {
                step.action = StepAction::rejected_band;
                step.h_after = h_current;
                step.h_attempted = h_current;
                step.d_after = step.d_before;
                trace.steps.push_back(std::move(step));
                continue;
            }

            SolverState::Snapshot snap;
            if (cfg.paranoid_checks) snap = state.snapshot();

            const std::size_t mark = state.begin_txn();
            state.insert_candidate(candidate);
            const double h_attempted = state.entropy();
            step.h_attempted = h_attempted;

            if (h_attempted < h_current) {
                state.commit(mark);
                h_current = h_attempted;
                step.action = StepAction::accepted;
                if (cfg.paranoid_checks) {
                    state.verify_conservation();
                    ++trace.conservation_checks;
                }
            } else {
                state.rollback(mark);
                step.action = StepAction::rejected_survival;
                if (cfg.paranoid_checks) {
                    state.verify_matches(snap);
                    ++trace.revert_checks;
                }
            }
            step.h_after = h_current;
            step.d_after = state.diversity();
            trace.steps.push_back(std::move(step));
        }
    }

    trace.h_final = h_current;

    SolveResult result;
    result.cover = state.cover();
    result.language = language_from_cover(result.cover, message);
    result.report = entropy_report(result.language, message, cfg.model);
    result.trace = std::move(trace);
    return result;
}

} // namespace fundscale
