#pragma once

#include <cstdint>
#include <vector>

#include "fundscale/entropy.hpp"
#include "fundscale/message.hpp"

namespace fundscale {

struct SolverConfig {
    std::size_t v_max = 13;              // maximum symbol length in units
    double lambda = 0.01;                // uncertainty band half-width
    ProbabilityModel model = ProbabilityModel::coverage;
    std::uint64_t min_prospective_frequency = 2;

    /// When false (default) the band reference h, D and instance totals are
    /// frozen once per symbol-size level; when true they are recomputed
    /// before every candidate.
    bool band_recompute_per_insertion = false;

    /// Runs full integrity checks inside solve: conservation and exact
    /// reconstruction after every accepted insertion, state comparison after
    /// every rejected one. Check counts land in the trace.
    bool paranoid_checks = false;

    void validate() const; // throws ConfigError
};

/// A length-V substring detected by the phase scans, candidate for language
/// membership. Positions are sorted ascending; after consolidation they are
/// non-overlapping across all surviving prospectives.
struct ProspectiveSymbol {
    Units units;
    std::vector<std::size_t> positions;

    std::uint64_t frequency() const { return positions.size(); }
    std::size_t length() const { return units.size(); }

    bool operator==(const ProspectiveSymbol&) const = default;
};

enum class StepAction {
    rejected_band,
    rejected_survival,
    accepted,
};

std::string to_string(StepAction action);

/// One candidate attempt. h_after/d_after describe the state the solver kept
/// after the step, so they equal h_before/d_before unless the step was
/// accepted. h_attempted records the entropy the insertion produced before
/// any revert (meaningful for accepted and rejected_survival steps).
struct SolverStep {
    Units symbol;
    std::size_t v = 0;
    StepAction action = StepAction::rejected_band;
    double h_before = 0.0;
    double h_after = 0.0;
    double h_attempted = 0.0;
    std::uint64_t d_before = 0;
    std::uint64_t d_after = 0;
};

struct SolverTrace {
    std::vector<SolverStep> steps;
    double h_initial = 0.0; // base language entropy
    double h_final = 0.0;   // equals the reported fundamental entropy

    // Populated when paranoid_checks is on.
    std::uint64_t conservation_checks = 0;
    std::uint64_t revert_checks = 0;
};

struct SolveResult {
    Language language;
    Cover cover;
    EntropyReport report;
    SolverTrace trace;
};

/// Consecutive non-overlapping windows of length v starting at `phase`,
/// stepping by v, stopping when fewer than v units remain.
/// Requires v >= 2 and phase < v; throws DomainError otherwise.
std::vector<SymbolInstance> scan_phase(const Message& message, std::size_t v, std::size_t phase);

/// Union of all phase scans for symbol size v, grouped by substring, with raw
/// frequencies and every candidate position. Requires 2 <= v <= cfg.v_max.
std::vector<ProspectiveSymbol> detect_prospective(const Message& message, std::size_t v,
                                                  const SolverConfig& cfg);

/// Removes overlapping prospective instances (higher raw frequency wins, then
/// earliest first occurrence, then lexicographic order; within one symbol the
/// earliest position wins) and drops symbols whose surviving frequency falls
/// below cfg.min_prospective_frequency.
std::vector<ProspectiveSymbol> consolidate_phases(std::vector<ProspectiveSymbol> prospectives,
                                                  const SolverConfig& cfg);

/// Uncertainty-band test: the candidate's probability under cfg.model against
/// the established language must produce an uncertainty within lambda of the
/// average uncertainty h/D of that language. Establishment totals are taken
/// from `established` as-is (pre-insertion).
bool band_filter(const ProspectiveSymbol& candidate, const Language& established,
                 const Message& message, const SolverConfig& cfg);

/// Places every candidate instance (skipping any that overlaps an instance
/// of the candidate symbol already placed by this call), breaking up
/// established instances it overlaps and re-tiling the vacated gaps with the
/// longest matching language symbols, falling back to single units. The
/// result tiles the message exactly; zero-frequency entries are dropped.
std::pair<Language, Cover> insert_symbol(const Language& language, const Cover& cover,
                                         const ProspectiveSymbol& candidate,
                                         const Message& message);

/// True iff the post-insertion language strictly reduced entropy. The caller
/// keeps the insertion on true and restores the prior state on false.
bool survival_check(double h_before, const Language& language_after, const Message& message,
                    const SolverConfig& cfg);

/// Full minimal-entropy search: starts from the base language, then for each
/// symbol size v = 2..v_max detects, consolidates, band-filters and
/// birth/survival-tests candidates in deterministic order.
SolveResult solve(const Message& message, const SolverConfig& cfg);

} // namespace fundscale
