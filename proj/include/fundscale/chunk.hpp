#pragma once

#include <cstddef>
#include <vector>

#include "fundscale/solver.hpp"

namespace fundscale {

/// Default chunk sizes by alphabet mode: 40,000 units for text, 8,000 for
/// binary streams.
std::size_t default_chunk_size(AlphabetMode mode);

/// Partition of [0, N) into fixed-size chunks; all but the last have length
/// chunk_size.
struct ChunkPlan {
    std::size_t chunk_size = 0;
    std::vector<std::size_t> boundaries; // cut offsets, ascending, excludes 0 and N

    static ChunkPlan for_length(std::size_t n_units, std::size_t chunk_size);
};

/// Splits a message into chunks whose concatenation is the message. A chunk
/// must be able to hold one maximal symbol: throws ConfigError when
/// chunk_size < v_max.
std::vector<Message> split(const Message& message, std::size_t chunk_size, std::size_t v_max);

/// One chunk's solver output, remembering where the chunk begins in the
/// original message.
struct ChunkResult {
    std::size_t origin = 0;
    Message chunk;
    SolveResult result;
};

struct MergedResult {
    Language language; // positions are global (origin-shifted)
    EntropyReport report;
};

/// Joint symbol set over all chunks: same unit string means same symbol and
/// frequencies add; entropy is computed once over the merged language, so no
/// short-sample bias correction is needed. Order-independent. Throws
/// DomainError when chunks mix alphabet modes.
MergedResult merge(const std::vector<ChunkResult>& chunks, ProbabilityModel model);

struct PipelineResult {
    std::vector<ChunkResult> chunks; // in message order
    MergedResult merged;

    /// Concatenation of per-chunk covers shifted to global offsets.
    Cover global_cover() const;
};

/// Splits, solves every chunk (in parallel when jobs != 1) and merges.
/// chunk_size = 0 selects the mode default. jobs = 0 selects the hardware
/// concurrency. With chunk_size >= N the result is identical to solve().
PipelineResult solve_chunked(const Message& message, const SolverConfig& cfg,
                             std::size_t chunk_size = 0, unsigned jobs = 0);

} // namespace fundscale
