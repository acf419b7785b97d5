#include "fundscale/chunk.hpp"

#include <algorithm>
#include <atomic>
#include <exception>
#include <mutex>
#include <thread>

namespace fundscale {

std::size_t default_chunk_size(AlphabetMode mode) {
    return mode == AlphabetMode::unicode_chars ? 40000 : 8000;
}

ChunkPlan ChunkPlan::for_length(std::size_t n_units, std::size_t chunk_size) {
    if (chunk_size == 0) throw ConfigError("chunk size must be positive");
    ChunkPlan plan;
    plan.chunk_size = chunk_size;
    for (std::size_t cut = chunk_size; cut < n_units; cut += chunk_size) {
        plan.boundaries.push_back(cut);
    }
    return plan;
}

std::vector<Message> split(const Message& message, std::size_t chunk_size, std::size_t v_max) {
    if (chunk_size < v_max) {
        throw ConfigError("chunk size must be >= v_max so a chunk can hold one maximal symbol");
    }
    if (message.empty()) throw DomainError("cannot analyze an empty message");

    const ChunkPlan plan = ChunkPlan::for_length(message.size(), chunk_size);
    std::vector<Message> chunks;
    chunks.reserve(plan.boundaries.size() + 1);
    std::size_t start = 0;
    for (std::size_t cut : plan.boundaries) {
        chunks.push_back(message.sub_message(start, cut - start));
        start = cut;
    }
    chunks.push_back(message.sub_message(start, message.size() - start));
    return chunks;
}

MergedResult merge(const std::vector<ChunkResult>& chunks, ProbabilityModel model) {
    if (chunks.empty()) throw DomainError("nothing to merge");
    const AlphabetMode mode = chunks.front().chunk.alphabet_mode();

    MergedResult merged;
    std::size_t total_units = 0;
    for (const ChunkResult& chunk : chunks) {
        if (chunk.chunk.alphabet_mode() != mode) {
            throw DomainError("cannot merge chunks with mismatched alphabet modes");
        }
        total_units += chunk.chunk.size();
        for (const auto& [symbol, entry] : chunk.result.language.entries()) {
            for (std::size_t position : entry.positions) {
                merged.language.add_instance(symbol, chunk.origin + position);
            }
        }
    }
    merged.report = entropy_report_for_counts(merged.language, total_units, model);
    return merged;
}

Cover PipelineResult::global_cover() const {
    Cover cover;
    std::vector<const ChunkResult*> ordered;
    ordered.reserve(chunks.size());
    for (const ChunkResult& chunk : chunks) ordered.push_back(&chunk);
    std::sort(ordered.begin(), ordered.end(),
              [](const ChunkResult* a, const ChunkResult* b) { return a->origin < b->origin; });
    for (const ChunkResult* chunk : ordered) {
        for (const SymbolInstance& instance : chunk->result.cover.instances) {
            cover.instances.push_back(SymbolInstance{chunk->origin + instance.start, instance.units});
        }
    }
    return cover;
}

PipelineResult solve_chunked(const Message& message, const SolverConfig& cfg,
                             std::size_t chunk_size, unsigned jobs) {
    cfg.validate();
    if (chunk_size == 0) chunk_size = default_chunk_size(message.alphabet_mode());

    std::vector<Message> pieces = split(message, chunk_size, cfg.v_max);

    PipelineResult out;
    out.chunks.resize(pieces.size());
    for (std::size_t i = 0; i < pieces.size(); ++i) {
        out.chunks[i].origin = i * chunk_size;
        out.chunks[i].chunk = std::move(pieces[i]);
    }

    if (jobs == 0) jobs = std::max(1u, std::thread::hardware_concurrency());
    jobs = static_cast<unsigned>(std::min<std::size_t>(jobs, out.chunks.size()));

    if (jobs <= 1) {
        for (ChunkResult& chunk : out.chunks) {
            chunk.result = solve(chunk.chunk, cfg);
        }
    } else {
        // Workers pull chunk indices; results land in their slots, so the
        // outcome is independent of scheduling.
        std::atomic<std::size_t> next{0};
        std::exception_ptr failure;
        std::mutex failure_mutex;
        std::vector<std::thread> workers;
        workers.reserve(jobs);
        for (unsigned t = 0; t < jobs; ++t) {
            workers.emplace_back([&] {
                for (;;) {
                    const std::size_t i = next.fetch_add(1);
                    if (i >= out.chunks.size()) return;
                    try {
                        out.chunks[i].result = solve(out.chunks[i].chunk, cfg);
                    } catch (...) {
                        std::lock_guard<std::mutex> lock(failure_mutex);
                        if (!failure) failure = std::current_exception();
                        next.store(out.chunks.size());
                        return;
                    }
                }
            });
        }
        for (std::thread& worker : workers) worker.join();
        if (failure) std::rethrow_exception(failure);
    }

    out.merged = merge(out.chunks, cfg.model);
    return out;
}

} // namespace fundscale
