#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "fundscale/message.hpp"

namespace fundscale {

/// How symbol probabilities are derived from a language.
///   coverage: p_i = F_i * E_i / N   (fraction of message space occupied)
///   instance: p_i = F_i / total instances
enum class ProbabilityModel {
    coverage,
    instance,
};

std::string to_string(ProbabilityModel model);

/// The (h, D, N, d) quadruple reported for every observation scale.
struct EntropyReport {
    double h = 0.0;                    // normalized entropy in [0, 1]
    std::uint64_t diversity = 0;       // D
    std::size_t n_units = 0;           // N
    std::uint64_t n_instances = 0;     // total symbol occurrences
    double specific_diversity = 0.0;   // d = D / N
    ProbabilityModel model = ProbabilityModel::coverage;

    bool operator==(const EntropyReport&) const = default;
};

/// Shannon entropy with log base D, so values fall in [0, 1]. D = 1 yields 0
/// (a one-symbol description is perfectly ordered). Weights are normalized by
/// their own exact total; an all-equal weight vector returns exactly 1.0.
double normalized_entropy_weights(const std::vector<std::uint64_t>& weights);

/// Normalized entropy of a language. n_units is the N used by the coverage
/// model; it must equal the language's occupied_units() so probabilities sum
/// to one. Throws DomainError on an empty language or a mismatched N.
double normalized_entropy(const Language& language, std::size_t n_units, ProbabilityModel model);

/// Uncertainty contribution of one symbol: -p * log_D(p).
/// Requires 0 < p <= 1 and D >= 2; throws DomainError otherwise.
double symbol_uncertainty(double p, std::uint64_t diversity);

/// Full report for a language derived from a message.
EntropyReport entropy_report(const Language& language, const Message& message,
                             ProbabilityModel model);

/// Report variant for languages whose natural N is not a message unit count
/// (word scale uses the token count, merged chunk languages use the summed N).
EntropyReport entropy_report_for_counts(const Language& language, std::size_t n_units,
                                        ProbabilityModel model);

} // namespace fundscale
