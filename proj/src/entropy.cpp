#include "fundscale/entropy.hpp"

#include <algorithm>
#include <cmath>

namespace fundscale {

std::string to_string(ProbabilityModel model) {
    return model == ProbabilityModel::coverage ? "coverage" : "instance";
}

double normalized_entropy_weights(const std::vector<std::uint64_t>& weights) {
    if (weights.empty()) throw DomainError("entropy of an empty language");
    const std::size_t d = weights.size();
    if (d == 1) return 0.0;

    // All-equal weights are the exact uniform distribution; return 1 without
    // accumulating rounding error.
    if (std::all_of(weights.begin(), weights.end(),
                    [&](std::uint64_t w) { return w == weights.front(); })) {
        return 1.0;
    }

    std::uint64_t total = 0;
    for (std::uint64_t w : weights) total += w;
    if (total == 0) throw DomainError("entropy weights sum to zero");

    // Accumulate smallest terms first so the result does not depend on the
    // caller's entry order.
    std::vector<double> probs;
    probs.reserve(d);
    for (std::uint64_t w : weights) {
        probs.push_back(static_cast<double>(w) / static_cast<double>(total));
    }
    std::sort(probs.begin(), probs.end());

    double sum = 0.0;
    for (double p : probs) {
        if (p > 0.0) sum += p * std::log(p);
    }
    return -sum / std::log(static_cast<double>(d));
}

namespace {

std::vector<std::uint64_t> model_weights(const Language& language, ProbabilityModel model) {
    std::vector<std::uint64_t> weights;
    weights.reserve(language.entries().size());
    for (const auto& [symbol, entry] : language.entries()) {
        weights.push_back(model == ProbabilityModel::coverage
                              ? entry.frequency * symbol.size()
                              : entry.frequency);
    }
    return weights;
}

} // namespace

double normalized_entropy(const Language& language, std::size_t n_units, ProbabilityModel model) {
    if (language.empty()) throw DomainError("entropy of an empty language");
    if (model == ProbabilityModel::coverage && language.occupied_units() != n_units) {
        throw DomainError("coverage probabilities do not sum to 1: sum F*E != N");
    }
    return normalized_entropy_weights(model_weights(language, model));
}

double symbol_uncertainty(double p, std::uint64_t diversity) {
    if (!(p > 0.0) || p > 1.0) throw DomainError("symbol probability outside (0, 1]");
    if (diversity < 2) throw DomainError("uncertainty needs diversity >= 2");
    return -p * std::log(p) / std::log(static_cast<double>(diversity));
}

EntropyReport entropy_report(const Language& language, const Message& message,
                             ProbabilityModel model) {
    return entropy_report_for_counts(language, message.size(), model);
}

EntropyReport entropy_report_for_counts(const Language& language, std::size_t n_units,
                                        ProbabilityModel model) {
    EntropyReport report;
    report.h = normalized_entropy(language, n_units, model);
    report.diversity = language.diversity();
    report.n_units = n_units;
    report.n_instances = language.n_instances();
    report.specific_diversity =
        n_units == 0 ? 0.0
                     : static_cast<double>(report.diversity) / static_cast<double>(n_units);
    report.model = model;
    return report;
}

} // namespace fundscale
