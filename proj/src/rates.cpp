#include "memext/rates.hpp"

#include <cmath>
#include <stdexcept>

namespace memext {

std::vector<double> default_thresholds() {
    return {0.75, 0.5, 0.1, 0.01, 1e-4};
}

double prob_at_n(double p_z, std::int64_t n) {
    if (p_z < 0.0 || p_z > 1.0) throw std::invalid_argument("prob_at_n: p_z outside [0,1]");
    if (n < 1) throw std::invalid_argument("prob_at_n: n must be >= 1");
    if (p_z == 0.0) return 0.0;
    if (p_z == 1.0) return 1.0;
    // 1 - (1-p)^n = -expm1(n * log1p(-p))
    return -std::expm1(static_cast<double>(n) * std::log1p(-p_z));
}

std::int64_t n_for_p(double p_z, double p) {
    if (p_z == 0.0) throw std::invalid_argument("n_for_p: unextractable: no finite n");
    if (p_z < 0.0 || p_z > 1.0) throw std::invalid_argument("n_for_p: p_z outside (0,1]");
    if (!(p > 0.0 && p < 1.0)) throw std::invalid_argument("n_for_p: p outside (0,1)");
    if (p_z == 1.0) return 1;

    double raw = std::log1p(-p) / std::log1p(-p_z);
    std::int64_t n = static_cast<std::int64_t>(std::ceil(raw));
    if (n < 1) n = 1;
    // float ceil can land one off on exact boundaries; settle it with the
    // quantity being bounded
    while (prob_at_n(p_z, n) < p) ++n;
    while (n > 1 && prob_at_n(p_z, n - 1) >= p) --n;
    return n;
}

double expected_queries(double p_z) {
    if (p_z <= 0.0) throw std::invalid_argument("expected_queries: unextractable");
    return 1.0 / p_z;
}

RateReport aggregate_rates(std::span<const std::pair<SuffixScore, SuffixScore>> scores,
                           std::span<const double> thresholds) {
    if (scores.empty()) {
        throw std::invalid_argument("aggregate_rates: empty input, rates undefined");
    }
    RateReport report;
    report.total_examples = scores.size();

    std::size_t greedy_hits = 0;
    std::size_t max_hits = 0;
    std::map<double, std::size_t> threshold_hits;
    for (double t : thresholds) threshold_hits[t] = 0;

    for (const auto& [sampling, greedy] : scores) {
        if (greedy.prob == 1.0) ++greedy_hits;
        if (!sampling.impossible) ++max_hits;
        for (double t : thresholds) {
            if (sampling.prob >= t) ++threshold_hits[t];
        }
    }

    const double total = static_cast<double>(report.total_examples);
    report.greedy_rate = static_cast<double>(greedy_hits) / total;
    report.max_rate = static_cast<double>(max_hits) / total;
    for (const auto& [t, hits] : threshold_hits) {
        report.rate_at_thresholds[t] = static_cast<double>(hits) / total;
    }
    return report;
}

}  // namespace memext
