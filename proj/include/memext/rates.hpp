#ifndef MEMEXT_RATES_HPP
#define MEMEXT_RATES_HPP

#include <cstdint>
#include <map>
#include <span>
#include <utility>
#include <vector>

#include "memext/logit_math.hpp"

namespace memext {

// Query budget n and target success probability p for converting a
// single-attempt suffix probability into an extraction guarantee.
struct NPQuery {
    std::int64_t n = 1;
    double p = 0.5;
};

// Aggregate extraction rates over a scored example set.
struct RateReport {
    std::size_t total_examples = 0;
    double greedy_rate = 0.0;
    std::map<double, double> rate_at_thresholds;
    double max_rate = 0.0;
};

// Thresholds used throughout unless overridden.
std::vector<double> default_thresholds();

// Probability of at least one verbatim extraction in n independent
// attempts: 1 - (1 - p_z)^n, evaluated in log1p space so tiny p_z
// survives.
double prob_at_n(double p_z, std::int64_t n);

// Smallest n with prob_at_n(p_z, n) >= p. Throws for p_z == 0
// ("unextractable: no finite n"). The ceil of log(1-p)/log(1-p_z) is
// verified against prob_at_n rather than trusted, so exact boundaries
// land on the right integer.
std::int64_t n_for_p(double p_z, double p);

// Expected number of attempts until the first extraction: 1 / p_z.
double expected_queries(double p_z);

// Per-example (sampling score, greedy score) pairs folded into a report.
// greedy_rate counts greedy prob == 1; rate_at_thresholds[t] counts
// sampling p_z >= t; max_rate counts sampling p_z > 0 (finite logprob,
// so probabilities that underflowed to 0 still count). Empty input is an
// error: rates are undefined.
RateReport aggregate_rates(std::span<const std::pair<SuffixScore, SuffixScore>> scores,
                           std::span<const double> thresholds);

}  // namespace memext

#endif
