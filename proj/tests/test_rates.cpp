#include <doctest.h>

#include <cmath>

#include "memext/rates.hpp"
#include "memext/util.hpp"

using namespace memext;

namespace {

SuffixScore score_of(double prob) {
    SuffixScore s;
    s.prob = prob;
    s.logprob = prob > 0.0 ? std::log(prob) : kNegInf;
    s.impossible = prob == 0.0;
    return s;
}

// linear-scan oracle for the smallest n reaching p
std::int64_t scan_n(double p_z, double p) {
    for (std::int64_t n = 1;; ++n) {
        if (prob_at_n(p_z, n) >= p) return n;
    }
}

}  // namespace

TEST_CASE("prob_at_n: coin-flip anchors") {
    CHECK(prob_at_n(0.5, 2) == doctest::Approx(0.75).epsilon(1e-13));
    CHECK(prob_at_n(0.5, 10) == doctest::Approx(1.0 - std::pow(0.5, 10)).epsilon(1e-13));
    CHECK(prob_at_n(0.5, 10) == doctest::Approx(0.9990).epsilon(1e-4));
    CHECK(prob_at_n(0.0, 1) == 0.0);
    CHECK(prob_at_n(0.0, 1000000) == 0.0);
    CHECK(prob_at_n(1.0, 3) == 1.0);
}

TEST_CASE("prob_at_n survives tiny probabilities") {
    double p = prob_at_n(1e-12, 1000);
    CHECK(p == doctest::Approx(1e-9).epsilon(1e-6));
    CHECK(p > 0.0);
}

TEST_CASE("n_for_p") {
    for (double p : {0.1, 0.5, 0.999}) CHECK(n_for_p(1.0, p) == 1);
    CHECK(n_for_p(0.01, 0.5) == 69);
    CHECK(n_for_p(0.01, 0.5) == scan_n(0.01, 0.5));
    CHECK(n_for_p(0.5, 0.75) == 2);
    CHECK_THROWS_WITH_AS(n_for_p(0.0, 0.5), doctest::Contains("unextractable"),
                         std::invalid_argument);

    // exact-boundary care: p chosen exactly at an achievable level
    for (double p_z : {0.3, 0.123, 0.9}) {
        double p = prob_at_n(p_z, 5);
        CHECK(n_for_p(p_z, p) == 5);
    }
}

TEST_CASE("n_for_p round trip and monotonicity") {
    Rng rng(5);
    for (int trial = 0; trial < 500; ++trial) {
        double p_z = std::pow(10.0, -4.0 * rng.uniform01());  // (1e-4, 1]
        double p = 0.01 + 0.98 * rng.uniform01();
        std::int64_t n = n_for_p(p_z, p);
        CHECK(prob_at_n(p_z, n) >= p);
        if (n > 1) CHECK(prob_at_n(p_z, n - 1) < p);

        // nondecreasing in both arguments
        CHECK(prob_at_n(p_z, n + 1) >= prob_at_n(p_z, n));
        CHECK(prob_at_n(std::min(1.0, p_z * 1.5), n) >= prob_at_n(p_z, n));
        // n_for_p nonincreasing in p_z, nondecreasing in p
        CHECK(n_for_p(std::min(1.0, p_z * 1.5), p) <= n);
        if (p < 0.98) CHECK(n_for_p(p_z, std::min(0.99, p + 0.01)) >= n);
    }
}

TEST_CASE("expected_queries") {
    CHECK(expected_queries(0.352) == doctest::Approx(2.84).epsilon(0.002));
    CHECK(expected_queries(0.352) == doctest::Approx(1.0 / 0.352).epsilon(1e-15));
    CHECK(expected_queries(1.0) == 1.0);
    CHECK(expected_queries(0.016) == doctest::Approx(62.5).epsilon(1e-12));
    CHECK_THROWS_WITH_AS(expected_queries(0.0), doctest::Contains("unextractable"),
                         std::invalid_argument);
}

TEST_CASE("aggregate_rates: direct counting") {
    std::vector<std::pair<SuffixScore, SuffixScore>> scores{
        {score_of(0.0), score_of(0.0)},
        {score_of(0.2), score_of(0.0)},
        {score_of(0.0), score_of(0.0)},
        {score_of(1.0), score_of(1.0)},
    };
    std::vector<double> thresholds{1e-4};
    RateReport report = aggregate_rates(scores, thresholds);
    CHECK(report.total_examples == 4);
    CHECK(report.max_rate == doctest::Approx(0.5));
    CHECK(report.rate_at_thresholds.at(1e-4) == doctest::Approx(0.5));
    CHECK(report.greedy_rate == doctest::Approx(0.25));
}

TEST_CASE("aggregate_rates: all zero") {
    std::vector<std::pair<SuffixScore, SuffixScore>> scores(6, {score_of(0.0), score_of(0.0)});
    RateReport report = aggregate_rates(scores, default_thresholds());
    CHECK(report.greedy_rate == 0.0);
    CHECK(report.max_rate == 0.0);
    for (const auto& [t, rate] : report.rate_at_thresholds) CHECK(rate == 0.0);
}

TEST_CASE("aggregate_rates: empty input is an error") {
    std::vector<std::pair<SuffixScore, SuffixScore>> empty;
    CHECK_THROWS_AS(aggregate_rates(empty, default_thresholds()), std::invalid_argument);
}

TEST_CASE("aggregate_rates: 10k mixture vs independent recount") {
    Rng rng(17);
    std::vector<std::pair<SuffixScore, SuffixScore>> scores;
    scores.reserve(10000);
    for (int i = 0; i < 10000; ++i) {
        double roll = rng.uniform01();
        double p = roll < 0.3 ? 0.0 : (roll < 0.6 ? 1e-5 + 0.009 * rng.uniform01()
                                                  : rng.uniform01());
        double greedy = rng.uniform01() < 0.1 ? 1.0 : 0.0;
        scores.push_back({score_of(p), score_of(greedy)});
    }
    std::vector<double> thresholds = default_thresholds();
    RateReport report = aggregate_rates(scores, thresholds);

    // brute-force recount
    for (double t : thresholds) {
        std::size_t hits = 0;
        for (const auto& [s, g] : scores) {
            if (s.prob >= t) ++hits;
        }
        CHECK(report.rate_at_thresholds.at(t) ==
              doctest::Approx(double(hits) / 10000.0).epsilon(1e-15));
    }
    std::size_t greedy_hits = 0, max_hits = 0;
    for (const auto& [s, g] : scores) {
        if (g.prob == 1.0) ++greedy_hits;
        if (s.prob > 0.0) ++max_hits;
    }
    CHECK(report.greedy_rate == doctest::Approx(double(greedy_hits) / 10000.0));
    CHECK(report.max_rate == doctest::Approx(double(max_hits) / 10000.0));

    // threshold rates are nonincreasing in the threshold
    double prev = 1.0;
    for (double t : {1e-4, 0.01, 0.1, 0.5, 0.75}) {
        double r = report.rate_at_thresholds.at(t);
        CHECK(r <= prev + 1e-15);
        prev = r;
    }
    CHECK(report.greedy_rate <= report.max_rate);
}
