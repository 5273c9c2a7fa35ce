#pragma once

#include <cstddef>
#include <span>
#include <stdexcept>
#include <string>
#include <vector>

#include "lharq/channel.hpp"
#include "lharq/per_model.hpp"
#include "lharq/policy.hpp"
#include "lharq/rng.hpp"

namespace lharq {

enum class ReportMode { analytic, simulated };

// Renewal-reward summary: throughput is the expected reward per cycle over
// the expected cycle length, both in the report. round_failure lists
// f_1..f_K, the probabilities that rounds 1..k all fail.
struct ThroughputReport {
    double eta = 0.0;
    double expected_reward = 0.0;
    double expected_duration = 1.0;
    double f1 = 0.0;
    std::vector<double> round_failure;
    ReportMode mode = ReportMode::analytic;
    double ci_halfwidth = 0.0;
};

// Monte-Carlo estimate of the round-k residual failure probability of
// incremental redundancy: the PER evaluated at the aggregate SNR of k
// independent draws. Round 0 is 1 by definition. The sampler form admits
// arbitrary SNR sources (tests use degenerate ones).
template <class Sampler>
double irharq_fk_sampled(const PerModel& model, Sampler&& sample_snr, int round_k,
                         std::size_t n_samples, Rng& rng) {
    if (round_k < 1) throw std::domain_error("irharq_fk: round must be >= 1");
    if (n_samples == 0) throw std::domain_error("irharq_fk: need at least one sample");
    double acc = 0.0;
    for (std::size_t s = 0; s < n_samples; ++s) {
        double prod = 1.0;
        for (int l = 0; l < round_k; ++l) prod *= 1.0 + sample_snr(rng);
        acc += model.full(prod - 1.0);
    }
    return acc / static_cast<double>(n_samples);
}

double irharq_fk(const PerModel& model, const FadingChannel& channel, int round_k,
                 std::size_t n_samples, Rng& rng);

// Truncated incremental-redundancy throughput from the failure sequence
// f_0..f_K (f_0 = 1, non-increasing): rate (1 - f_K) / sum_{k<K} f_k.
ThroughputReport irharq_throughput(double rate, std::span<const double> failure);

// Cross-packet bound for externally supplied per-round joint rates:
// sum_k rates[k-1] (f_{k-1} - f_k) / sum_{k<K} f_k.
ThroughputReport xp_throughput(std::span<const double> rates, std::span<const double> failure);

// Throughput of a given layered policy by backward evaluation of the nested
// expectations on the quadrature (no maximization). The policy's SNR grid
// must equal the quadrature nodes.
ThroughputReport lharq_throughput(const Policy& policy, const PerModel& model,
                                  const Quadrature& quad);

// Same with all-or-none reward accounting.
ThroughputReport an_throughput(const Policy& policy, const PerModel& model,
                               const Quadrature& quad);

std::string report_csv_header();
std::string report_csv_row(const std::string& scheme, double rate, int rounds,
                           double avg_snr_db, const ThroughputReport& report);

}  // namespace lharq
