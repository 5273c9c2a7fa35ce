#pragma once

#include <vector>

#include "lharq/analytic.hpp"
#include "lharq/channel.hpp"
#include "lharq/per_model.hpp"
#include "lharq/policy.hpp"

namespace lharq {

// Backward-induction values, kept for inspection and the monotonicity
// checks: stages[k-1] holds round k's values over (SNR node, bank node),
// terminal round included.
struct ValueFunction {
    std::vector<double> snr_nodes;
    std::vector<BankGrid> bank_grids;
    std::vector<std::vector<double>> stages;
};

struct OptimizeResult {
    Policy policy;
    ValueFunction value;
    double expected_reward = 0.0;  // optimal expected reward per cycle
    double f1 = 0.0;
    ThroughputReport report;
};

// Throughput-optimal backtrack-rate tables by backward dynamic programming
// over the (SNR, bank) grids. rounds >= 2; ties in the per-cell maximization
// go to the smallest rate within 1e-12 relative. The model should already
// carry the intended PER truncation.
OptimizeResult optimize_lharq(const PerModel& model, const FadingChannel& channel,
                              const Quadrature& quad, int rounds, const ActionSet& actions,
                              const DpGrid& grid);

// All-or-none variant: reward only when the whole backtrack chain decodes.
OptimizeResult optimize_an(const PerModel& model, const FadingChannel& channel,
                           const Quadrature& quad, int rounds, const ActionSet& actions,
                           const DpGrid& grid);

// Bank carried into the next round after a failed round with the given
// backtrack rate: the expected reward the backtrack chain can still recover.
double update_bank_lharq(double bank, double backtrack_rate, double snr, const PerModel& model);

// All-or-none bank: the reward at stake if the whole chain succeeds.
double update_bank_an(double bank, double backtrack_rate, double rate);

}  // namespace lharq
