#pragma once

#include <cstdint>
#include <iosfwd>
#include <utility>
#include <vector>

#include "lharq/analytic.hpp"
#include "lharq/channel.hpp"
#include "lharq/per_model.hpp"
#include "lharq/policy.hpp"
#include "lharq/rate_policy.hpp"
#include "lharq/rng.hpp"

namespace lharq {

struct RoundTrace {
    double snr = 0.0;
    double u = 0.0;              // the round's uniform draw
    double backtrack_rate = 0.0; // 0 when none was assigned
    bool err = false;
    bool backtrack_visited = false;  // chain walked through this level
    bool backtrack_err = false;      // meaningful only when visited
};

struct CycleOutcome {
    double reward = 0.0;
    int duration = 0;
    int decoded_round = 0;  // 0 when every round failed
    std::vector<RoundTrace> rounds;  // retained only when requested
};

// One renewal-cycle experiment. For the layered schemes each round draws an
// SNR and a single uniform u; the round decodes iff u >= per(snr) and, when a
// later round triggers backtrack decoding at this level, the backtrack
// succeeds iff u >= per_backtrack(snr, rho). Reusing u couples the two events
// so a backtrack error implies a decoding error by construction (the
// backtrack PER never exceeds the full PER). Incremental redundancy instead
// draws one uniform per cycle and compares it against the aggregate-SNR PER,
// which is non-increasing in the round, so later-round decoding success
// implies earlier success as well.
struct SimConfig {
    SimConfig(PerModel model_, FadingChannel channel_)
        : model(std::move(model_)), channel(channel_) {}

    Scheme scheme = Scheme::ir;
    int rounds = 1;
    std::size_t n_cycles = 1'000'000;
    std::uint64_t seed = 1;
    std::size_t n_shards = 8;
    PerModel model;
    FadingChannel channel;
    const Policy* policy = nullptr;                   // lharq / an
    const FixedOutagePolicy* fixed_policy = nullptr;  // alternative to policy
    bool retain_traces = false;

    // Test hooks: when non-empty, consumed cyclically instead of the random
    // draws.
    std::vector<double> forced_snrs;
    std::vector<double> forced_uniforms;

    void validate() const;
};

CycleOutcome run_cycle(const SimConfig& config, Rng& rng);

struct SimResult {
    ThroughputReport report;
    std::uint64_t policy_clamp_count = 0;
    std::vector<std::uint64_t> duration_counts;  // cycles ending after round k+1
    std::vector<CycleOutcome> traces;
};

// Renewal-reward estimate over n_cycles split into deterministic shards
// (identical output for a fixed seed and shard count, independent of the
// number of worker threads). The confidence halfwidth is the 95% delta-method
// interval of the ratio estimator.
SimResult simulate(const SimConfig& config);

void write_trace_csv(std::ostream& out, const std::vector<CycleOutcome>& traces);

}  // namespace lharq
