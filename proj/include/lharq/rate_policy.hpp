#pragma once

#include <cstdint>
#include <iosfwd>
#include <span>
#include <variant>
#include <vector>

#include "lharq/analytic.hpp"
#include "lharq/channel.hpp"
#include "lharq/per_model.hpp"
#include "lharq/policy.hpp"

namespace lharq {

// One-dimensional heuristic policy: per SNR, the smallest rate whose
// conditional backtrack error probability stays below epsilon. Independent of
// the round, the bank, and the fading statistics; the full rate always
// qualifies (a full-rate backtrack message has rate zero left to decode), so
// the table is total.
struct FixedOutagePolicy {
    double epsilon = 0.0;
    ActionSet actions;
    std::vector<double> snr_nodes;
    std::vector<std::uint16_t> table;

    static FixedOutagePolicy build(const PerModel& model, std::span<const double> snr_nodes,
                                   double epsilon, const ActionSet& actions);

    // Nearest-node lookup, like the optimizer policies.
    double lookup(double snr) const;

    // Same file format as the optimizer policies, scheme tag "fixed_outage".
    void save(std::ostream& out) const;
    static FixedOutagePolicy load(std::istream& in);

    // Expansion onto per-round tables so the shared evaluator and simulator
    // machinery apply unchanged.
    Policy broadcast(Scheme scheme, int rounds, double avg_snr, const PerModel& model,
                     std::size_t bank_nodes = 64) const;
};

// Smallest action with backtrack_cond(snr, rho) <= epsilon.
double fixed_outage_rate(const PerModel& model, double snr, double epsilon,
                         const ActionSet& actions);

struct EpsilonSweepPoint {
    double epsilon = 0.0;
    double eta = 0.0;
};

struct EpsilonSweepResult {
    std::vector<EpsilonSweepPoint> points;
    std::size_t best_index = 0;

    const EpsilonSweepPoint& best() const { return points[best_index]; }
};

// Logarithmic default grid for epsilon sweeps: 1e-4 .. 0.5, 25 points.
std::vector<double> default_epsilon_grid();

// Layered throughput of the heuristic policy, evaluated with the shared
// nested-expectation machinery (the policy is constant across rounds and
// banks).
ThroughputReport fixed_outage_throughput(const FixedOutagePolicy& policy, int rounds,
                                         const PerModel& model, const Quadrature& quad,
                                         double avg_snr);

// Builds and evaluates the heuristic for every epsilon; best_index marks the
// throughput argmax (first of equals).
EpsilonSweepResult sweep_epsilon(const PerModel& model, const FadingChannel& channel,
                                 const Quadrature& quad, int rounds, const ActionSet& actions,
                                 std::span<const double> epsilons);

// Loader for either policy flavor, dispatched on the scheme tag.
using LoadedPolicy = std::variant<Policy, FixedOutagePolicy>;
LoadedPolicy load_policy_file(std::istream& in);

}  // namespace lharq
