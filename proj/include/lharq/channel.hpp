#pragma once

#include <cstddef>
#include <span>
#include <vector>

#include "lharq/rng.hpp"

namespace lharq {

// Rayleigh block fading: the per-round SNR is exponential with mean avg_snr
// (linear scale), i.i.d. across rounds. Sampling and the quadrature below are
// the only two places the distribution enters; everything downstream sees
// either SNR draws or (node, weight) pairs, so a different fading family only
// needs a new channel type.
class FadingChannel {
  public:
    explicit FadingChannel(double avg_snr);

    double avg_snr() const noexcept { return avg_snr_; }

    double sample(Rng& rng) const;

    double cdf(double snr) const;

    // p-quantile, p in [0, 1).
    double quantile(double p) const;

  private:
    double avg_snr_;
};

// Discretization of E[f(SNR)] as sum_i w_i f(node_i). Nodes are spaced
// uniformly in probability over [0, (1 - truncation_prob)-quantile]; the
// weights are the exact pdf integrals of the piecewise-linear hat basis on
// that grid, so the rule integrates any piecewise-linear f exactly. The
// residual tail mass sits on one extra node at the conditional tail mean,
// which keeps E[f] exact for linear f over the whole support. Weights sum to
// one exactly by construction.
struct Quadrature {
    std::vector<double> nodes;
    std::vector<double> weights;
    double truncation_point = 0.0;

    // n_span_nodes >= 2 nodes over [0, truncation_point] plus the tail node.
    static Quadrature build(const FadingChannel& channel, std::size_t n_span_nodes,
                            double truncation_prob);

    std::size_t size() const noexcept { return nodes.size(); }

    // E[f] given f evaluated at the nodes.
    double expect(std::span<const double> values) const;

    template <class F>
    double expect_fn(F&& f) const {
        std::vector<double> values(nodes.size());
        for (std::size_t i = 0; i < nodes.size(); ++i) values[i] = f(nodes[i]);
        return expect(values);
    }
};

// Single SNR carrying the combined mutual information of the listed blocks:
// prod(1 + snr_l) - 1. Commutative and associative; at least one entry
// required.
double aggregate_snr(std::span<const double> snrs);

}  // namespace lharq
