#include "lharq/channel.hpp"

#include <cmath>
#include <stdexcept>

#include "lharq/kernels.hpp"

namespace lharq {

FadingChannel::FadingChannel(double avg_snr) : avg_snr_(avg_snr) {
    if (!(avg_snr > 0.0) || !std::isfinite(avg_snr))
        throw std::invalid_argument("FadingChannel: avg_snr must be positive and finite");
}

double FadingChannel::sample(Rng& rng) const {
    // Inverse CDF; u < 1 keeps the draw finite.
    return -avg_snr_ * std::log1p(-rng.uniform());
}

double FadingChannel::cdf(double snr) const {
    if (snr <= 0.0) return 0.0;
    return -std::expm1(-snr / avg_snr_);
}

double FadingChannel::quantile(double p) const {
    if (!(p >= 0.0) || !(p < 1.0)) throw std::invalid_argument("quantile: p must be in [0, 1)");
    return -avg_snr_ * std::log1p(-p);
}

Quadrature Quadrature::build(const FadingChannel& channel, std::size_t n_span_nodes,
                             double truncation_prob) {
    if (n_span_nodes < 2)
        throw std::invalid_argument("Quadrature::build: need at least 2 span nodes");
    if (!(truncation_prob > 0.0) || !(truncation_prob < 1.0))
        throw std::invalid_argument("Quadrature::build: truncation_prob must be in (0, 1)");

    const double mean = channel.avg_snr();
    const double span_mass = 1.0 - truncation_prob;
    const double trunc = channel.quantile(span_mass);

    Quadrature q;
    q.truncation_point = trunc;
    q.nodes.resize(n_span_nodes + 1);
    q.weights.assign(n_span_nodes + 1, 0.0);

    for (std::size_t i = 0; i < n_span_nodes; ++i) {
        const double u = span_mass * static_cast<double>(i) / static_cast<double>(n_span_nodes - 1);
        q.nodes[i] = channel.quantile(u);
    }
    q.nodes[n_span_nodes - 1] = trunc;
    // Conditional tail mean of the exponential.
    q.nodes[n_span_nodes] = trunc + mean;

    // Hat-basis weights: over [a, b], with M = integral of the pdf and
    // S = integral of snr * pdf, the node at a receives (b M - S) / (b - a)
    // and the node at b receives (S - a M) / (b - a). Summing over intervals
    // gives total weight span_mass exactly; the tail node takes the rest.
    for (std::size_t i = 0; i + 1 < n_span_nodes; ++i) {
        const double a = q.nodes[i];
        const double b = q.nodes[i + 1];
        const double ea = std::exp(-a / mean);
        const double eb = std::exp(-b / mean);
        const double mass = ea - eb;
        const double first_moment = (a + mean) * ea - (b + mean) * eb;
        const double width = b - a;
        q.weights[i] += (b * mass - first_moment) / width;
        q.weights[i + 1] += (first_moment - a * mass) / width;
    }
    double span_sum = 0.0;
    for (std::size_t i = 0; i < n_span_nodes; ++i) span_sum += q.weights[i];
    // Absorb the residual rounding into the last span node so the weights
    // sum to one exactly.
    q.weights[n_span_nodes - 1] += span_mass - span_sum;
    q.weights[n_span_nodes] = truncation_prob;
    return q;
}

double Quadrature::expect(std::span<const double> values) const {
    if (values.size() != nodes.size())
        throw std::invalid_argument("Quadrature::expect: value count does not match nodes");
    return kernels::dot(weights.data(), values.data(), nodes.size());
}

double aggregate_snr(std::span<const double> snrs) {
    if (snrs.empty()) throw std::invalid_argument("aggregate_snr: empty list");
    double prod = 1.0;
    for (double s : snrs) {
        if (s < 0.0) throw std::invalid_argument("aggregate_snr: negative SNR");
        prod *= 1.0 + s;
    }
    return prod - 1.0;
}

}  // namespace lharq
