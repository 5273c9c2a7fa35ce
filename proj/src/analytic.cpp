#include "lharq/analytic.hpp"

#include "lharq/format.hpp"

#include <cmath>
#include <cstdio>
#include <stdexcept>

#include "sweep_detail.hpp"

namespace lharq {

namespace {

std::vector<double> geometric_failures(double f1, int rounds) {
    std::vector<double> f(static_cast<std::size_t>(rounds));
    double p = 1.0;
    for (int k = 0; k < rounds; ++k) {
        p *= f1;
        f[static_cast<std::size_t>(k)] = p;
    }
    return f;
}

double geometric_duration(double f1, int rounds) {
    if (f1 >= 1.0) return static_cast<double>(rounds);
    return (1.0 - std::pow(f1, rounds)) / (1.0 - f1);
}

ThroughputReport evaluate_policy(const Policy& policy, const PerModel& model,
                                 const Quadrature& quad) {
    policy.validate();
    if (policy.snr_nodes.size() != quad.nodes.size())
        throw std::domain_error("evaluate: policy SNR grid does not match quadrature");
    for (std::size_t i = 0; i < quad.nodes.size(); ++i)
        if (policy.snr_nodes[i] != quad.nodes[i])
            throw std::domain_error("evaluate: policy SNR grid does not match quadrature");
    if (std::abs(policy.actions.rate - model.rate()) > 1e-12 * model.rate())
        throw std::domain_error("evaluate: policy rate does not match model");

    const auto ctx = detail::SweepContext::prepare(policy.scheme, model, quad, policy.actions);
    const int rounds = policy.rounds;
    const std::size_t n = ctx.n_nodes();

    std::vector<double> v = detail::terminal_values(ctx, policy.bank_grids.back());
    std::vector<double> w = detail::expect_over_snr(ctx, v, policy.bank_grids.back().n);
    for (int k = rounds - 1; k >= 1; --k) {
        const BankGrid& grid = policy.bank_grids[static_cast<std::size_t>(k - 1)];
        const BankGrid& next = policy.bank_grids[static_cast<std::size_t>(k)];
        v.assign(n * grid.n, 0.0);
        detail::sweep_stage(ctx, grid, next, w,
                            detail::ForcedTable{policy.tables[static_cast<std::size_t>(k - 1)].data()},
                            v.data(), nullptr);
        w = detail::expect_over_snr(ctx, v, grid.n);
    }

    ThroughputReport rep;
    rep.mode = ReportMode::analytic;
    rep.f1 = ctx.f1;
    rep.expected_reward = w[0];  // round-1 grid is the single initial-bank node
    rep.expected_duration = geometric_duration(ctx.f1, rounds);
    rep.eta = rep.expected_reward / rep.expected_duration;
    rep.round_failure = geometric_failures(ctx.f1, rounds);
    rep.ci_halfwidth = 0.0;
    return rep;
}

void check_failure_sequence(std::span<const double> failure) {
    if (failure.size() < 2) throw std::domain_error("failure list needs f_0..f_K with K >= 1");
    if (failure[0] != 1.0) throw std::domain_error("failure list must start at f_0 = 1");
    for (std::size_t k = 0; k < failure.size(); ++k) {
        if (!(failure[k] >= 0.0 && failure[k] <= 1.0))
            throw std::domain_error("failure probabilities must lie in [0, 1]");
        if (k > 0 && failure[k] > failure[k - 1])
            throw std::domain_error("failure list must be non-increasing");
    }
}

}  // namespace

double irharq_fk(const PerModel& model, const FadingChannel& channel, int round_k,
                 std::size_t n_samples, Rng& rng) {
    return irharq_fk_sampled(
        model, [&channel](Rng& r) { return channel.sample(r); }, round_k, n_samples, rng);
}

ThroughputReport irharq_throughput(double rate, std::span<const double> failure) {
    if (!(rate > 0.0)) throw std::domain_error("irharq_throughput: rate must be positive");
    check_failure_sequence(failure);
    const std::size_t rounds = failure.size() - 1;
    ThroughputReport rep;
    rep.mode = ReportMode::analytic;
    rep.f1 = failure[1];
    rep.expected_reward = rate * (1.0 - failure[rounds]);
    rep.expected_duration = 0.0;
    for (std::size_t k = 0; k < rounds; ++k) rep.expected_duration += failure[k];
    rep.eta = rep.expected_reward / rep.expected_duration;
    rep.round_failure.assign(failure.begin() + 1, failure.end());
    return rep;
}

ThroughputReport xp_throughput(std::span<const double> rates, std::span<const double> failure) {
    check_failure_sequence(failure);
    if (rates.size() + 1 != failure.size())
        throw std::domain_error("xp_throughput: need one rate per round");
    for (std::size_t k = 0; k < rates.size(); ++k) {
        if (!(rates[k] > 0.0)) throw std::domain_error("xp_throughput: rates must be positive");
        if (k > 0 && rates[k] < rates[k - 1])
            throw std::domain_error("xp_throughput: rates must be non-decreasing");
    }
    const std::size_t rounds = rates.size();
    ThroughputReport rep;
    rep.mode = ReportMode::analytic;
    rep.f1 = failure[1];
    rep.expected_reward = 0.0;
    for (std::size_t k = 1; k <= rounds; ++k)
        rep.expected_reward += rates[k - 1] * (failure[k - 1] - failure[k]);
    rep.expected_duration = 0.0;
    for (std::size_t k = 0; k < rounds; ++k) rep.expected_duration += failure[k];
    rep.eta = rep.expected_reward / rep.expected_duration;
    rep.round_failure.assign(failure.begin() + 1, failure.end());
    return rep;
}

ThroughputReport lharq_throughput(const Policy& policy, const PerModel& model,
                                  const Quadrature& quad) {
    if (policy.scheme != Scheme::lharq)
        throw std::domain_error("lharq_throughput: policy scheme mismatch");
    return evaluate_policy(policy, model, quad);
}

ThroughputReport an_throughput(const Policy& policy, const PerModel& model,
                               const Quadrature& quad) {
    if (policy.scheme != Scheme::an)
        throw std::domain_error("an_throughput: policy scheme mismatch");
    return evaluate_policy(policy, model, quad);
}

std::string report_csv_header() { return "scheme,R,K,avg_snr_db,eta,e_reward,e_duration,f1,ci"; }

std::string report_csv_row(const std::string& scheme, double rate, int rounds,
                           double avg_snr_db, const ThroughputReport& report) {
    std::string row = scheme;
    for (double v : {rate, static_cast<double>(rounds), avg_snr_db, report.eta,
                     report.expected_reward, report.expected_duration, report.f1,
                     report.ci_halfwidth})
        row += "," + format_double(v);
    return row;
}

}  // namespace lharq
