#include "lharq/dp_optimizer.hpp"

#include <cmath>
#include <stdexcept>

#include "sweep_detail.hpp"

namespace lharq {

namespace {

void check_grid(const DpGrid& grid, Scheme scheme, double rate, int rounds) {
    if (grid.bank_grids.size() != static_cast<std::size_t>(rounds))
        throw std::domain_error("optimize: grid round count mismatch");
    for (int k = 1; k <= rounds; ++k) {
        const BankGrid& b = grid.bank_grids[static_cast<std::size_t>(k - 1)];
        const double lo = scheme == Scheme::lharq ? 0.0 : rate;
        const double hi = scheme == Scheme::lharq ? (k - 1) * rate : k * rate;
        if (std::abs(b.lo - lo) > 1e-9 || std::abs(b.hi - hi) > 1e-9)
            throw std::domain_error("optimize: bank grid range does not match scheme");
        if (b.n < 1 || (b.hi > b.lo && b.n < 2))
            throw std::domain_error("optimize: bank grid too coarse");
    }
}

OptimizeResult optimize(Scheme scheme, const PerModel& model, const FadingChannel& channel,
                        const Quadrature& quad, int rounds, const ActionSet& actions,
                        const DpGrid& grid) {
    if (rounds < 2) throw std::domain_error("optimize: rounds must be >= 2");
    if (std::abs(actions.rate - model.rate()) > 1e-12 * model.rate())
        throw std::domain_error("optimize: action set rate does not match model");
    if (actions.size() > 65535) throw std::domain_error("optimize: action set too large");
    check_grid(grid, scheme, model.rate(), rounds);

    const auto ctx = detail::SweepContext::prepare(scheme, model, quad, actions);
    const std::size_t n = ctx.n_nodes();

    OptimizeResult res;
    res.value.snr_nodes = std::vector<double>(quad.nodes.begin(), quad.nodes.end());
    res.value.bank_grids = grid.bank_grids;
    res.value.stages.resize(static_cast<std::size_t>(rounds));

    Policy& pol = res.policy;
    pol.scheme = scheme;
    pol.rounds = rounds;
    pol.actions = actions;
    pol.avg_snr = channel.avg_snr();
    pol.eps_trunc = grid.eps_trunc;
    pol.truncation_snr = grid.truncation_snr;
    pol.generator = "lharq 1.0.0";
    pol.snr_nodes = res.value.snr_nodes;
    pol.bank_grids = grid.bank_grids;
    pol.tables.resize(static_cast<std::size_t>(rounds - 1));

    auto& stages = res.value.stages;
    stages[static_cast<std::size_t>(rounds - 1)] =
        detail::terminal_values(ctx, grid.bank_grids.back());
    std::vector<double> w =
        detail::expect_over_snr(ctx, stages.back(), grid.bank_grids.back().n);

    for (int k = rounds - 1; k >= 1; --k) {
        const BankGrid& bank = grid.bank_grids[static_cast<std::size_t>(k - 1)];
        const BankGrid& next = grid.bank_grids[static_cast<std::size_t>(k)];
        auto& v = stages[static_cast<std::size_t>(k - 1)];
        auto& table = pol.tables[static_cast<std::size_t>(k - 1)];
        v.assign(n * bank.n, 0.0);
        table.assign(n * bank.n, 0);
        detail::sweep_stage(ctx, bank, next, w, detail::Maximize{}, v.data(), table.data());
        w = detail::expect_over_snr(ctx, v, bank.n);
    }

    res.expected_reward = w[0];
    res.f1 = ctx.f1;
    res.report = scheme == Scheme::lharq ? lharq_throughput(pol, model, quad)
                                         : an_throughput(pol, model, quad);
    return res;
}

}  // namespace

OptimizeResult optimize_lharq(const PerModel& model, const FadingChannel& channel,
                              const Quadrature& quad, int rounds, const ActionSet& actions,
                              const DpGrid& grid) {
    return optimize(Scheme::lharq, model, channel, quad, rounds, actions, grid);
}

OptimizeResult optimize_an(const PerModel& model, const FadingChannel& channel,
                           const Quadrature& quad, int rounds, const ActionSet& actions,
                           const DpGrid& grid) {
    return optimize(Scheme::an, model, channel, quad, rounds, actions, grid);
}

double update_bank_lharq(double bank, double backtrack_rate, double snr, const PerModel& model) {
    if (bank < 0.0) throw std::domain_error("update_bank_lharq: bank must be >= 0");
    return (model.rate() + bank - backtrack_rate) *
           (1.0 - model.backtrack_cond(snr, backtrack_rate));
}

double update_bank_an(double bank, double backtrack_rate, double rate) {
    return bank + rate - backtrack_rate;
}

}  // namespace lharq
