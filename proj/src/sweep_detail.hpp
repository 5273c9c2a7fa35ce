#pragma once

#include <algorithm>
#include <cstdint>
#include <stdexcept>
#include <type_traits>
#include <vector>

#include "lharq/channel.hpp"
#include "lharq/kernels.hpp"
#include "lharq/per_model.hpp"
#include "lharq/policy.hpp"

// Backward value sweep shared by the optimizer and the analytic evaluators.
// One stage computes, for every (SNR node, bank node) cell of round k, the
// value of each candidate backtrack rate and either maximizes (optimizer) or
// substitutes the action fixed by a policy table (evaluator). Running the
// evaluator with the optimizer's own argmax table reproduces the optimizer's
// values exactly, arithmetic included.
//
// Layered stage value, with W the expectation of the next round's value over
// the SNR distribution:
//   V_k(snr, bank) = (rate + bank) (1 - per(snr))
//                    + per(snr) W_{k+1}((rate + bank - rho)(1 - cond(snr, rho)))
// All-or-none stage value, kept unnormalized (bank times the reward ratio of
// the recursion), which keeps it monotone in the bank:
//   V_k(snr, bank) = bank (1 - per(snr))
//                    + per(snr) (1 - cond(snr, rho)) W_{k+1}(bank + rate - rho)
// Terminal round (no action): (rate + bank)(1 - per) and bank (1 - per).
//
// The expected cycle reward is W_1 at the initial bank (0 layered, rate for
// all-or-none; the all-or-none values are unnormalized so no rate factor
// applies).

namespace lharq::detail {

inline constexpr double kArgmaxRelTol = 1e-12;

struct SweepContext {
    Scheme scheme = Scheme::lharq;
    double rate = 0.0;
    const Quadrature* quad = nullptr;
    const ActionSet* actions = nullptr;
    std::vector<double> per;       // full-decoding PER at the SNR nodes
    std::vector<double> perc;      // complements
    std::vector<double> cond;      // [node * n_actions + a] backtrack conditionals
    double f1 = 0.0;               // expected per over the quadrature

    static SweepContext prepare(Scheme scheme, const PerModel& model, const Quadrature& quad,
                                const ActionSet& actions) {
        if (scheme != Scheme::lharq && scheme != Scheme::an)
            throw std::domain_error("sweep: scheme must be lharq or an");
        SweepContext ctx;
        ctx.scheme = scheme;
        ctx.rate = model.rate();
        ctx.quad = &quad;
        ctx.actions = &actions;
        const std::size_t n = quad.size();
        const std::size_t na = actions.size();
        ctx.per.resize(n);
        ctx.perc.resize(n);
        ctx.cond.resize(n * na);
        for (std::size_t i = 0; i < n; ++i) {
            ctx.per[i] = model.full(quad.nodes[i]);
            ctx.perc[i] = 1.0 - ctx.per[i];
            for (std::size_t a = 0; a < na; ++a)
                ctx.cond[i * na + a] = model.backtrack_cond(quad.nodes[i], actions[a]);
        }
        ctx.f1 = quad.expect(ctx.per);
        return ctx;
    }

    std::size_t n_nodes() const noexcept { return per.size(); }
    std::size_t n_actions() const noexcept { return actions->size(); }
};

// Terminal values over (snr, bank) of the last round.
inline std::vector<double> terminal_values(const SweepContext& ctx, const BankGrid& grid) {
    const std::size_t n = ctx.n_nodes();
    std::vector<double> v(n * grid.n);
    const std::vector<double> bank = grid.nodes();
    for (std::size_t i = 0; i < n; ++i) {
        const double offset = ctx.scheme == Scheme::lharq ? ctx.rate * ctx.perc[i] : 0.0;
        kernels::affine(ctx.perc[i], bank.data(), offset, v.data() + i * grid.n, grid.n);
    }
    return v;
}

// W(bank) = sum_i weight_i V(i, bank).
inline std::vector<double> expect_over_snr(const SweepContext& ctx, const std::vector<double>& v,
                                           std::size_t n_bank) {
    std::vector<double> w(n_bank, 0.0);
    const auto& weights = ctx.quad->weights;
    for (std::size_t i = 0; i < ctx.n_nodes(); ++i)
        kernels::axpy(weights[i], v.data() + i * n_bank, w.data(), n_bank);
    return w;
}

struct Maximize {};

struct ForcedTable {
    const std::uint16_t* idx;  // row-major (snr, bank), the round's policy table
};

// One backward stage. grid/next_grid are the state grids of rounds k and
// k+1; w_next samples W_{k+1} on next_grid. Writes values (and with
// Maximize, argmax indices) for all cells of round k.
template <class ActionRule>
inline void sweep_stage(const SweepContext& ctx, const BankGrid& grid, const BankGrid& next_grid,
                        const std::vector<double>& w_next, ActionRule rule, double* v_out,
                        std::uint16_t* argmax_out) {
    const std::size_t n = ctx.n_nodes();
    const std::size_t nj = grid.n;
    const std::size_t na = ctx.n_actions();
    const double inv_dt = next_grid.n > 1 ? 1.0 / next_grid.step() : 1.0;
    const std::vector<double> bank = grid.nodes();

    std::vector<double> base(nj);
    std::vector<double> cand(na * nj);
    for (std::size_t i = 0; i < n; ++i) {
        const double offset = ctx.scheme == Scheme::lharq ? ctx.rate * ctx.perc[i] : 0.0;
        kernels::affine(ctx.perc[i], bank.data(), offset, base.data(), nj);
        for (std::size_t a = 0; a < na; ++a) {
            const double rho = (*ctx.actions)[a];
            const double keep = 1.0 - ctx.cond[i * na + a];
            double alpha, beta, gain;
            if (ctx.scheme == Scheme::lharq) {
                alpha = keep;
                beta = (ctx.rate - rho) * keep;
                gain = ctx.per[i];
            } else {
                alpha = 1.0;
                beta = ctx.rate - rho;
                gain = ctx.per[i] * keep;
            }
            kernels::lerp_affine_add(bank.data(), nj, alpha, beta, w_next.data(), next_grid.n,
                                     next_grid.lo, inv_dt, base.data(), gain,
                                     cand.data() + a * nj);
        }
        for (std::size_t j = 0; j < nj; ++j) {
            std::size_t pick;
            if constexpr (std::is_same_v<ActionRule, Maximize>) {
                double best = cand[j];
                for (std::size_t a = 1; a < na; ++a) best = std::max(best, cand[a * nj + j]);
                // Smallest rate within relative tolerance of the maximum;
                // values are non-negative.
                pick = 0;
                while (cand[pick * nj + j] < best * (1.0 - kArgmaxRelTol)) ++pick;
                argmax_out[i * nj + j] = static_cast<std::uint16_t>(pick);
            } else {
                pick = rule.idx[i * nj + j];
            }
            v_out[i * nj + j] = cand[pick * nj + j];
        }
    }
}

}  // namespace lharq::detail
