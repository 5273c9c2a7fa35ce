#include "lharq/mc_simulator.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <future>
#include <ostream>
#include <stdexcept>
#include <thread>

namespace lharq {

namespace {

// Per-cycle draw source; the forced test vectors are consumed from the start
// of each cycle.
struct Draws {
    const SimConfig& cfg;
    Rng& rng;
    std::size_t snr_i = 0;
    std::size_t u_i = 0;

    double snr() {
        if (!cfg.forced_snrs.empty())
            return cfg.forced_snrs[snr_i++ % cfg.forced_snrs.size()];
        return cfg.channel.sample(rng);
    }
    double uniform() {
        if (!cfg.forced_uniforms.empty())
            return cfg.forced_uniforms[u_i++ % cfg.forced_uniforms.size()];
        return rng.uniform();
    }
};

CycleOutcome run_cycle_impl(const SimConfig& cfg, Rng& rng, std::uint64_t* clamp_count) {
    const double rate = cfg.model.rate();
    const int rounds = cfg.rounds;
    Draws draw{cfg, rng};
    CycleOutcome out;
    if (cfg.retain_traces) out.rounds.reserve(static_cast<std::size_t>(rounds));

    if (cfg.scheme == Scheme::ir) {
        // One uniform per cycle, compared against the aggregate-SNR PER; the
        // PER is non-increasing in the round, so ERR_k implies ERR_{k-1}.
        const double u = draw.uniform();
        double prod = 1.0;
        for (int k = 1; k <= rounds; ++k) {
            const double snr = draw.snr();
            prod *= 1.0 + snr;
            const bool err = u < cfg.model.full(prod - 1.0);
            if (cfg.retain_traces) out.rounds.push_back({snr, u, 0.0, err, false, false});
            if (!err) {
                out.reward = rate;
                out.duration = k;
                out.decoded_round = k;
                return out;
            }
        }
        out.reward = 0.0;
        out.duration = rounds;
        return out;
    }

    const bool all_or_none = cfg.scheme == Scheme::an;
    double bank = all_or_none ? rate : 0.0;
    std::vector<double> snr(static_cast<std::size_t>(rounds));
    std::vector<double> u(static_cast<std::size_t>(rounds));
    std::vector<double> rho(static_cast<std::size_t>(rounds), 0.0);

    for (int k = 1; k <= rounds; ++k) {
        const std::size_t ki = static_cast<std::size_t>(k - 1);
        snr[ki] = draw.snr();
        u[ki] = draw.uniform();
        const bool err = u[ki] < cfg.model.full(snr[ki]);
        if (cfg.retain_traces) out.rounds.push_back({snr[ki], u[ki], 0.0, err, false, false});

        if (!err) {
            out.duration = k;
            out.decoded_round = k;
            // Walk the backtrack chain toward round 1, reusing each failed
            // round's uniform so the backward error implication holds per
            // level.
            bool chain_intact = true;
            double layered_reward = rate;
            for (int z = k - 1; z >= 1 && chain_intact; --z) {
                const std::size_t zi = static_cast<std::size_t>(z - 1);
                const bool bt_err = u[zi] < cfg.model.backtrack(snr[zi], rho[zi]);
                if (cfg.retain_traces) {
                    out.rounds[zi].backtrack_visited = true;
                    out.rounds[zi].backtrack_err = bt_err;
                }
                if (bt_err) {
                    chain_intact = false;
                } else {
                    layered_reward += rate - rho[zi];
                }
            }
            if (all_or_none) {
                // bank holds k * rate minus the embedded rates so far.
                out.reward = chain_intact ? bank : 0.0;
            } else {
                out.reward = layered_reward;
            }
            return out;
        }

        if (k < rounds) {
            double r;
            if (cfg.policy != nullptr) {
                r = cfg.policy->lookup(k, snr[ki], bank, clamp_count);
            } else {
                r = cfg.fixed_policy->lookup(snr[ki]);
            }
            rho[ki] = r;
            if (cfg.retain_traces) out.rounds[ki].backtrack_rate = r;
            bank = all_or_none ? bank + rate - r
                               : (rate + bank - r) * (1.0 - cfg.model.backtrack_cond(snr[ki], r));
        }
    }
    out.reward = 0.0;
    out.duration = rounds;
    return out;
}

struct ShardSums {
    double sum_r = 0.0, sum_d = 0.0;
    double sum_rr = 0.0, sum_dd = 0.0, sum_rd = 0.0;
    std::vector<std::uint64_t> duration_counts;
    std::vector<std::uint64_t> fail_through;
    std::uint64_t clamps = 0;
    std::vector<CycleOutcome> traces;
};

ShardSums run_shard(const SimConfig& cfg, std::uint64_t shard, std::size_t n_cycles) {
    ShardSums s;
    s.duration_counts.assign(static_cast<std::size_t>(cfg.rounds), 0);
    s.fail_through.assign(static_cast<std::size_t>(cfg.rounds), 0);
    Rng rng = Rng(cfg.seed).derive(shard);
    for (std::size_t c = 0; c < n_cycles; ++c) {
        CycleOutcome out = run_cycle_impl(cfg, rng, &s.clamps);
        const double r = out.reward;
        const double d = static_cast<double>(out.duration);
        s.sum_r += r;
        s.sum_d += d;
        s.sum_rr += r * r;
        s.sum_dd += d * d;
        s.sum_rd += r * d;
        ++s.duration_counts[static_cast<std::size_t>(out.duration - 1)];
        const int failed = out.decoded_round > 0 ? out.decoded_round - 1 : cfg.rounds;
        for (int k = 0; k < failed; ++k) ++s.fail_through[static_cast<std::size_t>(k)];
        if (cfg.retain_traces) s.traces.push_back(std::move(out));
    }
    return s;
}

}  // namespace

void SimConfig::validate() const {
    if (rounds < 1) throw std::domain_error("SimConfig: rounds must be >= 1");
    if (n_cycles < 1) throw std::domain_error("SimConfig: need at least one cycle");
    if (n_shards < 1) throw std::domain_error("SimConfig: need at least one shard");
    if (scheme != Scheme::ir && rounds > 1) {
        if (policy == nullptr && fixed_policy == nullptr)
            throw std::domain_error("SimConfig: layered schemes need a policy");
        const double policy_rate = policy != nullptr ? policy->actions.rate
                                                      : fixed_policy != nullptr
                                                            ? fixed_policy->actions.rate
                                                            : model.rate();
        if (std::abs(policy_rate - model.rate()) > 1e-12 * model.rate())
            throw std::domain_error("SimConfig: policy rate does not match model");
        if (policy != nullptr) {
            policy->validate();
            if (policy->rounds != rounds)
                throw std::domain_error("SimConfig: policy round count mismatch");
            if (policy->scheme != scheme)
                throw std::domain_error("SimConfig: policy scheme mismatch");
        }
    }
}

CycleOutcome run_cycle(const SimConfig& config, Rng& rng) {
    config.validate();
    return run_cycle_impl(config, rng, nullptr);
}

SimResult simulate(const SimConfig& config) {
    config.validate();
    const std::size_t shards = std::min(config.n_shards, config.n_cycles);
    std::vector<std::size_t> shard_cycles(shards, config.n_cycles / shards);
    for (std::size_t s = 0; s < config.n_cycles % shards; ++s) ++shard_cycles[s];

    std::vector<ShardSums> parts(shards);
    const unsigned hw = std::max(1u, std::thread::hardware_concurrency());
    if (shards > 1 && hw > 1) {
        std::vector<std::future<ShardSums>> futures;
        futures.reserve(shards);
        for (std::size_t s = 0; s < shards; ++s)
            futures.push_back(std::async(std::launch::async, run_shard, std::cref(config), s,
                                         shard_cycles[s]));
        for (std::size_t s = 0; s < shards; ++s) parts[s] = futures[s].get();
    } else {
        for (std::size_t s = 0; s < shards; ++s) parts[s] = run_shard(config, s, shard_cycles[s]);
    }

    // Combine in shard order; the result does not depend on scheduling.
    ShardSums total;
    total.duration_counts.assign(static_cast<std::size_t>(config.rounds), 0);
    total.fail_through.assign(static_cast<std::size_t>(config.rounds), 0);
    for (auto& p : parts) {
        total.sum_r += p.sum_r;
        total.sum_d += p.sum_d;
        total.sum_rr += p.sum_rr;
        total.sum_dd += p.sum_dd;
        total.sum_rd += p.sum_rd;
        total.clamps += p.clamps;
        for (std::size_t k = 0; k < total.duration_counts.size(); ++k) {
            total.duration_counts[k] += p.duration_counts[k];
            total.fail_through[k] += p.fail_through[k];
        }
        for (auto& t : p.traces) total.traces.push_back(std::move(t));
    }

    const double n = static_cast<double>(config.n_cycles);
    SimResult res;
    res.policy_clamp_count = total.clamps;
    res.duration_counts = total.duration_counts;
    res.traces = std::move(total.traces);

    ThroughputReport& rep = res.report;
    rep.mode = ReportMode::simulated;
    rep.expected_reward = total.sum_r / n;
    rep.expected_duration = total.sum_d / n;
    rep.eta = rep.expected_reward / rep.expected_duration;
    rep.round_failure.resize(static_cast<std::size_t>(config.rounds));
    for (std::size_t k = 0; k < rep.round_failure.size(); ++k)
        rep.round_failure[k] = static_cast<double>(total.fail_through[k]) / n;
    rep.f1 = rep.round_failure[0];

    if (config.n_cycles > 1) {
        const double mean_r = rep.expected_reward;
        const double mean_d = rep.expected_duration;
        const double var_r = (total.sum_rr - n * mean_r * mean_r) / (n - 1.0);
        const double var_d = (total.sum_dd - n * mean_d * mean_d) / (n - 1.0);
        const double cov = (total.sum_rd - n * mean_r * mean_d) / (n - 1.0);
        // Delta-method variance of the ratio of means.
        const double var_eta =
            (var_r - 2.0 * rep.eta * cov + rep.eta * rep.eta * var_d) / (n * mean_d * mean_d);
        rep.ci_halfwidth = 1.96 * std::sqrt(std::max(var_eta, 0.0));
    } else {
        rep.ci_halfwidth = 0.0;
    }
    return res;
}

void write_trace_csv(std::ostream& out, const std::vector<CycleOutcome>& traces) {
    out << "cycle,round,snr,rho,err,err_backtrack,reward,duration\n";
    char buf[192];
    for (std::size_t c = 0; c < traces.size(); ++c) {
        const CycleOutcome& t = traces[c];
        for (std::size_t k = 0; k < t.rounds.size(); ++k) {
            const RoundTrace& r = t.rounds[k];
            std::snprintf(buf, sizeof(buf), "%zu,%zu,%.17g,%.17g,%d,%d,%.17g,%d\n", c, k + 1,
                          r.snr, r.backtrack_rate, r.err ? 1 : 0, r.backtrack_err ? 1 : 0,
                          t.reward, t.duration);
            out << buf;
        }
    }
}

}  // namespace lharq
