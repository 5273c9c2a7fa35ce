#include <doctest.h>

#include <cmath>
#include <sstream>
#include <vector>

#include "lharq/analytic.hpp"
#include "lharq/dp_optimizer.hpp"
#include "lharq/mc_simulator.hpp"
#include "lharq/rate_policy.hpp"
#include "test_support.hpp"

using namespace lharq;

namespace {
const double kR = 3.75;
const double kAvg15dB = 31.622776601683793;
}  // namespace

TEST_CASE("degenerate channel: full reward in one round") {
    const auto model = PerModel::synthetic(kR, 4.0).truncated(1e-6);
    SimConfig cfg(model, FadingChannel(kAvg15dB));
    cfg.scheme = Scheme::ir;
    cfg.rounds = 3;
    cfg.n_cycles = 1;
    cfg.forced_snrs = {model.truncation_snr() * 2.0};

    const auto res = simulate(cfg);
    CHECK(res.report.eta == kR);
    CHECK(res.report.expected_duration == 1.0);

    Rng rng(4);
    const auto cycle = run_cycle(cfg, rng);
    CHECK(cycle.reward == kR);
    CHECK(cycle.duration == 1);
}

TEST_CASE("forced uniforms: u = 1 never errors") {
    const auto model = PerModel::synthetic(kR, 4.0);
    const auto actions = ActionSet::uniform(kR, 2);
    const auto quad = test::default_tiny_quad();
    const Policy policy =
        test::manual_policy_k2(Scheme::lharq, actions, quad.nodes, {0, 0, 0});
    SimConfig cfg(model, FadingChannel(kAvg15dB));
    cfg.scheme = Scheme::lharq;
    cfg.rounds = 2;
    cfg.policy = &policy;
    cfg.forced_uniforms = {1.0};
    Rng rng(5);
    for (int i = 0; i < 32; ++i) {
        const auto cycle = run_cycle(cfg, rng);
        CHECK(cycle.reward == kR);
        CHECK(cycle.duration == 1);
        CHECK(cycle.decoded_round == 1);
    }
}

TEST_CASE("forced sequence: fail, succeed, backtrack -> reward 2R - rho") {
    const auto model = PerModel::synthetic(kR, 4.0).truncated(1e-6);
    const auto actions = ActionSet::uniform(kR, 2);  // {1.875, 3.75}
    const std::vector<double> nodes = {1.0, 8.0, 60.0};
    const Policy policy =
        test::manual_policy_k2(Scheme::lharq, actions, nodes, {0, 0, 0});  // rho = 1.875

    SimConfig cfg(model, FadingChannel(kAvg15dB));
    cfg.scheme = Scheme::lharq;
    cfg.rounds = 2;
    cfg.policy = &policy;
    cfg.retain_traces = true;
    // Round 1: snr below the full-rate threshold (must fail) but far above
    // the residual-rate threshold; u = 0.9 clears the backtrack PER.
    // Round 2: snr above truncation (must decode).
    cfg.forced_snrs = {8.0, model.truncation_snr() * 2.0};
    cfg.forced_uniforms = {0.9, 0.5};

    Rng rng(6);
    const auto cycle = run_cycle(cfg, rng);
    CHECK(cycle.duration == 2);
    CHECK(cycle.decoded_round == 2);
    CHECK(cycle.reward == doctest::Approx(2.0 * kR - 1.875));
    REQUIRE(cycle.rounds.size() == 2);
    CHECK(cycle.rounds[0].err);
    CHECK_FALSE(cycle.rounds[0].backtrack_err);
    CHECK(cycle.rounds[0].backtrack_rate == doctest::Approx(1.875));
    CHECK_FALSE(cycle.rounds[1].err);
}

TEST_CASE("all-or-none grants nothing when the chain breaks") {
    const auto model = PerModel::synthetic(kR, 4.0).truncated(1e-6);
    const auto actions = ActionSet::uniform(kR, 2);
    const std::vector<double> nodes = {1.0, 8.0, 60.0};
    const Policy policy = test::manual_policy_k2(Scheme::an, actions, nodes, {0, 0, 0});

    SimConfig cfg(model, FadingChannel(kAvg15dB));
    cfg.scheme = Scheme::an;
    cfg.rounds = 2;
    cfg.policy = &policy;
    // Round 1 fails with u too high for the backtrack to succeed; round 2
    // decodes. Chain broken -> zero reward.
    cfg.forced_snrs = {1.0, model.truncation_snr() * 2.0};
    cfg.forced_uniforms = {0.9, 0.5};
    Rng rng(7);
    const auto broke = run_cycle(cfg, rng);
    CHECK(broke.reward == 0.0);
    CHECK(broke.duration == 2);
    CHECK(broke.decoded_round == 2);

    // With a clearable backtrack the full stake is granted.
    cfg.forced_snrs = {8.0, model.truncation_snr() * 2.0};
    const auto ok = run_cycle(cfg, rng);
    CHECK(ok.reward == doctest::Approx(2.0 * kR - 1.875));
}

TEST_CASE("seed and shard determinism") {
    const auto model = PerModel::synthetic(kR, 4.0).truncated(1e-6);
    const auto actions = ActionSet::uniform(kR, 8);
    const FadingChannel ch(kAvg15dB);
    const auto fo = FixedOutagePolicy::build(
        model, Quadrature::build(ch, 64, 1e-6).nodes, 0.1, actions);

    SimConfig cfg(model, ch);
    cfg.scheme = Scheme::lharq;
    cfg.rounds = 3;
    cfg.fixed_policy = &fo;
    cfg.n_cycles = 20'000;
    cfg.seed = 99;
    cfg.n_shards = 8;

    const auto a = simulate(cfg);
    const auto b = simulate(cfg);
    CHECK(a.report.eta == b.report.eta);
    CHECK(a.report.ci_halfwidth == b.report.ci_halfwidth);
    CHECK(a.report.round_failure == b.report.round_failure);

    cfg.seed = 100;
    const auto c = simulate(cfg);
    CHECK(a.report.eta != c.report.eta);
}

TEST_CASE("trace coupling: backtrack error implies decode error, monotone in rho") {
    const auto model = PerModel::synthetic(kR, 4.0).truncated(1e-6);
    const auto actions = ActionSet::uniform(kR, 8);
    const FadingChannel ch(std::pow(10.0, 1.2));
    const auto fo = FixedOutagePolicy::build(
        model, Quadrature::build(ch, 64, 1e-6).nodes, 0.3, actions);

    SimConfig cfg(model, ch);
    cfg.scheme = Scheme::lharq;
    cfg.rounds = 4;
    cfg.fixed_policy = &fo;
    cfg.n_cycles = 4'000;
    cfg.seed = 11;
    cfg.retain_traces = true;

    const auto res = simulate(cfg);
    REQUIRE(res.traces.size() == cfg.n_cycles);
    std::size_t chains_seen = 0;
    for (const auto& cycle : res.traces) {
        for (std::size_t z = 0; z + 1 < cycle.rounds.size(); ++z) {
            const auto& r = cycle.rounds[z];
            if (!r.backtrack_visited) continue;
            ++chains_seen;
            // Backtrack error implies the decode error at the same level.
            if (r.backtrack_err) CHECK(r.err);
            // Shared-uniform coupling: any larger rate also succeeds.
            if (!r.backtrack_err) {
                for (double rho2 : actions.values)
                    if (rho2 >= r.backtrack_rate)
                        CHECK(r.u >= model.backtrack(r.snr, rho2));
            }
        }
    }
    CHECK(chains_seen > 100);
}

TEST_CASE("duration estimator matches the geometric law") {
    const auto model = PerModel::synthetic(kR, 4.0).truncated(1e-6);
    const FadingChannel ch(kAvg15dB);
    const auto quad = Quadrature::build(ch, 256, 1e-6);
    const auto actions = ActionSet::uniform(kR, 8);
    const auto fo = FixedOutagePolicy::build(model, quad.nodes, 0.1, actions);

    SimConfig cfg(model, ch);
    cfg.scheme = Scheme::lharq;
    cfg.rounds = 3;
    cfg.fixed_policy = &fo;
    cfg.n_cycles = 200'000;
    cfg.seed = 12;

    const auto res = simulate(cfg);
    const double f1 = quad.expect_fn([&](double g) { return model.full(g); });
    const double expect_d = (1.0 - std::pow(f1, 3)) / (1.0 - f1);
    // 3 sigma on the duration mean.
    double var = 0.0;
    {
        double mean = res.report.expected_duration;
        double sum2 = 0.0;
        for (std::size_t k = 0; k < res.duration_counts.size(); ++k) {
            const double d = static_cast<double>(k + 1);
            sum2 += static_cast<double>(res.duration_counts[k]) * (d - mean) * (d - mean);
        }
        var = sum2 / (static_cast<double>(cfg.n_cycles) - 1.0);
    }
    const double se = std::sqrt(var / static_cast<double>(cfg.n_cycles));
    CHECK(std::abs(res.report.expected_duration - expect_d) <= 3.0 * se);
}

TEST_CASE("chi-square fit of the geometric duration law") {
    const auto model = PerModel::synthetic(kR, 4.0).truncated(1e-6);
    const FadingChannel ch(kAvg15dB);
    const auto quad = Quadrature::build(ch, 256, 1e-6);
    const auto actions = ActionSet::uniform(kR, 8);
    const auto fo = FixedOutagePolicy::build(model, quad.nodes, 0.1, actions);

    SimConfig cfg(model, ch);
    cfg.scheme = Scheme::lharq;
    cfg.rounds = 3;
    cfg.fixed_policy = &fo;
    cfg.n_cycles = 100'000;
    cfg.seed = 13;

    const auto res = simulate(cfg);
    const double f1 = quad.expect_fn([&](double g) { return model.full(g); });
    const double n = static_cast<double>(cfg.n_cycles);
    const std::vector<double> expected = {n * (1.0 - f1), n * f1 * (1.0 - f1), n * f1 * f1};
    double chi2 = 0.0;
    for (std::size_t k = 0; k < 3; ++k) {
        const double diff = static_cast<double>(res.duration_counts[k]) - expected[k];
        chi2 += diff * diff / expected[k];
    }
    CHECK(chi2 < 9.210340371976184);  // chi-square df=2, 1% significance
}

TEST_CASE("incremental redundancy: residual failures are non-increasing") {
    const auto model = PerModel::synthetic(kR, 4.0).truncated(1e-6);
    SimConfig cfg(model, FadingChannel(std::pow(10.0, 1.2)));
    cfg.scheme = Scheme::ir;
    cfg.rounds = 4;
    cfg.n_cycles = 50'000;
    cfg.seed = 14;
    const auto res = simulate(cfg);
    for (std::size_t k = 1; k < res.report.round_failure.size(); ++k)
        CHECK(res.report.round_failure[k] <= res.report.round_failure[k - 1]);
    CHECK(res.report.f1 == res.report.round_failure[0]);
}

TEST_CASE("full-rate policy simulation agrees with the analytic value") {
    const auto model = PerModel::synthetic(kR, 4.0).truncated(1e-6);
    const FadingChannel ch(kAvg15dB);
    const auto quad = Quadrature::build(ch, 256, 1e-6);
    const auto actions = ActionSet::uniform(kR, 2);
    // All table entries pick the full rate.
    Policy policy = test::manual_policy_k2(Scheme::lharq, actions,
                                           std::vector<double>(quad.nodes.begin(), quad.nodes.end()),
                                           std::vector<std::uint16_t>(quad.size(), 1));
    const auto analytic = lharq_throughput(policy, model, quad);

    SimConfig cfg(model, ch);
    cfg.scheme = Scheme::lharq;
    cfg.rounds = 2;
    cfg.policy = &policy;
    cfg.n_cycles = 400'000;
    cfg.seed = 15;
    const auto res = simulate(cfg);
    CHECK(std::abs(res.report.eta - analytic.eta) <= 3.0 * res.report.ci_halfwidth / 1.96);
}

TEST_CASE("trace CSV dump") {
    const auto model = PerModel::synthetic(kR, 4.0).truncated(1e-6);
    SimConfig cfg(model, FadingChannel(kAvg15dB));
    cfg.scheme = Scheme::ir;
    cfg.rounds = 2;
    cfg.n_cycles = 10;
    cfg.seed = 16;
    cfg.n_shards = 1;
    cfg.retain_traces = true;
    const auto res = simulate(cfg);
    std::ostringstream out;
    write_trace_csv(out, res.traces);
    const std::string text = out.str();
    CHECK(text.rfind("cycle,round,snr,rho,err,err_backtrack,reward,duration\n", 0) == 0);
    std::size_t lines = 0;
    for (char c : text)
        if (c == '\n') ++lines;
    std::size_t rows = 0;
    for (const auto& t : res.traces) rows += t.rounds.size();
    CHECK(lines == rows + 1);
}

TEST_CASE("config validation") {
    const auto model = PerModel::synthetic(kR, 4.0);
    SimConfig cfg(model, FadingChannel(1.0));
    cfg.scheme = Scheme::lharq;
    cfg.rounds = 2;  // needs a policy
    CHECK_THROWS_AS(simulate(cfg), std::domain_error);
    cfg.rounds = 0;
    CHECK_THROWS_AS(simulate(cfg), std::domain_error);
}
