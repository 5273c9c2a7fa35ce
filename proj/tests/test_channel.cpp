#include <doctest.h>

#include <algorithm>
#include <cmath>
#include <span>
#include <vector>

#include "lharq/channel.hpp"
#include "lharq/per_model.hpp"
#include "lharq/rng.hpp"

using namespace lharq;

TEST_CASE("sampling: mean, CDF point, determinism") {
    const FadingChannel ch(1.0);
    Rng rng(7);
    const std::size_t n = 1'000'000;
    double sum = 0.0;
    std::size_t below_mean = 0;
    for (std::size_t i = 0; i < n; ++i) {
        const double s = ch.sample(rng);
        sum += s;
        if (s < 1.0) ++below_mean;
    }
    CHECK(sum / n == doctest::Approx(1.0).epsilon(0.01));
    CHECK(static_cast<double>(below_mean) / n ==
          doctest::Approx(1.0 - std::exp(-1.0)).epsilon(0.005));

    // Identical sequences for identical seeds.
    Rng a(123), b(123);
    const FadingChannel ch15(std::pow(10.0, 1.5));
    for (int i = 0; i < 100; ++i) CHECK(ch15.sample(a) == ch15.sample(b));
}

TEST_CASE("sampling: 15 dB mean CDF check") {
    const FadingChannel ch(31.622776601683793);
    Rng rng(9);
    const std::size_t n = 1'000'000;
    std::size_t below = 0;
    for (std::size_t i = 0; i < n; ++i)
        if (ch.sample(rng) < ch.avg_snr()) ++below;
    CHECK(static_cast<double>(below) / n ==
          doctest::Approx(1.0 - std::exp(-1.0)).epsilon(0.005));
}

TEST_CASE("empirical CDF passes a Kolmogorov-Smirnov check") {
    const FadingChannel ch(3.7);
    Rng rng(20240915);
    const std::size_t n = 100'000;
    std::vector<double> draws(n);
    for (auto& d : draws) d = ch.sample(rng);
    std::sort(draws.begin(), draws.end());
    double dmax = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
        const double f = ch.cdf(draws[i]);
        dmax = std::max(dmax, std::abs((i + 1.0) / n - f));
        dmax = std::max(dmax, std::abs(f - static_cast<double>(i) / n));
    }
    // 1% significance: c(0.01) / sqrt(n) with c = 1.628.
    CHECK(dmax < 1.628 / std::sqrt(static_cast<double>(n)));
}

TEST_CASE("quadrature: constants and the mean are exact, weights sum to one") {
    const FadingChannel ch(1.0);
    const auto q = Quadrature::build(ch, 512, 1e-6);
    CHECK(q.size() == 513);
    CHECK(std::is_sorted(q.nodes.begin(), q.nodes.end()));

    double wsum = 0.0;
    for (double w : q.weights) {
        CHECK(w >= 0.0);
        wsum += w;
    }
    CHECK(std::abs(wsum - 1.0) <= 1e-9);

    CHECK(q.expect_fn([](double) { return 1.0; }) == doctest::Approx(1.0).epsilon(1e-12));
    // The rule integrates piecewise-linear functions exactly and the tail
    // node sits at the conditional tail mean, so the mean comes out exact,
    // far inside the 1e-3 budget.
    const double mean = q.expect_fn([](double g) { return g; });
    CHECK(mean == doctest::Approx(1.0).epsilon(1e-3));
    CHECK(mean == doctest::Approx(1.0).epsilon(1e-9));
}

TEST_CASE("quadrature expectation of the PER matches Monte Carlo") {
    const double avg = 31.622776601683793;  // 15 dB
    const FadingChannel ch(avg);
    const auto model = PerModel::synthetic(3.75, 4.0);
    const auto q = Quadrature::build(ch, 512, 1e-6);
    const double quad_value = q.expect_fn([&](double g) { return model.full(g); });

    Rng rng(3);
    const std::size_t n = 10'000'000;
    double sum = 0.0, sum2 = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
        const double p = model.full(ch.sample(rng));
        sum += p;
        sum2 += p * p;
    }
    const double mc = sum / n;
    const double var = (sum2 - n * mc * mc) / (n - 1.0);
    const double se = std::sqrt(var / n);
    CHECK(std::abs(quad_value - mc) <= 3.0 * se);
}

TEST_CASE("quadrature vs Monte Carlo: randomized PER parameters") {
    Rng rng(4242);
    for (int trial = 0; trial < 5; ++trial) {
        const double avg = std::pow(10.0, 0.5 + 2.0 * rng.uniform());
        const double rate = 1.0 + 4.0 * rng.uniform();
        const double decay = 2.0 + 6.0 * rng.uniform();
        const FadingChannel ch(avg);
        const auto model = PerModel::synthetic(rate, decay);
        const auto q = Quadrature::build(ch, 512, 1e-6);
        const double quad_value = q.expect_fn([&](double g) { return model.full(g); });

        const std::size_t n = 400'000;
        double sum = 0.0, sum2 = 0.0;
        for (std::size_t i = 0; i < n; ++i) {
            const double p = model.full(ch.sample(rng));
            sum += p;
            sum2 += p * p;
        }
        const double mc = sum / n;
        const double var = (sum2 - n * mc * mc) / (n - 1.0);
        const double se = std::sqrt(std::max(var, 1e-30) / n);
        CHECK(std::abs(quad_value - mc) <= std::max(3.0 * se, 1e-6));
    }
}

TEST_CASE("quadrature rejects bad arguments") {
    const FadingChannel ch(1.0);
    CHECK_THROWS_AS(Quadrature::build(ch, 1, 1e-6), std::invalid_argument);
    CHECK_THROWS_AS(Quadrature::build(ch, 16, 0.0), std::invalid_argument);
    CHECK_THROWS_AS(Quadrature::build(ch, 16, 1.0), std::invalid_argument);
    CHECK_THROWS_AS(FadingChannel(0.0), std::invalid_argument);
    CHECK_THROWS_AS(FadingChannel(-2.0), std::invalid_argument);
}

TEST_CASE("aggregate SNR") {
    const std::vector<double> one = {3.3};
    CHECK(aggregate_snr(one) == doctest::Approx(3.3));
    const std::vector<double> two = {1.0, 1.0};
    CHECK(aggregate_snr(two) == doctest::Approx(3.0));
    const std::vector<double> zero = {3.0, 0.0};
    CHECK(aggregate_snr(zero) == doctest::Approx(3.0));

    const std::vector<double> empty;
    CHECK_THROWS_AS(aggregate_snr(empty), std::invalid_argument);

    Rng rng(5);
    for (int t = 0; t < 100; ++t) {
        std::vector<double> xs(1 + static_cast<std::size_t>(rng.uniform() * 5));
        double top = 0.0;
        for (auto& x : xs) {
            x = rng.uniform() * 10.0;
            top = std::max(top, x);
        }
        CHECK(aggregate_snr(xs) >= top - 1e-12);
    }
}
