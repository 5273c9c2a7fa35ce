#include <doctest.h>

#include <cmath>
#include <string_view>
#include <vector>

#include "lharq/kernels.hpp"
#include "lharq/rng.hpp"

using namespace lharq;

namespace {

std::vector<double> random_vec(Rng& rng, std::size_t n, double lo, double hi) {
    std::vector<double> v(n);
    for (auto& x : v) x = lo + (hi - lo) * rng.uniform();
    return v;
}

const std::size_t kSizes[] = {0, 1, 2, 3, 4, 5, 7, 8, 9, 16, 63, 64, 65, 257};

}  // namespace

TEST_CASE("dispatch resolves to a known backend") {
    const char* name = kernels::active_backend();
    const bool known = std::string_view(name) == "scalar" || std::string_view(name) == "avx2";
    CHECK(known);
#if defined(__x86_64__)
    if (kernels::avx2_available()) CHECK(std::string_view(name) == "avx2");
#endif
}

#if defined(__x86_64__)

TEST_CASE("avx2 dot agrees with scalar dot up to rounding") {
    if (!kernels::avx2_available()) return;
    Rng rng(11);
    for (std::size_t n : kSizes) {
        auto a = random_vec(rng, n, -2.0, 2.0);
        auto b = random_vec(rng, n, -1.0, 3.0);
        const double s = kernels::scalar::dot(a.data(), b.data(), n);
        const double v = kernels::avx2::dot(a.data(), b.data(), n);
        CHECK(std::abs(s - v) <= 1e-12 * (1.0 + std::abs(s)));
    }
}

TEST_CASE("avx2 elementwise kernels match scalar bit for bit") {
    if (!kernels::avx2_available()) return;
    Rng rng(12);
    for (std::size_t n : kSizes) {
        auto x = random_vec(rng, n, -5.0, 5.0);
        const double a = 2.0 * rng.uniform() - 1.0;
        const double b = 2.0 * rng.uniform() - 1.0;

        auto ys = random_vec(rng, n, -1.0, 1.0);
        auto yv = ys;
        kernels::scalar::axpy(a, x.data(), ys.data(), n);
        kernels::avx2::axpy(a, x.data(), yv.data(), n);
        for (std::size_t i = 0; i < n; ++i) CHECK(ys[i] == yv[i]);

        std::vector<double> zs(n), zv(n);
        kernels::scalar::affine(a, x.data(), b, zs.data(), n);
        kernels::avx2::affine(a, x.data(), b, zv.data(), n);
        for (std::size_t i = 0; i < n; ++i) CHECK(zs[i] == zv[i]);
    }
}

TEST_CASE("avx2 lerp_affine_add matches scalar bit for bit") {
    if (!kernels::avx2_available()) return;
    Rng rng(13);
    for (std::size_t n : kSizes) {
        for (std::size_t m : {std::size_t{1}, std::size_t{2}, std::size_t{5}, std::size_t{64}}) {
            auto grid = random_vec(rng, n, -1.0, 9.0);
            auto table = random_vec(rng, m, -3.0, 3.0);
            auto base = random_vec(rng, n, -1.0, 1.0);
            const double t0 = -0.5;
            const double inv_dt = 1.25;
            const double alpha = 2.0 * rng.uniform() - 1.0;
            const double beta = 4.0 * rng.uniform() - 2.0;
            const double gain = 2.0 * rng.uniform();
            std::vector<double> os(n), ov(n);
            kernels::scalar::lerp_affine_add(grid.data(), n, alpha, beta, table.data(), m, t0,
                                             inv_dt, base.data(), gain, os.data());
            kernels::avx2::lerp_affine_add(grid.data(), n, alpha, beta, table.data(), m, t0,
                                           inv_dt, base.data(), gain, ov.data());
            for (std::size_t i = 0; i < n; ++i) CHECK(os[i] == ov[i]);
        }
    }
}

#endif  // x86-64

TEST_CASE("lerp_affine_add interpolates, clamps and reproduces nodes") {
    // table: f(t) = 3 - t on t = 0, 1, 2, 3
    const std::vector<double> table = {3.0, 2.0, 1.0, 0.0};
    const std::vector<double> grid = {-10.0, 0.0, 0.5, 1.0, 2.25, 3.0, 50.0};
    const std::vector<double> base(grid.size(), 1.0);
    std::vector<double> out(grid.size());
    kernels::scalar::lerp_affine_add(grid.data(), grid.size(), 1.0, 0.0, table.data(),
                                     table.size(), 0.0, 1.0, base.data(), 2.0, out.data());
    CHECK(out[0] == doctest::Approx(1.0 + 2.0 * 3.0));  // clamped low
    CHECK(out[1] == doctest::Approx(7.0));
    CHECK(out[2] == doctest::Approx(1.0 + 2.0 * 2.5));
    CHECK(out[3] == doctest::Approx(5.0));
    CHECK(out[4] == doctest::Approx(1.0 + 2.0 * 0.75));
    CHECK(out[5] == doctest::Approx(1.0));
    CHECK(out[6] == doctest::Approx(1.0));  // clamped high
}

TEST_CASE("affine transform of the query point") {
    const std::vector<double> table = {0.0, 10.0};  // f(t) = 10 t on [0, 1]
    const std::vector<double> grid = {1.0, 2.0};
    const std::vector<double> base = {0.0, 0.0};
    std::vector<double> out(2);
    // x = 0.25 g + 0.25 -> 0.5 and 0.75
    kernels::scalar::lerp_affine_add(grid.data(), 2, 0.25, 0.25, table.data(), 2, 0.0, 1.0,
                                     base.data(), 1.0, out.data());
    CHECK(out[0] == doctest::Approx(5.0));
    CHECK(out[1] == doctest::Approx(7.5));
}
