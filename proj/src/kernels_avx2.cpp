#if defined(__x86_64__) || defined(_M_X64)

#include <immintrin.h>

#include "lharq/kernels.hpp"
#include "kernels_detail.hpp"

// AVX2 variants. No FMA: each lane performs the same mul/add sequence as the
// scalar reference, so the elementwise kernels match it bit for bit.

namespace lharq::kernels::avx2 {

double dot(const double* a, const double* b, std::size_t n) noexcept {
    const std::size_t n4 = n & ~std::size_t{3};
    __m256d acc = _mm256_setzero_pd();
    for (std::size_t i = 0; i < n4; i += 4) {
        const __m256d va = _mm256_loadu_pd(a + i);
        const __m256d vb = _mm256_loadu_pd(b + i);
        acc = _mm256_add_pd(acc, _mm256_mul_pd(va, vb));
    }
    const __m128d lo = _mm256_castpd256_pd128(acc);
    const __m128d hi = _mm256_extractf128_pd(acc, 1);
    const __m128d sum2 = _mm_add_pd(lo, hi);
    double s = _mm_cvtsd_f64(_mm_add_sd(sum2, _mm_unpackhi_pd(sum2, sum2)));
    for (std::size_t i = n4; i < n; ++i) s += a[i] * b[i];
    return s;
}

void axpy(double a, const double* x, double* y, std::size_t n) noexcept {
    const std::size_t n4 = n & ~std::size_t{3};
    const __m256d va = _mm256_set1_pd(a);
    for (std::size_t i = 0; i < n4; i += 4) {
        const __m256d vy = _mm256_loadu_pd(y + i);
        const __m256d vx = _mm256_loadu_pd(x + i);
        _mm256_storeu_pd(y + i, _mm256_add_pd(vy, _mm256_mul_pd(va, vx)));
    }
    for (std::size_t i = n4; i < n; ++i) y[i] += a * x[i];
}

void affine(double a, const double* x, double b, double* y, std::size_t n) noexcept {
    const std::size_t n4 = n & ~std::size_t{3};
    const __m256d va = _mm256_set1_pd(a);
    const __m256d vb = _mm256_set1_pd(b);
    for (std::size_t i = 0; i < n4; i += 4) {
        const __m256d vx = _mm256_loadu_pd(x + i);
        _mm256_storeu_pd(y + i, _mm256_add_pd(_mm256_mul_pd(va, vx), vb));
    }
    for (std::size_t i = n4; i < n; ++i) y[i] = a * x[i] + b;
}

void lerp_affine_add(const double* grid, std::size_t n, double alpha, double beta,
                     const double* table, std::size_t m, double t0, double inv_dt,
                     const double* base, double gain, double* out) noexcept {
    const double t_hi = t0 + static_cast<double>(m - 1) / inv_dt;
    std::size_t j = 0;
    if (m >= 2) {
        const __m256d valpha = _mm256_set1_pd(alpha);
        const __m256d vbeta = _mm256_set1_pd(beta);
        const __m256d vt0 = _mm256_set1_pd(t0);
        const __m256d vthi = _mm256_set1_pd(t_hi);
        const __m256d vinv = _mm256_set1_pd(inv_dt);
        const __m256d vidx_max = _mm256_set1_pd(static_cast<double>(m - 2));
        const __m256d vgain = _mm256_set1_pd(gain);
        const std::size_t n4 = n & ~std::size_t{3};
        for (; j < n4; j += 4) {
            const __m256d g = _mm256_loadu_pd(grid + j);
            __m256d x = _mm256_add_pd(_mm256_mul_pd(valpha, g), vbeta);
            x = _mm256_min_pd(_mm256_max_pd(x, vt0), vthi);
            const __m256d u = _mm256_mul_pd(_mm256_sub_pd(x, vt0), vinv);
            const __m256d idx_d = _mm256_min_pd(_mm256_floor_pd(u), vidx_max);
            const __m256d frac = _mm256_sub_pd(u, idx_d);
            const __m128i idx = _mm256_cvttpd_epi32(idx_d);
            const __m256d y0 = _mm256_i32gather_pd(table, idx, 8);
            const __m256d y1 = _mm256_i32gather_pd(table + 1, idx, 8);
            const __m256d lv = _mm256_add_pd(y0, _mm256_mul_pd(frac, _mm256_sub_pd(y1, y0)));
            const __m256d res =
                _mm256_add_pd(_mm256_loadu_pd(base + j), _mm256_mul_pd(vgain, lv));
            _mm256_storeu_pd(out + j, res);
        }
    }
    for (; j < n; ++j) {
        out[j] = detail::lerp_affine_add_one(grid[j], alpha, beta, table, m, t0, t_hi, inv_dt,
                                             base[j], gain);
    }
}

}  // namespace lharq::kernels::avx2

#endif  // x86-64
