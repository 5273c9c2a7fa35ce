#pragma once

#include <algorithm>
#include <cmath>
#include <cstddef>

// Shared single-element helpers. Both the scalar and the AVX2 translation
// units funnel their remainders through these so that every backend performs
// the exact same per-element arithmetic.

namespace lharq::kernels::detail {

inline double lerp_uniform_one(double x, const double* table, std::size_t m, double t0,
                               double t_hi, double inv_dt) noexcept {
    if (m == 1) return table[0];
    x = std::min(std::max(x, t0), t_hi);
    const double u = (x - t0) * inv_dt;
    std::size_t idx = static_cast<std::size_t>(std::floor(u));
    if (idx > m - 2) idx = m - 2;
    const double frac = u - static_cast<double>(idx);
    return table[idx] + frac * (table[idx + 1] - table[idx]);
}

inline double lerp_affine_add_one(double g, double alpha, double beta, const double* table,
                                  std::size_t m, double t0, double t_hi, double inv_dt,
                                  double base, double gain) noexcept {
    const double x = alpha * g + beta;
    return base + gain * lerp_uniform_one(x, table, m, t0, t_hi, inv_dt);
}

}  // namespace lharq::kernels::detail
