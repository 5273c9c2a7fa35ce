#pragma once

#include <cstddef>

// Double-precision inner-loop kernels shared by the quadrature expectations
// and the backward value sweeps. kernels::scalar holds the reference
// implementations; kernels::avx2 holds the vectorized variants (x86-64
// builds only). The unqualified entry points dispatch once, on first use,
// based on the CPU feature set. Set LHARQ_KERNELS=scalar (or =avx2) in the
// environment to pin the backend.
//
// The elementwise kernels (axpy, affine, lerp_affine_add) produce
// bit-identical results on every backend: both paths evaluate the same IEEE
// operations per element and the translation units are built with FP
// contraction disabled. dot reassociates the accumulation and agrees only up
// to rounding.

namespace lharq::kernels {

// True when the running CPU supports the AVX2 variants.
bool avx2_available() noexcept;

// Name of the backend the dispatched entry points resolve to.
const char* active_backend() noexcept;

// sum_i a[i] * b[i]
double dot(const double* a, const double* b, std::size_t n) noexcept;

// y[i] += a * x[i]
void axpy(double a, const double* x, double* y, std::size_t n) noexcept;

// y[i] = a * x[i] + b
void affine(double a, const double* x, double b, double* y, std::size_t n) noexcept;

// out[j] = base[j] + gain * interp(table, alpha * grid[j] + beta)
//
// `table` samples a function on the uniform grid t0 + i / inv_dt,
// i = 0..m-1; interp is piecewise linear with query points clamped to the
// table span. m must be >= 1.
void lerp_affine_add(const double* grid, std::size_t n, double alpha, double beta,
                     const double* table, std::size_t m, double t0, double inv_dt,
                     const double* base, double gain, double* out) noexcept;

namespace scalar {
double dot(const double* a, const double* b, std::size_t n) noexcept;
void axpy(double a, const double* x, double* y, std::size_t n) noexcept;
void affine(double a, const double* x, double b, double* y, std::size_t n) noexcept;
void lerp_affine_add(const double* grid, std::size_t n, double alpha, double beta,
                     const double* table, std::size_t m, double t0, double inv_dt,
                     const double* base, double gain, double* out) noexcept;
}  // namespace scalar

#if defined(__x86_64__) || defined(_M_X64)
namespace avx2 {
double dot(const double* a, const double* b, std::size_t n) noexcept;
void axpy(double a, const double* x, double* y, std::size_t n) noexcept;
void affine(double a, const double* x, double b, double* y, std::size_t n) noexcept;
void lerp_affine_add(const double* grid, std::size_t n, double alpha, double beta,
                     const double* table, std::size_t m, double t0, double inv_dt,
                     const double* base, double gain, double* out) noexcept;
}  // namespace avx2
#endif

}  // namespace lharq::kernels
