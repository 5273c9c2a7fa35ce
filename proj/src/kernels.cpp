#include "lharq/kernels.hpp"

#include <cstdlib>
#include <cstring>

#include "kernels_detail.hpp"

namespace lharq::kernels {

namespace scalar {

double dot(const double* a, const double* b, std::size_t n) noexcept {
    double acc = 0.0;
    for (std::size_t i = 0; i < n; ++i) acc += a[i] * b[i];
    return acc;
}

void axpy(double a, const double* x, double* y, std::size_t n) noexcept {
    for (std::size_t i = 0; i < n; ++i) y[i] += a * x[i];
}

void affine(double a, const double* x, double b, double* y, std::size_t n) noexcept {
    for (std::size_t i = 0; i < n; ++i) y[i] = a * x[i] + b;
}

void lerp_affine_add(const double* grid, std::size_t n, double alpha, double beta,
                     const double* table, std::size_t m, double t0, double inv_dt,
                     const double* base, double gain, double* out) noexcept {
    const double t_hi = t0 + static_cast<double>(m - 1) / inv_dt;
    for (std::size_t j = 0; j < n; ++j) {
        out[j] = detail::lerp_affine_add_one(grid[j], alpha, beta, table, m, t0, t_hi, inv_dt,
                                             base[j], gain);
    }
}

}  // namespace scalar

bool avx2_available() noexcept {
#if defined(__x86_64__) || defined(_M_X64)
    return __builtin_cpu_supports("avx2");
#else
    return false;
#endif
}

namespace {

struct Dispatch {
    double (*dot)(const double*, const double*, std::size_t) noexcept;
    void (*axpy)(double, const double*, double*, std::size_t) noexcept;
    void (*affine)(double, const double*, double, double*, std::size_t) noexcept;
    void (*lerp_affine_add)(const double*, std::size_t, double, double, const double*,
                            std::size_t, double, double, const double*, double,
                            double*) noexcept;
    const char* name;
};

constexpr Dispatch kScalar{scalar::dot, scalar::axpy, scalar::affine, scalar::lerp_affine_add,
                           "scalar"};

#if defined(__x86_64__) || defined(_M_X64)
constexpr Dispatch kAvx2{avx2::dot, avx2::axpy, avx2::affine, avx2::lerp_affine_add, "avx2"};
#endif

const Dispatch& select_backend() noexcept {
    const char* pin = std::getenv("LHARQ_KERNELS");
    if (pin != nullptr && std::strcmp(pin, "scalar") == 0) return kScalar;
#if defined(__x86_64__) || defined(_M_X64)
    if (pin != nullptr && std::strcmp(pin, "avx2") == 0) return kAvx2;
    if (avx2_available()) return kAvx2;
#endif
    return kScalar;
}

const Dispatch& active() noexcept {
    static const Dispatch& backend = select_backend();
    return backend;
}

}  // namespace

const char* active_backend() noexcept { return active().name; }

double dot(const double* a, const double* b, std::size_t n) noexcept {
    return active().dot(a, b, n);
}

void axpy(double a, const double* x, double* y, std::size_t n) noexcept {
    active().axpy(a, x, y, n);
}

void affine(double a, const double* x, double b, double* y, std::size_t n) noexcept {
    active().affine(a, x, b, y, n);
}

void lerp_affine_add(const double* grid, std::size_t n, double alpha, double beta,
                     const double* table, std::size_t m, double t0, double inv_dt,
                     const double* base, double gain, double* out) noexcept {
    active().lerp_affine_add(grid, n, alpha, beta, table, m, t0, inv_dt, base, gain, out);
}

}  // namespace lharq::kernels
