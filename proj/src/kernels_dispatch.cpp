#include "spde/kernels.hpp"

#include <cstdlib>
#include <cstring>

#include "kernels_simd.hpp"

namespace spde::kernels {

namespace {

Isa detect_isa() {
    if (const char* env = std::getenv("SPDE_KERNEL_ISA")) {
        if (std::strcmp(env, "scalar") == 0) return Isa::scalar;
#ifdef SPDE_WITH_AVX2
        if (std::strcmp(env, "avx2") == 0 && __builtin_cpu_supports("avx2"))
            return Isa::avx2;
#endif
#ifdef SPDE_WITH_NEON
        if (std::strcmp(env, "neon") == 0) return Isa::neon;
#endif
        return Isa::scalar;
    }
#ifdef SPDE_WITH_AVX2
    if (__builtin_cpu_supports("avx2")) return Isa::avx2;
#endif
#ifdef SPDE_WITH_NEON
    return Isa::neon;
#else
    return Isa::scalar;
#endif
}

const Isa g_isa = detect_isa();

} // namespace

Isa active_isa() { return g_isa; }

std::string isa_name(Isa isa) {
    switch (isa) {
        case Isa::avx2: return "avx2";
        case Isa::neon: return "neon";
        default: return "scalar";
    }
}

#if defined(SPDE_WITH_AVX2)
#define SPDE_DISPATCH(fn, ...)                               \
    do {                                                     \
        if (g_isa == Isa::avx2) return avx2::fn(__VA_ARGS__); \
        return scalar::fn(__VA_ARGS__);                      \
    } while (0)
#elif defined(SPDE_WITH_NEON)
#define SPDE_DISPATCH(fn, ...)                               \
    do {                                                     \
        if (g_isa == Isa::neon) return neon::fn(__VA_ARGS__); \
        return scalar::fn(__VA_ARGS__);                      \
    } while (0)
#else
#define SPDE_DISPATCH(fn, ...) return scalar::fn(__VA_ARGS__)
#endif

double sum(std::span<const double> x) { SPDE_DISPATCH(sum, x); }
double sum_sq(std::span<const double> x) { SPDE_DISPATCH(sum_sq, x); }
double dot(std::span<const double> x, std::span<const double> y) {
    SPDE_DISPATCH(dot, x, y);
}
double sum_abs_diff(std::span<const double> x, std::span<const double> y) {
    SPDE_DISPATCH(sum_abs_diff, x, y);
}
double sum_sq_diff(std::span<const double> x, std::span<const double> y) {
    SPDE_DISPATCH(sum_sq_diff, x, y);
}
double sum_pos_diff(std::span<const double> x, std::span<const double> y) {
    SPDE_DISPATCH(sum_pos_diff, x, y);
}
double max_abs(std::span<const double> x) { SPDE_DISPATCH(max_abs, x); }
void axpy(double a, std::span<const double> x, std::span<double> y) {
    SPDE_DISPATCH(axpy, a, x, y);
}
void scale(double a, std::span<double> x) { SPDE_DISPATCH(scale, a, x); }
void laplacian_dirichlet0(std::span<const double> w_ext, std::span<double> out,
                          double inv_dx2) {
    SPDE_DISPATCH(laplacian_dirichlet0, w_ext, out, inv_dx2);
}
void eo_flux_linear(double c, std::span<const double> u_ext, std::span<double> flux) {
    SPDE_DISPATCH(eo_flux_linear, c, u_ext, flux);
}
void eo_flux_burgers(double clamp_m, std::span<const double> u_ext,
                     std::span<double> flux) {
    SPDE_DISPATCH(eo_flux_burgers, clamp_m, u_ext, flux);
}
void eo_flux_burgers_mirror(double clamp_m, std::span<const double> u_ext,
                            std::span<double> flux) {
    SPDE_DISPATCH(eo_flux_burgers_mirror, clamp_m, u_ext, flux);
}

#undef SPDE_DISPATCH

} // namespace spde::kernels
