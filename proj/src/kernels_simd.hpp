#pragma once

#include <span>

// Internal declarations for the ISA-specific kernel translation units.
// kernels_avx2.cpp is compiled with -mavx2 and must only be entered after the
// runtime cpuid check in kernels_dispatch.cpp.

namespace spde::kernels {

#ifdef SPDE_WITH_AVX2
namespace avx2 {
double sum(std::span<const double> x);
double sum_sq(std::span<const double> x);
double dot(std::span<const double> x, std::span<const double> y);
double sum_abs_diff(std::span<const double> x, std::span<const double> y);
double sum_sq_diff(std::span<const double> x, std::span<const double> y);
double sum_pos_diff(std::span<const double> x, std::span<const double> y);
double max_abs(std::span<const double> x);
void axpy(double a, std::span<const double> x, std::span<double> y);
void scale(double a, std::span<double> x);
void laplacian_dirichlet0(std::span<const double> w_ext, std::span<double> out,
                          double inv_dx2);
void eo_flux_linear(double c, std::span<const double> u_ext, std::span<double> flux);
void eo_flux_burgers(double clamp_m, std::span<const double> u_ext,
                     std::span<double> flux);
void eo_flux_burgers_mirror(double clamp_m, std::span<const double> u_ext,
                            std::span<double> flux);
} // namespace avx2
#endif

#ifdef SPDE_WITH_NEON
namespace neon {
double sum(std::span<const double> x);
double sum_sq(std::span<const double> x);
double dot(std::span<const double> x, std::span<const double> y);
double sum_abs_diff(std::span<const double> x, std::span<const double> y);
double sum_sq_diff(std::span<const double> x, std::span<const double> y);
double sum_pos_diff(std::span<const double> x, std::span<const double> y);
double max_abs(std::span<const double> x);
void axpy(double a, std::span<const double> x, std::span<double> y);
void scale(double a, std::span<double> x);
void laplacian_dirichlet0(std::span<const double> w_ext, std::span<double> out,
                          double inv_dx2);
void eo_flux_linear(double c, std::span<const double> u_ext, std::span<double> flux);
void eo_flux_burgers(double clamp_m, std::span<const double> u_ext,
                     std::span<double> flux);
void eo_flux_burgers_mirror(double clamp_m, std::span<const double> u_ext,
                            std::span<double> flux);
} // namespace neon
#endif

} // namespace spde::kernels
