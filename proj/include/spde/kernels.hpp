#pragma once

#include <cstddef>
#include <span>
#include <string>

// Data-parallel inner loops of the lab: face-flux sweeps, Dirichlet stencils,
// elementwise updates and the reductions behind every norm and integral.
// Scalar reference implementations live in kernels::scalar and are the ground
// truth; the dispatched entry points pick AVX2 (x86, runtime cpuid check) or
// NEON (aarch64) when available. Equivalence is covered in test_kernels.
//
// Elementwise kernels match the scalar reference bit-for-bit (same operation
// order, no FMA contraction). Reductions use lane-wise partial sums, so they
// may differ from the scalar reference in the last bits; tests bound that.

namespace spde::kernels {

enum class Isa { scalar, avx2, neon };

/// Instruction set selected at startup (overridable via SPDE_KERNEL_ISA=scalar).
Isa active_isa();
std::string isa_name(Isa isa);

namespace scalar {

double sum(std::span<const double> x);
double sum_sq(std::span<const double> x);
double dot(std::span<const double> x, std::span<const double> y);
double sum_abs_diff(std::span<const double> x, std::span<const double> y);
double sum_sq_diff(std::span<const double> x, std::span<const double> y);
double sum_pos_diff(std::span<const double> x, std::span<const double> y);
double max_abs(std::span<const double> x);

void axpy(double a, std::span<const double> x, std::span<double> y);
void scale(double a, std::span<double> x);

/// out[i] = (w[i-1] - 2 w[i] + w[i+1]) * inv_dx2 for the interior of an
/// extended array w of size n+2 (ghost cells included); out has size n.
void laplacian_dirichlet0(std::span<const double> w_ext, std::span<double> out,
                          double inv_dx2);

/// Engquist-Osher face fluxes for F(u) = c u on an extended state of size n+2;
/// writes n+1 face values: flux[j] = H(u_ext[j], u_ext[j+1]).
void eo_flux_linear(double c, std::span<const double> u_ext, std::span<double> flux);

/// Engquist-Osher face fluxes for Burgers F(u) = u^2/2 clamped to Lipschitz
/// constant M outside [-M, M] (F' = clamp(u, -M, M)).
void eo_flux_burgers(double clamp_m, std::span<const double> u_ext,
                     std::span<double> flux);

/// Engquist-Osher face fluxes for the mirrored conservation flux -F with F the
/// clamped Burgers flux: flux[j] = -(F-(u_ext[j]) + F+(u_ext[j+1])). This is
/// the convective flux of an equation transporting along +div F.
void eo_flux_burgers_mirror(double clamp_m, std::span<const double> u_ext,
                            std::span<double> flux);

} // namespace scalar

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

} // namespace spde::kernels
