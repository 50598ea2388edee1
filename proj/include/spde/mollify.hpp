#pragma once

#include <array>

#include "spde/grid.hpp"

namespace spde {

/// Uniform-cone data for the boundary-compatible shifted convolution. The
/// admissible shift range is kappa in (0, kappa_C) with
/// kappa_C = h_C / (1 + sin(theta_C / 2)), and the kernel radius is
/// eta(kappa) = kappa sin(theta_C / 2) < kappa.
struct ConeSpec {
    double angle;     // theta_C in (0, pi)
    double height;    // h_C > 0
    std::array<double, 2> axis{1.0, 0.0}; // unit axis (outward, paper convention)

    double kappa_max() const;
};

/// Cone defaults that make every node of the shipped domains admissible:
/// interval (0,1) with theta = pi/2, h = 1/2; unit square with theta = pi/3,
/// h = 1/2 (the diagonal inward shift needs sin(theta/2) < 1/sqrt(2)).
ConeSpec interval_cone();
ConeSpec square_cone();

/// eta(kappa) = kappa sin(theta_C/2); kappa must lie in (0, kappa_C).
double eta(double kappa, const ConeSpec& cone);

/// Mass of the scaled bump rho_kappa over B(0, eta(kappa)) by midpoint
/// quadrature with `panels` points per axis; equals 1 up to quadrature error.
double kernel_mass(double kappa, const ConeSpec& cone, int dimension = 1,
                   int panels = 256);

/// f^kappa(x) = int_B(0,eta) f(x - kappa e - y) rho_kappa(y) dy on every node,
/// with f extended by zero. The sampled region of every node must stay inside
/// the domain; a violation throws GeometryError naming the node. e follows the
/// paper's outward-axis convention (the shift applied is -kappa e).
GridFunction1D mollify_shifted(const GridFunction1D& f, double kappa, double e,
                               const ConeSpec& cone);

/// Same, but shifting each node toward the interior (per-face inward rule):
/// nodes in the left half shift right and vice versa. Valid on the whole
/// closed interval for any kappa < kappa_C.
GridFunction1D mollify_shifted_inward(const GridFunction1D& f, double kappa,
                                      const ConeSpec& cone);

GridFunction2D mollify_shifted_inward(const GridFunction2D& f, double kappa,
                                      const ConeSpec& cone);

/// True when x - kappa e - B(0, eta) lies inside the (closed) domain.
bool shift_contained(const Domain1D& domain, double x, double kappa, double e,
                     const ConeSpec& cone);
bool shift_contained(const Domain2D& domain, double x, double y, double kappa,
                     const std::array<double, 2>& e, const ConeSpec& cone);

} // namespace spde
