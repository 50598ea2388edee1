#include "spde/kernels.hpp"

#include <algorithm>
#include <cmath>

namespace spde::kernels::scalar {

double sum(std::span<const double> x) {
    double s = 0.0;
    for (double v : x) s += v;
    return s;
}

double sum_sq(std::span<const double> x) {
    double s = 0.0;
    for (double v : x) s += v * v;
    return s;
}

double dot(std::span<const double> x, std::span<const double> y) {
    double s = 0.0;
    for (std::size_t i = 0; i < x.size(); ++i) s += x[i] * y[i];
    return s;
}

double sum_abs_diff(std::span<const double> x, std::span<const double> y) {
    double s = 0.0;
    for (std::size_t i = 0; i < x.size(); ++i) s += std::abs(x[i] - y[i]);
    return s;
}

double sum_sq_diff(std::span<const double> x, std::span<const double> y) {
    double s = 0.0;
    for (std::size_t i = 0; i < x.size(); ++i) {
        const double d = x[i] - y[i];
        s += d * d;
    }
    return s;
}

double sum_pos_diff(std::span<const double> x, std::span<const double> y) {
    double s = 0.0;
    for (std::size_t i = 0; i < x.size(); ++i) s += std::max(x[i] - y[i], 0.0);
    return s;
}

double max_abs(std::span<const double> x) {
    double m = 0.0;
    for (double v : x) m = std::max(m, std::abs(v));
    return m;
}

void axpy(double a, std::span<const double> x, std::span<double> y) {
    for (std::size_t i = 0; i < x.size(); ++i) y[i] += a * x[i];
}

void scale(double a, std::span<double> x) {
    for (double& v : x) v *= a;
}

void laplacian_dirichlet0(std::span<const double> w_ext, std::span<double> out,
                          double inv_dx2) {
    const std::size_t n = out.size();
    for (std::size_t i = 0; i < n; ++i) {
        out[i] = (w_ext[i] - 2.0 * w_ext[i + 1] + w_ext[i + 2]) * inv_dx2;
    }
}

void eo_flux_linear(double c, std::span<const double> u_ext, std::span<double> flux) {
    const double cp = std::max(c, 0.0);
    const double cm = std::min(c, 0.0);
    for (std::size_t j = 0; j < flux.size(); ++j) {
        flux[j] = cp * u_ext[j] + cm * u_ext[j + 1];
    }
}

namespace {

// F'(u) = clamp(u, -M, M), so the EO split halves are
//   F+(u) = u+^2/2 capped quadratic growth beyond M,
//   F-(u) = u-^2/2 with the mirrored cap.
inline double burgers_eo_plus(double u, double m) {
    const double up = std::max(u, 0.0);
    const double v = std::min(up, m);
    return 0.5 * v * v + m * (up - v);
}

inline double burgers_eo_minus(double u, double m) {
    const double un = std::min(u, 0.0);
    const double v = std::max(un, -m);
    return 0.5 * v * v - m * (un - v);
}

} // namespace

void eo_flux_burgers(double clamp_m, std::span<const double> u_ext,
                     std::span<double> flux) {
    for (std::size_t j = 0; j < flux.size(); ++j) {
        flux[j] = burgers_eo_plus(u_ext[j], clamp_m) +
                  burgers_eo_minus(u_ext[j + 1], clamp_m);
    }
}

void eo_flux_burgers_mirror(double clamp_m, std::span<const double> u_ext,
                            std::span<double> flux) {
    for (std::size_t j = 0; j < flux.size(); ++j) {
        flux[j] = -(burgers_eo_minus(u_ext[j], clamp_m) +
                    burgers_eo_plus(u_ext[j + 1], clamp_m));
    }
}

} // namespace spde::kernels::scalar
