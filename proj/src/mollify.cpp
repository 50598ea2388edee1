#include "spde/mollify.hpp"

#include <cmath>
#include <string>
#include <vector>

#include "spde/errors.hpp"
#include "spde/quadrature.hpp"

namespace spde {

namespace {

// Standard bump rho(y) = c_d exp(-1/(1-|y|^2)) on |y| < 1. The normalization
// constants are computed once by high-resolution quadrature; the bump's
// derivatives all vanish at |y| = 1, so midpoint converges superalgebraically.
double bump_raw(double r2) {
    if (r2 >= 1.0) return 0.0;
    return std::exp(-1.0 / (1.0 - r2));
}

double bump_norm_1d() {
    static const double c = [] {
        const double mass =
            quad::midpoint([](double y) { return bump_raw(y * y); }, -1.0, 1.0, 4096);
        return 1.0 / mass;
    }();
    return c;
}

double bump_norm_2d() {
    static const double c = [] {
        // 2 pi int_0^1 r exp(-1/(1-r^2)) dr
        const double mass = 2.0 * 3.141592653589793238462643383279 *
                            quad::midpoint([](double r) { return r * bump_raw(r * r); },
                                           0.0, 1.0, 4096);
        return 1.0 / mass;
    }();
    return c;
}

} // namespace

double ConeSpec::kappa_max() const {
    return height / (1.0 + std::sin(0.5 * angle));
}

ConeSpec interval_cone() { return ConeSpec{1.5707963267948966, 0.5, {1.0, 0.0}}; }
ConeSpec square_cone() { return ConeSpec{1.0471975511965976, 0.5, {1.0, 0.0}}; }

double eta(double kappa, const ConeSpec& cone) {
    if (!(cone.angle > 0.0 && cone.angle < 3.141592653589793)) {
        throw InvalidParameterError("eta: cone angle must lie in (0, pi)");
    }
    if (!(kappa > 0.0 && kappa < cone.kappa_max())) {
        throw InvalidParameterError("eta: kappa outside (0, kappa_C)");
    }
    return kappa * std::sin(0.5 * cone.angle);
}

double kernel_mass(double kappa, const ConeSpec& cone, int dimension, int panels) {
    const double radius = eta(kappa, cone);
    if (dimension == 1) {
        const double c = bump_norm_1d() / radius;
        return quad::midpoint(
            [&](double y) { return c * bump_raw((y / radius) * (y / radius)); },
            -radius, radius, panels);
    }
    if (dimension == 2) {
        const double c = bump_norm_2d() / (radius * radius);
        const double h = 2.0 * radius / panels;
        double mass = 0.0;
        for (int i = 0; i < panels; ++i) {
            const double y1 = -radius + (i + 0.5) * h;
            for (int j = 0; j < panels; ++j) {
                const double y2 = -radius + (j + 0.5) * h;
                mass += c * bump_raw((y1 * y1 + y2 * y2) / (radius * radius));
            }
        }
        return mass * h * h;
    }
    throw InvalidParameterError("kernel_mass: dimension must be 1 or 2");
}

bool shift_contained(const Domain1D& domain, double x, double kappa, double e,
                     const ConeSpec& cone) {
    const double radius = eta(kappa, cone);
    const double center = x - kappa * e;
    const double slack = 1e-12;
    return center - radius >= domain.x0 - slack && center + radius <= domain.x1 + slack;
}

bool shift_contained(const Domain2D& domain, double x, double y, double kappa,
                     const std::array<double, 2>& e, const ConeSpec& cone) {
    const double radius = eta(kappa, cone);
    const double cx = x - kappa * e[0];
    const double cy = y - kappa * e[1];
    const double slack = 1e-12;
    return cx - radius >= domain.x0 - slack && cx + radius <= domain.x1 + slack &&
           cy - radius >= domain.y0 - slack && cy + radius <= domain.y1 + slack;
}

namespace {

struct Quad1D {
    std::vector<double> offsets;
    std::vector<double> weights; // normalized to unit sum
};

// Midpoint nodes over the kernel support, resolution tied to
// min(dx, eta/16); weights normalized so constants are preserved exactly.
Quad1D kernel_quadrature_1d(double radius, double dx) {
    const double step_target = std::min(dx, radius / 16.0);
    const int n = std::max(32, static_cast<int>(std::ceil(2.0 * radius / step_target)));
    const double h = 2.0 * radius / n;
    Quad1D q;
    q.offsets.resize(n);
    q.weights.resize(n);
    double total = 0.0;
    for (int i = 0; i < n; ++i) {
        const double y = -radius + (i + 0.5) * h;
        q.offsets[i] = y;
        q.weights[i] = bump_raw((y / radius) * (y / radius));
        total += q.weights[i];
    }
    for (auto& w : q.weights) w /= total;
    return q;
}

} // namespace

GridFunction1D mollify_shifted(const GridFunction1D& f, double kappa, double e,
                               const ConeSpec& cone) {
    const double radius = eta(kappa, cone);
    const auto q = kernel_quadrature_1d(radius, f.dx());
    GridFunction1D out(f.domain(), f.nodes());
    for (int i = 0; i < f.nodes(); ++i) {
        const double x = f.node_x(i);
        if (!shift_contained(f.domain(), x, kappa, e, cone)) {
            throw GeometryError("mollify_shifted: shifted ball leaves the domain at node x=" +
                                    std::to_string(x),
                                x);
        }
        const double center = x - kappa * e;
        double acc = 0.0;
        for (std::size_t jq = 0; jq < q.offsets.size(); ++jq) {
            acc += q.weights[jq] * f.sample_extended(center - q.offsets[jq]);
        }
        out[i] = acc;
    }
    return out;
}

GridFunction1D mollify_shifted_inward(const GridFunction1D& f, double kappa,
                                      const ConeSpec& cone) {
    const double radius = eta(kappa, cone);
    const auto q = kernel_quadrature_1d(radius, f.dx());
    const double mid = 0.5 * (f.domain().x0 + f.domain().x1);
    GridFunction1D out(f.domain(), f.nodes());
    for (int i = 0; i < f.nodes(); ++i) {
        const double x = f.node_x(i);
        const double e = (x < mid) ? -1.0 : 1.0; // outward axis of the nearest face
        if (!shift_contained(f.domain(), x, kappa, e, cone)) {
            throw GeometryError("mollify_shifted_inward: containment failed at node x=" +
                                    std::to_string(x),
                                x);
        }
        const double center = x - kappa * e;
        double acc = 0.0;
        for (std::size_t jq = 0; jq < q.offsets.size(); ++jq) {
            acc += q.weights[jq] * f.sample_extended(center - q.offsets[jq]);
        }
        out[i] = acc;
    }
    return out;
}

GridFunction2D mollify_shifted_inward(const GridFunction2D& f, double kappa,
                                      const ConeSpec& cone) {
    const double radius = eta(kappa, cone);
    const double step_target = std::min(std::min(f.dx(), f.dy()), radius / 16.0);
    const int n = std::max(24, static_cast<int>(std::ceil(2.0 * radius / step_target)));
    const double h = 2.0 * radius / n;

    // tensor midpoint nodes restricted to the kernel ball, unit-normalized
    std::vector<double> oy1, oy2, w;
    double total = 0.0;
    for (int i = 0; i < n; ++i) {
        const double y1 = -radius + (i + 0.5) * h;
        for (int j = 0; j < n; ++j) {
            const double y2 = -radius + (j + 0.5) * h;
            const double val = bump_raw((y1 * y1 + y2 * y2) / (radius * radius));
            if (val > 0.0) {
                oy1.push_back(y1);
                oy2.push_back(y2);
                w.push_back(val);
                total += val;
            }
        }
    }
    for (auto& wi : w) wi /= total;

    const double midx = 0.5 * (f.domain().x0 + f.domain().x1);
    const double midy = 0.5 * (f.domain().y0 + f.domain().y1);
    const double inv_sqrt2 = 0.7071067811865475244;
    GridFunction2D out(f.domain(), f.nodes_x(), f.nodes_y());
    for (int j = 0; j < f.nodes_y(); ++j) {
        for (int i = 0; i < f.nodes_x(); ++i) {
            const double x = f.node_x(i);
            const double y = f.node_y(j);
            const std::array<double, 2> e{(x < midx ? -1.0 : 1.0) * inv_sqrt2,
                                          (y < midy ? -1.0 : 1.0) * inv_sqrt2};
            if (!shift_contained(f.domain(), x, y, kappa, e, cone)) {
                throw GeometryError(
                    "mollify_shifted_inward: containment failed at node (" +
                        std::to_string(x) + "," + std::to_string(y) + ")",
                    x, y);
            }
            const double cx = x - kappa * e[0];
            const double cy = y - kappa * e[1];
            double acc = 0.0;
            for (std::size_t k = 0; k < w.size(); ++k) {
                acc += w[k] * f.sample_extended(cx - oy1[k], cy - oy2[k]);
            }
            out.at(i, j) = acc;
        }
    }
    return out;
}

} // namespace spde
