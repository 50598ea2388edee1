#include "kernels_simd.hpp"

#ifdef SPDE_WITH_NEON

#include <arm_neon.h>

#include <algorithm>
#include <cmath>

namespace spde::kernels::neon {

double sum(std::span<const double> x) {
    const std::size_t n = x.size();
    std::size_t i = 0;
    float64x2_t acc = vdupq_n_f64(0.0);
    for (; i + 2 <= n; i += 2) acc = vaddq_f64(acc, vld1q_f64(&x[i]));
    double s = vaddvq_f64(acc);
    for (; i < n; ++i) s += x[i];
    return s;
}

double sum_sq(std::span<const double> x) {
    const std::size_t n = x.size();
    std::size_t i = 0;
    float64x2_t acc = vdupq_n_f64(0.0);
    for (; i + 2 <= n; i += 2) {
        const float64x2_t v = vld1q_f64(&x[i]);
        acc = vaddq_f64(acc, vmulq_f64(v, v));
    }
    double s = vaddvq_f64(acc);
    for (; i < n; ++i) s += x[i] * x[i];
    return s;
}

double dot(std::span<const double> x, std::span<const double> y) {
    const std::size_t n = x.size();
    std::size_t i = 0;
    float64x2_t acc = vdupq_n_f64(0.0);
    for (; i + 2 <= n; i += 2) {
        acc = vaddq_f64(acc, vmulq_f64(vld1q_f64(&x[i]), vld1q_f64(&y[i])));
    }
    double s = vaddvq_f64(acc);
    for (; i < n; ++i) s += x[i] * y[i];
    return s;
}

double sum_abs_diff(std::span<const double> x, std::span<const double> y) {
    const std::size_t n = x.size();
    std::size_t i = 0;
    float64x2_t acc = vdupq_n_f64(0.0);
    for (; i + 2 <= n; i += 2) {
        acc = vaddq_f64(acc, vabdq_f64(vld1q_f64(&x[i]), vld1q_f64(&y[i])));
    }
    double s = vaddvq_f64(acc);
    for (; i < n; ++i) s += std::abs(x[i] - y[i]);
    return s;
}

double sum_sq_diff(std::span<const double> x, std::span<const double> y) {
    const std::size_t n = x.size();
    std::size_t i = 0;
    float64x2_t acc = vdupq_n_f64(0.0);
    for (; i + 2 <= n; i += 2) {
        const float64x2_t d = vsubq_f64(vld1q_f64(&x[i]), vld1q_f64(&y[i]));
        acc = vaddq_f64(acc, vmulq_f64(d, d));
    }
    double s = vaddvq_f64(acc);
    for (; i < n; ++i) {
        const double d = x[i] - y[i];
        s += d * d;
    }
    return s;
}

double sum_pos_diff(std::span<const double> x, std::span<const double> y) {
    const std::size_t n = x.size();
    std::size_t i = 0;
    float64x2_t acc = vdupq_n_f64(0.0);
    const float64x2_t zero = vdupq_n_f64(0.0);
    for (; i + 2 <= n; i += 2) {
        const float64x2_t d = vsubq_f64(vld1q_f64(&x[i]), vld1q_f64(&y[i]));
        acc = vaddq_f64(acc, vmaxq_f64(d, zero));
    }
    double s = vaddvq_f64(acc);
    for (; i < n; ++i) s += std::max(x[i] - y[i], 0.0);
    return s;
}

double max_abs(std::span<const double> x) {
    const std::size_t n = x.size();
    std::size_t i = 0;
    float64x2_t acc = vdupq_n_f64(0.0);
    for (; i + 2 <= n; i += 2) acc = vmaxq_f64(acc, vabsq_f64(vld1q_f64(&x[i])));
    double m = vmaxvq_f64(acc);
    for (; i < n; ++i) m = std::max(m, std::abs(x[i]));
    return m;
}

void axpy(double a, std::span<const double> x, std::span<double> y) {
    const std::size_t n = x.size();
    std::size_t i = 0;
    const float64x2_t av = vdupq_n_f64(a);
    for (; i + 2 <= n; i += 2) {
        const float64x2_t prod = vmulq_f64(av, vld1q_f64(&x[i]));
        vst1q_f64(&y[i], vaddq_f64(vld1q_f64(&y[i]), prod));
    }
    for (; i < n; ++i) y[i] += a * x[i];
}

void scale(double a, std::span<double> x) {
    const std::size_t n = x.size();
    std::size_t i = 0;
    const float64x2_t av = vdupq_n_f64(a);
    for (; i + 2 <= n; i += 2) vst1q_f64(&x[i], vmulq_f64(av, vld1q_f64(&x[i])));
    for (; i < n; ++i) x[i] *= a;
}

void laplacian_dirichlet0(std::span<const double> w_ext, std::span<double> out,
                          double inv_dx2) {
    const std::size_t n = out.size();
    std::size_t i = 0;
    const float64x2_t two = vdupq_n_f64(2.0);
    const float64x2_t sc = vdupq_n_f64(inv_dx2);
    for (; i + 2 <= n; i += 2) {
        const float64x2_t left = vld1q_f64(&w_ext[i]);
        const float64x2_t mid = vld1q_f64(&w_ext[i + 1]);
        const float64x2_t right = vld1q_f64(&w_ext[i + 2]);
        const float64x2_t lap = vaddq_f64(vsubq_f64(left, vmulq_f64(two, mid)), right);
        vst1q_f64(&out[i], vmulq_f64(lap, sc));
    }
    for (; i < n; ++i) {
        out[i] = (w_ext[i] - 2.0 * w_ext[i + 1] + w_ext[i + 2]) * inv_dx2;
    }
}

void eo_flux_linear(double c, std::span<const double> u_ext, std::span<double> flux) {
    const std::size_t nf = flux.size();
    std::size_t j = 0;
    const double cp = std::max(c, 0.0);
    const double cm = std::min(c, 0.0);
    const float64x2_t cpv = vdupq_n_f64(cp);
    const float64x2_t cmv = vdupq_n_f64(cm);
    for (; j + 2 <= nf; j += 2) {
        const float64x2_t ul = vld1q_f64(&u_ext[j]);
        const float64x2_t ur = vld1q_f64(&u_ext[j + 1]);
        vst1q_f64(&flux[j], vaddq_f64(vmulq_f64(cpv, ul), vmulq_f64(cmv, ur)));
    }
    for (; j < nf; ++j) flux[j] = cp * u_ext[j] + cm * u_ext[j + 1];
}

void eo_flux_burgers(double clamp_m, std::span<const double> u_ext,
                     std::span<double> flux) {
    const std::size_t nf = flux.size();
    std::size_t j = 0;
    const float64x2_t zero = vdupq_n_f64(0.0);
    const float64x2_t half = vdupq_n_f64(0.5);
    const float64x2_t mv = vdupq_n_f64(clamp_m);
    const float64x2_t mneg = vdupq_n_f64(-clamp_m);
    for (; j + 2 <= nf; j += 2) {
        const float64x2_t ul = vld1q_f64(&u_ext[j]);
        const float64x2_t up = vmaxq_f64(ul, zero);
        const float64x2_t vp = vminq_f64(up, mv);
        const float64x2_t fp = vaddq_f64(vmulq_f64(half, vmulq_f64(vp, vp)),
                                         vmulq_f64(mv, vsubq_f64(up, vp)));
        const float64x2_t ur = vld1q_f64(&u_ext[j + 1]);
        const float64x2_t un = vminq_f64(ur, zero);
        const float64x2_t vn = vmaxq_f64(un, mneg);
        const float64x2_t fm = vsubq_f64(vmulq_f64(half, vmulq_f64(vn, vn)),
                                         vmulq_f64(mv, vsubq_f64(un, vn)));
        vst1q_f64(&flux[j], vaddq_f64(fp, fm));
    }
    for (; j < nf; ++j) {
        const double up = std::max(u_ext[j], 0.0);
        const double vp = std::min(up, clamp_m);
        const double un = std::min(u_ext[j + 1], 0.0);
        const double vn = std::max(un, -clamp_m);
        flux[j] = (0.5 * vp * vp + clamp_m * (up - vp)) +
                  (0.5 * vn * vn - clamp_m * (un - vn));
    }
}

void eo_flux_burgers_mirror(double clamp_m, std::span<const double> u_ext,
                            std::span<double> flux) {
    const std::size_t nf = flux.size();
    std::size_t j = 0;
    const float64x2_t zero = vdupq_n_f64(0.0);
    const float64x2_t half = vdupq_n_f64(0.5);
    const float64x2_t mv = vdupq_n_f64(clamp_m);
    const float64x2_t mneg = vdupq_n_f64(-clamp_m);
    for (; j + 2 <= nf; j += 2) {
        const float64x2_t ul = vld1q_f64(&u_ext[j]);
        const float64x2_t un = vminq_f64(ul, zero);
        const float64x2_t vn = vmaxq_f64(un, mneg);
        const float64x2_t fm = vsubq_f64(vmulq_f64(half, vmulq_f64(vn, vn)),
                                         vmulq_f64(mv, vsubq_f64(un, vn)));
        const float64x2_t ur = vld1q_f64(&u_ext[j + 1]);
        const float64x2_t up = vmaxq_f64(ur, zero);
        const float64x2_t vp = vminq_f64(up, mv);
        const float64x2_t fp = vaddq_f64(vmulq_f64(half, vmulq_f64(vp, vp)),
                                         vmulq_f64(mv, vsubq_f64(up, vp)));
        vst1q_f64(&flux[j], vnegq_f64(vaddq_f64(fm, fp)));
    }
    for (; j < nf; ++j) {
        const double un = std::min(u_ext[j], 0.0);
        const double vn = std::max(un, -clamp_m);
        const double up = std::max(u_ext[j + 1], 0.0);
        const double vp = std::min(up, clamp_m);
        flux[j] = -((0.5 * vn * vn - clamp_m * (un - vn)) +
                    (0.5 * vp * vp + clamp_m * (up - vp)));
    }
}

} // namespace spde::kernels::neon

#endif // SPDE_WITH_NEON
