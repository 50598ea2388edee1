#include "kernels_simd.hpp"

#ifdef SPDE_WITH_AVX2

#include <immintrin.h>

#include <algorithm>
#include <cmath>

namespace spde::kernels::avx2 {

namespace {

inline double hsum(__m256d v) {
    __m128d lo = _mm256_castpd256_pd128(v);
    __m128d hi = _mm256_extractf128_pd(v, 1);
    lo = _mm_add_pd(lo, hi);
    __m128d swapped = _mm_unpackhi_pd(lo, lo);
    return _mm_cvtsd_f64(_mm_add_sd(lo, swapped));
}

inline double hmax(__m256d v) {
    __m128d lo = _mm256_castpd256_pd128(v);
    __m128d hi = _mm256_extractf128_pd(v, 1);
    lo = _mm_max_pd(lo, hi);
    __m128d swapped = _mm_unpackhi_pd(lo, lo);
    return _mm_cvtsd_f64(_mm_max_sd(lo, swapped));
}

inline __m256d vabs(__m256d v) {
    const __m256d mask = _mm256_castsi256_pd(_mm256_set1_epi64x(0x7fffffffffffffffll));
    return _mm256_and_pd(v, mask);
}

} // namespace

double sum(std::span<const double> x) {
    const std::size_t n = x.size();
    std::size_t i = 0;
    __m256d acc = _mm256_setzero_pd();
    for (; i + 4 <= n; i += 4) {
        acc = _mm256_add_pd(acc, _mm256_loadu_pd(&x[i]));
    }
    double s = hsum(acc);
    for (; i < n; ++i) s += x[i];
    return s;
}

double sum_sq(std::span<const double> x) {
    const std::size_t n = x.size();
    std::size_t i = 0;
    __m256d acc = _mm256_setzero_pd();
    for (; i + 4 <= n; i += 4) {
        const __m256d v = _mm256_loadu_pd(&x[i]);
        acc = _mm256_add_pd(acc, _mm256_mul_pd(v, v));
    }
    double s = hsum(acc);
    for (; i < n; ++i) s += x[i] * x[i];
    return s;
}

double dot(std::span<const double> x, std::span<const double> y) {
    const std::size_t n = x.size();
    std::size_t i = 0;
    __m256d acc = _mm256_setzero_pd();
    for (; i + 4 <= n; i += 4) {
        acc = _mm256_add_pd(acc, _mm256_mul_pd(_mm256_loadu_pd(&x[i]),
                                               _mm256_loadu_pd(&y[i])));
    }
    double s = hsum(acc);
    for (; i < n; ++i) s += x[i] * y[i];
    return s;
}

double sum_abs_diff(std::span<const double> x, std::span<const double> y) {
    const std::size_t n = x.size();
    std::size_t i = 0;
    __m256d acc = _mm256_setzero_pd();
    for (; i + 4 <= n; i += 4) {
        const __m256d d = _mm256_sub_pd(_mm256_loadu_pd(&x[i]), _mm256_loadu_pd(&y[i]));
        acc = _mm256_add_pd(acc, vabs(d));
    }
    double s = hsum(acc);
    for (; i < n; ++i) s += std::abs(x[i] - y[i]);
    return s;
}

double sum_sq_diff(std::span<const double> x, std::span<const double> y) {
    const std::size_t n = x.size();
    std::size_t i = 0;
    __m256d acc = _mm256_setzero_pd();
    for (; i + 4 <= n; i += 4) {
        const __m256d d = _mm256_sub_pd(_mm256_loadu_pd(&x[i]), _mm256_loadu_pd(&y[i]));
        acc = _mm256_add_pd(acc, _mm256_mul_pd(d, d));
    }
    double s = hsum(acc);
    for (; i < n; ++i) {
        const double d = x[i] - y[i];
        s += d * d;
    }
    return s;
}

double sum_pos_diff(std::span<const double> x, std::span<const double> y) {
    const std::size_t n = x.size();
    std::size_t i = 0;
    __m256d acc = _mm256_setzero_pd();
    const __m256d zero = _mm256_setzero_pd();
    for (; i + 4 <= n; i += 4) {
        const __m256d d = _mm256_sub_pd(_mm256_loadu_pd(&x[i]), _mm256_loadu_pd(&y[i]));
        acc = _mm256_add_pd(acc, _mm256_max_pd(d, zero));
    }
    double s = hsum(acc);
    for (; i < n; ++i) s += std::max(x[i] - y[i], 0.0);
    return s;
}

double max_abs(std::span<const double> x) {
    const std::size_t n = x.size();
    std::size_t i = 0;
    __m256d acc = _mm256_setzero_pd();
    for (; i + 4 <= n; i += 4) {
        acc = _mm256_max_pd(acc, vabs(_mm256_loadu_pd(&x[i])));
    }
    double m = hmax(acc);
    for (; i < n; ++i) m = std::max(m, std::abs(x[i]));
    return m;
}

void axpy(double a, std::span<const double> x, std::span<double> y) {
    const std::size_t n = x.size();
    std::size_t i = 0;
    const __m256d av = _mm256_set1_pd(a);
    for (; i + 4 <= n; i += 4) {
        const __m256d prod = _mm256_mul_pd(av, _mm256_loadu_pd(&x[i]));
        _mm256_storeu_pd(&y[i], _mm256_add_pd(_mm256_loadu_pd(&y[i]), prod));
    }
    for (; i < n; ++i) y[i] += a * x[i];
}

void scale(double a, std::span<double> x) {
    const std::size_t n = x.size();
    std::size_t i = 0;
    const __m256d av = _mm256_set1_pd(a);
    for (; i + 4 <= n; i += 4) {
        _mm256_storeu_pd(&x[i], _mm256_mul_pd(av, _mm256_loadu_pd(&x[i])));
    }
    for (; i < n; ++i) x[i] *= a;
}

void laplacian_dirichlet0(std::span<const double> w_ext, std::span<double> out,
                          double inv_dx2) {
    const std::size_t n = out.size();
    std::size_t i = 0;
    const __m256d two = _mm256_set1_pd(2.0);
    const __m256d scale_v = _mm256_set1_pd(inv_dx2);
    for (; i + 4 <= n; i += 4) {
        const __m256d left = _mm256_loadu_pd(&w_ext[i]);
        const __m256d mid = _mm256_loadu_pd(&w_ext[i + 1]);
        const __m256d right = _mm256_loadu_pd(&w_ext[i + 2]);
        const __m256d lap =
            _mm256_add_pd(_mm256_sub_pd(left, _mm256_mul_pd(two, mid)), right);
        _mm256_storeu_pd(&out[i], _mm256_mul_pd(lap, scale_v));
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
    const __m256d cpv = _mm256_set1_pd(cp);
    const __m256d cmv = _mm256_set1_pd(cm);
    for (; j + 4 <= nf; j += 4) {
        const __m256d ul = _mm256_loadu_pd(&u_ext[j]);
        const __m256d ur = _mm256_loadu_pd(&u_ext[j + 1]);
        _mm256_storeu_pd(&flux[j], _mm256_add_pd(_mm256_mul_pd(cpv, ul),
                                                 _mm256_mul_pd(cmv, ur)));
    }
    for (; j < nf; ++j) flux[j] = cp * u_ext[j] + cm * u_ext[j + 1];
}

void eo_flux_burgers(double clamp_m, std::span<const double> u_ext,
                     std::span<double> flux) {
    const std::size_t nf = flux.size();
    std::size_t j = 0;
    const __m256d zero = _mm256_setzero_pd();
    const __m256d half = _mm256_set1_pd(0.5);
    const __m256d mv = _mm256_set1_pd(clamp_m);
    const __m256d mneg = _mm256_set1_pd(-clamp_m);
    for (; j + 4 <= nf; j += 4) {
        // F+(u_j):  up = max(u,0), v = min(up,M), 0.5 v^2 + M (up - v)
        const __m256d ul = _mm256_loadu_pd(&u_ext[j]);
        const __m256d up = _mm256_max_pd(ul, zero);
        const __m256d vp = _mm256_min_pd(up, mv);
        const __m256d fp = _mm256_add_pd(
            _mm256_mul_pd(half, _mm256_mul_pd(vp, vp)),
            _mm256_mul_pd(mv, _mm256_sub_pd(up, vp)));
        // F-(u_{j+1}): un = min(u,0), v = max(un,-M), 0.5 v^2 - M (un - v)
        const __m256d ur = _mm256_loadu_pd(&u_ext[j + 1]);
        const __m256d un = _mm256_min_pd(ur, zero);
        const __m256d vn = _mm256_max_pd(un, mneg);
        const __m256d fm = _mm256_sub_pd(
            _mm256_mul_pd(half, _mm256_mul_pd(vn, vn)),
            _mm256_mul_pd(mv, _mm256_sub_pd(un, vn)));
        _mm256_storeu_pd(&flux[j], _mm256_add_pd(fp, fm));
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
    const __m256d zero = _mm256_setzero_pd();
    const __m256d half = _mm256_set1_pd(0.5);
    const __m256d mv = _mm256_set1_pd(clamp_m);
    const __m256d mneg = _mm256_set1_pd(-clamp_m);
    const __m256d sign_flip = _mm256_set1_pd(-0.0);
    for (; j + 4 <= nf; j += 4) {
        // F-(u_j): un = min(u,0), v = max(un,-M), 0.5 v^2 - M (un - v)
        const __m256d ul = _mm256_loadu_pd(&u_ext[j]);
        const __m256d un = _mm256_min_pd(ul, zero);
        const __m256d vn = _mm256_max_pd(un, mneg);
        const __m256d fm = _mm256_sub_pd(
            _mm256_mul_pd(half, _mm256_mul_pd(vn, vn)),
            _mm256_mul_pd(mv, _mm256_sub_pd(un, vn)));
        // F+(u_{j+1}): up = max(u,0), v = min(up,M), 0.5 v^2 + M (up - v)
        const __m256d ur = _mm256_loadu_pd(&u_ext[j + 1]);
        const __m256d up = _mm256_max_pd(ur, zero);
        const __m256d vp = _mm256_min_pd(up, mv);
        const __m256d fp = _mm256_add_pd(
            _mm256_mul_pd(half, _mm256_mul_pd(vp, vp)),
            _mm256_mul_pd(mv, _mm256_sub_pd(up, vp)));
        _mm256_storeu_pd(&flux[j], _mm256_xor_pd(_mm256_add_pd(fm, fp), sign_flip));
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

} // namespace spde::kernels::avx2

#endif // SPDE_WITH_AVX2
