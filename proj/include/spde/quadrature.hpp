#pragma once

#include <algorithm>
#include <cmath>
#include <vector>

#include "spde/errors.hpp"

namespace spde::quad {

inline constexpr double kDefaultTol = 1e-10;
inline constexpr int kMaxDepth = 60;

namespace detail {

inline double simpson(double a, double b, double fa, double fm, double fb) {
    return (b - a) / 6.0 * (fa + 4.0 * fm + fb);
}

template <typename F>
double adaptive(F&& f, double a, double b, double fa, double fm, double fb,
                double whole, double tol, int depth, double& worst_err) {
    const double m = 0.5 * (a + b);
    const double lm = 0.5 * (a + m);
    const double rm = 0.5 * (m + b);
    const double flm = f(lm);
    const double frm = f(rm);
    const double left = simpson(a, m, fa, flm, fm);
    const double right = simpson(m, b, fm, frm, fb);
    const double err = (left + right - whole) / 15.0;
    if (std::abs(err) <= tol || depth >= kMaxDepth) {
        if (depth >= kMaxDepth) worst_err = std::max(worst_err, std::abs(err));
        return left + right + err;
    }
    return adaptive(f, a, m, fa, flm, fm, left, 0.5 * tol, depth + 1, worst_err) +
           adaptive(f, m, b, fm, frm, fb, right, 0.5 * tol, depth + 1, worst_err);
}

} // namespace detail

/// Adaptive Simpson over the oriented interval [a, b] to absolute tolerance.
/// Throws NumericalError when the depth cap is hit before the tolerance.
template <typename F>
double adaptive_simpson(F&& f, double a, double b, double tol = kDefaultTol) {
    if (a == b) return 0.0;
    if (tol <= 0.0) throw InvalidParameterError("adaptive_simpson: tol must be positive");
    const double m = 0.5 * (a + b);
    const double fa = f(a), fm = f(m), fb = f(b);
    const double whole = detail::simpson(a, b, fa, fm, fb);
    double worst_err = 0.0;
    const double value = detail::adaptive(f, a, b, fa, fm, fb, whole, tol, 0, worst_err);
    if (worst_err > tol) {
        throw NumericalError("adaptive_simpson: depth cap reached", worst_err);
    }
    return value;
}

/// Adaptive Simpson with interior breakpoints (integrand kinks); points outside
/// the oriented interval are ignored.
template <typename F>
double adaptive_simpson_segmented(F&& f, double a, double b, std::vector<double> breaks,
                                  double tol = kDefaultTol) {
    if (a == b) return 0.0;
    const double lo = std::min(a, b), hi = std::max(a, b);
    breaks.erase(std::remove_if(breaks.begin(), breaks.end(),
                                [&](double x) { return !(x > lo && x < hi); }),
                 breaks.end());
    std::sort(breaks.begin(), breaks.end());
    breaks.insert(breaks.begin(), lo);
    breaks.push_back(hi);
    double total = 0.0;
    const double seg_tol = tol / static_cast<double>(breaks.size() - 1);
    for (std::size_t i = 0; i + 1 < breaks.size(); ++i) {
        total += adaptive_simpson(f, breaks[i], breaks[i + 1], seg_tol);
    }
    return (a < b) ? total : -total;
}

/// Composite midpoint rule with n uniform panels.
template <typename F>
double midpoint(F&& f, double a, double b, int n) {
    const double h = (b - a) / n;
    double sum = 0.0;
    for (int i = 0; i < n; ++i) sum += f(a + (i + 0.5) * h);
    return sum * h;
}

} // namespace spde::quad
