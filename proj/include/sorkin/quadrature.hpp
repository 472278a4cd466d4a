#ifndef SORKIN_QUADRATURE_HPP
#define SORKIN_QUADRATURE_HPP

#include <cmath>
#include <complex>
#include <span>
#include <string>
#include <vector>

#include "sorkin/errors.hpp"

namespace sorkin {

// Adaptive 15-point Gauss-Kronrod quadrature for smooth complex integrands.
// Bisects any panel whose embedded G7/K15 difference exceeds its share of the
// tolerance budget, down to max_levels splits.

namespace gk15 {

// QUADPACK dqk15 nodes and weights.
inline constexpr double xgk[8] = {
    0.991455371120812639206854697526329, 0.949107912342758524526189684047851,
    0.864864423359769072789712788640926, 0.741531185599394439863864773280788,
    0.586087235467691130294144838258730, 0.405845151377397166906606412076961,
    0.207784955007898467600689403773245, 0.0};
inline constexpr double wgk[8] = {
    0.022935322010529224963732008058970, 0.063092092629978553290700663189204,
    0.104790010322250183839876322541518, 0.140653259715525918745189590510238,
    0.169004726639267902826583426598550, 0.190350578064785409913256402421014,
    0.204432940075298892414161999234649, 0.209482141084727828012999174891714};
inline constexpr double wg[4] = {
    0.129484966168869693270611432679082, 0.279705391489276667901467771423780,
    0.381830050505118944950369775488975, 0.417959183673469387755102040816327};

template <class F>
std::complex<double> panel(F&& f, double a, double b, double* abs_err) {
    const double c = 0.5 * (a + b);
    const double h = 0.5 * (b - a);
    std::complex<double> resg{0.0, 0.0};
    std::complex<double> resk{0.0, 0.0};

    const std::complex<double> fc = f(c);
    resk = wgk[7] * fc;

    for (int i = 0; i < 7; ++i) {
        const double dx = h * xgk[i];
        const std::complex<double> fsum = f(c - dx) + f(c + dx);
        resk += wgk[i] * fsum;
        if (i % 2 == 1) resg += wg[i / 2] * fsum; // odd K15 nodes are the G7 nodes
    }
    resg += wg[3] * fc;

    if (abs_err) *abs_err = std::abs(resk - resg) * h;
    return resk * h;
}

} // namespace gk15

struct QuadratureResult {
    std::complex<double> value{0.0, 0.0};
    double error_estimate = 0.0;
    int max_depth = 0;
    long panels = 0;
};

namespace detail {

template <class F>
void gk_refine(F& f, double a, double b, double tol_abs, int depth, int max_levels,
               QuadratureResult& out) {
    double err = 0.0;
    const std::complex<double> val = gk15::panel(f, a, b, &err);
    ++out.panels;
    if (depth > out.max_depth) out.max_depth = depth;
    if (err <= tol_abs || depth >= max_levels) {
        if (err > tol_abs) {
            throw NumericError(
                "quadrature did not converge: panel [" + std::to_string(a) + ", " +
                std::to_string(b) + "] error " + std::to_string(err) + " > tol " +
                std::to_string(tol_abs) + " at depth " + std::to_string(depth));
        }
        out.value += val;
        out.error_estimate += err;
        return;
    }
    const double m = 0.5 * (a + b);
    gk_refine(f, a, m, 0.5 * tol_abs, depth + 1, max_levels, out);
    gk_refine(f, m, b, 0.5 * tol_abs, depth + 1, max_levels, out);
}

} // namespace detail

// Integrates f over consecutive panels given by `breakpoints` (sorted,
// size >= 2). The relative tolerance is applied against a first-pass
// estimate of |integral|.
template <class F>
QuadratureResult integrate_adaptive(F&& f, std::span<const double> breakpoints,
                                    double rel_tol = 1e-10, int max_levels = 20) {
    if (breakpoints.size() < 2)
        throw NumericError("integrate_adaptive: need at least two breakpoints");

    std::complex<double> rough{0.0, 0.0};
    for (std::size_t i = 0; i + 1 < breakpoints.size(); ++i)
        rough += gk15::panel(f, breakpoints[i], breakpoints[i + 1], nullptr);
    const double scale = std::max(std::abs(rough), 1e-300);
    const double tol_abs = rel_tol * scale / double(breakpoints.size() - 1);

    QuadratureResult out;
    for (std::size_t i = 0; i + 1 < breakpoints.size(); ++i)
        detail::gk_refine(f, breakpoints[i], breakpoints[i + 1], tol_abs, 0, max_levels, out);
    return out;
}

template <class F>
QuadratureResult integrate_adaptive(F&& f, double a, double b, double rel_tol = 1e-10,
                                    int max_levels = 20) {
    const double pts[2] = {a, b};
    return integrate_adaptive(static_cast<F&&>(f), std::span<const double>(pts, 2),
                              rel_tol, max_levels);
}

} // namespace sorkin

#endif
