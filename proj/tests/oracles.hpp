#pragma once

// Test-only oracles. Each one reproduces a library result through an
// independent computational route (quadrature, exhaustive enumeration, plain
// bisection, grid refinement) and must stay clear of the solver paths it
// checks.

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <functional>
#include <limits>
#include <stdexcept>
#include <vector>

#include "jointvol/binomial.hpp"
#include "jointvol/black_scholes.hpp"
#include "jointvol/root_find.hpp"

namespace oracles {

namespace detail {

template <class F>
double simpson_panel(F&& f, double a, double m, double b, double fa, double fm,
                     double fb, double whole, double tol, int depth) {
    const double lm = 0.5 * (a + m);
    const double rm = 0.5 * (m + b);
    const double flm = f(lm);
    const double frm = f(rm);
    const double left = (m - a) / 6.0 * (fa + 4.0 * flm + fm);
    const double right = (b - m) / 6.0 * (fm + 4.0 * frm + fb);
    const double delta = left + right - whole;
    if (depth <= 0 || std::abs(delta) <= 15.0 * tol)
        return left + right + delta / 15.0;
    return simpson_panel(f, a, lm, m, fa, flm, fm, left, 0.5 * tol, depth - 1) +
           simpson_panel(f, m, rm, b, fm, frm, fb, right, 0.5 * tol, depth - 1);
}

} // namespace detail

// Adaptive Simpson quadrature with Richardson correction.
template <class F>
double integrate(F&& f, double a, double b, double tol = 1e-12, int panels = 32) {
    if (!(b > a)) return 0.0;
    const double h = (b - a) / panels;
    double total = 0.0;
    for (int i = 0; i < panels; ++i) {
        const double lo = a + i * h;
        const double hi = (i == panels - 1) ? b : lo + h;
        const double mid = 0.5 * (lo + hi);
        const double flo = f(lo), fmid = f(mid), fhi = f(hi);
        const double whole = (hi - lo) / 6.0 * (flo + 4.0 * fmid + fhi);
        total += detail::simpson_panel(f, lo, mid, hi, flo, fmid, fhi, whole,
                                       tol / panels, 40);
    }
    return total;
}

inline double normal_density(double z) {
    return std::exp(-0.5 * z * z) / std::sqrt(2.0 * std::acos(-1.0));
}

// Phi(z) by quadrature of the density from 0, plus symmetry.
inline double quad_norm_cdf(double z) {
    if (z < 0.0) return 1.0 - quad_norm_cdf(-z);
    const double upper = std::min(z, 45.0);
    return 0.5 + integrate(normal_density, 0.0, upper, 1e-15);
}

// Vanilla price as the discounted lognormal payoff integral
//   e^{-rho tau} * Integral F(x e^{(rho - sigma^2/2) tau + sigma sqrt(tau) z}, K) phi(z) dz
// evaluated with adaptive quadrature; independent of the closed form.
inline double quad_bs_price(jointvol::OptionKind kind, double spot, double strike,
                            double tau, double sigma, double rho) {
    const double m = (rho - 0.5 * sigma * sigma) * tau;
    const double s = sigma * std::sqrt(tau);
    const double discount = std::exp(-rho * tau);
    // payoff kink: spot * e^{m + s z} = strike
    const double z_kink = (std::log(strike / spot) - m) / s;
    if (kind == jointvol::OptionKind::Call) {
        const double z_hi = s + 40.0;
        if (z_kink >= z_hi) return 0.0;
        const double z_lo = std::max(z_kink, -45.0);
        return discount * integrate(
                              [&](double z) {
                                  return (spot * std::exp(m + s * z) - strike) *
                                         normal_density(z);
                              },
                              z_lo, z_hi, 1e-13);
    }
    const double z_lo = -45.0;
    if (z_kink <= z_lo) return 0.0;
    return discount * integrate(
                          [&](double z) {
                              return (strike - spot * std::exp(m + s * z)) *
                                     normal_density(z);
                          },
                          z_lo, std::min(z_kink, 45.0), 1e-13);
}

// Plain bisection for the conditional implied volatility; no Newton, no
// vega, only sign tests.
inline double bisect_implied_vol(jointvol::OptionKind kind, double spot, double strike,
                                 double tau, double rho, double price,
                                 double lo = 1e-10, double hi = 20.0) {
    auto f = [&](double sig) {
        return jointvol::bs_price(kind, {spot, strike, tau, sig, rho}) - price;
    };
    double f_lo = f(lo);
    if (f_lo > 0.0 || f(hi) < 0.0)
        throw std::runtime_error("bisect_implied_vol: root not bracketed");
    for (int i = 0; i < 200 && hi - lo > 1e-13 * (1.0 + hi); ++i) {
        const double mid = 0.5 * (lo + hi);
        if (f(mid) < 0.0) lo = mid; else hi = mid;
    }
    return 0.5 * (lo + hi);
}

struct GridSolution {
    double a;        // first parameter (sigma or eps)
    double b;        // second parameter (rho)
    double residual; // max absolute residual of the two equations
};

// Two-equation solve by zooming grid refinement: evaluate max(|r1|,|r2|) on
// an n x n lattice over the box, recenter the box on the argmin, shrink, and
// repeat. Never touches the nested solver.
inline GridSolution grid_refine_2d(const std::function<double(double, double)>& res1,
                                   const std::function<double(double, double)>& res2,
                                   jointvol::Interval a_box, jointvol::Interval b_box,
                                   int n = 121, int zooms = 14) {
    const jointvol::Interval a_outer = a_box, b_outer = b_box;
    double best_a = 0.5 * (a_box.lo + a_box.hi);
    double best_b = 0.5 * (b_box.lo + b_box.hi);
    double best = std::numeric_limits<double>::infinity();
    for (int zoom = 0; zoom < zooms; ++zoom) {
        const double da = a_box.width() / (n - 1);
        const double db = b_box.width() / (n - 1);
        for (int i = 0; i < n; ++i) {
            const double a = a_box.lo + i * da;
            for (int j = 0; j < n; ++j) {
                const double b = b_box.lo + j * db;
                const double r = std::max(std::abs(res1(a, b)), std::abs(res2(a, b)));
                if (r < best) {
                    best = r;
                    best_a = a;
                    best_b = b;
                }
            }
        }
        const double half_a = 2.0 * da, half_b = 2.0 * db;
        a_box = {std::max(a_outer.lo, best_a - half_a), std::min(a_outer.hi, best_a + half_a)};
        b_box = {std::max(b_outer.lo, best_b - half_b), std::min(b_outer.hi, best_b + half_b)};
        if (a_box.width() < 1e-14 && b_box.width() < 1e-14) break;
    }
    return {best_a, best_b, best};
}

// Exhaustive 2^N path enumeration of the lattice price; feasible for N <= 20.
inline double enumerate_binomial_price(const jointvol::BinomialModel& m,
                                       jointvol::OptionKind kind, double strike) {
    if (m.periods > 20) throw std::invalid_argument("enumeration limited to N <= 20");
    const double q = jointvol::risk_neutral_prob(m.eps);
    const double down = 1.0 - m.eps;
    const double up = 1.0 / down;
    const std::uint64_t n_paths = 1ULL << m.periods;
    double sum = 0.0;
    for (std::uint64_t mask = 0; mask < n_paths; ++mask) {
        double s = m.spot;
        double prob = 1.0;
        for (int t = 0; t < m.periods; ++t) {
            if (mask & (1ULL << t)) {
                s *= m.rho_step * up;
                prob *= q;
            } else {
                s *= m.rho_step * down;
                prob *= 1.0 - q;
            }
        }
        sum += prob * jointvol::payoff(kind, s, strike);
    }
    return sum / std::pow(m.rho_step, m.periods);
}

} // namespace oracles
