#pragma once

#include <algorithm>
#include <cmath>
#include <limits>
#include <optional>
#include <stdexcept>
#include <vector>

namespace jointvol {

// Outcome vocabulary shared by every nested two-parameter solver and the
// sweep engines built on them.
enum class SolveStatus { Converged, NoRoot, MultipleRoots, Degenerate, InnerFailure };

inline const char* to_string(SolveStatus status) {
    switch (status) {
        case SolveStatus::Converged: return "converged";
        case SolveStatus::NoRoot: return "no_root";
        case SolveStatus::MultipleRoots: return "multiple_roots";
        case SolveStatus::Degenerate: return "degenerate";
        case SolveStatus::InnerFailure: return "inner_failure";
    }
    return "unknown";
}

// Closed interval [lo, hi]; empty when lo >= hi.
struct Interval {
    double lo;
    double hi;

    bool empty() const { return !(lo < hi); }
    double width() const { return hi - lo; }
    bool contains(double x) const { return x >= lo && x <= hi; }
};

inline Interval intersect(const Interval& a, const Interval& b) {
    return {std::max(a.lo, b.lo), std::min(a.hi, b.hi)};
}

struct RootResult {
    double root = 0.0;
    double f_root = 0.0;
    int iterations = 0;
    bool converged = false;
};

// Root of f on a bracketing interval [a, b] with f(a)*f(b) <= 0.
// Secant steps accelerate a bisection safeguard; convergence is declared on
// the residual, |f| <= f_tol, not on the interval width.
template <class F>
RootResult find_root_bracketed(F&& f, double a, double b, double f_a, double f_b,
                               double f_tol, int max_iter) {
    RootResult out;
    if (std::abs(f_a) <= f_tol) return {a, f_a, 0, true};
    if (std::abs(f_b) <= f_tol) return {b, f_b, 0, true};
    if (f_a * f_b > 0.0)
        throw std::invalid_argument("find_root_bracketed: endpoints do not bracket a root");

    double x_prev = a, f_prev = f_a;
    double x_cur = b, f_cur = f_b;
    for (int it = 0; it < max_iter; ++it) {
        ++out.iterations;
        double x_next;
        // Secant candidate from the two most recent iterates.
        const double denom = f_cur - f_prev;
        if (denom != 0.0) {
            x_next = x_cur - f_cur * (x_cur - x_prev) / denom;
        } else {
            x_next = 0.5 * (a + b);
        }
        // Safeguard: fall back to bisection when the candidate leaves the
        // bracket or fails to shrink it meaningfully.
        const double margin = 1e-3 * (b - a);
        if (!(x_next > a + margin) || !(x_next < b - margin))
            x_next = 0.5 * (a + b);

        const double f_next = f(x_next);
        x_prev = x_cur; f_prev = f_cur;
        x_cur = x_next; f_cur = f_next;

        if (std::abs(f_cur) <= f_tol) {
            out.root = x_cur;
            out.f_root = f_cur;
            out.converged = true;
            return out;
        }
        if (f_a * f_cur <= 0.0) {
            b = x_cur; f_b = f_cur;
        } else {
            a = x_cur; f_a = f_cur;
        }
        if (b - a <= 4.0 * std::numeric_limits<double>::epsilon() *
                         (std::abs(a) + std::abs(b) + 1.0)) {
            // Bracket exhausted at machine resolution; report the better end.
            if (std::abs(f_a) < std::abs(f_b)) { out.root = a; out.f_root = f_a; }
            else { out.root = b; out.f_root = f_b; }
            out.converged = std::abs(out.f_root) <= f_tol;
            return out;
        }
    }
    out.root = x_cur;
    out.f_root = f_cur;
    out.converged = false;
    return out;
}

// Newton-accelerated variant for functions with a cheap derivative.
// Keeps the bracket invariant; any Newton step that exits it bisects instead.
template <class F, class DF>
RootResult find_root_newton(F&& f, DF&& df, double a, double b, double f_a, double f_b,
                            double x0, double f_tol, int max_iter) {
    RootResult out;
    if (std::abs(f_a) <= f_tol) return {a, f_a, 0, true};
    if (std::abs(f_b) <= f_tol) return {b, f_b, 0, true};
    if (f_a * f_b > 0.0)
        throw std::invalid_argument("find_root_newton: endpoints do not bracket a root");

    double x = std::clamp(x0, a, b);
    double fx = f(x);
    for (int it = 0; it < max_iter; ++it) {
        ++out.iterations;
        if (std::abs(fx) <= f_tol) {
            out.root = x;
            out.f_root = fx;
            out.converged = true;
            return out;
        }
        if (f_a * fx <= 0.0) {
            b = x; f_b = fx;
        } else {
            a = x; f_a = fx;
        }
        const double slope = df(x);
        double x_next = (slope != 0.0 && std::isfinite(slope))
                            ? x - fx / slope
                            : 0.5 * (a + b);
        if (!(x_next > a) || !(x_next < b)) x_next = 0.5 * (a + b);
        x = x_next;
        fx = f(x);
        if (b - a <= 4.0 * std::numeric_limits<double>::epsilon() *
                         (std::abs(a) + std::abs(b) + 1.0)) {
            out.root = x;
            out.f_root = fx;
            out.converged = std::abs(fx) <= f_tol;
            return out;
        }
    }
    out.root = x;
    out.f_root = fx;
    out.converged = std::abs(fx) <= f_tol;
    return out;
}

struct ScanReport {
    std::vector<RootResult> roots;  // all refined roots, in ascending order
    int evaluated = 0;              // grid points where g was defined
    int failed = 0;                 // grid points where the inner solve failed
    int refine_failures = 0;        // refinements aborted by an inner failure
    int iterations = 0;             // total refinement iterations
};

namespace detail {
struct InnerEvalFailure {};
}

// Uniform scan of g over [box.lo, box.hi] followed by independent refinement
// of every sign change between consecutive evaluable points. g returns
// nullopt where its inner problem has no solution; such points shrink the
// effective bracket instead of aborting the scan.
template <class G>
ScanReport scan_and_refine(G&& g, Interval box, int scan_points, double f_tol,
                           int max_iter) {
    ScanReport report;
    if (box.empty()) return report;
    const int n = std::max(scan_points, 2);
    const double step = box.width() / (n - 1);

    auto g_or_throw = [&](double x) {
        const std::optional<double> v = g(x);
        if (!v) throw detail::InnerEvalFailure{};
        return *v;
    };

    bool have_prev = false;
    double x_prev = 0.0, g_prev = 0.0;
    for (int i = 0; i < n; ++i) {
        const double x = (i == n - 1) ? box.hi : box.lo + i * step;
        const std::optional<double> gv = g(x);
        if (!gv) {
            ++report.failed;
            have_prev = false;
            continue;
        }
        ++report.evaluated;
        const double gx = *gv;
        if (std::abs(gx) <= f_tol) {
            report.roots.push_back({x, gx, 0, true});
            have_prev = false;  // do not re-detect across this exact root
            continue;
        }
        if (have_prev && g_prev * gx < 0.0) {
            try {
                RootResult r = find_root_bracketed(g_or_throw, x_prev, x, g_prev, gx,
                                                   f_tol, max_iter);
                report.iterations += r.iterations;
                if (r.converged) report.roots.push_back(r);
            } catch (const detail::InnerEvalFailure&) {
                ++report.refine_failures;
            }
        }
        have_prev = true;
        x_prev = x;
        g_prev = gx;
    }

    // Merge refinements that landed on the same root from adjacent panels.
    std::sort(report.roots.begin(), report.roots.end(),
              [](const RootResult& a, const RootResult& b) { return a.root < b.root; });
    const double merge_tol = std::max(1e-12, 1e-9 * box.width());
    std::vector<RootResult> unique;
    for (const RootResult& r : report.roots) {
        if (!unique.empty() && std::abs(r.root - unique.back().root) <= merge_tol) {
            if (std::abs(r.f_root) < std::abs(unique.back().f_root)) unique.back() = r;
        } else {
            unique.push_back(r);
        }
    }
    report.roots = std::move(unique);
    return report;
}

} // namespace jointvol
