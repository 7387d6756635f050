#pragma once

#include <algorithm>
#include <array>
#include <charconv>
#include <cmath>
#include <ostream>
#include <string>
#include <thread>
#include <vector>

#include "jointvol/calibrate.hpp"
#include "jointvol/mixture.hpp"

namespace jointvol {

struct SurfaceCell {
    SolveStatus status = SolveStatus::Degenerate;
    double sigma = std::numeric_limits<double>::quiet_NaN();
    double rho = std::numeric_limits<double>::quiet_NaN();
    int iterations = 0;
    double residual1 = std::numeric_limits<double>::quiet_NaN();
    double residual2 = std::numeric_limits<double>::quiet_NaN();
};

// Calibration results over a (K1, K2) strike grid, row-major in K1.
struct SurfaceGrid {
    std::vector<double> k1_axis;
    std::vector<double> k2_axis;
    std::vector<SurfaceCell> cells;

    const SurfaceCell& at(std::size_t i, std::size_t j) const {
        return cells[i * k2_axis.size() + j];
    }
    SurfaceCell& at(std::size_t i, std::size_t j) {
        return cells[i * k2_axis.size() + j];
    }
};

namespace detail {

inline void check_axis(const std::vector<double>& axis, const char* name) {
    if (axis.empty()) throw std::invalid_argument(std::string(name) + " axis is empty");
    for (std::size_t i = 0; i < axis.size(); ++i) {
        if (!(axis[i] > 0.0))
            throw std::invalid_argument(std::string(name) + " axis must be positive");
        if (i > 0 && !(axis[i] > axis[i - 1]))
            throw std::invalid_argument(std::string(name) + " axis must be strictly increasing");
    }
}

// The two-equation system loses rank on the diagonal; skip a small
// neighborhood of it.
inline bool near_diagonal(double k1, double k2) {
    return std::abs(k1 - k2) < 1e-6 * k2;
}

inline SurfaceCell solve_cell(const MixtureModel& model, double k1, double k2,
                              const SolverConfig& cfg) {
    SurfaceCell cell;
    if (near_diagonal(k1, k2)) return cell;  // Degenerate
    try {
        const auto [q1, q2] = quote_pair(model, OptionKind::Call, k1, k2);
        const ImpliedPair pair = implied_pair(q1, q2, model.spot, cfg);
        cell.status = pair.status;
        cell.sigma = pair.sigma_imp;
        cell.rho = pair.rho_imp;
        cell.iterations = pair.iterations;
        cell.residual1 = pair.residuals[0];
        cell.residual2 = pair.residuals[1];
    } catch (...) {
        // Cell-level failures never abort the sweep.
        cell.status = SolveStatus::InnerFailure;
    }
    return cell;
}

} // namespace detail

// Calibrate every off-diagonal cell of the (K1, K2) grid from quotes priced
// by the model. Cells are independent; with threads > 1 they are computed by
// a parallel map over fixed index ranges, each cell writing only its own
// slot, so the result is identical for any thread count.
inline SurfaceGrid implied_surface(const MixtureModel& model,
                                   std::vector<double> k1_axis,
                                   std::vector<double> k2_axis,
                                   const SolverConfig& cfg = {}, int threads = 1) {
    model.validate();
    cfg.validate();
    detail::check_axis(k1_axis, "k1");
    detail::check_axis(k2_axis, "k2");

    SurfaceGrid grid{std::move(k1_axis), std::move(k2_axis), {}};
    const std::size_t n1 = grid.k1_axis.size();
    const std::size_t n2 = grid.k2_axis.size();
    grid.cells.resize(n1 * n2);

    const auto worker = [&](std::size_t begin, std::size_t end) {
        for (std::size_t idx = begin; idx < end; ++idx) {
            const std::size_t i = idx / n2;
            const std::size_t j = idx % n2;
            grid.cells[idx] =
                detail::solve_cell(model, grid.k1_axis[i], grid.k2_axis[j], cfg);
        }
    };

    const std::size_t total = grid.cells.size();
    const std::size_t n_threads =
        std::min<std::size_t>(std::max(threads, 1), total);
    if (n_threads <= 1) {
        worker(0, total);
        return grid;
    }
    std::vector<std::thread> pool;
    pool.reserve(n_threads);
    const std::size_t chunk = (total + n_threads - 1) / n_threads;
    for (std::size_t t = 0; t < n_threads; ++t) {
        const std::size_t begin = t * chunk;
        const std::size_t end = std::min(begin + chunk, total);
        if (begin >= end) break;
        pool.emplace_back(worker, begin, end);
    }
    for (std::thread& th : pool) th.join();
    return grid;
}

// One calibration per K1 at a fixed K2: a 1-column surface.
inline SurfaceGrid smile_slice(const MixtureModel& model, std::vector<double> k1_axis,
                               double k2_fixed, const SolverConfig& cfg = {},
                               int threads = 1) {
    return implied_surface(model, std::move(k1_axis), {k2_fixed}, cfg, threads);
}

inline int converged_count(const SurfaceGrid& grid) {
    return static_cast<int>(
        std::count_if(grid.cells.begin(), grid.cells.end(), [](const SurfaceCell& c) {
            return c.status == SolveStatus::Converged;
        }));
}

// Shortest decimal representation that round-trips to the same double.
inline std::string format_double(double v) {
    std::array<char, 32> buf;
    const auto res = std::to_chars(buf.data(), buf.data() + buf.size(), v);
    return std::string(buf.data(), res.ptr);
}

// Long-form CSV, one row per cell, sorted by (k1, k2).
// Header is a stable contract.
inline void write_surface_csv(std::ostream& os, const SurfaceGrid& grid) {
    os << "k1,k2,sigma_imp,rho_imp,status,iterations,residual1,residual2\n";
    for (std::size_t i = 0; i < grid.k1_axis.size(); ++i) {
        for (std::size_t j = 0; j < grid.k2_axis.size(); ++j) {
            const SurfaceCell& c = grid.at(i, j);
            os << format_double(grid.k1_axis[i]) << ',' << format_double(grid.k2_axis[j])
               << ',' << format_double(c.sigma) << ',' << format_double(c.rho) << ','
               << to_string(c.status) << ',' << c.iterations << ','
               << format_double(c.residual1) << ',' << format_double(c.residual2)
               << '\n';
        }
    }
}

} // namespace jointvol
