/**
 * @file scan.hpp
 * @brief Classification of one fiber against h and the parallel momentum scan
 *        shared by the strip and annulus models.
 */
#pragma once

#include <algorithm>
#include <atomic>
#include <cmath>
#include <exception>
#include <functional>
#include <map>
#include <mutex>
#include <thread>
#include <vector>

#include "boundary_effect.hpp"
#include "core_types.hpp"
#include "tridiag.hpp"

namespace bandcount {

/// Fibers whose double-precision lambda_0 is farther than this fraction of h
/// from h are classified directly.
inline constexpr double kDirectBand = 1e-2;

struct ScanOptions {
    SolverConfig solver;
    /// Worker threads; 0 means the available hardware parallelism.
    unsigned jobs = 0;
    bool with_lambda1 = true;
};

inline unsigned resolve_jobs(unsigned jobs) {
    if (jobs > 0) return jobs;
    return std::max(1u, std::thread::hardware_concurrency());
}

/**
 * lambda_0 of one fiber relative to h. Far from h the Richardson value
 * decides; near h the lattice boundary effect does (see boundary_effect).
 */
inline MomentumSample classify_fiber(FiberProblem const& p, ScanOptions const& opt = {}) {
    MomentumSample s;
    auto const r0 = richardson_eigenvalue(p, 0, opt.solver);
    s.lambda0 = r0.value;
    if (std::abs(r0.value - p.h) > kDirectBand * p.h) {
        s.below = r0.value < p.h;
    } else {
        auto const e = boundary_effect<mp_real>(p, opt.solver);
        s.splitting = e.splitting;
        s.lambda0 = p.h + e.splitting;
        s.below = e.below;
        s.ambiguous = e.ambiguous;
    }
    if (opt.with_lambda1) s.lambda1 = richardson_eigenvalue(p, 1, opt.solver).value;
    return s;
}

/**
 * Evaluates `fn(m)` for m = lo..hi on worker threads. The result is keyed by
 * m, so it does not depend on the number of workers. The first exception
 * thrown by any worker is rethrown.
 */
template <class T>
std::map<long, T> parallel_map(long lo, long hi, unsigned jobs, std::function<T(long)> const& fn) {
    std::map<long, T> out;
    if (hi < lo) return out;
    std::vector<T> values(static_cast<std::size_t>(hi - lo + 1));
    std::atomic<long> next{lo};
    std::exception_ptr error;
    std::mutex error_mutex;
    auto worker = [&] {
        for (;;) {
            long const m = next.fetch_add(1);
            if (m > hi) return;
            try {
                values[static_cast<std::size_t>(m - lo)] = fn(m);
            } catch (...) {
                std::lock_guard lock(error_mutex);
                if (!error) error = std::current_exception();
                next = hi + 1;
            }
        }
    };
    unsigned const n = std::min<unsigned>(resolve_jobs(jobs), static_cast<unsigned>(hi - lo + 1));
    if (n <= 1) {
        worker();
    } else {
        std::vector<std::jthread> pool;
        for (unsigned i = 0; i < n; ++i) pool.emplace_back(worker);
    }
    if (error) std::rethrow_exception(error);
    for (long m = lo; m <= hi; ++m) out.emplace(m, std::move(values[static_cast<std::size_t>(m - lo)]));
    return out;
}

/// Fills count, ratio and ambiguous_m from ground_values.
inline void tally(CountResult& r) {
    r.count = 0;
    r.ambiguous_m.clear();
    for (auto const& [m, s] : r.ground_values) {
        if (s.ambiguous)
            r.ambiguous_m.push_back(m);
        else if (s.below)
            ++r.count;
    }
    r.ratio = r.predicted > 0 ? static_cast<double>(r.count) / r.predicted : 0.0;
}

/// Momenta whose lambda_1 is not strictly above h by more than `band` h.
inline std::vector<long> second_band_violations(CountResult const& r, double band = 1e-8) {
    std::vector<long> bad;
    for (auto const& [m, s] : r.ground_values)
        if (!(s.lambda1 > r.h * (1 + band))) bad.push_back(m);
    return bad;
}

}  // namespace bandcount
