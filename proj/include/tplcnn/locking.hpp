#pragma once

#include "tplcnn/element.hpp"
#include "tplcnn/errors.hpp"

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <limits>
#include <numbers>
#include <optional>
#include <string>
#include <thread>
#include <vector>

namespace tplcnn {

/// Classification of an event train relative to the pump.
struct LockResult {
    std::optional<int> lock_order;            ///< n: one event per n pump cycles
    double phase_mean = 0.0;                  ///< event phase in the n-cycle frame, units of T_p
    double jitter = 0.0;                      ///< circular std of the phase, units of T_p
    std::optional<std::vector<int>> coded_sequence; ///< repeating inter-event cycle counts
    int event_count = 0;

    bool locked() const { return lock_order.has_value(); }
};

struct LockOptions {
    double jitter_threshold = 0.05; ///< in units of T_p
    double rate_tolerance = 0.05;   ///< |mean cycles per event - n| for a lock claim
    int max_code_length = 16;
    int min_events = 8;
};

/// Classify the post-transient window of an event train: integer
/// subharmonic lock, a repeating coded cycle-count pattern, or unlocked.
inline LockResult detect_lock(const EventTrain& train, int transient_cycles,
                              int window_cycles, const LockOptions& opts = {})
{
    const double tp = train.pump_period;
    const double t0 = transient_cycles * tp;
    const double t1 = (transient_cycles + static_cast<double>(window_cycles)) * tp;

    std::vector<double> times;
    for (double t : train.events) {
        if (t >= t0 && t < t1) times.push_back(t);
    }

    LockResult res;
    res.event_count = static_cast<int>(times.size());
    if (times.empty()) return res; // silent window: unlocked
    if (res.event_count < opts.min_events) {
        throw InsufficientData("lock window has " + std::to_string(res.event_count) +
                               " events, need >= " + std::to_string(opts.min_events));
    }

    std::vector<long> cycles(times.size());
    for (std::size_t i = 0; i < times.size(); ++i) {
        cycles[i] = static_cast<long>(std::floor(times[i] / tp));
    }
    std::vector<int> gaps(times.size() - 1);
    for (std::size_t i = 0; i + 1 < times.size(); ++i) {
        gaps[i] = static_cast<int>(cycles[i + 1] - cycles[i]);
    }

    // Lock candidate from the mean event rate: a train locked at order n
    // whose phase sits near a cycle boundary shows alternating cycle gaps
    // (e.g. 1,3,1,3 for n = 2), so constant gaps are not required.
    const double mean_cycles =
        (times.back() - times.front()) / ((times.size() - 1) * tp);
    const int n_candidate = static_cast<int>(std::lround(mean_cycles));

    if (n_candidate >= 1 && std::abs(mean_cycles - n_candidate) < opts.rate_tolerance) {
        const int n = n_candidate;
        // Circular statistics over the n*T_p frame, so a phase straddling
        // the frame boundary does not masquerade as jitter.
        const double frame = n * tp;
        double sx = 0.0, sy = 0.0;
        for (double t : times) {
            const double a = 2.0 * std::numbers::pi * std::fmod(t, frame) / frame;
            sx += std::cos(a);
            sy += std::sin(a);
        }
        const double r = std::sqrt(sx * sx + sy * sy) / static_cast<double>(times.size());
        double mean_angle = std::atan2(sy, sx);
        if (mean_angle < 0.0) mean_angle += 2.0 * std::numbers::pi;
        const double circ_std = r > 0.0 ? std::sqrt(std::max(0.0, -2.0 * std::log(r)))
                                        : std::numeric_limits<double>::infinity();
        const double phase_mean = mean_angle / (2.0 * std::numbers::pi) * n; // units of T_p
        const double jitter = circ_std / (2.0 * std::numbers::pi) * n;       // units of T_p
        res.phase_mean = phase_mean;
        res.jitter = jitter;
        if (jitter < opts.jitter_threshold) {
            res.lock_order = n;
            return res;
        }
    }

    // Coded sequence: smallest repeat length L with at least two full
    // repetitions of positive cycle counts.
    for (int len = 1; len <= opts.max_code_length; ++len) {
        if (static_cast<int>(gaps.size()) < 2 * len) break;
        bool periodic = true;
        for (std::size_t i = static_cast<std::size_t>(len); i < gaps.size(); ++i) {
            if (gaps[i] != gaps[i - len]) {
                periodic = false;
                break;
            }
        }
        if (!periodic) continue;
        bool positive = true;
        for (int i = 0; i < len; ++i) {
            if (gaps[i] < 1) positive = false;
        }
        if (!positive) break;
        res.coded_sequence = std::vector<int>(gaps.begin(), gaps.begin() + len);
        return res;
    }
    return res;
}

struct SweepAxes {
    std::vector<double> v_dc;
    std::vector<double> v_ac;
    std::vector<double> pump_period;
};

struct SweepPoint {
    double v_dc = 0.0;
    double v_ac = 0.0;
    double pump_period = 0.0;
    LockResult result;
    bool error = false;
    std::string error_message;
};

/// Simulate every axis combination and classify its locking. Rows are
/// emitted in v_dc-major, v_ac, pump-period order; per-point failures are
/// recorded as unlocked-with-error. Results are identical for any thread
/// count.
inline std::vector<SweepPoint> sweep_lock_map(const ElementParams& base,
                                              const SweepAxes& axes, double q0, int cycles,
                                              int transient_cycles = -1, int threads = 1,
                                              const LockOptions& opts = {},
                                              int steps_per_cycle = 256)
{
    if (axes.v_dc.empty() || axes.v_ac.empty() || axes.pump_period.empty()) {
        throw ConfigError("sweep axes must be nonempty");
    }
    if (cycles < 1) throw ConfigError("sweep needs cycles >= 1");
    if (transient_cycles < 0) transient_cycles = cycles / 4;
    const int window = cycles - transient_cycles;
    if (window < 1) throw ConfigError("sweep transient leaves no analysis window");

    const std::size_t n_points = axes.v_dc.size() * axes.v_ac.size() * axes.pump_period.size();
    std::vector<SweepPoint> table(n_points);

    auto run_point = [&](std::size_t idx) {
        const std::size_t n_tp = axes.pump_period.size();
        const std::size_t n_ac = axes.v_ac.size();
        const std::size_t i_dc = idx / (n_ac * n_tp);
        const std::size_t i_ac = (idx / n_tp) % n_ac;
        const std::size_t i_tp = idx % n_tp;

        SweepPoint& pt = table[idx];
        pt.v_dc = axes.v_dc[i_dc];
        pt.v_ac = axes.v_ac[i_ac];
        pt.pump_period = axes.pump_period[i_tp];
        ElementParams p = base;
        p.v_dc = pt.v_dc;
        p.v_ac = pt.v_ac;
        p.pump_period = pt.pump_period;
        try {
            const double dt = p.pump_period / steps_per_cycle;
            EventTrain train = simulate_element(p, q0, cycles * p.pump_period, dt);
            pt.result = detect_lock(train, transient_cycles, window, opts);
        } catch (const std::exception& e) {
            pt.error = true;
            pt.error_message = e.what();
            pt.result = LockResult{};
        }
    };

    if (threads <= 1 || n_points < 2) {
        for (std::size_t i = 0; i < n_points; ++i) run_point(i);
    } else {
        const int n_workers = std::min<std::size_t>(threads, n_points);
        std::vector<std::thread> pool;
        pool.reserve(n_workers);
        for (int w = 0; w < n_workers; ++w) {
            pool.emplace_back([&, w] {
                for (std::size_t i = w; i < n_points; i += n_workers) run_point(i);
            });
        }
        for (auto& t : pool) t.join();
    }
    return table;
}

} // namespace tplcnn
