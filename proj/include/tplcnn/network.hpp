#pragma once

#include "tplcnn/capacitance.hpp"
#include "tplcnn/errors.hpp"
#include "tplcnn/grid.hpp"
#include "tplcnn/network_config.hpp"

#include <Eigen/Dense>

#include <cmath>
#include <numbers>
#include <utility>
#include <vector>

namespace tplcnn {

struct NetworkEvent {
    long cycle = 0;
    double time = 0.0;
    int row = 0;
    int col = 0;

    friend bool operator==(const NetworkEvent&, const NetworkEvent&) = default;
};

struct NetworkState {
    Eigen::VectorXd q;
    double time = 0.0;
    long cycle_index = 0;
    BoolGrid tunneled_this_cycle;
    std::vector<NetworkEvent> event_log;
};

/// Per-cycle snapshots plus the raw event record of one lattice run.
struct RunRecord {
    int height = 0;
    int width = 0;
    double pump_period = 1.0;
    std::vector<BoolGrid> phase_maps; ///< tunneled-this-cycle, one per pump cycle
    std::vector<NetworkEvent> events;
    NetworkState final_state;
};

/// Node voltages for the current charge grid.
inline Eigen::VectorXd voltages(const NetworkState& state, const CapacitanceOperator& op)
{
    return op.solve(state.q);
}

namespace detail {

constexpr int kMaxCascadePasses = 100;
constexpr int kMaxCrossingsPerStep = 100;
constexpr double kNetworkCrossingTol = 1e-9;

/// Fire every cell at or above threshold, update charges in row-major
/// order, re-solve, repeat until quiet. Returns fired cells and leaves
/// the post-cascade voltages in v.
inline std::vector<std::pair<int, int>> resolve_cascade(NetworkState& state,
                                                        const CapacitanceOperator& op,
                                                        double v_th, Eigen::VectorXd& v)
{
    std::vector<std::pair<int, int>> fired;
    const int w = op.width();
    v = op.solve(state.q);
    for (int pass = 0;; ++pass) {
        bool any = false;
        for (int i = 0; i < op.cells(); ++i) {
            if (v[i] >= v_th) {
                const int r = i / w;
                const int c = i % w;
                state.q[i] -= 1.0;
                state.tunneled_this_cycle(r, c) = 1;
                state.event_log.push_back({state.cycle_index, state.time, r, c});
                fired.emplace_back(r, c);
                any = true;
            }
        }
        if (!any) return fired;
        if (pass + 1 >= kMaxCascadePasses) {
            throw CascadeOverflow("tunnel cascade did not settle within 100 passes",
                                  state.cycle_index);
        }
        v = op.solve(state.q);
    }
}

/// Smallest t in (0, s] where the cubic Hermite interpolant of one cell's
/// voltage reaches v_th, assuming v0 < v_th <= v1.
inline double hermite_crossing(double v0, double d0, double v1, double d1, double s,
                               double v_th)
{
    auto eval = [&](double t) {
        const double u = t / s;
        const double h00 = (1 + 2 * u) * (1 - u) * (1 - u);
        const double h10 = u * (1 - u) * (1 - u);
        const double h01 = u * u * (3 - 2 * u);
        const double h11 = u * u * (u - 1);
        return h00 * v0 + h10 * s * d0 + h01 * v1 + h11 * s * d1;
    };
    double lo = 0.0, hi = s;
    while (hi - lo > 0.5 * kNetworkCrossingTol) {
        const double mid = 0.5 * (lo + hi);
        if (eval(mid) >= v_th) {
            hi = mid;
        } else {
            lo = mid;
        }
    }
    return hi;
}

/// One lattice integration step with event handling. `v_start` must hold
/// the voltages for state.q on entry and holds the end-of-step voltages
/// on exit.
inline std::vector<std::pair<int, int>> step_network_cached(NetworkState& state,
                                                            const NetworkConfig& cfg,
                                                            const CapacitanceOperator& op,
                                                            double h, Eigen::VectorXd& v_start)
{
    const int n = op.cells();
    const double tp = cfg.pump.pump_period;
    const double vth = cfg.threshold;

    // Pump drive per cell at time tau (per-cell dc bias riding on the
    // global ac pump).
    auto drive = [&](double tau, const Eigen::VectorXd& v, Eigen::VectorXd& dq) {
        const double ac =
            cfg.pump.v_ac *
            std::sin(2.0 * std::numbers::pi * tau / tp + cfg.pump.pump_phase);
        for (int i = 0; i < n; ++i) {
            const double pump = cfg.bias.data()[i] + ac;
            dq[i] = (pump - v[i]) / cfg.resistance.data()[i];
        }
    };

    std::vector<std::pair<int, int>> fired_total;

    // Initial cascade (only triggers when the caller seeded supra-threshold
    // charges).
    bool above = false;
    for (int i = 0; i < n; ++i) {
        if (v_start[i] >= vth) {
            above = true;
            break;
        }
    }
    if (above) {
        auto fired = resolve_cascade(state, op, vth, v_start);
        fired_total.insert(fired_total.end(), fired.begin(), fired.end());
    }

    Eigen::VectorXd k1(n), k2(n), k3(n), k4(n), tmp(n), v(n);
    double remaining = h;
    int crossings = 0;
    while (remaining > 0.0) {
        const double s = remaining;
        const double tau = state.time;
        drive(tau, v_start, k1);
        tmp = state.q + (0.5 * s) * k1;
        v = op.solve(tmp);
        drive(tau + 0.5 * s, v, k2);
        tmp = state.q + (0.5 * s) * k2;
        v = op.solve(tmp);
        drive(tau + 0.5 * s, v, k3);
        tmp = state.q + s * k3;
        v = op.solve(tmp);
        drive(tau + s, v, k4);
        Eigen::VectorXd q_end = state.q + (s / 6.0) * (k1 + 2.0 * k2 + 2.0 * k3 + k4);
        Eigen::VectorXd v_end = op.solve(q_end);

        if ((v_end.array() < vth).all()) {
            state.q = std::move(q_end);
            v_start = std::move(v_end);
            state.time = tau + s;
            remaining = 0.0;
            break;
        }

        if (++crossings > kMaxCrossingsPerStep) {
            throw CascadeOverflow("more than 100 crossing instants in one step",
                                  state.cycle_index);
        }

        // Refine the first crossing on the cubic Hermite interpolant of
        // each crossing cell's voltage over [0, s].
        Eigen::VectorXd dv0 = op.solve_rate(k1);
        drive(tau + s, v_end, tmp);
        Eigen::VectorXd dv1 = op.solve_rate(tmp);
        double t_cross = s;
        for (int i = 0; i < n; ++i) {
            if (v_end[i] >= vth && v_start[i] < vth) {
                const double t =
                    hermite_crossing(v_start[i], dv0[i], v_end[i], dv1[i], s, vth);
                if (t < t_cross) t_cross = t;
            }
        }
        if (t_cross < kNetworkCrossingTol) t_cross = kNetworkCrossingTol;
        if (t_cross > s) t_cross = s;

        // Advance to the crossing with a single RK4 substep (stage 1
        // reuses k1), cascade, then continue with the remainder.
        tmp = state.q + (0.5 * t_cross) * k1;
        v = op.solve(tmp);
        drive(tau + 0.5 * t_cross, v, k2);
        tmp = state.q + (0.5 * t_cross) * k2;
        v = op.solve(tmp);
        drive(tau + 0.5 * t_cross, v, k3);
        tmp = state.q + t_cross * k3;
        v = op.solve(tmp);
        drive(tau + t_cross, v, k4);
        state.q += (t_cross / 6.0) * (k1 + 2.0 * k2 + 2.0 * k3 + k4);
        state.time = tau + t_cross;
        remaining -= t_cross;

        auto fired = resolve_cascade(state, op, vth, v_start);
        fired_total.insert(fired_total.end(), fired.begin(), fired.end());
        // If the interpolant undershot, no cell fired; the next loop
        // iteration re-detects the crossing from a closer start point.
    }
    return fired_total;
}

} // namespace detail

/// Resolve all supra-threshold cells of the current state (cascade
/// semantics: every cell at or above threshold fires once per pass, in
/// row-major order, then voltages are re-solved).
inline std::vector<std::pair<int, int>> apply_tunnel_events(NetworkState& state,
                                                            const CapacitanceOperator& op,
                                                            double v_th)
{
    Eigen::VectorXd v;
    return detail::resolve_cascade(state, op, v_th, v);
}

/// Advance the lattice by one step of cfg.step().
inline std::vector<std::pair<int, int>> step_network(NetworkState& state,
                                                     const NetworkConfig& cfg,
                                                     const CapacitanceOperator& op)
{
    Eigen::VectorXd v = op.solve(state.q);
    return detail::step_network_cached(state, cfg, op, cfg.step(), v);
}

inline NetworkState make_initial_state(const NetworkConfig& cfg)
{
    NetworkState state;
    state.q = Eigen::VectorXd(cfg.cells());
    for (int i = 0; i < cfg.cells(); ++i) state.q[i] = cfg.initial_charge.data()[i];
    state.tunneled_this_cycle = BoolGrid(cfg.height, cfg.width, 0);
    return state;
}

/// Simulate n_cycles pump cycles and record one tunneled-this-cycle
/// snapshot per cycle. The step is snapped to an integer number of steps
/// per pump cycle so cycle boundaries land exactly on step boundaries.
inline RunRecord run_network(const NetworkConfig& cfg, int n_cycles)
{
    cfg.validate();
    if (n_cycles < 1) throw ConfigError("run_network requires n_cycles >= 1");

    CapacitanceOperator op = build_capacitance_operator(cfg);
    NetworkState state = make_initial_state(cfg);

    const double tp = cfg.pump.pump_period;
    const long steps_per_cycle = std::max(1L, std::lround(tp / cfg.step()));

    RunRecord record;
    record.height = cfg.height;
    record.width = cfg.width;
    record.pump_period = tp;
    record.phase_maps.reserve(n_cycles);

    Eigen::VectorXd v = op.solve(state.q);
    for (int cycle = 0; cycle < n_cycles; ++cycle) {
        state.cycle_index = cycle;
        for (long s = 0; s < steps_per_cycle; ++s) {
            // Recompute the step start from the cycle grid so time
            // quantization does not accumulate.
            const double target = (cycle + (s + 1.0) / steps_per_cycle) * tp;
            detail::step_network_cached(state, cfg, op, target - state.time, v);
        }
        record.phase_maps.push_back(state.tunneled_this_cycle);
        state.tunneled_this_cycle = BoolGrid(cfg.height, cfg.width, 0);
    }
    record.events = state.event_log;
    record.final_state = std::move(state);
    return record;
}

} // namespace tplcnn
