#pragma once

#include "tplcnn/errors.hpp"

#include <cmath>
#include <cstdint>
#include <limits>
#include <numbers>
#include <optional>
#include <random>
#include <vector>

namespace tplcnn {

/// Optional stochastic-tunneling parameters. Charge is measured in
/// electrons, voltage in e/C, time in RC, energy in e^2/C.
struct StochasticParams {
    double tunnel_resistance_ratio = 1.0; ///< r_t, tunnel resistance relative to the series R
    double temperature = 0.0;             ///< theta = kT / (e^2/C)
    std::uint64_t rng_seed = 0;
};

/// One resistively loaded tunnel junction under a sinusoidal pump.
/// All quantities are normalized: voltage in units of e/C, time in RC.
struct ElementParams {
    double v_dc = 0.0;       ///< dc bias
    double v_ac = 0.0;       ///< pump amplitude
    double pump_period = 1.0;
    double pump_phase = 0.0; ///< radians
    double resistance = 1.0; ///< series resistance, relative
    double threshold = 0.5;  ///< tunneling threshold (Coulomb blockade voltage e/2C)
    std::optional<StochasticParams> stochastic;

    void validate() const
    {
        if (pump_period <= 0.0) throw ConfigError("pump_period must be > 0");
        if (resistance <= 0.0) throw ConfigError("resistance must be > 0");
        if (threshold <= 0.0) throw ConfigError("threshold must be > 0");
        if (v_ac < 0.0) throw ConfigError("v_ac must be >= 0");
        if (stochastic) {
            if (stochastic->tunnel_resistance_ratio <= 0.0)
                throw ConfigError("tunnel_resistance_ratio must be > 0");
            if (stochastic->temperature < 0.0)
                throw ConfigError("temperature must be >= 0");
        }
    }
};

struct ElementState {
    double charge = 0.0; ///< junction charge; equals junction voltage in normalized units
    double time = 0.0;
};

/// Timestamped record of tunneling events.
struct EventTrain {
    std::vector<double> events;
    double pump_period = 1.0;
};

inline double pump_voltage(const ElementParams& p, double tau)
{
    return p.v_dc +
           p.v_ac * std::sin(2.0 * std::numbers::pi * tau / p.pump_period + p.pump_phase);
}

namespace detail {

/// dq/dtau for the series-RC charging path; inter-event leakage through
/// the tunnel resistance is neglected.
inline double charge_rate(const ElementParams& p, double tau, double q)
{
    return (pump_voltage(p, tau) - q) / p.resistance;
}

/// One classical RK4 step of size h from (tau, q).
inline double rk4_charge(const ElementParams& p, double tau, double q, double h)
{
    const double k1 = charge_rate(p, tau, q);
    const double k2 = charge_rate(p, tau + 0.5 * h, q + 0.5 * h * k1);
    const double k3 = charge_rate(p, tau + 0.5 * h, q + 0.5 * h * k2);
    const double k4 = charge_rate(p, tau + h, q + h * k3);
    return q + h / 6.0 * (k1 + 2.0 * k2 + 2.0 * k3 + k4);
}

/// Orthodox tunneling rate for energy gain dE = q - v_th (normalized).
inline double tunnel_rate(double delta_e, const StochasticParams& s)
{
    if (s.temperature <= 0.0) {
        return delta_e > 0.0 ? delta_e / s.tunnel_resistance_ratio : 0.0;
    }
    const double x = delta_e / s.temperature;
    // delta_e / (1 - exp(-x)) -> theta as delta_e -> 0
    if (std::abs(x) < 1e-12) return s.temperature / s.tunnel_resistance_ratio;
    return delta_e / (s.tunnel_resistance_ratio * -std::expm1(-x));
}

constexpr int kMaxEventsPerStep = 100;
constexpr double kCrossingTol = 1e-9;

} // namespace detail

/// Advance the element by dt, firing q -> q-1 whenever the charge crosses
/// the threshold. Crossing instants are refined by bisection on the
/// RK4-bracketed interval. Returns the event times inside the step.
/// In stochastic mode the seeded generator must be supplied; events are
/// sampled as exponential waiting times at the step-start rate.
inline std::vector<double> step_element(ElementState& state, const ElementParams& params,
                                        double dt, std::mt19937_64* rng = nullptr)
{
    if (dt <= 0.0) throw DomainError("step_element requires dt > 0");
    std::vector<double> fired;
    const bool stochastic = params.stochastic.has_value();
    if (stochastic && rng == nullptr) {
        throw DomainError("stochastic mode requires a generator");
    }

    double remaining = dt;
    while (true) {
        if (!stochastic) {
            // Immediate (possibly cascaded) firing at the current instant.
            while (state.charge >= params.threshold) {
                state.charge -= 1.0;
                fired.push_back(state.time);
                if (static_cast<int>(fired.size()) > detail::kMaxEventsPerStep) {
                    throw CascadeOverflow("more than 100 events in one step");
                }
            }
        }
        if (remaining <= 0.0) break;

        if (stochastic) {
            const double rate =
                detail::tunnel_rate(state.charge - params.threshold, *params.stochastic);
            double wait = std::numeric_limits<double>::infinity();
            if (rate > 0.0) {
                std::uniform_real_distribution<double> uni(0.0, 1.0);
                double u = uni(*rng);
                if (u <= 0.0) u = std::numeric_limits<double>::min();
                wait = -std::log(u) / rate;
            }
            if (wait < remaining) {
                state.charge = detail::rk4_charge(params, state.time, state.charge, wait);
                state.time += wait;
                remaining -= wait;
                state.charge -= 1.0;
                fired.push_back(state.time);
                if (static_cast<int>(fired.size()) > detail::kMaxEventsPerStep) {
                    throw CascadeOverflow("more than 100 events in one step");
                }
                continue;
            }
            state.charge = detail::rk4_charge(params, state.time, state.charge, remaining);
            state.time += remaining;
            remaining = 0.0;
            continue;
        }

        const double q_end = detail::rk4_charge(params, state.time, state.charge, remaining);
        if (q_end < params.threshold) {
            state.charge = q_end;
            state.time += remaining;
            remaining = 0.0;
            continue;
        }
        // Bisect the first crossing: charge stays below threshold at lo,
        // reaches it at hi.
        double lo = 0.0;
        double hi = remaining;
        while (hi - lo > detail::kCrossingTol) {
            const double mid = 0.5 * (lo + hi);
            const double qm = detail::rk4_charge(params, state.time, state.charge, mid);
            if (qm >= params.threshold) {
                hi = mid;
            } else {
                lo = mid;
            }
        }
        state.charge = detail::rk4_charge(params, state.time, state.charge, hi);
        state.time += hi;
        remaining -= hi;
        // The loop head applies the reset and records the event.
    }
    return fired;
}

/// Run one element from charge q0 over [0, tau_end] with fixed step dt.
/// Deterministic mode is bit-reproducible for identical inputs.
inline EventTrain simulate_element(const ElementParams& params, double q0, double tau_end,
                                   double dt)
{
    params.validate();
    if (tau_end <= 0.0) throw DomainError("simulate_element requires tau_end > 0");
    if (dt <= 0.0) throw DomainError("simulate_element requires dt > 0");

    std::mt19937_64 rng;
    std::mt19937_64* rng_ptr = nullptr;
    if (params.stochastic) {
        rng.seed(params.stochastic->rng_seed);
        rng_ptr = &rng;
    }

    ElementState state{q0, 0.0};
    EventTrain train;
    train.pump_period = params.pump_period;
    while (state.time < tau_end) {
        const double h = std::min(dt, tau_end - state.time);
        auto events = step_element(state, params, h, rng_ptr);
        train.events.insert(train.events.end(), events.begin(), events.end());
    }
    return train;
}

/// Relaxation-oscillation frequency of the unpumped element,
/// 1 / (r * ln((v_dc + v_th) / (v_dc - v_th))), or nothing when the bias
/// never reaches threshold.
inline std::optional<double> natural_frequency(const ElementParams& params)
{
    if (params.v_ac != 0.0) {
        throw DomainError("natural_frequency is defined for v_ac = 0 only");
    }
    if (params.v_dc <= params.threshold) return std::nullopt;
    const double period = params.resistance *
                          std::log((params.v_dc + params.threshold) /
                                   (params.v_dc - params.threshold));
    return 1.0 / period;
}

} // namespace tplcnn
