// Brute-force lattice reference used only by tests: dense capacitance
// matrix solved by Gaussian elimination on every evaluation (no
// factorization reuse), RK4 at 1/64 of the configured step, crossings
// refined by bisection on re-integration. Kept independent of the
// library's network stepping path.
#pragma once

#include "tplcnn/network_config.hpp"

#include <cmath>
#include <numbers>
#include <stdexcept>
#include <vector>

namespace oracle {

struct OracleEvent {
    long cycle;
    double time;
    int row;
    int col;
};

struct OracleResult {
    std::vector<OracleEvent> events;
    std::vector<std::vector<std::uint8_t>> phase_maps; // per cycle, row-major
    std::vector<double> final_q;
    std::vector<double> final_v;
};

class DenseOracle {
public:
    explicit DenseOracle(const tplcnn::NetworkConfig& cfg) : cfg_(cfg), n_(cfg.cells())
    {
        mat_.assign(n_, std::vector<double>(n_, 0.0));
        rhs_fixed_.assign(n_, 0.0);
        for (int i = 0; i < n_; ++i) mat_[i][i] = 1.0;

        auto couple = [&](int a, int b, double c) {
            mat_[a][a] += c;
            mat_[b][b] += c;
            mat_[a][b] -= c;
            mat_[b][a] -= c;
        };
        auto couple_fixed = [&](int a, double c, double vb) {
            mat_[a][a] += c;
            rhs_fixed_[a] += c * vb;
        };
        const int h = cfg.height, w = cfg.width;
        using tplcnn::Boundary;
        switch (cfg.boundary) {
            case Boundary::open:
                for (int r = 0; r < h; ++r)
                    for (int c = 0; c + 1 < w; ++c)
                        couple(idx(r, c), idx(r, c + 1), cfg.coupling_h(r, c));
                for (int r = 0; r + 1 < h; ++r)
                    for (int c = 0; c < w; ++c)
                        couple(idx(r, c), idx(r + 1, c), cfg.coupling_v(r, c));
                break;
            case Boundary::periodic:
                for (int r = 0; r < h; ++r)
                    for (int c = 0; c < w; ++c) {
                        if (w > 1) couple(idx(r, c), idx(r, (c + 1) % w), cfg.coupling_h(r, c));
                        if (h > 1) couple(idx(r, c), idx((r + 1) % h, c), cfg.coupling_v(r, c));
                    }
                break;
            case Boundary::fixed_voltage:
                for (int r = 0; r < h; ++r) {
                    couple_fixed(idx(r, 0), cfg.coupling_h(r, 0), cfg.fixed.left[r]);
                    couple_fixed(idx(r, w - 1), cfg.coupling_h(r, w), cfg.fixed.right[r]);
                    for (int c = 0; c + 1 < w; ++c)
                        couple(idx(r, c), idx(r, c + 1), cfg.coupling_h(r, c + 1));
                }
                for (int c = 0; c < w; ++c) {
                    couple_fixed(idx(0, c), cfg.coupling_v(0, c), cfg.fixed.top[c]);
                    couple_fixed(idx(h - 1, c), cfg.coupling_v(h, c), cfg.fixed.bottom[c]);
                }
                for (int r = 0; r + 1 < h; ++r)
                    for (int c = 0; c < w; ++c)
                        couple(idx(r, c), idx(r + 1, c), cfg.coupling_v(r + 1, c));
                break;
        }
    }

    std::vector<double> voltages(const std::vector<double>& q) const
    {
        // Fresh Gaussian elimination with partial pivoting every call.
        std::vector<std::vector<double>> a = mat_;
        std::vector<double> b(n_);
        for (int i = 0; i < n_; ++i) b[i] = q[i] + rhs_fixed_[i];
        for (int col = 0; col < n_; ++col) {
            int piv = col;
            for (int r = col + 1; r < n_; ++r)
                if (std::abs(a[r][col]) > std::abs(a[piv][col])) piv = r;
            std::swap(a[piv], a[col]);
            std::swap(b[piv], b[col]);
            if (a[col][col] == 0.0) throw std::runtime_error("oracle matrix singular");
            for (int r = col + 1; r < n_; ++r) {
                const double f = a[r][col] / a[col][col];
                if (f == 0.0) continue;
                for (int c = col; c < n_; ++c) a[r][c] -= f * a[col][c];
                b[r] -= f * b[col];
            }
        }
        std::vector<double> x(n_, 0.0);
        for (int r = n_ - 1; r >= 0; --r) {
            double acc = b[r];
            for (int c = r + 1; c < n_; ++c) acc -= a[r][c] * x[c];
            x[r] = acc / a[r][r];
        }
        return x;
    }

    OracleResult run(int n_cycles) const
    {
        const double tp = cfg_.pump.pump_period;
        const long coarse_steps = std::max(1L, std::lround(tp / cfg_.step()));
        const long steps = coarse_steps * 64;
        std::vector<double> q(n_);
        for (int i = 0; i < n_; ++i) q[i] = cfg_.initial_charge.data()[i];

        OracleResult out;
        std::vector<std::uint8_t> fired_cycle(n_, 0);
        double time = 0.0;
        for (int cycle = 0; cycle < n_cycles; ++cycle) {
            for (long s = 0; s < steps; ++s) {
                const double target = (cycle + (s + 1.0) / steps) * tp;
                advance(q, time, target, cycle, fired_cycle, out.events);
            }
            out.phase_maps.push_back(fired_cycle);
            fired_cycle.assign(n_, 0);
        }
        out.final_q = q;
        out.final_v = voltages(q);
        return out;
    }

private:
    int idx(int r, int c) const { return r * cfg_.width + c; }

    std::vector<double> derivative(double tau, const std::vector<double>& q) const
    {
        const std::vector<double> v = voltages(q);
        const double ac = cfg_.pump.v_ac *
                          std::sin(2.0 * std::numbers::pi * tau / cfg_.pump.pump_period +
                                   cfg_.pump.pump_phase);
        std::vector<double> dq(n_);
        for (int i = 0; i < n_; ++i) {
            dq[i] = (cfg_.bias.data()[i] + ac - v[i]) / cfg_.resistance.data()[i];
        }
        return dq;
    }

    std::vector<double> rk4(double tau, const std::vector<double>& q, double h) const
    {
        auto k1 = derivative(tau, q);
        std::vector<double> t(n_);
        for (int i = 0; i < n_; ++i) t[i] = q[i] + 0.5 * h * k1[i];
        auto k2 = derivative(tau + 0.5 * h, t);
        for (int i = 0; i < n_; ++i) t[i] = q[i] + 0.5 * h * k2[i];
        auto k3 = derivative(tau + 0.5 * h, t);
        for (int i = 0; i < n_; ++i) t[i] = q[i] + h * k3[i];
        auto k4 = derivative(tau + h, t);
        std::vector<double> out(n_);
        for (int i = 0; i < n_; ++i) {
            out[i] = q[i] + h / 6.0 * (k1[i] + 2.0 * k2[i] + 2.0 * k3[i] + k4[i]);
        }
        return out;
    }

    bool any_above(const std::vector<double>& v) const
    {
        for (double x : v)
            if (x >= cfg_.threshold) return true;
        return false;
    }

    void cascade(std::vector<double>& q, double time, long cycle,
                 std::vector<std::uint8_t>& fired_cycle,
                 std::vector<OracleEvent>& events) const
    {
        for (int pass = 0; pass < 100; ++pass) {
            const std::vector<double> v = voltages(q);
            bool any = false;
            for (int i = 0; i < n_; ++i) {
                if (v[i] >= cfg_.threshold) {
                    q[i] -= 1.0;
                    fired_cycle[i] = 1;
                    events.push_back({cycle, time, i / cfg_.width, i % cfg_.width});
                    any = true;
                }
            }
            if (!any) return;
        }
        throw std::runtime_error("oracle cascade overflow");
    }

    void advance(std::vector<double>& q, double& time, double target, long cycle,
                 std::vector<std::uint8_t>& fired_cycle,
                 std::vector<OracleEvent>& events) const
    {
        cascade(q, time, cycle, fired_cycle, events);
        while (time < target) {
            const double h = target - time;
            std::vector<double> q_end = rk4(time, q, h);
            if (!any_above(voltages(q_end))) {
                q = q_end;
                time = target;
                return;
            }
            // Bisection on the re-integrated single step.
            double lo = 0.0, hi = h;
            while (hi - lo > 1e-9) {
                const double mid = 0.5 * (lo + hi);
                if (any_above(voltages(rk4(time, q, mid)))) {
                    hi = mid;
                } else {
                    lo = mid;
                }
            }
            q = rk4(time, q, hi);
            time += hi;
            cascade(q, time, cycle, fired_cycle, events);
        }
    }

    tplcnn::NetworkConfig cfg_;
    int n_;
    std::vector<std::vector<double>> mat_;
    std::vector<double> rhs_fixed_;
};

} // namespace oracle
