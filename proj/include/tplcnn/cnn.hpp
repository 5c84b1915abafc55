#pragma once

#include "tplcnn/errors.hpp"
#include "tplcnn/grid.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <fstream>
#include <sstream>
#include <string>

namespace tplcnn {

/// The 19-parameter space-invariant template: 3x3 feedback weights A,
/// 3x3 input weights B, and a bias z.
struct CnnTemplate {
    std::array<double, 9> a{};
    std::array<double, 9> b{};
    double z = 0.0;

    double a_at(int dr, int dc) const { return a[(dr + 1) * 3 + (dc + 1)]; }
    double b_at(int dr, int dc) const { return b[(dr + 1) * 3 + (dc + 1)]; }
};

struct CnnState {
    RealGrid x; ///< cell states
    RealGrid u; ///< inputs, constant during a run
    double t = 0.0;
};

/// Piecewise-linear saturation f(x) = (|x+1| - |x-1|) / 2: identity on
/// [-1, 1], clamped outside.
inline double saturation(double x)
{
    // Evaluated as a clamp so the [-1, 1] range holds exactly; the
    // absolute-value form can exceed it by one ulp.
    return std::clamp(x, -1.0, 1.0);
}

/// dx_ij/dt = -x_ij + z + sum A f(x_kl) + sum B u_kl over the 3x3
/// neighborhood, zero-padded at the grid boundary.
inline RealGrid cnn_derivative(const CnnState& state, const CnnTemplate& tpl)
{
    const RealGrid& x = state.x;
    const RealGrid& u = state.u;
    if (x.rows() != u.rows() || x.cols() != u.cols()) {
        throw ConfigError("state and input dimensions differ");
    }
    RealGrid dx(x.rows(), x.cols(), 0.0);
    for (int r = 0; r < x.rows(); ++r) {
        for (int c = 0; c < x.cols(); ++c) {
            double acc = -x(r, c) + tpl.z;
            for (int dr = -1; dr <= 1; ++dr) {
                for (int dc = -1; dc <= 1; ++dc) {
                    const int rr = r + dr;
                    const int cc = c + dc;
                    if (!x.in_bounds(rr, cc)) continue;
                    acc += tpl.a_at(dr, dc) * saturation(x(rr, cc));
                    acc += tpl.b_at(dr, dc) * u(rr, cc);
                }
            }
            dx(r, c) = acc;
        }
    }
    return dx;
}

struct CnnRunResult {
    RealGrid x_final;
    bool converged = false;
    double t_stop = 0.0;
};

/// RK4 integration of the state equation until max|dx| < tol or t_end.
inline CnnRunResult cnn_run(const RealGrid& x0, const RealGrid& u, const CnnTemplate& tpl,
                            double dt, double t_end, double tol)
{
    if (dt <= 0.0) throw ConfigError("cnn_run requires dt > 0");
    if (tol <= 0.0) throw ConfigError("cnn_run requires tol > 0");

    CnnState state{x0, u, 0.0};
    const int n = static_cast<int>(x0.size());

    auto axpy = [&](const RealGrid& base, double s, const RealGrid& d) {
        RealGrid out = base;
        for (int i = 0; i < n; ++i) out.data()[i] += s * d.data()[i];
        return out;
    };
    auto max_abs = [&](const RealGrid& g) {
        double m = 0.0;
        for (double v : g) m = std::max(m, std::abs(v));
        return m;
    };

    while (true) {
        RealGrid k1 = cnn_derivative(state, tpl);
        if (max_abs(k1) < tol) {
            return {state.x, true, state.t};
        }
        if (state.t >= t_end) {
            return {state.x, false, state.t};
        }
        const double h = std::min(dt, t_end - state.t);
        RealGrid k2 = cnn_derivative({axpy(state.x, 0.5 * h, k1), u, 0.0}, tpl);
        RealGrid k3 = cnn_derivative({axpy(state.x, 0.5 * h, k2), u, 0.0}, tpl);
        RealGrid k4 = cnn_derivative({axpy(state.x, h, k3), u, 0.0}, tpl);
        for (int i = 0; i < n; ++i) {
            state.x.data()[i] += h / 6.0 *
                                 (k1.data()[i] + 2.0 * k2.data()[i] + 2.0 * k3.data()[i] +
                                  k4.data()[i]);
        }
        state.t += h;
        if (max_abs(state.x) > 1e6) {
            throw NumericalBlowup("CNN state exceeded 1e6 at t = " + std::to_string(state.t));
        }
    }
}

/// Template file format: 19 whitespace-separated numbers, row-major A,
/// row-major B, then z.
inline CnnTemplate parse_cnn_template(std::istream& in)
{
    CnnTemplate tpl;
    for (int i = 0; i < 9; ++i) {
        if (!(in >> tpl.a[i])) throw ConfigError("template file needs 19 numbers");
    }
    for (int i = 0; i < 9; ++i) {
        if (!(in >> tpl.b[i])) throw ConfigError("template file needs 19 numbers");
    }
    if (!(in >> tpl.z)) throw ConfigError("template file needs 19 numbers");
    double extra;
    if (in >> extra) throw ConfigError("template file has more than 19 numbers");
    return tpl;
}

inline CnnTemplate load_cnn_template(const std::string& path)
{
    std::ifstream in(path);
    if (!in) throw IoError("cannot open template file: " + path);
    return parse_cnn_template(in);
}

} // namespace tplcnn
