#pragma once

#include "tplcnn/errors.hpp"
#include "tplcnn/grid.hpp"

#include <cstdint>
#include <string>
#include <vector>

namespace tplcnn {

enum class Boundary { open, periodic, fixed_voltage };

/// Voltages of the virtual ring of nodes around the lattice, used only
/// with Boundary::fixed_voltage.
struct FixedBoundary {
    std::vector<double> top;    ///< width entries
    std::vector<double> bottom; ///< width entries
    std::vector<double> left;   ///< height entries
    std::vector<double> right;  ///< height entries
};

struct PumpParams {
    double v_ac = 0.0;
    double pump_period = 1.0;
    double pump_phase = 0.0;
};

/// 2D lattice of TPL elements with four-nearest-neighbor capacitive
/// coupling. Edge coupling grids are sized by the boundary rule:
///   open:     horizontal h x (w-1), vertical (h-1) x w
///   periodic: horizontal h x w (edge c wraps to column (c+1) mod w),
///             vertical   h x w
///   fixed:    horizontal h x (w+1) (edge c=0 connects the left boundary
///             node), vertical (h+1) x w
struct NetworkConfig {
    int height = 1;
    int width = 1;
    RealGrid bias;          ///< per-cell v_dc
    PumpParams pump;
    RealGrid coupling_h;
    RealGrid coupling_v;
    Boundary boundary = Boundary::open;
    FixedBoundary fixed;    ///< used only with fixed_voltage
    RealGrid resistance;    ///< per-cell series resistance
    double threshold = 0.5;
    double dt = 0.0;        ///< integration step; default pump_period / 256
    RealGrid initial_charge;
    std::uint64_t seed = 0; ///< reserved for stochastic lattice studies

    int cells() const { return height * width; }
    int cell_index(int r, int c) const { return r * width + c; }

    double step() const { return dt > 0.0 ? dt : pump.pump_period / 256.0; }

    void validate() const
    {
        if (height < 1 || width < 1) throw ConfigError("lattice must have height*width >= 1");
        if (pump.pump_period <= 0.0) throw ConfigError("pump_period must be > 0");
        if (pump.v_ac < 0.0) throw ConfigError("v_ac must be >= 0");
        if (threshold <= 0.0) throw ConfigError("threshold must be > 0");
        require_dims(bias, height, width, "bias");
        require_dims(resistance, height, width, "resistance");
        require_dims(initial_charge, height, width, "initial_charge");
        for (double r : resistance) {
            if (r <= 0.0) throw ConfigError("all resistances must be > 0");
        }
        int ch_rows = height, ch_cols = 0, cv_rows = 0, cv_cols = width;
        switch (boundary) {
            case Boundary::open:
                ch_cols = width - 1;
                cv_rows = height - 1;
                break;
            case Boundary::periodic:
                ch_cols = width;
                cv_rows = height;
                break;
            case Boundary::fixed_voltage:
                ch_cols = width + 1;
                cv_rows = height + 1;
                if (static_cast<int>(fixed.top.size()) != width ||
                    static_cast<int>(fixed.bottom.size()) != width ||
                    static_cast<int>(fixed.left.size()) != height ||
                    static_cast<int>(fixed.right.size()) != height) {
                    throw ConfigError("fixed boundary value vectors do not match the lattice");
                }
                break;
        }
        require_dims(coupling_h, ch_rows, ch_cols, "coupling_h");
        require_dims(coupling_v, cv_rows, cv_cols, "coupling_v");
        for (double c : coupling_h) {
            if (c < 0.0) throw ConfigError("coupling must be >= 0");
        }
        for (double c : coupling_v) {
            if (c < 0.0) throw ConfigError("coupling must be >= 0");
        }
    }

private:
    static void require_dims(const RealGrid& g, int rows, int cols, const char* name)
    {
        // Degenerate edge grids (zero columns/rows) are allowed.
        if (g.rows() != rows || g.cols() != cols) {
            throw ConfigError(std::string(name) + " grid is " + std::to_string(g.rows()) +
                              "x" + std::to_string(g.cols()) + ", expected " +
                              std::to_string(rows) + "x" + std::to_string(cols));
        }
    }
};

/// Convenience builder: uniform bias, coupling, resistance and initial
/// charge on an open or periodic lattice.
inline NetworkConfig make_uniform_network(int height, int width, double bias,
                                          double coupling, PumpParams pump,
                                          Boundary boundary = Boundary::open,
                                          double q0 = 0.0, double resistance = 1.0,
                                          double threshold = 0.5)
{
    NetworkConfig cfg;
    cfg.height = height;
    cfg.width = width;
    cfg.bias = RealGrid(height, width, bias);
    cfg.pump = pump;
    cfg.boundary = boundary;
    cfg.resistance = RealGrid(height, width, resistance);
    cfg.threshold = threshold;
    cfg.initial_charge = RealGrid(height, width, q0);
    switch (boundary) {
        case Boundary::open:
            cfg.coupling_h = RealGrid(height, width - 1, coupling);
            cfg.coupling_v = RealGrid(height - 1, width, coupling);
            break;
        case Boundary::periodic:
            cfg.coupling_h = RealGrid(height, width, coupling);
            cfg.coupling_v = RealGrid(height, width, coupling);
            break;
        case Boundary::fixed_voltage:
            cfg.coupling_h = RealGrid(height, width + 1, coupling);
            cfg.coupling_v = RealGrid(height + 1, width, coupling);
            cfg.fixed.top.assign(width, 0.0);
            cfg.fixed.bottom.assign(width, 0.0);
            cfg.fixed.left.assign(height, 0.0);
            cfg.fixed.right.assign(height, 0.0);
            break;
    }
    return cfg;
}

} // namespace tplcnn
