#pragma once

#include "tplcnn/errors.hpp"
#include "tplcnn/grid.hpp"
#include "tplcnn/pgm.hpp"

namespace tplcnn {

/// Image-to-bias encoding: pixel p maps linearly onto [v_lo, v_hi].
inline RealGrid bias_from_image(const GrayImage& img, double v_lo, double v_hi)
{
    return image_to_values(img, v_lo, v_hi);
}

enum class RampAxis { rows, columns };

/// Linear initial-charge ramp along the chosen axis, endpoints exact.
/// A degenerate axis (single row/column) yields a constant q_min grid.
inline RealGrid charge_gradient_init(int height, int width, double q_min, double q_max,
                                     RampAxis axis)
{
    if (q_min > q_max) throw ConfigError("charge gradient requires q_min <= q_max");
    if (height < 1 || width < 1) throw ConfigError("grid dimensions must be >= 1");
    RealGrid g(height, width);
    const int extent = axis == RampAxis::columns ? width : height;
    for (int r = 0; r < height; ++r) {
        for (int c = 0; c < width; ++c) {
            const int i = axis == RampAxis::columns ? c : r;
            const double t = extent > 1 ? static_cast<double>(i) / (extent - 1) : 0.0;
            g(r, c) = q_min + t * (q_max - q_min);
        }
    }
    return g;
}

/// Paint a filled rectangle (inclusive corners) onto a grid.
inline void paint_rect(RealGrid& g, int r0, int c0, int r1, int c1, double value)
{
    if (r0 > r1 || c0 > c1 || r0 < 0 || c0 < 0 || r1 >= g.rows() || c1 >= g.cols()) {
        throw ConfigError("rectangle out of grid bounds");
    }
    for (int r = r0; r <= r1; ++r)
        for (int c = c0; c <= c1; ++c) g(r, c) = value;
}

} // namespace tplcnn
