#pragma once

#include "tplcnn/errors.hpp"
#include "tplcnn/network_config.hpp"

#include <Eigen/Sparse>
#include <Eigen/SparseCholesky>

#include <cassert>
#include <vector>

namespace tplcnn {

/// Factorized lattice capacitance matrix: self-capacitance 1 on the
/// diagonal plus incident couplings, -c per coupled pair. Fixed boundary
/// nodes are eliminated, their contribution moved to a constant
/// right-hand-side vector.
class CapacitanceOperator {
public:
    explicit CapacitanceOperator(const NetworkConfig& cfg)
        : height_(cfg.height), width_(cfg.width)
    {
        const int n = cfg.cells();
        std::vector<Eigen::Triplet<double>> trips;
        trips.reserve(static_cast<std::size_t>(n) * 5);
        std::vector<double> diag(n, 1.0);
        fixed_rhs_ = Eigen::VectorXd::Zero(n);

        auto couple = [&](int a, int b, double c) {
            if (c == 0.0) return;
            diag[a] += c;
            diag[b] += c;
            trips.emplace_back(a, b, -c);
            trips.emplace_back(b, a, -c);
        };
        auto couple_fixed = [&](int a, double c, double v_boundary) {
            if (c == 0.0) return;
            diag[a] += c;
            fixed_rhs_[a] += c * v_boundary;
        };

        const int h = cfg.height, w = cfg.width;
        switch (cfg.boundary) {
            case Boundary::open:
                for (int r = 0; r < h; ++r)
                    for (int c = 0; c + 1 < w; ++c)
                        couple(cfg.cell_index(r, c), cfg.cell_index(r, c + 1),
                               cfg.coupling_h(r, c));
                for (int r = 0; r + 1 < h; ++r)
                    for (int c = 0; c < w; ++c)
                        couple(cfg.cell_index(r, c), cfg.cell_index(r + 1, c),
                               cfg.coupling_v(r, c));
                break;
            case Boundary::periodic:
                for (int r = 0; r < h; ++r)
                    for (int c = 0; c < w; ++c) {
                        const int a = cfg.cell_index(r, c);
                        const int right = cfg.cell_index(r, (c + 1) % w);
                        const int down = cfg.cell_index((r + 1) % h, c);
                        if (right != a) couple(a, right, cfg.coupling_h(r, c));
                        if (down != a) couple(a, down, cfg.coupling_v(r, c));
                    }
                break;
            case Boundary::fixed_voltage:
                for (int r = 0; r < h; ++r) {
                    couple_fixed(cfg.cell_index(r, 0), cfg.coupling_h(r, 0), cfg.fixed.left[r]);
                    couple_fixed(cfg.cell_index(r, w - 1), cfg.coupling_h(r, w),
                                 cfg.fixed.right[r]);
                    for (int c = 0; c + 1 < w; ++c)
                        couple(cfg.cell_index(r, c), cfg.cell_index(r, c + 1),
                               cfg.coupling_h(r, c + 1));
                }
                for (int c = 0; c < w; ++c) {
                    couple_fixed(cfg.cell_index(0, c), cfg.coupling_v(0, c), cfg.fixed.top[c]);
                    couple_fixed(cfg.cell_index(h - 1, c), cfg.coupling_v(h, c),
                                 cfg.fixed.bottom[c]);
                }
                for (int r = 0; r + 1 < h; ++r)
                    for (int c = 0; c < w; ++c)
                        couple(cfg.cell_index(r, c), cfg.cell_index(r + 1, c),
                               cfg.coupling_v(r + 1, c));
                break;
        }
        for (int i = 0; i < n; ++i) trips.emplace_back(i, i, diag[i]);

        matrix_.resize(n, n);
        matrix_.setFromTriplets(trips.begin(), trips.end());
        matrix_.makeCompressed();
        has_fixed_rhs_ = !fixed_rhs_.isZero(0.0);
        solver_.compute(matrix_);
        // Cannot fail: the matrix is strictly diagonally dominant with
        // unit self-capacitance.
        assert(solver_.info() == Eigen::Success);
    }

    int height() const { return height_; }
    int width() const { return width_; }
    int cells() const { return height_ * width_; }

    const Eigen::SparseMatrix<double>& matrix() const { return matrix_; }
    const Eigen::VectorXd& fixed_rhs() const { return fixed_rhs_; }

    /// Node voltages for the given charge vector (fixed-boundary
    /// contribution included).
    Eigen::VectorXd solve(const Eigen::VectorXd& q) const
    {
        if (!has_fixed_rhs_) return solver_.solve(q);
        return solver_.solve((q + fixed_rhs_).eval());
    }

    /// Voltage rates for the given charge rates. Unlike solve(), the
    /// constant fixed-boundary term does not apply to derivatives.
    Eigen::VectorXd solve_rate(const Eigen::VectorXd& dq) const
    {
        return solver_.solve(dq);
    }

private:
    int height_;
    int width_;
    Eigen::SparseMatrix<double> matrix_;
    Eigen::VectorXd fixed_rhs_;
    bool has_fixed_rhs_ = false;
    Eigen::SimplicialLDLT<Eigen::SparseMatrix<double>> solver_;
};

inline CapacitanceOperator build_capacitance_operator(const NetworkConfig& cfg)
{
    cfg.validate();
    return CapacitanceOperator(cfg);
}

} // namespace tplcnn
