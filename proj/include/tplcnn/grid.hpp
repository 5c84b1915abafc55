#pragma once

#include "tplcnn/errors.hpp"

#include <cstdint>
#include <string>
#include <vector>

namespace tplcnn {

/// Dense row-major 2D container used for bias maps, charge grids and
/// phase maps.
template <typename T>
class Grid {
public:
    Grid() = default;
    Grid(int rows, int cols, T fill = T{})
        : rows_(rows), cols_(cols), data_(static_cast<std::size_t>(rows) * cols, fill)
    {
        if (rows < 0 || cols < 0) {
            throw ConfigError("grid dimensions must be non-negative");
        }
    }

    int rows() const { return rows_; }
    int cols() const { return cols_; }
    std::size_t size() const { return data_.size(); }
    bool empty() const { return data_.empty(); }

    T& operator()(int r, int c) { return data_[index(r, c)]; }
    const T& operator()(int r, int c) const { return data_[index(r, c)]; }

    T& at(int r, int c)
    {
        check(r, c);
        return data_[index(r, c)];
    }
    const T& at(int r, int c) const
    {
        check(r, c);
        return data_[index(r, c)];
    }

    bool in_bounds(int r, int c) const { return r >= 0 && r < rows_ && c >= 0 && c < cols_; }

    std::vector<T>& data() { return data_; }
    const std::vector<T>& data() const { return data_; }

    auto begin() { return data_.begin(); }
    auto end() { return data_.end(); }
    auto begin() const { return data_.begin(); }
    auto end() const { return data_.end(); }

    friend bool operator==(const Grid& a, const Grid& b)
    {
        return a.rows_ == b.rows_ && a.cols_ == b.cols_ && a.data_ == b.data_;
    }
    friend bool operator!=(const Grid& a, const Grid& b) { return !(a == b); }

private:
    std::size_t index(int r, int c) const
    {
        return static_cast<std::size_t>(r) * cols_ + c;
    }
    void check(int r, int c) const
    {
        if (!in_bounds(r, c)) {
            throw IndexOutOfRange("grid index (" + std::to_string(r) + "," +
                                  std::to_string(c) + ") out of range");
        }
    }

    int rows_ = 0;
    int cols_ = 0;
    std::vector<T> data_;
};

using BoolGrid = Grid<std::uint8_t>;
using RealGrid = Grid<double>;

} // namespace tplcnn
