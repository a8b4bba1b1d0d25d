#pragma once

#include <array>
#include <cstddef>
#include <initializer_list>
#include <span>
#include <vector>

namespace geoglove::nn {

/// Dense row-major matrix of doubles. Vectors are 1 x n, scalars 1 x 1.
class Tensor {
public:
    Tensor() = default;
    Tensor(std::size_t rows, std::size_t cols, double fill = 0.0);
    /// Throws ShapeMismatch if data.size() != rows * cols.
    Tensor(std::size_t rows, std::size_t cols, std::vector<double> data);
    Tensor(std::initializer_list<std::initializer_list<double>> rows);

    static Tensor scalar(double v) { return Tensor(1, 1, v); }

    std::size_t rows() const noexcept { return rows_; }
    std::size_t cols() const noexcept { return cols_; }
    std::size_t size() const noexcept { return data_.size(); }
    std::array<std::size_t, 2> shape() const noexcept { return {rows_, cols_}; }
    bool same_shape(const Tensor& o) const noexcept { return rows_ == o.rows_ && cols_ == o.cols_; }

    double& operator()(std::size_t r, std::size_t c) { return data_[r * cols_ + c]; }
    double operator()(std::size_t r, std::size_t c) const { return data_[r * cols_ + c]; }
    double& operator[](std::size_t i) { return data_[i]; }
    double operator[](std::size_t i) const { return data_[i]; }

    std::span<double> data() noexcept { return data_; }
    std::span<const double> data() const noexcept { return data_; }
    const std::vector<double>& values() const noexcept { return data_; }

    double item() const;
    bool all_finite() const noexcept;
    void fill(double v);

    bool operator==(const Tensor&) const = default;

private:
    std::size_t rows_ = 0;
    std::size_t cols_ = 0;
    std::vector<double> data_;
};

}  // namespace geoglove::nn
