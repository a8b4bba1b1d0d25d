#include "geoglove/nn/tensor.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "geoglove/error.hpp"

namespace geoglove::nn {

Tensor::Tensor(std::size_t rows, std::size_t cols, double fill) : rows_(rows), cols_(cols), data_(rows * cols, fill) {}

Tensor::Tensor(std::size_t rows, std::size_t cols, std::vector<double> data)
    : rows_(rows), cols_(cols), data_(std::move(data)) {
    if (data_.size() != rows * cols)
        throw ShapeMismatch("tensor data length " + std::to_string(data_.size()) + " does not match " +
                            std::to_string(rows) + "x" + std::to_string(cols));
}

Tensor::Tensor(std::initializer_list<std::initializer_list<double>> rows) {
    rows_ = rows.size();
    cols_ = rows_ ? rows.begin()->size() : 0;
    for (const auto& r : rows) {
        if (r.size() != cols_) throw ShapeMismatch("ragged tensor literal");
        data_.insert(data_.end(), r.begin(), r.end());
    }
}

double Tensor::item() const {
    if (data_.size() != 1) throw ShapeMismatch("item() on a tensor with " + std::to_string(data_.size()) + " elements");
    return data_[0];
}

bool Tensor::all_finite() const noexcept {
    return std::all_of(data_.begin(), data_.end(), [](double v) { return std::isfinite(v); });
}

void Tensor::fill(double v) { std::fill(data_.begin(), data_.end(), v); }

}  // namespace geoglove::nn
