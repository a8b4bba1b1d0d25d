#include <algorithm>
#include <cmath>
#include <iostream>
#include <numeric>

#include "geoglove/error.hpp"
#include "geoglove/reducers.hpp"

namespace geoglove {

using nn::Tensor;

Tensor covariance(const Tensor& data) {
    const std::size_t n = data.rows(), d = data.cols();
    Tensor cov(d, d);
    if (n < 2) return cov;
    std::vector<double> mean(d, 0.0);
    for (std::size_t r = 0; r < n; ++r)
        for (std::size_t c = 0; c < d; ++c) mean[c] += data(r, c);
    for (auto& m : mean) m /= static_cast<double>(n);
    std::vector<double> row(d);
    for (std::size_t r = 0; r < n; ++r) {
        for (std::size_t c = 0; c < d; ++c) row[c] = data(r, c) - mean[c];
        for (std::size_t i = 0; i < d; ++i)
            for (std::size_t j = i; j < d; ++j) cov(i, j) += row[i] * row[j];
    }
    const double denom = static_cast<double>(n - 1);
    for (std::size_t i = 0; i < d; ++i)
        for (std::size_t j = i; j < d; ++j) {
            cov(i, j) /= denom;
            cov(j, i) = cov(i, j);
        }
    return cov;
}

SymmetricEigen jacobi_eigen(const Tensor& symmetric, double tol, int max_sweeps) {
    const std::size_t n = symmetric.rows();
    if (symmetric.cols() != n) throw ShapeMismatch("jacobi_eigen: matrix is not square");
    Tensor a = symmetric;
    Tensor v(n, n);
    for (std::size_t i = 0; i < n; ++i) v(i, i) = 1.0;

    double scale = 1.0;
    for (double x : a.data()) scale = std::max(scale, std::abs(x));
    const double threshold = tol * scale;

    auto max_off = [&] {
        double m = 0.0;
        for (std::size_t p = 0; p < n; ++p)
            for (std::size_t q = p + 1; q < n; ++q) m = std::max(m, std::abs(a(p, q)));
        return m;
    };

    int sweeps = 0;
    while (sweeps < max_sweeps && max_off() >= threshold) {
        ++sweeps;
        for (std::size_t p = 0; p + 1 < n; ++p) {
            for (std::size_t q = p + 1; q < n; ++q) {
                const double apq = a(p, q);
                if (apq == 0.0) continue;
                const double theta = (a(q, q) - a(p, p)) / (2.0 * apq);
                const double t = (theta >= 0.0 ? 1.0 : -1.0) / (std::abs(theta) + std::sqrt(theta * theta + 1.0));
                const double c = 1.0 / std::sqrt(t * t + 1.0);
                const double s = t * c;
                for (std::size_t k = 0; k < n; ++k) {
                    const double akp = a(k, p), akq = a(k, q);
                    a(k, p) = c * akp - s * akq;
                    a(k, q) = s * akp + c * akq;
                }
                for (std::size_t k = 0; k < n; ++k) {
                    const double apk = a(p, k), aqk = a(q, k);
                    a(p, k) = c * apk - s * aqk;
                    a(q, k) = s * apk + c * aqk;
                }
                a(p, q) = a(q, p) = 0.0;
                for (std::size_t k = 0; k < n; ++k) {
                    const double vkp = v(k, p), vkq = v(k, q);
                    v(k, p) = c * vkp - s * vkq;
                    v(k, q) = s * vkp + c * vkq;
                }
            }
        }
    }

    std::vector<std::size_t> order(n);
    std::iota(order.begin(), order.end(), 0);
    std::stable_sort(order.begin(), order.end(), [&](std::size_t i, std::size_t j) { return a(i, i) > a(j, j); });
    SymmetricEigen out;
    out.sweeps = sweeps;
    out.vectors = Tensor(n, n);
    for (std::size_t k = 0; k < n; ++k) {
        out.values.push_back(a(order[k], order[k]));
        for (std::size_t r = 0; r < n; ++r) out.vectors(r, k) = v(r, order[k]);
    }
    return out;
}

ReducerModel fit_pca(const Tensor& data, const ReducerSpec& spec) {
    spec.validate(data.cols());
    const std::size_t n = data.rows(), d = data.cols(), L = spec.latent_dim;
    if (n < L) throw ConfigError("pca needs at least latent_dim vectors");

    Tensor mean(1, d);
    for (std::size_t r = 0; r < n; ++r)
        for (std::size_t c = 0; c < d; ++c) mean[c] += data(r, c);
    for (auto& m : mean.data()) m /= static_cast<double>(n);

    const SymmetricEigen eig = jacobi_eigen(covariance(data));
    const double top = std::max(eig.values.empty() ? 0.0 : eig.values[0], 0.0);
    std::size_t rank = 0;
    for (double ev : eig.values)
        if (ev > 1e-10 * top && ev > 0.0) ++rank;

    ReducerModel model;
    model.spec = spec;
    model.input_dim = d;
    model.degenerate = rank < L;
    if (model.degenerate)
        std::cerr << "warning: covariance rank " << rank << " is below latent dimension " << L
                  << "; padding with orthonormal directions\n";

    // Jacobi eigenvectors are orthonormal, so trailing ones serve as the padding.
    Tensor components(L, d);
    Tensor eigenvalues(1, L);
    for (std::size_t k = 0; k < L; ++k) {
        std::size_t arg = 0;
        for (std::size_t r = 1; r < d; ++r)
            if (std::abs(eig.vectors(r, k)) > std::abs(eig.vectors(arg, k))) arg = r;
        const double sign = eig.vectors(arg, k) < 0.0 ? -1.0 : 1.0;
        for (std::size_t r = 0; r < d; ++r) components(k, r) = sign * eig.vectors(r, k);
        eigenvalues[k] = eig.values[k];
    }
    model.params = {{"mean", std::move(mean)}, {"components", std::move(components)}, {"eigenvalues", std::move(eigenvalues)}};
    return model;
}

}  // namespace geoglove
