#pragma once

#include <array>
#include <cstddef>
#include <stdexcept>

namespace stirlab {

/// Uniform collocation grid on the periodic unit box [0,1)^d with modes
/// e^{2*pi*i k.x}. Real fields are stored in row-major order with x1
/// fastest; spectral data uses the half-complex layout with k1 in
/// [0, n/2] and the remaining wavenumbers wrapped to (-n/2, n/2].
struct Grid {
    int dim = 2;  // 2 or 3
    int n = 64;   // points per dimension, power of two, >= 8

    static Grid make(int dim, int n) {
        if (dim != 2 && dim != 3)
            throw std::invalid_argument("Grid: dim must be 2 or 3");
        if (n < 8 || (n & (n - 1)) != 0)
            throw std::invalid_argument("Grid: n must be a power of two >= 8");
        return Grid{dim, n};
    }

    double spacing() const { return 1.0 / n; }

    std::size_t points() const {
        std::size_t p = 1;
        for (int i = 0; i < dim; ++i) p *= static_cast<std::size_t>(n);
        return p;
    }

    std::size_t spectral_size() const {
        std::size_t p = static_cast<std::size_t>(n / 2 + 1);
        for (int i = 1; i < dim; ++i) p *= static_cast<std::size_t>(n);
        return p;
    }

    /// 2/3-rule cutoff; modes with any |k_j| > cutoff are discarded after
    /// nonlinear products. For power-of-two n, 3*cutoff < n, which keeps
    /// triple-product quadratures alias-free.
    int dealias_cutoff() const { return n / 3; }

    /// Integer wavevector of a spectral index (k3 = 0 when dim == 2).
    std::array<int, 3> wavevector(std::size_t s) const {
        const int nh = n / 2 + 1;
        int k1 = static_cast<int>(s % nh);
        std::size_t r = s / nh;
        int w2 = static_cast<int>(r % n);
        int k2 = w2 <= n / 2 ? w2 : w2 - n;
        int k3 = 0;
        if (dim == 3) {
            int w3 = static_cast<int>(r / n);
            k3 = w3 <= n / 2 ? w3 : w3 - n;
        }
        return {k1, k2, k3};
    }

    double k_squared(std::size_t s) const {
        auto k = wavevector(s);
        return double(k[0]) * k[0] + double(k[1]) * k[1] + double(k[2]) * k[2];
    }

    /// Parseval weight: interior k1 represents the unstored conjugate too.
    double parseval_weight(std::size_t s) const {
        const int nh = n / 2 + 1;
        int k1 = static_cast<int>(s % nh);
        return (k1 == 0 || k1 == n / 2) ? 1.0 : 2.0;
    }

    bool in_dealias_band(std::size_t s) const {
        auto k = wavevector(s);
        const int kc = dealias_cutoff();
        return std::abs(k[0]) <= kc && std::abs(k[1]) <= kc && std::abs(k[2]) <= kc;
    }

    /// Physical index from per-axis indices (x1 fastest).
    std::size_t phys_index(int i1, int i2, int i3 = 0) const {
        std::size_t p = static_cast<std::size_t>(i3);
        if (dim == 3) p = p * n + i2; else p = static_cast<std::size_t>(i2);
        return p * n + i1;
    }

    bool operator==(const Grid&) const = default;
};

}  // namespace stirlab
