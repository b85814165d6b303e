#pragma once

#include <algorithm>
#include <array>
#include <cmath>
#include <complex>
#include <cstddef>
#include <span>
#include <stdexcept>
#include <vector>

#include "oldroyd/grid.hpp"

namespace oldroyd {

using complex = std::complex<double>;

// Field kinds. `weights` are the multiplicities of each stored component in
// the Frobenius contraction A:B, so that storing only the independent entries
// of a symmetric or antisymmetric tensor still yields the full A:B.

struct ScalarKind {
    static constexpr std::size_t components = 1;
    static constexpr std::array<double, 1> weights{1.0};
};

struct VectorKind {
    static constexpr std::size_t components = 2;
    static constexpr std::array<double, 2> weights{1.0, 1.0};
};

/// Symmetric 2x2 tensor stored as (11, 12, 22).
struct SymTensorKind {
    static constexpr std::size_t components = 3;
    static constexpr std::array<double, 3> weights{1.0, 2.0, 1.0};
};

/// Antisymmetric 2x2 tensor stored as its (1,2) entry.
struct SpinKind {
    static constexpr std::size_t components = 1;
    static constexpr std::array<double, 1> weights{2.0};
};

/// Full 2x2 tensor, component 2*i + j holds entry (i, j).
struct FullTensorKind {
    static constexpr std::size_t components = 4;
    static constexpr std::array<double, 4> weights{1.0, 1.0, 1.0, 1.0};
};

/// Gradient of a symmetric tensor, component 2*c + j holds d_j of stored entry c.
struct SymTensorGradKind {
    static constexpr std::size_t components = 6;
    static constexpr std::array<double, 6> weights{1.0, 1.0, 2.0, 2.0, 1.0, 1.0};
};

namespace sym {
inline constexpr std::size_t xx = 0;
inline constexpr std::size_t xy = 1;
inline constexpr std::size_t yy = 2;
} // namespace sym

/// Truncated Fourier coefficients u(x) = sum_k c(k) exp(i k.x), one plane of
/// (2K+1)^2 coefficients per component, row-major in (k1, k2).
template <class Kind>
class SpectralField {
public:
    using kind = Kind;
    static constexpr std::size_t components = Kind::components;

    SpectralField() = default;
    explicit SpectralField(const GridSpec& grid) : grid_(grid), data_(components * grid.mode_count()) {}

    const GridSpec& grid() const noexcept { return grid_; }
    std::size_t plane_size() const noexcept { return grid_.mode_count(); }

    complex& operator()(std::size_t c, int k1, int k2) { return data_[c * plane_size() + grid_.mode_index(k1, k2)]; }
    const complex& operator()(std::size_t c, int k1, int k2) const {
        return data_[c * plane_size() + grid_.mode_index(k1, k2)];
    }

    complex& at(std::size_t c, std::size_t mode) { return data_[c * plane_size() + mode]; }
    const complex& at(std::size_t c, std::size_t mode) const { return data_[c * plane_size() + mode]; }

    std::span<complex> component(std::size_t c) { return {data_.data() + c * plane_size(), plane_size()}; }
    std::span<const complex> component(std::size_t c) const {
        return {data_.data() + c * plane_size(), plane_size()};
    }

    std::vector<complex>& data() noexcept { return data_; }
    const std::vector<complex>& data() const noexcept { return data_; }

    SpectralField& operator+=(const SpectralField& o) {
        require_same_grid(grid_, o.grid_, "field +=");
        for (std::size_t i = 0; i < data_.size(); ++i) data_[i] += o.data_[i];
        return *this;
    }
    SpectralField& operator-=(const SpectralField& o) {
        require_same_grid(grid_, o.grid_, "field -=");
        for (std::size_t i = 0; i < data_.size(); ++i) data_[i] -= o.data_[i];
        return *this;
    }
    SpectralField& operator*=(double s) {
        for (auto& c : data_) c *= s;
        return *this;
    }

    /// this += s * o
    void axpy(double s, const SpectralField& o) {
        require_same_grid(grid_, o.grid_, "field axpy");
        for (std::size_t i = 0; i < data_.size(); ++i) data_[i] += s * o.data_[i];
    }

    friend SpectralField operator+(SpectralField a, const SpectralField& b) { return a += b; }
    friend SpectralField operator-(SpectralField a, const SpectralField& b) { return a -= b; }
    friend SpectralField operator*(double s, SpectralField a) { return a *= s; }

    friend bool operator==(const SpectralField&, const SpectralField&) = default;

private:
    GridSpec grid_;
    std::vector<complex> data_;
};

using ScalarField = SpectralField<ScalarKind>;
using SpectralVectorField = SpectralField<VectorKind>;
using SpectralTensorField = SpectralField<SymTensorKind>;
using SpinField = SpectralField<SpinKind>;
using GradientField = SpectralField<FullTensorKind>;
using TensorGradientField = SpectralField<SymTensorGradKind>;

/// Real values on the collocation grid, point (i, j) at index i*N + j with
/// x = 2pi i/N, y = 2pi j/N.
template <class Kind>
struct GridValues {
    using kind = Kind;
    static constexpr std::size_t components = Kind::components;

    GridValues() = default;
    explicit GridValues(const GridSpec& g) : grid(g) {
        for (auto& c : comp) c.assign(g.point_count(), 0.0);
    }

    GridSpec grid;
    std::array<std::vector<double>, Kind::components> comp;
};

/// Largest |coefficient| over all components.
template <class Kind>
double max_abs(const SpectralField<Kind>& f) {
    double m = 0.0;
    for (const auto& c : f.data()) m = std::max(m, std::abs(c));
    return m;
}

/// Largest deviation from c(-k) = conj(c(k)).
template <class Kind>
double hermitian_residual(const SpectralField<Kind>& f) {
    double r = 0.0;
    const int K = f.grid().cutoff();
    for (std::size_t c = 0; c < Kind::components; ++c) {
        for (int k1 = -K; k1 <= K; ++k1) {
            for (int k2 = -K; k2 <= K; ++k2) {
                r = std::max(r, std::abs(f(c, k1, k2) - std::conj(f(c, -k1, -k2))));
            }
        }
    }
    return r;
}

/// Replace every pair by its Hermitian average, making the field exactly real.
template <class Kind>
void enforce_hermitian(SpectralField<Kind>& f) {
    const int K = f.grid().cutoff();
    for (std::size_t c = 0; c < Kind::components; ++c) {
        for (int k1 = -K; k1 <= K; ++k1) {
            for (int k2 = -K; k2 <= K; ++k2) {
                if (k1 > 0 || (k1 == 0 && k2 > 0)) {
                    const complex avg = 0.5 * (f(c, k1, k2) + std::conj(f(c, -k1, -k2)));
                    f(c, k1, k2) = avg;
                    f(c, -k1, -k2) = std::conj(avg);
                }
            }
        }
        f(c, 0, 0) = {f(c, 0, 0).real(), 0.0};
    }
}

template <class Kind>
void zero_mean(SpectralField<Kind>& f) {
    for (std::size_t c = 0; c < Kind::components; ++c) f(c, 0, 0) = 0.0;
}

/// Coefficients of `fine` on the mode square of `coarse` (fine must retain at
/// least as many modes).
template <class Kind>
SpectralField<Kind> restrict_to(const SpectralField<Kind>& fine, const GridSpec& coarse) {
    if (coarse.cutoff() > fine.grid().cutoff()) {
        throw std::invalid_argument("restrict_to: target grid retains more modes than the source");
    }
    SpectralField<Kind> out(coarse);
    const int K = coarse.cutoff();
    for (std::size_t c = 0; c < Kind::components; ++c) {
        for (int k1 = -K; k1 <= K; ++k1) {
            for (int k2 = -K; k2 <= K; ++k2) out(c, k1, k2) = fine(c, k1, k2);
        }
    }
    return out;
}

} // namespace oldroyd
