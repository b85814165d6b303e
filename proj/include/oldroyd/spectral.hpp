#pragma once

#include <cmath>
#include <stdexcept>

#include "oldroyd/field.hpp"
#include "oldroyd/transform.hpp"

namespace oldroyd {

inline constexpr complex imag_unit{0.0, 1.0};

/// Leray projection P = I - k k^T / |k|^2 applied modewise; the mean mode is
/// removed, so the result lies in the zero-mean divergence-free space.
inline SpectralVectorField leray_project(const SpectralVectorField& u) {
    SpectralVectorField out(u.grid());
    for_each_mode(u.grid(), [&](int k1, int k2, std::size_t m) {
        if (k1 == 0 && k2 == 0) return;
        const double kk = static_cast<double>(k1 * k1 + k2 * k2);
        const complex kdotu = static_cast<double>(k1) * u.at(0, m) + static_cast<double>(k2) * u.at(1, m);
        out.at(0, m) = u.at(0, m) - static_cast<double>(k1) * kdotu / kk;
        out.at(1, m) = u.at(1, m) - static_cast<double>(k2) * kdotu / kk;
    });
    return out;
}

/// max_k |k . u(k)|
inline double divergence_residual(const SpectralVectorField& u) {
    double r = 0.0;
    for_each_mode(u.grid(), [&](int k1, int k2, std::size_t m) {
        r = std::max(r, std::abs(static_cast<double>(k1) * u.at(0, m) + static_cast<double>(k2) * u.at(1, m)));
    });
    return r;
}

/// Full gradient, entry (i, j) = d_j v_i.
inline GradientField full_grad(const SpectralVectorField& v) {
    GradientField g(v.grid());
    for_each_mode(v.grid(), [&](int k1, int k2, std::size_t m) {
        const double k[2] = {static_cast<double>(k1), static_cast<double>(k2)};
        for (std::size_t i = 0; i < 2; ++i) {
            for (std::size_t j = 0; j < 2; ++j) g.at(2 * i + j, m) = imag_unit * k[j] * v.at(i, m);
        }
    });
    return g;
}

/// Gradient of every stored entry of a symmetric tensor.
inline TensorGradientField full_grad_tensor(const SpectralTensorField& t) {
    TensorGradientField g(t.grid());
    for_each_mode(t.grid(), [&](int k1, int k2, std::size_t m) {
        for (std::size_t c = 0; c < 3; ++c) {
            g.at(2 * c, m) = imag_unit * static_cast<double>(k1) * t.at(c, m);
            g.at(2 * c + 1, m) = imag_unit * static_cast<double>(k2) * t.at(c, m);
        }
    });
    return g;
}

/// Symmetric part of the velocity gradient, D_ij = (d_j v_i + d_i v_j) / 2.
inline SpectralTensorField sym_grad(const SpectralVectorField& v) {
    SpectralTensorField d(v.grid());
    for_each_mode(v.grid(), [&](int k1, int k2, std::size_t m) {
        const double kx = k1, ky = k2;
        const complex v1 = v.at(0, m), v2 = v.at(1, m);
        d.at(sym::xx, m) = imag_unit * kx * v1;
        d.at(sym::xy, m) = 0.5 * imag_unit * (ky * v1 + kx * v2);
        d.at(sym::yy, m) = imag_unit * ky * v2;
    });
    return d;
}

/// Antisymmetric part of the velocity gradient, stored as w_12 = (d_2 v_1 - d_1 v_2) / 2.
inline SpinField antisym_grad(const SpectralVectorField& v) {
    SpinField w(v.grid());
    for_each_mode(v.grid(), [&](int k1, int k2, std::size_t m) {
        w.at(0, m) = 0.5 * imag_unit * (static_cast<double>(k2) * v.at(0, m) - static_cast<double>(k1) * v.at(1, m));
    });
    return w;
}

/// Row divergence (div T)_i = sum_j d_j T_ij of a symmetric tensor.
inline SpectralVectorField divergence(const SpectralTensorField& t) {
    SpectralVectorField out(t.grid());
    for_each_mode(t.grid(), [&](int k1, int k2, std::size_t m) {
        const double kx = k1, ky = k2;
        out.at(0, m) = imag_unit * (kx * t.at(sym::xx, m) + ky * t.at(sym::xy, m));
        out.at(1, m) = imag_unit * (kx * t.at(sym::xy, m) + ky * t.at(sym::yy, m));
    });
    return out;
}

inline SpectralVectorField gradient(const ScalarField& s) {
    SpectralVectorField out(s.grid());
    for_each_mode(s.grid(), [&](int k1, int k2, std::size_t m) {
        out.at(0, m) = imag_unit * static_cast<double>(k1) * s.at(0, m);
        out.at(1, m) = imag_unit * static_cast<double>(k2) * s.at(0, m);
    });
    return out;
}

/// L2 inner product by Parseval, (2pi)^2 sum_k a(k) : conj(b(k)).
template <class Kind>
double inner_product_L2(const SpectralField<Kind>& a, const SpectralField<Kind>& b) {
    require_same_grid(a.grid(), b.grid(), "inner_product_L2");
    complex sum{};
    double scale = 0.0;
    for (std::size_t c = 0; c < Kind::components; ++c) {
        const double w = Kind::weights[c];
        const auto pa = a.component(c);
        const auto pb = b.component(c);
        for (std::size_t m = 0; m < pa.size(); ++m) {
            sum += w * pa[m] * std::conj(pb[m]);
            scale += w * std::abs(pa[m]) * std::abs(pb[m]);
        }
    }
    if (std::abs(sum.imag()) > 1e-12 * std::max(scale, 1.0)) {
        throw std::domain_error("inner_product_L2: imaginary part too large, inputs are not Hermitian");
    }
    return GridSpec::domain_measure() * sum.real();
}

template <class Kind>
double norm_L2(const SpectralField<Kind>& a) {
    return std::sqrt(std::max(0.0, inner_product_L2(a, a)));
}

/// Pointwise Frobenius magnitude squared of grid values at point `i`.
template <class Kind>
double pointwise_norm2(const GridValues<Kind>& v, std::size_t i) {
    double s = 0.0;
    for (std::size_t c = 0; c < Kind::components; ++c) s += Kind::weights[c] * v.comp[c][i] * v.comp[c][i];
    return s;
}

/// Trapezoidal quadrature of a scalar integrand sampled on the grid.
inline double integrate(const GridSpec& grid, std::span<const double> values) {
    double s = 0.0;
    for (double v : values) s += v;
    return s * grid.cell_area();
}

/// (sum_x |u(x)|^p (2pi/N)^2)^(1/p) with |.| the Frobenius norm.
template <class Kind>
double lp_norm(const GridValues<Kind>& values, double p_exp) {
    if (!(p_exp >= 1.0)) throw std::invalid_argument("lp_norm: exponent must be >= 1");
    double s = 0.0;
    for (std::size_t i = 0; i < values.grid.point_count(); ++i) {
        s += std::pow(pointwise_norm2(values, i), 0.5 * p_exp);
    }
    return std::pow(s * values.grid.cell_area(), 1.0 / p_exp);
}

template <class Kind>
double lp_norm(const SpectralField<Kind>& f, double p_exp) {
    if (!(p_exp >= 1.0)) throw std::invalid_argument("lp_norm: exponent must be >= 1");
    return lp_norm(to_physical(f), p_exp);
}

/// ||u||_p^p, avoiding the final root.
template <class Kind>
double lp_norm_pow(const GridValues<Kind>& values, double p_exp) {
    double s = 0.0;
    for (std::size_t i = 0; i < values.grid.point_count(); ++i) {
        s += std::pow(pointwise_norm2(values, i), 0.5 * p_exp);
    }
    return s * values.grid.cell_area();
}

} // namespace oldroyd
