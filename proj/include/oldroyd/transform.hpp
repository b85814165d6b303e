#pragma once

#include <fftw3.h>

#include <map>
#include <memory>
#include <mutex>
#include <span>
#include <vector>

#include "oldroyd/field.hpp"

namespace oldroyd {

namespace detail {

/// FFTW plans for one grid size. Plans are created once under a lock; the
/// new-array execute calls used afterwards are thread safe.
class FftPlans {
public:
    explicit FftPlans(int n) : n_(n) {
        std::vector<double> real(static_cast<std::size_t>(n) * n);
        std::vector<complex> half(static_cast<std::size_t>(n) * (n / 2 + 1));
        auto* c = reinterpret_cast<fftw_complex*>(half.data());
        const unsigned flags = FFTW_ESTIMATE | FFTW_UNALIGNED;
        forward_ = fftw_plan_dft_r2c_2d(n, n, real.data(), c, flags);
        backward_ = fftw_plan_dft_c2r_2d(n, n, c, real.data(), flags);
    }
    FftPlans(const FftPlans&) = delete;
    FftPlans& operator=(const FftPlans&) = delete;
    ~FftPlans() {
        fftw_destroy_plan(forward_);
        fftw_destroy_plan(backward_);
    }

    // Unnormalised: out(k) = sum_x in(x) exp(-i k.x).
    void forward(std::vector<double>& in, std::vector<complex>& out) const {
        fftw_execute_dft_r2c(forward_, in.data(), reinterpret_cast<fftw_complex*>(out.data()));
    }
    // out(x) = sum_k in(k) exp(i k.x); destroys `in`.
    void backward(std::vector<complex>& in, std::vector<double>& out) const {
        fftw_execute_dft_c2r(backward_, reinterpret_cast<fftw_complex*>(in.data()), out.data());
    }

    int size() const noexcept { return n_; }

private:
    int n_;
    fftw_plan forward_ = nullptr;
    fftw_plan backward_ = nullptr;
};

inline const FftPlans& plans_for(int n) {
    static std::mutex mutex;
    static std::map<int, std::unique_ptr<FftPlans>> cache;
    std::lock_guard lock(mutex);
    auto& slot = cache[n];
    if (!slot) slot = std::make_unique<FftPlans>(n);
    return *slot;
}

inline std::size_t wrap(int k, int n) { return static_cast<std::size_t>((k % n + n) % n); }

} // namespace detail

/// Evaluate one component of retained coefficients on the collocation grid.
inline std::vector<double> to_physical_component(const GridSpec& grid, std::span<const complex> coeffs) {
    const int n = grid.points();
    const int K = grid.cutoff();
    const std::size_t half = static_cast<std::size_t>(n / 2 + 1);
    std::vector<complex> buf(static_cast<std::size_t>(n) * half, complex{});
    for (int k1 = -K; k1 <= K; ++k1) {
        for (int k2 = 0; k2 <= K; ++k2) {
            buf[detail::wrap(k1, n) * half + static_cast<std::size_t>(k2)] = coeffs[grid.mode_index(k1, k2)];
        }
    }
    std::vector<double> out(grid.point_count());
    detail::plans_for(n).backward(buf, out);
    return out;
}

/// Fourier coefficients of grid values, truncated to the retained square.
inline std::vector<complex> to_spectral_component(const GridSpec& grid, std::span<const double> values) {
    if (values.size() != grid.point_count()) {
        throw std::invalid_argument("to_spectral: value count does not match grid");
    }
    const int n = grid.points();
    const int K = grid.cutoff();
    const std::size_t half = static_cast<std::size_t>(n / 2 + 1);
    std::vector<double> in(values.begin(), values.end());
    std::vector<complex> buf(static_cast<std::size_t>(n) * half);
    detail::plans_for(n).forward(in, buf);
    const double scale = 1.0 / static_cast<double>(grid.point_count());
    std::vector<complex> out(grid.mode_count());
    for (int k1 = -K; k1 <= K; ++k1) {
        for (int k2 = -K; k2 <= K; ++k2) {
            complex c = k2 >= 0 ? buf[detail::wrap(k1, n) * half + static_cast<std::size_t>(k2)]
                                : std::conj(buf[detail::wrap(-k1, n) * half + static_cast<std::size_t>(-k2)]);
            out[grid.mode_index(k1, k2)] = c * scale;
        }
    }
    return out;
}

template <class Kind>
GridValues<Kind> to_physical(const SpectralField<Kind>& f) {
    GridValues<Kind> out;
    out.grid = f.grid();
    for (std::size_t c = 0; c < Kind::components; ++c) out.comp[c] = to_physical_component(f.grid(), f.component(c));
    return out;
}

template <class Kind>
SpectralField<Kind> to_spectral(const GridValues<Kind>& values) {
    SpectralField<Kind> out(values.grid);
    for (std::size_t c = 0; c < Kind::components; ++c) {
        if (values.comp[c].size() != values.grid.point_count()) {
            throw std::invalid_argument("to_spectral: component shape does not match grid");
        }
        auto coeffs = to_spectral_component(values.grid, values.comp[c]);
        std::copy(coeffs.begin(), coeffs.end(), out.component(c).begin());
    }
    return out;
}

} // namespace oldroyd
