#pragma once

#include <cmath>
#include <cstdint>

#include "oldroyd/config.hpp"
#include "oldroyd/galerkin.hpp"
#include "oldroyd/rng.hpp"

namespace oldroyd {

/// Random field with independent Gaussian coefficients of standard deviation
/// amplitude (1 + |k|^2)^(-slope/2) per real and imaginary part. Each
/// coefficient is keyed by its wavevector, so refining the grid only adds modes.
template <class Kind>
SpectralField<Kind> random_smooth(const GridSpec& grid, const RandomSpec& spec, std::uint64_t stream) {
    const CounterRng rng(spec.seed, stream);
    SpectralField<Kind> f(grid);
    const int K = grid.cutoff();
    for (int k1 = 0; k1 <= K; ++k1) {
        for (int k2 = -K; k2 <= K; ++k2) {
            if (k1 == 0 && k2 <= 0) continue;
            const double sd = spec.amplitude * std::pow(1.0 + k1 * k1 + k2 * k2, -0.5 * spec.slope) / std::sqrt(2.0);
            for (std::size_t c = 0; c < Kind::components; ++c) {
                const int ci = static_cast<int>(c);
                const complex z{sd * rng.normal(CounterRng::mode_key(k1, k2, 2 * ci)),
                                sd * rng.normal(CounterRng::mode_key(k1, k2, 2 * ci + 1))};
                f(c, k1, k2) = z;
                f(c, -k1, -k2) = std::conj(z);
            }
        }
    }
    return f;
}

/// v = (sin x cos y, -cos x sin y), sampled on the grid and truncated.
inline SpectralVectorField taylor_green(const GridSpec& grid) {
    GridValues<VectorKind> g(grid);
    const int n = grid.points();
    for (int i = 0; i < n; ++i) {
        for (int j = 0; j < n; ++j) {
            const double x = grid.coordinate(i), y = grid.coordinate(j);
            g.comp[0][i * n + j] = std::sin(x) * std::cos(y);
            g.comp[1][i * n + j] = -std::cos(x) * std::sin(y);
        }
    }
    auto v = leray_project(to_spectral(g));
    enforce_hermitian(v);
    return v;
}

/// tau = s cos(k.x) I.
inline SpectralTensorField scaled_identity_mode(const GridSpec& grid, int kx, int ky, double scale) {
    if (!grid.retains(kx, ky) || (kx == 0 && ky == 0)) {
        throw std::invalid_argument("scaled_identity_mode: mode must be retained and nonzero");
    }
    SpectralTensorField t(grid);
    for (std::size_t c : {sym::xx, sym::yy}) {
        t(c, kx, ky) = 0.5 * scale;
        t(c, -kx, -ky) = 0.5 * scale;
    }
    return t;
}

inline State build_initial(const SimulationConfig& cfg) {
    const GridSpec grid = cfg.grid();
    State s{SpectralVectorField(grid), SpectralTensorField(grid), 0.0};
    switch (cfg.initial.velocity) {
        case VelocityKind::zero: break;
        case VelocityKind::taylor_green: s.v = taylor_green(grid); break;
        case VelocityKind::random_smooth:
            s.v = leray_project(random_smooth<VectorKind>(grid, cfg.initial.velocity_random, 1));
            break;
    }
    switch (cfg.initial.stress) {
        case StressKind::zero: break;
        case StressKind::random_smooth:
            s.tau = random_smooth<SymTensorKind>(grid, cfg.initial.stress_random, 2);
            break;
        case StressKind::scaled_identity_mode:
            s.tau = scaled_identity_mode(grid, cfg.initial.mode_kx, cfg.initial.mode_ky,
                                         cfg.initial.stress_random.amplitude);
            break;
    }
    zero_mean(s.tau);
    return s;
}

} // namespace oldroyd
