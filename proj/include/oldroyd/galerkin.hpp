#pragma once

#include <cmath>
#include <stdexcept>
#include <string>

#include "oldroyd/constitutive.hpp"
#include "oldroyd/spectral.hpp"

namespace oldroyd {

/// Galerkin state: divergence-free zero-mean velocity and symmetric zero-mean
/// stress, both truncated to the retained mode square.
struct State {
    SpectralVectorField v;
    SpectralTensorField tau;
    double t = 0.0;

    const GridSpec& grid() const noexcept { return v.grid(); }
    friend bool operator==(const State&, const State&) = default;
};

/// Raised when a right-hand side or the energy leaves the finite range.
class BlowUp : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

inline Mat2 sym_at(const GridValues<SymTensorKind>& t, std::size_t i) {
    return Mat2::symmetric(t.comp[sym::xx][i], t.comp[sym::xy][i], t.comp[sym::yy][i]);
}

inline void store_sym(GridValues<SymTensorKind>& t, std::size_t i, const Mat2& m) {
    t.comp[sym::xx][i] = m.xx;
    t.comp[sym::xy][i] = 0.5 * (m.xy + m.yx);
    t.comp[sym::yy][i] = m.yy;
}

/// Velocity quantities on the collocation grid shared by all right-hand sides.
struct Kinematics {
    GridValues<VectorKind> v;
    GridValues<FullTensorKind> grad_v;  // (i, j) = d_j v_i
    GridValues<SymTensorKind> D;
    GridValues<SpinKind> w;              // w_12

    explicit Kinematics(const SpectralVectorField& vel)
        : v(to_physical(vel)), grad_v(to_physical(full_grad(vel))), D(to_physical(sym_grad(vel))),
          w(to_physical(antisym_grad(vel))) {}

    Mat2 spin_at(std::size_t i) const {
        const double w12 = w.comp[0][i];
        return {0.0, w12, -w12, 0.0};
    }
};

inline void require_finite(double x, const char* where) {
    if (!std::isfinite(x)) throw BlowUp(std::string("non-finite value in ") + where);
}

/// f(D(v)) on the grid.
inline GridValues<SymTensorKind> viscous_stress(const Kinematics& kin, const ConstitutiveModel& model) {
    GridValues<SymTensorKind> out(kin.D.grid);
    for (std::size_t i = 0; i < kin.D.grid.point_count(); ++i) {
        const Mat2 f = f_of_D(sym_at(kin.D, i), model);
        require_finite(f.xx + f.xy + f.yy, "f(D(v))");
        store_sym(out, i, f);
    }
    return out;
}

/// P[-v.grad v + div f(D(v)) + div tau]
inline SpectralVectorField momentum_rhs(const Kinematics& kin, const SpectralTensorField& tau,
                                        const ConstitutiveModel& model) {
    const GridSpec& grid = tau.grid();
    GridValues<VectorKind> conv(grid);
    for (std::size_t i = 0; i < grid.point_count(); ++i) {
        const double v1 = kin.v.comp[0][i], v2 = kin.v.comp[1][i];
        conv.comp[0][i] = -(v1 * kin.grad_v.comp[0][i] + v2 * kin.grad_v.comp[1][i]);
        conv.comp[1][i] = -(v1 * kin.grad_v.comp[2][i] + v2 * kin.grad_v.comp[3][i]);
    }
    SpectralTensorField stress = to_spectral(viscous_stress(kin, model));
    stress += tau;
    SpectralVectorField rhs = to_spectral(conv);
    rhs += divergence(stress);
    return leray_project(rhs);
}

inline SpectralVectorField momentum_rhs(const State& s, const ConstitutiveModel& model, const PhysicalParams&) {
    return momentum_rhs(Kinematics(s.v), s.tau, model);
}

/// Right-hand side of the objective transport equation for a stress-like field X:
///   -v.grad X - a X - (X w - w X) [variant S only] + source,
/// with source g(D(v)) (bD for S2) when `with_source`, and the mean mode removed.
inline SpectralTensorField transported_rhs(const Kinematics& kin, const SpectralTensorField& X,
                                           const ConstitutiveModel& model, const PhysicalParams& params,
                                           bool with_source) {
    const GridSpec& grid = X.grid();
    const auto Xp = to_physical(X);
    const auto dX = to_physical(full_grad_tensor(X));
    GridValues<SymTensorKind> acc(grid);
    const bool rotate = model.has_rotation();
    for (std::size_t i = 0; i < grid.point_count(); ++i) {
        const double v1 = kin.v.comp[0][i], v2 = kin.v.comp[1][i];
        Mat2 r = Mat2::symmetric(-(v1 * dX.comp[0][i] + v2 * dX.comp[1][i]),
                                 -(v1 * dX.comp[2][i] + v2 * dX.comp[3][i]),
                                 -(v1 * dX.comp[4][i] + v2 * dX.comp[5][i]));
        if (rotate) {
            const Mat2 x = sym_at(Xp, i);
            const Mat2 w = kin.spin_at(i);
            r = r - (matmul(x, w) - matmul(w, x));
        }
        if (with_source) r = r + g_of_D(sym_at(kin.D, i), model, params);
        require_finite(r.xx + r.xy + r.yy, "stress right-hand side");
        store_sym(acc, i, r);
    }
    SpectralTensorField rhs = to_spectral(acc);
    rhs.axpy(-params.a, X);
    zero_mean(rhs);
    return rhs;
}

inline SpectralTensorField stress_rhs(const Kinematics& kin, const SpectralTensorField& tau,
                                      const ConstitutiveModel& model, const PhysicalParams& params) {
    return transported_rhs(kin, tau, model, params, true);
}

inline SpectralTensorField stress_rhs(const State& s, const ConstitutiveModel& model, const PhysicalParams& params) {
    return stress_rhs(Kinematics(s.v), s.tau, model, params);
}

/// Pressure from  Delta p = div div (f(D(v)) - v (x) v + tau), zero mean:
///   p(k) = (k (x) k : F(k)) / |k|^2.
inline ScalarField reconstruct_pressure(const State& s, const ConstitutiveModel& model) {
    const GridSpec& grid = s.grid();
    const Kinematics kin(s.v);
    auto F = viscous_stress(kin, model);
    for (std::size_t i = 0; i < grid.point_count(); ++i) {
        const double v1 = kin.v.comp[0][i], v2 = kin.v.comp[1][i];
        F.comp[sym::xx][i] -= v1 * v1;
        F.comp[sym::xy][i] -= v1 * v2;
        F.comp[sym::yy][i] -= v2 * v2;
    }
    SpectralTensorField Fh = to_spectral(F);
    Fh += s.tau;
    ScalarField p(grid);
    for_each_mode(grid, [&](int k1, int k2, std::size_t m) {
        if (k1 == 0 && k2 == 0) return;
        const double kx = k1, ky = k2;
        const complex kFk = kx * kx * Fh.at(sym::xx, m) + 2.0 * kx * ky * Fh.at(sym::xy, m) + ky * ky * Fh.at(sym::yy, m);
        p.at(0, m) = kFk / (kx * kx + ky * ky);
    });
    return p;
}

} // namespace oldroyd
